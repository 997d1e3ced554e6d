const sleep = (ms) => new Promise((resolve) => setTimeout(resolve, ms));

async function retryFetch(url, options = {}, attempts = 3) {
  let lastError;
  for (let i = 0; i < attempts; i++) {
    try {
      const res = await fetch(url, options);
      if (res.status >= 500) {
        throw new Error(`server error ${res.status}`);
      }
      return res;
    } catch (err) {
      lastError = err;
      await sleep(200 * 2 ** i);
    }
  }
  throw lastError;
}

module.exports = { retryFetch, sleep };
