function parseQuery(search) {
  const out = {};
  const text = search.startsWith('?') ? search.slice(1) : search;
  if (!text) {
    return out;
  }
  for (const part of text.split('&')) {
    const [rawKey, rawValue = ''] = part.split('=');
    const key = decodeURIComponent(rawKey);
    const value = decodeURIComponent(rawValue.replace(/\+/g, ' '));
    if (key in out) {
      out[key] = [].concat(out[key], value);
    } else {
      out[key] = value;
    }
  }
  return out;
}

function buildQuery(params) {
  return Object.keys(params)
    .sort()
    .map((key) => `${encodeURIComponent(key)}=${encodeURIComponent(params[key])}`)
    .join('&');
}

module.exports = { parseQuery, buildQuery };
