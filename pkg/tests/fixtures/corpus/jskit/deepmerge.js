function isObject(value) {
  return value !== null && typeof value === 'object' && !Array.isArray(value);
}

function deepMerge(target, ...sources) {
  for (const source of sources) {
    if (!isObject(source)) {
      continue;
    }
    for (const [key, value] of Object.entries(source)) {
      if (isObject(value) && isObject(target[key])) {
        target[key] = deepMerge({ ...target[key] }, value);
      } else if (Array.isArray(value)) {
        target[key] = value.slice();
      } else {
        target[key] = value;
      }
    }
  }
  return target;
}

module.exports = deepMerge;
