export interface Result {
  ok: boolean;
  errors: string[];
}

export function validateEmail(value: string): boolean {
  const at = value.indexOf('@');
  if (at <= 0 || at !== value.lastIndexOf('@')) {
    return false;
  }
  const domain = value.slice(at + 1);
  return domain.includes('.') && !domain.startsWith('.') && !domain.endsWith('.');
}

export function validatePassword(value: string, minLength = 8): Result {
  const errors: string[] = [];
  if (value.length < minLength) {
    errors.push(`must be at least ${minLength} characters`);
  }
  if (!/[A-Z]/.test(value)) {
    errors.push('must contain an uppercase letter');
  }
  if (!/[0-9]/.test(value)) {
    errors.push('must contain a digit');
  }
  return { ok: errors.length === 0, errors };
}
