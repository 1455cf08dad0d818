/**
 * Text utilities mirroring the harness tokenizer defaults: lowercase,
 * punctuation split into separate tokens, sentences split on terminal
 * punctuation followed by whitespace.
 */

const TOKEN_RE = /[\p{L}\p{N}_]+(?:'[\p{L}\p{N}_]+)?|[^\p{L}\p{N}_\s]/gu;
const SENTENCE_RE = /(?<=[.!?])\s+/;

export function tokenize(text: string): string[] {
  if (!text) return [];
  const matches = text.toLowerCase().match(TOKEN_RE);
  return matches ? Array.from(matches) : [];
}

export function contentTokens(text: string): string[] {
  return tokenize(text).filter((t) => /[\p{L}\p{N}]/u.test(t));
}

export function splitSentences(text: string): string[] {
  if (!text) return [];
  return text
    .split(SENTENCE_RE)
    .map((s) => s.trim())
    .filter((s) => s.length > 0);
}

function counts(tokens: string[]): Map<string, number> {
  const map = new Map<string, number>();
  for (const tok of tokens) map.set(tok, (map.get(tok) ?? 0) + 1);
  return map;
}

/**
 * Multiset token F1, symmetric; both-empty scores 1 (identical abstention),
 * one-sided empty scores 0. Matches the harness token_f1 contract.
 */
export function tokenF1(a: string[], b: string[]): number {
  if (a.length === 0 && b.length === 0) return 1.0;
  if (a.length === 0 || b.length === 0) return 0.0;
  const ca = counts(a);
  const cb = counts(b);
  let overlap = 0;
  for (const [tok, n] of ca) overlap += Math.min(n, cb.get(tok) ?? 0);
  if (overlap === 0) return 0.0;
  const p = overlap / a.length;
  const r = overlap / b.length;
  return (2 * p * r) / (p + r);
}

/** Longest common subsequence length (rolling two-row DP). */
export function lcsLength(a: string[], b: string[]): number {
  if (a.length === 0 || b.length === 0) return 0;
  const [shorter, longer] = a.length <= b.length ? [a, b] : [b, a];
  let prev = new Int32Array(longer.length + 1);
  let curr = new Int32Array(longer.length + 1);
  for (const tok of shorter) {
    for (let j = 1; j <= longer.length; j++) {
      const diag = prev[j - 1] + (longer[j - 1] === tok ? 1 : 0);
      curr[j] = Math.max(prev[j], diag, curr[j - 1]);
    }
    [prev, curr] = [curr, prev];
  }
  return prev[longer.length];
}

/** ROUGE-L F1 over token sequences (used for weak supervision targets). */
export function rougeLF1(candidate: string[], reference: string[]): number {
  const lcs = lcsLength(candidate, reference);
  if (lcs === 0) return 0.0;
  const p = lcs / candidate.length;
  const r = lcs / reference.length;
  return (2 * p * r) / (p + r);
}

export function mean(values: number[]): number {
  let total = 0;
  for (const v of values) total += v;
  return total / values.length;
}

export function clamp(value: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, value));
}
