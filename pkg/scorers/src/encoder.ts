/**
 * Sentence encoders behind a registry keyed by encoder id.
 *
 * The default "hash-v1" maps every word to a fixed pseudo-random unit vector
 * (seeded by the word itself), sums word vectors with a small bigram
 * component and L2-normalizes. It is deterministic, vocabulary-free and
 * offline; sentences sharing words get high cosine, disjoint sentences sit
 * near zero. A real pretrained encoder drops in by registering another id.
 */

import { Rng } from "./rng.js";
import { contentTokens } from "./text.js";

export interface SentenceEncoder {
  readonly id: string;
  readonly dim: number;
  encode(sentence: string): Float64Array;
}

const DIM = 64;

class HashEncoder implements SentenceEncoder {
  readonly id = "hash-v1";
  readonly dim = DIM;
  private cache = new Map<string, Float64Array>();

  private wordVector(word: string): Float64Array {
    let vec = this.cache.get(word);
    if (!vec) {
      const rng = new Rng(`hash-v1:${word}`);
      vec = new Float64Array(DIM);
      for (let i = 0; i < DIM; i++) vec[i] = rng.gauss();
      let norm = 0;
      for (let i = 0; i < DIM; i++) norm += vec[i] * vec[i];
      norm = Math.sqrt(norm) || 1;
      for (let i = 0; i < DIM; i++) vec[i] /= norm;
      this.cache.set(word, vec);
    }
    return vec;
  }

  encode(sentence: string): Float64Array {
    const tokens = contentTokens(sentence);
    const out = new Float64Array(DIM);
    for (const tok of tokens) {
      const w = this.wordVector(tok);
      for (let i = 0; i < DIM; i++) out[i] += w[i];
    }
    // bigram component keeps word order mildly relevant
    for (let t = 0; t + 1 < tokens.length; t++) {
      const w = this.wordVector(`${tokens[t]}__${tokens[t + 1]}`);
      for (let i = 0; i < DIM; i++) out[i] += 0.25 * w[i];
    }
    let norm = 0;
    for (let i = 0; i < DIM; i++) norm += out[i] * out[i];
    if (norm === 0) {
      // no content tokens: a fixed direction so cosine stays defined
      const w = this.wordVector("__empty__");
      return Float64Array.from(w);
    }
    norm = Math.sqrt(norm);
    for (let i = 0; i < DIM; i++) out[i] /= norm;
    return out;
  }
}

const REGISTRY = new Map<string, () => SentenceEncoder>([["hash-v1", () => new HashEncoder()]]);

export function registerEncoder(id: string, factory: () => SentenceEncoder): void {
  REGISTRY.set(id, factory);
}

export function getEncoder(id: string): SentenceEncoder {
  const factory = REGISTRY.get(id);
  if (!factory) throw new Error(`unknown encoder id: ${id}`);
  return factory();
}

export function cosine(a: Float64Array, b: Float64Array): number {
  let dot = 0;
  let na = 0;
  let nb = 0;
  for (let i = 0; i < a.length; i++) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na === 0 || nb === 0) return 0;
  // clamp away float drift so downstream code can rely on [-1, 1]
  return Math.min(1, Math.max(-1, dot / Math.sqrt(na * nb)));
}
