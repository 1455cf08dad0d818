/**
 * Entailment scoring: the probability that the document (premise) entails
 * the summary (hypothesis), with the document truncated first whenever the
 * combined input exceeds the model's word limit.
 *
 * The default "lexical-nli-v1" model estimates the entail probability from
 * lexical coverage of the hypothesis by the truncated premise (unigram and
 * bigram) with a negation-mismatch penalty. It is deterministic and offline;
 * an actual NLI classifier registers under another id.
 */

import { contentTokens, tokenize } from "./text.js";
import type { ScorerConfig } from "./types.js";

export interface EntailmentModel {
  readonly id: string;
  entailProbability(premise: string[], hypothesis: string[]): number;
}

const NEGATIONS = new Set(["not", "no", "never", "n't", "none", "neither", "nor", "cannot"]);

class LexicalNli implements EntailmentModel {
  readonly id = "lexical-nli-v1";

  entailProbability(premise: string[], hypothesis: string[]): number {
    const hypContent = hypothesis.filter((t) => /[\p{L}\p{N}]/u.test(t));
    if (hypContent.length === 0) return 0.5; // vacuous hypothesis
    const premiseSet = new Set(premise);
    let covered = 0;
    for (const tok of hypContent) if (premiseSet.has(tok)) covered += 1;
    const unigram = covered / hypContent.length;

    const premiseBigrams = new Set<string>();
    for (let i = 0; i + 1 < premise.length; i++) {
      premiseBigrams.add(`${premise[i]} ${premise[i + 1]}`);
    }
    let bigramHits = 0;
    const nBigrams = Math.max(hypothesis.length - 1, 1);
    for (let i = 0; i + 1 < hypothesis.length; i++) {
      if (premiseBigrams.has(`${hypothesis[i]} ${hypothesis[i + 1]}`)) bigramHits += 1;
    }
    const bigram = bigramHits / nBigrams;

    const negHyp = hypothesis.filter((t) => NEGATIONS.has(t)).length;
    const negPrem = premise.filter((t) => NEGATIONS.has(t)).length;
    const mismatch = Math.min(Math.abs(negHyp - Math.min(negPrem, negHyp)), 3);

    const raw = 0.55 * unigram + 0.45 * bigram - 0.3 * mismatch;
    return Math.min(1, Math.max(0, raw));
  }
}

const REGISTRY = new Map<string, () => EntailmentModel>([
  ["lexical-nli-v1", () => new LexicalNli()],
]);

export function registerEntailmentModel(id: string, factory: () => EntailmentModel): void {
  REGISTRY.set(id, factory);
}

export function getEntailmentModel(id: string): EntailmentModel {
  const factory = REGISTRY.get(id);
  if (!factory) throw new Error(`unknown entailment model id: ${id}`);
  return factory();
}

/**
 * Truncate (document, summary) to a total word budget, document first: the
 * summary keeps up to the full limit and the document gets what remains.
 */
export function truncatePair(
  documentTokens: string[],
  summaryTokens: string[],
  maxWords: number,
): { document: string[]; summary: string[] } {
  const summary = summaryTokens.slice(0, maxWords);
  const docBudget = Math.max(maxWords - summary.length, 0);
  return { document: documentTokens.slice(0, docBudget), summary };
}

export function entailmentScore(document: string, summary: string, config: ScorerConfig): number {
  const model = getEntailmentModel(config.entailmentModelId);
  const { document: doc, summary: hyp } = truncatePair(
    tokenize(document),
    tokenize(summary),
    config.entailMaxWords,
  );
  const prob = model.entailProbability(doc, hyp);
  if (!(prob >= 0 && prob <= 1)) {
    throw new Error(`entailment model ${model.id} returned ${prob}, outside [0, 1]`);
  }
  return prob;
}

export const __testing = { contentTokens };
