/**
 * Question-answering consistency score.
 *
 * Noun-phrase candidates are extracted from the summary; each yields one
 * question; the question is answered once conditioned on the document and
 * once conditioned on the summary; the score is the mean token F1 between
 * the paired answers. A summary with no extractable phrases is flagged
 * undefined instead of receiving a number.
 *
 * Default models: "template-v1" question generation (surface template over
 * the phrase) and "span-match-v1" extractive answering (best matching window
 * in the conditioning text). Both are deterministic; trained QG/QA models
 * register under other ids.
 */

import { tokenF1, tokenize } from "./text.js";
import type { ScorerConfig } from "./types.js";

const STOPWORDS = new Set(
  (
    "a an the this that these those is are was were be been being am do does did done has have had " +
    "i you he she it we they me him her us them my your his its our their of in on at by for with " +
    "to from as and or but if then than so not no never very too also just about into over under " +
    "after before while during between out up down off again further once here there when where why " +
    "how all any both each few more most other some such only own same s t can will don should now"
  ).split(/\s+/),
);

export interface QuestionGenerator {
  readonly id: string;
  generate(phrase: string[], summaryTokens: string[]): string;
}

export interface QaModel {
  readonly id: string;
  /** Extract an answer span for the question/phrase from the context; empty = no answer. */
  answer(phrase: string[], question: string, contextTokens: string[]): string[];
}

class TemplateQuestionGenerator implements QuestionGenerator {
  readonly id = "template-v1";

  generate(phrase: string[]): string {
    return `what is said about ${phrase.join(" ")} ?`;
  }
}

class SpanMatchQa implements QaModel {
  readonly id = "span-match-v1";

  answer(phrase: string[], _question: string, contextTokens: string[]): string[] {
    if (phrase.length === 0 || contextTokens.length === 0) return [];
    const width = phrase.length;
    let bestStart = -1;
    let bestHits = 0;
    const phraseSet = new Set(phrase);
    for (let start = 0; start + width <= contextTokens.length; start++) {
      let hits = 0;
      for (let i = 0; i < width; i++) {
        if (contextTokens[start + i] === phrase[i]) hits += 1;
        else if (phraseSet.has(contextTokens[start + i])) hits += 0.5;
      }
      if (hits > bestHits) {
        bestHits = hits;
        bestStart = start;
      }
    }
    if (bestStart < 0 || bestHits < width / 2) return []; // no answer found
    // answer = matched window plus one token of right context
    return contextTokens.slice(bestStart, Math.min(bestStart + width + 1, contextTokens.length));
  }
}

const QG_REGISTRY = new Map<string, () => QuestionGenerator>([
  ["template-v1", () => new TemplateQuestionGenerator()],
]);
const QA_REGISTRY = new Map<string, () => QaModel>([["span-match-v1", () => new SpanMatchQa()]]);

export function registerQuestionGenerator(id: string, factory: () => QuestionGenerator): void {
  QG_REGISTRY.set(id, factory);
}

export function registerQaModel(id: string, factory: () => QaModel): void {
  QA_REGISTRY.set(id, factory);
}

export function getQuestionGenerator(id: string): QuestionGenerator {
  const factory = QG_REGISTRY.get(id);
  if (!factory) throw new Error(`unknown question generator id: ${id}`);
  return factory();
}

export function getQaModel(id: string): QaModel {
  const factory = QA_REGISTRY.get(id);
  if (!factory) throw new Error(`unknown QA model id: ${id}`);
  return factory();
}

/**
 * Maximal runs of content tokens (up to 3 words), deduplicated by surface
 * form, in order of first appearance.
 */
export function extractNounPhrases(summaryTokens: string[], maxPhrases: number): string[][] {
  const phrases: string[][] = [];
  const seen = new Set<string>();
  let run: string[] = [];
  const flush = () => {
    for (let start = 0; start < run.length; start += 3) {
      const phrase = run.slice(start, start + 3);
      const key = phrase.join(" ");
      if (!seen.has(key)) {
        seen.add(key);
        phrases.push(phrase);
      }
    }
    run = [];
  };
  for (const tok of summaryTokens) {
    const isContent = /[\p{L}\p{N}]/u.test(tok) && !STOPWORDS.has(tok);
    if (isContent) run.push(tok);
    else flush();
  }
  flush();
  return phrases.slice(0, maxPhrases);
}

export interface QaScore {
  defined: boolean;
  score: number;
  nQuestions: number;
}

export function qaScore(document: string, summary: string, config: ScorerConfig): QaScore {
  const summaryTokens = tokenize(summary);
  const phrases = extractNounPhrases(summaryTokens, config.maxQuestions);
  if (phrases.length === 0) {
    return { defined: false, score: 0, nQuestions: 0 };
  }
  const qg = getQuestionGenerator(config.questionGenId);
  const qa = getQaModel(config.qaModelId);
  const documentTokens = tokenize(document).slice(0, config.qaMaxWords);
  const summaryContext = summaryTokens.slice(0, config.qaMaxWords);
  let total = 0;
  for (const phrase of phrases) {
    const question = qg.generate(phrase, summaryTokens);
    const fromDocument = qa.answer(phrase, question, documentTokens);
    const fromSummary = qa.answer(phrase, question, summaryContext);
    total += tokenF1(fromDocument, fromSummary);
  }
  return { defined: true, score: total / phrases.length, nQuestions: phrases.length };
}
