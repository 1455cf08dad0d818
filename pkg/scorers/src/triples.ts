/**
 * Open-information triple extraction serialized to the harness triple file
 * format. The extractor is a deterministic subject-verb-object pattern pass:
 * per sentence, find the first verb-like token, take the content tokens
 * before it as the subject, the verb group as the relation, and the content
 * tokens after it as the object. Sentences without all three parts are
 * skipped. A full OpenIE system can replace this behind the same signature.
 */

import { splitSentences, tokenize } from "./text.js";
import type { TripleLine } from "./io.js";

export interface Triple {
  subject: string;
  relation: string;
  object: string;
}

const COMMON_VERBS = new Set(
  (
    "is are was were be been has have had says said say made make makes went go goes did do does " +
    "founded created built launched started runs ran run wrote write discusses discussed discuss " +
    "covers covered cover hosts hosted host talks talked talk interviews interviewed interview " +
    "explains explained explain describes described describe presents presented present shares " +
    "shared share loves loved love likes liked like sees saw see knows knew know tells told tell " +
    "asks asked ask gives gave give takes took take finds found find uses used use wants wanted want"
  ).split(/\s+/),
);

const AUXILIARIES = new Set(["is", "are", "was", "were", "has", "have", "had", "be", "been"]);
const SKIP_IN_ARGS = new Set(["the", "a", "an", "of", "to", "and", "or", "in", "on", "at", "by"]);

function isVerbLike(token: string, position: number): boolean {
  if (COMMON_VERBS.has(token)) return true;
  // morphological fallback: past tense beyond the first token of a sentence
  return position > 0 && token.length > 4 && token.endsWith("ed");
}

function contentArg(tokens: string[]): string {
  const kept = tokens.filter((t) => /[\p{L}\p{N}]/u.test(t) && !SKIP_IN_ARGS.has(t));
  return kept.join(" ");
}

export function extractTriplesFromSentence(sentence: string): Triple | null {
  const tokens = tokenize(sentence);
  for (let i = 0; i < tokens.length; i++) {
    if (!isVerbLike(tokens[i], i)) continue;
    let end = i + 1;
    while (end < tokens.length && AUXILIARIES.has(tokens[i]) && COMMON_VERBS.has(tokens[end])) {
      end += 1; // verb group like "has covered"
    }
    const subject = contentArg(tokens.slice(0, i));
    const relation = tokens.slice(i, end).join(" ");
    const object = contentArg(tokens.slice(end));
    if (subject && relation && object) {
      return { subject, relation, object };
    }
  }
  return null;
}

export function extractTriples(text: string): Triple[] {
  const out: Triple[] = [];
  const seen = new Set<string>();
  for (const sentence of splitSentences(text)) {
    const triple = extractTriplesFromSentence(sentence);
    if (!triple) continue; // extraction failed for this sentence, skip it
    const key = `${triple.subject}|${triple.relation}|${triple.object}`;
    if (!seen.has(key)) {
      seen.add(key);
      out.push(triple);
    }
  }
  return out;
}

export function triplesToLines(
  triples: Triple[],
  episodeId: string,
  source: TripleLine["source"],
  systemId?: string,
): TripleLine[] {
  return triples.map((t) => ({
    episode_id: episodeId,
    source,
    subject: t.subject,
    relation: t.relation,
    object: t.object,
    ...(systemId ? { system_id: systemId } : {}),
  }));
}
