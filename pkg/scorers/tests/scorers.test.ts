import { describe, expect, it } from "vitest";

import { entailmentScore, truncatePair } from "../src/entail.js";
import { idfTable, lmScore } from "../src/lm.js";
import { extractNounPhrases, qaScore } from "../src/qa.js";
import { tokenize } from "../src/text.js";
import { extractTriples } from "../src/triples.js";
import { loadCorpus } from "../src/io.js";
import { configFrom } from "../src/types.js";
import { FIXTURE_CORPUS } from "./util.js";

const config = configFrom({});

describe("entailment", () => {
  it("stays within [0, 1] for arbitrary inputs", () => {
    const cases: [string, string][] = [
      ["", ""],
      ["some document text here.", "totally unrelated summary words."],
      ["a b c d e.", "a b c d e."],
      ["not never none no.", "everything is fine."],
    ];
    for (const [doc, summary] of cases) {
      const p = entailmentScore(doc, summary, config);
      expect(p).toBeGreaterThanOrEqual(0);
      expect(p).toBeLessThanOrEqual(1);
    }
  });

  it("scores a verbatim opening sentence above a contradicting rewrite", () => {
    const doc =
      "The festival opened with a violin concert in the village square. Hundreds of visitors came. The weather stayed clear.";
    const verbatim = "The festival opened with a violin concert in the village square.";
    const contradiction =
      "The festival never opened with a violin concert, not in the village square.";
    expect(entailmentScore(doc, verbatim, config)).toBeGreaterThan(
      entailmentScore(doc, contradiction, config),
    );
  });

  it("truncates the document first", () => {
    const doc = Array.from({ length: 100 }, (_, i) => `w${i}`).join(" ");
    const summary = "s0 s1 s2 s3";
    const { document, summary: hyp } = truncatePair(tokenize(doc), tokenize(summary), 10);
    expect(hyp).toHaveLength(4); // summary kept whole
    expect(document).toHaveLength(6); // document gets the remainder
  });

  it("emits distinct scores for 512 vs 4096 word limits on long documents", () => {
    const early = "quartz ribbon saddle temple umbrella violin whistle archive.";
    const late = "signal bridge animal winter series basket editor flight.";
    const doc = Array.from({ length: 700 }, (_, i) => `filler${i}`).join(" ") + ". " + late;
    const shortLimit = configFrom({ entailMaxWords: 512 });
    const longLimit = configFrom({ entailMaxWords: 4096 });
    const pShort = entailmentScore(doc, late, shortLimit);
    const pLong = entailmentScore(doc, late, longLimit);
    expect(pShort).not.toBeCloseTo(pLong, 6);
    expect(pLong).toBeGreaterThan(pShort); // evidence sits past the 512 cut
    void early;
  });
});

describe("qa score", () => {
  it("equals 1.0 when document and summary coincide", () => {
    const text =
      "The museum reopened after a long renovation. Curators added a modern wing with sculpture and photography.";
    const result = qaScore(text, text, config);
    expect(result.defined).toBe(true);
    expect(result.score).toBe(1.0);
    expect(result.nQuestions).toBeGreaterThan(0);
  });

  it("flags summaries with no extractable noun phrases", () => {
    const result = qaScore("Some document content here.", "of the and or to", config);
    expect(result.defined).toBe(false);
  });

  it("stays within [0, 1]", () => {
    const doc = "Coffee prices rose sharply this year. Farmers expect a hard season ahead.";
    const summary = "Rocket silver ticket valley wallet yellow.";
    const result = qaScore(doc, summary, config);
    expect(result.defined).toBe(true);
    expect(result.score).toBeGreaterThanOrEqual(0);
    expect(result.score).toBeLessThanOrEqual(1);
  });

  it("scores consistent summaries above inconsistent ones", () => {
    const doc =
      "The bakery on Mill Street won the regional bread award. Its sourdough uses a century old starter.";
    const consistent = "The bakery on Mill Street won the bread award with its sourdough.";
    const inconsistent = "The bakery on Ocean Avenue lost the pastry contest with its croissant.";
    const good = qaScore(doc, consistent, config);
    const bad = qaScore(doc, inconsistent, config);
    expect(good.score).toBeGreaterThan(bad.score);
  });

  it("caps and deduplicates noun phrases", () => {
    const tokens = tokenize("apple banana cherry apple banana cherry mango papaya lime kiwi");
    const phrases = extractNounPhrases(tokens, 2);
    expect(phrases.length).toBeLessThanOrEqual(2);
    const all = extractNounPhrases(tokens, 50);
    const keys = all.map((p) => p.join(" "));
    expect(new Set(keys).size).toBe(keys.length);
  });
});

describe("lm score", () => {
  const doc =
    "The orchard stretched along the river. Workers picked apples through the cool morning. Crates lined the gravel path by noon.";

  it("is non-positive with uniform weights", () => {
    const result = lmScore(doc, "Workers picked apples through the morning.", "uniform", config);
    expect(result.score).toBeLessThanOrEqual(0);
  });

  it("drops when a repetitive garbage suffix is appended", () => {
    const summary = "Workers picked apples through the morning.";
    const garbage = summary + " xylophone xylophone xylophone xylophone xylophone";
    const clean = lmScore(doc, summary, "uniform", config);
    const noisy = lmScore(doc, garbage, "uniform", config);
    expect(noisy.score).toBeLessThan(clean.score);
  });

  it("supports tfidf weights from a corpus and stays non-positive", () => {
    const corpus = loadCorpus(FIXTURE_CORPUS);
    const idf = idfTable(corpus);
    const episode = corpus.episodes.get("ep000")!;
    const result = lmScore(episode.transcript, episode.creatorDescription, "tfidf", config, idf);
    expect(result.score).toBeLessThanOrEqual(0);
  });

  it("requires an idf table for tfidf weighting", () => {
    expect(() => lmScore(doc, "workers picked apples.", "tfidf", config)).toThrow(/idf/);
  });

  it("reports document truncation", () => {
    const tiny = configFrom({ lmMaxWords: 5 });
    const result = lmScore(doc, "workers picked apples.", "uniform", tiny);
    expect(result.documentTruncated).toBe(true);
  });
});

describe("triple extraction", () => {
  it("finds the classic subject-relation-object", () => {
    const triples = extractTriples("Alice founded Acme.");
    expect(triples).toContainEqual({ subject: "alice", relation: "founded", object: "acme" });
  });

  it("returns nothing for empty text", () => {
    expect(extractTriples("")).toEqual([]);
  });

  it("skips sentences without a detectable pattern", () => {
    expect(extractTriples("Yes. No. Hmm.")).toEqual([]);
  });

  it("deduplicates repeated facts", () => {
    const triples = extractTriples("Alice founded Acme. Alice founded Acme.");
    expect(triples).toHaveLength(1);
  });
});
