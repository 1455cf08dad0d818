/**
 * Deterministic synthetic corpus in the canonical harness layout.
 *
 * Built so the similarity grid carries trainable signal: higher-quality
 * summaries reuse transcript content sentences, low-quality ones are random
 * vocabulary, and grades follow quality. Creator descriptions (system R1)
 * copy the transcript opening but get noisy grades (about a quarter Bad
 * regardless of overlap), which makes a held-out-R1 split genuinely harder
 * than an all-shuffled one.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { Rng } from "./rng.js";

const VOCAB = (
  "ocean travel market music garden doctor window planet coffee signal bridge animal winter " +
  "series basket editor flight memory number puzzle rocket silver ticket valley wallet yellow " +
  "zebra anchor bottle candle dinner engine forest guitar hammer island jacket kitchen ladder " +
  "mirror needle orange pepper quartz ribbon saddle temple umbrella violin whistle archive " +
  "balance cabinet density element fabric gravity harvest insight journey keyboard lantern " +
  "machine nectar outline pattern quality river station tunnel uniform village weather axis"
).split(/\s+/);

function sentence(words: string[]): string {
  return words.join(" ").replace(/^./, (c) => c.toUpperCase()) + ".";
}

function gradeFor(quality: number): "E" | "G" | "F" | "B" {
  if (quality >= 0.75) return "E";
  if (quality >= 0.5) return "G";
  if (quality >= 0.25) return "F";
  return "B";
}

export interface SynthOptions {
  nEpisodes: number;
  nAbstractive: number;
  seed: number;
  transcriptSentences: number;
  summarySentences: number;
}

export const SMOKE_OPTIONS: SynthOptions = {
  // 100 episodes x (R1 + E1 + A1..A3) = 500 records for the reduced smoke runs
  nEpisodes: 100,
  nAbstractive: 3,
  seed: 41,
  transcriptSentences: 14,
  summarySentences: 2,
};

export interface SynthCorpusData {
  episodes: Record<string, string>[];
  records: Record<string, unknown>[];
  systems: { system_id: string; kind: string }[];
}

export function buildSynthCorpus(options: SynthOptions): SynthCorpusData {
  const rng = new Rng(options.seed);
  const systems = [
    { system_id: "R1", kind: "reference" },
    { system_id: "E1", kind: "extractive" },
    ...Array.from({ length: options.nAbstractive }, (_, i) => ({
      system_id: `A${i + 1}`,
      kind: "abstractive",
    })),
  ];
  const episodes: Record<string, string>[] = [];
  const records: Record<string, unknown>[] = [];
  const wordsPerSentence = 7;

  for (let e = 0; e < options.nEpisodes; e++) {
    const episodeId = `ep${String(e).padStart(3, "0")}`;
    const pool = Array.from({ length: 18 }, () => VOCAB[rng.int(VOCAB.length)]);
    const transcriptSentences = Array.from({ length: options.transcriptSentences }, () =>
      sentence(Array.from({ length: wordsPerSentence }, () => pool[rng.int(pool.length)])),
    );
    const description = transcriptSentences.slice(0, options.summarySentences).join(" ");
    episodes.push({
      episode_id: episodeId,
      transcript: transcriptSentences.join(" "),
      creator_description: description,
    });

    // R1: perfect overlap with the transcript, noisy label
    records.push({
      episode_id: episodeId,
      system_id: "R1",
      summary_text: description,
      grade: rng.float() < 0.25 ? "B" : gradeFor(0.55 + 0.45 * rng.float()),
    });

    // E1: a later transcript span, graded fair-ish
    records.push({
      episode_id: episodeId,
      system_id: "E1",
      summary_text: transcriptSentences
        .slice(2, 2 + options.summarySentences)
        .join(" "),
      grade: gradeFor(0.2 + 0.3 * rng.float()),
    });

    for (let a = 1; a <= options.nAbstractive; a++) {
      const base = a / (options.nAbstractive + 1);
      const quality = Math.min(1, Math.max(0, base + rng.uniform(-0.2, 0.2)));
      const nWords = options.summarySentences * wordsPerSentence;
      const fromTranscript = Math.round(quality * nWords);
      const words: string[] = [];
      for (let i = 0; i < nWords; i++) {
        words.push(i < fromTranscript ? pool[rng.int(pool.length)] : VOCAB[rng.int(VOCAB.length)]);
      }
      const summarySentencesOut: string[] = [];
      for (let i = 0; i < words.length; i += wordsPerSentence) {
        summarySentencesOut.push(sentence(words.slice(i, i + wordsPerSentence)));
      }
      records.push({
        episode_id: episodeId,
        system_id: `A${a}`,
        summary_text: summarySentencesOut.join(" "),
        grade: gradeFor(quality),
      });
    }
  }
  return { episodes, records, systems };
}

export function writeCorpusDir(dir: string, data: SynthCorpusData): string {
  mkdirSync(dir, { recursive: true });
  writeFileSync(
    join(dir, "episodes.jsonl"),
    data.episodes.map((e) => JSON.stringify(e)).join("\n") + "\n",
  );
  writeFileSync(
    join(dir, "records.jsonl"),
    data.records.map((r) => JSON.stringify(r)).join("\n") + "\n",
  );
  writeFileSync(join(dir, "systems.json"), JSON.stringify(data.systems, null, 1) + "\n");
  return dir;
}
