/**
 * Fold-wise training and prediction over split plans.
 *
 * Targets come from the configured target mode: human grades mapped onto the
 * 0..3 scale, or weak supervision where the target is the ROUGE-L F1 of the
 * summary against the creator description. Grids are built once per record
 * and cached across folds.
 */

import { poolGrid, trainOnSamples, type FoldLog, type GridCnn, type Sample } from "./cnn.js";
import { buildSimilarityGrid } from "./grid.js";
import { recordKey } from "./io.js";
import { rougeLF1, tokenize } from "./text.js";
import {
  GRADE_SCORES,
  type Corpus,
  type RecordKey,
  type ScoreFileRecord,
  type ScorerConfig,
  type SplitPlan,
} from "./types.js";

export class GridCache {
  private cache = new Map<string, Float64Array>();

  constructor(
    private corpus: Corpus,
    private config: ScorerConfig,
  ) {}

  pooledInput(key: RecordKey): Float64Array {
    const mapKey = recordKey(key[0], key[1]);
    let input = this.cache.get(mapKey);
    if (!input) {
      const record = this.corpus.records.get(mapKey);
      if (!record) throw new Error(`plan references unknown record (${key[0]}, ${key[1]})`);
      const episode = this.corpus.episodes.get(record.episodeId);
      if (!episode) throw new Error(`unknown episode ${record.episodeId}`);
      if (!record.summaryText) throw new Error(`record (${key[0]}, ${key[1]}) has no summary text`);
      const grid = buildSimilarityGrid(episode.transcript, record.summaryText, this.config);
      input = poolGrid({ rows: grid.resized.rows, cols: grid.resized.cols, data: grid.resized.data });
      this.cache.set(mapKey, input);
    }
    return input;
  }
}

export function targetFor(corpus: Corpus, key: RecordKey, config: ScorerConfig): number {
  const record = corpus.records.get(recordKey(key[0], key[1]));
  if (!record) throw new Error(`unknown record (${key[0]}, ${key[1]})`);
  if (config.targetMode === "human_score") {
    if (!record.grade) throw new Error(`record (${key[0]}, ${key[1]}) has no grade`);
    const score = GRADE_SCORES[record.grade];
    if (score === undefined) throw new Error(`unknown grade ${record.grade}`);
    return score;
  }
  const episode = corpus.episodes.get(record.episodeId);
  if (!episode) throw new Error(`unknown episode ${record.episodeId}`);
  // weak supervision: ROUGE-L F1 against the creator description, scaled to
  // the same 0..3 range the human targets use
  return 3 * rougeLF1(tokenize(record.summaryText), tokenize(episode.creatorDescription));
}

export interface TrainedFold {
  fold: number;
  model: GridCnn;
  log: FoldLog;
}

export function trainGridCnn(
  plan: SplitPlan,
  corpus: Corpus,
  config: ScorerConfig,
): TrainedFold[] {
  const cache = new GridCache(corpus, config);
  const samples = (keys: RecordKey[]): Sample[] =>
    keys.map((key) => ({ input: cache.pooledInput(key), target: targetFor(corpus, key, config) }));
  const out: TrainedFold[] = [];
  plan.folds.forEach((fold, index) => {
    const { model, log } = trainOnSamples(samples(fold.train), samples(fold.valid), config, index);
    out.push({ fold: index, model, log });
  });
  return out;
}

export function predictScores(
  model: GridCnn,
  corpus: Corpus,
  keys: RecordKey[],
  config: ScorerConfig,
  scorerId: string,
): ScoreFileRecord[] {
  const cache = new GridCache(corpus, config);
  return keys.map(([episodeId, systemId]) => ({
    episode_id: episodeId,
    system_id: systemId,
    scorer_id: scorerId,
    score: model.predict(cache.pooledInput([episodeId, systemId])),
  }));
}
