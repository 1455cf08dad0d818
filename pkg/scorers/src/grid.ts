/**
 * Sentence-level similarity grids: cell (i, j) is the cosine similarity
 * between document sentence i and summary sentence j under the configured
 * encoder, and every raw grid is bilinearly resized to the fixed 640 x 32
 * shape the grid regressor consumes.
 */

import { cosine, getEncoder } from "./encoder.js";
import { splitSentences } from "./text.js";
import { GRID_COLS, GRID_ROWS, type ScorerConfig, type SimilarityGrid } from "./types.js";

export interface Matrix {
  rows: number;
  cols: number;
  data: Float64Array;
}

export function bilinearResize(input: Matrix, outRows: number, outCols: number): Matrix {
  const { rows, cols, data } = input;
  const out = new Float64Array(outRows * outCols);
  const rowScale = rows > 1 ? (rows - 1) / (outRows - 1) : 0;
  const colScale = cols > 1 ? (cols - 1) / (outCols - 1) : 0;
  for (let r = 0; r < outRows; r++) {
    const src = r * rowScale;
    const r0 = Math.floor(src);
    const r1 = Math.min(r0 + 1, rows - 1);
    const fr = src - r0;
    for (let c = 0; c < outCols; c++) {
      const srcC = c * colScale;
      const c0 = Math.floor(srcC);
      const c1 = Math.min(c0 + 1, cols - 1);
      const fc = srcC - c0;
      const top = data[r0 * cols + c0] * (1 - fc) + data[r0 * cols + c1] * fc;
      const bottom = data[r1 * cols + c0] * (1 - fc) + data[r1 * cols + c1] * fc;
      out[r * outCols + c] = top * (1 - fr) + bottom * fr;
    }
  }
  return { rows: outRows, cols: outCols, data: out };
}

export function buildSimilarityGridFromSentences(
  documentSentences: string[],
  summarySentences: string[],
  config: ScorerConfig,
): SimilarityGrid {
  if (documentSentences.length === 0) throw new Error("document has no sentences");
  if (summarySentences.length === 0) throw new Error("summary has no sentences");
  const encoder = getEncoder(config.encoderId);
  const docVecs = documentSentences.map((s) => encoder.encode(s));
  const sumVecs = summarySentences.map((s) => encoder.encode(s));
  const rows = docVecs.length;
  const cols = sumVecs.length;
  const data = new Float64Array(rows * cols);
  for (let i = 0; i < rows; i++) {
    for (let j = 0; j < cols; j++) {
      data[i * cols + j] = cosine(docVecs[i], sumVecs[j]);
    }
  }
  const raw = { rows, cols, data };
  return { raw, resized: bilinearResize(raw, GRID_ROWS, GRID_COLS) };
}

export function buildSimilarityGrid(
  documentText: string,
  summaryText: string,
  config: ScorerConfig,
): SimilarityGrid {
  return buildSimilarityGridFromSentences(
    splitSentences(documentText),
    splitSentences(summaryText),
    config,
  );
}
