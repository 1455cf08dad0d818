/**
 * Compact convolutional regressor over similarity grids.
 *
 * The 640 x 32 grid is average-pooled to 40 x 8, passed through two 3x3
 * conv + ReLU blocks (1->8->16 channels, 2x2 average pooling between), global
 * average pooling and a linear head. Training minimizes squared error with
 * Adam and early-stops on validation loss, restoring the best weights.
 * Everything is seeded, so training and inference are fully deterministic.
 */

import { Rng } from "./rng.js";
import type { Matrix } from "./grid.js";
import { clamp } from "./text.js";
import type { ScorerConfig } from "./types.js";

const POOL_R = 16;
const POOL_C = 4;
const IN_H = 40; // 640 / 16
const IN_W = 8; // 32 / 4
const C1 = 8;
const C2 = 16;
const K = 3;

class Param {
  w: Float64Array;
  g: Float64Array;
  m: Float64Array;
  v: Float64Array;

  constructor(size: number) {
    this.w = new Float64Array(size);
    this.g = new Float64Array(size);
    this.m = new Float64Array(size);
    this.v = new Float64Array(size);
  }
}

export interface TrainLogEntry {
  epoch: number;
  trainLoss: number;
  valLoss: number;
}

export interface FoldLog {
  fold: number;
  entries: TrainLogEntry[];
  bestValLoss: number;
  stoppedEarly: boolean;
  /** set when validation loss never improved over its initial value */
  neverImproved: boolean;
}

/** Fixed preprocessing: average-pool the 640x32 grid to the 40x8 CNN input. */
export function poolGrid(grid: Matrix): Float64Array {
  if (grid.rows !== 640 || grid.cols !== 32) {
    throw new Error(`expected a 640x32 grid, got ${grid.rows}x${grid.cols}`);
  }
  const out = new Float64Array(IN_H * IN_W);
  for (let y = 0; y < IN_H; y++) {
    for (let x = 0; x < IN_W; x++) {
      let total = 0;
      for (let py = 0; py < POOL_R; py++) {
        for (let px = 0; px < POOL_C; px++) {
          total += grid.data[(y * POOL_R + py) * grid.cols + (x * POOL_C + px)];
        }
      }
      out[y * IN_W + x] = total / (POOL_R * POOL_C);
    }
  }
  return out;
}

function convForward(
  input: Float64Array,
  inC: number,
  h: number,
  w: number,
  weight: Float64Array,
  bias: Float64Array,
  outC: number,
): Float64Array {
  const out = new Float64Array(outC * h * w);
  for (let o = 0; o < outC; o++) {
    for (let y = 0; y < h; y++) {
      for (let x = 0; x < w; x++) {
        let acc = bias[o];
        for (let i = 0; i < inC; i++) {
          for (let ky = 0; ky < K; ky++) {
            const yy = y + ky - 1;
            if (yy < 0 || yy >= h) continue;
            for (let kx = 0; kx < K; kx++) {
              const xx = x + kx - 1;
              if (xx < 0 || xx >= w) continue;
              acc += weight[((o * inC + i) * K + ky) * K + kx] * input[(i * h + yy) * w + xx];
            }
          }
        }
        out[(o * h + y) * w + x] = acc;
      }
    }
  }
  return out;
}

function convBackward(
  input: Float64Array,
  inC: number,
  h: number,
  w: number,
  weight: Float64Array,
  outC: number,
  dOut: Float64Array,
  dWeight: Float64Array,
  dBias: Float64Array,
): Float64Array {
  const dIn = new Float64Array(inC * h * w);
  for (let o = 0; o < outC; o++) {
    for (let y = 0; y < h; y++) {
      for (let x = 0; x < w; x++) {
        const grad = dOut[(o * h + y) * w + x];
        if (grad === 0) continue;
        dBias[o] += grad;
        for (let i = 0; i < inC; i++) {
          for (let ky = 0; ky < K; ky++) {
            const yy = y + ky - 1;
            if (yy < 0 || yy >= h) continue;
            for (let kx = 0; kx < K; kx++) {
              const xx = x + kx - 1;
              if (xx < 0 || xx >= w) continue;
              const widx = ((o * inC + i) * K + ky) * K + kx;
              dWeight[widx] += grad * input[(i * h + yy) * w + xx];
              dIn[(i * h + yy) * w + xx] += grad * weight[widx];
            }
          }
        }
      }
    }
  }
  return dIn;
}

function relu(values: Float64Array): Float64Array {
  const out = new Float64Array(values.length);
  for (let i = 0; i < values.length; i++) out[i] = values[i] > 0 ? values[i] : 0;
  return out;
}

function reluBackward(pre: Float64Array, dOut: Float64Array): Float64Array {
  const dIn = new Float64Array(pre.length);
  for (let i = 0; i < pre.length; i++) dIn[i] = pre[i] > 0 ? dOut[i] : 0;
  return dIn;
}

function avgPool2(input: Float64Array, c: number, h: number, w: number): Float64Array {
  const oh = h / 2;
  const ow = w / 2;
  const out = new Float64Array(c * oh * ow);
  for (let i = 0; i < c; i++) {
    for (let y = 0; y < oh; y++) {
      for (let x = 0; x < ow; x++) {
        out[(i * oh + y) * ow + x] =
          (input[(i * h + 2 * y) * w + 2 * x] +
            input[(i * h + 2 * y) * w + 2 * x + 1] +
            input[(i * h + 2 * y + 1) * w + 2 * x] +
            input[(i * h + 2 * y + 1) * w + 2 * x + 1]) /
          4;
      }
    }
  }
  return out;
}

function avgPool2Backward(dOut: Float64Array, c: number, h: number, w: number): Float64Array {
  const oh = h / 2;
  const ow = w / 2;
  const dIn = new Float64Array(c * h * w);
  for (let i = 0; i < c; i++) {
    for (let y = 0; y < oh; y++) {
      for (let x = 0; x < ow; x++) {
        const grad = dOut[(i * oh + y) * ow + x] / 4;
        dIn[(i * h + 2 * y) * w + 2 * x] += grad;
        dIn[(i * h + 2 * y) * w + 2 * x + 1] += grad;
        dIn[(i * h + 2 * y + 1) * w + 2 * x] += grad;
        dIn[(i * h + 2 * y + 1) * w + 2 * x + 1] += grad;
      }
    }
  }
  return dIn;
}

export class GridCnn {
  conv1: Param;
  bias1: Param;
  conv2: Param;
  bias2: Param;
  fcW: Param;
  fcB: Param;
  private step = 0;

  constructor(seed: number) {
    this.conv1 = new Param(C1 * 1 * K * K);
    this.bias1 = new Param(C1);
    this.conv2 = new Param(C2 * C1 * K * K);
    this.bias2 = new Param(C2);
    this.fcW = new Param(C2);
    this.fcB = new Param(1);
    const rng = new Rng(seed);
    const init = (param: Param, fanIn: number) => {
      const scale = Math.sqrt(2 / fanIn);
      for (let i = 0; i < param.w.length; i++) param.w[i] = rng.gauss() * scale;
    };
    init(this.conv1, K * K);
    init(this.conv2, C1 * K * K);
    init(this.fcW, C2);
    // start predictions mid-range so early epochs are stable on 0..3 targets
    this.fcB.w[0] = 1.5;
  }

  private params(): Param[] {
    return [this.conv1, this.bias1, this.conv2, this.bias2, this.fcW, this.fcB];
  }

  forward(input: Float64Array) {
    const z1 = convForward(input, 1, IN_H, IN_W, this.conv1.w, this.bias1.w, C1);
    const a1 = relu(z1);
    const p1 = avgPool2(a1, C1, IN_H, IN_W); // 20 x 4
    const z2 = convForward(p1, C1, IN_H / 2, IN_W / 2, this.conv2.w, this.bias2.w, C2);
    const a2 = relu(z2);
    const cells = (IN_H / 2) * (IN_W / 2);
    const pooled = new Float64Array(C2);
    for (let c = 0; c < C2; c++) {
      let total = 0;
      for (let i = 0; i < cells; i++) total += a2[c * cells + i];
      pooled[c] = total / cells;
    }
    let pred = this.fcB.w[0];
    for (let c = 0; c < C2; c++) pred += this.fcW.w[c] * pooled[c];
    return { input, z1, p1, z2, a2, pooled, pred };
  }

  /** Accumulate gradients for one sample; returns the squared error. */
  backward(cache: ReturnType<GridCnn["forward"]>, target: number): number {
    const err = cache.pred - target;
    const dPred = 2 * err;
    const cells = (IN_H / 2) * (IN_W / 2);
    const dPooled = new Float64Array(C2);
    for (let c = 0; c < C2; c++) {
      this.fcW.g[c] += dPred * cache.pooled[c];
      dPooled[c] = dPred * this.fcW.w[c];
    }
    this.fcB.g[0] += dPred;
    const dA2 = new Float64Array(C2 * cells);
    for (let c = 0; c < C2; c++) {
      const grad = dPooled[c] / cells;
      for (let i = 0; i < cells; i++) dA2[c * cells + i] = grad;
    }
    const dZ2 = reluBackward(cache.z2, dA2);
    const dP1 = convBackward(
      cache.p1, C1, IN_H / 2, IN_W / 2, this.conv2.w, C2, dZ2, this.conv2.g, this.bias2.g,
    );
    const dA1 = avgPool2Backward(dP1, C1, IN_H, IN_W);
    const dZ1 = reluBackward(cache.z1, dA1);
    convBackward(cache.input, 1, IN_H, IN_W, this.conv1.w, C1, dZ1, this.conv1.g, this.bias1.g);
    return err * err;
  }

  zeroGrad(): void {
    for (const p of this.params()) p.g.fill(0);
  }

  adamStep(lr: number, batchSize: number): void {
    this.step += 1;
    const b1 = 0.9;
    const b2 = 0.999;
    const eps = 1e-8;
    const c1 = 1 - Math.pow(b1, this.step);
    const c2 = 1 - Math.pow(b2, this.step);
    for (const p of this.params()) {
      for (let i = 0; i < p.w.length; i++) {
        const g = p.g[i] / batchSize;
        p.m[i] = b1 * p.m[i] + (1 - b1) * g;
        p.v[i] = b2 * p.v[i] + (1 - b2) * g * g;
        p.w[i] -= (lr * (p.m[i] / c1)) / (Math.sqrt(p.v[i] / c2) + eps);
      }
    }
  }

  predict(input: Float64Array): number {
    return clamp(this.forward(input).pred, 0, 3);
  }

  snapshot(): Float64Array[] {
    return this.params().map((p) => Float64Array.from(p.w));
  }

  restore(weights: Float64Array[]): void {
    this.params().forEach((p, i) => p.w.set(weights[i]));
  }

  toJSON(): Record<string, unknown> {
    return {
      architecture: "grid-cnn-compact-v1",
      weights: this.params().map((p) => Array.from(p.w)),
    };
  }

  static fromJSON(obj: Record<string, unknown>): GridCnn {
    if (obj.architecture !== "grid-cnn-compact-v1") {
      throw new Error(`unknown model architecture: ${String(obj.architecture)}`);
    }
    const model = new GridCnn(0);
    model.restore((obj.weights as number[][]).map((w) => Float64Array.from(w)));
    return model;
  }
}

export interface Sample {
  input: Float64Array; // pooled 40x8 grid
  target: number;
}

export interface TrainResult {
  model: GridCnn;
  log: FoldLog;
}

export function trainOnSamples(
  train: Sample[],
  valid: Sample[],
  config: ScorerConfig,
  fold: number,
): TrainResult {
  if (train.length === 0) throw new Error("empty training fold");
  const model = new GridCnn(config.seed + fold);
  const rng = new Rng(config.seed * 31 + fold);
  const evalLoss = (samples: Sample[]): number => {
    if (samples.length === 0) return NaN;
    let total = 0;
    for (const s of samples) {
      const err = model.forward(s.input).pred - s.target;
      total += err * err;
    }
    return total / samples.length;
  };

  const entries: TrainLogEntry[] = [];
  const initialValLoss = evalLoss(valid);
  let bestValLoss = initialValLoss;
  let bestWeights = model.snapshot();
  let sinceImprovement = 0;
  let stoppedEarly = false;

  const order = train.map((_, i) => i);
  for (let epoch = 1; epoch <= config.epochs; epoch++) {
    rng.shuffle(order);
    let trainLoss = 0;
    for (let start = 0; start < order.length; start += config.batchSize) {
      const batch = order.slice(start, start + config.batchSize);
      model.zeroGrad();
      for (const idx of batch) {
        const sample = train[idx];
        trainLoss += model.backward(model.forward(sample.input), sample.target);
      }
      model.adamStep(config.learningRate, batch.length);
    }
    trainLoss /= train.length;
    const valLoss = evalLoss(valid);
    entries.push({ epoch, trainLoss, valLoss });
    if (!Number.isNaN(valLoss) && valLoss < bestValLoss - 1e-9) {
      bestValLoss = valLoss;
      bestWeights = model.snapshot();
      sinceImprovement = 0;
    } else {
      sinceImprovement += 1;
      if (Number.isNaN(valLoss)) sinceImprovement = 0; // no validation set, run all epochs
      if (sinceImprovement >= config.patience) {
        stoppedEarly = true;
        break;
      }
    }
  }
  model.restore(bestWeights);
  return {
    model,
    log: {
      fold,
      entries,
      bestValLoss,
      stoppedEarly,
      neverImproved: entries.length > 0 && bestValLoss >= initialValLoss,
    },
  };
}
