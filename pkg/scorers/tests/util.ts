/** Small statistics helpers for test assertions (independent of src/). */

export function averageRanks(values: number[]): number[] {
  const indexed = values.map((v, i) => [v, i] as const).sort((a, b) => a[0] - b[0]);
  const ranks = new Array<number>(values.length);
  let i = 0;
  while (i < indexed.length) {
    let j = i;
    while (j + 1 < indexed.length && indexed[j + 1][0] === indexed[i][0]) j += 1;
    const rank = (i + j) / 2 + 1;
    for (let t = i; t <= j; t++) ranks[indexed[t][1]] = rank;
    i = j + 1;
  }
  return ranks;
}

export function pearson(xs: number[], ys: number[]): number {
  const mx = xs.reduce((a, b) => a + b, 0) / xs.length;
  const my = ys.reduce((a, b) => a + b, 0) / ys.length;
  let cov = 0;
  let sx = 0;
  let sy = 0;
  for (let i = 0; i < xs.length; i++) {
    cov += (xs[i] - mx) * (ys[i] - my);
    sx += (xs[i] - mx) ** 2;
    sy += (ys[i] - my) ** 2;
  }
  return cov / Math.sqrt(sx * sy);
}

export function spearman(xs: number[], ys: number[]): number {
  return pearson(averageRanks(xs), averageRanks(ys));
}

export function rmse(preds: number[], targets: number[]): number {
  let total = 0;
  for (let i = 0; i < preds.length; i++) total += (preds[i] - targets[i]) ** 2;
  return Math.sqrt(total / preds.length);
}

export const FIXTURE_CORPUS = new URL("./fixtures/corpus", import.meta.url).pathname;
export const FIXTURE_KFOLD_PLAN = new URL(
  "./fixtures/plans/all_shuffled_k2_seed5.plan.json",
  import.meta.url,
).pathname;
export const FIXTURE_R1_PLAN = new URL(
  "./fixtures/plans/holdout_system_R1_seed5.plan.json",
  import.meta.url,
).pathname;
