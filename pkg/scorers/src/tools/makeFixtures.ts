/**
 * Regenerate the committed test fixtures: the 500-record synthetic corpus in
 * the canonical layout. Split plans over it are produced by the Python
 * harness CLI (see scorers/README.md) so the two packages stay coupled only
 * through the file formats.
 */

import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";

import { buildSynthCorpus, SMOKE_OPTIONS, writeCorpusDir } from "../synth.js";

const here = dirname(fileURLToPath(import.meta.url));
const fixturesDir = join(here, "..", "..", "tests", "fixtures");

const corpusDir = writeCorpusDir(join(fixturesDir, "corpus"), buildSynthCorpus(SMOKE_OPTIONS));
console.log(`wrote fixture corpus to ${corpusDir}`);
console.log("now generate plans with:");
console.log(
  `  sumassess splits --corpus ${corpusDir} --protocol all_shuffled_kfold --k 2 --seed 5 --out ${join(fixturesDir, "plans")}`,
);
console.log(
  `  sumassess splits --corpus ${corpusDir} --protocol holdout_system --held-system R1 --seed 5 --out ${join(fixturesDir, "plans")}`,
);
