"""Deterministic experiment split planning.

Protocols:

    all_shuffled_kfold   seeded shuffle of (episode, system) records, k
                         near-equal test folds, remaining records split into
                         train/valid by ratio
    holdout_system       single fold, test = every record of one system
    holdout_document     single fold, test = every record of held-out episodes

Shuffling uses Python's Mersenne Twister (random.Random) with Fisher-Yates,
which is stable across platforms and versions, so identical inputs including
the seed reproduce byte-identical serialized plans.
"""

from __future__ import annotations

import json
import random
from collections.abc import Collection, Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

from .corpus import Corpus
from .errors import SplitError
from .wire import atomic_write_text

RecordKey = tuple[str, str]

PROTOCOLS = ("all_shuffled_kfold", "holdout_system", "holdout_document")


@dataclass(frozen=True)
class Fold:
    train: tuple[RecordKey, ...]
    valid: tuple[RecordKey, ...]
    test: tuple[RecordKey, ...]


@dataclass(frozen=True)
class SplitPlan:
    protocol: str
    seed: int
    k: int
    train_ratio: float
    folds: tuple[Fold, ...]

    def to_json_dict(self) -> dict:
        return {
            "protocol": self.protocol,
            "seed": self.seed,
            "k": self.k,
            "train_ratio": self.train_ratio,
            "folds": [
                {
                    "train": [list(key) for key in fold.train],
                    "valid": [list(key) for key in fold.valid],
                    "test": [list(key) for key in fold.test],
                }
                for fold in self.folds
            ],
        }

    @staticmethod
    def from_json_dict(obj: dict) -> "SplitPlan":
        def keys(raw: list) -> tuple[RecordKey, ...]:
            return tuple((str(e), str(s)) for e, s in raw)

        return SplitPlan(
            protocol=str(obj["protocol"]),
            seed=int(obj["seed"]),
            k=int(obj["k"]),
            train_ratio=float(obj["train_ratio"]),
            folds=tuple(
                Fold(train=keys(f["train"]), valid=keys(f["valid"]), test=keys(f["test"]))
                for f in obj["folds"]
            ),
        )


def write_plan(path: str | Path, plan: SplitPlan) -> None:
    atomic_write_text(path, json.dumps(plan.to_json_dict(), indent=1, sort_keys=True) + "\n")


def read_plan(path: str | Path) -> SplitPlan:
    path = Path(path)
    if not path.exists():
        raise SplitError(f"missing plan file: {path}")
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
        return SplitPlan.from_json_dict(obj)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise SplitError(f"{path}: malformed plan: {exc}") from exc


def _canonical_keys(records: Iterable[RecordKey]) -> list[RecordKey]:
    keys = [(str(e), str(s)) for e, s in records]
    if len(set(keys)) != len(keys):
        raise SplitError("duplicate record keys")
    # Sort before shuffling so the plan depends only on the key set and seed,
    # not on input iteration order.
    keys.sort()
    return keys


def _train_valid_split(rest: Sequence[RecordKey], train_ratio: float) -> tuple[tuple, tuple]:
    if not 0.0 < train_ratio <= 1.0:
        raise SplitError(f"train_ratio must be in (0, 1], got {train_ratio}")
    n_valid = round(len(rest) * (1.0 - train_ratio))
    if n_valid == 0:
        return tuple(rest), ()
    return tuple(rest[:-n_valid]), tuple(rest[-n_valid:])


def kfold_shuffled(
    records: Iterable[RecordKey], k: int, seed: int, train_ratio: float = 0.8
) -> SplitPlan:
    """Shuffle records with the seeded generator and partition into k test
    folds whose sizes differ by at most one; per fold, the remaining records
    keep shuffle order and split into train/valid by ratio (valid from the
    tail)."""
    keys = _canonical_keys(records)
    if k < 2:
        raise SplitError(f"k must be >= 2, got {k}")
    if len(keys) < k:
        raise SplitError(f"need at least k={k} records, got {len(keys)}")
    rng = random.Random(seed)
    rng.shuffle(keys)
    base, extra = divmod(len(keys), k)
    folds = []
    start = 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        test = tuple(keys[start : start + size])
        rest = keys[:start] + keys[start + size :]
        train, valid = _train_valid_split(rest, train_ratio)
        folds.append(Fold(train=train, valid=valid, test=test))
        start += size
    return SplitPlan(
        protocol="all_shuffled_kfold", seed=seed, k=k, train_ratio=train_ratio, folds=tuple(folds)
    )


def repeated_kfold(
    records: Iterable[RecordKey], k: int, repeats: int, base_seed: int, train_ratio: float = 0.8
) -> list[SplitPlan]:
    """One k-fold plan per repeat, seeded base_seed .. base_seed + repeats - 1."""
    if repeats < 1:
        raise SplitError(f"repeats must be >= 1, got {repeats}")
    keys = _canonical_keys(records)
    return [kfold_shuffled(keys, k, base_seed + r, train_ratio) for r in range(repeats)]


def holdout_system(
    records: Iterable[RecordKey],
    corpus: Corpus,
    held_system: str,
    seed: int,
    train_ratio: float = 0.8,
) -> SplitPlan:
    """Single-fold plan: test = every record of held_system, train/valid = a
    seeded shuffle of everything else."""
    if held_system not in corpus.system_ids:
        raise SplitError(f"unknown system: {held_system!r}")
    keys = _canonical_keys(records)
    test = tuple(key for key in keys if key[1] == held_system)
    if not test:
        raise SplitError(f"no records for held-out system {held_system!r}")
    rest = [key for key in keys if key[1] != held_system]
    rng = random.Random(seed)
    rng.shuffle(rest)
    train, valid = _train_valid_split(rest, train_ratio)
    fold = Fold(train=train, valid=valid, test=test)
    return SplitPlan(
        protocol="holdout_system", seed=seed, k=1, train_ratio=train_ratio, folds=(fold,)
    )


def holdout_document(
    records: Iterable[RecordKey],
    corpus: Corpus,
    selection: float | Collection[str],
    seed: int,
    train_ratio: float = 0.8,
) -> SplitPlan:
    """Single-fold plan holding out whole episodes.

    selection is either a fraction in (0, 1), resolved by taking the first
    round(fraction * n) episodes of a seeded episode shuffle, or an explicit
    episode set. The held-out set must be a non-empty proper subset.
    """
    keys = _canonical_keys(records)
    episode_ids = sorted(corpus.episodes)
    rng = random.Random(seed)
    if isinstance(selection, float):
        if not 0.0 < selection < 1.0:
            raise SplitError(f"held-out fraction must be in (0, 1), got {selection}")
        shuffled = list(episode_ids)
        rng.shuffle(shuffled)
        n_held = round(len(shuffled) * selection)
        if n_held == 0 or n_held >= len(shuffled):
            raise SplitError(
                f"fraction {selection} holds out {n_held} of {len(shuffled)} episodes"
            )
        held = set(shuffled[:n_held])
    else:
        held = {str(e) for e in selection}
        unknown = held - set(episode_ids)
        if unknown:
            raise SplitError(f"unknown episodes: {sorted(unknown)}")
        if not held or len(held) >= len(episode_ids):
            raise SplitError("held-out episode set must be a non-empty proper subset")
    test = tuple(key for key in keys if key[0] in held)
    if not test:
        raise SplitError("held-out episodes have no records")
    rest = [key for key in keys if key[0] not in held]
    rng.shuffle(rest)
    train, valid = _train_valid_split(rest, train_ratio)
    fold = Fold(train=train, valid=valid, test=test)
    return SplitPlan(
        protocol="holdout_document", seed=seed, k=1, train_ratio=train_ratio, folds=(fold,)
    )
