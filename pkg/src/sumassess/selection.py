"""Ensemble aggregation, uncertainty binning, score-driven selection and the
brass heuristic filter.

Score files are the wire format connecting external scorers to this harness:
one JSON object per line with fields episode_id, system_id, scorer_id, score.
For corpus-level selection (scoring document-description training pairs) the
system_id is conventionally "description".
"""

from __future__ import annotations

import math
import re
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .correlation import rmse, spearman
from .errors import AlignmentError, ScoreFileError, SelectionError, UndefinedCorrelationError
from .wire import read_jsonl, write_jsonl_atomic

Key = tuple[str, str]


@dataclass(frozen=True)
class ScoreFileRecord:
    episode_id: str
    system_id: str
    scorer_id: str
    score: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.score):
            raise ValueError(
                f"non-finite score for ({self.episode_id}, {self.system_id}, {self.scorer_id})"
            )

    @property
    def key(self) -> Key:
        return (self.episode_id, self.system_id)


def load_score_file(path: str | Path) -> list[ScoreFileRecord]:
    """Read a score file, enforcing unique (episode, system, scorer) triples."""
    records: list[ScoreFileRecord] = []
    seen: set[tuple[str, str, str]] = set()
    for lineno, obj in read_jsonl(path, ScoreFileError):
        try:
            record = ScoreFileRecord(
                episode_id=str(obj["episode_id"]),
                system_id=str(obj["system_id"]),
                scorer_id=str(obj["scorer_id"]),
                score=float(obj["score"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ScoreFileError(f"{path}:{lineno}: {exc}") from exc
        triple = (record.episode_id, record.system_id, record.scorer_id)
        if triple in seen:
            raise ScoreFileError(f"{path}:{lineno}: duplicate key {triple}")
        seen.add(triple)
        records.append(record)
    if not records:
        raise ScoreFileError(f"{path}: no score records")
    return records


def write_score_file(path: str | Path, records: Iterable[ScoreFileRecord]) -> int:
    return write_jsonl_atomic(
        path,
        (
            {
                "episode_id": r.episode_id,
                "system_id": r.system_id,
                "scorer_id": r.scorer_id,
                "score": r.score,
            }
            for r in records
        ),
    )


def score_map(records: Sequence[ScoreFileRecord], scorer_id: str | None = None) -> dict[Key, float]:
    """Key -> score map for a single scorer.

    scorer_id may be omitted only when the file contains exactly one scorer.
    """
    scorers = sorted({r.scorer_id for r in records})
    if scorer_id is None:
        if len(scorers) != 1:
            raise ScoreFileError(f"score file has scorers {scorers}, pick one")
        scorer_id = scorers[0]
    elif scorer_id not in scorers:
        raise ScoreFileError(f"scorer {scorer_id!r} not in file (has {scorers})")
    return {r.key: r.score for r in records if r.scorer_id == scorer_id}


@dataclass(frozen=True)
class EnsembleResult:
    """Per-key member mean and population std; std is the uncertainty."""

    means: dict[Key, float]
    stds: dict[Key, float]
    n_members: int


def ensemble_aggregate(member_scores: Sequence[Mapping[Key, float]]) -> EnsembleResult:
    """Average the predictions of single models, keeping per-key member std.

    All members must share the same key set.
    """
    if not member_scores:
        raise SelectionError("ensemble needs at least one member")
    key_set = set(member_scores[0])
    for i, member in enumerate(member_scores[1:], start=2):
        if set(member) != key_set:
            raise AlignmentError(f"member {i} key set differs from member 1")
    means: dict[Key, float] = {}
    stds: dict[Key, float] = {}
    for key in member_scores[0]:
        values = np.array([member[key] for member in member_scores], dtype=np.float64)
        means[key] = float(values.mean())
        stds[key] = float(values.std())
    return EnsembleResult(means=means, stds=stds, n_members=len(member_scores))


@dataclass(frozen=True)
class UncertaintyBin:
    index: int
    count: int
    std_low: float
    std_high: float
    spearman: float | None
    rmse: float


def uncertainty_bins(
    result: EnsembleResult,
    targets: Mapping[Key, float],
    n_bins: int,
    min_bin_size: int = 3,
) -> list[UncertaintyBin]:
    """Bucket keys by ascending-uncertainty quantiles and report per-bin
    Spearman (against targets) and RMSE.

    Bin edges are std quantiles, so keys with identical uncertainty always
    share a bin; when every std is equal the result collapses to a single
    effective bin. Per-bin Spearman is None when undefined (constant input).
    """
    if n_bins < 2:
        raise SelectionError(f"n_bins must be >= 2, got {n_bins}")
    if set(result.means) != set(targets):
        raise AlignmentError("ensemble keys and target keys differ")
    keys = sorted(result.means)
    stds = np.array([result.stds[k] for k in keys], dtype=np.float64)
    edges = np.quantile(stds, [i / n_bins for i in range(1, n_bins)])
    assignment = np.searchsorted(edges, stds, side="right")
    bins: list[UncertaintyBin] = []
    for b in range(n_bins):
        members = [k for k, a in zip(keys, assignment) if a == b]
        if not members:
            continue
        if len(members) < min_bin_size:
            raise SelectionError(
                f"bin {b} has {len(members)} keys, need at least {min_bin_size}"
            )
        preds = [result.means[k] for k in members]
        targs = [targets[k] for k in members]
        try:
            rho = spearman(preds, targs)
        except UndefinedCorrelationError:
            rho = None
        bins.append(
            UncertaintyBin(
                index=len(bins),
                count=len(members),
                std_low=float(min(result.stds[k] for k in members)),
                std_high=float(max(result.stds[k] for k in members)),
                spearman=rho,
                rmse=rmse(preds, targs),
            )
        )
    return bins


SELECT_MODES = ("top", "bottom")


def select_extremes(scores: Mapping, k: int, mode: str) -> list:
    """The k keys with highest (top) or lowest (bottom) scores.

    Both modes slice one global (score, key) order, so ties break
    deterministically by key and top/bottom selections of the same k are
    complements: disjoint when 2k <= n, covering when 2k >= n. bottom takes
    the low end of the order; top takes the high end, returned best-first.
    """
    if mode not in SELECT_MODES:
        raise SelectionError(f"unknown mode: {mode!r}")
    if k < 0 or k > len(scores):
        raise SelectionError(f"k={k} out of range for {len(scores)} keys")
    ordered = sorted(scores, key=lambda key: (scores[key], key))
    if mode == "bottom":
        return ordered[:k]
    return ordered[len(ordered) - k :][::-1]


_TF_TOKEN_RE = re.compile(r"\w+", re.UNICODE)


def term_frequency_cosine(a: str, b: str) -> float:
    """Cosine similarity of lowercase word-count vectors; 0 when either side
    has no words."""
    ca = Counter(_TF_TOKEN_RE.findall(a.lower()))
    cb = Counter(_TF_TOKEN_RE.findall(b.lower()))
    if not ca or not cb:
        return 0.0
    dot = sum(count * cb.get(tok, 0) for tok, count in ca.items())
    norm_a = math.sqrt(sum(c * c for c in ca.values()))
    norm_b = math.sqrt(sum(c * c for c in cb.values()))
    return dot / (norm_a * norm_b)


@dataclass(frozen=True)
class BrassItem:
    """Inputs for the brass heuristics: an episode description plus the texts
    it must not be too similar to."""

    key: str
    description: str
    show_description: str | None = None
    siblings: tuple[str, ...] = ()


@dataclass(frozen=True)
class FilterDecision:
    keep: bool
    reason: str | None = None


REASON_TOO_SHORT = "too short"
REASON_TOO_LONG = "too long"
REASON_SIMILAR_SIBLING = "similar to other description"
REASON_SIMILAR_SHOW = "similar to show"


def brass_filter(
    items: Iterable[BrassItem],
    min_chars: int = 20,
    max_chars: int = 750,
    sibling_threshold: float = 0.95,
    show_threshold: float = 0.95,
) -> dict[str, FilterDecision]:
    """Keep/drop decision per key with the first firing reason.

    Drop rules, in order: description length outside [min_chars, max_chars]
    (boundaries kept); term-frequency cosine to any sibling description at or
    above sibling_threshold; cosine to the show description at or above
    show_threshold.
    """
    decisions: dict[str, FilterDecision] = {}
    for item in items:
        if item.key in decisions:
            raise SelectionError(f"duplicate brass item key: {item.key!r}")
        n_chars = len(item.description)
        if n_chars < min_chars:
            decisions[item.key] = FilterDecision(False, REASON_TOO_SHORT)
        elif n_chars > max_chars:
            decisions[item.key] = FilterDecision(False, REASON_TOO_LONG)
        elif any(
            term_frequency_cosine(item.description, sib) >= sibling_threshold
            for sib in item.siblings
        ):
            decisions[item.key] = FilterDecision(False, REASON_SIMILAR_SIBLING)
        elif (
            item.show_description is not None
            and term_frequency_cosine(item.description, item.show_description) >= show_threshold
        ):
            decisions[item.key] = FilterDecision(False, REASON_SIMILAR_SHOW)
        else:
            decisions[item.key] = FilterDecision(True, None)
    return decisions
