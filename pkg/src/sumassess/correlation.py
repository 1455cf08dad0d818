"""Score matrices and agreement statistics.

Three aggregation levels connect an N-system x M-document score matrix X to a
second matrix Y (typically human grades):

    system level   correlation of the per-system row means across documents
    summary level  mean over documents of the across-system correlation,
                   documents with a constant column skipped and counted
    all examples   correlation over all N*M pairs flattened (only meaningful
                   when both scorers are on an absolute scale)

Undefined correlations (constant input, fewer than two points) surface as
explicit errors or as a None value in reports, never as silent NaN.
All statistics use double precision with two-pass mean/variance accumulation.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, replace
from typing import Any

import numpy as np

from .corpus import Corpus, DEFAULT_SCALE, GradeScale
from .errors import AlignmentError, UndefinedCorrelationError

COEFFICIENTS = ("pearson", "spearman")
LEVELS = ("system", "summary", "all_examples")


def _as_vector(values: Sequence[float], name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise AlignmentError(f"{name} must be one-dimensional")
    return arr


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation.

    Raises AlignmentError on length mismatch and UndefinedCorrelationError
    when either vector is constant or shorter than two elements.
    """
    x = _as_vector(xs, "xs")
    y = _as_vector(ys, "ys")
    if len(x) != len(y):
        raise AlignmentError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise UndefinedCorrelationError("correlation needs at least 2 points")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = math.sqrt(float(np.dot(dx, dx)))
    sy = math.sqrt(float(np.dot(dy, dy)))
    if sx == 0.0 or sy == 0.0:
        raise UndefinedCorrelationError("correlation undefined for constant input")
    value = float(np.dot(dx, dy)) / (sx * sy)
    return min(1.0, max(-1.0, value))


def average_ranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks with ties assigned the average of their positions."""
    arr = _as_vector(values, "values")
    order = np.argsort(arr, kind="stable")
    ranks = np.empty(len(arr), dtype=np.float64)
    i = 0
    while i < len(arr):
        j = i
        while j + 1 < len(arr) and arr[order[j + 1]] == arr[order[i]]:
            j += 1
        # positions i..j (0-based) share the rank (i + j)/2 + 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman rank correlation: Pearson of the average-ranked vectors."""
    x = _as_vector(xs, "xs")
    y = _as_vector(ys, "ys")
    if len(x) != len(y):
        raise AlignmentError(f"length mismatch: {len(x)} vs {len(y)}")
    return pearson(average_ranks(x), average_ranks(y))


_COEFFICIENT_FNS = {"pearson": pearson, "spearman": spearman}


def correlate(xs: Sequence[float], ys: Sequence[float], coefficient: str) -> float:
    if coefficient not in _COEFFICIENT_FNS:
        raise ValueError(f"unknown coefficient: {coefficient!r}")
    return _COEFFICIENT_FNS[coefficient](xs, ys)


def rmse(predictions: Sequence[float], targets: Sequence[float]) -> float:
    """Root mean squared error over equal-length non-empty vectors."""
    p = _as_vector(predictions, "predictions")
    t = _as_vector(targets, "targets")
    if len(p) != len(t):
        raise AlignmentError(f"length mismatch: {len(p)} vs {len(t)}")
    if len(p) == 0:
        raise AlignmentError("rmse over empty vectors")
    diff = p - t
    return math.sqrt(float(np.dot(diff, diff)) / len(p))


@dataclass(frozen=True, eq=False)
class ScoreMatrix:
    """N systems x M episodes of scores, NaN marking missing cells."""

    system_ids: tuple[str, ...]
    episode_ids: tuple[str, ...]
    values: np.ndarray

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScoreMatrix):
            return NotImplemented
        return (
            self.system_ids == other.system_ids
            and self.episode_ids == other.episode_ids
            and np.array_equal(self.values, other.values, equal_nan=True)
        )

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=np.float64)
        if arr.shape != (len(self.system_ids), len(self.episode_ids)):
            raise AlignmentError(
                f"matrix shape {arr.shape} inconsistent with "
                f"{len(self.system_ids)} systems x {len(self.episode_ids)} episodes"
            )
        if len(set(self.system_ids)) != len(self.system_ids):
            raise AlignmentError("duplicate system ids")
        if len(set(self.episode_ids)) != len(self.episode_ids):
            raise AlignmentError("duplicate episode ids")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n_systems(self) -> int:
        return len(self.system_ids)

    @property
    def n_episodes(self) -> int:
        return len(self.episode_ids)

    def is_complete(self) -> bool:
        return not bool(np.isnan(self.values).any())

    def reindex(self, system_ids: Sequence[str], episode_ids: Sequence[str]) -> "ScoreMatrix":
        """Sub-matrix in the requested axis order; unknown ids are an error."""
        try:
            rows = [self.system_ids.index(s) for s in system_ids]
        except ValueError as exc:
            raise AlignmentError(f"unknown system id in reindex: {exc}") from exc
        try:
            cols = [self.episode_ids.index(e) for e in episode_ids]
        except ValueError as exc:
            raise AlignmentError(f"unknown episode id in reindex: {exc}") from exc
        return ScoreMatrix(tuple(system_ids), tuple(episode_ids), self.values[np.ix_(rows, cols)])

    @staticmethod
    def from_entries(entries: Iterable[tuple[str, str, float]]) -> "ScoreMatrix":
        """Build from (system_id, episode_id, score) entries.

        Axis order is first appearance. Duplicate cells are an error; cells
        never mentioned stay missing (NaN).
        """
        sys_index: dict[str, int] = {}
        ep_index: dict[str, int] = {}
        cells: dict[tuple[str, str], float] = {}
        for sid, eid, score in entries:
            if (sid, eid) in cells:
                raise AlignmentError(f"duplicate cell ({sid}, {eid})")
            cells[(sid, eid)] = float(score)
            sys_index.setdefault(sid, len(sys_index))
            ep_index.setdefault(eid, len(ep_index))
        values = np.full((len(sys_index), len(ep_index)), np.nan)
        for (sid, eid), score in cells.items():
            values[sys_index[sid], ep_index[eid]] = score
        return ScoreMatrix(tuple(sys_index), tuple(ep_index), values)


def matrix_from_grades(
    corpus: Corpus, scale: GradeScale = DEFAULT_SCALE, require_grades: bool = True
) -> ScoreMatrix:
    """Human-score matrix over the corpus systems x episodes grid.

    Ungraded or absent records either raise (require_grades=True) only when
    the record exists without a grade, or are left as missing cells.
    """
    systems = corpus.system_ids
    episodes = corpus.episode_ids
    values = np.full((len(systems), len(episodes)), np.nan)
    for i, sid in enumerate(systems):
        for j, eid in enumerate(episodes):
            record = corpus.records.get((eid, sid))
            if record is None:
                continue
            if record.grade is None:
                if require_grades:
                    raise AlignmentError(f"record ({eid}, {sid}) has no grade")
                continue
            values[i, j] = scale.score(record.grade)
    return ScoreMatrix(systems, episodes, values)


@dataclass(frozen=True)
class CorrelationReport:
    """Result of one aggregation-level correlation run.

    value is None when the correlation is undefined at this level. At summary
    level n_used + n_skipped equals the number of documents.
    """

    level: str
    coefficient: str
    value: float | None
    n_used: int
    n_skipped: int = 0
    system_filter: str | None = None
    scorer: str | None = None

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "level": self.level,
            "coefficient": self.coefficient,
            "value": self.value,
            "n_used": self.n_used,
            "n_skipped": self.n_skipped,
            "system_filter": self.system_filter,
            "scorer": self.scorer,
        }

    @staticmethod
    def from_json_dict(obj: dict[str, Any]) -> "CorrelationReport":
        return CorrelationReport(
            level=str(obj["level"]),
            coefficient=str(obj["coefficient"]),
            value=None if obj.get("value") is None else float(obj["value"]),
            n_used=int(obj["n_used"]),
            n_skipped=int(obj.get("n_skipped", 0)),
            system_filter=obj.get("system_filter"),
            scorer=obj.get("scorer"),
        )

    def with_context(self, system_filter: str | None, scorer: str | None) -> "CorrelationReport":
        return replace(self, system_filter=system_filter, scorer=scorer)


def _check_aligned(x: ScoreMatrix, y: ScoreMatrix, require_complete: bool = True) -> None:
    if x.system_ids != y.system_ids or x.episode_ids != y.episode_ids:
        raise AlignmentError("matrices are not aligned on identical system and episode axes")
    if require_complete and (not x.is_complete() or not y.is_complete()):
        raise AlignmentError("operation requires complete matrices (no missing cells)")


def system_level(x: ScoreMatrix, y: ScoreMatrix, coefficient: str = "spearman") -> CorrelationReport:
    """Correlation of per-system row means across documents."""
    _check_aligned(x, y)
    if x.n_systems < 2:
        raise UndefinedCorrelationError("system level needs at least 2 systems")
    value = correlate(x.values.mean(axis=1), y.values.mean(axis=1), coefficient)
    return CorrelationReport("system", coefficient, value, n_used=x.n_systems)


def summary_level(x: ScoreMatrix, y: ScoreMatrix, coefficient: str = "spearman") -> CorrelationReport:
    """Mean over documents of the per-document correlation across systems.

    Documents where either column is constant are skipped and reported in
    n_skipped; the skip count keeps reproductions auditable. Raises when every
    document is skipped.
    """
    _check_aligned(x, y)
    if x.n_systems < 2:
        raise UndefinedCorrelationError("summary level needs at least 2 systems")
    # Left-to-right over the episode axis for bit-reproducible summation.
    values = []
    skipped = 0
    for j in range(x.n_episodes):
        try:
            values.append(correlate(x.values[:, j], y.values[:, j], coefficient))
        except UndefinedCorrelationError:
            skipped += 1
    if not values:
        raise UndefinedCorrelationError("summary level: every document was skipped")
    return CorrelationReport(
        "summary", coefficient, math.fsum(values) / len(values), n_used=len(values), n_skipped=skipped
    )


def all_examples(x: ScoreMatrix, y: ScoreMatrix, coefficient: str = "spearman") -> CorrelationReport:
    """Correlation over every (system, document) pair flattened row-major."""
    _check_aligned(x, y)
    if x.n_systems * x.n_episodes < 2:
        raise UndefinedCorrelationError("all examples needs at least 2 pairs")
    value = correlate(x.values.ravel(), y.values.ravel(), coefficient)
    return CorrelationReport("all_examples", coefficient, value, n_used=x.n_systems * x.n_episodes)


_LEVEL_FNS = {"system": system_level, "summary": summary_level, "all_examples": all_examples}


def correlate_level(
    x: ScoreMatrix, y: ScoreMatrix, level: str, coefficient: str = "spearman"
) -> CorrelationReport:
    if level not in _LEVEL_FNS:
        raise ValueError(f"unknown level: {level!r}")
    return _LEVEL_FNS[level](x, y, coefficient)


def filter_systems(x: ScoreMatrix, keep: Iterable[str]) -> ScoreMatrix:
    """Sub-matrix keeping the given systems, preserving both axis orders."""
    keep_set = set(keep)
    unknown = keep_set - set(x.system_ids)
    if unknown:
        raise AlignmentError(f"unknown system ids: {sorted(unknown)}")
    kept = [s for s in x.system_ids if s in keep_set]
    if len(kept) < 2:
        raise AlignmentError(f"system filter retains {len(kept)} systems, need at least 2")
    return x.reindex(kept, x.episode_ids)
