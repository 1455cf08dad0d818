"""Corpus model and loader for the podcast summary assessment data.

Canonical on-disk layout (one directory):

    episodes.jsonl   {"episode_id", "transcript", "creator_description"}
    records.jsonl    {"episode_id", "system_id", "summary_text",
                      "grade"?: "E"|"G"|"F"|"B", "attributes"?: [8 booleans]}
    systems.json     ordered [{"system_id", "kind"}], kind in
                     {reference, extractive, abstractive}; optional, defaults
                     to a prefix rule (R* reference, E* extractive, else
                     abstractive) over the systems present in records.jsonl

A corpus is immutable after load; all reads are safe from concurrent contexts.
"""

from __future__ import annotations

import json
import math
import re
from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import CorpusError
from .lexical import DEFAULT_TOKENIZER, TokenizerConfig, split_sentences, tokenize
from .wire import read_jsonl

EPISODES_FILENAME = "episodes.jsonl"
RECORDS_FILENAME = "records.jsonl"
SYSTEMS_FILENAME = "systems.json"


class Grade(Enum):
    EXCELLENT = "E"
    GOOD = "G"
    FAIR = "F"
    BAD = "B"

    @classmethod
    def parse(cls, value: str) -> "Grade":
        text = str(value).strip()
        for grade in cls:
            if text.upper() == grade.value or text.lower() == grade.name.lower():
                return grade
        raise ValueError(f"unknown grade: {value!r}")


GRADE_ORDER = (Grade.BAD, Grade.FAIR, Grade.GOOD, Grade.EXCELLENT)


@dataclass(frozen=True)
class GradeScale:
    """Bijective, strictly monotone mapping from grades to real scores."""

    scores: tuple[tuple[Grade, float], ...]

    def __post_init__(self) -> None:
        mapping = dict(self.scores)
        if set(mapping) != set(Grade):
            raise ValueError("grade scale must cover exactly the four grades")
        ordered = [mapping[g] for g in GRADE_ORDER]
        if any(lo >= hi for lo, hi in zip(ordered, ordered[1:])):
            raise ValueError("grade scale must be strictly increasing from Bad to Excellent")

    def score(self, grade: Grade) -> float:
        return dict(self.scores)[grade]


DEFAULT_SCALE = GradeScale(
    ((Grade.EXCELLENT, 3.0), (Grade.GOOD, 2.0), (Grade.FAIR, 1.0), (Grade.BAD, 0.0))
)


def grade_to_score(grade: Grade, scale: GradeScale = DEFAULT_SCALE) -> float:
    """Map a grade to its real score under the given scale."""
    return scale.score(grade)


class SystemKind(str, Enum):
    REFERENCE = "reference"
    EXTRACTIVE = "extractive"
    ABSTRACTIVE = "abstractive"


@dataclass(frozen=True)
class SystemInfo:
    system_id: str
    kind: SystemKind


@dataclass(frozen=True)
class Episode:
    """One podcast document: the transcript plus the creator description,
    which doubles as reference summary and as assessed system R1."""

    episode_id: str
    transcript: str
    creator_description: str

    def __post_init__(self) -> None:
        if not self.episode_id:
            raise ValueError("episode_id must be non-empty")
        if not self.transcript:
            raise ValueError(f"episode {self.episode_id}: transcript must be non-empty")


@dataclass(frozen=True)
class SummaryRecord:
    """One (episode, system) summary with optional grade and the 8 binary
    annotation attributes. The attributes are stored but not consumed by any
    operation in this package."""

    episode_id: str
    system_id: str
    summary_text: str
    grade: Grade | None = None
    attributes: tuple[bool, ...] | None = None

    def __post_init__(self) -> None:
        if not self.episode_id or not self.system_id:
            raise ValueError("episode_id and system_id must be non-empty")
        if self.attributes is not None and len(self.attributes) != 8:
            raise ValueError(
                f"record ({self.episode_id}, {self.system_id}): "
                f"attributes must have length 8, got {len(self.attributes)}"
            )

    @property
    def key(self) -> tuple[str, str]:
        return (self.episode_id, self.system_id)


@dataclass(frozen=True)
class Corpus:
    episodes: dict[str, Episode]
    records: dict[tuple[str, str], SummaryRecord]
    systems: tuple[SystemInfo, ...]

    @property
    def system_ids(self) -> tuple[str, ...]:
        return tuple(s.system_id for s in self.systems)

    @property
    def episode_ids(self) -> tuple[str, ...]:
        return tuple(self.episodes)

    def kind_of(self, system_id: str) -> SystemKind:
        for info in self.systems:
            if info.system_id == system_id:
                return info.kind
        raise CorpusError(f"unknown system: {system_id!r}")

    def systems_of_kind(self, *kinds: SystemKind) -> tuple[str, ...]:
        return tuple(s.system_id for s in self.systems if s.kind in kinds)

    def records_for_system(self, system_id: str) -> list[SummaryRecord]:
        return [r for r in self.records.values() if r.system_id == system_id]


_NATURAL_SPLIT = re.compile(r"(\d+)")


def _natural_key(system_id: str) -> tuple:
    return tuple(int(p) if p.isdigit() else p for p in _NATURAL_SPLIT.split(system_id))


def infer_system_kind(system_id: str) -> SystemKind:
    """Prefix rule matching the released partition: R* reference, E* extractive,
    anything else abstractive."""
    if system_id.startswith("R"):
        return SystemKind.REFERENCE
    if system_id.startswith("E"):
        return SystemKind.EXTRACTIVE
    return SystemKind.ABSTRACTIVE


_KIND_RANK = {SystemKind.REFERENCE: 0, SystemKind.EXTRACTIVE: 1, SystemKind.ABSTRACTIVE: 2}


def _default_systems(system_ids: Iterable[str]) -> tuple[SystemInfo, ...]:
    infos = [SystemInfo(sid, infer_system_kind(sid)) for sid in set(system_ids)]
    infos.sort(key=lambda s: (_KIND_RANK[s.kind], _natural_key(s.system_id)))
    return tuple(infos)


def _load_systems_file(path: Path) -> tuple[SystemInfo, ...]:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CorpusError(f"{path}: malformed systems config: {exc.msg}") from exc
    if not isinstance(data, list) or not data:
        raise CorpusError(f"{path}: systems config must be a non-empty list")
    infos = []
    seen = set()
    for i, entry in enumerate(data):
        try:
            sid = str(entry["system_id"])
            kind = SystemKind(entry["kind"])
        except (TypeError, KeyError, ValueError) as exc:
            raise CorpusError(f"{path}: entry {i}: {exc}") from exc
        if sid in seen:
            raise CorpusError(f"{path}: duplicate system {sid!r}")
        seen.add(sid)
        infos.append(SystemInfo(sid, kind))
    return tuple(infos)


def _parse_attributes(raw: object, where: str) -> tuple[bool, ...] | None:
    if raw is None:
        return None
    if not isinstance(raw, list) or not all(isinstance(v, bool) for v in raw):
        raise CorpusError(f"{where}: attributes must be a list of booleans")
    return tuple(raw)


def load_corpus(path: str | Path, strict: bool = False) -> Corpus:
    """Load and validate a corpus from its canonical directory layout.

    strict=True additionally requires the system x episode grid to be
    complete: every listed system has a record for every episode.
    """
    root = Path(path)
    if not root.exists():
        raise CorpusError(f"missing corpus path: {root}")
    if not root.is_dir():
        raise CorpusError(f"corpus path must be a directory: {root}")

    episodes: dict[str, Episode] = {}
    episodes_path = root / EPISODES_FILENAME
    for lineno, obj in read_jsonl(episodes_path, CorpusError):
        try:
            episode = Episode(
                episode_id=str(obj["episode_id"]),
                transcript=str(obj["transcript"]),
                creator_description=str(obj.get("creator_description", "")),
            )
        except (KeyError, ValueError) as exc:
            raise CorpusError(f"{episodes_path}:{lineno}: {exc}") from exc
        if episode.episode_id in episodes:
            raise CorpusError(f"{episodes_path}:{lineno}: duplicate episode {episode.episode_id!r}")
        episodes[episode.episode_id] = episode
    if not episodes:
        raise CorpusError(f"{episodes_path}: no episodes")

    records: dict[tuple[str, str], SummaryRecord] = {}
    records_path = root / RECORDS_FILENAME
    for lineno, obj in read_jsonl(records_path, CorpusError):
        where = f"{records_path}:{lineno}"
        try:
            grade = Grade.parse(obj["grade"]) if obj.get("grade") is not None else None
            record = SummaryRecord(
                episode_id=str(obj["episode_id"]),
                system_id=str(obj["system_id"]),
                summary_text=str(obj.get("summary_text", "")),
                grade=grade,
                attributes=_parse_attributes(obj.get("attributes"), where),
            )
        except (KeyError, ValueError) as exc:
            raise CorpusError(f"{where}: {exc}") from exc
        if record.episode_id not in episodes:
            raise CorpusError(f"{where}: unknown episode {record.episode_id!r}")
        if record.key in records:
            raise CorpusError(f"{where}: duplicate record ({record.episode_id}, {record.system_id})")
        records[record.key] = record
    if not records:
        raise CorpusError(f"{records_path}: no records")

    systems_path = root / SYSTEMS_FILENAME
    if systems_path.exists():
        systems = _load_systems_file(systems_path)
        listed = {s.system_id for s in systems}
        for record in records.values():
            if record.system_id not in listed:
                raise CorpusError(
                    f"{records_path}: record system {record.system_id!r} not in {SYSTEMS_FILENAME}"
                )
    else:
        systems = _default_systems(r.system_id for r in records.values())

    if strict:
        missing = [
            (eid, info.system_id)
            for eid in episodes
            for info in systems
            if (eid, info.system_id) not in records
        ]
        if missing:
            eid, sid = missing[0]
            raise CorpusError(
                f"strict mode: incomplete grid, {len(missing)} missing cells "
                f"(first: episode {eid!r}, system {sid!r})"
            )

    return Corpus(episodes=episodes, records=records, systems=systems)


@dataclass(frozen=True)
class MeanStd:
    mean: float
    std: float


@dataclass(frozen=True)
class CorpusStats:
    n_episodes: int
    n_records: int
    transcript_words: MeanStd
    transcript_sentences: MeanStd
    summary_words: MeanStd
    summary_sentences: MeanStd


def _mean_std(values: list[int]) -> MeanStd:
    n = len(values)
    mean = sum(values) / n
    # Population std (divide by n), the documented convention for
    # whole-corpus descriptive statistics.
    var = sum((v - mean) ** 2 for v in values) / n
    return MeanStd(mean, math.sqrt(var))


def corpus_stats(corpus: Corpus, tokenizer: TokenizerConfig = DEFAULT_TOKENIZER) -> CorpusStats:
    """Length statistics (mean and population std of words and sentences) for
    transcripts and for all summaries. Word counts are token counts under the
    supplied tokenizer config, so punctuation tokens count when split off."""
    if not corpus.episodes or not corpus.records:
        raise CorpusError("corpus_stats requires a non-empty corpus")
    t_words = []
    t_sents = []
    for episode in corpus.episodes.values():
        t_words.append(len(tokenize(episode.transcript, tokenizer)))
        t_sents.append(len(split_sentences(episode.transcript, tokenizer)))
    s_words = []
    s_sents = []
    for record in corpus.records.values():
        s_words.append(len(tokenize(record.summary_text, tokenizer)))
        s_sents.append(len(split_sentences(record.summary_text, tokenizer)))
    return CorpusStats(
        n_episodes=len(corpus.episodes),
        n_records=len(corpus.records),
        transcript_words=_mean_std(t_words),
        transcript_sentences=_mean_std(t_sents),
        summary_words=_mean_std(s_words),
        summary_sentences=_mean_std(s_sents),
    )


def grade_distribution(
    corpus: Corpus, system_filter: Iterable[str] | None = None
) -> dict[Grade, int]:
    """Histogram of grades over the filtered records, keyed in E, G, F, B order.

    Raises when the selection is empty or contains an ungraded record.
    """
    keep = set(system_filter) if system_filter is not None else None
    selected = [
        r for r in corpus.records.values() if keep is None or r.system_id in keep
    ]
    if not selected:
        raise CorpusError("grade_distribution: empty selection")
    counts = {grade: 0 for grade in Grade}
    for record in selected:
        if record.grade is None:
            raise CorpusError(
                f"grade_distribution: ungraded record ({record.episode_id}, {record.system_id})"
            )
        counts[record.grade] += 1
    return counts
