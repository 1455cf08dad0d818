"""Model-free text similarity: tokenization, n-gram overlap, ROUGE-L, token F1
and triple-overlap F1.

All operations are pure functions of their inputs and safe to call from any
number of threads. ROUGE-L uses a rolling two-row dynamic program so pairs
with transcript-length inputs (thousands of tokens) stay within tens of
kilobytes of working memory.
"""

from __future__ import annotations

import re
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import TripleFileError
from .wire import read_jsonl, write_jsonl_atomic

_TOKEN_RE = re.compile(r"\w+(?:'\w+)?|[^\w\s]", re.UNICODE)
_SENTENCE_RE = re.compile(r"(?<=[.!?])\s+")
_WORD_CHAR_RE = re.compile(r"\w")

PUNCTUATION_MODES = ("split_off", "drop", "keep_attached")
SENTENCE_MODES = ("punct_rule", "provided_offsets")


@dataclass(frozen=True)
class TokenizerConfig:
    """Deterministic tokenizer settings.

    The defaults (lowercase, punctuation split into separate tokens, no
    stemming, no stopword removal) are the documented baseline for every
    metric in this package; change them only together with the tolerance of
    whatever downstream comparison consumes the tokens.
    """

    lowercase: bool = True
    punctuation: str = "split_off"
    sentence_split: str = "punct_rule"

    def __post_init__(self) -> None:
        if self.punctuation not in PUNCTUATION_MODES:
            raise ValueError(f"unknown punctuation mode: {self.punctuation!r}")
        if self.sentence_split not in SENTENCE_MODES:
            raise ValueError(f"unknown sentence split mode: {self.sentence_split!r}")


DEFAULT_TOKENIZER = TokenizerConfig()


def tokenize(text: str, config: TokenizerConfig = DEFAULT_TOKENIZER) -> list[str]:
    """Split text into tokens. Empty or blank text yields an empty list."""
    if not text:
        return []
    if config.punctuation == "keep_attached":
        tokens = text.split()
    else:
        tokens = _TOKEN_RE.findall(text)
        if config.punctuation == "drop":
            tokens = [t for t in tokens if _WORD_CHAR_RE.search(t)]
    if config.lowercase:
        tokens = [t.lower() for t in tokens]
    return tokens


def split_sentences(text: str, config: TokenizerConfig = DEFAULT_TOKENIZER) -> list[str]:
    """Split text into sentences on terminal punctuation followed by whitespace.

    With sentence_split="provided_offsets" the caller supplies pre-split
    sentences elsewhere; calling this function is then an error.
    """
    if config.sentence_split != "punct_rule":
        raise ValueError("sentence splitting requires sentence_split='punct_rule'")
    parts = [p.strip() for p in _SENTENCE_RE.split(text)]
    return [p for p in parts if p]


@dataclass(frozen=True)
class PRF:
    """Precision / recall / F1 triple, each in [0, 1]."""

    precision: float
    recall: float
    f1: float

    @staticmethod
    def from_pr(precision: float, recall: float) -> "PRF":
        if precision + recall == 0.0:
            return PRF(precision, recall, 0.0)
        return PRF(precision, recall, 2.0 * precision * recall / (precision + recall))

    @staticmethod
    def from_counts(overlap: float, n_candidate: int, n_reference: int) -> "PRF":
        p = overlap / n_candidate if n_candidate else 0.0
        r = overlap / n_reference if n_reference else 0.0
        return PRF.from_pr(p, r)


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Length of the longest common subsequence of two token sequences.

    Rolling two-row DP; the row update is vectorized with numpy. Each row
    t[j] = max(prev[j], prev[j-1] + eq[j]) followed by a running maximum
    equals the classic max-of-three recurrence because LCS rows are
    nondecreasing in j.
    """
    if len(a) == 0 or len(b) == 0:
        return 0
    # Iterate over the shorter sequence so the vectorized inner row is long.
    if len(a) > len(b):
        a, b = b, a
    ids: dict[str, int] = {}
    b_codes = np.fromiter((ids.setdefault(tok, len(ids)) for tok in b), dtype=np.int32, count=len(b))
    prev = np.zeros(len(b) + 1, dtype=np.int32)
    curr = np.zeros(len(b) + 1, dtype=np.int32)
    for tok in a:
        code = ids.get(tok, -1)
        candidate = np.maximum(prev[1:], prev[:-1] + (b_codes == code))
        np.maximum.accumulate(candidate, out=curr[1:])
        prev, curr = curr, prev
    return int(prev[-1])


def ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    """Multiset of n-grams as tuples."""
    if n < 1:
        raise ValueError("n-gram order must be >= 1")
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate: Sequence[str], reference: Sequence[str], n: int) -> PRF:
    """Clipped n-gram overlap: precision over candidate n-grams, recall over
    reference n-grams. Degenerate short inputs yield PRF(0, 0, 0)."""
    cand = ngram_counts(candidate, n)
    ref = ngram_counts(reference, n)
    overlap = sum((cand & ref).values())
    return PRF.from_counts(overlap, sum(cand.values()), sum(ref.values()))


def rouge_l(candidate: Sequence[str], reference: Sequence[str]) -> PRF:
    """ROUGE-L over full token sequences: LCS / |candidate| precision,
    LCS / |reference| recall. Empty inputs yield zeros."""
    lcs = lcs_length(candidate, reference)
    return PRF.from_counts(lcs, len(candidate), len(reference))


def token_f1(answer_a: Sequence[str], answer_b: Sequence[str]) -> float:
    """F1 over token multisets, symmetric in its arguments.

    Two empty answers score 1.0 (both sides abstain identically); a one-sided
    empty answer scores 0.0.
    """
    if not answer_a and not answer_b:
        return 1.0
    if not answer_a or not answer_b:
        return 0.0
    overlap = sum((Counter(answer_a) & Counter(answer_b)).values())
    return PRF.from_counts(overlap, len(answer_a), len(answer_b)).f1


def _normalize_field(text: str) -> str:
    return " ".join(text.lower().split())


@dataclass(frozen=True, order=True)
class Triple:
    """A (subject, relation, object) fact. Fields are normalized to lowercase,
    whitespace-collapsed form on construction and must be non-empty."""

    subject: str
    relation: str
    object: str

    def __post_init__(self) -> None:
        for name in ("subject", "relation", "object"):
            norm = _normalize_field(getattr(self, name))
            if not norm:
                raise ValueError(f"triple field {name!r} is empty after normalization")
            object.__setattr__(self, name, norm)


TRIPLE_MATCHING_MODES = ("exact", "token_overlap")


def _fields_match(a: Triple, b: Triple, threshold: float, config: TokenizerConfig) -> bool:
    for name in ("subject", "relation", "object"):
        fa = tokenize(getattr(a, name), config)
        fb = tokenize(getattr(b, name), config)
        if token_f1(fa, fb) < threshold:
            return False
    return True


def triple_f1(
    candidate_triples: Iterable[Triple],
    reference_triples: Iterable[Triple],
    matching: str = "exact",
    threshold: float = 0.8,
    config: TokenizerConfig = DEFAULT_TOKENIZER,
) -> PRF:
    """PRF over matched triples.

    exact: set intersection on normalized triples. token_overlap: a candidate
    matches a reference when every field pair has token_f1 >= threshold;
    matching is greedy over both sides in sorted order so results are
    deterministic. Each reference is consumed by at most one candidate.
    """
    if matching not in TRIPLE_MATCHING_MODES:
        raise ValueError(f"unknown triple matching mode: {matching!r}")
    cand = sorted(set(candidate_triples))
    ref = sorted(set(reference_triples))
    if matching == "exact":
        overlap = len(set(cand) & set(ref))
    else:
        unmatched = list(ref)
        overlap = 0
        for c in cand:
            for i, r in enumerate(unmatched):
                if _fields_match(c, r, threshold, config):
                    del unmatched[i]
                    overlap += 1
                    break
    return PRF.from_counts(overlap, len(cand), len(ref))


TRIPLE_SOURCES = ("document", "summary", "reference")


@dataclass(frozen=True)
class TripleRecord:
    """One line of a triple file: a triple tagged with its origin."""

    episode_id: str
    source: str
    triple: Triple
    system_id: str | None = None

    def __post_init__(self) -> None:
        if self.source not in TRIPLE_SOURCES:
            raise ValueError(f"unknown triple source: {self.source!r}")


def load_triples(path: str | Path) -> list[TripleRecord]:
    """Read a line-delimited triple file.

    Fields per line: episode_id, subject, relation, object, source, and an
    optional system_id (required for source="summary").
    """
    records: list[TripleRecord] = []
    for lineno, obj in read_jsonl(path, TripleFileError):
        try:
            triple = Triple(str(obj["subject"]), str(obj["relation"]), str(obj["object"]))
            record = TripleRecord(
                episode_id=str(obj["episode_id"]),
                source=str(obj["source"]),
                triple=triple,
                system_id=str(obj["system_id"]) if obj.get("system_id") is not None else None,
            )
        except (KeyError, ValueError) as exc:
            raise TripleFileError(f"{path}:{lineno}: {exc}") from exc
        records.append(record)
    return records


def write_triples(path: str | Path, records: Iterable[TripleRecord]) -> int:
    def as_dict(rec: TripleRecord) -> dict:
        obj = {
            "episode_id": rec.episode_id,
            "source": rec.source,
            "subject": rec.triple.subject,
            "relation": rec.triple.relation,
            "object": rec.triple.object,
        }
        if rec.system_id is not None:
            obj["system_id"] = rec.system_id
        return obj

    return write_jsonl_atomic(path, (as_dict(r) for r in records))
