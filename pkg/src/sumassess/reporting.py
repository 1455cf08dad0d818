"""Human-readable tables and plot-data emission.

Rendering is left to external tools: tables are markdown, plot data are CSV
columns (per-system scatter points, cumulative density of scores).
"""

from __future__ import annotations

import csv
import io
from collections.abc import Sequence
from pathlib import Path

from .correlation import CorrelationReport
from .corpus import Corpus, DEFAULT_SCALE, GradeScale
from .errors import ReportError
from .selection import ScoreFileRecord
from .wire import read_jsonl

LEVEL_ORDER = ("system", "summary", "all_examples")


def load_report_file(path: str | Path) -> list[CorrelationReport]:
    reports = []
    for lineno, obj in read_jsonl(path, ReportError):
        try:
            reports.append(CorrelationReport.from_json_dict(obj))
        except (KeyError, TypeError, ValueError) as exc:
            raise ReportError(f"{path}:{lineno}: {exc}") from exc
    if not reports:
        raise ReportError(f"{path}: empty report")
    return reports


def _column_key(report: CorrelationReport) -> tuple[str, str]:
    return (report.level, report.system_filter or "all")


def _format_value(report: CorrelationReport) -> str:
    if report.value is None:
        return "undef"
    text = f"{report.value:.3f}"
    if report.level == "summary" and report.n_skipped:
        text += f" ({report.n_skipped} skipped)"
    return text


def markdown_table(rows: Sequence[tuple[str, list[CorrelationReport]]]) -> str:
    """One row per labeled report group, one column per (level, filter) pair.

    Column order follows level order then first appearance of the filter, so
    re-runs with the same inputs produce identical tables.
    """
    if not rows:
        raise ReportError("no report rows")
    columns: list[tuple[str, str]] = []
    for _, reports in rows:
        for report in reports:
            key = _column_key(report)
            if key not in columns:
                columns.append(key)
    columns.sort(key=lambda c: (LEVEL_ORDER.index(c[0]) if c[0] in LEVEL_ORDER else 99,))
    coefficient = rows[0][1][0].coefficient if rows[0][1] else "?"
    header = ["Scorer"] + [f"{level} [{filt}]" for level, filt in columns]
    lines = [
        f"Correlation table ({coefficient})",
        "",
        "| " + " | ".join(header) + " |",
        "|" + "|".join("---" for _ in header) + "|",
    ]
    for label, reports in rows:
        by_column = {_column_key(r): r for r in reports}
        cells = [label]
        for key in columns:
            report = by_column.get(key)
            cells.append(_format_value(report) if report else "")
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def scatter_csv(
    scores: Sequence[ScoreFileRecord], corpus: Corpus, scale: GradeScale = DEFAULT_SCALE
) -> str:
    """Per-pair points for score-vs-human scatter plots, one row per record:
    episode_id, system_id, kind, score, human_score."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["episode_id", "system_id", "kind", "score", "human_score"])
    for record in sorted(scores, key=lambda r: (r.system_id, r.episode_id)):
        corpus_record = corpus.records.get((record.episode_id, record.system_id))
        if corpus_record is None or corpus_record.grade is None:
            raise ReportError(
                f"no graded corpus record for ({record.episode_id}, {record.system_id})"
            )
        writer.writerow(
            [
                record.episode_id,
                record.system_id,
                corpus.kind_of(record.system_id).value,
                f"{record.score:.6f}",
                f"{scale.score(corpus_record.grade):.6f}",
            ]
        )
    return buffer.getvalue()


def cumulative_density_csv(score_files: dict[str, Sequence[ScoreFileRecord]]) -> str:
    """Long-format cumulative density: scorer, score, rank, cum_fraction,
    sorted by score then scorer."""
    if not score_files:
        raise ReportError("no score files")
    rows = []
    for label, records in score_files.items():
        values = sorted(r.score for r in records)
        n = len(values)
        for rank, value in enumerate(values, start=1):
            rows.append((value, label, rank, rank / n))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["scorer", "score", "rank", "cum_fraction"])
    for value, label, rank, fraction in rows:
        writer.writerow([label, f"{value:.6f}", rank, f"{fraction:.6f}"])
    return buffer.getvalue()
