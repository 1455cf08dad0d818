"""Command-line surface.

Subcommands compose through files only (score files, split plans, report
files); there is no hidden state between invocations, and identical
invocations produce byte-identical outputs. Outputs are written atomically,
so a failing command leaves nothing behind.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import correlation, reporting, selection, splits
from .corpus import (
    DEFAULT_SCALE,
    Corpus,
    Grade,
    GradeScale,
    SystemKind,
    corpus_stats,
    grade_distribution,
    load_corpus,
)
from .errors import ReportError, ScoreFileError, ToolkitError
from .lexical import (
    DEFAULT_TOKENIZER,
    TokenizerConfig,
    load_triples,
    rouge_l,
    rouge_n,
    tokenize,
    triple_f1,
)
from .selection import BrassItem, ScoreFileRecord, load_score_file, score_map, write_score_file
from .wire import atomic_write_text, read_jsonl, write_jsonl_atomic

METRICS = ("rouge_l_ref", "rouge_n_ref", "rouge_l_doc", "triple_f1_ref", "triple_f1_doc")
POPULATIONS = ("asis", "inc", "exc")


def _parse_list(text: str | None) -> list[str] | None:
    if text is None:
        return None
    items = [part.strip() for part in text.split(",") if part.strip()]
    return items or None


def _parse_scale(text: str | None) -> GradeScale:
    if text is None:
        return DEFAULT_SCALE
    mapping = {}
    for part in text.split(","):
        letter, _, value = part.partition("=")
        mapping[Grade.parse(letter.strip())] = float(value)
    return GradeScale(tuple(mapping.items()))


def _tokenizer_from_args(args: argparse.Namespace) -> TokenizerConfig:
    return TokenizerConfig(
        lowercase=not args.no_lowercase,
        punctuation=args.punctuation,
    )


def _matrix_from_score_file(path: str) -> tuple[correlation.ScoreMatrix, str]:
    records = load_score_file(path)
    scorers = sorted({r.scorer_id for r in records})
    if len(scorers) != 1:
        raise ScoreFileError(f"{path}: expected a single scorer, found {scorers}")
    matrix = correlation.ScoreMatrix.from_entries(
        (r.system_id, r.episode_id, r.score) for r in records
    )
    return matrix, scorers[0]


def cmd_metric(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus, strict=args.strict)
    tokenizer = _tokenizer_from_args(args)
    scorer_id = args.scorer_id or args.metric

    systems = list(corpus.system_ids)
    if args.metric.endswith("_ref") and not args.include_reference:
        # The reference cannot grade itself; drop reference-kind systems from
        # the candidate axis by default.
        reference = set(corpus.systems_of_kind(SystemKind.REFERENCE))
        systems = [s for s in systems if s not in reference]

    out_records: list[ScoreFileRecord] = []

    if args.metric.startswith("rouge"):
        target_text = {
            eid: (ep.creator_description if args.metric.endswith("_ref") else ep.transcript)
            for eid, ep in corpus.episodes.items()
        }
        target_tokens = {eid: tokenize(text, tokenizer) for eid, text in target_text.items()}
        for sid in systems:
            for eid in corpus.episode_ids:
                record = corpus.records.get((eid, sid))
                if record is None:
                    continue
                cand = tokenize(record.summary_text, tokenizer)
                if args.metric == "rouge_n_ref":
                    prf = rouge_n(cand, target_tokens[eid], args.n)
                else:
                    prf = rouge_l(cand, target_tokens[eid])
                out_records.append(ScoreFileRecord(eid, sid, scorer_id, prf.f1))
    else:
        if not args.triples:
            raise ToolkitError(f"metric {args.metric} requires --triples")
        triples = load_triples(args.triples)
        summary_triples: dict[tuple[str, str], set] = {}
        target_triples: dict[str, set] = {}
        target_source = "reference" if args.metric.endswith("_ref") else "document"
        for rec in triples:
            if rec.source == "summary":
                if rec.system_id is None:
                    raise ToolkitError(f"summary triple without system_id for {rec.episode_id}")
                summary_triples.setdefault((rec.episode_id, rec.system_id), set()).add(rec.triple)
            elif rec.source == target_source:
                target_triples.setdefault(rec.episode_id, set()).add(rec.triple)
        for sid in systems:
            for eid in corpus.episode_ids:
                if (eid, sid) not in corpus.records:
                    continue
                prf = triple_f1(
                    summary_triples.get((eid, sid), set()),
                    target_triples.get(eid, set()),
                    matching=args.triple_matching,
                    threshold=args.triple_threshold,
                    config=tokenizer,
                )
                out_records.append(ScoreFileRecord(eid, sid, scorer_id, prf.f1))

    n = write_score_file(args.out, out_records)
    print(f"wrote {n} scores ({scorer_id}) to {args.out}")
    return 0


def _population_matrices(
    x: correlation.ScoreMatrix, y: correlation.ScoreMatrix, corpus: Corpus, population: str
) -> tuple[correlation.ScoreMatrix, correlation.ScoreMatrix]:
    if population == "asis":
        return x, y
    if population == "inc":
        drop = set(corpus.systems_of_kind(SystemKind.REFERENCE))
    elif population == "exc":
        drop = set(corpus.systems_of_kind(SystemKind.REFERENCE, SystemKind.EXTRACTIVE))
    else:
        raise ToolkitError(f"unknown population: {population!r}")
    keep = [s for s in x.system_ids if s not in drop]
    return correlation.filter_systems(x, keep), correlation.filter_systems(y, keep)


def cmd_correlate(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus, strict=args.strict)
    scale = _parse_scale(args.scale)

    x, x_scorer = _matrix_from_score_file(args.scores_x)
    if args.scores_y == "human":
        y = correlation.matrix_from_grades(corpus, scale)
        y_scorer = "human"
    else:
        y, y_scorer = _matrix_from_score_file(args.scores_y)

    keep = _parse_list(args.filter_systems)
    if keep:
        x = correlation.filter_systems(x, keep)

    common_systems = [s for s in x.system_ids if s in set(y.system_ids)]
    common_episodes = [e for e in x.episode_ids if e in set(y.episode_ids)]
    if len(common_systems) < 2 or not common_episodes:
        raise ToolkitError(
            f"matrices share {len(common_systems)} systems and "
            f"{len(common_episodes)} episodes, cannot correlate"
        )
    x = x.reindex(common_systems, common_episodes)
    y = y.reindex(common_systems, common_episodes)

    levels = _parse_list(args.levels) or ["system", "summary"]
    populations = _parse_list(args.populations) or ["asis"]
    reports = []
    for population in populations:
        x_pop, y_pop = _population_matrices(x, y, corpus, population)
        for level in levels:
            try:
                report = correlation.correlate_level(x_pop, y_pop, level, args.coefficient)
            except correlation.UndefinedCorrelationError:
                report = correlation.CorrelationReport(
                    level, args.coefficient, None, n_used=0, n_skipped=x_pop.n_episodes
                )
            report = report.with_context(system_filter=population, scorer=x_scorer)
            reports.append(report)
            shown = "undefined" if report.value is None else f"{report.value:.4f}"
            print(
                f"{x_scorer} vs {y_scorer} [{population}] {level} "
                f"{args.coefficient}: {shown} (n={report.n_used}, skipped={report.n_skipped})"
            )
    write_jsonl_atomic(args.out, (r.to_json_dict() for r in reports))
    return 0


def cmd_splits(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus, strict=args.strict)
    records = sorted(corpus.records.keys())
    out_dir = Path(args.out)
    written = []
    if args.protocol == "all_shuffled_kfold":
        plans = splits.repeated_kfold(records, args.k, args.repeats, args.seed, args.train_ratio)
        for plan in plans:
            path = out_dir / f"all_shuffled_k{plan.k}_seed{plan.seed}.plan.json"
            splits.write_plan(path, plan)
            written.append(path)
    elif args.protocol == "holdout_system":
        if not args.held_system:
            raise ToolkitError("holdout_system requires --held-system")
        plan = splits.holdout_system(records, corpus, args.held_system, args.seed, args.train_ratio)
        path = out_dir / f"holdout_system_{args.held_system}_seed{plan.seed}.plan.json"
        splits.write_plan(path, plan)
        written.append(path)
    elif args.protocol == "holdout_document":
        if args.held_episodes:
            selection_arg: float | list[str] = _parse_list(args.held_episodes) or []
        elif args.held_fraction is not None:
            selection_arg = args.held_fraction
        else:
            raise ToolkitError("holdout_document requires --held-episodes or --held-fraction")
        plan = splits.holdout_document(records, corpus, selection_arg, args.seed, args.train_ratio)
        path = out_dir / f"holdout_document_seed{plan.seed}.plan.json"
        splits.write_plan(path, plan)
        written.append(path)
    else:
        raise ToolkitError(f"unknown protocol: {args.protocol!r}")
    for path in written:
        print(f"wrote {path}")
    return 0


def _load_brass_items(path: str) -> list[BrassItem]:
    items = []
    for lineno, obj in read_jsonl(path, ToolkitError):
        try:
            items.append(
                BrassItem(
                    key=str(obj["episode_id"]),
                    description=str(obj["description"]),
                    show_description=(
                        str(obj["show_description"])
                        if obj.get("show_description") is not None
                        else None
                    ),
                    siblings=tuple(str(s) for s in obj.get("siblings", [])),
                )
            )
        except KeyError as exc:
            raise ToolkitError(f"{path}:{lineno}: missing field {exc}") from exc
    return items


def cmd_select(args: argparse.Namespace) -> int:
    records = load_score_file(args.scores)
    scores = score_map(records, args.scorer)
    scorer_id = args.scorer or records[0].scorer_id

    if args.brass_items:
        items = _load_brass_items(args.brass_items)
        decisions = selection.brass_filter(
            items,
            sibling_threshold=args.brass_threshold,
            show_threshold=args.brass_threshold,
        )
        covered = {item.key for item in items}
        missing = sorted({k[0] for k in scores} - covered)
        if missing:
            raise ToolkitError(
                f"brass items missing for {len(missing)} episodes (first: {missing[0]!r})"
            )
        filter_out = args.filter_out or f"{args.out}.filter.jsonl"
        write_jsonl_atomic(
            filter_out,
            (
                {"episode_id": key, "keep": d.keep, "reason": d.reason}
                for key, d in sorted(decisions.items())
            ),
        )
        dropped = {key for key, d in decisions.items() if not d.keep}
        scores = {key: s for key, s in scores.items() if key[0] not in dropped}
        print(f"brass filter dropped {len(dropped)} episodes, wrote {filter_out}")
        if args.k > len(scores):
            raise ToolkitError(
                f"k={args.k} exceeds the {len(scores)} scores remaining after filtering"
            )

    chosen = selection.select_extremes(scores, args.k, args.mode)
    write_jsonl_atomic(
        args.out,
        (
            {
                "episode_id": key[0],
                "system_id": key[1],
                "scorer_id": scorer_id,
                "score": scores[key],
                "rank": rank,
            }
            for rank, key in enumerate(chosen, start=1)
        ),
    )
    print(f"wrote {len(chosen)} {args.mode} selections to {args.out}")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    if args.mode == "table":
        if not args.reports:
            raise ReportError("table mode requires --reports")
        rows = []
        for path in args.reports:
            reports = reporting.load_report_file(path)
            scorers = {r.scorer for r in reports if r.scorer}
            label = scorers.pop() if len(scorers) == 1 else Path(path).stem
            rows.append((label, reports))
        atomic_write_text(args.out, reporting.markdown_table(rows))
    elif args.mode == "scatter":
        if not args.scores or len(args.scores) != 1:
            raise ReportError("scatter mode requires exactly one --scores file")
        corpus = load_corpus(args.corpus, strict=args.strict)
        records = load_score_file(args.scores[0])
        atomic_write_text(args.out, reporting.scatter_csv(records, corpus, _parse_scale(args.scale)))
    elif args.mode == "cdf":
        if not args.scores:
            raise ReportError("cdf mode requires --scores")
        score_files = {}
        for path in args.scores:
            records = load_score_file(path)
            scorers = sorted({r.scorer_id for r in records})
            label = scorers[0] if len(scorers) == 1 else Path(path).stem
            if label in score_files:
                label = Path(path).stem
            score_files[label] = records
        atomic_write_text(args.out, reporting.cumulative_density_csv(score_files))
    else:
        raise ReportError(f"unknown report mode: {args.mode!r}")
    print(f"wrote {args.out}")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus, strict=args.strict)
    tokenizer = _tokenizer_from_args(args)
    stats = corpus_stats(corpus, tokenizer)
    keep = _parse_list(args.filter_systems)
    lines = [
        f"episodes: {stats.n_episodes}",
        f"systems: {len(corpus.systems)}",
        f"records: {stats.n_records}",
        f"transcript words: {stats.transcript_words.mean:.1f} +/- {stats.transcript_words.std:.1f}",
        f"transcript sentences: {stats.transcript_sentences.mean:.1f} +/- {stats.transcript_sentences.std:.1f}",
        f"summary words: {stats.summary_words.mean:.1f} +/- {stats.summary_words.std:.1f}",
        f"summary sentences: {stats.summary_sentences.mean:.1f} +/- {stats.summary_sentences.std:.1f}",
    ]
    graded = [r for r in corpus.records.values() if r.grade is not None]
    if graded and (keep is None or any(r.system_id in set(keep) for r in graded)):
        distribution = grade_distribution(corpus, keep)
        total = sum(distribution.values())
        label = ",".join(keep) if keep else "all systems"
        lines.append(f"grades ({label}, n={total}):")
        for grade in Grade:
            count = distribution[grade]
            lines.append(f"  {grade.name.title():9s} {count:6d}  ({count / total:.3f})")
    text = "\n".join(lines) + "\n"
    if args.out:
        atomic_write_text(args.out, text)
        print(f"wrote {args.out}")
    else:
        print(text, end="")
    return 0


def _add_common(parser: argparse.ArgumentParser, *, corpus: bool = True) -> None:
    if corpus:
        parser.add_argument("--corpus", required=True, help="corpus directory (canonical layout)")
        parser.add_argument("--strict", action="store_true", help="require a complete system x episode grid")
    parser.add_argument("--out", required=True, help="output path")


def _add_tokenizer(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--no-lowercase", action="store_true", help="keep original casing")
    parser.add_argument(
        "--punctuation",
        choices=("split_off", "drop", "keep_attached"),
        default=DEFAULT_TOKENIZER.punctuation,
        help="punctuation handling (default: %(default)s)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sumassess",
        description="Summary assessment toolkit: metrics, correlations, splits, selection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metric", help="compute a model-free metric over the corpus")
    _add_common(p)
    _add_tokenizer(p)
    p.add_argument("--metric", choices=METRICS, required=True)
    p.add_argument("--n", type=int, default=1, help="n-gram order for rouge_n_ref")
    p.add_argument("--triples", help="triple file (required for triple metrics)")
    p.add_argument("--triple-matching", choices=("exact", "token_overlap"), default="exact")
    p.add_argument("--triple-threshold", type=float, default=0.8)
    p.add_argument("--scorer-id", help="scorer id for the output file (default: metric name)")
    p.add_argument(
        "--include-reference",
        action="store_true",
        help="keep reference-kind systems on the candidate axis of *_ref metrics",
    )
    p.set_defaults(fn=cmd_metric)

    p = sub.add_parser("correlate", help="correlate two score files (or scores vs human grades)")
    _add_common(p)
    p.add_argument("--scores-x", required=True, help="score file for metric X")
    p.add_argument("--scores-y", required=True, help="score file for metric Y, or 'human'")
    p.add_argument("--levels", default="system,summary", help="comma list of system,summary,all_examples")
    p.add_argument("--coefficient", choices=correlation.COEFFICIENTS, default="spearman")
    p.add_argument(
        "--populations",
        default="asis",
        help="comma list of asis,inc,exc (inc drops reference systems, exc also drops extractive)",
    )
    p.add_argument("--filter-systems", help="comma list of systems to keep before aligning")
    p.add_argument("--scale", help="grade scale override, e.g. E=3,G=2,F=1,B=0")
    p.set_defaults(fn=cmd_correlate)

    p = sub.add_parser("splits", help="plan train/valid/test splits")
    _add_common(p)
    p.add_argument("--protocol", choices=splits.PROTOCOLS, required=True)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--train-ratio", type=float, default=0.8)
    p.add_argument("--held-system")
    p.add_argument("--held-episodes", help="comma list of episode ids")
    p.add_argument("--held-fraction", type=float)
    p.set_defaults(fn=cmd_splits)

    p = sub.add_parser("select", help="select top/bottom-k keys from a score file")
    _add_common(p, corpus=False)
    p.add_argument("--scores", required=True)
    p.add_argument("--scorer", help="scorer id when the file holds several")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=selection.SELECT_MODES, required=True)
    p.add_argument("--brass-items", help="brass heuristic items file (enables the filter)")
    p.add_argument("--brass-threshold", type=float, default=0.95)
    p.add_argument("--filter-out", help="where to write filter decisions")
    p.set_defaults(fn=cmd_select)

    p = sub.add_parser("report", help="emit markdown tables or plot-data CSV")
    p.add_argument("--mode", choices=("table", "scatter", "cdf"), required=True)
    p.add_argument("--reports", nargs="*", help="correlation report files (table mode)")
    p.add_argument("--scores", nargs="*", help="score files (scatter/cdf modes)")
    p.add_argument("--corpus", help="corpus directory (scatter mode)")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--scale", help="grade scale override (scatter mode)")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_report)

    p = sub.add_parser("stats", help="corpus length statistics and grade distribution")
    p.add_argument("--corpus", required=True)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--filter-systems", help="comma list of systems for the grade histogram")
    p.add_argument("--out", help="optional output file (prints to stdout otherwise)")
    _add_tokenizer(p)
    p.set_defaults(fn=cmd_stats)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
