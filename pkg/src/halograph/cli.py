"""Command-line interface.

Subcommands::

    validate  check bundles against the wire-format invariants
    score     score bundles and write a report plus a run manifest
    eval      compare a report's scores against bundle annotations
    synth     generate a seeded synthetic corpus (with reference scores)
    sweep     rescore a corpus over a hyperparameter grid
    rerun     repeat a scoring run from its manifest

Configuration is resolved in three layers, later wins: built-in
defaults, a JSON config file (the ``HALOGRAPH_CONFIG`` environment
variable or ``--config``), then explicit flags.

Exit codes: 0 success, 2 malformed or invalid input (parse, integrity,
validation, configuration), 3 missing contradiction score for a
required sentence pair, 4 evaluation requested without annotations.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__, baselines, kernels
from .bundle import load_corpus, validate_bundle, write_corpus
from .config import PASSAGE_METHODS, PROJECTION_KINDS, ISOLATED_POLICIES, Config
from .errors import (
    ContractViolation,
    DataError,
    HalographError,
    MissingAnnotationsError,
    MissingNliScoreError,
)
from .evaluation import (
    AUC_KINDS,
    LABEL_SETUPS,
    evaluate_passage_scores,
    evaluate_sentence_scores,
    project,
    resolve_projection,
)
from .graph import graph_summary
from .oracle import score_file as oracle_score_file
from .pipeline import (
    build_manifest,
    clip_topk,
    ensure_valid,
    read_manifest,
    read_report,
    score_corpus,
    write_manifest,
    write_report,
)
from .synth import SynthShape, generate_corpus


def entry() -> None:
    sys.exit(main())


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MissingNliScoreError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except MissingAnnotationsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except HalographError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="halograph",
        description="Graph-aware uncertainty scoring for generated passages.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    config_parent = argparse.ArgumentParser(add_help=False)
    group = config_parent.add_argument_group("scoring configuration")
    group.add_argument("--config", help="JSON config file (overrides HALOGRAPH_CONFIG)")
    group.add_argument("--alpha", type=float, help="quantile level for the sentence summary")
    group.add_argument("--beta", type=float, help="weight of propagated entity uncertainty")
    group.add_argument(
        "--lambda", dest="lambda_", type=float, help="entity/global mixing weight"
    )
    group.add_argument("--top-k", dest="top_k", type=int, help="top-k width of the bundles")
    group.add_argument(
        "--projection-sentence",
        choices=PROJECTION_KINDS,
        help="projection for sentence scores",
    )
    group.add_argument(
        "--projection-passage",
        choices=PROJECTION_KINDS,
        help="projection for passage scores",
    )
    group.add_argument(
        "--isolated",
        dest="isolated",
        choices=ISOLATED_POLICIES,
        help="how graph calibration treats sentences without neighbors",
    )

    p_validate = sub.add_parser(
        "validate", parents=[config_parent], help="check bundles against the format invariants"
    )
    p_validate.add_argument("input", help="JSON Lines bundle file")
    p_validate.add_argument("--json", action="store_true", help="machine-readable output")
    p_validate.add_argument(
        "--dump-graph", action="store_true", help="print adjacency and triple counts as JSON"
    )
    p_validate.set_defaults(func=cmd_validate)

    p_score = sub.add_parser(
        "score", parents=[config_parent], help="score bundles into a report"
    )
    p_score.add_argument("input", help="JSON Lines bundle file")
    p_score.add_argument("--out", required=True, help="report path (JSON Lines)")
    p_score.add_argument(
        "--substitute",
        choices=baselines.SUBSTITUTE_METRICS,
        help="swap a baseline in for part of the pipeline",
    )
    p_score.add_argument(
        "--dump-graph", action="store_true", help="print adjacency and triple counts as JSON"
    )
    p_score.set_defaults(func=cmd_score)

    p_eval = sub.add_parser(
        "eval", parents=[config_parent], help="evaluate a report against annotations"
    )
    p_eval.add_argument("report", help="report written by the score command")
    p_eval.add_argument("bundles", help="the bundle file the report was scored from")
    p_eval.add_argument("--out", help="write results as JSON")
    p_eval.add_argument(
        "--passage-method",
        choices=PASSAGE_METHODS,
        default="graph",
        help="which passage aggregate to correlate with human scores",
    )
    p_eval.add_argument("--auc", choices=AUC_KINDS, default="roc", help="AUC variant")
    p_eval.add_argument(
        "--baseline",
        action="append",
        default=[],
        metavar="METRIC",
        help=f"also evaluate a baseline ({', '.join(baselines.SENTENCE_METRICS)}, or 'all')",
    )
    p_eval.set_defaults(func=cmd_eval)

    p_synth = sub.add_parser(
        "synth", parents=[config_parent], help="generate a seeded synthetic corpus"
    )
    p_synth.add_argument("--out", required=True, help="bundle output path (JSON Lines)")
    p_synth.add_argument("--seed", type=int, default=0, help="RNG seed")
    p_synth.add_argument("--num-passages", type=int, default=100)
    p_synth.add_argument("--sentence-range", default="2:6", metavar="LO:HI")
    p_synth.add_argument("--token-range", default="4:12", metavar="LO:HI")
    p_synth.add_argument("--entity-prob", type=float, default=0.35)
    p_synth.add_argument("--triple-prob", type=float, default=0.4)
    p_synth.add_argument("--link-prob", type=float, default=0.35)
    p_synth.add_argument(
        "--unlabeled", action="store_true", help="omit sentence labels and human scores"
    )
    p_synth.add_argument(
        "--no-oracle",
        action="store_true",
        help="skip writing the independent reference scores",
    )
    p_synth.set_defaults(func=cmd_synth)

    p_sweep = sub.add_parser(
        "sweep", parents=[config_parent], help="rescore over a hyperparameter grid"
    )
    p_sweep.add_argument("input", help="JSON Lines bundle file")
    p_sweep.add_argument("--out", required=True, help="text table output path")
    p_sweep.add_argument("--alpha-grid", metavar="LIST", help="comma-separated alpha values")
    p_sweep.add_argument("--beta-grid", metavar="LIST", help="comma-separated beta values")
    p_sweep.add_argument("--lambda-grid", metavar="LIST", help="comma-separated lambda values")
    p_sweep.add_argument("--k-grid", metavar="LIST", help="comma-separated top-k widths")
    p_sweep.add_argument(
        "--passage-method",
        choices=PASSAGE_METHODS,
        default="graph",
        help="which passage aggregate to correlate with human scores",
    )
    p_sweep.add_argument("--auc", choices=AUC_KINDS, default="roc", help="AUC variant")
    p_sweep.set_defaults(func=cmd_sweep)

    p_rerun = sub.add_parser("rerun", help="repeat a scoring run from its manifest")
    p_rerun.add_argument("manifest", help="manifest written by the score command")
    p_rerun.add_argument("--out", help="override the report output path")
    p_rerun.set_defaults(func=cmd_rerun)

    return parser


def resolve_config(args) -> Config:
    """Defaults, then config file (flag or environment), then flags."""
    config = Config()
    path = getattr(args, "config", None) or os.environ.get("HALOGRAPH_CONFIG")
    if path:
        config = Config.from_file(path)
    overrides = {}
    for attr, field in (
        ("alpha", "alpha"),
        ("beta", "beta"),
        ("lambda_", "lambda_"),
        ("top_k", "k"),
        ("projection_sentence", "sentence_projection"),
        ("projection_passage", "passage_projection"),
        ("isolated", "isolated_sentence_policy"),
    ):
        value = getattr(args, attr, None)
        if value is not None:
            overrides[field] = value
    return config.replace(**overrides) if overrides else config


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    config = resolve_config(args)
    bundles = load_corpus(args.input)
    if not bundles:
        raise DataError(f"{args.input}: no passage records found")
    problems = []
    for bundle in bundles:
        for violation in validate_bundle(bundle, config):
            problems.append((bundle.passage_id, violation))

    if args.dump_graph:
        for bundle in bundles:
            print(json.dumps(graph_summary(bundle), indent=2))

    if args.json:
        print(
            json.dumps(
                {
                    "input": args.input,
                    "passages": len(bundles),
                    "violations": [
                        {
                            "passage_id": passage_id,
                            "field": v.field,
                            "rule": v.rule,
                            "message": v.message,
                        }
                        for passage_id, v in problems
                    ],
                },
                indent=2,
            )
        )
    else:
        for passage_id, violation in problems:
            print(f"{args.input}: {passage_id}: {violation}", file=sys.stderr)
        status = "failed" if problems else "ok"
        print(
            f"{args.input}: {len(bundles)} passage(s), "
            f"{len(problems)} violation(s): {status}"
        )
    return 2 if problems else 0


def cmd_score(args) -> int:
    config = resolve_config(args)
    bundles = load_corpus(args.input)
    if not bundles:
        raise DataError(f"{args.input}: no passage records found")
    ensure_valid(bundles, config)

    if args.dump_graph:
        for bundle in bundles:
            print(json.dumps(graph_summary(bundle), indent=2))

    report = score_corpus(bundles, config, substitute=args.substitute, skip_validation=True)
    write_report(report, args.out)
    manifest = build_manifest(
        report, command="score", input_path=str(args.input), output_path=str(args.out)
    )
    manifest_path = write_manifest(manifest, args.out)

    sentences = sum(len(p.sentence_scores) for p in report.passages)
    tokens = sum(len(p.token_scores) for p in report.passages)
    warned = sum(1 for p in report.passages if p.warnings)
    print(
        f"scored {len(report.passages)} passage(s), {sentences} sentence(s), "
        f"{tokens} token(s) -> {args.out}"
    )
    print(f"kernel backend: {kernels.backend()}; manifest: {manifest_path}")
    if warned:
        print(f"{warned} passage(s) produced warnings; see the manifest for details")
    return 0


def cmd_synth(args) -> int:
    config = resolve_config(args)
    shape = SynthShape(
        num_passages=args.num_passages,
        sentence_range=_parse_range(args.sentence_range, "--sentence-range"),
        token_range=_parse_range(args.token_range, "--token-range"),
        k=config.k,
        entity_prob=args.entity_prob,
        triple_prob=args.triple_prob,
        link_prob=args.link_prob,
        labeled=not args.unlabeled,
    )
    bundles = generate_corpus(args.seed, shape)
    write_corpus(bundles, args.out)
    print(f"wrote {len(bundles)} passage(s) -> {args.out} (seed {args.seed})")

    if not args.no_oracle:
        oracle_path = str(args.out) + ".oracle.jsonl"
        oracle_score_file(
            args.out,
            oracle_path,
            alpha=config.alpha,
            beta=config.beta,
            lam=config.lambda_,
            sentence_projection=config.sentence_projection,
            passage_projection=config.passage_projection,
            isolated_sentence_policy=config.isolated_sentence_policy,
        )
        print(f"wrote reference scores -> {oracle_path}")
    return 0


def cmd_eval(args) -> int:
    config = resolve_config(args)
    header, records = read_report(args.report)
    bundles = load_corpus(args.bundles)
    ensure_valid(bundles, config)
    by_id = {bundle.passage_id: bundle for bundle in bundles}

    warnings: list[str] = []
    matched = []
    for record in records:
        bundle = by_id.get(record.get("passage_id"))
        if bundle is None:
            raise DataError(
                f"report passage {record.get('passage_id')!r} has no bundle "
                f"in {args.bundles}"
            )
        matched.append((bundle, record))
    unreported = set(by_id) - {record["passage_id"] for _, record in matched}
    if unreported:
        warnings.append(
            f"{len(unreported)} bundle(s) absent from the report were ignored"
        )

    # Pooled sentence-level detection for the main scores.
    main_scores: list[float] = []
    main_labels: list[float] = []
    for bundle, record in matched:
        if bundle.sentence_labels is None:
            continue
        for sentence in record["sentences"]:
            main_scores.append(sentence["projected_uncertainty"])
        main_labels.extend(bundle.sentence_labels)

    # Passage-level agreement for the chosen aggregate.
    passage_scores: list[float] = []
    human_scores: list[float] = []
    for bundle, record in matched:
        if bundle.passage_human_score is None:
            continue
        passage_scores.append(record["passage"][args.passage_method]["projected"])
        human_scores.append(bundle.passage_human_score)

    if not main_labels and not human_scores:
        raise MissingAnnotationsError(
            f"{args.bundles}: no sentence labels and no passage scores; "
            "nothing to evaluate against"
        )
    if not main_labels:
        warnings.append("no sentence labels found; skipping detection AUCs")
    if not human_scores:
        warnings.append("no passage human scores found; skipping correlations")

    methods: dict[str, dict] = {}
    methods[f"main ({args.passage_method})"] = _method_results(
        main_scores, main_labels, passage_scores, human_scores, auc_kind=args.auc
    )

    requested = list(args.baseline)
    if "all" in requested:
        requested = list(baselines.SENTENCE_METRICS)
    for metric in dict.fromkeys(requested):  # dedupe, keep order
        if metric not in baselines.SENTENCE_METRICS:
            raise ContractViolation(
                f"unknown baseline {metric!r}; "
                f"expected one of {baselines.SENTENCE_METRICS} or 'all'"
            )
        methods[f"baseline {metric}"] = _baseline_results(
            metric, matched, config, auc_kind=args.auc, warnings=warnings
        )

    payload = {
        "report": str(args.report),
        "bundles": str(args.bundles),
        "auc_kind": args.auc,
        "passage_method": args.passage_method,
        "num_passages": len(matched),
        "num_labeled_sentences": len(main_labels),
        "num_scored_passages": len(human_scores),
        "methods": methods,
        "warnings": warnings,
    }
    print(_format_eval_table(methods))
    for warning in warnings:
        print(f"note: {warning}", file=sys.stderr)
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        print(f"wrote results -> {args.out}")
    return 0


def _method_results(
    sentence_scores, sentence_labels, passage_scores, human_scores, *, auc_kind
) -> dict:
    out: dict = {"sentence": None, "passage": None}
    if sentence_labels:
        detection = evaluate_sentence_scores(
            sentence_scores, sentence_labels, auc_kind=auc_kind
        )
        out["sentence"] = {
            result.setup: {
                "auc": result.auc,
                "positives": result.num_positive,
                "negatives": result.num_negative,
                **({"note": result.note} if result.note else {}),
            }
            for result in detection
        }
    if human_scores:
        agreement = evaluate_passage_scores(passage_scores, human_scores)
        out["passage"] = {
            "pearson": agreement.pearson,
            "spearman": agreement.spearman,
            "num_passages": agreement.num_passages,
            "notes": list(agreement.notes),
        }
    return out


def _baseline_results(metric, matched, config, *, auc_kind, warnings) -> dict:
    """Evaluate one probability-only baseline over the same corpus.

    Sentence scores are projected with the configured sentence
    projection re-centered on the baseline's own distribution; the
    passage score is the mean of the sentence metric, projected the
    same way.
    """
    raw_by_passage: list[tuple] = []
    for bundle, _ in matched:
        raw_by_passage.append(
            (bundle, baselines.sentence_baselines(metric, bundle, warnings=warnings))
        )
    pooled = [value for _, values in raw_by_passage for value in values]
    spec = resolve_projection(config.sentence_projection, pooled)

    sentence_scores: list[float] = []
    sentence_labels: list[float] = []
    for bundle, values in raw_by_passage:
        if bundle.sentence_labels is None:
            continue
        sentence_scores.extend(project(value, spec) for value in values)
        sentence_labels.extend(bundle.sentence_labels)

    passage_raw = [
        (bundle, sum(values) / len(values)) for bundle, values in raw_by_passage
    ]
    passage_spec = resolve_projection(
        config.passage_projection, [value for _, value in passage_raw]
    )
    passage_scores = [
        project(value, passage_spec)
        for bundle, value in passage_raw
        if bundle.passage_human_score is not None
    ]
    human_scores = [
        bundle.passage_human_score
        for bundle, _ in passage_raw
        if bundle.passage_human_score is not None
    ]
    return _method_results(
        sentence_scores, sentence_labels, passage_scores, human_scores, auc_kind=auc_kind
    )


def _format_eval_table(methods: dict[str, dict]) -> str:
    headers = ["method", *LABEL_SETUPS, "pearson", "spearman"]
    rows = []
    for name, results in methods.items():
        row = [name]
        sentence = results.get("sentence")
        for setup in LABEL_SETUPS:
            value = sentence[setup]["auc"] if sentence else None
            row.append(_fmt(value))
        passage = results.get("passage")
        row.append(_fmt(passage["pearson"]) if passage else _fmt(None))
        row.append(_fmt(passage["spearman"]) if passage else _fmt(None))
        rows.append(row)
    return _format_table(headers, rows)


def cmd_sweep(args) -> int:
    base = resolve_config(args)
    bundles = load_corpus(args.input)
    if not bundles:
        raise DataError(f"{args.input}: no passage records found")
    width = min(len(token.topk_probs) for bundle in bundles for token in bundle.tokens)
    ensure_valid(bundles, base.replace(k=width))

    alphas = _parse_grid(args.alpha_grid, float, "--alpha-grid") or [base.alpha]
    betas = _parse_grid(args.beta_grid, float, "--beta-grid") or [base.beta]
    lambdas = _parse_grid(args.lambda_grid, float, "--lambda-grid") or [base.lambda_]
    ks = _parse_grid(args.k_grid, int, "--k-grid") or [base.k]
    for k in ks:
        if k > width:
            raise DataError(
                f"--k-grid asks for k={k} but the bundles record only "
                f"{width} probabilities per token"
            )

    defaults = Config()
    rows = []
    for alpha in alphas:
        for beta in betas:
            for lambda_ in lambdas:
                for k in ks:
                    config = base.replace(alpha=alpha, beta=beta, lambda_=lambda_, k=k)
                    clipped = [clip_topk(bundle, k) for bundle in bundles]
                    report = score_corpus(clipped, config, skip_validation=True)
                    rows.append(
                        _sweep_row(report, config, defaults, bundles, args)
                    )

    headers = [
        "alpha", "beta", "lambda", "k", "default",
        "mean_entity", "mean_global", "mean_sentence", "passage_raw",
        "auc_nonfact", "pearson", "spearman",
    ]
    table_rows = [
        [
            f"{row['alpha']:g}", f"{row['beta']:g}", f"{row['lambda']:g}", str(row["k"]),
            "*" if row["default"] else "",
            _fmt(row["mean_entity"]), _fmt(row["mean_global"]),
            _fmt(row["mean_sentence"]), _fmt(row["passage_raw"]),
            _fmt(row["auc_nonfact"]), _fmt(row["pearson"]), _fmt(row["spearman"]),
        ]
        for row in rows
    ]
    table = _format_table(headers, table_rows)
    Path(args.out).write_text(table + "\n", encoding="utf-8")
    rows_path = str(args.out) + ".jsonl"
    with open(rows_path, "w", encoding="utf-8", newline="\n") as handle:
        for row in rows:
            handle.write(json.dumps(row, separators=(",", ":")))
            handle.write("\n")
    print(table)
    print(f"wrote {len(rows)} row(s) -> {args.out} (rows: {rows_path})")
    return 0


def _sweep_row(report, config, defaults, bundles, args) -> dict:
    sentences = [s for p in report.passages for s in p.sentence_scores]
    mean_entity = sum(s.entity_uncertainty for s in sentences) / len(sentences)
    mean_global = sum(s.global_uncertainty for s in sentences) / len(sentences)
    mean_sentence = sum(s.sentence_uncertainty for s in sentences) / len(sentences)
    mean_passage = sum(
        p.passage_raw[args.passage_method] for p in report.passages
    ) / len(report.passages)

    auc = pearson_v = spearman_v = None
    scores: list[float] = []
    labels: list[float] = []
    passage_scores: list[float] = []
    human_scores: list[float] = []
    for bundle, passage in zip(bundles, report.passages):
        if bundle.sentence_labels is not None:
            scores.extend(passage.sentence_projected)
            labels.extend(bundle.sentence_labels)
        if bundle.passage_human_score is not None:
            passage_scores.append(passage.passage_projected[args.passage_method])
            human_scores.append(bundle.passage_human_score)
    if labels:
        detection = evaluate_sentence_scores(scores, labels, auc_kind=args.auc)
        auc = next(r.auc for r in detection if r.setup == "NonFact")
    if human_scores:
        agreement = evaluate_passage_scores(passage_scores, human_scores)
        pearson_v = agreement.pearson
        spearman_v = agreement.spearman

    return {
        "alpha": config.alpha,
        "beta": config.beta,
        "lambda": config.lambda_,
        "k": config.k,
        "default": (
            config.alpha == defaults.alpha
            and config.beta == defaults.beta
            and config.lambda_ == defaults.lambda_
            and config.k == defaults.k
        ),
        "mean_entity": mean_entity,
        "mean_global": mean_global,
        "mean_sentence": mean_sentence,
        "passage_raw": mean_passage,
        "auc_nonfact": auc,
        "pearson": pearson_v,
        "spearman": spearman_v,
    }


def cmd_rerun(args) -> int:
    manifest = read_manifest(args.manifest)
    if manifest["command"] != "score":
        raise DataError(
            f"manifest records a {manifest['command']!r} run; only score runs rerun"
        )
    config = Config.from_dict(manifest["config"])
    out = args.out or manifest["output"]

    bundles = load_corpus(manifest["input"])
    if not bundles:
        raise DataError(f"{manifest['input']}: no passage records found")
    ensure_valid(bundles, config)
    report = score_corpus(
        bundles, config, substitute=manifest.get("substitute"), skip_validation=True
    )

    previous = Path(out).read_bytes() if Path(out).exists() else None
    write_report(report, out)
    new_manifest = build_manifest(
        report, command="score", input_path=manifest["input"], output_path=str(out)
    )
    write_manifest(new_manifest, out)

    print(f"rescored {len(report.passages)} passage(s) -> {out}")
    if previous is not None:
        if previous == Path(out).read_bytes():
            print("report bytes match the previous run")
        else:
            print("report bytes DIFFER from the previous run", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# helpers


def _parse_range(text: str, flag: str) -> tuple[int, int]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ContractViolation(f"{flag} expects LO:HI, got {text!r}")
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except ValueError:
        raise ContractViolation(f"{flag} expects integers, got {text!r}") from None
    return lo, hi


def _parse_grid(text: str | None, cast, flag: str) -> list | None:
    if text is None:
        return None
    try:
        values = [cast(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ContractViolation(f"{flag} expects comma-separated values, got {text!r}") from None
    if not values:
        raise ContractViolation(f"{flag} received no values")
    return values


def _fmt(value) -> str:
    return "-" if value is None else f"{value:.4f}"


def _format_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [
        max(len(header), *(len(row[i]) for row in rows)) if rows else len(header)
        for i, header in enumerate(headers)
    ]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        padded = [
            cell.ljust(w) if i == 0 else cell.rjust(w)
            for i, (cell, w) in enumerate(zip(row, widths))
        ]
        lines.append("  ".join(padded).rstrip())
    return "\n".join(lines)
