"""End-to-end scoring: bundles in, reports and manifests out.

The corpus is scored in two passes.  The first computes every raw
quantity per passage (token uncertainties, entity breakdowns, sentence
mixes, the three passage aggregates).  The second resolves the
projections -- the logistic map centers on a corpus median, which is
only known once every raw score exists -- and attaches the projected
values.  Reports are JSON Lines, one passage per line, and contain no
timestamps or timings, so scoring the same input twice produces
byte-identical files; wall-clock details go to a sidecar manifest.
"""

from __future__ import annotations

import dataclasses
import json
import os
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, Sequence

from . import baselines, kernels, token_level
from .bundle import PassageBundle, Violation, validate_bundle
from .config import PASSAGE_METHODS, Config
from .errors import BundleParseError, BundleValidationError, ContractViolation
from .evaluation import ProjectionSpec, project, resolve_projection
from .graph import build_graph, role_violations
from .passage_level import calibrate_adjacent, calibrate_average, calibrate_graph
from .sentence_level import EntityScore, SentenceScore, score_sentences

REPORT_VERSION = 1


@dataclass(frozen=True)
class TokenScore:
    """One token's scored uncertainty, with its coordinates."""

    sentence_index: int
    within_sentence_index: int
    passage_position: int
    uncertainty: float


@dataclass
class ScoredPassage:
    """All raw scores for one passage; projections attach corpus-side."""

    passage_id: str
    token_scores: list[TokenScore]
    entity_scores: dict[str, EntityScore]
    sentence_scores: list[SentenceScore]
    passage_raw: dict[str, float]
    warnings: list[str] = field(default_factory=list)
    sentence_projected: list[float] | None = None
    passage_projected: dict[str, float] | None = None


@dataclass
class CorpusReport:
    """A fully scored corpus plus the resolved projection parameters."""

    passages: list[ScoredPassage]
    config: Config
    substitute: str | None
    sentence_projection: ProjectionSpec
    passage_projections: dict[str, ProjectionSpec]
    timings: list[dict[str, Any]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def clip_topk(bundle: PassageBundle, k: int) -> PassageBundle:
    """Narrow every token to its ``k`` largest probabilities.

    The stored list is descending, so a prefix of it is exactly the
    top-k of the original distribution; widening is impossible because
    the discarded mass was never recorded.
    """
    width = min((len(t.topk_probs) for t in bundle.tokens), default=k)
    if k > width:
        raise ContractViolation(
            f"cannot widen top-k to {k}: bundle {bundle.passage_id!r} "
            f"records only {width} probabilities per token"
        )
    if k == width:
        return bundle
    return dataclasses.replace(
        bundle,
        tokens=tuple(
            dataclasses.replace(token, topk_probs=token.topk_probs[:k])
            for token in bundle.tokens
        ),
    )


def ensure_valid(bundles: Sequence[PassageBundle], config: Config) -> None:
    """Raise :class:`BundleValidationError` listing every violation."""
    problems: list[tuple[str, Violation]] = []
    for bundle in bundles:
        for violation in validate_bundle(bundle, config):
            problems.append((bundle.passage_id, violation))
    if problems:
        raise BundleValidationError(problems)


def score_passage(
    bundle: PassageBundle,
    config: Config | None = None,
    *,
    substitute: str | None = None,
) -> ScoredPassage:
    """Score one validated bundle; raw values only.

    ``substitute`` swaps in a baseline for part of the pipeline:
    ``vanilla_logprob_token`` replaces the decayed token uncertainty
    and leaves everything downstream untouched, while the sentence
    metrics (``avg_neg_logprob`` etc.) replace the whole sentence
    score -- the entity/global decomposition is bypassed and reported
    as null.
    """
    if config is None:
        config = Config()
    if substitute is not None and substitute not in baselines.SUBSTITUTE_METRICS:
        raise ContractViolation(
            f"unknown substitute metric {substitute!r}; "
            f"expected one of {baselines.SUBSTITUTE_METRICS}"
        )
    warnings: list[str] = []
    graph = build_graph(bundle)
    for problem in role_violations(bundle):
        warnings.append(f"role check: {problem}")

    if substitute == "vanilla_logprob_token":
        token_uncertainties = baselines.token_neg_logprobs(bundle.tokens, warnings=warnings)
    else:
        token_uncertainties = token_level.passage_token_uncertainties(bundle)

    token_scores = [
        TokenScore(
            sentence_index=token.sentence_index,
            within_sentence_index=token.within_sentence_index,
            passage_position=token.passage_position,
            uncertainty=value,
        )
        for token, value in zip(bundle.tokens, token_uncertainties)
    ]

    if substitute in baselines.SENTENCE_METRICS:
        values = baselines.sentence_baselines(substitute, bundle, warnings=warnings)
        sentence_scores = [
            SentenceScore(
                sentence_index=i,
                entity_uncertainty=None,
                global_uncertainty=None,
                sentence_uncertainty=value,
            )
            for i, value in enumerate(values, start=1)
        ]
        entity_scores: dict[str, EntityScore] = {}
    else:
        sentence_scores, entity_scores = score_sentences(
            bundle,
            graph,
            token_uncertainties,
            alpha=config.alpha,
            beta=config.beta,
            lambda_=config.lambda_,
            warnings=warnings,
        )

    nli = bundle.nli_lookup()
    passage_raw = {
        "graph": calibrate_graph(
            bundle.passage_id,
            graph,
            sentence_scores,
            nli,
            isolated_sentence_policy=config.isolated_sentence_policy,
            warnings=warnings,
        ).raw_uncertainty,
        "adjacent": calibrate_adjacent(
            bundle.passage_id, sentence_scores, nli, warnings=warnings
        ).raw_uncertainty,
        "average": calibrate_average(bundle.passage_id, sentence_scores).raw_uncertainty,
    }

    return ScoredPassage(
        passage_id=bundle.passage_id,
        token_scores=token_scores,
        entity_scores=entity_scores,
        sentence_scores=sentence_scores,
        passage_raw=passage_raw,
        warnings=warnings,
    )


def score_corpus(
    bundles: Sequence[PassageBundle],
    config: Config | None = None,
    *,
    substitute: str | None = None,
    skip_validation: bool = False,
) -> CorpusReport:
    """Score a corpus and resolve its projections.

    Bundles are validated first (``skip_validation`` bypasses that for
    callers who already did).  The sentence projection is centered on
    the pooled raw sentence scores of the whole corpus; each passage
    method gets its own projection centered on that method's scores.
    """
    if config is None:
        config = Config()
    if not skip_validation:
        ensure_valid(bundles, config)

    passages: list[ScoredPassage] = []
    timings: list[dict[str, Any]] = []
    for bundle in bundles:
        started = time.perf_counter()
        passages.append(score_passage(bundle, config, substitute=substitute))
        timings.append(
            {
                "passage_id": bundle.passage_id,
                "seconds": time.perf_counter() - started,
            }
        )

    corpus_warnings: list[str] = []
    pooled_sentences = [
        score.sentence_uncertainty
        for passage in passages
        for score in passage.sentence_scores
    ]
    sentence_spec = resolve_projection(config.sentence_projection, pooled_sentences)
    passage_specs = {
        method: resolve_projection(
            config.passage_projection,
            [passage.passage_raw[method] for passage in passages],
        )
        for method in PASSAGE_METHODS
    }

    for passage in passages:
        passage.sentence_projected = [
            project(score.sentence_uncertainty, sentence_spec)
            for score in passage.sentence_scores
        ]
        passage.passage_projected = {
            method: project(passage.passage_raw[method], passage_specs[method])
            for method in PASSAGE_METHODS
        }

    return CorpusReport(
        passages=passages,
        config=config,
        substitute=substitute,
        sentence_projection=sentence_spec,
        passage_projections=passage_specs,
        timings=timings,
        warnings=corpus_warnings,
    )


# ---------------------------------------------------------------------------
# report serialization


def passage_record(passage: ScoredPassage) -> dict[str, Any]:
    """JSON-ready record for one scored passage."""
    if passage.sentence_projected is None or passage.passage_projected is None:
        raise ContractViolation(
            "passage has no projected scores; records come from score_corpus output"
        )
    return {
        "passage_id": passage.passage_id,
        "tokens": [
            {
                "sentence_index": t.sentence_index,
                "within_sentence_index": t.within_sentence_index,
                "passage_position": t.passage_position,
                "uncertainty": t.uncertainty,
            }
            for t in passage.token_scores
        ],
        "entities": [
            {
                "entity_id": score.entity_id,
                "self_uncertainty": score.self_uncertainty,
                "propagated_uncertainty": score.propagated_uncertainty,
            }
            for _, score in sorted(passage.entity_scores.items())
        ],
        "sentences": [
            {
                "sentence_index": score.sentence_index,
                "entity_uncertainty": score.entity_uncertainty,
                "global_uncertainty": score.global_uncertainty,
                "sentence_uncertainty": score.sentence_uncertainty,
                "projected_uncertainty": projected,
            }
            for score, projected in zip(passage.sentence_scores, passage.sentence_projected)
        ],
        "passage": {
            method: {
                "raw": passage.passage_raw[method],
                "projected": passage.passage_projected[method],
            }
            for method in PASSAGE_METHODS
        },
        "warnings": list(passage.warnings),
    }


def report_header(report: CorpusReport) -> dict[str, Any]:
    """The first line of a report file: format and projection parameters."""
    return {
        "report_version": REPORT_VERSION,
        "config": report.config.to_dict(),
        "substitute": report.substitute,
        "sentence_projection": _spec_to_obj(report.sentence_projection),
        "passage_projections": {
            method: _spec_to_obj(spec)
            for method, spec in sorted(report.passage_projections.items())
        },
        "num_passages": len(report.passages),
    }


def _spec_to_obj(spec: ProjectionSpec) -> dict[str, Any]:
    obj: dict[str, Any] = {"kind": spec.kind}
    if spec.kind == "logistic":
        obj["mu"] = spec.mu
        obj["tau"] = spec.tau
    return obj


def report_lines(report: CorpusReport) -> Iterable[str]:
    """Every line of the report file, without newlines."""
    yield json.dumps(report_header(report), separators=(",", ":"))
    for passage in report.passages:
        yield json.dumps(passage_record(passage), separators=(",", ":"))


def write_report(report: CorpusReport, path: str | os.PathLike) -> None:
    """Write the JSON Lines report; no timings, so reruns match bytes."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for line in report_lines(report):
            handle.write(line)
            handle.write("\n")


def read_report(path: str | os.PathLike) -> tuple[dict[str, Any], list[dict[str, Any]]]:
    """Read a report file back: (header, passage records)."""
    header: dict[str, Any] | None = None
    records: list[dict[str, Any]] = []
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise BundleParseError(
                    f"report is not valid JSON Lines ({exc.msg})",
                    line_number=line_number,
                ) from exc
            if header is None:
                if not isinstance(obj, dict) or "report_version" not in obj:
                    raise BundleParseError(
                        "first report line must be the header object",
                        line_number=line_number,
                    )
                if obj["report_version"] != REPORT_VERSION:
                    raise BundleParseError(
                        f"unsupported report version {obj['report_version']!r}",
                        line_number=line_number,
                    )
                header = obj
            else:
                records.append(obj)
    if header is None:
        raise BundleParseError("report file is empty")
    return header, records


# ---------------------------------------------------------------------------
# run manifests


def build_manifest(
    report: CorpusReport,
    *,
    command: str,
    input_path: str,
    output_path: str,
) -> dict[str, Any]:
    """Everything needed to reproduce and audit one scoring run."""
    return {
        "tool": "halograph",
        "command": command,
        "started_at": datetime.now(timezone.utc).isoformat(),
        "input": input_path,
        "output": output_path,
        "config": report.config.to_dict(),
        "substitute": report.substitute,
        "kernel_backend": kernels.backend(),
        "timings": report.timings,
        "warnings": [
            {"passage_id": passage.passage_id, "warnings": list(passage.warnings)}
            for passage in report.passages
            if passage.warnings
        ],
    }


def manifest_path_for(output_path: str | os.PathLike) -> Path:
    return Path(str(output_path) + ".manifest.json")


def write_manifest(manifest: dict[str, Any], output_path: str | os.PathLike) -> Path:
    path = manifest_path_for(output_path)
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return path


def read_manifest(path: str | os.PathLike) -> dict[str, Any]:
    try:
        manifest = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise BundleParseError(f"manifest is not valid JSON ({exc.msg})") from exc
    if not isinstance(manifest, dict) or manifest.get("tool") != "halograph":
        raise BundleParseError("not a halograph run manifest")
    for key in ("command", "input", "output", "config"):
        if key not in manifest:
            raise BundleParseError(f"manifest is missing the {key!r} field")
    return manifest
