"""Projections, label setups, and evaluation metrics.

Raw uncertainties live on an unbounded positive scale; three monotone
maps squash them into (0, 1) for reporting and correlation against
human scores:

* ``inverse``: x / (1 + x)
* ``sigmoid``: 2 * (1 / (1 + e**-x) - 1/2), the logistic rescaled so 0 maps to 0
* ``logistic``: 1 / (1 + e**-((x - mu) / tau)), centered on a corpus
  statistic (the median by default)

All three are strictly increasing on [0, inf), so rank-based metrics
(ROC-AUC, Spearman) are identical before and after projection; only
Pearson feels the difference.

Sentence-level detection is scored as binary classification under
three label setups over {0, 0.5, 1} annotations (1 = hallucinated,
0.5 = partly supported, 0 = supported):

* ``NonFact``: 1 and 0.5 are positives;
* ``NonFact*``: only 1 is positive;
* ``Factual``: 0 is the positive class, and the detector's score is
  flipped (1 - projected) so that higher still means "more positive".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from . import kernels
from .errors import ContractViolation, DataError, UndefinedMetricError

PROJECTION_KINDS = ("inverse", "sigmoid", "logistic")
LABEL_SETUPS = ("NonFact", "NonFact*", "Factual")
AUC_KINDS = ("roc", "pr")


@dataclass(frozen=True)
class ProjectionSpec:
    """A projection with its resolved parameters.

    ``mu`` and ``tau`` only matter for the ``logistic`` kind; ``mu``
    is normally the corpus median of the scores being projected.
    """

    kind: str
    mu: float = 0.0
    tau: float = 1.0

    def __post_init__(self):
        if self.kind not in PROJECTION_KINDS:
            raise ContractViolation(
                f"unknown projection {self.kind!r}; expected one of {PROJECTION_KINDS}"
            )
        if self.tau <= 0.0:
            raise ContractViolation(f"tau must be positive, got {self.tau}")


def project(score: float, spec: ProjectionSpec) -> float:
    """Map a raw score into (0, 1) under ``spec``."""
    if spec.kind == "inverse":
        if score < 0.0:
            raise ContractViolation(
                f"inverse projection expects a non-negative score, got {score!r}"
            )
        return score / (1.0 + score)
    if spec.kind == "sigmoid":
        if score < 0.0:
            raise ContractViolation(
                f"sigmoid projection expects a non-negative score, got {score!r}"
            )
        return 2.0 * (1.0 / (1.0 + math.exp(-score)) - 0.5)
    return 1.0 / (1.0 + math.exp(-((score - spec.mu) / spec.tau)))


def resolve_projection(kind: str, corpus_scores: Sequence[float]) -> ProjectionSpec:
    """Fix a projection's parameters from the corpus being scored.

    The logistic map centers on the median of ``corpus_scores`` with
    unit scale; the other kinds have no parameters.
    """
    if kind != "logistic":
        return ProjectionSpec(kind=kind)
    if len(corpus_scores) == 0:
        raise ContractViolation(
            "the logistic projection needs at least one corpus score to center on"
        )
    return ProjectionSpec(kind="logistic", mu=kernels.interpolated_quantile(corpus_scores, 0.5), tau=1.0)


def map_labels(setup: str, labels: Sequence[float]) -> tuple[list[int], bool]:
    """Binarize annotation labels under a setup.

    Returns the 0/1 labels and whether detector scores must be flipped
    (``1 - projected``) before computing the metric.  Labels outside
    {0, 0.5, 1} raise :class:`~halograph.errors.DataError`.
    """
    if setup not in LABEL_SETUPS:
        raise ContractViolation(
            f"unknown label setup {setup!r}; expected one of {LABEL_SETUPS}"
        )
    for label in labels:
        if label not in (0.0, 0.5, 1.0):
            raise DataError(
                f"sentence label must be one of {{0, 0.5, 1}}, got {label!r}"
            )
    if setup == "NonFact":
        return [1 if label >= 0.5 else 0 for label in labels], False
    if setup == "NonFact*":
        return [1 if label == 1.0 else 0 for label in labels], False
    return [1 if label == 0.0 else 0 for label in labels], True


def roc_auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """Area under the ROC curve, ties counted as half.

    Equals the probability that a random positive outscores a random
    negative (with ties worth 1/2).  Both classes must be present.
    """
    _check_binary(scores, labels)
    return kernels.rank_auc(scores, labels)


def pr_auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """Area under the precision-recall curve (average precision).

    Computed by descending score threshold, with tied scores entering
    as one group so the result does not depend on input order.
    """
    _check_binary(scores, labels)
    positives = sum(1 for label in labels if label)
    order = sorted(range(len(scores)), key=lambda i: -scores[i])
    area = 0.0
    true_pos = 0
    seen = 0
    idx = 0
    n = len(scores)
    while idx < n:
        group_end = idx
        while group_end + 1 < n and scores[order[group_end + 1]] == scores[order[idx]]:
            group_end += 1
        group_pos = sum(1 for t in range(idx, group_end + 1) if labels[order[t]])
        true_pos += group_pos
        seen += group_end - idx + 1
        if group_pos:
            precision = true_pos / seen
            area += (group_pos / positives) * precision
        idx = group_end + 1
    return area


def _check_binary(scores: Sequence[float], labels: Sequence[int]) -> None:
    if len(scores) != len(labels):
        raise ContractViolation(
            f"scores and labels disagree in length ({len(scores)} vs {len(labels)})"
        )
    if len(scores) == 0:
        raise UndefinedMetricError("AUC over an empty sample is undefined")
    positives = sum(1 for label in labels if label)
    if positives == 0 or positives == len(labels):
        raise UndefinedMetricError(
            "AUC needs both classes present; "
            f"got {positives} positives out of {len(labels)}"
        )


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation; undefined for constant inputs or n < 2."""
    if len(x) != len(y):
        raise ContractViolation(
            f"correlation inputs disagree in length ({len(x)} vs {len(y)})"
        )
    n = len(x)
    if n < 2:
        raise UndefinedMetricError("correlation needs at least two points")
    mean_x = sum(x) / n
    mean_y = sum(y) / n
    cov = 0.0
    var_x = 0.0
    var_y = 0.0
    for xi, yi in zip(x, y):
        dx = xi - mean_x
        dy = yi - mean_y
        cov += dx * dy
        var_x += dx * dx
        var_y += dy * dy
    if var_x == 0.0 or var_y == 0.0:
        raise UndefinedMetricError("correlation with a constant input is undefined")
    return cov / math.sqrt(var_x * var_y)


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman correlation: Pearson over tie-averaged ranks."""
    if len(x) != len(y):
        raise ContractViolation(
            f"correlation inputs disagree in length ({len(x)} vs {len(y)})"
        )
    return pearson(kernels.average_ranks(x), kernels.average_ranks(y))


@dataclass(frozen=True)
class DetectionResult:
    """Sentence-level classification results for one scoring method.

    ``auc`` is ``None`` when the setup leaves a single class (for
    example no label-1 sentences under NonFact*); ``note`` says why.
    """

    setup: str
    auc: float | None
    num_positive: int
    num_negative: int
    note: str = ""


@dataclass(frozen=True)
class CorrelationResult:
    """Passage-level agreement with human scores for one method.

    Either coefficient is ``None`` when undefined (constant input);
    ``notes`` records why.
    """

    pearson: float | None
    spearman: float | None
    num_passages: int
    notes: tuple[str, ...] = ()


def evaluate_sentence_scores(
    projected_scores: Sequence[float],
    labels: Sequence[float],
    *,
    auc_kind: str = "roc",
) -> list[DetectionResult]:
    """AUC under every label setup for one pooled score vector."""
    if auc_kind not in AUC_KINDS:
        raise ContractViolation(
            f"unknown AUC kind {auc_kind!r}; expected one of {AUC_KINDS}"
        )
    if len(projected_scores) != len(labels):
        raise ContractViolation(
            "scores and labels disagree in length "
            f"({len(projected_scores)} vs {len(labels)})"
        )
    area = roc_auc if auc_kind == "roc" else pr_auc
    results = []
    for setup in LABEL_SETUPS:
        binary, flip = map_labels(setup, labels)
        scores = [1.0 - s for s in projected_scores] if flip else list(projected_scores)
        positives = sum(binary)
        try:
            value: float | None = area(scores, binary)
            note = ""
        except UndefinedMetricError as exc:
            value = None
            note = str(exc)
        results.append(
            DetectionResult(
                setup=setup,
                auc=value,
                num_positive=positives,
                num_negative=len(binary) - positives,
                note=note,
            )
        )
    return results


def evaluate_passage_scores(
    projected_scores: Sequence[float], human_scores: Sequence[float]
) -> CorrelationResult:
    """Correlation of projected passage scores with human judgments."""
    notes: list[str] = []
    try:
        r = pearson(projected_scores, human_scores)
    except UndefinedMetricError as exc:
        r = None
        notes.append(f"pearson undefined: {exc}")
    try:
        rho = spearman(projected_scores, human_scores)
    except UndefinedMetricError as exc:
        rho = None
        notes.append(f"spearman undefined: {exc}")
    return CorrelationResult(
        pearson=r,
        spearman=rho,
        num_passages=len(projected_scores),
        notes=tuple(notes),
    )
