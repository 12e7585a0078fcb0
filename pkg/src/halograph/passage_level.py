"""Passage-level calibration: combining sentence scores into one number.

The main method weights each sentence's uncertainty by how strongly
its linked neighbors contradict it, so an uncertain sentence that no
other sentence disputes contributes less than one contradicted by its
context.  Two simpler variants serve as references: ``adjacent`` uses
positional neighbors instead of the link graph, and ``average``
ignores context entirely.

Contradiction scores are directional: the neighbor is the premise and
the sentence being weighted is the hypothesis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .config import ISOLATED_POLICIES
from .errors import ContractViolation, MissingNliScoreError
from .graph import SemanticGraph
from .sentence_level import SentenceScore


@dataclass(frozen=True)
class PassageScore:
    """One passage-level score, before projection."""

    passage_id: str
    method: str
    raw_uncertainty: float


def _mean_sentence_uncertainty(sentence_scores: Sequence[SentenceScore]) -> float:
    return sum(s.sentence_uncertainty for s in sentence_scores) / len(sentence_scores)


def _weighted_by_neighbors(
    neighbor_sets: Mapping[int, Sequence[int]],
    sentence_scores: Sequence[SentenceScore],
    nli: Mapping[tuple[int, int], float],
) -> float | None:
    """Contradiction-weighted aggregate, or ``None`` with no neighbors.

    Normalizes by the total neighbor count (not per sentence), so a
    sentence with many accusers carries proportionally more weight.
    """
    numerator = 0.0
    total_neighbors = 0
    for score in sentence_scores:
        i = score.sentence_index
        for j in sorted(neighbor_sets.get(i, ())):
            if (j, i) not in nli:
                raise MissingNliScoreError(premise_sentence=j, hypothesis_sentence=i)
            numerator += score.sentence_uncertainty * nli[(j, i)]
            total_neighbors += 1
    if total_neighbors == 0:
        return None
    return numerator / total_neighbors


def calibrate_graph(
    passage_id: str,
    graph: SemanticGraph,
    sentence_scores: Sequence[SentenceScore],
    nli: Mapping[tuple[int, int], float],
    *,
    isolated_sentence_policy: str = "adjacent-fallback",
    warnings: list[str] | None = None,
) -> PassageScore:
    """Passage score weighted by contradiction across the link graph.

    Isolated sentences are handled per
    ``isolated_sentence_policy``: ``adjacent-fallback`` substitutes the
    positional neighbors, ``skip`` leaves the sentence out of the
    aggregate.  A passage with no usable neighbors at all falls back to
    the plain average (with a warning).
    """
    _check_sentences(sentence_scores)
    if isolated_sentence_policy not in ISOLATED_POLICIES:
        raise ContractViolation(
            f"unknown isolated-sentence policy {isolated_sentence_policy!r}; "
            f"expected one of {ISOLATED_POLICIES}"
        )
    m = len(sentence_scores)
    if all(not graph.neighbors.get(s.sentence_index) for s in sentence_scores):
        # A passage with no links at all degrades to the plain average;
        # the isolated-sentence policy only covers orphans inside an
        # otherwise linked passage.
        if warnings is not None:
            warnings.append(
                "passage has no links; graph calibration equals the "
                "average of sentence uncertainties"
            )
        return PassageScore(
            passage_id=passage_id,
            method="graph",
            raw_uncertainty=_mean_sentence_uncertainty(sentence_scores),
        )
    neighbor_sets: dict[int, tuple[int, ...]] = {}
    for score in sentence_scores:
        i = score.sentence_index
        linked = graph.neighbors.get(i, frozenset())
        if linked:
            neighbor_sets[i] = tuple(sorted(linked))
        elif isolated_sentence_policy == "adjacent-fallback":
            fallback = _adjacent_neighbors(i, m)
            neighbor_sets[i] = fallback
            if fallback and warnings is not None:
                warnings.append(
                    f"sentence {i} has no linked neighbors; "
                    "using adjacent sentences for passage calibration"
                )
        else:
            neighbor_sets[i] = ()
            if warnings is not None:
                warnings.append(
                    f"sentence {i} has no linked neighbors; "
                    "skipped during passage calibration"
                )

    weighted = _weighted_by_neighbors(neighbor_sets, sentence_scores, nli)
    if weighted is None:
        if warnings is not None:
            warnings.append(
                "no sentence has any usable neighbor; "
                "falling back to the average of sentence uncertainties"
            )
        weighted = _mean_sentence_uncertainty(sentence_scores)
    return PassageScore(passage_id=passage_id, method="graph", raw_uncertainty=weighted)


def calibrate_adjacent(
    passage_id: str,
    sentence_scores: Sequence[SentenceScore],
    nli: Mapping[tuple[int, int], float],
    *,
    warnings: list[str] | None = None,
) -> PassageScore:
    """Passage score weighted by contradiction with adjacent sentences."""
    _check_sentences(sentence_scores)
    m = len(sentence_scores)
    neighbor_sets = {
        score.sentence_index: _adjacent_neighbors(score.sentence_index, m)
        for score in sentence_scores
    }
    weighted = _weighted_by_neighbors(neighbor_sets, sentence_scores, nli)
    if weighted is None:
        # Single-sentence passage: there is no adjacency to weight by.
        if warnings is not None:
            warnings.append(
                "single-sentence passage has no adjacent pairs; "
                "falling back to the average of sentence uncertainties"
            )
        weighted = _mean_sentence_uncertainty(sentence_scores)
    return PassageScore(passage_id=passage_id, method="adjacent", raw_uncertainty=weighted)


def calibrate_average(
    passage_id: str, sentence_scores: Sequence[SentenceScore]
) -> PassageScore:
    """Plain mean of sentence uncertainties; the context-free reference."""
    _check_sentences(sentence_scores)
    return PassageScore(
        passage_id=passage_id,
        method="average",
        raw_uncertainty=_mean_sentence_uncertainty(sentence_scores),
    )


def _adjacent_neighbors(i: int, m: int) -> tuple[int, ...]:
    return tuple(j for j in (i - 1, i + 1) if 1 <= j <= m)


def _check_sentences(sentence_scores: Sequence[SentenceScore]) -> None:
    if len(sentence_scores) == 0:
        raise ContractViolation("passage calibration needs at least one sentence score")
    for expected, score in enumerate(sentence_scores, start=1):
        if score.sentence_index != expected:
            raise ContractViolation(
                "sentence scores must be ordered 1..m; "
                f"position {expected} holds sentence {score.sentence_index}"
            )
