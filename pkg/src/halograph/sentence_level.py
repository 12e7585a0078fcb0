"""Sentence-level uncertainty: entity aggregation and the global quantile.

A sentence gets two complementary summaries:

* an *entity* view -- each entity's own token uncertainty plus a
  weighted share of uncertainty propagated along relation triples from
  the entities pointing at it, averaged over the sentence's entities;
* a *global* view -- an upper quantile of all token uncertainties in
  the sentence, so a few confident function words cannot mask one very
  uncertain content word.

The two are mixed with weight ``lambda``.  Sentences with no entities
fall back to the global view alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from . import kernels
from .bundle import EntitySpan, PassageBundle
from .errors import ContractViolation
from .graph import SemanticGraph

#: Floor for a relation intensity before it divides the propagation sum.
INTENSITY_EPSILON = 1e-9


@dataclass(frozen=True)
class EntityScore:
    """Per-entity uncertainty: the span's own score plus graph inflow."""

    entity_id: str
    self_uncertainty: float
    propagated_uncertainty: float


@dataclass(frozen=True)
class SentenceScore:
    """The three sentence-level quantities, before any projection.

    ``entity_uncertainty`` is ``None`` only in substitution modes that
    bypass the entity/global decomposition entirely; the standard
    pipeline always fills all three (with the entity view falling back
    to the global one for entity-free sentences).
    """

    sentence_index: int
    entity_uncertainty: float | None
    global_uncertainty: float | None
    sentence_uncertainty: float


def entity_self_uncertainty(
    span: EntitySpan, sentence_token_uncertainties: Sequence[float]
) -> float:
    """Mean token uncertainty over the entity's span."""
    lo, hi = span.token_range
    if not (1 <= lo <= hi <= len(sentence_token_uncertainties)):
        raise ContractViolation(
            f"entity {span.entity_id!r} span [{lo}, {hi}] exceeds the "
            f"sentence's {len(sentence_token_uncertainties)} token scores"
        )
    window = sentence_token_uncertainties[lo - 1 : hi]
    return sum(window) / len(window)


def relation_intensity(
    incoming: Sequence, *, warnings: list[str] | None = None, entity_id: str = ""
) -> float:
    """Average attention strength of the triples entering one entity.

    Each triple contributes the mean of its subject-relation and
    relation-object attentions.  A vanishing result is floored at
    ``INTENSITY_EPSILON`` (with a warning) so it can safely divide the
    propagation sum.
    """
    if len(incoming) == 0:
        raise ContractViolation("relation intensity needs at least one incoming triple")
    total = 0.0
    for triple in incoming:
        total += (triple.att_subject_relation + triple.att_relation_object) / 2.0
    intensity = total / len(incoming)
    if intensity < INTENSITY_EPSILON:
        if warnings is not None:
            warnings.append(
                f"relation intensity for entity {entity_id!r} is {intensity!r}; "
                f"clamped to {INTENSITY_EPSILON!r} to keep propagation finite"
            )
        intensity = INTENSITY_EPSILON
    return intensity


def propagated_uncertainty(
    entity_id: str,
    graph: SemanticGraph,
    self_uncertainties: Mapping[str, float],
    *,
    warnings: list[str] | None = None,
) -> float:
    """Uncertainty flowing into ``entity_id`` along its incoming triples.

    Each incoming triple forwards its subject's own uncertainty,
    weighted by the subject-object attention normalized by the
    entity's relation intensity.  Entities with no incoming triples
    receive zero.  Only the subjects' own (not propagated) scores flow,
    so propagation is a single hop and cannot feed back.
    """
    incoming = graph.incoming.get(entity_id, ())
    if not incoming:
        return 0.0
    intensity = relation_intensity(incoming, warnings=warnings, entity_id=entity_id)
    total = 0.0
    for triple in incoming:
        total += (triple.att_subject_object / intensity) * self_uncertainties[triple.subject]
    return total


def entity_uncertainty(entity_scores: Sequence[EntityScore], beta: float) -> float:
    """Sentence-level entity uncertainty: mean of self + beta * inflow."""
    if len(entity_scores) == 0:
        raise ContractViolation(
            "entity uncertainty over an empty entity list is undefined; "
            "callers must fall back to the global uncertainty"
        )
    total = 0.0
    for score in entity_scores:
        total += score.self_uncertainty + beta * score.propagated_uncertainty
    return total / len(entity_scores)


def global_uncertainty(token_uncertainties: Sequence[float], alpha: float) -> float:
    """The alpha-quantile of a sentence's token uncertainties.

    Linear interpolation between order statistics; ``alpha`` 0 and 1
    give the minimum and maximum exactly.
    """
    if len(token_uncertainties) == 0:
        raise ContractViolation("global uncertainty needs at least one token score")
    if not 0.0 <= alpha <= 1.0:
        raise ContractViolation(f"alpha must lie in [0, 1], got {alpha}")
    return kernels.interpolated_quantile(token_uncertainties, alpha)


def mix_uncertainties(entity: float, global_: float, lambda_: float) -> float:
    """Convex mix of the entity and global views with weight ``lambda``."""
    if not 0.0 <= lambda_ <= 1.0:
        raise ContractViolation(f"lambda must lie in [0, 1], got {lambda_}")
    return lambda_ * entity + (1.0 - lambda_) * global_


def score_sentences(
    bundle: PassageBundle,
    graph: SemanticGraph,
    token_uncertainties: Sequence[float],
    *,
    alpha: float,
    beta: float,
    lambda_: float,
    warnings: list[str] | None = None,
) -> tuple[list[SentenceScore], dict[str, EntityScore]]:
    """Score every sentence of a bundle given its token uncertainties.

    ``token_uncertainties`` is indexed by passage position (0-based
    list over the whole passage).  Returns the per-sentence scores in
    order plus the per-entity breakdown.
    """
    offsets = []
    running = 0
    for count in bundle.sentence_token_counts:
        offsets.append(running)
        running += count

    spans_by_sentence: dict[int, list[EntitySpan]] = {
        i: [] for i in range(1, bundle.num_sentences + 1)
    }
    for span in bundle.entities:
        spans_by_sentence[span.sentence_index].append(span)

    # Self-uncertainty for every entity first: propagation reads the
    # subjects' scores, and a subject can live anywhere in the passage.
    self_uncertainties: dict[str, float] = {}
    for span in bundle.entities:
        offset = offsets[span.sentence_index - 1]
        count = bundle.sentence_token_counts[span.sentence_index - 1]
        sentence_scores = token_uncertainties[offset : offset + count]
        self_uncertainties[span.entity_id] = entity_self_uncertainty(span, sentence_scores)

    entity_scores: dict[str, EntityScore] = {}
    for span in bundle.entities:
        entity_scores[span.entity_id] = EntityScore(
            entity_id=span.entity_id,
            self_uncertainty=self_uncertainties[span.entity_id],
            propagated_uncertainty=propagated_uncertainty(
                span.entity_id, graph, self_uncertainties, warnings=warnings
            ),
        )

    sentences = []
    for i in range(1, bundle.num_sentences + 1):
        offset = offsets[i - 1]
        count = bundle.sentence_token_counts[i - 1]
        window = token_uncertainties[offset : offset + count]
        global_u = global_uncertainty(window, alpha)
        spans = spans_by_sentence[i]
        if spans:
            entity_u = entity_uncertainty([entity_scores[s.entity_id] for s in spans], beta)
        else:
            # No entities to aggregate: the global view is the only
            # signal, so the mix collapses to it regardless of lambda.
            entity_u = global_u
        sentences.append(
            SentenceScore(
                sentence_index=i,
                entity_uncertainty=entity_u,
                global_uncertainty=global_u,
                sentence_uncertainty=mix_uncertainties(entity_u, global_u, lambda_),
            )
        )
    return sentences, entity_scores
