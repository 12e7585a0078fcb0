"""Semantic graph assembly over a passage bundle.

The graph has two layers: relation triples grouped per sentence (used
to propagate uncertainty between entities) and an undirected
sentence-adjacency structure induced by the bundle's links (used to
weight sentences against their neighbors during passage calibration).

Construction is deterministic and order-independent: feeding the same
triples or links in any order produces an equal graph, because
everything is sorted into a canonical order on the way in.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .bundle import PassageBundle, Triple
from .errors import ContractViolation

#: Part-of-speech tags acceptable for subject/object tokens.
NOMINAL_POS_TAGS = frozenset({"NOUN", "NUM", "PROPN"})

#: Named-entity types that also qualify a token for a subject/object role.
ENTITY_NER_TYPES = frozenset(
    {
        "PERSON",
        "DATE",
        "ORG",
        "GPE",
        "NORP",
        "ORDINAL",
        "PRODUCT",
        "CARDINAL",
        "LOC",
        "FAC",
        "EVENT",
        "WORK_OF_ART",
        "LAW",
        "LANGUAGE",
        "TIME",
        "PERCENT",
        "MONEY",
        "QUANTITY",
    }
)

#: The only tag acceptable for a relation token.
RELATION_POS_TAG = "VERB"


@dataclass(frozen=True)
class SemanticGraph:
    """Canonical per-passage graph: triples by sentence, plus adjacency.

    ``incoming`` groups each sentence's triples by their object entity,
    which is exactly the set summed over when propagating uncertainty
    into that entity.  ``neighbors`` has an entry for every sentence,
    empty when the sentence is isolated.
    """

    num_sentences: int
    triples_by_sentence: Mapping[int, tuple[Triple, ...]]
    incoming: Mapping[str, tuple[Triple, ...]]
    neighbors: Mapping[int, frozenset[int]]

    @property
    def num_links(self) -> int:
        return sum(len(n) for n in self.neighbors.values()) // 2


def _triple_sort_key(triple: Triple):
    return (
        triple.relation_token.sentence_index,
        triple.relation_token.within_sentence_index,
        triple.subject,
        triple.object,
        triple.att_subject_object,
        triple.att_subject_relation,
        triple.att_relation_object,
    )


def build_graph(bundle: PassageBundle) -> SemanticGraph:
    """Assemble the semantic graph for one (validated) bundle."""
    m = bundle.num_sentences
    ordered = sorted(bundle.triples, key=_triple_sort_key)

    by_sentence: dict[int, list[Triple]] = {i: [] for i in range(1, m + 1)}
    incoming: dict[str, list[Triple]] = {}
    for triple in ordered:
        by_sentence[triple.relation_token.sentence_index].append(triple)
        incoming.setdefault(triple.object, []).append(triple)

    neighbor_sets: dict[int, set[int]] = {i: set() for i in range(1, m + 1)}
    for link in bundle.links:
        neighbor_sets[link.sentence_a].add(link.sentence_b)
        neighbor_sets[link.sentence_b].add(link.sentence_a)

    return SemanticGraph(
        num_sentences=m,
        triples_by_sentence={i: tuple(ts) for i, ts in by_sentence.items()},
        incoming={obj: tuple(ts) for obj, ts in sorted(incoming.items())},
        neighbors={i: frozenset(ns) for i, ns in neighbor_sets.items()},
    )


def token_fills_entity_role(pos_tag: str | None, ner_type: str | None) -> bool:
    """Whether a token can sit in a subject or object slot.

    True when the token is nominal (noun, proper noun, or numeral) or
    carries any recognized named-entity type.
    """
    if pos_tag is not None and pos_tag in NOMINAL_POS_TAGS:
        return True
    return ner_type is not None and ner_type in ENTITY_NER_TYPES


def check_triple_roles(bundle: PassageBundle, triple: Triple) -> list[str]:
    """Role problems for one triple; empty when the triple is clean.

    Subject and object spans must consist of role-eligible tokens (see
    :func:`token_fills_entity_role`) and the relation token must be a
    verb.  The triple's references must resolve in ``bundle``.
    """
    spans = bundle.entity_by_id()
    problems = []
    for role in ("subject", "object"):
        entity_id = getattr(triple, role)
        span = spans.get(entity_id)
        if span is None:
            raise ContractViolation(
                f"triple {role} references unknown entity {entity_id!r}"
            )
        for token in bundle.entity_tokens(span):
            if not token_fills_entity_role(token.pos_tag, token.ner_type):
                problems.append(
                    f"{role} entity {entity_id!r} contains token "
                    f"{token.surface!r} with pos_tag={token.pos_tag!r}, "
                    f"ner_type={token.ner_type!r}, which fits no entity role"
                )
    relation = bundle.token_at(triple.relation_token)
    if relation.pos_tag != RELATION_POS_TAG:
        problems.append(
            f"relation token {relation.surface!r} has pos_tag="
            f"{relation.pos_tag!r}; a relation must be tagged {RELATION_POS_TAG}"
        )
    return problems


def role_violations(bundle: PassageBundle) -> list[str]:
    """Role problems across all triples of a bundle, in triple order."""
    out = []
    for idx, triple in enumerate(bundle.triples):
        for problem in check_triple_roles(bundle, triple):
            out.append(f"triples[{idx}]: {problem}")
    return out


def graph_summary(bundle: PassageBundle) -> dict:
    """JSON-ready adjacency and triple counts, for debugging dumps."""
    graph = build_graph(bundle)
    return {
        "passage_id": bundle.passage_id,
        "num_sentences": graph.num_sentences,
        "num_links": graph.num_links,
        "neighbors": {
            str(i): sorted(graph.neighbors[i]) for i in range(1, graph.num_sentences + 1)
        },
        "triple_counts": {
            str(i): len(graph.triples_by_sentence[i])
            for i in range(1, graph.num_sentences + 1)
        },
        "objects_with_incoming": {
            obj: len(triples) for obj, triples in graph.incoming.items()
        },
        "role_violations": role_violations(bundle),
    }


def neighbor_multiset_size(graph: SemanticGraph) -> int:
    """Sum of neighbor-set sizes; equals twice the number of links."""
    return sum(len(graph.neighbors[i]) for i in range(1, graph.num_sentences + 1))
