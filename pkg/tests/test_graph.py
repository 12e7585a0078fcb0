"""Graph assembly, adjacency bookkeeping, and role checks."""

from __future__ import annotations

import random

import pytest

from halograph.bundle import SentenceLink
from halograph.errors import ContractViolation
from halograph.graph import (
    build_graph,
    check_triple_roles,
    graph_summary,
    neighbor_multiset_size,
    role_violations,
    token_fills_entity_role,
)
from halograph.synth import SynthShape, generate_corpus

from conftest import make_bundle, make_span, make_token, make_triple


def linked_bundle():
    return make_bundle(
        [1, 1, 1],
        links=[(1, 2), (1, 3)],
        nli=[(1, 2, 0.1), (2, 1, 0.1), (1, 3, 0.1), (3, 1, 0.1)],
    )


class TestAdjacency:
    def test_links_are_symmetric(self):
        graph = build_graph(linked_bundle())
        assert graph.neighbors[1] == frozenset({2, 3})
        assert graph.neighbors[2] == frozenset({1})
        assert graph.neighbors[3] == frozenset({1})

    def test_every_sentence_has_an_entry(self):
        graph = build_graph(make_bundle([1, 1, 1]))
        assert set(graph.neighbors) == {1, 2, 3}
        assert all(ns == frozenset() for ns in graph.neighbors.values())

    def test_neighbor_multiset_is_twice_the_links(self):
        for seed in range(5):
            for bundle in generate_corpus(seed, SynthShape(num_passages=5)):
                graph = build_graph(bundle)
                assert neighbor_multiset_size(graph) == 2 * len(bundle.links)
                assert graph.num_links == len(bundle.links)


def entity_pair_bundle(att_so=0.5, att_sr=0.5, att_ro=0.5):
    tokens = [
        make_token(1, 1, 1, pos_tag="PROPN"),
        make_token(1, 2, 2, pos_tag="VERB"),
        make_token(1, 3, 3, pos_tag="NOUN"),
    ]
    return make_bundle(
        [3],
        tokens=tokens,
        entities=[make_span("e1", 1, 1), make_span("e2", 1, 3)],
        triples=[
            make_triple(
                "e1", "e2", verb_position=2, att_so=att_so, att_sr=att_sr, att_ro=att_ro
            )
        ],
    )


class TestTripleGrouping:
    def test_incoming_grouped_by_object(self):
        graph = build_graph(entity_pair_bundle())
        assert set(graph.incoming) == {"e2"}
        assert len(graph.incoming["e2"]) == 1
        assert graph.triples_by_sentence[1] == graph.incoming["e2"]

    def test_construction_is_order_independent(self):
        base = generate_corpus(21, SynthShape(num_passages=6))
        rng = random.Random(0)
        for bundle in base:
            shuffled_triples = list(bundle.triples)
            shuffled_links = list(bundle.links)
            rng.shuffle(shuffled_triples)
            rng.shuffle(shuffled_links)
            import dataclasses

            shuffled = dataclasses.replace(
                bundle, triples=tuple(shuffled_triples), links=tuple(shuffled_links)
            )
            assert build_graph(shuffled) == build_graph(bundle)


class TestRoleRules:
    @pytest.mark.parametrize("pos_tag", ["NOUN", "NUM", "PROPN"])
    def test_nominal_tags_qualify(self, pos_tag):
        assert token_fills_entity_role(pos_tag, None)

    @pytest.mark.parametrize(
        "ner_type",
        [
            "PERSON", "DATE", "ORG", "GPE", "NORP", "ORDINAL", "PRODUCT",
            "CARDINAL", "LOC", "FAC", "EVENT", "WORK_OF_ART", "LAW",
            "LANGUAGE", "TIME", "PERCENT", "MONEY", "QUANTITY",
        ],
    )
    def test_entity_types_qualify_regardless_of_pos(self, ner_type):
        assert token_fills_entity_role("ADJ", ner_type)

    def test_plain_tokens_do_not_qualify(self):
        assert not token_fills_entity_role("ADJ", None)
        assert not token_fills_entity_role(None, None)
        assert not token_fills_entity_role("VERB", "MADE_UP_TYPE")

    def test_clean_triple_has_no_problems(self):
        bundle = entity_pair_bundle()
        assert check_triple_roles(bundle, bundle.triples[0]) == []

    def test_non_verb_relation_flagged(self):
        tokens = [
            make_token(1, 1, 1, pos_tag="PROPN"),
            make_token(1, 2, 2, pos_tag="ADV"),
            make_token(1, 3, 3, pos_tag="NOUN"),
        ]
        bundle = make_bundle(
            [3],
            tokens=tokens,
            entities=[make_span("e1", 1, 1), make_span("e2", 1, 3)],
            triples=[make_triple("e1", "e2", verb_position=2)],
        )
        problems = role_violations(bundle)
        assert len(problems) == 1
        assert "VERB" in problems[0]

    def test_ineligible_entity_token_flagged(self):
        tokens = [
            make_token(1, 1, 1, pos_tag="DET"),
            make_token(1, 2, 2, pos_tag="VERB"),
            make_token(1, 3, 3, pos_tag="NOUN"),
        ]
        bundle = make_bundle(
            [3],
            tokens=tokens,
            entities=[make_span("e1", 1, 1), make_span("e2", 1, 3)],
            triples=[make_triple("e1", "e2", verb_position=2)],
        )
        problems = role_violations(bundle)
        assert len(problems) == 1
        assert "subject" in problems[0]

    def test_dangling_reference_is_a_contract_violation(self):
        bundle = entity_pair_bundle()
        bad = make_triple("nope", "e2", verb_position=2)
        with pytest.raises(ContractViolation):
            check_triple_roles(bundle, bad)


class TestGraphSummary:
    def test_summary_counts(self):
        summary = graph_summary(entity_pair_bundle())
        assert summary["num_sentences"] == 1
        assert summary["num_links"] == 0
        assert summary["triple_counts"] == {"1": 1}
        assert summary["objects_with_incoming"] == {"e2": 1}
        assert summary["role_violations"] == []
