"""Sentence-level scores: propagation, quantile summary, mixing."""

from __future__ import annotations

import random

import numpy as np
import pytest

from halograph.errors import ContractViolation
from halograph.graph import build_graph
from halograph.sentence_level import (
    INTENSITY_EPSILON,
    EntityScore,
    entity_self_uncertainty,
    entity_uncertainty,
    global_uncertainty,
    mix_uncertainties,
    propagated_uncertainty,
    relation_intensity,
    score_sentences,
)
from halograph.token_level import passage_token_uncertainties

from conftest import make_bundle, make_span, make_token, make_triple


class TestEntitySelfUncertainty:
    def test_mean_over_span(self):
        span = make_span("e1", 1, 2, 3)
        assert entity_self_uncertainty(span, [1.0, 2.0, 4.0, 8.0]) == 3.0

    def test_single_token_span(self):
        span = make_span("e1", 1, 4)
        assert entity_self_uncertainty(span, [1.0, 2.0, 4.0, 8.0]) == 8.0

    def test_span_outside_scores_rejected(self):
        with pytest.raises(ContractViolation):
            entity_self_uncertainty(make_span("e1", 1, 3, 5), [1.0, 2.0])


class TestRelationIntensity:
    def test_symmetric_single_triple_equals_shared_attention(self):
        # One incoming triple with equal attentions on both legs: the
        # intensity is exactly that shared value.
        triple = make_triple("a", "b", att_sr=0.7, att_ro=0.7)
        assert relation_intensity([triple]) == 0.7

    def test_two_triples_average(self):
        triples = [
            make_triple("a", "c", att_sr=0.4, att_ro=0.4),
            make_triple("b", "c", att_sr=0.4, att_ro=0.4),
        ]
        assert relation_intensity(triples) == 0.4

    def test_zero_attention_clamped_with_warning(self):
        triple = make_triple("a", "b", att_sr=0.0, att_ro=0.0)
        warnings: list[str] = []
        value = relation_intensity([triple], warnings=warnings, entity_id="b")
        assert value == INTENSITY_EPSILON
        assert len(warnings) == 1
        assert "clamped" in warnings[0]

    def test_empty_incoming_rejected(self):
        with pytest.raises(ContractViolation):
            relation_intensity([])


def propagation_bundle():
    """Two subjects feeding one object through one verb.

    Both subjects carry self-uncertainty 2.0 by construction (their
    tokens share a flat distribution and sit at the same relative
    depth, adjusted so the mean comes out exactly).
    """
    tokens = [
        make_token(1, 1, 1, pos_tag="PROPN"),  # e1
        make_token(1, 2, 2, pos_tag="PROPN"),  # e2
        make_token(1, 3, 3, pos_tag="VERB"),
        make_token(1, 4, 4, pos_tag="NOUN"),  # e3
    ]
    triples = [
        make_triple("e1", "e3", verb_position=3, att_so=0.1, att_sr=0.4, att_ro=0.4),
        make_triple("e2", "e3", verb_position=3, att_so=0.2, att_sr=0.4, att_ro=0.4),
    ]
    return make_bundle(
        [4],
        tokens=tokens,
        entities=[
            make_span("e1", 1, 1),
            make_span("e2", 1, 2),
            make_span("e3", 1, 4),
        ],
        triples=triples,
    )


class TestPropagation:
    def test_two_triple_fixture_value(self):
        # intensity = mean((0.4+0.4)/2, (0.4+0.4)/2) = 0.4;
        # inflow = (0.1/0.4)*2.0 + (0.2/0.4)*2.0 = 0.5 + 1.0 = 1.5
        bundle = propagation_bundle()
        graph = build_graph(bundle)
        inflow = propagated_uncertainty("e3", graph, {"e1": 2.0, "e2": 2.0})
        assert inflow == 1.5

    def test_no_incoming_triples_receive_zero(self):
        bundle = propagation_bundle()
        graph = build_graph(bundle)
        assert propagated_uncertainty("e1", graph, {"e1": 2.0, "e2": 2.0}) == 0.0

    def test_single_hop_only_uses_subject_self_uncertainty(self):
        # A chain a -> b -> c: c's inflow reads b's own score, never
        # b's inflow, so uncertainty does not cascade.
        tokens = [
            make_token(1, 1, 1, pos_tag="PROPN"),
            make_token(1, 2, 2, pos_tag="VERB"),
            make_token(1, 3, 3, pos_tag="PROPN"),
            make_token(1, 4, 4, pos_tag="VERB"),
            make_token(1, 5, 5, pos_tag="PROPN"),
        ]
        bundle = make_bundle(
            [5],
            tokens=tokens,
            entities=[
                make_span("a", 1, 1),
                make_span("b", 1, 3),
                make_span("c", 1, 5),
            ],
            triples=[
                make_triple("a", "b", verb_position=2, att_so=0.5, att_sr=0.5, att_ro=0.5),
                make_triple("b", "c", verb_position=4, att_so=0.5, att_sr=0.5, att_ro=0.5),
            ],
        )
        graph = build_graph(bundle)
        self_u = {"a": 10.0, "b": 1.0, "c": 1.0}
        # c receives (0.5/0.5) * self(b) = 1.0 -- a's huge score is invisible.
        assert propagated_uncertainty("c", graph, self_u) == 1.0


class TestEntityUncertainty:
    def test_mean_of_self_plus_weighted_inflow(self):
        scores = [
            EntityScore("e1", self_uncertainty=2.0, propagated_uncertainty=1.0),
            EntityScore("e2", self_uncertainty=4.0, propagated_uncertainty=0.0),
        ]
        assert entity_uncertainty(scores, beta=0.5) == (2.5 + 4.0) / 2

    def test_beta_zero_is_mean_self_uncertainty(self):
        scores = [
            EntityScore("e1", self_uncertainty=2.0, propagated_uncertainty=9.0),
            EntityScore("e2", self_uncertainty=4.0, propagated_uncertainty=9.0),
        ]
        assert entity_uncertainty(scores, beta=0.0) == 3.0

    def test_empty_entity_list_rejected(self):
        with pytest.raises(ContractViolation):
            entity_uncertainty([], beta=0.5)


class TestGlobalUncertainty:
    def test_textbook_quantile(self):
        assert global_uncertainty([1, 2, 3, 4, 5], 0.8) == 4.2

    def test_bounded_by_min_and_max(self):
        rng = random.Random(99)
        for _ in range(10_000):
            values = [rng.uniform(0, 50) for _ in range(rng.randint(1, 30))]
            alpha = rng.random()
            value = global_uncertainty(values, alpha)
            assert min(values) <= value <= max(values)

    def test_monotone_in_alpha(self):
        rng = random.Random(7)
        for _ in range(200):
            values = [rng.uniform(0, 10) for _ in range(rng.randint(2, 20))]
            levels = sorted(rng.random() for _ in range(5))
            results = [global_uncertainty(values, a) for a in levels]
            assert results == sorted(results)

    def test_alpha_out_of_range(self):
        with pytest.raises(ContractViolation):
            global_uncertainty([1.0], 1.5)


class TestMixing:
    def test_lambda_one_keeps_entity_view(self):
        assert mix_uncertainties(3.0, 8.0, 1.0) == 3.0

    def test_lambda_zero_keeps_global_view(self):
        assert mix_uncertainties(3.0, 8.0, 0.0) == 8.0

    def test_interpolates_linearly(self):
        # 0.25 * entity + 0.75 * global
        np.testing.assert_allclose(mix_uncertainties(2.0, 6.0, 0.25), 5.0)
        np.testing.assert_allclose(mix_uncertainties(6.0, 2.0, 0.25), 3.0)


class TestScoreSentences:
    def test_entity_free_sentence_falls_back_to_global(self):
        bundle = make_bundle([3, 2])
        graph = build_graph(bundle)
        token_u = passage_token_uncertainties(bundle)
        sentences, entities = score_sentences(
            bundle, graph, token_u, alpha=0.8, beta=0.65, lambda_=0.7
        )
        assert entities == {}
        for score in sentences:
            assert score.entity_uncertainty == score.global_uncertainty
            assert score.sentence_uncertainty == score.global_uncertainty

    def test_integrates_propagation(self):
        bundle = propagation_bundle()
        graph = build_graph(bundle)
        token_u = passage_token_uncertainties(bundle)
        sentences, entities = score_sentences(
            bundle, graph, token_u, alpha=0.8, beta=0.65, lambda_=0.7
        )
        assert set(entities) == {"e1", "e2", "e3"}
        assert entities["e1"].propagated_uncertainty == 0.0
        assert entities["e3"].propagated_uncertainty > 0.0
        expected_entity = sum(
            entities[eid].self_uncertainty + 0.65 * entities[eid].propagated_uncertainty
            for eid in ("e1", "e2", "e3")
        ) / 3
        np.testing.assert_allclose(
            sentences[0].entity_uncertainty, expected_entity, rtol=1e-15
        )
        mixed = 0.7 * expected_entity + 0.3 * sentences[0].global_uncertainty
        np.testing.assert_allclose(sentences[0].sentence_uncertainty, mixed, rtol=1e-15)
