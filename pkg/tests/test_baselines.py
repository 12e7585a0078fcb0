"""Probability-only baselines: values, clamping, aggregation."""

from __future__ import annotations

import math

import numpy as np
import pytest

from halograph.baselines import (
    PROB_FLOOR,
    neg_logprob,
    sentence_baseline,
    sentence_baselines,
    token_entropies,
    token_neg_logprobs,
)
from halograph.errors import ContractViolation

from conftest import make_bundle, make_token


class TestNegLogprob:
    def test_certain_token_scores_zero(self):
        assert neg_logprob(1.0) == 0.0

    def test_surprisal_of_half(self):
        np.testing.assert_allclose(neg_logprob(0.5), math.log(2), rtol=1e-15)

    def test_zero_probability_clamped_with_warning(self):
        warnings: list[str] = []
        value = neg_logprob(0.0, warnings=warnings)
        np.testing.assert_allclose(value, -math.log(PROB_FLOOR), rtol=1e-15)
        assert len(warnings) == 1
        assert "clamped" in warnings[0]

    def test_out_of_range_rejected(self):
        with pytest.raises(ContractViolation):
            neg_logprob(1.5)


class TestSentenceBaselines:
    def tokens(self):
        return [
            make_token(1, 1, 1, topk=(0.5, 0.25, 0.25), realized=0.5),
            make_token(1, 2, 2, topk=(0.8, 0.1, 0.1), realized=0.2),
        ]

    def test_avg_neg_logprob(self):
        expected = (-math.log(0.5) - math.log(0.2)) / 2
        np.testing.assert_allclose(
            sentence_baseline("avg_neg_logprob", self.tokens()), expected, rtol=1e-15
        )

    def test_max_neg_logprob(self):
        np.testing.assert_allclose(
            sentence_baseline("max_neg_logprob", self.tokens()),
            -math.log(0.2),
            rtol=1e-15,
        )

    def test_avg_entropy_uses_recorded_mass_without_renormalizing(self):
        rows = [(0.5, 0.25, 0.25), (0.8, 0.1, 0.1)]
        expected = sum(
            -sum(p * math.log(p) for p in row) for row in rows
        ) / 2
        np.testing.assert_allclose(
            sentence_baseline("avg_entropy", self.tokens()), expected, rtol=1e-14
        )

    def test_max_entropy_bounded_by_log_k(self):
        # For any recorded mass at most 1, entropy cannot exceed ln k.
        value = sentence_baseline("max_entropy", self.tokens())
        assert 0.0 <= value <= math.log(3)

    def test_unknown_metric_rejected(self):
        with pytest.raises(ContractViolation):
            sentence_baseline("median_entropy", self.tokens())

    def test_empty_sentence_rejected(self):
        with pytest.raises(ContractViolation):
            sentence_baseline("avg_entropy", [])

    def test_per_sentence_split(self):
        bundle = make_bundle([2, 1])
        values = sentence_baselines("avg_neg_logprob", bundle)
        assert len(values) == 2
        first = token_neg_logprobs(bundle.tokens[:2])
        np.testing.assert_allclose(values[0], sum(first) / 2, rtol=1e-15)

    def test_entropy_helper_matches_kernel_semantics(self):
        bundle = make_bundle([3])
        values = token_entropies(bundle.tokens)
        for token, value in zip(bundle.tokens, values):
            expected = -sum(
                p * math.log(p) for p in token.topk_probs if p > 0
            )
            np.testing.assert_allclose(value, expected, rtol=1e-15)
