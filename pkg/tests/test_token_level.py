"""Token-level scores: decay behavior, unit values, contracts."""

from __future__ import annotations

import math
import random

import numpy as np
import pytest

from halograph.errors import ContractViolation, DegenerateDistributionError
from halograph.synth import SynthShape, generate_corpus
from halograph.token_level import (
    decay_term,
    passage_token_uncertainties,
    token_uncertainty,
)


class TestDecayTerm:
    def test_end_of_passage_is_two(self):
        assert decay_term(50, 50) == 2.0

    def test_bounded_over_random_positions(self):
        rng = random.Random(123)
        lower = 1 + math.exp(-1)
        for _ in range(10_000):
            length = rng.randint(1, 5000)
            position = rng.randint(1, length)
            value = decay_term(position, length)
            assert lower < value <= 2.0

    def test_increases_with_position(self):
        values = [decay_term(p, 100) for p in range(1, 101)]
        assert values == sorted(values)
        assert values[-1] == 2.0

    @pytest.mark.parametrize("position,length", [(0, 5), (6, 5), (-1, 5), (1, 0)])
    def test_out_of_range_position_rejected(self, position, length):
        with pytest.raises(ContractViolation):
            decay_term(position, length)


class TestTokenUncertainty:
    def test_certain_token_at_end(self):
        np.testing.assert_allclose(
            token_uncertainty([1.0, 0.0, 0.0], 10, 10), 18 / 11, rtol=0, atol=1e-12
        )

    def test_flat_distribution_at_end(self):
        third = 1.0 / 3.0
        np.testing.assert_allclose(
            token_uncertainty([third, third, third], 4, 4), 6.0, rtol=0, atol=1e-12
        )

    def test_no_variance_reduces_to_decay_over_max(self):
        value = token_uncertainty([0.25, 0.25, 0.25], 1, 2)
        np.testing.assert_allclose(value, decay_term(1, 2) / 0.25, rtol=1e-15)

    def test_decreasing_in_peak_probability(self):
        values = [
            token_uncertainty([x, 0.0, 0.0], 3, 5)
            for x in (0.2, 0.4, 0.6, 0.8, 1.0)
        ]
        assert values == sorted(values, reverse=True)

    def test_later_position_is_more_uncertain(self):
        topk = [0.4, 0.3, 0.2]
        early = token_uncertainty(topk, 1, 100)
        late = token_uncertainty(topk, 100, 100)
        assert late > early

    def test_degenerate_distribution_raises(self):
        with pytest.raises(DegenerateDistributionError):
            token_uncertainty([0.0, 0.0, 0.0], 1, 1)

    def test_empty_topk_rejected(self):
        with pytest.raises(ContractViolation):
            token_uncertainty([], 1, 1)

    def test_position_contract(self):
        with pytest.raises(ContractViolation):
            token_uncertainty([0.5, 0.3, 0.1], 3, 2)


class TestPassageBatch:
    def test_matches_per_token_calls(self):
        for bundle in generate_corpus(2, SynthShape(num_passages=4)):
            batch = passage_token_uncertainties(bundle)
            total = bundle.num_tokens
            singles = [
                token_uncertainty(token.topk_probs, token.passage_position, total)
                for token in bundle.tokens
            ]
            assert batch == singles
