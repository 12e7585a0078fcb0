"""Token-level uncertainty scores.

A token is uncertain when the model's next-token distribution was flat
(small maximum probability and small variance across the recorded
top-k mass), and uncertainty is amplified the deeper the token sits in
the passage -- late tokens condition on more generated context, so a
flat distribution there is a stronger hallucination signal.  The decay
term grows from ``1 + e**-1`` toward ``2`` as the position approaches
the end of the passage.
"""

from __future__ import annotations

import math
from typing import Sequence

from . import kernels
from .bundle import PassageBundle
from .errors import ContractViolation


def decay_term(passage_position: int, passage_length: int) -> float:
    """Positional amplification factor ``1 + exp(p / N - 1)``.

    ``passage_position`` is 1-based and must not exceed
    ``passage_length``; both bounds are contract-checked because a
    position outside the passage signals a caller bug, not bad data.
    """
    _check_position(passage_position, passage_length)
    return 1.0 + math.exp(passage_position / passage_length - 1.0)


def token_uncertainty(
    topk_probs: Sequence[float], passage_position: int, passage_length: int
) -> float:
    """Uncertainty of one token: decay over (max + population variance).

    Raises :class:`~halograph.errors.DegenerateDistributionError` when
    every recorded probability is zero, since the denominator vanishes.
    """
    _check_position(passage_position, passage_length)
    if len(topk_probs) == 0:
        raise ContractViolation("topk_probs must not be empty")
    return kernels.token_uncertainty_batch([topk_probs], [passage_position], passage_length)[0]


def passage_token_uncertainties(bundle: PassageBundle) -> list[float]:
    """Uncertainty for every token of a validated bundle, in order."""
    n = bundle.num_tokens
    rows = [token.topk_probs for token in bundle.tokens]
    positions = [token.passage_position for token in bundle.tokens]
    return kernels.token_uncertainty_batch(rows, positions, n)


def _check_position(passage_position: int, passage_length: int) -> None:
    if passage_length < 1:
        raise ContractViolation(
            f"passage_length must be at least 1, got {passage_length}"
        )
    if not 1 <= passage_position <= passage_length:
        raise ContractViolation(
            f"passage_position {passage_position} is outside the passage "
            f"(valid range 1..{passage_length})"
        )
