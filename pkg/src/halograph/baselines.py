"""Uncertainty baselines built only on the decoding probabilities.

These are the standard references the graph-based scorer is compared
against: negative log-probability of the emitted token and Shannon
entropy of the recorded top-k mass, each aggregated per sentence by
mean or max.  A token-level variant (``vanilla_logprob_token``)
substitutes negative log-probability for the decayed token score
inside the full pipeline.

Entropies use the stored probabilities as-is -- no renormalization --
so a token whose top-k mass sums below one contributes the entropy of
the recorded mass only.
"""

from __future__ import annotations

from math import log
from typing import Sequence

from . import kernels
from .bundle import PassageBundle, TokenRecord
from .errors import ContractViolation

#: Floor applied to a zero realized probability before taking the log.
PROB_FLOOR = 1e-12

SENTENCE_METRICS = (
    "avg_neg_logprob",
    "max_neg_logprob",
    "avg_entropy",
    "max_entropy",
)

TOKEN_METRICS = ("vanilla_logprob_token",)

SUBSTITUTE_METRICS = TOKEN_METRICS + SENTENCE_METRICS


def neg_logprob(prob: float, *, warnings: list[str] | None = None) -> float:
    """Negative natural log of a probability, flooring exact zeros.

    A stored probability of exactly zero would give an infinite
    surprisal; it is clamped to ``PROB_FLOOR`` and reported through
    ``warnings`` so silent data problems do not hide behind a large
    finite score.
    """
    if not 0.0 <= prob <= 1.0:
        raise ContractViolation(f"probability must lie in [0, 1], got {prob!r}")
    if prob == 0.0:
        if warnings is not None:
            warnings.append(
                f"realized probability of 0 clamped to {PROB_FLOOR!r} "
                "before taking the log"
            )
        prob = PROB_FLOOR
    return -log(prob)


def token_neg_logprobs(
    tokens: Sequence[TokenRecord], *, warnings: list[str] | None = None
) -> list[float]:
    """Negative log of each token's realized probability."""
    return [neg_logprob(token.realized_prob, warnings=warnings) for token in tokens]


def token_entropies(tokens: Sequence[TokenRecord]) -> list[float]:
    """Entropy in nats of each token's top-k probabilities."""
    return kernels.entropy_batch([token.topk_probs for token in tokens])


def sentence_baseline(
    metric: str,
    tokens: Sequence[TokenRecord],
    *,
    warnings: list[str] | None = None,
) -> float:
    """One sentence-level baseline score over the sentence's tokens."""
    if metric not in SENTENCE_METRICS:
        raise ContractViolation(
            f"unknown sentence baseline {metric!r}; expected one of {SENTENCE_METRICS}"
        )
    if len(tokens) == 0:
        raise ContractViolation("a sentence baseline needs at least one token")
    if metric.endswith("neg_logprob"):
        values = token_neg_logprobs(tokens, warnings=warnings)
    else:
        values = token_entropies(tokens)
    if metric.startswith("avg_"):
        return sum(values) / len(values)
    return max(values)


def sentence_baselines(
    metric: str, bundle: PassageBundle, *, warnings: list[str] | None = None
) -> list[float]:
    """The baseline score for every sentence of a validated bundle."""
    return [
        sentence_baseline(metric, bundle.sentence_tokens(i), warnings=warnings)
        for i in range(1, bundle.num_sentences + 1)
    ]
