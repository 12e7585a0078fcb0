"""Pure-Python reference implementations of the scoring kernels.

These are the semantics of record: the compiled module in
``_speedups.pyx`` must agree with every function here bit-for-bit on
finite inputs.  Keep the bodies free of shortcuts that a C translation
would not reproduce (no ``statistics`` module, no numpy reductions)
so both backends perform the same arithmetic in the same order.

None of these functions validate domain preconditions beyond what is
needed to avoid dividing by zero; callers in the package wrap them
with contract checks.
"""

from __future__ import annotations

import math
from typing import Sequence

from ..errors import DegenerateDistributionError


def token_uncertainty_batch(
    topk_rows: Sequence[Sequence[float]],
    positions: Sequence[int],
    passage_length: int,
) -> list[float]:
    """Position-decayed uncertainty for each token.

    Each row of ``topk_rows`` holds a token's top-k probabilities and
    ``positions[i]`` its 1-based position in the passage of
    ``passage_length`` tokens.  The score is
    ``(1 + exp(p / N - 1)) / (max + population_variance)`` over the row.
    """
    out = []
    for row, position in zip(topk_rows, positions):
        k = len(row)
        biggest = row[0]
        total = 0.0
        for p in row:
            if p > biggest:
                biggest = p
            total += p
        mean = total / k
        spread = 0.0
        for p in row:
            d = p - mean
            spread += d * d
        denom = biggest + spread / k
        if denom <= 0.0:
            raise DegenerateDistributionError(
                "token top-k probabilities are all zero; "
                "uncertainty denominator vanishes"
            )
        out.append((1.0 + math.exp(position / passage_length - 1.0)) / denom)
    return out


def interpolated_quantile(values: Sequence[float], level: float) -> float:
    """Quantile of ``values`` at ``level`` with linear interpolation.

    Uses the ``h = (n - 1) * level`` convention: the result is the
    fractional order statistic ``x[floor(h)] + (h - floor(h)) *
    (x[floor(h) + 1] - x[floor(h)])`` over the sorted values, so the
    endpoints map to the minimum and maximum exactly.
    """
    xs = sorted(values)
    n = len(xs)
    if n == 1:
        return xs[0]
    h = (n - 1) * level
    lo = int(h)
    if lo >= n - 1:
        return xs[n - 1]
    return xs[lo] + (h - lo) * (xs[lo + 1] - xs[lo])


def average_ranks(values: Sequence[float]) -> list[float]:
    """1-based ranks of ``values``, with tied values sharing the mean rank."""
    n = len(values)
    order = sorted(range(n), key=values.__getitem__)
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        # Positions i..j (0-based) carry ranks i+1..j+1; share the mean.
        shared = (i + j + 2) / 2.0
        for t in range(i, j + 1):
            ranks[order[t]] = shared
        i = j + 1
    return ranks


def rank_auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """ROC-AUC via the rank-sum identity, counting ties as half.

    ``labels`` must contain at least one 0 and one 1; callers check
    that before dispatching here.
    """
    ranks = average_ranks(scores)
    positives = 0
    rank_sum = 0.0
    for rank, label in zip(ranks, labels):
        if label:
            positives += 1
            rank_sum += rank
    negatives = len(labels) - positives
    return (rank_sum - positives * (positives + 1) / 2.0) / (positives * negatives)


def entropy_batch(topk_rows: Sequence[Sequence[float]]) -> list[float]:
    """Shannon entropy in nats of each row, zero terms skipped.

    Rows are used as-is (no renormalization), so a row summing below
    one yields the entropy of the recorded mass only.
    """
    out = []
    for row in topk_rows:
        acc = 0.0
        for p in row:
            if p > 0.0:
                acc -= p * math.log(p)
        out.append(acc)
    return out
