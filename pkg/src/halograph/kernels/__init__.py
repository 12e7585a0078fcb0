"""Numeric kernels with a compiled fast path and a pure-Python fallback.

The compiled extension (``_speedups``, built from Cython) is used when
importable; otherwise the reference implementation in ``_purepy``
serves.  Setting the environment variable ``HALOGRAPH_PURE_PYTHON`` to
a non-empty value other than ``0`` forces the fallback, which is how
the test suite checks that both backends agree.

The wrappers below normalize argument and return types so callers see
one API (plain sequences in, ``list[float]`` out) regardless of the
active backend.
"""

from __future__ import annotations

import os
from typing import Sequence

from . import _purepy

_forced = os.environ.get("HALOGRAPH_PURE_PYTHON", "").strip() not in ("", "0")
if _forced:
    _impl = _purepy
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _purepy

_NATIVE = _impl is not _purepy

if _NATIVE:
    import numpy as _np


def backend() -> str:
    """Name of the active backend: ``"native"`` or ``"python"``."""
    return "native" if _NATIVE else "python"


def token_uncertainty_batch(
    topk_rows: Sequence[Sequence[float]],
    positions: Sequence[int],
    passage_length: int,
) -> list[float]:
    """Position-decayed uncertainty for each token; see ``_purepy``."""
    if not _NATIVE:
        return _purepy.token_uncertainty_batch(topk_rows, positions, passage_length)
    if len(topk_rows) == 0:
        return []
    rows = _np.ascontiguousarray(topk_rows, dtype=_np.float64)
    pos = _np.ascontiguousarray(positions, dtype=_np.int64)
    return _impl.token_uncertainty_batch(rows, pos, passage_length).tolist()


def interpolated_quantile(values: Sequence[float], level: float) -> float:
    """Linear-interpolation quantile of ``values`` at ``level``."""
    if not _NATIVE:
        return _purepy.interpolated_quantile(values, level)
    arr = _np.ascontiguousarray(values, dtype=_np.float64)
    return float(_impl.interpolated_quantile(arr, level))


def average_ranks(values: Sequence[float]) -> list[float]:
    """1-based ranks with ties averaged."""
    if not _NATIVE:
        return _purepy.average_ranks(values)
    if len(values) == 0:
        return []
    arr = _np.ascontiguousarray(values, dtype=_np.float64)
    return _impl.average_ranks(arr).tolist()


def rank_auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """ROC-AUC by rank sums; both classes must be present."""
    if not _NATIVE:
        return _purepy.rank_auc(scores, labels)
    s = _np.ascontiguousarray(scores, dtype=_np.float64)
    l = _np.ascontiguousarray(labels, dtype=_np.int64)
    return float(_impl.rank_auc(s, l))


def entropy_batch(topk_rows: Sequence[Sequence[float]]) -> list[float]:
    """Shannon entropy in nats of each probability row."""
    if not _NATIVE:
        return _purepy.entropy_batch(topk_rows)
    if len(topk_rows) == 0:
        return []
    rows = _np.ascontiguousarray(topk_rows, dtype=_np.float64)
    return _impl.entropy_batch(rows).tolist()
