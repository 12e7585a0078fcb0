"""Scoring configuration: hyperparameters and calibration choices.

A :class:`Config` travels through the whole pipeline so that every
stage reads the same knobs.  The serialized form uses the key
``"lambda"`` for the mixing weight; the Python attribute is ``lambda_``
because ``lambda`` is a keyword.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .errors import ContractViolation

PROJECTION_KINDS = ("inverse", "sigmoid", "logistic")
ISOLATED_POLICIES = ("adjacent-fallback", "skip")
PASSAGE_METHODS = ("graph", "adjacent", "average")

#: Serialized key -> dataclass field name (identity except for lambda).
_FIELD_BY_KEY = {
    "alpha": "alpha",
    "beta": "beta",
    "lambda": "lambda_",
    "k": "k",
    "sentence_projection": "sentence_projection",
    "passage_projection": "passage_projection",
    "isolated_sentence_policy": "isolated_sentence_policy",
}
_KEY_BY_FIELD = {field: key for key, field in _FIELD_BY_KEY.items()}


@dataclass(frozen=True)
class Config:
    """Hyperparameters for scoring a corpus of passage bundles.

    alpha
        Quantile level for the sentence-global uncertainty summary.
    beta
        Weight of propagated (graph-neighbor) uncertainty relative to
        an entity's own uncertainty.
    lambda_
        Mixing weight between the entity-level and global sentence
        uncertainties.
    k
        Number of top-mass probabilities recorded per token; bundles
        are validated against this width.
    sentence_projection / passage_projection
        Which squashing map carries raw scores into (0, 1) at each
        granularity; one of ``inverse``, ``sigmoid``, ``logistic``.
    isolated_sentence_policy
        What graph calibration does with a sentence that has no
        neighbors: ``adjacent-fallback`` borrows the adjacent
        sentences, ``skip`` drops the sentence from the aggregate.
    """

    alpha: float = 0.8
    beta: float = 0.65
    lambda_: float = 0.7
    k: int = 3
    sentence_projection: str = "logistic"
    passage_projection: str = "inverse"
    isolated_sentence_policy: str = "adjacent-fallback"

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ContractViolation(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.beta < 0.0:
            raise ContractViolation(f"beta must be non-negative, got {self.beta}")
        if not 0.0 <= self.lambda_ <= 1.0:
            raise ContractViolation(f"lambda must lie in [0, 1], got {self.lambda_}")
        if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 1:
            raise ContractViolation(f"k must be a positive integer, got {self.k!r}")
        if self.sentence_projection not in PROJECTION_KINDS:
            raise ContractViolation(
                f"unknown sentence projection {self.sentence_projection!r}; "
                f"expected one of {PROJECTION_KINDS}"
            )
        if self.passage_projection not in PROJECTION_KINDS:
            raise ContractViolation(
                f"unknown passage projection {self.passage_projection!r}; "
                f"expected one of {PROJECTION_KINDS}"
            )
        if self.isolated_sentence_policy not in ISOLATED_POLICIES:
            raise ContractViolation(
                f"unknown isolated-sentence policy {self.isolated_sentence_policy!r}; "
                f"expected one of {ISOLATED_POLICIES}"
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            _KEY_BY_FIELD[field.name]: getattr(self, field.name)
            for field in dataclasses.fields(self)
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Config:
        unknown = set(data) - set(_FIELD_BY_KEY)
        if unknown:
            raise ContractViolation(
                f"unknown config keys: {', '.join(sorted(unknown))}"
            )
        kwargs = {_FIELD_BY_KEY[key]: value for key, value in data.items()}
        for name in ("alpha", "beta", "lambda_"):
            if name in kwargs and isinstance(kwargs[name], int) and not isinstance(kwargs[name], bool):
                kwargs[name] = float(kwargs[name])
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path: str | Path) -> Config:
        with open(path, encoding="utf-8") as handle:
            try:
                data = json.load(handle)
            except json.JSONDecodeError as exc:
                raise ContractViolation(f"config file {path}: invalid JSON ({exc})") from exc
        if not isinstance(data, dict):
            raise ContractViolation(f"config file {path}: expected a JSON object")
        return cls.from_dict(data)

    def replace(self, **changes: Any) -> Config:
        return dataclasses.replace(self, **changes)
