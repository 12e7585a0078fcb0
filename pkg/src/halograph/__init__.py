"""Graph-aware uncertainty scoring for generated passages.

The package scores precomputed language-model outputs for likely
hallucinations.  Token-level decoding statistics are sharpened by a
semantic graph -- relation triples propagate uncertainty between
entities, and sentence links weight each sentence by how strongly its
neighbors contradict it -- then calibrated into sentence and passage
scores and evaluated against human annotations.

Typical library use::

    from halograph import Config, load_corpus, score_corpus

    bundles = load_corpus("bundles.jsonl")
    report = score_corpus(bundles, Config(alpha=0.8))

The ``halograph`` command exposes the same pipeline (``validate``,
``score``, ``eval``, ``synth``, ``sweep``, ``rerun``).
"""

from __future__ import annotations

__version__ = "0.1.0"

from .bundle import (
    EntitySpan,
    NliScore,
    PassageBundle,
    SentenceLink,
    TokenRecord,
    TokenRef,
    Triple,
    Violation,
    dump_bundle,
    load_bundle,
    load_corpus,
    validate_bundle,
    write_corpus,
)
from .config import Config
from .errors import (
    BundleIntegrityError,
    BundleParseError,
    BundleValidationError,
    ContractViolation,
    DataError,
    DegenerateDistributionError,
    HalographError,
    MissingAnnotationsError,
    MissingNliScoreError,
    UndefinedMetricError,
)
from .graph import SemanticGraph, build_graph
from .pipeline import CorpusReport, ScoredPassage, score_corpus, score_passage

__all__ = [
    "__version__",
    "Config",
    "PassageBundle",
    "TokenRecord",
    "TokenRef",
    "EntitySpan",
    "Triple",
    "SentenceLink",
    "NliScore",
    "Violation",
    "SemanticGraph",
    "CorpusReport",
    "ScoredPassage",
    "load_bundle",
    "load_corpus",
    "dump_bundle",
    "write_corpus",
    "validate_bundle",
    "build_graph",
    "score_passage",
    "score_corpus",
    "HalographError",
    "BundleParseError",
    "BundleIntegrityError",
    "BundleValidationError",
    "ContractViolation",
    "DataError",
    "DegenerateDistributionError",
    "MissingNliScoreError",
    "MissingAnnotationsError",
    "UndefinedMetricError",
]
