"""Exception hierarchy for the halograph package.

Every error raised by this package derives from :class:`HalographError`,
so callers can catch one type at the CLI boundary.  The subclasses keep
machine-readable context (line numbers, dangling references, missing
score pairs) as attributes rather than burying it in the message.
"""

from __future__ import annotations


class HalographError(Exception):
    """Base class for all errors raised by halograph."""


class BundleParseError(HalographError):
    """A serialized bundle could not be decoded into the wire schema.

    Raised for malformed JSON, missing required fields, and
    wrongly-typed values.  ``line_number`` is the 1-based line of the
    offending record when the source was a JSON Lines stream, or
    ``None`` when parsing an in-memory object.
    """

    def __init__(self, message: str, *, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class BundleIntegrityError(HalographError):
    """A structurally valid bundle contains a dangling cross-reference.

    Examples: a triple naming an unknown entity id, a relation token
    whose coordinates fall outside the declared sentence lengths, or a
    duplicated entity id that makes references ambiguous.  ``reference``
    identifies the offending pointer.
    """

    def __init__(self, message: str, *, reference: str, line_number: int | None = None):
        prefix = f"line {line_number}: " if line_number is not None else ""
        super().__init__(f"{prefix}{message} (reference: {reference})")
        self.reference = reference
        self.line_number = line_number


class ContractViolation(HalographError):
    """A scoring function was called with arguments outside its domain.

    This signals a programming error in the caller (an out-of-range
    position, an empty value list, a malformed weight), not bad input
    data -- data problems surface as :class:`BundleParseError`,
    :class:`BundleIntegrityError`, or validation violations instead.
    """


class DegenerateDistributionError(HalographError):
    """A token's top-k probabilities are all zero.

    The uncertainty denominator (max + variance) vanishes, so no score
    can be assigned to the token.
    """


class DataError(HalographError):
    """Input data is well-formed but unusable for the requested task."""


class BundleValidationError(DataError):
    """One or more bundles break wire-format invariants.

    ``violations`` holds ``(passage_id, Violation)`` pairs across the
    whole corpus so every problem is reported in one pass.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        lines = [
            f"{passage_id}: {violation}" for passage_id, violation in self.violations
        ]
        count = len(self.violations)
        noun = "violation" if count == 1 else "violations"
        super().__init__("\n".join([f"{count} bundle {noun}:"] + lines))


class MissingNliScoreError(DataError):
    """A required ordered contradiction score is absent from the bundle.

    Graph calibration needs the score for (premise=j, hypothesis=i) for
    every neighbor j of every sentence i; this error names the first
    missing pair.
    """

    def __init__(self, premise_sentence: int, hypothesis_sentence: int):
        super().__init__(
            "missing NLI score for ordered pair "
            f"(premise={premise_sentence}, hypothesis={hypothesis_sentence})"
        )
        self.premise_sentence = premise_sentence
        self.hypothesis_sentence = hypothesis_sentence


class MissingAnnotationsError(DataError):
    """Evaluation was requested on a corpus with no usable annotations."""


class UndefinedMetricError(HalographError):
    """An evaluation metric is undefined for the given inputs.

    Examples: ROC-AUC with a single class present, or a correlation
    over a constant vector (zero variance).
    """
