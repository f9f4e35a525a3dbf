"""Error taxonomy shared across the workbench.

Three families matter for the CLI exit contract: malformed input
(``ParseError``, ``MalformedTable``, ``BadConstant``, ``BadPoset``,
``TooLarge``) maps to status 2, failed checks are reported as verdicts with
status 1, and ``InconsistencyDetected`` subclasses map to status 3.  An
inconsistency means a verified theorem failed on a concrete instance, which
signals a bug in the workbench itself, never in the input.
"""


class SkewbenchError(Exception):
    """Base class for all workbench errors."""

    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


class MalformedTable(SkewbenchError):
    """Operation table is not square, not closed, or names are invalid."""


class BadConstant(SkewbenchError):
    """A declared top or bottom fails its absorption law."""


class BadPoset(SkewbenchError):
    """Relation is not reflexive, antisymmetric and transitive."""


class ParseError(SkewbenchError):
    """Malformed algebra or poset document."""

    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class TooLarge(SkewbenchError):
    """Requested instance exceeds the configured size bound."""


class CostaMismatch(SkewbenchError):
    """The three characterizations of the natural partial order disagree."""


class NotComposable(SkewbenchError):
    """Green's relations fail to compose as expected; input is not a skew lattice."""


class NotACongruence(SkewbenchError):
    """Partition does not respect some operation table; witness quadruple attached."""


class PreconditionFailed(SkewbenchError):
    """Caller-side precondition was violated."""


class NotUnique(SkewbenchError):
    """A cover that should be unique is not; signals a non-conormal input."""


class AmbiguousDiff(SkewbenchError):
    """Two candidates satisfy the dual difference identities for some pair."""


class NotCoStronglyDistributive(SkewbenchError):
    """Arrow derivation requires a co-strongly distributive reduct."""


class NoTop(SkewbenchError):
    """Arrow derivation requires a top element."""


class InconsistencyDetected(SkewbenchError):
    """A theorem verified by construction failed on an instance."""


class CoherenceFailure(InconsistencyDetected):
    """Global arrow disagrees with an upset-local arrow."""


class EsakiaFormulaMismatch(InconsistencyDetected):
    """The complement-of-downset formula disagrees with the candidate-set oracle."""


class FactorizationNotFound(InconsistencyDetected):
    """Algebra classifies as binormal but no lattice-by-rectangular splitting was found."""
