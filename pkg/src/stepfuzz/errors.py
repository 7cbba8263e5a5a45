"""Exception types shared across the package.

Every error raised by the library derives from StepfuzzError, so callers can
catch one base class. The CLI maps DslSyntaxError/SemanticError to exit code 3
and everything argument-shaped to exit code 2.
"""


class StepfuzzError(Exception):
    """Base class for all library errors."""


# ---- construction / validation ----

class NotDescending(StepfuzzError):
    """Threshold list is not strictly descending."""


class NotNested(StepfuzzError):
    """Cut family is not nested (some higher cut is not inside a lower one)."""


class OutOfRange(StepfuzzError):
    """A level lies outside its permitted range."""


class ValidationError(StepfuzzError):
    """An instantiated cut family violates the step-set invariants."""


# ---- set geometry ----

class EmptyOperand(StepfuzzError):
    """Operation requires nonempty operands."""


class EmptyComplex(StepfuzzError):
    """Operation requires a nonempty prism complex."""


class BadRange(StepfuzzError):
    """Truncation range has r > t."""


class NonMonotoneBand(StepfuzzError):
    """Structural connectivity engine cannot certify a band as monotone."""


# ---- grids ----

class BadResolution(StepfuzzError):
    """Grid spacing must be positive."""


class UnboundedWindow(StepfuzzError):
    """Grid window must be bounded."""


class DimensionMismatch(StepfuzzError):
    """Grid operands have different dimension or incompatible spacing."""


# ---- sequences / expressions ----

class OutOfDomain(StepfuzzError):
    """Sequence index outside the validity domain."""


class EvalError(StepfuzzError):
    """Expression evaluation failed (division by zero, undefined symbol)."""


class JumpLevel(StepfuzzError):
    """Level coincides with a discontinuity level of the reference set."""


# ---- DSL ----

class DslSyntaxError(StepfuzzError):
    """Tokenizer/parser error with source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class SemanticError(StepfuzzError):
    """Well-formed text with inconsistent meaning (band gaps, nestedness, scope)."""
