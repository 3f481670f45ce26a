"""Exception taxonomy shared across the package.

Two families, mirrored by the CLI exit codes: ``MathematicalError`` for
violated mathematical preconditions (empty admissible range, evaluation at a
pole, off-curve input, ...) and ``NumericError`` for numerical-method
failures (non-convergence, ambiguous root matching, ...). Anything else
escaping the CLI is a genuine bug and is allowed to traceback.
"""

from __future__ import annotations


class GaudinError(Exception):
    """Base class for all package-specific errors."""


class MathematicalError(GaudinError):
    """A mathematical precondition does not hold for the given input."""


class NumericError(GaudinError):
    """A numerical procedure failed to produce a trustworthy result."""


# -- mathematical preconditions ------------------------------------------

class EmptyRangeError(MathematicalError):
    """The admissible index range for the configuration is empty."""


class WeightMismatchError(MathematicalError):
    """Tensor operands live in representations of different highest weights."""


class PoleAtOneError(MathematicalError):
    """Hamiltonian evaluation requested at the pole u = 1."""


class DegenerateInputError(MathematicalError):
    """Degenerate polynomial input (e.g. zero polynomial) where ill-defined."""


class InvalidWeightsError(MathematicalError):
    """Weights outside the admissible set for the requested closed form."""


class OffCurveError(MathematicalError):
    """The supplied point does not satisfy the curve equation."""


class PreconditionFailedError(MathematicalError):
    """A documented precondition of the operation was checked and failed."""


class MismatchFoundError(MathematicalError):
    """A cross-validation sweep found a disagreement between two routes."""


# -- numerical failures ---------------------------------------------------

class SeparationFailure(NumericError):
    """Computed roots are not separated beyond their error radii."""


class ConvergenceFailure(NumericError):
    """An iteration exhausted its budget without meeting its tolerance."""


class StepCollapse(NumericError):
    """Adaptive step size fell below the floor during path tracking."""


class MatchAmbiguity(NumericError):
    """Nearest-neighbour root matching was ambiguous at full precision."""


class InconclusiveElimination(NumericError):
    """Exact elimination degenerated; smoothness cannot be decided."""
