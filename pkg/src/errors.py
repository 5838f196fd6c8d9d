"""
Exception hierarchy for the N-Poincare-Weyl toolkit.
Verification routines never raise for a failed identity; these are for
malformed inputs and construction bugs.
"""


class NPWError(Exception):
    """Base class for all toolkit errors."""


class DimensionError(NPWError, ValueError):
    """Shapes or tuple lengths do not match what an operation needs."""


class ToleranceError(NPWError, ValueError):
    """A tolerance was zero or negative."""


class ParameterError(NPWError, ValueError):
    """A scalar parameter is outside its allowed set (eps_p, c, side)."""


class NonFiniteError(NPWError, ValueError):
    """A matrix contains NaN or Inf entries."""


class ConvergenceError(NPWError, ArithmeticError):
    """The matrix exponential overflowed."""


class ImaginaryResidueError(NPWError, ValueError):
    """A quantity expected to be real carries an imaginary part above tolerance."""


class NonOrthonormalBasisError(NPWError):
    """Trace extraction was requested on a basis that is not trace-orthonormal."""


class SingularMatrixError(NPWError, ArithmeticError):
    """A basis change or similarity matrix is not invertible."""


class RepresentationError(NPWError):
    """Generator matrices fail the relations a representation must satisfy."""


class CopyCatError(NPWError):
    """A commutator with a momentum matrix left the span of the momentum matrices."""


class SupportError(NPWError, ValueError):
    """An event or boost parameter has weight outside the requested subspace."""


class FactorizationError(NPWError):
    """The Clebsch-Gordan factorization check needs a one-dimensional solution space."""


class SchemaError(NPWError, ValueError):
    """A JSON artifact does not carry the expected schema."""
