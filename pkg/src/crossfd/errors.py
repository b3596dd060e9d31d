"""Exception types shared across the package."""


class CrossFDError(Exception):
    """Base class for all errors raised by this package."""


class MixedAlignmentError(CrossFDError):
    """Exactly one of the two interface lines falls on grid lines.

    The scheme families implemented here cover the fully aligned and the
    fully unaligned configurations only; a half-aligned cross is rejected
    rather than silently approximated.
    """


class DegenerateStencilError(CrossFDError):
    """A stencil linear system is rank-deficient beyond the expected null space."""


class NoSolutionError(CrossFDError):
    """The requested consistency order admits only the trivial stencil."""


class NonConvergenceError(CrossFDError):
    """The iterative solver stopped without meeting the residual tolerance."""


class SingularMatrixError(CrossFDError):
    """Direct factorization failed."""


class InconsistentSpecError(CrossFDError):
    """A problem definition fails its internal consistency spot checks."""


class MissingDerivativeError(CrossFDError):
    """A derivative table does not reach the order a load formula requires."""
