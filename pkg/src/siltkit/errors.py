"""Exception types shared by every layer of the package."""


class SiltkitError(Exception):
    """Base class for all errors raised by siltkit."""


class Inconsistent(SiltkitError, ArithmeticError):
    """A linear system has no solution."""


class NotAdmissible(SiltkitError, ValueError):
    """A relation is malformed or involves paths of length < 2."""


class NotFiniteDimensional(SiltkitError, ValueError):
    """The bound quiver algebra could not be certified finite-dimensional."""


class FieldTooSmall(SiltkitError):
    """The prime is not larger than an endomorphism ring dimension."""


class OutOfWindow(SiltkitError):
    """A complex or map leaves the degree window [-d+1, 0]."""


class Undecided(SiltkitError):
    """The isomorphism search could neither confirm nor refute."""


class Diverged(SiltkitError):
    """Mutation search exceeded its configured cap."""


class PoolCapExceeded(SiltkitError):
    """The indecomposable pool did not reach a fixpoint under the cap."""


class OracleMismatch(SiltkitError):
    """Two independent computations of the same object disagree."""


class NotClosed(SiltkitError):
    """A lattice operation produced an element outside the element set."""


class PoolIncomplete(SiltkitError):
    """A computed object has an indecomposable summand missing from the pool."""


class NotSTorsionByWitness(SiltkitError):
    """No conflation T -> C -> F was found for some pool member C."""
