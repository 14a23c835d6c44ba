"""Exception hierarchy.

All errors raised for invalid physical input derive from :class:`DiracGHError`,
which is itself a :class:`ValueError` so callers can catch either.
"""


class DiracGHError(ValueError):
    """Base class for every error raised by :mod:`dirac_gh`."""


class DomainError(DiracGHError):
    """Input parameters violate a precondition (e.g. ``E <= m``)."""


class RegimeError(DiracGHError):
    """Operation is undefined in the scattering regime of the input."""


class SingularBarrierError(DiracGHError):
    """Barrier sits at ``V = E - m`` where the transmitted spinor degenerates."""


class ConvergenceError(DiracGHError):
    """A numerical procedure (step selection, quadrature) failed to converge."""
