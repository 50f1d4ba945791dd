"""Model geometries and their radial Laplace operators.

The three simply connected constant-curvature spaces share one radial
structure: writing w(r) for the metric weight (the radius of the geodesic
sphere at distance r), the Laplacian of a radial function u(r) in dimension n
is

    A_n u = u'' + (n - 1) (w'/w) u',

with w(r) = r on Euclidean space, sin r on the unit sphere and sinh r on
hyperbolic space.  Everything else in the package (raising operators, descent
integrals, surface measures) is phrased in terms of w, so this module is the
single source of truth for it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError, SingularPointError


class Space(enum.Enum):
    """The three constant-curvature model spaces."""

    EUCLIDEAN = "euclidean"
    SPHERE = "sphere"
    HYPERBOLIC = "hyperbolic"

    @property
    def curvature(self) -> int:
        """Sectional curvature sign: 0, +1 or -1."""
        if self is Space.EUCLIDEAN:
            return 0
        return 1 if self is Space.SPHERE else -1

    @property
    def distance_sup(self) -> float:
        """Supremum of geodesic distance (pi on the sphere, else infinity)."""
        return math.pi if self is Space.SPHERE else math.inf

    def weight(self, r: float) -> float:
        """Metric weight w(r)."""
        if self is Space.EUCLIDEAN:
            return r
        if self is Space.SPHERE:
            return math.sin(r)
        return math.sinh(r)

    def weight_deriv(self, r: float) -> float:
        """w'(r)."""
        if self is Space.EUCLIDEAN:
            return 1.0
        if self is Space.SPHERE:
            return math.cos(r)
        return math.cosh(r)

    def validate_distance(self, r: float, *, strict: bool = False) -> None:
        """Check that r is an admissible geodesic distance.

        With ``strict`` the endpoints of the distance range are rejected as
        well (needed wherever w(r) appears in a denominator).
        """
        if not math.isfinite(r):
            raise DomainError(f"distance must be finite, got {r}")
        if r < 0.0:
            raise DomainError(f"distance must be nonnegative, got {r}")
        if self is Space.SPHERE and r > math.pi:
            raise DomainError(f"sphere distance must lie in [0, pi], got {r}")
        if strict:
            if r == 0.0:
                raise SingularPointError("operation is singular at distance 0")
            if self is Space.SPHERE and r == math.pi:
                raise SingularPointError("operation is singular at the antipode")


def space_from_name(name: str) -> Space:
    """Parse a space name; accepts the enum values and common aliases."""
    key = name.strip().lower()
    aliases = {
        "euclidean": Space.EUCLIDEAN,
        "euclid": Space.EUCLIDEAN,
        "flat": Space.EUCLIDEAN,
        "rn": Space.EUCLIDEAN,
        "sphere": Space.SPHERE,
        "spherical": Space.SPHERE,
        "sn": Space.SPHERE,
        "hyperbolic": Space.HYPERBOLIC,
        "hyp": Space.HYPERBOLIC,
        "hn": Space.HYPERBOLIC,
    }
    try:
        return aliases[key]
    except KeyError:
        raise DomainError(f"unknown space {name!r}") from None


def sphere_surface_coeff(n: int) -> float:
    """Surface measure of the unit (n-1)-sphere, 2 pi^(n/2) / Gamma(n/2).

    This is the constant in the radial volume element
    dV = sphere_surface_coeff(n) * w(r)^(n-1) dr.  For n = 1 it equals 2,
    counting the two endpoints of an interval.
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"dimension must be a positive integer, got {n}")
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def radial_laplacian(space: Space, n: int, u):
    """Apply A_n = d^2/dr^2 + (n-1)(w'/w) d/dr to a jet u.

    ``u`` must support ``deriv()`` and carry at least two derivative orders;
    the result is a jet two orders shorter.  The operator is singular where
    w vanishes, so the jet centre must avoid r = 0 (and the antipode on the
    sphere).
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"dimension must be a positive integer, got {n}")
    if u.order < 2:
        raise DomainError("radial_laplacian needs a jet of order >= 2")
    space.validate_distance(u.center, strict=True)
    du = u.deriv()
    d2u = du.deriv()
    if n == 1:
        return d2u
    from .jets import weight_jet

    w = weight_jet(space, u.center, d2u.order + 1)
    ratio = w.deriv() / w
    return d2u + (n - 1) * (ratio * du)


_VALID_KINDS = ("heat", "poisson")


@dataclass(frozen=True)
class KernelQuery:
    """A single kernel evaluation request.

    ``param`` is the time t for heat kernels and the height y for Poisson
    kernels; ``r`` is geodesic distance.  Validation happens on construction
    so downstream code can assume a well-posed query.
    """

    space: Space
    n: int
    kind: str
    param: float
    r: float

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise DomainError(f"dimension must be a positive integer, got {self.n}")
        if self.kind not in _VALID_KINDS:
            raise DomainError(f"kind must be one of {_VALID_KINDS}, got {self.kind!r}")
        if not (math.isfinite(self.param) and self.param > 0.0):
            name = "time" if self.kind == "heat" else "height"
            raise DomainError(f"{name} parameter must be positive and finite, got {self.param}")
        if self.kind == "poisson" and self.space is Space.HYPERBOLIC and self.param >= math.pi:
            raise DomainError(
                f"hyperbolic Poisson height must lie in (0, pi), got {self.param}"
            )
        self.space.validate_distance(self.r)
