"""Heat and Poisson kernels on Euclidean space, by every available route.

The closed forms are

    heat:     H_n(t, r) = (4 pi t)^(-n/2) exp(-r^2 / 4t)
    poisson:  P_n(y, r) = Gamma((n+1)/2) / pi^((n+1)/2) * y / (r^2+y^2)^((n+1)/2)

and the alternative representations cross-validate them:

* raising: apply D = -(2 pi w)^(-1) d/dr, which sends dimension n to n+2,
  (n-1)/2 times to the 1-d kernel for odd n; for even n either apply it to
  the descent integral of the 3-d kernel ("outside") or move it under the
  integral sign ("inside").
* descent: the inverse-square-root integral
  integral_r^inf (s^2-r^2)^(-1/2) K_(n+1)(s) 2s ds, which lowers n+1 to n
  with multiplicative constant exactly 1.
* contour: a vertical-line integral with Gaussian envelope exp(y^2/4t)
  (the flat case of the curved-space contour formulas).
* poisson integral: P_n as a Gaussian average,
  2y / pi^((n+1)/2) * integral_0^inf w^n exp(-(r^2+y^2) w^2) dw.
"""

from __future__ import annotations

import cmath
import math

from .errors import DomainError, SingularPointError
from .geometry import Space
from .jets import (
    MAX_ORDER,
    Jet,
    RadialGenerator,
    raise_operator,
    raise_origin_jet,
    variable,
)
from .quadrature import (
    DEFAULT_TOL,
    QuadResult,
    contour_spec,
    integrate_adaptive,
    integrate_contour,
    integrate_sqrt_endpoint,
    integrate_to_infinity,
)

# Raising at 0 < r < GUARD_RADIUS divides by a near-vanishing weight; callers
# should use the closed form there (r = 0 itself is evaluated exactly by
# parity).
GUARD_RADIUS = 1e-3


def _check_dim(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"dimension must be a positive integer, got {n}")


def _check_positive(name: str, x: float) -> None:
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"{name} must be positive and finite, got {x}")


def _check_radius(r: float) -> None:
    if not (math.isfinite(r) and r >= 0.0):
        raise DomainError(f"distance must be nonnegative and finite, got {r}")


# ---------------------------------------------------------------------------
# closed forms


def heat_closed(n: int, t: float, r: float) -> float:
    _check_dim(n)
    _check_positive("time", t)
    _check_radius(r)
    return (4.0 * math.pi * t) ** (-0.5 * n) * math.exp(-r * r / (4.0 * t))


def poisson_closed(n: int, y: float, r: float) -> float:
    _check_dim(n)
    _check_positive("height", y)
    _check_radius(r)
    half = 0.5 * (n + 1)
    return math.gamma(half) / math.pi**half * y / (r * r + y * y) ** half


# ---------------------------------------------------------------------------
# raising


def _guarded_raised(gen: RadialGenerator, k: int):
    """Pointwise k-raised kernel, safe arbitrarily close to the origin.

    Inside the guard band direct raising divides by a near-vanishing weight,
    so integrands that sweep s toward 0 (the under-the-integral raising
    variants at r = 0) substitute an origin-centred jet of the raised kernel;
    its truncation error at s < GUARD_RADIUS is far below roundoff.
    """
    cache: list = []

    def kernel(s: float) -> float:
        if s < GUARD_RADIUS:
            if not cache:
                spare = MAX_ORDER - 2 * k
                cache.append(raise_origin_jet(Space.EUCLIDEAN, gen, k, min(8, spare)))
            return cache[0](s)
        return raise_operator(Space.EUCLIDEAN, gen, k, s)

    return kernel


def _gauss_jet(t: float) -> RadialGenerator:
    """Jets of the 1-d heat kernel (4 pi t)^(-1/2) exp(-r^2/4t)."""
    amp = (4.0 * math.pi * t) ** -0.5

    def gen(center: float, order: int) -> Jet:
        x = variable(center, order)
        return (x * x * (-0.25 / t)).exp() * amp

    return gen


def _plane_descent_jet(t: float, tol: float, evals: list) -> RadialGenerator:
    """Jets of the 2-d kernel written as the descent integral of the 3-d one.

    With z = s^2 - r^2 the integral becomes
    (4 pi t)^(-3/2) integral_0^inf z^(-1/2) exp(-(r^2+z)/4t) dz, and the jet
    in r passes under the integral sign, evaluated by one array-valued
    adaptive pass.
    """
    amp = (4.0 * math.pi * t) ** -1.5
    z_max = 4.0 * t * (math.log(1.0 / tol) + 5.0)

    def gen(center: float, order: int) -> Jet:
        x = variable(center, order)
        radial = (x * x * (-0.25 / t)).exp()

        def integrand(z: float):
            return (radial * math.exp(-z / (4.0 * t))).coeffs

        res = integrate_sqrt_endpoint(integrand, 0.0, z_max, tol * 0.1, abs_tol=0.0)
        evals.append(res.n_evals)
        return Jet(center, res.value) * amp

    return gen


def heat_raise(
    n: int,
    t: float,
    r: float,
    *,
    variant: str = "outside",
    tol: float = DEFAULT_TOL,
) -> QuadResult:
    """Heat kernel through the dimension-raising recursion.

    Odd n reduces to jets of the 1-d Gaussian (no quadrature, error 0).
    Even n needs one inverse-square-root integral; ``variant`` selects
    whether the raising operator acts outside it ("outside") or under the
    integral sign on the 3-d kernel ("inside").
    """
    _check_dim(n)
    _check_positive("time", t)
    _check_radius(r)
    if 0.0 < r < GUARD_RADIUS:
        raise SingularPointError(
            f"raising is ill-conditioned for 0 < r < {GUARD_RADIUS}; use the closed form"
        )
    if n % 2 == 1:
        k = (n - 1) // 2
        value = raise_operator(Space.EUCLIDEAN, _gauss_jet(t), k, r)
        return QuadResult(value, 0.0, 0)
    if variant == "outside":
        evals: list = []
        k = (n - 2) // 2
        value = raise_operator(Space.EUCLIDEAN, _plane_descent_jet(t, tol, evals), k, r)
        return QuadResult(value, tol * abs(value), sum(evals))
    if variant == "inside":
        kernel = _guarded_raised(_gauss_jet(t), n // 2)

        def f_regular(s: float) -> float:
            return kernel(s) * 2.0 * s / math.sqrt(s + r)

        s_max = math.sqrt(r * r + 4.0 * t * (math.log(1.0 / tol) + 5.0)) + 1.0
        res = integrate_sqrt_endpoint(f_regular, r, s_max, tol, abs_tol=0.0)
        return res
    raise DomainError(f"unknown raising variant {variant!r}")


# ---------------------------------------------------------------------------
# descent


def heat_descent(n: int, t: float, r: float, tol: float = DEFAULT_TOL) -> QuadResult:
    """Heat kernel as the descent integral of the closed (n+1)-kernel."""
    _check_dim(n)
    _check_positive("time", t)
    _check_radius(r)

    def f_regular(s: float) -> float:
        return heat_closed(n + 1, t, s) * 2.0 * s / math.sqrt(s + r)

    s_max = math.sqrt(r * r + 4.0 * t * (math.log(1.0 / tol) + 5.0)) + 1.0
    return integrate_sqrt_endpoint(f_regular, r, s_max, tol, abs_tol=0.0)


# ---------------------------------------------------------------------------
# contour


def sigma_default(t: float, r: float) -> float:
    """Default contour abscissa.

    Half the larger of 1 and r (clear of the branch point), capped so the
    oscillatory factor exp(sigma^2/4t) cannot push the relative cancellation
    floor above about 1e-9 at small t.
    """
    cap_sq = 4.0 * t * math.log(1e9) - r * r
    cap = math.sqrt(cap_sq) if cap_sq > 0.04 else 0.2
    return min(0.5 * max(1.0, r), cap, 3.0)


def heat_gruet(
    n: int,
    t: float,
    r: float,
    *,
    sigma: float | None = None,
    tol: float = DEFAULT_TOL,
) -> QuadResult:
    """Heat kernel as a vertical-contour integral.

    Parametrized by y = sigma - i xi, the integrand
    2 y exp(y^2/4t) (r^2+y^2)^(-(n+1)/2) has a Gaussian envelope in xi and
    algebraic spikes where y^2 approaches -r^2 (near xi = r for small sigma);
    the spike is seeded as a breakpoint.  The value is independent of sigma,
    which the error estimate must cover (the basis of the deformation
    cross-check).
    """
    _check_dim(n)
    _check_positive("time", t)
    _check_radius(r)
    if sigma is None:
        sigma = sigma_default(t, r)
    _check_positive("sigma", sigma)
    pref = math.gamma(0.5 * (n + 1)) / (
        math.pi ** (0.5 * n + 1.0) * math.sqrt(4.0 * t)
    )
    half = 0.5 * (n + 1)
    inv4t = 0.25 / t

    def f(y: complex) -> complex:
        yy = y * y
        return 2.0 * y * cmath.exp(yy * inv4t) / (r * r + yy) ** half

    spec = contour_spec(sigma, 4.0 * t, tol)
    bps = [r] if 0.0 < r < spec.xi_max else []
    res = integrate_contour(f, spec, bps)
    return res.scaled(pref)


# ---------------------------------------------------------------------------
# poisson representations


def poisson_integral(n: int, y: float, r: float, tol: float = DEFAULT_TOL) -> QuadResult:
    """Poisson kernel as a one-sided Gaussian average over the scale w."""
    _check_dim(n)
    _check_positive("height", y)
    _check_radius(r)
    c = r * r + y * y
    w_max = math.sqrt((math.log(1.0 / tol) + n + 4.0) / c)

    def f(w: float) -> float:
        return w**n * math.exp(-c * w * w)

    res = integrate_adaptive(f, 0.0, w_max, tol, abs_tol=0.0)
    return res.scaled(2.0 * y / math.pi ** (0.5 * (n + 1)))


def _halfplane_jet(y: float) -> RadialGenerator:
    """Jets of the 1-d Poisson kernel y / (pi (r^2 + y^2))."""

    def gen(center: float, order: int) -> Jet:
        x = variable(center, order)
        return (y / math.pi) / (x * x + y * y)

    return gen


def _space_descent_jet(y: float, tol: float, evals: list) -> RadialGenerator:
    """Jets of the 2-d Poisson kernel as the descent integral of the 3-d one.

    P_3(y, s) = y / (pi^2 (s^2+y^2)^2); with z = s^2 - r^2 the descent
    integral is y/pi^2 integral_0^inf z^(-1/2) (z + r^2 + y^2)^(-2) dz.  The
    z-tail is algebraic, so it is split at a finite point and compactified.
    """
    amp = y / math.pi**2

    def gen(center: float, order: int) -> Jet:
        x = variable(center, order)
        shift = x * x + y * y
        z_split = 4.0 * (center * center + y * y) + 1.0

        def body(z: float):
            return (shift + z).power(-2.0).coeffs

        def tail(z: float):
            return (shift + z).power(-2.0).coeffs / math.sqrt(z)

        res1 = integrate_sqrt_endpoint(body, 0.0, z_split, tol * 0.1, abs_tol=0.0)
        res2 = integrate_to_infinity(tail, z_split, tol * 0.1, abs_tol=0.0, scale=z_split)
        evals.append(res1.n_evals + res2.n_evals)
        return Jet(center, res1.value + res2.value) * amp

    return gen


def poisson_raise(
    n: int,
    y: float,
    r: float,
    *,
    variant: str = "outside",
    tol: float = DEFAULT_TOL,
) -> QuadResult:
    """Poisson kernel through the dimension-raising recursion.

    Same parity split as :func:`heat_raise`, over the Poisson base kernels.
    """
    _check_dim(n)
    _check_positive("height", y)
    _check_radius(r)
    if 0.0 < r < GUARD_RADIUS:
        raise SingularPointError(
            f"raising is ill-conditioned for 0 < r < {GUARD_RADIUS}; use the closed form"
        )
    if n % 2 == 1:
        k = (n - 1) // 2
        value = raise_operator(Space.EUCLIDEAN, _halfplane_jet(y), k, r)
        return QuadResult(value, 0.0, 0)
    if variant == "outside":
        evals: list = []
        k = (n - 2) // 2
        value = raise_operator(Space.EUCLIDEAN, _space_descent_jet(y, tol, evals), k, r)
        return QuadResult(value, tol * abs(value), sum(evals))
    if variant == "inside":
        kernel = _guarded_raised(_halfplane_jet(y), n // 2)

        def f_regular(s: float) -> float:
            return kernel(s) * 2.0 * s / math.sqrt(s + r)

        def f_tail(s: float) -> float:
            return kernel(s) * 2.0 * s / math.sqrt(s * s - r * r)

        split = r + 4.0 * max(y, r, 1.0)
        res1 = integrate_sqrt_endpoint(f_regular, r, split, tol, abs_tol=0.0)
        res2 = integrate_to_infinity(f_tail, split, tol, abs_tol=0.0, scale=split)
        return QuadResult(
            res1.value + res2.value,
            res1.err_estimate + res2.err_estimate,
            res1.n_evals + res2.n_evals,
        )
    raise DomainError(f"unknown raising variant {variant!r}")


def poisson_descent(n: int, y: float, r: float, tol: float = DEFAULT_TOL) -> QuadResult:
    """Poisson kernel as the descent integral of the closed (n+1)-kernel."""
    _check_dim(n)
    _check_positive("height", y)
    _check_radius(r)

    def f_regular(s: float) -> float:
        return poisson_closed(n + 1, y, s) * 2.0 * s / math.sqrt(s + r)

    def f_tail(s: float) -> float:
        return poisson_closed(n + 1, y, s) * 2.0 * s / math.sqrt(s * s - r * r)

    split = r + 4.0 * max(y, r, 1.0)
    res1 = integrate_sqrt_endpoint(f_regular, r, split, tol, abs_tol=0.0)
    res2 = integrate_to_infinity(f_tail, split, tol, abs_tol=0.0, scale=split)
    return QuadResult(
        res1.value + res2.value,
        res1.err_estimate + res2.err_estimate,
        res1.n_evals + res2.n_evals,
    )
