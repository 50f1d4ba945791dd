"""Heat and Poisson kernels on hyperbolic space.

Heat representations:

* raising (odd n): (n-1)/2 applications of D = -(2 pi sinh rho)^(-1) d/drho
  to the flat 1-d Gaussian; in particular
  H_3(t, rho) = (4 pi t)^(-3/2) (rho/sinh rho) exp(-rho^2/4t).
* descent (even n): the inverse-square-root integral
  integral_rho^inf (cosh^2(s/2) - cosh^2(rho/2))^(-1/2) H_(n+1)(t,s)
  sinh s ds, with the raising operator acting either outside the integral
  ("outside", jets of the integral through z = cosh s - cosh rho) or under
  the integral sign on the odd closed forms ("inside").
* classic: the real oscillatory integral along the line through pi,
  K_n (2t)^(-1/2) integral_0^inf exp((pi^2 - xi^2)/4t) sinh xi
  sin(pi xi / 2t) (cosh rho + cosh xi)^(-(n+1)/2) dxi.
* contour: the general vertical line sigma - i xi against
  exp(y^2/4t) sin y (cosh rho - cos y)^(-(n+1)/2), sigma in (0, pi].

These all produce the convention="paper" kernel, whose generator carries the
spectral shift +(n-1)^2/4 (total mass exp((n-1)^2 t/4));
convention="markovian" multiplies by exp(-(n-1)^2 t/4) to restore unit mass.

The Poisson kernel is the strip-type closed form

    P_n(y, rho) = Gamma((n+1)/2)/(2 pi)^((n+1)/2)
                  * sin y / (cosh rho - cos y)^((n+1)/2),  0 < y < pi,

harmonic in (y, rho) for the shifted operator; it is 2 pi periodic in y
(equivalently, the image sum of the subordinated heat kernel), its n = 1 mass
is (pi - y)/pi, and its mass integral diverges for n >= 3.
"""

from __future__ import annotations

import cmath
import math

from .errors import DomainError, SingularPointError
from .geometry import Space
from .jets import Jet, RadialGenerator, raise_operator, variable
from .quadrature import (
    DEFAULT_TOL,
    QuadResult,
    contour_spec,
    integrate_adaptive,
    integrate_contour,
    integrate_sqrt_endpoint,
)

GUARD_RHO = 1e-2

CONVENTIONS = ("paper", "markovian")


def _check_dim(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"dimension must be a positive integer, got {n}")


def _check_positive(name: str, x: float) -> None:
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"{name} must be positive and finite, got {x}")


def _check_rho(rho: float) -> None:
    if not (math.isfinite(rho) and rho >= 0.0):
        raise DomainError(f"distance must be nonnegative and finite, got {rho}")


def convention_factor(convention: str, n: int, t: float) -> float:
    """Multiplier taking the "paper"-convention heat kernel to the requested one."""
    if convention == "paper":
        return 1.0
    if convention == "markovian":
        return math.exp(-0.25 * (n - 1) ** 2 * t)
    raise DomainError(f"convention must be one of {CONVENTIONS}, got {convention!r}")


def _even_extrapolate(f, x: float, x1: float, x2: float) -> QuadResult:
    r1 = f(x1)
    r2 = f(x2)
    slope = (r2.value - r1.value) / (x2 * x2 - x1 * x1)
    value = r1.value + (x * x - x1 * x1) * slope
    err = r1.err_estimate + r2.err_estimate + 0.05 * abs(r2.value - r1.value)
    return QuadResult(value, err, r1.n_evals + r2.n_evals)


def _gauss_jet(t: float) -> RadialGenerator:
    amp = (4.0 * math.pi * t) ** -0.5

    def gen(center: float, order: int) -> Jet:
        x = variable(center, order)
        return (x * x * (-0.25 / t)).exp() * amp

    return gen


# ---------------------------------------------------------------------------
# heat kernels


def heat_raise(
    n: int,
    t: float,
    rho: float,
    *,
    convention: str = "paper",
    tol: float = DEFAULT_TOL,
) -> QuadResult:
    """Odd-dimensional heat kernel by raising the flat 1-d Gaussian."""
    _check_dim(n)
    _check_positive("time", t)
    _check_rho(rho)
    if n % 2 == 0:
        raise DomainError("raising reaches odd dimensions only; use heat_descent")
    factor = convention_factor(convention, n, t)
    k = (n - 1) // 2

    def at(r: float) -> QuadResult:
        value = raise_operator(Space.HYPERBOLIC, _gauss_jet(t), k, r) * factor
        return QuadResult(value, 0.0, 0)

    if rho == 0.0 or k == 0 or rho >= GUARD_RHO:
        return at(rho)
    return _even_extrapolate(at, rho, 2.0 * GUARD_RHO, 4.0 * GUARD_RHO)


def _descent_jet(t: float, tol: float, evals: list) -> RadialGenerator:
    """Jets of the 2-d kernel as the descent integral of the 3-d one.

    Since H_3 sinh s ds = (4 pi t)^(-3/2) s exp(-s^2/4t) ds, substituting
    z = cosh s - cosh rho (so cosh^2(s/2) - cosh^2(rho/2) = z/2) gives

        H_2(rho) = sqrt(2) (4 pi t)^(-3/2)
                   integral_0^inf z^(-1/2) (s/sinh s) exp(-s^2/4t) dz,

    with s = arccosh(cosh rho + z); the jets in rho flow through arccosh.
    """
    amp = math.sqrt(2.0) * (4.0 * math.pi * t) ** -1.5

    def gen(center: float, order: int) -> Jet:
        if center <= 0.0:
            raise SingularPointError("descent jets need a positive distance")
        x = variable(center, order)
        ch = x.cosh()
        s_top = math.sqrt(center * center + 4.0 * t * (math.log(1.0 / tol) + 5.0)) + 2.0
        z_top = math.cosh(s_top) - math.cosh(center)

        def body(z: float):
            s_jet = (ch + z).arccosh()
            val = (s_jet / s_jet.sinh()) * (s_jet * s_jet * (-0.25 / t)).exp()
            return val.coeffs

        res = integrate_sqrt_endpoint(body, 0.0, z_top, tol * 0.1, abs_tol=0.0)
        evals.append(res.n_evals)
        return Jet(center, res.value) * amp

    return gen


def heat_descent(
    n: int,
    t: float,
    rho: float,
    *,
    convention: str = "paper",
    tol: float = DEFAULT_TOL,
    variant: str = "outside",
) -> QuadResult:
    """Even-dimensional heat kernel through the descent integral."""
    _check_dim(n)
    _check_positive("time", t)
    _check_rho(rho)
    if n % 2 == 1:
        raise DomainError("descent reaches even dimensions only; use heat_raise")
    factor = convention_factor(convention, n, t)

    if variant == "outside":
        k = (n - 2) // 2

        def at(r: float) -> QuadResult:
            evals: list = []
            value = raise_operator(Space.HYPERBOLIC, _descent_jet(t, tol, evals), k, r)
            return QuadResult(value * factor, 2.0 * tol * abs(value) * factor, sum(evals))

        if rho >= GUARD_RHO:
            return at(rho)
        return _even_extrapolate(at, rho, 2.0 * GUARD_RHO, 4.0 * GUARD_RHO)

    if variant == "inside":
        gauss = _gauss_jet(t)
        k_inner = n // 2

        def f_regular(s: float) -> float:
            h_next = raise_operator(Space.HYPERBOLIC, gauss, k_inner, s)
            d = s - rho
            ratio = 2.0 if d == 0.0 else d / math.sinh(0.5 * d)
            return (
                h_next
                * math.sinh(s)
                * math.sqrt(ratio / math.sinh(0.5 * (s + rho)))
            )

        s_top = math.sqrt(rho * rho + 4.0 * t * (math.log(1.0 / tol) + 5.0)) + 2.0
        res = integrate_sqrt_endpoint(f_regular, rho, s_top, tol, abs_tol=0.0)
        return res.scaled(factor)

    raise DomainError(f"unknown descent variant {variant!r}")


def heat_classic(
    n: int,
    t: float,
    rho: float,
    *,
    convention: str = "paper",
    tol: float = DEFAULT_TOL,
) -> QuadResult:
    """Heat kernel from the oscillatory real integral along the pi line."""
    _check_dim(n)
    _check_positive("time", t)
    _check_rho(rho)
    factor = convention_factor(convention, n, t)
    pref = (
        math.gamma(0.5 * (n + 1))
        / (2.0 ** (0.5 * n) * math.pi ** (0.5 * n + 1.0))
        / math.sqrt(2.0 * t)
    )
    half = 0.5 * (n + 1)
    inv4t = 0.25 / t
    cosh_rho = math.cosh(rho)
    pi_sq = math.pi * math.pi

    def f(xi: float) -> float:
        osc = math.sin(math.pi * xi / (2.0 * t))
        if xi < 350.0:
            return (
                math.exp((pi_sq - xi * xi) * inv4t)
                * math.sinh(xi)
                * osc
                / (cosh_rho + math.cosh(xi)) ** half
            )
        # log form: cosh overflows past ~710, and large xi arises whenever
        # t is large because the integrand support scales with t
        log_sinh = xi - math.log(2.0) + math.log1p(-math.exp(-2.0 * xi))
        log_den = xi - math.log(2.0) + math.log1p(
            (2.0 * cosh_rho + math.exp(-2.0 * xi)) * math.exp(-xi)
        )
        expo = (pi_sq - xi * xi) * inv4t + log_sinh - half * log_den
        if expo < -745.0:
            return 0.0
        return math.exp(expo) * osc

    xi_max = 2.0 * math.sqrt(t * (math.log(1.0 / tol) + 5.0)) + 2.0 * t + 2.0
    # seed the sign-change lattice of the oscillation
    step = 2.0 * t
    count = min(int(xi_max / step), 400)
    bps = [step * k for k in range(1, count + 1)]
    res = integrate_adaptive(f, 0.0, xi_max, tol, abs_tol=0.0, breakpoints=bps)
    return res.scaled(pref * factor)


def sigma_default(t: float, rho: float) -> float:
    """Default contour abscissa in (0, pi], capped against cancellation."""
    cap_sq = 4.0 * t * math.log(1e9) - rho * rho
    cap = math.sqrt(cap_sq) if cap_sq > 0.04 else 0.2
    return min(0.5 * max(1.0, rho), cap, math.pi)


def heat_gruet(
    n: int,
    t: float,
    rho: float,
    *,
    sigma: float | None = None,
    convention: str = "paper",
    tol: float = DEFAULT_TOL,
) -> QuadResult:
    """Heat kernel as a vertical-contour integral at abscissa sigma.

    The integrand sin(y) (cosh rho - cos y)^(-(n+1)/2) exp(y^2/4t) with
    y = sigma - i xi is analytic for 0 < sigma < 2 pi, so no branch tracking
    is needed; the singular points y = +-(i rho) + 2 pi k show up as a spike
    near xi = rho for small sigma, seeded as a breakpoint.
    """
    _check_dim(n)
    _check_positive("time", t)
    _check_rho(rho)
    if sigma is None:
        sigma = sigma_default(t, rho)
    if not 0.0 < sigma <= math.pi:
        raise DomainError(f"abscissa must lie in (0, pi], got {sigma}")
    factor = convention_factor(convention, n, t)
    pref = (
        math.gamma(0.5 * (n + 1))
        / (2.0 ** (0.5 * (n - 1)) * math.pi ** (0.5 * n + 1.0))
        / math.sqrt(4.0 * t)
    )
    half = 0.5 * (n + 1)
    inv4t = 0.25 / t
    cosh_rho = math.cosh(rho)

    def f(y: complex) -> complex:
        return (
            cmath.exp(y * y * inv4t)
            * cmath.sin(y)
            * (cosh_rho - cmath.cos(y)) ** (-half)
        )

    spec = contour_spec(sigma, 4.0 * t, tol)
    bps = [rho] if 0.0 < rho < spec.xi_max else []
    res = integrate_contour(f, spec, bps)
    return res.scaled(pref * factor)


# ---------------------------------------------------------------------------
# poisson


def _check_height(y: float) -> None:
    if not (math.isfinite(y) and 0.0 < y < math.pi):
        raise DomainError(f"strip height must lie in (0, pi), got {y}")


def poisson_closed(n: int, y: float, rho: float) -> float:
    _check_dim(n)
    _check_height(y)
    _check_rho(rho)
    half = 0.5 * (n + 1)
    amp = math.gamma(half) / (2.0 * math.pi) ** half * math.sin(y)
    if rho < 350.0:
        return amp / (math.cosh(rho) - math.cos(y)) ** half
    # log form past the cosh overflow threshold
    log_base = rho - math.log(2.0) + math.log1p(
        (math.exp(-rho) - 2.0 * math.cos(y)) * math.exp(-rho)
    )
    expo = math.log(amp) - half * log_base
    return math.exp(expo) if expo > -745.0 else 0.0


def _poisson_jet(base_dim: int, y: float) -> RadialGenerator:
    half = 0.5 * (base_dim + 1)
    amp = math.gamma(half) / (2.0 * math.pi) ** half * math.sin(y)

    def gen(center: float, order: int) -> Jet:
        x = variable(center, order)
        return (x.cosh() - math.cos(y)).power(-half) * amp

    return gen


def poisson_raise(n: int, y: float, rho: float) -> QuadResult:
    """Poisson kernel raised from the closed 1-d or 2-d strip kernel."""
    _check_dim(n)
    _check_height(y)
    _check_rho(rho)
    base_dim = 1 if n % 2 == 1 else 2
    k = (n - base_dim) // 2

    def at(r: float) -> QuadResult:
        value = raise_operator(Space.HYPERBOLIC, _poisson_jet(base_dim, y), k, r)
        return QuadResult(value, 0.0, 0)

    if rho == 0.0 or k == 0 or rho >= GUARD_RHO:
        return at(rho)
    return _even_extrapolate(at, rho, 2.0 * GUARD_RHO, 4.0 * GUARD_RHO)


def poisson_descent(n: int, y: float, rho: float, tol: float = DEFAULT_TOL) -> QuadResult:
    """Poisson kernel as the descent integral of the closed (n+1)-kernel."""
    _check_dim(n)
    _check_height(y)
    _check_rho(rho)

    def f_regular(s: float) -> float:
        d = s - rho
        ratio = 2.0 if d == 0.0 else d / math.sinh(0.5 * d)
        return (
            poisson_closed(n + 1, y, s)
            * math.sinh(s)
            * math.sqrt(ratio / math.sinh(0.5 * (s + rho)))
        )

    s_top = rho + 2.0 * (math.log(1.0 / tol) + 5.0) / (n + 1) + 5.0
    return integrate_sqrt_endpoint(f_regular, rho, s_top, tol, abs_tol=0.0)
