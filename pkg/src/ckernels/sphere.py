"""Heat and Poisson kernels on the unit sphere.

Heat kernels come in four representations:

* theta series: the wrapped Gaussian on the circle (n = 1), the
  inverse-square-root wrapped integral on the 2-sphere (n = 2), and the
  explicit image sum with the 1/sin(phi) Jacobian on the 3-sphere.
* raising: (n-1)/2 or (n-2)/2 applications of D = -(2 pi sin phi)^(-1) d/dphi
  to the circle or 2-sphere series, with the angular derivatives carried by
  truncated jets (including jets of the wrapped integral itself).
* contour: a vertical-line integral against exp(y^2/4t) sinh y
  (cosh y - cos phi)^(-(n+1)/2); for even n the half-integer power needs the
  analytic branch, tracked by an explicit sign on successive cut crossings.
* doubling (Poisson): the kernel at angle phi written as an average of the
  (2n+1)-sphere kernel at half the height.

All heat kernels here follow the geometric normalization whose generator is
the plain Laplacian; their mass therefore decays like exp(-(n-1)^2 t / 4).
The Poisson kernel below is the closed form

    P_n(y, phi) = Gamma((n+1)/2)/pi^((n+1)/2)
                  * sinh y / (2 cosh y - 2 cos phi)^((n+1)/2),

the semigroup kernel of exp(-y sqrt(-(Laplacian - (n-1)^2/4))), with
multiplicative total mass exp(-y (n-1)/2).
"""

from __future__ import annotations

import cmath
import math

import numpy as np

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

# Raising and image-sum paths degrade within this angle of the poles; they
# switch to an even quadratic extrapolation from just outside the band
# (documented accuracy loss around 1e-6 relative).
GUARD_ANGLE = 1e-2


def _check_dim(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"dimension must be a positive integer, got {n}")


def _check_positive(name: str, x: float) -> None:
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"{name} must be positive and finite, got {x}")


def _check_angle(phi: float, *, strict_upper: bool = False) -> None:
    if not (math.isfinite(phi) and 0.0 <= phi <= math.pi):
        raise DomainError(f"angle must lie in [0, pi], got {phi}")
    if strict_upper and phi == math.pi:
        raise SingularPointError("representation degenerates at the antipode")


def _even_extrapolate(f, x: float, x1: float, x2: float) -> QuadResult:
    """Evaluate an even function near its symmetry point by quadratic fit.

    ``f`` maps a coordinate to a QuadResult; the fit is linear in x^2 through
    x1 and x2, exact for even quadratics, with the spread between the two
    samples folded into the error estimate.
    """
    r1 = f(x1)
    r2 = f(x2)
    slope = (r2.value - r1.value) / (x2 * x2 - x1 * x1)
    value = r1.value + (x * x - x1 * x1) * slope
    err = r1.err_estimate + r2.err_estimate + 0.05 * abs(r2.value - r1.value)
    return QuadResult(value, err, r1.n_evals + r2.n_evals)


# ---------------------------------------------------------------------------
# theta series


def _image_range(t: float, phi: float, tol: float) -> range:
    """Indices m for which the image at phi + 2 pi m still matters."""
    reach = math.sqrt(phi * phi + 4.0 * t * (math.log(1.0 / tol) + 3.0)) + 2.0 * math.pi
    m_max = int(reach / (2.0 * math.pi)) + 1
    return range(-m_max, m_max + 1)


def heat_theta1(t: float, phi: float, tol: float = DEFAULT_TOL) -> QuadResult:
    """Circle heat kernel: the wrapped Gaussian sum over images."""
    _check_positive("time", t)
    _check_angle(phi)
    ms = _image_range(t, phi, tol)
    args = phi + 2.0 * math.pi * np.arange(ms.start, ms.stop)
    terms = np.exp(-(args * args) / (4.0 * t))
    value = float(terms.sum()) * (4.0 * math.pi * t) ** -0.5
    # truncation bound: the first omitted pair of images
    edge = abs(args[0]) + 2.0 * math.pi
    tail = 2.0 * math.exp(-edge * edge / (4.0 * t)) * (4.0 * math.pi * t) ** -0.5
    return QuadResult(value, tail + 4.0 * np.finfo(float).eps * value, 0)


def _theta1_jet(t: float, tol: float) -> RadialGenerator:
    amp = (4.0 * math.pi * t) ** -0.5

    def gen(center: float, order: int) -> Jet:
        x = variable(center, order)
        total = None
        for m in _image_range(t, center, tol):
            shifted = x + 2.0 * math.pi * m
            term = (shifted * shifted * (-0.25 / t)).exp()
            total = term if total is None else total + term
        return total * amp

    return gen


def heat_theta3(t: float, phi: float, tol: float = DEFAULT_TOL) -> QuadResult:
    """3-sphere heat kernel: image sum with the phi/sin(phi) Jacobian."""
    _check_positive("time", t)
    _check_angle(phi)
    if phi < 1e-6 or math.pi - phi < 1e-6:
        raise SingularPointError(
            "image sum needs 1/sin(phi); evaluate away from the poles"
        )
    ms = _image_range(t, phi, tol)
    args = phi + 2.0 * math.pi * np.arange(ms.start, ms.stop)
    terms = args * np.exp(-(args * args) / (4.0 * t))
    value = float(terms.sum()) / math.sin(phi) * (4.0 * math.pi * t) ** -1.5
    edge = abs(args[0]) + 2.0 * math.pi
    tail = (
        2.0
        * edge
        * math.exp(-edge * edge / (4.0 * t))
        / abs(math.sin(phi))
        * (4.0 * math.pi * t) ** -1.5
    )
    floor = 8.0 * np.finfo(float).eps * float(np.abs(terms).max() / abs(math.sin(phi))) * (
        4.0 * math.pi * t
    ) ** -1.5
    return QuadResult(value, tail + floor, 0)


def _half_sine_sq(x: float) -> float:
    s = math.sin(0.5 * x)
    return s * s


def heat_theta2(t: float, phi: float, tol: float = DEFAULT_TOL) -> QuadResult:
    """2-sphere heat kernel: wrapped inverse-square-root integral.

    Each image m contributes
    integral_phi^pi exp(-(psi+2 pi m)^2/4t) (psi+2 pi m)
    (sin^2(psi/2) - sin^2(phi/2))^(-1/2) dpsi with alternating sign; the
    endpoint singularity at psi = phi is removed by the x = phi + u^2
    substitution, using sin^2(psi/2) - sin^2(phi/2)
    = sin((psi+phi)/2) sin((psi-phi)/2) for cancellation-free evaluation.
    """
    _check_positive("time", t)
    _check_angle(phi, strict_upper=True)
    amp = (4.0 * math.pi * t) ** -1.5
    inv4t = 0.25 / t

    def piece(m: int, abs_tol: float) -> QuadResult:
        off = 2.0 * math.pi * m

        def f_regular(psi: float) -> float:
            d = psi - phi
            ratio = 2.0 if d == 0.0 else d / math.sin(0.5 * d)
            arg = psi + off
            return (
                arg
                * math.exp(-arg * arg * inv4t)
                * math.sqrt(ratio / math.sin(0.5 * (psi + phi)))
            )

        return integrate_sqrt_endpoint(
            f_regular, phi, math.pi, tol * 0.3, abs_tol=abs_tol
        )

    head = piece(0, 0.0)
    value = head.value
    err = head.err_estimate
    evals = head.n_evals
    scale_tol = tol * 0.3 * abs(head.value)
    for m in _image_range(t, phi, tol):
        if m == 0:
            continue
        # skip images whose Gaussian factor is negligible on [phi, pi]
        low = min(abs(phi + 2.0 * math.pi * m), abs(math.pi + 2.0 * math.pi * m))
        if phi + 2.0 * math.pi * m < 0.0 < math.pi + 2.0 * math.pi * m:
            low = 0.0
        if math.exp(-low * low * inv4t) * (abs(low) + math.pi) < scale_tol:
            continue
        sign = -1.0 if m % 2 else 1.0
        res = piece(m, scale_tol)
        value += sign * res.value
        err += res.err_estimate
        evals += res.n_evals
    return QuadResult(value * amp, err * amp, evals)


def _theta2_jet(t: float, tol: float, evals: list) -> RadialGenerator:
    """Jets of the wrapped inverse-square-root integral.

    Differentiation under the integral sign is only legitimate once every
    moving endpoint is removed, so each image integral is split at a fixed
    interior level z* of z = sin^2(psi/2) - sin^2(phi/2).  Below z* the
    z-substituted integrand has constant limits [0, z*] and is expanded in
    jets through psi(z) = 2 arcsin(sqrt(sin^2(phi/2) + z)).  Above z* the
    psi-range [psi_up(phi), pi] still moves with phi, so it is mapped to the
    fixed interval s in [0, 1] with the endpoint psi_up carried as a jet.
    """
    amp = (4.0 * math.pi * t) ** -1.5
    inv4t = 0.25 / t

    def gen(center: float, order: int) -> Jet:
        if not 0.0 < center < math.pi:
            raise SingularPointError("wrapped-integral jets need an interior angle")
        x = variable(center, order)
        sin_half = (x * 0.5).sin()
        q_base = sin_half * sin_half
        z_star = 0.5 * (1.0 - _half_sine_sq(center))  # half of cos^2(phi/2)
        psi_up = (q_base + z_star).sqrt().arcsin() * 2.0
        span = math.pi - psi_up
        count = 0
        total = None

        def add(piece_val):
            nonlocal total
            total = piece_val if total is None else total + piece_val

        for m in _image_range(t, center, tol):
            off = 2.0 * math.pi * m
            sign = -1.0 if m % 2 else 1.0

            def g_of(psi_jet):
                arg = psi_jet + off
                return arg * (arg * arg * (-inv4t)).exp()

            def low_body(z: float):
                q = q_base + z
                psi_jet = q.sqrt().arcsin() * 2.0
                dens = (q * (1.0 - q)).sqrt()
                return (g_of(psi_jet) / dens).coeffs

            def high_body(s: float):
                psi_jet = psi_up + span * s
                half = (psi_jet * 0.5).sin()
                base = half * half - q_base
                return (g_of(psi_jet) * base.power(-0.5) * span).coeffs

            res_low = integrate_sqrt_endpoint(low_body, 0.0, z_star, tol * 0.2, abs_tol=0.0)
            res_high = integrate_adaptive(high_body, 0.0, 1.0, tol * 0.2, abs_tol=0.0)
            count += res_low.n_evals + res_high.n_evals
            add(sign * (Jet(center, res_low.value) + Jet(center, res_high.value)))
        evals.append(count)
        return total * amp

    return gen


def heat_theta(n: int, t: float, phi: float, tol: float = DEFAULT_TOL) -> QuadResult:
    """Theta-series heat kernel; available for n in {1, 2, 3}."""
    if n == 1:
        return heat_theta1(t, phi, tol)
    if n == 2:
        return heat_theta2(t, phi, tol)
    if n == 3:
        return heat_theta3(t, phi, tol)
    raise DomainError(f"theta series is implemented for n in {{1,2,3}}, got {n}")


# ---------------------------------------------------------------------------
# raising


def heat_raise(n: int, t: float, phi: float, tol: float = DEFAULT_TOL) -> QuadResult:
    """Sphere heat kernel through the dimension-raising recursion.

    Near the poles the division by sin(phi) is replaced by an even quadratic
    extrapolation from just outside GUARD_ANGLE (phi = 0 itself is exact by
    parity for the circle-based branch).
    """
    _check_dim(n)
    _check_positive("time", t)
    _check_angle(phi)
    if n == 1:
        return heat_theta1(t, phi, tol)
    if n == 2:
        return heat_theta2(t, phi, tol)

    def at(angle: float) -> QuadResult:
        if n % 2 == 1:
            k = (n - 1) // 2
            value = raise_operator(Space.SPHERE, _theta1_jet(t, tol), k, angle)
            return QuadResult(value, tol * abs(value), 0)
        evals: list = []
        k = (n - 2) // 2
        value = raise_operator(Space.SPHERE, _theta2_jet(t, tol, evals), k, angle)
        return QuadResult(value, 2.0 * tol * abs(value), sum(evals))

    if phi == 0.0 and n % 2 == 1:
        return at(phi)
    if phi < GUARD_ANGLE:
        return _even_extrapolate(at, phi, 2.0 * GUARD_ANGLE, 4.0 * GUARD_ANGLE)
    if math.pi - phi < GUARD_ANGLE:
        return _even_extrapolate(
            lambda u: at(math.pi - u),
            math.pi - phi,
            2.0 * GUARD_ANGLE,
            4.0 * GUARD_ANGLE,
        )
    return at(phi)


# ---------------------------------------------------------------------------
# contour


def sigma_default(t: float, phi: float) -> float:
    """Default contour abscissa, capped against the cancellation floor."""
    cap_sq = 4.0 * t * math.log(1e9) - phi * phi
    cap = math.sqrt(cap_sq) if cap_sq > 0.04 else 0.2
    return min(0.5 * max(1.0, phi), cap, 3.0)


def heat_gruet(
    n: int,
    t: float,
    phi: float,
    *,
    sigma: float | None = None,
    tol: float = DEFAULT_TOL,
) -> QuadResult:
    """Sphere heat kernel as a branch-tracked vertical-contour integral.

    The integrand sinh(y) (cosh y - cos phi)^(-(n+1)/2) exp(y^2/4t) with
    y = sigma - i xi crosses the cut of the principal half-integer power at
    xi = pi, 3 pi, ...; for even n the analytic branch flips sign there.
    Spikes sit where cosh y approaches cos phi (xi near 2 pi k +/- phi); both
    families are seeded as breakpoints.
    """
    _check_dim(n)
    _check_positive("time", t)
    if not (math.isfinite(phi) and 0.0 < phi <= math.pi):
        raise DomainError(f"contour representation needs phi in (0, pi], got {phi}")
    if sigma is None:
        sigma = sigma_default(t, phi)
    _check_positive("sigma", sigma)
    pref = (
        math.gamma(0.5 * (n + 1))
        / (2.0 ** (0.5 * (n - 1)) * math.pi ** (0.5 * n + 1.0))
        / math.sqrt(4.0 * t)
    )
    half = 0.5 * (n + 1)
    inv4t = 0.25 / t
    even = n % 2 == 0
    cos_phi = math.cos(phi)

    def f(y: complex) -> complex:
        base = cmath.cosh(y) - cos_phi
        val = cmath.exp(y * y * inv4t) * cmath.sinh(y) * base ** (-half)
        if even:
            xi = -y.imag
            val *= -1.0 if int((xi / math.pi + 1.0) // 2.0) % 2 else 1.0
        return val

    spec = contour_spec(sigma, 4.0 * t, tol)
    bps = set()
    k = 1
    while k * math.pi < spec.xi_max:
        bps.add(k * math.pi)
        k += 1
    base = 0.0
    while base - phi < spec.xi_max:
        for cand in (base + phi, base - phi):
            if 0.0 < cand < spec.xi_max:
                bps.add(cand)
        base += 2.0 * math.pi
    res = integrate_contour(f, spec, sorted(bps))
    return res.scaled(pref)


# ---------------------------------------------------------------------------
# poisson


def poisson_closed(n: int, y: float, phi: float) -> float:
    _check_dim(n)
    _check_positive("height", y)
    _check_angle(phi)
    half = 0.5 * (n + 1)
    base = 2.0 * math.cosh(y) - 2.0 * math.cos(phi)
    return math.gamma(half) / math.pi**half * math.sinh(y) / base**half


def _poisson_jet(base_dim: int, y: float) -> RadialGenerator:
    """Jets of the closed Poisson kernel in dimension 1 or 2."""
    half = 0.5 * (base_dim + 1)
    amp = math.gamma(half) / math.pi**half * math.sinh(y)

    def gen(center: float, order: int) -> Jet:
        x = variable(center, order)
        return (2.0 * math.cosh(y) - 2.0 * x.cos()).power(-half) * amp

    return gen


def poisson_raise(n: int, y: float, phi: float) -> QuadResult:
    """Sphere Poisson kernel raised from the circle or 2-sphere closed form."""
    _check_dim(n)
    _check_positive("height", y)
    _check_angle(phi)
    base_dim = 1 if n % 2 == 1 else 2
    k = (n - base_dim) // 2

    def at(angle: float) -> QuadResult:
        value = raise_operator(Space.SPHERE, _poisson_jet(base_dim, y), k, angle)
        return QuadResult(value, 0.0, 0)

    if phi == 0.0:
        return at(phi)
    if phi < GUARD_ANGLE and k > 0:
        return _even_extrapolate(at, phi, 2.0 * GUARD_ANGLE, 4.0 * GUARD_ANGLE)
    if math.pi - phi < GUARD_ANGLE and k > 0:
        return _even_extrapolate(
            lambda u: at(math.pi - u),
            math.pi - phi,
            2.0 * GUARD_ANGLE,
            4.0 * GUARD_ANGLE,
        )
    return at(phi)


def poisson_doubling(
    n: int,
    y: float,
    phi: float,
    tol: float = DEFAULT_TOL,
    *,
    variant: str = "angle",
) -> QuadResult:
    """Poisson kernel at angle phi from the (2n+1)-sphere kernel at height y/2.

    Variant "angle" integrates over the substituted angle theta with
    cos psi = sin(theta) cos(phi/2) (a smooth integrand); variant "half"
    keeps the printed half-angle form over psi in [phi, 2 pi - phi] with its
    inverse-square-root endpoints.
    """
    _check_dim(n)
    _check_positive("height", y)
    _check_angle(phi)
    half_y = 0.5 * y
    c_n = math.pi ** (0.5 * (n + 1)) / (2.0 ** (n - 1) * math.gamma(0.5 * (n + 1)))
    cosh_half = math.cosh(half_y)
    cos_half_phi = math.cos(0.5 * phi)
    m = 2 * n + 1
    half_m = 0.5 * (m + 1)
    amp_m = math.gamma(half_m) / math.pi**half_m * math.sinh(half_y)

    def kernel_at_cos(c: float) -> float:
        # closed (2n+1)-kernel as a function of cos(psi)
        return amp_m / (2.0 * math.cosh(half_y) - 2.0 * c) ** half_m

    if variant == "angle":

        def f(theta: float) -> float:
            return (
                cosh_half
                * kernel_at_cos(math.sin(theta) * cos_half_phi)
                * math.cos(theta) ** n
            )

        res = integrate_adaptive(f, -0.5 * math.pi, 0.5 * math.pi, tol, abs_tol=0.0)
        return res.scaled(c_n)

    if variant == "half":
        if phi == 0.0:
            raise SingularPointError("half-angle doubling degenerates at phi = 0")

        def g(psi: float) -> float:
            ratio = math.cos(0.5 * psi) / cos_half_phi
            body = max(0.0, 1.0 - ratio * ratio)
            return (
                (cosh_half / cos_half_phi)
                * body ** (0.5 * (n - 1))
                * kernel_at_cos(math.cos(0.5 * psi))
                * math.sin(0.5 * psi)
            )

        res = integrate_adaptive(
            g, phi, 2.0 * math.pi - phi, tol, abs_tol=0.0, breakpoints=[math.pi]
        )
        return res.scaled(0.5 * c_n)

    raise DomainError(f"unknown doubling variant {variant!r}")
