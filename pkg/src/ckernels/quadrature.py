"""Adaptive quadrature with honest error estimates.

The core rule is an embedded Gauss-Legendre pair (15 and 7 points) applied on
a worst-panel-first bisection heap.  The reported error is the accumulated
pair difference plus a roundoff floor proportional to the integral of |f|, so
results near the double-precision cancellation limit carry error estimates
that reflect it instead of the nominal tolerance.

Integrands may return scalars or numpy arrays of a fixed shape; array mode is
what lets Taylor-jet-valued integrands (derivatives under the integral sign)
be integrated in a single adaptive pass, with the error measured in the
max norm across components.

Three transforms cover the singular and unbounded shapes that arise in the
kernel formulas: an inverse-square-root endpoint factor (substitute
x = a + u^2), a half-line tail (substitute x = a + s u/(1-u)), and vertical
complex contours with Gaussian envelopes, where truncation at xi_max is
chosen from the envelope and the discarded tail is added to the error
estimate.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Union

import numpy as np

from .errors import ContourError, ConvergenceError, DomainError

DEFAULT_TOL = 1e-10
_EPS = float(np.finfo(float).eps)

_NODES7, _WEIGHTS7 = np.polynomial.legendre.leggauss(7)
_NODES15, _WEIGHTS15 = np.polynomial.legendre.leggauss(15)

Value = Union[float, np.ndarray]


@dataclass(frozen=True, eq=False)
class QuadResult:
    """Integral estimate with an error bound and the evaluation count."""

    value: Value
    err_estimate: float
    n_evals: int

    def scaled(self, factor: float) -> "QuadResult":
        """The result of multiplying the integrand by a constant."""
        return QuadResult(self.value * factor, self.err_estimate * abs(factor), self.n_evals)


@dataclass(frozen=True)
class ContourSpec:
    """Geometry of a truncated vertical contour sigma - i xi, xi in [0, xi_max].

    ``envelope_scale`` is the constant G in the integrand's Gaussian envelope
    exp((sigma^2 - xi^2)/G); it drives both the default truncation point and
    the tail bound added to the error estimate.
    """

    sigma: float
    xi_max: float
    tol: float
    envelope_scale: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise DomainError(f"contour abscissa must be positive, got {self.sigma}")
        if not (math.isfinite(self.xi_max) and self.xi_max > 0.0):
            raise DomainError(f"contour truncation must be positive, got {self.xi_max}")
        if not 0.0 < self.tol < 1.0:
            raise DomainError(f"contour tolerance must lie in (0, 1), got {self.tol}")
        if not (math.isfinite(self.envelope_scale) and self.envelope_scale > 0.0):
            raise DomainError("envelope scale must be positive")


def contour_spec(sigma: float, envelope_scale: float, tol: float) -> ContourSpec:
    """Build a contour whose truncated tail is below ``tol`` relatively.

    The envelope exp((sigma^2 - xi^2)/G) falls to tol of its xi = 0 value at
    xi = sqrt(sigma^2 + G log(1/tol)); the extra margin absorbs algebraic
    prefactors.
    """
    if not 0.0 < tol < 1.0:
        raise DomainError(f"tolerance must lie in (0, 1), got {tol}")
    G = float(envelope_scale)
    xi_max = math.sqrt(max(0.0, sigma * sigma) + G * math.log(1.0 / tol))
    xi_max += 1.0 + 0.5 * math.sqrt(G)
    return ContourSpec(sigma=sigma, xi_max=xi_max, tol=tol, envelope_scale=G)


def _norm(v: Value) -> float:
    if isinstance(v, np.ndarray):
        return float(np.max(np.abs(v)))
    return abs(v)


def _panel(f, a: float, b: float):
    """Gauss 15/7 estimates on one panel: (value, err, resabs, where_bad)."""
    h = 0.5 * (b - a)
    c = 0.5 * (a + b)
    xs15 = c + h * _NODES15
    xs7 = c + h * _NODES7
    vals15 = [f(x) for x in xs15]
    vals7 = [f(x) for x in xs7]
    if isinstance(vals15[0], np.ndarray):
        v15 = np.stack([np.asarray(v, float) for v in vals15])
        v7 = np.stack([np.asarray(v, float) for v in vals7])
        if not (np.all(np.isfinite(v15)) and np.all(np.isfinite(v7))):
            bad = xs15[~np.all(np.isfinite(v15), axis=tuple(range(1, v15.ndim)))]
            where = float(bad[0]) if bad.size else float(xs7[0])
            return None, None, None, where
        i15 = h * np.tensordot(_WEIGHTS15, v15, axes=1)
        i7 = h * np.tensordot(_WEIGHTS7, v7, axes=1)
        resabs = h * float(np.max(np.tensordot(_WEIGHTS15, np.abs(v15), axes=1)))
        err = float(np.max(np.abs(i15 - i7)))
    else:
        v15 = np.array(vals15, float)
        v7 = np.array(vals7, float)
        finite15 = np.isfinite(v15)
        if not (np.all(finite15) and np.all(np.isfinite(v7))):
            bad = xs15[~finite15]
            where = float(bad[0]) if bad.size else float(xs7[0])
            return None, None, None, where
        i15 = h * float(_WEIGHTS15 @ v15)
        i7 = h * float(_WEIGHTS7 @ v7)
        resabs = h * float(_WEIGHTS15 @ np.abs(v15))
        err = abs(i15 - i7)
    return i15, err, resabs, None


def integrate_adaptive(
    f: Callable[[float], Value],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    *,
    abs_tol: float | None = None,
    breakpoints: Iterable[float] = (),
    max_depth: int = 60,
    max_panels: int = 4096,
) -> QuadResult:
    """Integrate f over [a, b] to max(abs_tol, tol * |integral|).

    ``abs_tol`` defaults to ``tol``; pass 0.0 for a purely relative target.
    Interior ``breakpoints`` seed the initial partition (place them at kinks,
    spikes and branch switches).  Raises :class:`ConvergenceError`, carrying
    the best estimate, if the panel or depth budget runs out, and reports a
    roundoff-floor error term proportional to the integral of |f| so that
    cancellation-limited results are not overclaimed.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("integration endpoints must be finite")
    if b < a:
        raise DomainError(f"integration range is reversed: [{a}, {b}]")
    if abs_tol is None:
        abs_tol = tol
    if b == a:
        return QuadResult(0.0, 0.0, 0)

    pts = [a]
    for p in sorted(set(float(p) for p in breakpoints)):
        if a < p < b:
            pts.append(p)
    pts.append(b)

    heap = []  # entries: (-err, seq, a, b, value, err, resabs, depth)
    seq = 0
    total_value = None
    total_err = 0.0
    total_resabs = 0.0
    n_evals = 0

    def _push(lo: float, hi: float, depth: int):
        nonlocal seq, total_value, total_err, total_resabs, n_evals
        value, err, resabs, bad_at = _panel(f, lo, hi)
        n_evals += 22
        if bad_at is not None:
            best = None
            if total_value is not None:
                best = QuadResult(total_value, math.inf, n_evals)
            raise ConvergenceError(
                f"integrand returned a non-finite value near x = {bad_at}", best
            )
        total_value = value if total_value is None else total_value + value
        total_err += err
        total_resabs += resabs
        heapq.heappush(heap, (-err, seq, lo, hi, value, err, resabs, depth))
        seq += 1

    for lo, hi in zip(pts, pts[1:]):
        _push(lo, hi, 0)

    while True:
        target = max(abs_tol, tol * _norm(total_value))
        floor = 100.0 * _EPS * total_resabs
        if total_err <= max(target, floor):
            break
        if len(heap) >= max_panels:
            best = QuadResult(total_value, total_err + 30.0 * _EPS * total_resabs, n_evals)
            raise ConvergenceError(
                f"panel budget {max_panels} exhausted (error {total_err:.3e}, "
                f"target {target:.3e})",
                best,
            )
        neg_err, _, lo, hi, value, err, resabs, depth = heapq.heappop(heap)
        if depth >= max_depth:
            best = QuadResult(total_value, total_err + 30.0 * _EPS * total_resabs, n_evals)
            raise ConvergenceError(
                f"bisection depth {max_depth} exhausted near [{lo}, {hi}]", best
            )
        total_value = total_value - value
        total_err -= err
        total_resabs -= resabs
        mid = 0.5 * (lo + hi)
        _push(lo, mid, depth + 1)
        _push(mid, hi, depth + 1)

    value = total_value
    if isinstance(value, np.ndarray) and value.ndim == 0:
        value = float(value)
    return QuadResult(value, total_err + 30.0 * _EPS * total_resabs, n_evals)


def integrate_sqrt_endpoint(
    f_regular: Callable[[float], Value],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    *,
    abs_tol: float | None = None,
    breakpoints: Iterable[float] = (),
    max_depth: int = 60,
    max_panels: int = 4096,
) -> QuadResult:
    """Integrate f_regular(x) (x - a)^(-1/2) over [a, b].

    The substitution x = a + u^2 removes the endpoint singularity exactly;
    ``f_regular`` itself must be smooth on [a, b].  ``breakpoints`` are given
    in x coordinates.
    """
    if b <= a:
        raise DomainError(f"need b > a for a square-root endpoint, got [{a}, {b}]")

    def g(u: float) -> Value:
        return f_regular(a + u * u)

    bps = [math.sqrt(p - a) for p in breakpoints if a < p < b]
    res = integrate_adaptive(
        g,
        0.0,
        math.sqrt(b - a),
        tol,
        abs_tol=None if abs_tol is None else 0.5 * abs_tol,
        breakpoints=bps,
        max_depth=max_depth,
        max_panels=max_panels,
    )
    return res.scaled(2.0)


def integrate_to_infinity(
    f: Callable[[float], Value],
    a: float,
    tol: float = DEFAULT_TOL,
    *,
    abs_tol: float | None = None,
    scale: float = 1.0,
    max_depth: int = 60,
    max_panels: int = 4096,
) -> QuadResult:
    """Integrate a decaying f over [a, infinity).

    The map x = a + scale * u/(1-u) compactifies the half line; ``scale``
    should be of the order of the integrand's decay length so the transformed
    integrand is well resolved.  f must decay faster than x^(-2) for the
    transformed integrand to stay bounded.
    """
    if not (math.isfinite(scale) and scale > 0.0):
        raise DomainError(f"scale must be positive, got {scale}")

    def g(u: float) -> Value:
        onemu = 1.0 - u
        x = a + scale * u / onemu
        return f(x) * (scale / (onemu * onemu))

    return integrate_adaptive(
        g, 0.0, 1.0, tol, abs_tol=abs_tol, max_depth=max_depth, max_panels=max_panels
    )


def integrate_contour(
    f: Callable[[complex], complex],
    spec: ContourSpec,
    breakpoints: Iterable[float] | None = None,
    *,
    max_depth: int = 60,
    max_panels: int = 4096,
) -> QuadResult:
    """Integrate Re f(sigma - i xi) for xi in [0, xi_max].

    The discarded tail beyond xi_max is bounded by the Gaussian envelope and
    added to the error estimate.  Any convergence failure (including a
    non-finite integrand on the line) is reported as :class:`ContourError`;
    the usual cure is a different abscissa sigma.
    """
    sigma = spec.sigma

    def g(xi: float) -> float:
        # cmath signals overflow by raising instead of returning inf; report
        # such samples as non-finite so the usual diagnostics apply.
        try:
            return f(complex(sigma, -xi)).real
        except OverflowError:
            return math.inf

    try:
        res = integrate_adaptive(
            g,
            0.0,
            spec.xi_max,
            spec.tol,
            abs_tol=0.0,
            breakpoints=breakpoints or (),
            max_depth=max_depth,
            max_panels=max_panels,
        )
    except ConvergenceError as exc:
        raise ContourError(
            f"contour integration at sigma = {sigma} failed: {exc}; "
            "a different abscissa may avoid the problem",
            exc.result,
        ) from exc

    # Tail of a Gaussian envelope: integral_X^inf exp(-x^2/G) dx is below
    # (G / 2X) exp(-X^2/G), and |f(sigma - i X)| already carries the envelope.
    end_mag = abs(f(complex(sigma, -spec.xi_max)))
    tail = end_mag * spec.envelope_scale / (2.0 * spec.xi_max)
    return QuadResult(res.value, res.err_estimate + 2.0 * tail, res.n_evals + 1)
