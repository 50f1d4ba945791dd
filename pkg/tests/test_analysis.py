"""Cross-representation dispatch, subordination, masses, PDE residuals.

Mass laws used as oracles (exact): Euclidean heat and Poisson masses are 1;
sphere heat mass is exp(-(n-1)^2 t/4) and Poisson mass exp(-y(n-1)/2);
hyperbolic heat mass is exp(+(n-1)^2 t/4) (paper convention, 1 in the
markovian one); the strip Poisson mass is (pi-y)/pi for n = 1, finite for
n = 2 (checked against scipy quadrature of the closed form written out
here), and divergent for n >= 3.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from ckernels import analysis, euclid, hyperbolic, sphere
from ckernels.errors import DomainError, SingularPointError
from ckernels.geometry import Space


# ---------------------------------------------------------------------------
# dispatch


def test_representation_names():
    assert analysis.representation_names(Space.EUCLIDEAN, "heat") == (
        "closed",
        "raise",
        "descent",
        "gruet",
    )
    assert "subordinate" in analysis.representation_names(Space.SPHERE, "poisson")
    assert "doubling" in analysis.representation_names(Space.SPHERE, "poisson")
    assert "gruet-classic" in analysis.representation_names(Space.HYPERBOLIC, "heat")


def test_evaluate_dispatches_to_closed_forms():
    assert analysis.evaluate(Space.EUCLIDEAN, 3, "heat", 0.8, 1.5).value == (
        euclid.heat_closed(3, 0.8, 1.5)
    )
    assert analysis.evaluate(Space.HYPERBOLIC, 2, "poisson", 0.9, 1.4).value == (
        hyperbolic.poisson_closed(2, 0.9, 1.4)
    )
    got = analysis.evaluate(Space.SPHERE, 2, "heat", 0.7, 1.1, rep="theta").value
    assert got == sphere.heat_theta2(0.7, 1.1).value


def test_evaluate_auto_picks_parity_route_for_hyperbolic():
    odd = analysis.evaluate(Space.HYPERBOLIC, 3, "heat", 0.8, 1.5)
    assert odd.value == hyperbolic.heat_raise(3, 0.8, 1.5).value
    even = analysis.evaluate(Space.HYPERBOLIC, 2, "heat", 0.8, 1.5)
    assert even.value == pytest.approx(hyperbolic.heat_descent(2, 0.8, 1.5).value)


def test_evaluate_conventions():
    t, r = 0.8, 1.5
    paper = analysis.evaluate(Space.SPHERE, 2, "heat", t, r).value
    markov = analysis.evaluate(
        Space.SPHERE, 2, "heat", t, r, convention="markovian"
    ).value
    assert markov == pytest.approx(paper * math.exp(t / 4.0), rel=1e-13)
    hyp_paper = analysis.evaluate(Space.HYPERBOLIC, 3, "heat", t, r).value
    hyp_markov = analysis.evaluate(
        Space.HYPERBOLIC, 3, "heat", t, r, convention="markovian"
    ).value
    assert hyp_markov == pytest.approx(hyp_paper * math.exp(-t), rel=1e-13)


def test_evaluate_rejects_unavailable_representations():
    with pytest.raises(DomainError):
        analysis.evaluate(Space.EUCLIDEAN, 2, "heat", 0.5, 1.0, rep="theta")
    with pytest.raises(DomainError):
        analysis.evaluate(Space.SPHERE, 2, "poisson", 0.5, 1.0, rep="integral")
    with pytest.raises(DomainError):
        analysis.evaluate(Space.EUCLIDEAN, 2, "chart", 0.5, 1.0)


def test_spectral_shift_table():
    assert analysis.spectral_shift(Space.EUCLIDEAN, 4) == 0.0
    assert analysis.spectral_shift(Space.SPHERE, 1) == 0.0
    assert analysis.spectral_shift(Space.SPHERE, 2) == -0.25
    assert analysis.spectral_shift(Space.SPHERE, 3) == -1.0
    assert analysis.spectral_shift(Space.HYPERBOLIC, 3) == 1.0
    assert analysis.spectral_shift(Space.HYPERBOLIC, 5) == 4.0


# ---------------------------------------------------------------------------
# subordination


@pytest.mark.parametrize("n", [1, 2, 3])
def test_subordination_closes_on_flat_space(n):
    for y, r in [(0.8, 0.5), (1.5, 2.0)]:
        res = analysis.subordinate(
            lambda t, s: euclid.heat_closed(n, t, s), y, r, 1e-10, dim_hint=n
        )
        want = euclid.poisson_closed(n, y, r)
        assert res.value == pytest.approx(want, rel=1e-9)
        assert abs(res.value - want) <= max(10.0 * res.err_estimate, 1e-12 * want)


def test_subordinate_validates_height():
    with pytest.raises(DomainError):
        analysis.subordinate(lambda t, s: 1.0, -1.0, 0.5)


def _brute_force_theta_weight(v: float, y: float) -> float:
    return sum(
        (y + 2.0 * math.pi * k) * math.exp(-v * v * (y + 2.0 * math.pi * k) ** 2)
        for k in range(-60, 61)
    ) * 2.0 / math.sqrt(math.pi)


def test_theta_weight_matches_brute_force_image_sum():
    for v, y in [(0.4, 0.7), (1.1, 2.2), (2.5, 1.0)]:
        want = _brute_force_theta_weight(v, y)
        assert analysis._theta_weight(v, y) == pytest.approx(want, rel=1e-13, abs=1e-250)


def test_theta_weight_branches_agree_across_series_switch():
    # both the image-sum branch (v >= 0.3) and the dual frequency-series
    # branch (v < 0.3) must track the same reference sum
    y = 1.1
    for v in (0.29, 0.299, 0.3, 0.301):
        want = _brute_force_theta_weight(v, y)
        assert analysis._theta_weight(v, y) == pytest.approx(want, rel=1e-12)


def test_theta_weight_negligible_region_is_zero():
    assert analysis._theta_weight(0.05, 1.0) == 0.0
    assert 0.0 < analysis._theta_weight(0.055, 1.0) < 1e-30
    assert analysis._theta_weight(0.1, 1.0) == pytest.approx(0.0, abs=1e-8)


@pytest.mark.parametrize("n,y,rho", [(1, 0.9, 1.4), (2, 0.9, 1.4), (3, 2.2, 0.8)])
def test_poisson_images_matches_closed_strip_kernel(n, y, rho):
    res = analysis.poisson_images(n, y, rho, tol=1e-9)
    want = hyperbolic.poisson_closed(n, y, rho)
    assert res.value == pytest.approx(want, rel=1e-8)
    assert abs(res.value - want) <= max(10.0 * res.err_estimate, 1e-11 * want)


def test_poisson_images_validates_height():
    with pytest.raises(DomainError):
        analysis.poisson_images(2, math.pi, 1.0)


# ---------------------------------------------------------------------------
# masses


def test_heat_mass_euclidean_is_unit():
    for n in (1, 2, 3, 4, 5):
        got = analysis.heat_mass(Space.EUCLIDEAN, n, 0.7).value
        assert abs(got - 1.0) <= 1e-10


def test_heat_mass_sphere_decay_law():
    t = 0.7
    for n, expected in ((1, 1.0), (2, math.exp(-t / 4.0)), (3, math.exp(-t))):
        got = analysis.heat_mass(Space.SPHERE, n, t).value
        assert got == pytest.approx(expected, rel=2e-9)


def test_heat_mass_hyperbolic_growth_law():
    for t in (0.25, 0.5, 1.0, 2.0):
        got = analysis.heat_mass(Space.HYPERBOLIC, 3, t).value
        assert got == pytest.approx(math.exp(t), rel=1e-8)
    markov = analysis.heat_mass(Space.HYPERBOLIC, 3, 0.7, convention="markovian").value
    assert markov == pytest.approx(1.0, rel=1e-8)
    even = analysis.heat_mass(Space.HYPERBOLIC, 2, 0.5).value
    assert even == pytest.approx(math.exp(0.5 / 4.0), rel=1e-7)


def test_fit_spectral_shift():
    fit = analysis.fit_spectral_shift(Space.HYPERBOLIC, 3)
    assert fit.shift == pytest.approx(1.0, abs=1e-6)
    assert abs(fit.intercept) < 1e-6
    assert fit.residual < 1e-6
    assert len(fit.masses) == len(fit.t_grid) == 4
    fit2 = analysis.fit_spectral_shift(Space.SPHERE, 2)
    assert fit2.shift == pytest.approx(-0.25, abs=1e-6)
    flat = analysis.fit_spectral_shift(Space.EUCLIDEAN, 2)
    assert abs(flat.shift) < 1e-8


def test_poisson_mass_flat_and_sphere():
    y = 0.9
    for n in (1, 2, 3):
        assert analysis.poisson_mass(Space.EUCLIDEAN, n, y).value == pytest.approx(
            1.0, rel=1e-9
        )
        assert analysis.poisson_mass(Space.SPHERE, n, y).value == pytest.approx(
            math.exp(-0.5 * y * (n - 1)), rel=1e-9
        )


def test_poisson_mass_strip_line():
    for y in (0.5, 0.9, 2.5):
        got = analysis.poisson_mass(Space.HYPERBOLIC, 1, y).value
        assert got == pytest.approx((math.pi - y) / math.pi, rel=1e-9)


def test_poisson_mass_strip_plane_against_scipy():
    y = 0.9
    amp = math.gamma(1.5) / (2.0 * math.pi) ** 1.5 * math.sin(y)

    def integrand(rho):
        return (
            amp
            * (math.cosh(rho) - math.cos(y)) ** -1.5
            * 2.0
            * math.pi
            * math.sinh(rho)
        )

    want, err = quad(integrand, 0.0, 60.0, epsabs=1e-13, epsrel=1e-12, limit=200)
    got = analysis.poisson_mass(Space.HYPERBOLIC, 2, y).value
    assert got == pytest.approx(want, rel=1e-8)


def test_poisson_mass_strip_diverges_in_higher_dimension():
    with pytest.raises(DomainError):
        analysis.poisson_mass(Space.HYPERBOLIC, 3, 0.9)


# ---------------------------------------------------------------------------
# PDE residuals


@pytest.mark.parametrize("space", list(Space))
@pytest.mark.parametrize("kind", ["heat", "poisson"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_pde_residual_is_small(space, kind, n):
    param, r = 0.7, 0.9
    res = analysis.pde_residual(space, n, kind, param, r)
    assert res < 1e-6


def test_pde_residual_decreases_at_second_order():
    coarse = analysis.pde_residual(
        Space.EUCLIDEAN, 3, "heat", 0.7, 0.9, h_scale=2e-2
    )
    fine = analysis.pde_residual(Space.EUCLIDEAN, 3, "heat", 0.7, 0.9, h_scale=1e-2)
    assert 3.0 < coarse / fine < 5.0


def test_pde_residual_detects_wrong_shift():
    right = analysis.pde_residual(Space.SPHERE, 3, "heat", 0.7, 0.9)
    wrong = analysis.pde_residual(Space.SPHERE, 3, "heat", 0.7, 0.9, shift=0.0)
    assert right < 1e-6 < 1e-3 < wrong


def test_pde_residual_needs_interior_point():
    with pytest.raises(SingularPointError):
        analysis.pde_residual(Space.EUCLIDEAN, 2, "heat", 0.7, 0.0)


# ---------------------------------------------------------------------------
# cross-representation comparison


def test_compare_flat_heat_grid():
    report = analysis.compare(
        Space.EUCLIDEAN, 2, "heat", (0.5, 2.0), (0.5, 2.0), tol=1e-10
    )
    assert set(report.values) == {"closed", "raise", "descent", "gruet"}
    assert report.worst < 1e-9
    assert report.worst_pair != ()


def test_compare_records_refusals_as_nan():
    report = analysis.compare(
        Space.SPHERE, 3, "heat", (0.7,), (1.1, math.pi), tol=1e-9
    )
    theta_row = report.values["theta"][0]
    assert math.isnan(theta_row[1])  # antipode refused by the image sum
    assert not math.isnan(theta_row[0])
    assert report.worst < 1e-7  # comparison proceeds on the surviving points


# ---------------------------------------------------------------------------
# semigroup


def test_semigroup_flat():
    for n in (1, 3):
        res = analysis.semigroup_check(Space.EUCLIDEAN, n, 0.5, 0.9, 1.1)
        assert res.rel_deviation < 1e-8
        assert res.direct > 0.0 and res.n_evals > 0


def test_semigroup_hyperbolic():
    res = analysis.semigroup_check(Space.HYPERBOLIC, 3, 0.5, 0.9, 1.1, tol=1e-7)
    assert res.rel_deviation < 1e-5


def test_semigroup_unsupported_cases():
    with pytest.raises(DomainError):
        analysis.semigroup_check(Space.SPHERE, 1, 0.5, 0.5, 1.0)
    with pytest.raises(DomainError):
        analysis.semigroup_check(Space.EUCLIDEAN, 2, 0.5, 0.5, 1.0)


# ---------------------------------------------------------------------------
# subordination sweep


def test_sweep_flat_space_closes_directly():
    report = analysis.subordination_sweep(Space.EUCLIDEAN, 1, tol=1e-9)
    assert len(report.rows) == 1  # n = 1 offers no nonzero shift candidate
    assert report.best.mismatch < 1e-8
    assert report.images_mismatch is None
    plane = analysis.subordination_sweep(Space.EUCLIDEAN, 2, tol=1e-9)
    assert len(plane.rows) == 3  # shifts 0 and +-1/4, one convention
    assert plane.best.extra_shift == 0.0
    assert plane.best.mismatch < 1e-8


def test_sweep_sphere_identifies_paper_convention():
    report = analysis.subordination_sweep(Space.SPHERE, 2, tol=1e-9)
    assert len(report.rows) == 6  # two conventions times three shifts
    assert report.best.convention == "paper"
    assert report.best.extra_shift == 0.0
    assert report.best.mismatch < 1e-7


def test_sweep_hyperbolic_needs_image_closure():
    report = analysis.subordination_sweep(Space.HYPERBOLIC, 3, tol=1e-9)
    # no single subordinated kernel reproduces the periodic strip kernel ...
    assert report.best.mismatch > 1e-3
    # ... but the 2 pi image sum closes it to quadrature accuracy
    assert report.images_mismatch is not None
    assert report.images_mismatch < 1e-8


# ---------------------------------------------------------------------------
# validation suites


def test_run_suite_semigroup_passes():
    report = analysis.run_suite("semigroup")
    assert report.passed
    assert len(report.checks) == 3
    d = report.to_dict()
    assert d["suite"] == "semigroup"
    assert d["passed"] is True
    assert {c["name"] for c in d["checks"]} == {c.name for c in report.checks}


def test_run_suite_validation():
    with pytest.raises(DomainError):
        analysis.run_suite("everything")
    with pytest.raises(DomainError):
        analysis.run_suite("mass", tol_profile="sloppy")
