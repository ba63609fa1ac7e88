from fractions import Fraction

import numpy as np
import pytest

from renormlab import renorm1d, series
from renormlab.errors import LinearizationError, SingularScalingError


def _rational_renorm_quadratic(c0, c1):
    """Exact-rational oracle for R f with f(x) = c0 + c1 x^2.

    R f(x) = s^-1 f(f(s x)), s = f(1); expanded symbolically in u = x^2.
    Returns the coefficients of 1, u, u^2.
    """
    c0, c1 = Fraction(c0), Fraction(c1)
    s = c0 + c1
    # inner g(u) = c0 + c1 s^2 u ; outer c0 + c1 * inner^2, all over s
    a0 = c0 + c1 * c0 * c0
    a1 = c1 * 2 * c0 * (c1 * s * s)
    a2 = c1 * (c1 * s * s) ** 2
    return [a0 / s, a1 / s, a2 / s]


ORACLE_COEFFS = _rational_renorm_quadratic(1, Fraction(-3, 2))
# frozen from the oracle: [1, -2.25, 0.421875]
assert ORACLE_COEFFS == [Fraction(1), Fraction(-9, 4), Fraction(27, 64)]


def test_renormalize_quadratic_example():
    f = series.AnalyticUnimodal([1.0, -1.5])
    out = renorm1d.renormalize(f, 2)
    assert np.allclose(out.coeffs, [1.0, -2.25, 0.421875], atol=1e-12)
    assert np.allclose(out.coeffs, [float(c) for c in ORACLE_COEFFS], atol=1e-12)


def test_renormalize_fixed_point(phi40):
    phi = phi40.phi0
    out = renorm1d.renormalize(phi, phi.trunc_degree)
    assert series.sup_distance(out, phi) < 1e-8


def test_renormalize_singular_scaling():
    with pytest.raises(SingularScalingError):
        renorm1d.renormalize(series.AnalyticUnimodal([1.0, -1.0]), 2)


def test_residual_fixed_point(phi40):
    assert renorm1d.residual(phi40.phi0) < 1e-8


def test_residual_quadratic():
    # coefficient gap at degree 2 is (0, -0.75, 0.421875); well above 0.1
    f = series.AnalyticUnimodal([1.0, -1.5])
    gap = renorm1d.renormalize(f, 2) - series.AnalyticUnimodal([1.0, -1.5, 0.0])
    assert np.allclose(gap.coeffs, [0.0, -0.75, 0.421875], atol=1e-12)
    assert renorm1d.residual(f) > 0.1


def test_residual_constant_is_zero():
    f = series.AnalyticUnimodal([1.0, 0.0])
    assert renorm1d.residual(f) < 1e-14


def test_solve_lambda_value(phi40):
    assert phi40.lam == pytest.approx(0.3995, abs=5e-4)
    assert 0.0 < phi40.lam < 1.0
    assert phi40.residual < 1e-8
    assert phi40.phi0.normalized


def test_solve_negative_curvature(phi40):
    # phi0''(0) = 2 c1 < 0
    assert phi40.phi0.coeffs[1] < 0


def test_solve_single_fixed_point_above_lambda(phi40):
    # bisection oracle on phi0(x) - x over [0, 1]
    phi = phi40.phi0
    xs = np.linspace(0.0, 1.0, 2001)
    vals = series.evaluate(phi, xs) - xs
    crossings = np.nonzero(np.diff(np.sign(vals)) != 0)[0]
    assert len(crossings) == 1
    lo, hi = xs[crossings[0]], xs[crossings[0] + 1]
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if (series.evaluate(phi, mid) - mid) * (series.evaluate(phi, lo) - lo) <= 0:
            hi = mid
        else:
            lo = mid
    x_star = 0.5 * (lo + hi)
    assert x_star > phi40.lam


def test_solve_requires_normalized_initial():
    with pytest.raises(ValueError):
        renorm1d.solve_fixed_point(series.AnalyticUnimodal([1.0, -1.4]))


def test_truncation_stability(phi40, phi20):
    fp30 = renorm1d.solve_fixed_point(degree=30)
    assert abs(fp30.lam - phi40.lam) < 1e-6


def test_newton_quadratic_tail(phi40):
    steps = [s for s in phi40.step_norms if s > 1e-12]
    assert len(steps) >= 2
    for s_prev, s_next in zip(steps, steps[1:]):
        assert s_next <= 1e3 * s_prev * s_prev


def test_double_renormalization_stays(phi40):
    phi = phi40.phi0
    once = renorm1d.renormalize(phi, phi.trunc_degree)
    twice = renorm1d.renormalize(once, phi.trunc_degree)
    assert series.sup_distance(twice, once) < 1e-7
    assert series.sup_distance(twice, phi) < 1e-7


def test_lambda_of_values(phi40):
    assert renorm1d.lambda_of(phi40.phi0) == pytest.approx(0.3995, abs=5e-4)
    assert renorm1d.lambda_of(series.AnalyticUnimodal([1.0, -1.0])) == 0.0
    assert renorm1d.lambda_of(series.AnalyticUnimodal([1.0, -1.5])) == pytest.approx(0.5, abs=0)


def test_linearize_spectrum(phi40):
    lin = renorm1d.linearize(phi40.phi0)
    assert lin.leading_eigenvalue > 1.0
    assert lin.jacobian.shape == (41, 41)
    assert lin.expanding_count >= 1
    # on the normalized slice exactly one direction expands
    assert lin.pinned_expanding_count == 1
    pinned_eigs = np.linalg.eigvals(lin.jacobian[1:, 1:])
    assert int(np.sum(np.abs(pinned_eigs) > 1.0)) == 1
    assert lin.eigen_gap > 1.0


def test_linearize_cross_validates_cascade(phi40, logistic_cascade10):
    lin = renorm1d.linearize(phi40.phi0)
    delta_cascade = logistic_cascade10.delta_estimates[-1]
    assert abs(lin.leading_eigenvalue - delta_cascade) < 0.01 * delta_cascade


def test_linearize_degenerate_constant():
    # must not crash: either a clean error or all eigenvalues <= 1
    try:
        lin = renorm1d.linearize(series.AnalyticUnimodal([1.0, 0.0]))
    except LinearizationError:
        return
    assert abs(lin.leading_eigenvalue) <= 1.0
    assert lin.expanding_count == 0


def test_linearize_rejects_nonfixed_points():
    with pytest.raises(LinearizationError):
        renorm1d.linearize(series.AnalyticUnimodal([1.0, -1.5]))


def test_jacobian_central_difference_order():
    # halving h divides the truncation error by ~4 (second-order stencil)
    k = 12
    fp = renorm1d.solve_fixed_point(degree=k)
    c = fp.phi0.coeffs

    def jac(h):
        out = np.empty((k + 1, k + 1))
        for j in range(k + 1):
            cp = c.copy(); cp[j] += h
            cm = c.copy(); cm[j] -= h
            out[:, j] = (renorm1d._renorm_coeffs(cp, k)
                         - renorm1d._renorm_coeffs(cm, k)) / (2 * h)
        return out

    j1, j2, j4 = jac(4e-4), jac(2e-4), jac(1e-4)
    num = np.linalg.norm(j1 - j2)
    den = np.linalg.norm(j2 - j4)
    assert 2.5 < num / den < 5.5
