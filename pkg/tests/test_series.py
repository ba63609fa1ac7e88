import json

import numpy as np
import pytest

from renormlab import series
from renormlab.errors import DomainError, FitError, RangeError, SingularScalingError


def test_eval_constant():
    f = series.AnalyticUnimodal([1.0])
    assert series.evaluate(f, 0.7) == 1.0


def test_eval_parabola_at_one():
    f = series.AnalyticUnimodal([1.0, -1.0])
    assert series.evaluate(f, 1.0) == 0.0


def test_eval_fixed_point_at_one(phi40):
    # the universal value -phi0(1) = 0.3995...
    assert series.evaluate(phi40.phi0, 1.0) == pytest.approx(-0.3995, abs=5e-4)


def test_eval_domain_error():
    f = series.AnalyticUnimodal([1.0, -1.0])
    with pytest.raises(DomainError):
        series.evaluate(f, 1.5)


def test_eval_matches_monomial_sum():
    rng = np.random.default_rng(3)
    c = rng.uniform(-2, 2, 9)
    f = series.AnalyticUnimodal(c)
    xs = rng.uniform(-1, 1, 50)
    direct = sum(cj * xs ** (2 * j) for j, cj in enumerate(c))
    assert np.max(np.abs(series.evaluate(f, xs) - direct)) < 1e-13


def test_eval_vectorized_scalar_consistency():
    f = series.AnalyticUnimodal([0.3, -0.8, 0.05])
    xs = np.linspace(-1, 1, 7)
    vec = series.evaluate(f, xs)
    assert vec.shape == xs.shape
    for x, v in zip(xs, vec):
        assert series.evaluate(f, float(x)) == pytest.approx(v, abs=0)


def test_normalized_flag_validation():
    with pytest.raises(ValueError):
        series.AnalyticUnimodal([1.0, 0.5], normalized=True)
    with pytest.raises(ValueError):
        series.AnalyticUnimodal([0.9, -1.0], normalized=True)
    f = series.AnalyticUnimodal([1.0, -1.4], normalized=True)
    assert f.normalized and f.trunc_degree == 1


def test_compose_constants():
    one = series.AnalyticUnimodal([1.0])
    out = series.compose_unimodal(one, one, 0)
    assert np.allclose(out.coeffs, [1.0], atol=1e-14)


def test_compose_parabola():
    # (1-x^2) o (1-x^2) = 2x^2 - x^4 -> coefficients [0, 2, -1]
    f = series.AnalyticUnimodal([1.0, -1.0])
    out = series.compose_unimodal(f, f, 2)
    assert np.allclose(out.coeffs, [0.0, 2.0, -1.0], atol=1e-12)


def test_compose_fixed_point_self(phi40):
    # phi0(1)^-1 phi0(phi0(phi0(1) x)) = phi0: compose + conjugate recovers it
    phi = phi40.phi0
    s = series.evaluate(phi, 1.0)
    squared = series.compose_unimodal(phi, phi, phi.trunc_degree)
    conj = series.scale_conjugate(squared, s, phi.trunc_degree)
    assert series.sup_distance(conj, phi) < 1e-8


def test_compose_range_error():
    # inner map reaches 2, outer domain is [-1, 1]
    f = series.AnalyticUnimodal([1.0, -1.0])
    big = series.AnalyticUnimodal([2.0])
    with pytest.raises(RangeError):
        series.compose_unimodal(f, big, 2)


def test_compose_matches_pointwise():
    rng = np.random.default_rng(11)
    f = series.AnalyticUnimodal([0.4, 0.3, -0.2])
    h = series.AnalyticUnimodal([0.5, -0.45, 0.05])
    out = series.compose_unimodal(f, h, 8)   # combined degree in x^2 is 8
    xs = rng.uniform(-1, 1, 100)
    direct = series.evaluate(f, series.evaluate(h, xs))
    assert np.max(np.abs(series.evaluate(out, xs) - direct)) < 1e-8


def test_scale_identity():
    f = series.AnalyticUnimodal([0.7, -0.3, 0.1])
    out = series.scale_conjugate(f, 1.0)
    assert np.allclose(out.coeffs, f.coeffs, atol=0)


def test_scale_minus_one():
    f = series.AnalyticUnimodal([1.0, -1.0])
    out = series.scale_conjugate(f, -1.0)
    assert np.allclose(out.coeffs, [-1.0, 1.0], atol=0)


def test_scale_zero_raises():
    f = series.AnalyticUnimodal([1.0, -1.0])
    with pytest.raises(SingularScalingError):
        series.scale_conjugate(f, 0.0)


def test_scale_round_trip():
    rng = np.random.default_rng(5)
    f = series.AnalyticUnimodal(rng.uniform(-1, 1, 11))
    for s in (0.1, 0.37, 1.0, 2.5, 10.0):
        back = series.scale_conjugate(series.scale_conjugate(f, s), 1.0 / s)
        assert np.max(np.abs(back.coeffs - f.coeffs)) < 1e-10


def test_fit_exact_parabola():
    nodes = series.cheb_nodes(8)
    f = series.AnalyticUnimodal([1.0, -1.0])
    grid = series.ChebGrid(nodes, series.evaluate(f, nodes))
    out = series.fit_from_samples(grid, 3)
    assert np.allclose(out.coeffs, [1.0, -1.0, 0.0, 0.0], atol=1e-12)


def test_fit_constant():
    grid = series.ChebGrid(series.cheb_nodes(4), np.ones(4))
    out = series.fit_from_samples(grid, 0)
    assert np.allclose(out.coeffs, [1.0], atol=1e-14)


def test_fit_round_trip_fixed_point(phi40):
    # the represented function round-trips to machine noise; individual
    # coefficients are limited by the degree-40 monomial conditioning
    phi = phi40.phi0
    k = phi.trunc_degree
    nodes = series.cheb_nodes(2 * k + 1)
    grid = series.ChebGrid(nodes, series.evaluate(phi, nodes))
    out = series.fit_from_samples(grid, k)
    assert series.sup_distance(out, phi) < 1e-12
    # binary64 floor: the pseudoinverse amplifies sampling rounding by the
    # inverse of its singular-value cutoff (~5e-9 at degree 40)
    assert np.max(np.abs(out.coeffs - phi.coeffs)) < 1e-7


@pytest.mark.parametrize("degree", [0, 1, 2, 4, 6, 8])
def test_fit_round_trip_random(degree):
    # coefficient recovery to 1e-10 whenever the sampled function is an even
    # polynomial of degree <= fit degree (monomial conditioning caps this
    # guarantee near degree ~10 in binary64)
    rng = np.random.default_rng(degree)
    for _ in range(10):
        c = rng.uniform(-2, 2, degree + 1)
        f = series.AnalyticUnimodal(c)
        nodes = series.cheb_nodes(2 * degree + 1) if degree else series.cheb_nodes(2)
        grid = series.ChebGrid(nodes, series.evaluate(f, nodes))
        out = series.fit_from_samples(grid, degree)
        assert np.max(np.abs(out.coeffs - c)) < 1e-10


def test_fit_rank_deficiency():
    # symmetric node pairs give duplicate squares: too few distinct u values
    nodes = np.array([-0.9, -0.5, 0.5, 0.9])
    grid = series.ChebGrid(nodes, np.ones(4))
    with pytest.raises(FitError):
        series.fit_from_samples(grid, 3)


def test_grid_validation():
    with pytest.raises(ValueError):
        series.ChebGrid([0.5, 0.5, 0.7], [1.0, 2.0, 3.0])


def test_sup_norm_values():
    assert series.sup_norm(series.AnalyticUnimodal([1.0, -1.0])) == pytest.approx(1.0, abs=1e-12)
    assert series.sup_norm(series.AnalyticUnimodal([0.0])) == 0.0
    assert series.sup_norm(series.AnalyticUnimodal([1.0, -2.0])) == pytest.approx(1.0, abs=1e-12)


def test_sup_norm_interior_max():
    # |0.421875 u^2 - 0.75 u| peaks at u = 8/9, between grid nodes
    f = series.AnalyticUnimodal([0.0, -0.75, 0.421875])
    assert series.sup_norm(f) == pytest.approx(1.0 / 3.0, abs=1e-6)


def test_serialization_round_trip(tmp_path):
    f = series.AnalyticUnimodal([1.0, -1.52763, 0.104815])
    path = tmp_path / "phi.coeffs.json"
    series.save_coeffs(f, path)
    data = json.loads(path.read_text())
    assert isinstance(data, list) and data[0] == 1.0
    back = series.load_coeffs(path)
    assert np.allclose(back.coeffs, f.coeffs, atol=0)
