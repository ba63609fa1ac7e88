"""Truncated even power series over [-h, h].

A real analytic unimodal map with a quadratic critical point at the origin
is stored through its even representation phi(x) = g(x^2) = sum_j c_j x^(2j).
Only the coefficients of g are kept, which halves the coefficient count and
makes phi'(0) = 0 automatic.  Composition and rescaling are closed on this
class, so the whole doubling-renormalization story can be told in it.

Fits from sampled values use a fixed regularized pseudoinverse of the even
Vandermonde matrix.  The monomial basis on x^2 in [0, 1] turns severely
ill-conditioned past degree ~15, so the regularization (relative cutoff
1e-9) is what keeps the sample -> coefficients map smooth and reproducible;
function values are accurate to ~1e-10 even at degree 40, while individual
high-order coefficients of near-degenerate inputs are not identifiable in
binary64 by any method.
"""

import json

import numpy as np

from .errors import DomainError, FitError, RangeError, SingularScalingError

# truncation degrees above this are refused outright
MAX_DEGREE = 256

# relative singular-value cutoff of the fit pseudoinverse
FIT_RCOND = 1e-9


class AnalyticUnimodal:
    """Even power series phi(x) = sum_j coeffs[j] * x^(2j) on [-h, h].

    coeffs[0] is phi(0).  When flagged `normalized`, phi(0) = 1 and
    phi''(0) = 2*coeffs[1] < 0 are enforced at construction.
    """

    __slots__ = ("coeffs", "domain_halfwidth", "normalized")

    def __init__(self, coeffs, domain_halfwidth=1.0, normalized=False):
        c = np.atleast_1d(np.asarray(coeffs, dtype=float)).copy()
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coeffs must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(c)):
            raise ValueError("coeffs must be finite")
        if domain_halfwidth <= 0:
            raise ValueError("domain_halfwidth must be positive")
        if normalized:
            if c[0] != 1.0:
                raise ValueError("normalized series must have c0 = 1")
            if c.size < 2 or not c[1] < 0:
                raise ValueError("normalized series must have c1 < 0")
        c.setflags(write=False)
        self.coeffs = c
        self.domain_halfwidth = float(domain_halfwidth)
        self.normalized = bool(normalized)

    @property
    def trunc_degree(self):
        return self.coeffs.size - 1

    def __call__(self, x):
        return evaluate(self, x)

    def __repr__(self):
        head = np.array2string(self.coeffs[:4], precision=6)
        return (f"AnalyticUnimodal(K={self.trunc_degree}, coeffs={head}..., "
                f"h={self.domain_halfwidth}, normalized={self.normalized})")

    def _binary(self, other, sign):
        if not isinstance(other, AnalyticUnimodal):
            return NotImplemented
        if other.domain_halfwidth != self.domain_halfwidth:
            raise ValueError("series live on different domains")
        n = max(self.coeffs.size, other.coeffs.size)
        a = np.zeros(n)
        a[: self.coeffs.size] = self.coeffs
        a[: other.coeffs.size] += sign * other.coeffs
        return AnalyticUnimodal(a, self.domain_halfwidth)

    def __add__(self, other):
        return self._binary(other, 1.0)

    def __sub__(self, other):
        return self._binary(other, -1.0)

    def __mul__(self, s):
        return AnalyticUnimodal(self.coeffs * float(s), self.domain_halfwidth)

    __rmul__ = __mul__


class ChebGrid:
    """Sample abscissae in [-1, 1] (Chebyshev extrema by default) with values."""

    __slots__ = ("nodes", "values")

    def __init__(self, nodes, values):
        nodes = np.asarray(nodes, dtype=float)
        values = np.asarray(values, dtype=float)
        if nodes.ndim != 1 or nodes.shape != values.shape:
            raise ValueError("nodes and values must be matching 1-D arrays")
        if nodes.size < 1 or np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        self.nodes = nodes
        self.values = values

    def __len__(self):
        return self.nodes.size


def cheb_nodes(m):
    """m Chebyshev extrema of [-1, 1], strictly increasing."""
    if m < 2:
        return np.zeros(1)
    return -np.cos(np.pi * np.arange(m) / (m - 1))


def _eval_in_u(coeffs, u):
    # Horner in u = x^2
    r = np.zeros_like(u)
    for cj in coeffs[::-1]:
        r = r * u + cj
    return r


def evaluate(f, x):
    """phi(x) by Horner evaluation in u = x^2.  Accepts scalars or arrays."""
    xs = np.asarray(x, dtype=float)
    if np.any(np.abs(xs) > f.domain_halfwidth * (1 + 1e-12)):
        raise DomainError(
            f"|x| > domain halfwidth {f.domain_halfwidth}: x={x!r}")
    out = _eval_in_u(f.coeffs, xs**2)
    return float(out) if np.isscalar(x) or xs.ndim == 0 else out


def eval_derivative(f, x):
    """phi'(x) = 2x * g'(x^2)."""
    xs = np.asarray(x, dtype=float)
    c = f.coeffs
    if c.size == 1:
        gp = np.zeros_like(xs)
    else:
        gp = _eval_in_u(c[1:] * np.arange(1, c.size), xs**2)
    out = 2.0 * xs * gp
    return float(out) if np.isscalar(x) or xs.ndim == 0 else out


_FIT_CACHE = {}


def _fit_operator(m, degree, halfwidth=1.0):
    """Cached (nodes, design matrix, pseudoinverse) for the default grids."""
    key = (m, degree, halfwidth)
    if key not in _FIT_CACHE:
        nodes = cheb_nodes(m) * halfwidth
        a = np.vander(nodes**2, degree + 1, increasing=True)
        _FIT_CACHE[key] = (nodes, a, np.linalg.pinv(a, rcond=FIT_RCOND))
    return _FIT_CACHE[key]


def _solve_fit(a, values, degree):
    u_distinct = np.unique(np.round(a[:, 1] if degree >= 1 else a[:, 0], 14))
    if u_distinct.size < degree + 1 and degree >= 1:
        raise FitError(
            f"need {degree + 1} distinct squared nodes, have {u_distinct.size}")
    p = np.linalg.pinv(a, rcond=FIT_RCOND)
    c = p @ values
    # one refinement pass recovers exactness for well-conditioned degrees
    return c + p @ (values - a @ c)


def fit_from_samples(grid, degree):
    """Least-squares even series of the sampled function.

    Exact (to rounding) when the samples come from an even polynomial of
    degree <= 2*degree in x and the grid supplies degree+1 distinct squares.
    """
    if degree < 0 or degree > MAX_DEGREE:
        raise ValueError(f"degree must be in [0, {MAX_DEGREE}]")
    if len(grid) < degree + 1:
        raise FitError(f"need at least {degree + 1} nodes, grid has {len(grid)}")
    a = np.vander(grid.nodes**2, degree + 1, increasing=True)
    return AnalyticUnimodal(_solve_fit(a, grid.values, degree))


def _fit_values(values, m, degree, halfwidth=1.0):
    # fast path used by compose/renormalize: default grid, cached pinv
    nodes, a, p = _fit_operator(m, degree, halfwidth)
    c = p @ values
    return c + p @ (values - a @ c)


def compose_unimodal(f, h, degree):
    """Even series of f o h truncated to the given degree in x^2.

    Computed by sampling x -> f(h(x)) on Chebyshev nodes and refitting,
    not by coefficient convolution.
    """
    if degree < 0 or degree > MAX_DEGREE:
        raise ValueError(f"degree must be in [0, {MAX_DEGREE}]")
    if f.domain_halfwidth != h.domain_halfwidth:
        raise ValueError("composition requires a shared domain convention")
    hw = h.domain_halfwidth
    m = 2 * max(degree, 1) + 1
    nodes, _, _ = _fit_operator(m, degree, hw)
    inner = evaluate(h, nodes)
    lim = f.domain_halfwidth * (1 + 1e-12)
    if np.max(np.abs(inner)) > lim:
        raise RangeError(
            f"inner values reach {np.max(np.abs(inner)):.6g}, outside the "
            f"outer domain [-{f.domain_halfwidth}, {f.domain_halfwidth}]")
    vals = _eval_in_u(f.coeffs, np.clip(inner, -lim, lim) ** 2)
    return AnalyticUnimodal(_fit_values(vals, m, degree, hw), hw)


def scale_conjugate(f, s, degree=None):
    """Even series of x -> f(s*x)/s, i.e. coefficient c_j -> c_j * s^(2j-1)."""
    if s == 0:
        raise SingularScalingError("scale factor s = 0")
    if degree is None:
        degree = f.trunc_degree
    if degree < 0 or degree > MAX_DEGREE:
        raise ValueError(f"degree must be in [0, {MAX_DEGREE}]")
    c = np.zeros(degree + 1)
    k = min(degree, f.trunc_degree) + 1
    j = np.arange(k)
    c[:k] = f.coeffs[:k] * float(s) ** (2 * j - 1)
    return AnalyticUnimodal(c, f.domain_halfwidth)


def sup_norm(f, grid_points=512):
    """max |phi| over a dense grid with one Newton polish at the best node."""
    hw = f.domain_halfwidth
    xs = np.linspace(-hw, hw, max(int(grid_points), 512) + 1)
    vals = np.abs(_eval_in_u(f.coeffs, xs**2))
    i = int(np.argmax(vals))
    best = vals[i]
    # polish: one Newton step on (phi^2)' = 0
    x0 = xs[i]
    p = _eval_in_u(f.coeffs, np.array(x0**2))
    c = f.coeffs
    if c.size >= 2:
        j = np.arange(1, c.size)
        gp = _eval_in_u(c[1:] * j, np.array(x0**2))
        dp = 2 * x0 * gp
        if c.size >= 3:
            gpp = _eval_in_u(c[2:] * j[1:] * (j[1:] - 1), np.array(x0**2))
        else:
            gpp = 0.0
        ddp = 2 * gp + 4 * x0**2 * gpp
        denom = dp * dp + p * ddp
        if abs(denom) > 1e-300:
            x1 = x0 - (p * dp) / denom
            if abs(x1) <= hw:
                best = max(best, abs(float(_eval_in_u(c, np.array(x1**2)))))
    return float(best)


def sup_distance(f, g, grid_points=512):
    """sup-norm distance between two series on their shared domain."""
    return sup_norm(f - g, grid_points)


def save_coeffs(f, path):
    """Write the coefficient vector as a bare JSON array (*.coeffs.json)."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([float(c) for c in f.coeffs], fh)


def load_coeffs(path, domain_halfwidth=1.0):
    """Read a bare JSON coefficient array written by save_coeffs."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return AnalyticUnimodal(data, domain_halfwidth)
