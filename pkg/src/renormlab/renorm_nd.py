"""Polynomial maps of the n-disk and their doubling renormalization.

A region is an affine image of the closed unit ball (DiskND); a map is a
tuple of dense polynomial coefficient tensors (MapND).  Doubling
renormalizability of psi on a disk D1 means psi(D1) is disjoint from D1
while psi^2(D1) lands strictly inside it; both conditions are checked on a
deterministic low-discrepancy sample of D1 and reported as signed margins
in chart-norm units, so a pass is quantified evidence, not a proof.

The change of variables is restricted to affine charts.  That is enough to
exhibit the doubling phenomenon; the polynomial refit of the renormalized
map absorbs what a nonlinear chart would have straightened out.
"""

import itertools
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .errors import (DimensionError, DiskError, EscapeError, RefitError,
                     RangeError)
from .series import AnalyticUnimodal

ESCAPE_LIMIT = 1e10
_LETTERS = "abcdefghijkl"


# ---------------------------------------------------------------------------
# maps

class MapND:
    """Polynomial self-map of an n-dimensional region, n >= 2.

    components[i] is a dense coefficient tensor: entry [k1, ..., kn]
    multiplies x1^k1 * ... * xn^kn in output coordinate i.
    """

    def __init__(self, components, family=""):
        comps = tuple(np.asarray(c, dtype=float) for c in components)
        n = len(comps)
        if n < 2:
            raise DimensionError("MapND needs dimension n >= 2")
        for c in comps:
            if c.ndim != n:
                raise ValueError("each coefficient tensor needs one axis per variable")
        self.components = comps
        self.dim = n
        self.family = family
        self.fit_residual = None
        self._jac_tensors = None

    def __call__(self, pts):
        """Evaluate at an (m, n) array of points or a single n-point."""
        p = np.asarray(pts, dtype=float)
        single = p.ndim == 1
        if single:
            p = p[None, :]
        if p.shape[1] != self.dim:
            raise ValueError(f"points must have {self.dim} coordinates")
        out = np.column_stack([_eval_tensor(c, p) for c in self.components])
        return out[0] if single else out

    def jacobian(self, pt):
        """n x n derivative matrix at a single point."""
        if self._jac_tensors is None:
            self._jac_tensors = tuple(
                tuple(_diff_tensor(c, ax) for ax in range(self.dim))
                for c in self.components)
        p = np.asarray(pt, dtype=float)[None, :]
        jac = np.empty((self.dim, self.dim))
        for i, row in enumerate(self._jac_tensors):
            for j, tens in enumerate(row):
                jac[i, j] = _eval_tensor(tens, p)[0]
        return jac

    def __add__(self, other):
        if not isinstance(other, MapND) or other.dim != self.dim:
            return NotImplemented
        comps = [_add_tensors(a, b)
                 for a, b in zip(self.components, other.components)]
        return MapND(comps, family=self.family)

    def __mul__(self, s):
        return MapND([c * float(s) for c in self.components], family=self.family)

    __rmul__ = __mul__


def _eval_tensor(c, pts):
    # contract one Vandermonde per axis against the coefficient tensor
    n = c.ndim
    ops, subs = [], []
    for ax in range(n):
        ops.append(np.vander(pts[:, ax], c.shape[ax], increasing=True))
        subs.append("z" + _LETTERS[ax])
    expr = ",".join(subs) + "," + _LETTERS[:n] + "->z"
    with np.errstate(over="ignore", invalid="ignore"):
        return np.einsum(expr, *ops, c, optimize=True)


def _diff_tensor(c, axis):
    d = c.shape[axis]
    if d == 1:
        return np.zeros_like(c)
    sl = [slice(None)] * c.ndim
    sl[axis] = slice(1, None)
    shape = [1] * c.ndim
    shape[axis] = d - 1
    return c[tuple(sl)] * np.arange(1, d).reshape(shape)


def _add_tensors(a, b):
    shape = tuple(max(x, y) for x, y in zip(a.shape, b.shape))
    out = np.zeros(shape)
    out[tuple(slice(0, s) for s in a.shape)] = a
    out[tuple(slice(0, s) for s in b.shape)] += b
    return out


def standard_fct_map(n, phi0):
    """The endomorphism (x1, ..., xn) -> (xn, 0, ..., 0, phi0(xn)).

    Collapses the n-disk onto the graph of the unimodal map phi0 with
    infinite transverse contraction.
    """
    if n < 2:
        raise DimensionError("the standard map needs n >= 2")
    if not isinstance(phi0, AnalyticUnimodal):
        raise TypeError("phi0 must be an AnalyticUnimodal series")
    comps = []
    first = np.zeros((1,) * (n - 1) + (2,))
    first[(0,) * (n - 1) + (1,)] = 1.0
    comps.append(first)
    for _ in range(n - 2):
        comps.append(np.zeros((1,) * n))
    k = phi0.trunc_degree
    last = np.zeros((1,) * (n - 1) + (2 * k + 1,))
    last[(0,) * (n - 1)][::2] = phi0.coeffs
    comps.append(last)
    return MapND(comps, family="standard-fct")


def identity_map(n):
    """The identity as a MapND (handy degenerate test subject)."""
    comps = []
    for i in range(n):
        c = np.zeros((1,) * i + (2,) + (1,) * (n - 1 - i))
        idx = [0] * n
        idx[i] = 1
        c[tuple(idx)] = 1.0
        comps.append(c)
    return MapND(comps, family="identity")


def iterate(psi, x, k):
    """k-fold application; raises EscapeError past coordinate size 1e10."""
    if k < 0:
        raise ValueError("k must be >= 0")
    p = np.asarray(x, dtype=float)
    for i in range(k):
        p = psi(p)
        if not np.all(np.isfinite(p)) or np.max(np.abs(p)) > ESCAPE_LIMIT:
            raise EscapeError(f"orbit escaped at step {i + 1}", step=i + 1)
    return p


# ---------------------------------------------------------------------------
# disks and deterministic ball sampling

class DiskND:
    """Affine image of the closed unit ball: {center + linear @ u : |u| <= 1}."""

    def __init__(self, center, linear):
        center = np.asarray(center, dtype=float)
        linear = np.asarray(linear, dtype=float)
        n = center.size
        if n < 2:
            raise DimensionError("DiskND needs dimension n >= 2")
        if linear.shape != (n, n):
            raise DiskError(f"linear part must be {n}x{n}")
        if abs(np.linalg.det(linear)) <= 1e-12:
            raise DiskError("linear part is singular (|det| <= 1e-12)")
        self.center = center
        self.linear = linear
        self.dim = n
        self._inv = np.linalg.inv(linear)

    def chart(self, ball_pts):
        """Map reference-ball points into the disk."""
        return np.asarray(ball_pts, dtype=float) @ self.linear.T + self.center

    def chart_norm(self, pts):
        """Reference-ball norm of ambient points (<= 1 means inside)."""
        rel = (np.asarray(pts, dtype=float) - self.center) @ self._inv.T
        with np.errstate(over="ignore", invalid="ignore"):
            return np.linalg.norm(rel, axis=-1)

    def scaled(self, factor):
        return DiskND(self.center, self.linear * factor)

    def to_json_dict(self):
        return {"center": self.center.tolist(), "linear": self.linear.tolist()}


def _halton(count, base):
    seq = np.zeros(count)
    for i in range(count):
        f, r, x = 1.0, 0.0, i + 1
        while x > 0:
            f /= base
            r += f * (x % base)
            x //= base
        seq[i] = r
    return seq


_BALL_CACHE = {}
_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)


def ball_samples(n, count):
    """Deterministic low-discrepancy points of the unit n-ball.

    Half interior (radius u^(1/n)), half on the boundary sphere; Halton
    sequences throughout, so identical calls give identical points.
    """
    key = (n, count)
    if key in _BALL_CACHE:
        return _BALL_CACHE[key]
    if n == 2:
        theta = 2 * np.pi * _halton(count, 2)
        dirs = np.column_stack([np.cos(theta), np.sin(theta)])
    elif n == 3:
        z = 2 * _halton(count, 2) - 1
        theta = 2 * np.pi * _halton(count, 3)
        s = np.sqrt(np.maximum(0.0, 1 - z * z))
        dirs = np.column_stack([s * np.cos(theta), s * np.sin(theta), z])
    else:
        nd = NormalDist()
        cols = []
        for ax in range(n):
            u = _halton(count, _PRIMES[(ax + 1) % len(_PRIMES)])
            cols.append([nd.inv_cdf(min(max(v, 1e-12), 1 - 1e-12)) for v in u])
        dirs = np.array(cols).T
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    m = count // 2
    radii = np.ones(count)
    radii[:m] = _halton(m, _PRIMES[(n + 1) % len(_PRIMES)]) ** (1.0 / n)
    pts = dirs * radii[:, None]
    pts.setflags(write=False)
    _BALL_CACHE[key] = pts
    return pts


# ---------------------------------------------------------------------------
# renormalizability check and renormalization

@dataclass(frozen=True)
class RenormCheck:
    disjoint_ok: bool
    image_inside_ok: bool
    disjoint_margin: float   # min chart norm of psi(D1) minus 1
    inside_margin: float     # 1 minus max chart norm of psi^2(D1)

    @property
    def passed(self):
        return self.disjoint_ok and self.image_inside_ok

    def to_json_dict(self):
        return {"disjoint_ok": self.disjoint_ok,
                "image_inside_ok": self.image_inside_ok,
                "disjoint_margin": self.disjoint_margin,
                "inside_margin": self.inside_margin}


def check_renormalizable(psi, d1, samples=2048):
    """Sampled test of psi(D1) disjoint from D1 and psi^2(D1) inside it."""
    if samples < 1000:
        raise ValueError("need at least 1000 sample points for the margins")
    pts = d1.chart(ball_samples(d1.dim, samples))
    with np.errstate(over="ignore", invalid="ignore"):
        im1 = psi(pts)
        im2 = psi(im1)
    n1 = d1.chart_norm(im1)
    n2 = d1.chart_norm(im2)
    n1 = np.where(np.isfinite(n1), n1, np.inf)   # escaped points are far outside
    disjoint_margin = float(np.min(n1) - 1.0)
    if np.all(np.isfinite(n2)):
        inside_margin = float(1.0 - np.max(n2))
    else:
        inside_margin = -np.inf
    return RenormCheck(disjoint_margin > 0, inside_margin > 0,
                       disjoint_margin, inside_margin)


def _total_degree_exponents(n, degree):
    exps = [e for e in itertools.product(range(degree + 1), repeat=n)
            if sum(e) <= degree]
    exps.sort()
    return exps


def renormalize_nd(psi, xi, degree=8, samples=2048, fit_tol=1e-3):
    """R psi = xi^-1 o psi o psi o xi, refit to total degree <= degree.

    xi is the affine chart of the renormalization disk D1 (a DiskND).  The
    refit is a least-squares polynomial over sampled ball points; its max
    residual is attached to the result as `fit_residual` and must stay
    below fit_tol.
    """
    if not isinstance(xi, DiskND):
        raise DiskError("xi must be a DiskND (affine chart of D1)")
    ball = ball_samples(xi.dim, samples)
    pts = xi.chart(ball)
    with np.errstate(over="ignore", invalid="ignore"):
        im2 = psi(psi(pts))
    if not np.all(np.isfinite(im2)):
        raise RangeError("psi^2 is not finite on the sampled disk")
    target = (im2 - xi.center) @ xi._inv.T
    exps = _total_degree_exponents(xi.dim, degree)
    cols = np.ones((ball.shape[0], len(exps)))
    for j, e in enumerate(exps):
        for ax, p in enumerate(e):
            if p:
                cols[:, j] *= ball[:, ax] ** p
    comps, worst = [], 0.0
    for i in range(xi.dim):
        coef, *_ = np.linalg.lstsq(cols, target[:, i], rcond=None)
        worst = max(worst, float(np.max(np.abs(cols @ coef - target[:, i]))))
        tensor = np.zeros((degree + 1,) * xi.dim)
        for j, e in enumerate(exps):
            tensor[e] = coef[j]
        comps.append(tensor)
    if worst > fit_tol:
        raise RefitError(
            f"refit residual {worst:.3e} exceeds {fit_tol:.1e}", residual=worst)
    out = MapND(comps, family=f"renormalized({psi.family})")
    out.fit_residual = worst
    return out


# ---------------------------------------------------------------------------
# disk searches

@dataclass(frozen=True)
class DiskSearch:
    found: bool
    disk: DiskND | None
    check: RenormCheck
    tried: int


def _batched_margins(psi, centers, linears, samples):
    """Margins for many candidate disks at once."""
    ball = ball_samples(centers.shape[1], samples)
    nc = centers.shape[0]
    pts = np.einsum("cij,sj->csi", linears, ball) + centers[:, None, :]
    flat = pts.reshape(-1, centers.shape[1])
    with np.errstate(over="ignore", invalid="ignore"):
        im1 = psi(flat)
        im2 = psi(im1)
    inv = np.linalg.inv(linears)
    rel1 = np.einsum("cij,csj->csi", inv,
                     im1.reshape(nc, -1, centers.shape[1]) - centers[:, None, :])
    rel2 = np.einsum("cij,csj->csi", inv,
                     im2.reshape(nc, -1, centers.shape[1]) - centers[:, None, :])
    with np.errstate(over="ignore", invalid="ignore"):
        n1 = np.linalg.norm(rel1, axis=2)
        n2 = np.linalg.norm(rel2, axis=2)
    n1 = np.where(np.isfinite(n1), n1, np.inf)
    n2 = np.where(np.isfinite(n2), n2, np.inf)
    return n1.min(axis=1) - 1.0, 1.0 - n2.max(axis=1)


def find_renorm_disk(psi, seed_segment, widths, samples=2048):
    """Search segment-aligned ellipsoidal disks over the given widths.

    Candidates keep their major axis on the seed segment (with a few axis
    inflations and transverse center offsets) and give each width in turn
    to the isotropic transverse semi-axis.  Returns the passing candidate
    of maximal combined margin, or a not-found report with the best
    margins seen.
    """
    p0 = np.asarray(seed_segment[0], dtype=float)
    p1 = np.asarray(seed_segment[1], dtype=float)
    n = p0.size
    axis = p1 - p0
    halflen = np.linalg.norm(axis) / 2
    if halflen <= 0:
        raise ValueError("seed segment is degenerate")
    e1 = axis / (2 * halflen)
    basis = _complete_basis(e1)
    mid = (p0 + p1) / 2
    centers, linears = [], []
    t_offsets = (-1.0, -0.5, 0.0, 0.5, 1.0)             # transverse, units of h
    l_offsets = (-0.3, -0.15, 0.0, 0.15, 0.3)           # along the axis
    for h in widths:
        for infl in (0.7, 0.85, 1.0, 1.15, 1.3):
            cols = np.column_stack([halflen * infl * e1]
                                   + [h * b for b in basis[1:]])
            for off_t in t_offsets:
                for off_l in l_offsets:
                    centers.append(mid + off_t * h * basis[1]
                                   + off_l * halflen * e1)
                    linears.append(cols)
    centers = np.array(centers)
    linears = np.array(linears)
    dj, ins = _batched_margins(psi, centers, linears, max(samples, 1000))
    combined = np.minimum(dj, ins)
    best = int(np.argmax(combined))
    disk = DiskND(centers[best], linears[best])
    check = check_renormalizable(psi, disk, max(samples, 1000))
    return DiskSearch(check.passed, disk if check.passed else None,
                      check, len(centers))


def _complete_basis(e1):
    n = e1.size
    basis = [e1]
    for k in range(n):
        v = np.zeros(n)
        v[k] = 1.0
        for b in basis:
            v = v - (v @ b) * b
        if np.linalg.norm(v) > 1e-8:
            basis.append(v / np.linalg.norm(v))
        if len(basis) == n:
            break
    return basis


def distance_to_standard(psi, phi0, disk, samples=2048):
    """Sup distance between psi and the standard map over a sampled disk.

    A diagnostic with no pass threshold: quantifies how far a (renormalized)
    map sits from the standard graph endomorphism in its own coordinates.
    """
    std = standard_fct_map(psi.dim, phi0)
    pts = disk.chart(ball_samples(disk.dim, samples))
    with np.errstate(over="ignore", invalid="ignore"):
        diff = psi(pts) - std(pts)
    diff = np.where(np.isfinite(diff), diff, np.inf)
    return float(np.max(np.linalg.norm(diff, axis=1)))


def attractor_cloud(psi, start=None, transient=500, n_points=2500):
    """Post-transient orbit sample of psi, for locating its attractor."""
    n = psi.dim
    starts = [start] if start is not None else [
        np.full(n, 0.1), np.full(n, -0.1), np.full(n, 0.3)]
    last_exc = None
    for s in starts:
        try:
            p = iterate(psi, np.asarray(s, dtype=float), transient)
            cloud = np.empty((n_points, n))
            for i in range(n_points):
                p = psi(p)
                if not np.all(np.isfinite(p)) or np.max(np.abs(p)) > ESCAPE_LIMIT:
                    raise EscapeError("orbit escaped while sampling", step=i)
                cloud[i] = p
            return cloud
        except EscapeError as exc:
            last_exc = exc
    raise last_exc


def search_renorm_disk(psi, start=None, samples=512, rounds=2, verify_samples=2048):
    """Unseeded renormalization-disk search.

    Samples the attractor, splits it into the two first-generation parity
    clusters, and scans ellipse parameters (two frames: coordinate-aligned
    and cluster-PCA) around each cluster, refining the grid around the best
    candidate.  Returns a DiskSearch with the best verified disk.
    """
    cloud = attractor_cloud(psi, start=start)
    best = (-np.inf, None, None)
    tried = 0
    for parity in (0, 1):
        sub = cloud[parity::2]
        center0 = sub.mean(axis=0)
        cov = np.cov(sub.T)
        _, vecs = np.linalg.eigh(cov)
        frames = [np.eye(psi.dim), vecs[:, ::-1].T]
        for frame in frames:
            coords = (sub - center0) @ frame.T
            ws = (coords.max(axis=0) - coords.min(axis=0)) / 2
            ws = np.maximum(ws, 0.12 * max(float(np.max(ws)), 1e-3))
            c_grid = [np.linspace(-0.6, 0.6, 5) * ws[i] for i in range(psi.dim)]
            a_grid = [np.linspace(0.6, 2.4, 6) * ws[i] for i in range(psi.dim)]
            spread_c = [g[1] - g[0] for g in c_grid]
            spread_a = [g[1] - g[0] for g in a_grid]
            center_b, axes_b = None, None
            for rnd in range(rounds + 1):
                centers, linears = [], []
                for coff in itertools.product(*c_grid):
                    c = center0 + frame.T @ np.array(coff)
                    for ax in itertools.product(*a_grid):
                        centers.append(c)
                        linears.append(frame.T @ np.diag(ax))
                centers = np.array(centers)
                linears = np.array(linears)
                keep = np.abs(np.linalg.det(linears)) > 1e-12
                centers, linears = centers[keep], linears[keep]
                tried += len(centers)
                dj, ins = _batched_margins(psi, centers, linears, samples)
                combined = np.minimum(dj, ins)
                i = int(np.argmax(combined))
                if combined[i] > best[0]:
                    best = (combined[i], centers[i], linears[i])
                center_b = centers[i] - center0
                axes_b = linears[i]
                # shrink the grids around the round's winner
                cb = frame @ center_b
                ab = np.abs(np.diag(frame @ axes_b))
                c_grid = [cb[k] + np.linspace(-1, 1, 5) * spread_c[k] / (3 ** (rnd + 1))
                          for k in range(psi.dim)]
                a_grid = [np.maximum(ab[k] + np.linspace(-1, 1, 5)
                                     * spread_a[k] / (3 ** (rnd + 1)), 1e-4)
                          for k in range(psi.dim)]
    if best[1] is None:
        raise RangeError("disk search found no candidates")
    disk = DiskND(best[1], best[2])
    check = check_renormalizable(psi, disk, verify_samples)
    return DiskSearch(check.passed, disk if check.passed else None, check, tried)
