"""Nested atoms of the Cantor attractor at the doubling accumulation.

At the accumulation parameter the orbit of the critical region visits 2^m
well-separated clusters at stage m, cyclically permuted by the map, and the
clusters nest two-into-one down the generations.  The atoms here are those
orbit clusters (indexed by iterate mod 2^m) with axis-aligned bounding
boxes; the per-generation maximum diameter shrinks at an asymptotic rate
that approaches the universal spatial constant 0.3995... from the 1-D
fixed point.

Atoms are realized from a single long orbit rather than from images of the
renormalization disks: that works unchanged for any family and directly
witnesses the attractor.  The disk-chain view stays available through
renorm_nd for the standard map.
"""

from dataclasses import dataclass

import numpy as np

from .cascade import (_is_1d, _continue_orbit, _orbit_by_iteration,
                      orbit_multiplier, run_cascade)
from .errors import EscapeError, InsufficientDataError, ResolutionError

MAX_GENERATIONS = 12
ESCAPE_LIMIT = 1e10


@dataclass(frozen=True)
class Atom:
    generation: int
    index: int          # orbit phase k: the map sends atom k to atom k+1 mod 2^m
    lo: np.ndarray
    hi: np.ndarray
    count: int

    @property
    def center(self):
        return (self.lo + self.hi) / 2

    @property
    def diameter(self):
        return float(np.linalg.norm(self.hi - self.lo))

    def contains(self, other):
        return bool(np.all(other.lo >= self.lo - 1e-12)
                    and np.all(other.hi <= self.hi + 1e-12))


@dataclass(frozen=True)
class AtomTree:
    generations: tuple       # generations[m] is a tuple of 2^m Atoms
    points: np.ndarray       # the sampled orbit, shape (n_points, dim)

    def atoms(self, m):
        return self.generations[m]


def _boxes_disjoint(a, b):
    return bool(np.any(a.hi < b.lo) or np.any(b.hi < a.lo))


def build_atoms(fam, t, generations, n_points, transient=4096):
    """Cluster a long critical orbit into the nested atom hierarchy.

    Generation m holds the 2^m clusters of orbit points indexed by iterate
    mod 2^m.  Raises ResolutionError if any two same-generation bounding
    boxes overlap (more points, or a parameter closer to the accumulation,
    resolves that).
    """
    if generations < 1 or generations > MAX_GENERATIONS:
        raise ValueError(f"generations must be in [1, {MAX_GENERATIONS}]")
    if n_points < 2 ** (generations + 6):
        raise ValueError(
            f"need n_points >= 2^(generations+6) = {2 ** (generations + 6)}")
    m = fam.map_at(t)
    x = fam.start_at(t)
    one_d = _is_1d(fam)
    for i in range(transient):
        x = m(x)
        big = abs(x) if one_d else max(abs(v) for v in x)
        if big > ESCAPE_LIMIT:
            raise EscapeError(f"orbit escaped in transient at step {i}", step=i)
    dim = 1 if one_d else fam.dim
    pts = np.empty((n_points, dim))
    for i in range(n_points):
        x = m(x)
        pts[i] = x
    if not np.all(np.isfinite(pts)):
        raise EscapeError("orbit escaped while sampling atoms")

    levels = []
    for gen in range(generations + 1):
        k = 2 ** gen
        atoms = []
        for phase in range(k):
            cluster = pts[phase::k]
            atoms.append(Atom(gen, phase, cluster.min(axis=0),
                              cluster.max(axis=0), cluster.shape[0]))
        for i in range(k):
            for j in range(i + 1, k):
                if not _boxes_disjoint(atoms[i], atoms[j]):
                    raise ResolutionError(
                        f"generation {gen}: atoms {i} and {j} overlap; "
                        "use more points or a parameter closer to the accumulation")
        levels.append(tuple(atoms))
    return AtomTree(tuple(levels), pts)


def atom_diameters(tree):
    """Per-generation maximum atom diameter d_m."""
    return [max(a.diameter for a in gen) for gen in tree.generations]


def scaling_ratios(diameters):
    """Consecutive ratios d_(m+1)/d_m; the last one estimates the universal
    spatial constant."""
    if len(diameters) < 3:
        raise InsufficientDataError("need at least 3 generations of diameters")
    ratios = [diameters[i + 1] / diameters[i] for i in range(len(diameters) - 1)]
    return ratios, ratios[-1]


@dataclass(frozen=True)
class SaddleReport:
    level: int
    found: bool
    classification: str      # 'sink' | 'saddle' | 'repeller' | 'not-found'
    multipliers: tuple
    orbit: tuple


def _classify(mults, one_d):
    mags = [abs(m) for m in mults]
    if one_d:
        return "repeller" if mags[0] > 1 else "sink"
    if all(v < 1 for v in mags):
        return "sink"
    if all(v > 1 for v in mags):
        return "repeller"
    return "saddle"


def verify_periodic_saddles(fam, t, levels, cascade_result=None):
    """Locate the period-2^N orbits at parameter t and classify them.

    Each orbit is found at the midpoint of its stability window (where it
    is the attractor) and then continued in the parameter to t, where it
    generically survives as a repeller (1-D) or saddle (n-D).
    """
    levels = sorted(levels)
    if cascade_result is None:
        cascade_result = run_cascade(fam, max(levels) + 1)
    ts = cascade_result.params
    reports = []
    one_d = _is_1d(fam)
    for lv in levels:
        period = 2 ** lv
        try:
            if lv == 0:
                window = (fam.bracket0[0], ts[0])
            else:
                window = (ts[lv - 1], ts[lv])
            t_mid = 0.5 * (window[0] + window[1])
            orbit = _orbit_by_iteration(fam, t_mid, period)
            orbit = _continue_orbit(fam, t_mid, t, period, orbit)
            mults = orbit_multiplier(fam, t, orbit)
            reports.append(SaddleReport(lv, True, _classify(mults, one_d),
                                        tuple(mults), tuple(orbit)))
        except Exception:
            reports.append(SaddleReport(lv, False, "not-found", (), ()))
    return reports
