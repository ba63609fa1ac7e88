"""Numerical persistence charts for the doubling-accumulation phenomenon.

"Exhibits the attractor" is replaced by its finite, checkable surrogate:
the family reaches its depth-N doubling accumulation at some parameter.
The function a(family) returns that parameter; b(chi) = a of the linear
family through chi in a fixed transversal direction v0.  b vanishes
exactly on the local codimension-one manifold surrogate, b(psi0) = 0 at
the base point, the shift law a(shifted by t0) = a - t0 holds to solver
precision, and the directional derivative of b along v0 is -1.

b is computed through cascades, not through renormalization distance to
the 1-D fixed point, so the same chart machinery works for families far
from the standard map (Henon included).
"""

from dataclasses import dataclass

import numpy as np

from .cascade import linear_family, recenter, run_cascade, shift_family
from .errors import InsufficientDataError


def persistence_a(fam, depth):
    """The parameter where the family attains its depth-limited doubling
    accumulation, in the family's own coordinate."""
    if depth < 4:
        raise InsufficientDataError("depth must be >= 4 for the extrapolation")
    return run_cascade(fam, depth).t_inf


def verify_shift_property(fam, t0_list, depth):
    """max over t0 of |a((t0)*family) - (a(family) - t0)|."""
    base = persistence_a(fam, depth)
    worst = 0.0
    for t0 in t0_list:
        shifted = persistence_a(shift_family(fam, t0), depth)
        worst = max(worst, abs(shifted - (base - t0)))
    return worst


@dataclass(frozen=True)
class PersistenceChart:
    """Chart data for b around a base map psi0 with transversal v0.

    depth is the doubling depth standing in for "infinitely renormalizable";
    bracket0/gap_hint/start_at configure the cascades of the linear
    families {chi + t v0}, inherited from the generating family recentered
    at its accumulation.
    """
    psi0: object
    v0: object
    depth: int
    a_tolerance: float
    bracket0: tuple
    gap_hint: float
    start_at: object
    dim: int = 1
    kind: str = "chart"

    def family_through(self, chi):
        return linear_family(chi, self.v0, self.bracket0, self.gap_hint,
                             self.start_at, dim=self.dim,
                             kind=f"{self.kind}-linear")


def build_chart(fam, depth, a_tolerance=1e-5):
    """Chart at the family's accumulation map, direction = d psi_t / dt.

    Recenters the family so parameter 0 is the accumulation; by
    construction b(psi0) = 0 up to cascade precision.
    """
    if depth < 6:
        raise InsufficientDataError("chart depth must be >= 6")
    t_inf = persistence_a(fam, depth)
    centered = recenter(fam, t_inf)
    return PersistenceChart(
        psi0=fam.map_at(t_inf),
        v0=fam.deriv_at(t_inf),
        depth=depth,
        a_tolerance=a_tolerance,
        bracket0=centered.bracket0,
        gap_hint=fam.gap_hint,
        start_at=centered.start_at,
        dim=fam.dim,
        kind=f"chart({fam.kind})",
    )


def manifold_chart_b(psi0, v0, chi, depth, *, bracket0, gap_hint, start_at,
                     dim=1):
    """b(chi) = accumulation parameter of the linear family {chi + t v0}.

    b(chi) = 0 is the numerical membership test for the local
    codimension-one manifold through psi0.
    """
    fam = linear_family(chi, v0, bracket0, gap_hint, start_at, dim=dim)
    return persistence_a(fam, depth)


def chart_b(chart, chi):
    """b(chi) using the chart's stored cascade configuration."""
    return persistence_a(chart.family_through(chi), chart.depth)


def chart_gradient(chart, probe_dirs, h=1e-3):
    """Central-difference directional derivatives of b at the base map.

    Along v0 the value is -1 (the transversal normalization); a zero probe
    gives exactly 0.  Returns one derivative per probe direction.
    """
    out = []
    for w in probe_dirs:
        plus = chart_b(chart, chart.psi0 + h * w)
        minus = chart_b(chart, chart.psi0 + (-h) * w)
        out.append((plus - minus) / (2 * h))
    return out


def chart_validity_radius(chart, h_values=(1e-3, 1e-2, 0.05, 0.1, 0.2),
                          tol=0.05):
    """Largest probe size at which db/dv0 stays within tol of -1.

    The chart is only locally valid; this reports the empirically usable
    radius instead of deriving one.
    """
    largest = 0.0
    for h in sorted(h_values):
        try:
            grad = chart_gradient(chart, [chart.v0], h=h)[0]
        except Exception:
            break
        if abs(grad + 1.0) > tol:
            break
        largest = h
    return largest
