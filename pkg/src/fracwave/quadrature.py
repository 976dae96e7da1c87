"""Small quadrature helpers shared by the evaluation modules."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=64)
def _leggauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(a: float, b: float, n: int):
    """n-point Gauss-Legendre nodes and weights on [a, b]."""
    x, w = _leggauss(n)
    h = 0.5 * (b - a)
    return a + h * (x + 1.0), h * w


def gauss_legendre_panels(edges, n: int):
    """Composite Gauss-Legendre rule with ``n`` nodes on each panel between ``edges``."""
    edges = np.asarray(edges, dtype=float)
    x, w = _leggauss(n)
    a, b = edges[:-1, None], edges[1:, None]
    h = 0.5 * (b - a)
    nodes = (a + h * (x + 1.0)).ravel()
    weights = (h * w).ravel()
    return nodes, weights


def graded_edges(center: float, width: float, lo: float, hi: float, coarse: float):
    """Panel edges on [lo, hi] refined geometrically towards ``center``.

    Panels next to ``center`` have size ``width``; sizes double outwards until
    they reach ``coarse``.
    """
    def one_side(sign, limit):
        pts = []
        pos, step = center, width
        while (limit - pos) * sign > 0:
            pos = pos + sign * step
            pts.append(pos)
            step = min(2 * step, coarse)
        pts[-1] = limit
        return pts

    if hi <= lo:
        raise ValueError("empty interval")
    if center <= lo or center >= hi:
        n = max(1, int(np.ceil((hi - lo) / coarse)))
        return np.linspace(lo, hi, n + 1)
    left = one_side(-1, lo)[::-1]
    right = one_side(1, hi)
    edges = np.array(left + [center] + right)
    # drop slivers produced by clipping at the ends
    keep = np.concatenate([[True], np.diff(edges) > 1e-12 * max(1.0, abs(hi - lo))])
    return edges[keep]


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts and truncation bounds for the Mellin, sphere and Bromwich rules."""

    mellin_nodes: int = 16            # Gauss nodes per log-panel of a Mellin convolution
    mellin_panel: float = 0.5         # coarse log-panel width
    sphere_nodes_phi: int = 256       # trapezoid nodes in azimuth
    sphere_panel: float = 1.0         # coarse log-panel width in the polar variable
    sphere_nodes: int = 8             # Gauss nodes per polar panel
    xi_tail: float = 1e-16            # Mellin weight is dropped where it falls below this
    far_radius: float = 1e4           # outer Mellin cut-off for the anisotropic path
    contour_nodes: int = 400          # trapezoid nodes on Hankel contours

    def __post_init__(self):
        for name in ("mellin_nodes", "sphere_nodes_phi", "sphere_nodes", "contour_nodes"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.sphere_nodes_phi % 2:
            raise ValueError("sphere_nodes_phi must be even (antipodal pairing)")
        if not (self.mellin_panel > 0 and self.sphere_panel > 0 and 0 < self.xi_tail < 1e-6):
            raise ValueError("invalid panel widths or tail tolerance")

    def refined(self, factor: int = 2) -> "QuadratureSpec":
        return QuadratureSpec(
            mellin_nodes=self.mellin_nodes * factor,
            mellin_panel=self.mellin_panel,
            sphere_nodes_phi=self.sphere_nodes_phi * factor,
            sphere_panel=self.sphere_panel,
            sphere_nodes=self.sphere_nodes * factor,
            xi_tail=self.xi_tail,
            far_radius=self.far_radius,
            contour_nodes=self.contour_nodes * factor,
        )


DEFAULT_QUAD = QuadratureSpec()
