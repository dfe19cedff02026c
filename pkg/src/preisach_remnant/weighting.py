"""Weighting densities over the relay plane and the sector-bound constants.

Two representations are supported: a cell-centered piecewise-constant grid
(integrated exactly against staircase regions) and a sum of signed Gaussian
components, each truncated to its own rectangle (integrated in closed form
via erf).  Sector bounds are the extrema of one-dimensional cumulative
integrals of the density, scanned over the quadrant alpha >= 0 >= beta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConfigurationError,
    DegenerateBoundsError,
    EmptyIntersectionError,
)
from .interface import Box, MemoryInterface, PlanePoint

_SQRT2 = math.sqrt(2.0)
_SQRT_HALF_PI = math.sqrt(math.pi / 2.0)


def _gauss_segment(center: float, sigma: float, lo: float, hi: float) -> float:
    """Integral of exp(-(x-center)^2 / (2 sigma^2)) over [lo, hi]."""
    if hi <= lo:
        return 0.0
    z0 = (lo - center) / (sigma * _SQRT2)
    z1 = (hi - center) / (sigma * _SQRT2)
    return sigma * _SQRT_HALF_PI * (math.erf(z1) - math.erf(z0))


class GridWeighting:
    """Piecewise-constant density on a uniform lattice over its support box.

    ``values[j, i]`` is the cell value at beta row j (ascending) and alpha
    column i (ascending), matching the CSV layout.
    """

    kind = "grid"

    def __init__(self, box: Box, values):
        values = np.asarray(values, dtype=float)
        if values.ndim != 2 or values.size == 0:
            raise ConfigurationError("grid values must be a non-empty 2-D array")
        if not np.all(np.isfinite(values)):
            raise ConfigurationError("grid values must be finite")
        self.support_box = box
        self.values = values
        self.n_beta, self.n_alpha = values.shape
        self.alpha_edges = np.linspace(box.alpha_lo, box.alpha_hi, self.n_alpha + 1)
        self.beta_edges = np.linspace(box.beta_lo, box.beta_hi, self.n_beta + 1)

    def eval(self, alpha: float, beta: float) -> float:
        b = self.support_box
        if not (b.alpha_lo <= alpha <= b.alpha_hi and b.beta_lo <= beta <= b.beta_hi):
            return 0.0
        i = min(int(np.searchsorted(self.alpha_edges, alpha, side="right")) - 1, self.n_alpha - 1)
        j = min(int(np.searchsorted(self.beta_edges, beta, side="right")) - 1, self.n_beta - 1)
        i, j = max(i, 0), max(j, 0)
        return float(self.values[j, i])

    def _overlap(self, edges, lo, hi):
        return np.clip(np.minimum(edges[1:], hi) - np.maximum(edges[:-1], lo), 0.0, None)

    def integrate_rect(self, a_lo, a_hi, b_lo, b_hi) -> float:
        la = self._overlap(self.alpha_edges, a_lo, a_hi)
        lb = self._overlap(self.beta_edges, b_lo, b_hi)
        return float(lb @ (self.values @ la))

    def line_integral_beta(self, alpha, b_lo, b_hi) -> float:
        """Integral of mu(alpha, .) over [b_lo, b_hi]."""
        b = self.support_box
        if not (b.alpha_lo <= alpha <= b.alpha_hi):
            return 0.0
        i = min(int(np.searchsorted(self.alpha_edges, alpha, side="right")) - 1, self.n_alpha - 1)
        i = max(i, 0)
        lb = self._overlap(self.beta_edges, b_lo, b_hi)
        return float(lb @ self.values[:, i])

    def line_integral_alpha(self, beta, a_lo, a_hi) -> float:
        """Integral of mu(., beta) over [a_lo, a_hi]."""
        b = self.support_box
        if not (b.beta_lo <= beta <= b.beta_hi):
            return 0.0
        j = min(int(np.searchsorted(self.beta_edges, beta, side="right")) - 1, self.n_beta - 1)
        j = max(j, 0)
        la = self._overlap(self.alpha_edges, a_lo, a_hi)
        return float(la @ self.values[j, :])

    def total_mass(self) -> float:
        b = self.support_box
        return self.integrate_rect(b.alpha_lo, b.alpha_hi, b.beta_lo, b.beta_hi)

    def abs_mass(self) -> float:
        da = np.diff(self.alpha_edges)
        db = np.diff(self.beta_edges)
        return float(db @ (np.abs(self.values) @ da))

    # -- CSV interchange ----------------------------------------------------

    def save_csv(self, path):
        b = self.support_box
        with open(path, "w") as fh:
            fh.write(
                "%r,%r,%r,%r,%d,%d\n"
                % (b.alpha_lo, b.alpha_hi, b.beta_lo, b.beta_hi, self.n_alpha, self.n_beta)
            )
            for row in self.values:
                fh.write(",".join(repr(float(x)) for x in row) + "\n")

    @classmethod
    def load_csv(cls, path) -> "GridWeighting":
        with open(path) as fh:
            head = fh.readline().strip().split(",")
            if len(head) != 6:
                raise ConfigurationError("bad grid CSV header in %s" % path)
            a_lo, a_hi, b_lo, b_hi = map(float, head[:4])
            n_alpha, n_beta = int(head[4]), int(head[5])
            rows = []
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                vals = [float(x) for x in line.split(",")]
                if len(vals) != n_alpha:
                    raise ConfigurationError("bad grid CSV row length in %s" % path)
                rows.append(vals)
        if len(rows) != n_beta:
            raise ConfigurationError("bad grid CSV row count in %s" % path)
        return cls(Box(a_lo, a_hi, b_lo, b_hi), np.array(rows))


@dataclass(frozen=True)
class GaussianComponent:
    """One signed Gaussian lobe truncated to its own rectangle."""

    amplitude: float
    center_alpha: float
    center_beta: float
    sigma_alpha: float
    sigma_beta: float
    box: Box

    def eval(self, alpha, beta):
        b = self.box
        if not (b.alpha_lo <= alpha <= b.alpha_hi and b.beta_lo <= beta <= b.beta_hi):
            return 0.0
        za = (alpha - self.center_alpha) / self.sigma_alpha
        zb = (beta - self.center_beta) / self.sigma_beta
        return self.amplitude * math.exp(-0.5 * (za * za + zb * zb))


class GaussianWeighting:
    """Signed sum of truncated Gaussian lobes."""

    kind = "analytic"

    def __init__(self, components, support_box: Box = None):
        if not components:
            raise ConfigurationError("need at least one component")
        self.components = tuple(components)
        if support_box is None:
            support_box = Box(
                min(c.box.alpha_lo for c in components),
                max(c.box.alpha_hi for c in components),
                min(c.box.beta_lo for c in components),
                max(c.box.beta_hi for c in components),
            )
        for c in components:
            if not support_box.contains(c.box):
                raise ConfigurationError("component box escapes the support box")
        self.support_box = support_box

    def eval(self, alpha, beta) -> float:
        return sum(c.eval(alpha, beta) for c in self.components)

    def integrate_rect(self, a_lo, a_hi, b_lo, b_hi) -> float:
        total = 0.0
        for c in self.components:
            ga = _gauss_segment(
                c.center_alpha, c.sigma_alpha, max(a_lo, c.box.alpha_lo), min(a_hi, c.box.alpha_hi)
            )
            gb = _gauss_segment(
                c.center_beta, c.sigma_beta, max(b_lo, c.box.beta_lo), min(b_hi, c.box.beta_hi)
            )
            total += c.amplitude * ga * gb
        return total

    def line_integral_beta(self, alpha, b_lo, b_hi) -> float:
        total = 0.0
        for c in self.components:
            if not (c.box.alpha_lo <= alpha <= c.box.alpha_hi):
                continue
            za = (alpha - c.center_alpha) / c.sigma_alpha
            gb = _gauss_segment(
                c.center_beta, c.sigma_beta, max(b_lo, c.box.beta_lo), min(b_hi, c.box.beta_hi)
            )
            total += c.amplitude * math.exp(-0.5 * za * za) * gb
        return total

    def line_integral_alpha(self, beta, a_lo, a_hi) -> float:
        total = 0.0
        for c in self.components:
            if not (c.box.beta_lo <= beta <= c.box.beta_hi):
                continue
            zb = (beta - c.center_beta) / c.sigma_beta
            ga = _gauss_segment(
                c.center_alpha, c.sigma_alpha, max(a_lo, c.box.alpha_lo), min(a_hi, c.box.alpha_hi)
            )
            total += c.amplitude * math.exp(-0.5 * zb * zb) * ga
        return total

    def total_mass(self) -> float:
        b = self.support_box
        return self.integrate_rect(b.alpha_lo, b.alpha_hi, b.beta_lo, b.beta_hi)

    def abs_mass(self) -> float:
        # components with disjoint boxes make this exact; overlapping boxes
        # give an upper bound, which is the safe direction for tolerances
        total = 0.0
        for c in self.components:
            ga = _gauss_segment(c.center_alpha, c.sigma_alpha, c.box.alpha_lo, c.box.alpha_hi)
            gb = _gauss_segment(c.center_beta, c.sigma_beta, c.box.beta_lo, c.box.beta_hi)
            total += abs(c.amplitude) * ga * gb
        return total


def eval_mu(mu, p: PlanePoint) -> float:
    return mu.eval(p.alpha, p.beta)


def integrate_staircase_region(mu, iface: MemoryInterface, side: str) -> float:
    """Integral of mu over the region below or above the memory curve."""
    if not iface.support_box.contains(mu.support_box):
        raise ConfigurationError(
            "interface support box does not contain the weighting support"
        )
    below = sum(
        mu.integrate_rect(*rect) for rect in iface.below_rectangles(mu.support_box)
    )
    if side == "below":
        return below
    if side == "above":
        return mu.total_mass() - below
    raise ConfigurationError("side must be 'below' or 'above'")


def evaluate_output(mu, iface: MemoryInterface) -> float:
    """Relay-field output: mass below the curve minus mass above it."""
    below = integrate_staircase_region(mu, iface, "below")
    return 2.0 * below - mu.total_mass()


@dataclass(frozen=True)
class QRegion:
    """Box [0, alpha2] x [beta2, 0] on which the density is sign-definite."""

    alpha2: float
    beta2: float

    def __post_init__(self):
        if not (self.alpha2 > 0.0 and self.beta2 < 0.0):
            raise ConfigurationError("need alpha2 > 0 and beta2 < 0")

    def check_nonnegative(self, mu, samples: int = 100) -> None:
        """Reject densities that dip below zero anywhere on a sample lattice."""
        alphas = np.linspace(0.0, self.alpha2, samples)
        betas = np.linspace(self.beta2, 0.0, samples)
        for a in alphas:
            for b in betas:
                if mu.eval(float(a), float(b)) < 0.0:
                    raise ConfigurationError(
                        "weighting is negative on Q at (%g, %g)" % (a, b)
                    )


@dataclass(frozen=True)
class SectorBounds:
    """Extremal secant slopes of the remnant with respect to pulse amplitude."""

    gamma1_plus: float
    gamma2_plus: float
    gamma1_minus: float
    gamma2_minus: float
    gamma2_plus_q: float
    gamma1_minus_q: float
    gamma1_plus_q: float = 0.0
    gamma2_minus_q: float = 0.0

    def to_dict(self) -> dict:
        return {
            "gamma1_plus": self.gamma1_plus,
            "gamma2_plus": self.gamma2_plus,
            "gamma1_minus": self.gamma1_minus,
            "gamma2_minus": self.gamma2_minus,
            "gamma2_plus_q": self.gamma2_plus_q,
            "gamma1_minus_q": self.gamma1_minus_q,
            "gamma1_plus_q": self.gamma1_plus_q,
            "gamma2_minus_q": self.gamma2_minus_q,
        }


def _beta_cumulative_extrema(mu, a_lo, a_hi, b_lo, resolution):
    """Extrema of F(alpha, b1) = int_{b1}^{0} mu(alpha, .) over the scan box."""
    if isinstance(mu, GridWeighting):
        # cell centers in alpha and cell edges in b1 hit every extremum exactly
        alphas = 0.5 * (mu.alpha_edges[:-1] + mu.alpha_edges[1:])
        alphas = alphas[(mu.alpha_edges[1:] > a_lo) & (mu.alpha_edges[:-1] < a_hi)]
        b1s = np.unique(np.clip(mu.beta_edges, b_lo, 0.0))
    else:
        alphas = np.linspace(a_lo, a_hi, resolution)
        b1s = np.linspace(b_lo, 0.0, resolution)
    if b_lo not in b1s:
        b1s = np.append(b1s, b_lo)
    if 0.0 not in b1s:
        b1s = np.append(b1s, 0.0)
    if len(alphas) == 0:
        return 0.0, 0.0
    lo, hi = math.inf, -math.inf
    for a in alphas:
        for b1 in b1s:
            val = mu.line_integral_beta(float(a), float(b1), 0.0)
            lo, hi = min(lo, val), max(hi, val)
    return lo, hi


def _alpha_cumulative_extrema(mu, b_lo, b_hi, a_hi, resolution):
    """Extrema of G(a1, beta) = int_{0}^{a1} mu(., beta) over the scan box."""
    if isinstance(mu, GridWeighting):
        betas = 0.5 * (mu.beta_edges[:-1] + mu.beta_edges[1:])
        betas = betas[(mu.beta_edges[1:] > b_lo) & (mu.beta_edges[:-1] < b_hi)]
        a1s = np.unique(np.clip(mu.alpha_edges, 0.0, a_hi))
    else:
        betas = np.linspace(b_lo, b_hi, resolution)
        a1s = np.linspace(0.0, a_hi, resolution)
    if a_hi not in a1s:
        a1s = np.append(a1s, a_hi)
    if 0.0 not in a1s:
        a1s = np.append(a1s, 0.0)
    if len(betas) == 0:
        return 0.0, 0.0
    lo, hi = math.inf, -math.inf
    for b in betas:
        for a1 in a1s:
            val = mu.line_integral_alpha(float(b), 0.0, float(a1))
            lo, hi = min(lo, val), max(hi, val)
    return lo, hi


def sector_bounds(mu, q: QRegion, resolution: int = 512) -> SectorBounds:
    """Sector-bound constants for the remnant response of ``mu``.

    The general bounds scan the whole support inside the quadrant
    alpha >= 0 >= beta; the Q-restricted variants scan only Q.  Grid fields
    are resolved exactly at their own lattice; the resolution controls the
    scan density for analytic fields.
    """
    box = mu.support_box
    if box.alpha_hi < 0.0 or box.beta_lo > 0.0:
        raise EmptyIntersectionError("weighting support misses the quadrant")
    a_lo = max(0.0, box.alpha_lo)
    a_hi = box.alpha_hi
    b_lo = min(0.0, box.beta_lo)

    f_lo, f_hi = _beta_cumulative_extrema(mu, a_lo, a_hi, b_lo, resolution)
    g_lo, g_hi = _alpha_cumulative_extrema(mu, b_lo, min(0.0, box.beta_hi), a_hi, resolution)

    qa_hi = min(q.alpha2, a_hi)
    qb_lo = max(q.beta2, b_lo)
    fq_lo, fq_hi = _beta_cumulative_extrema(mu, a_lo, qa_hi, qb_lo, resolution)
    gq_lo, gq_hi = _alpha_cumulative_extrema(mu, qb_lo, 0.0, qa_hi, resolution)

    return SectorBounds(
        gamma1_plus=2.0 * f_lo,
        gamma2_plus=2.0 * f_hi,
        gamma1_minus=2.0 * g_hi,
        gamma2_minus=2.0 * g_lo,
        gamma2_plus_q=2.0 * fq_hi,
        gamma1_minus_q=2.0 * gq_hi,
        gamma1_plus_q=2.0 * fq_lo,
        gamma2_minus_q=2.0 * gq_lo,
    )


@dataclass(frozen=True)
class ButterflyParams:
    """Synthetic butterfly density: one positive lobe inside Q plus negative
    lobes outside it, all scaled by a common coordinate factor."""

    scale: float = 1.0
    positive_amplitude: float = 3.0
    negative_amplitude: float = 1.2
    q_alpha2: float = 1.0
    q_beta2: float = -1.0


def make_butterfly(params: ButterflyParams = ButterflyParams()):
    """Build the butterfly preset and its Q region.

    Returns (field, q_region).  Rejects parameter sets whose negative lobes
    intrude into Q.
    """
    s = params.scale
    if s <= 0:
        raise ConfigurationError("scale must be positive")
    q = QRegion(params.q_alpha2 * s, params.q_beta2 * s)
    q_box = Box(0.0, q.alpha2, q.beta2, 0.0)
    # wide in alpha, narrow in beta: keeps the per-pulse slope inside a
    # narrow band relative to the gain cap, so admissible gains converge
    # monotonically without dead-zone stalls
    pos = GaussianComponent(
        amplitude=params.positive_amplitude,
        center_alpha=0.55 * s,
        center_beta=-0.5 * s,
        sigma_alpha=0.8 * s,
        sigma_beta=0.18 * s,
        box=q_box,
    )
    neg_low = GaussianComponent(
        amplitude=-params.negative_amplitude,
        center_alpha=-0.3 * s,
        center_beta=-0.87 * s,
        sigma_alpha=0.15 * s,
        sigma_beta=0.1 * s,
        box=Box(-0.7 * s, -0.05 * s, -1.0 * s, -0.75 * s),
    )
    neg_high = GaussianComponent(
        amplitude=-params.negative_amplitude,
        center_alpha=0.8 * s,
        center_beta=0.25 * s,
        sigma_alpha=0.12 * s,
        sigma_beta=0.12 * s,
        box=Box(0.55 * s, 1.0 * s, 0.05 * s, 0.5 * s),
    )
    for lobe in (neg_low, neg_high):
        overlaps_q = (
            lobe.box.alpha_hi > 0.0
            and lobe.box.alpha_lo < q.alpha2
            and lobe.box.beta_hi > q.beta2
            and lobe.box.beta_lo < 0.0
        )
        if overlaps_q:
            raise ConfigurationError("negative lobe intrudes into Q")
    field = GaussianWeighting(
        [pos, neg_low, neg_high],
        support_box=Box(-0.7 * s, 1.0 * s, -1.0 * s, 0.5 * s),
    )
    q.check_nonnegative(field)
    return field, q


def uniform_field(q: QRegion = QRegion(1.0, -1.0), value: float = 1.0) -> GridWeighting:
    """Constant density on the Q box (single exact cell)."""
    return GridWeighting(Box(0.0, q.alpha2, q.beta2, 0.0), [[value]])
