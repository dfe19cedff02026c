"""Triangular pulse trains and the recursive remnant set-point controller.

A pulse of amplitude w is a rate-independent excursion 0 -> w -> 0, so its
effect on the memory curve depends only on w.  The controller updates the
amplitude by w_{k+1} = w_k - lambda * e_k (sign flipped when the density is
negative on Q) and contracts the remnant error whenever the gain stays
below twice the inverse of the worst sector slope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AdmissibilityError,
    ConfigurationError,
    DegenerateBoundsError,
)
from .interface import Box, MemoryInterface, VERTEX_MERGE_TOL
from .weighting import QRegion, SectorBounds, evaluate_output, sector_bounds


def pulse_value(k: int, t: float, tau: float) -> float:
    """Unit triangular pulse: up on [k*tau, (k+1/2)*tau], down to (k+1)*tau."""
    t0 = k * tau
    if t < t0 or t > t0 + tau:
        return 0.0
    half = t0 + 0.5 * tau
    if t <= half:
        return 2.0 * (t - t0) / tau
    return 2.0 * (t0 + tau - t) / tau


def render_signal(amplitudes, tau: float, sample_step: float):
    """Dense samples of the modulated pulse train.

    Returns (t, u) arrays covering [0, n*tau]; boundary samples are exactly
    zero when sample_step divides tau/2.
    """
    n = len(amplitudes)
    n_samples = int(round(n * tau / sample_step))
    t = np.arange(n_samples + 1) * sample_step
    u = np.zeros_like(t)
    for i, ti in enumerate(t):
        k = min(int(ti / tau), n - 1) if n else 0
        if n:
            u[i] = amplitudes[k] * pulse_value(k, float(ti), tau)
    return t, u


def _require_zero_crossing(iface: MemoryInterface):
    tol = 1e-9 * max(1.0, abs(iface.support_box.alpha_hi), abs(iface.support_box.beta_lo))
    if abs(iface.current_value) > tol:
        raise AdmissibilityError(
            "interface must pass through the diagonal at zero input"
        )


def apply_pulse(iface: MemoryInterface, w: float) -> MemoryInterface:
    """Memory state after one triangular pulse of amplitude w."""
    _require_zero_crossing(iface)
    if w == 0.0:
        return iface
    return iface.push_extremum(w).push_extremum(0.0)


def remnant(mu, iface: MemoryInterface, w: float):
    """Remnant after a pulse of amplitude w; returns (value, new interface)."""
    new = apply_pulse(iface, w)
    return evaluate_output(mu, new), new


def last_input_extrema(iface: MemoryInterface):
    """(M, m): alpha of the last input maximum and beta of the last minimum."""
    _require_zero_crossing(iface)
    return iface.ell_alpha(0.0, "max"), iface.ell_beta(0.0, "min")


def delta_remnant_explicit(mu, iface_next: MemoryInterface, w_next: float) -> float:
    """Predicted remnant change of the next pulse without applying it.

    Positive amplitudes above the last maximum switch the band between the
    curve and beta = 0; negative amplitudes below the last minimum switch the
    band between alpha = 0 and the curve; anything in between is a dead zone.
    """
    M, m = last_input_extrema(iface_next)
    box = mu.support_box
    if w_next > M:
        total = 0.0
        for lo, hi, level in iface_next.steps():
            a_lo = max(lo, M)
            a_hi = min(hi, w_next)
            if a_hi <= a_lo:
                continue
            b_lo = max(level if level > -math.inf else box.beta_lo, box.beta_lo)
            total += mu.integrate_rect(a_lo, a_hi, b_lo, 0.0)
        return 2.0 * total
    if w_next < m:
        total = 0.0
        corners = iface_next.corners
        # right edge of the switched band as a step function of beta:
        # for beta in (b_{i+1}, b_i] the curve's inner alpha is a_i
        b_prev = corners[0][1]
        for i in range(len(corners)):
            a_i = corners[i][0]
            b_next_corner = corners[i + 1][1] if i + 1 < len(corners) else -math.inf
            hi = min(b_prev, m)
            lo = max(b_next_corner, w_next, box.beta_lo)
            if hi > lo and a_i > 0.0:
                total += mu.integrate_rect(0.0, a_i, lo, hi)
            b_prev = b_next_corner
        return -2.0 * total
    return 0.0


def validate_initial_interface(iface: MemoryInterface, q: QRegion) -> bool:
    """True when no curve point enters the strips that would let bounded
    pulses reach relays outside Q."""
    a2, b2 = q.alpha2, q.beta2
    tol = 1e-9 * max(1.0, abs(a2), abs(b2))
    for (x1, y1), (x2, y2) in zip(iface.corners, iface.corners[1:]):
        a_lo, a_hi = min(x1, x2), max(x1, x2)
        b_lo, b_hi = min(y1, y2), max(y1, y2)
        # strip 1: alpha > alpha2, beta2 < beta <= 0
        if a_hi > a2 + tol and b_hi > b2 + tol and b_lo <= tol:
            return False
        # strip 2: beta < beta2, 0 <= alpha < alpha2
        if b_lo < b2 - tol and a_lo < a2 - tol and a_hi >= -tol:
            return False
    if len(iface.corners) == 1:
        a, b = iface.corners[0]
        if a > a2 + tol and b2 - tol < b <= tol:
            return False
        if b < b2 - tol and -tol <= a < a2 - tol:
            return False
    return True


def repair_initial_interface(iface: MemoryInterface, q: QRegion) -> MemoryInterface:
    """Apply one full-range pulse so the interface becomes admissible."""
    for w in (q.alpha2, q.beta2):
        candidate = apply_pulse(iface, w)
        if validate_initial_interface(candidate, q):
            return candidate
    raise AdmissibilityError("no single full-range pulse makes the interface admissible")


def remnant_extrema(mu, iface0: MemoryInterface, q: QRegion):
    """(gamma_max, gamma_min): remnants of the two full-range pulses."""
    if not validate_initial_interface(iface0, q):
        raise AdmissibilityError("initial interface enters the forbidden strips")
    g_max, _ = remnant(mu, iface0, q.alpha2)
    g_min, _ = remnant(mu, iface0, q.beta2)
    return g_max, g_min


def max_gain(bounds: SectorBounds, mode: str = "positive") -> float:
    """Supremum of admissible adaptation gains."""
    if mode == "positive":
        d = max(bounds.gamma2_plus_q, bounds.gamma1_minus_q)
        if d <= 0.0:
            raise DegenerateBoundsError("sector bounds vanish on Q")
        return 2.0 / d
    if mode == "negative":
        d = abs(min(bounds.gamma2_minus_q, bounds.gamma1_plus_q))
        if d <= 0.0:
            raise DegenerateBoundsError("sector bounds vanish on Q")
        return 2.0 / d
    raise ConfigurationError("mode must be 'positive' or 'negative'")


@dataclass(frozen=True)
class ControllerConfig:
    gamma_d: float
    lam: float
    w0: float
    q: QRegion
    tolerance: float = None
    max_pulses: int = 200
    mu_sign_mode: str = "positive"


@dataclass
class PulseRecord:
    k: int
    w: float
    gamma: float
    e: float
    clamped: bool


@dataclass
class ControlTrace:
    records: list
    status: str  # "converged" | "max_pulses"
    gamma_max: float
    gamma_min: float
    tolerance: float
    final_interface: MemoryInterface

    @property
    def converged(self) -> bool:
        return self.status == "converged"

    @property
    def amplitudes(self):
        return [r.w for r in self.records]

    def write_csv(self, path):
        with open(path, "w") as fh:
            fh.write("k,w_k,gamma_k,e_k,clamped\n")
            for r in self.records:
                fh.write("%d,%r,%r,%r,%d\n" % (r.k, r.w, r.gamma, r.e, int(r.clamped)))


def run_controller(
    mu,
    iface0: MemoryInterface,
    cfg: ControllerConfig,
    bounds: SectorBounds = None,
    resolution: int = 512,
) -> ControlTrace:
    """Iterate the amplitude update until the remnant error is within
    tolerance or the pulse budget runs out."""
    q = cfg.q
    if not validate_initial_interface(iface0, q):
        raise AdmissibilityError("initial interface enters the forbidden strips")
    if not (q.beta2 <= cfg.w0 <= q.alpha2):
        raise ConfigurationError("w0 must lie in [beta2, alpha2]")
    if bounds is None:
        bounds = sector_bounds(mu, q, resolution)
    gain_cap = max_gain(bounds, cfg.mu_sign_mode)
    if not (0.0 < cfg.lam < gain_cap):
        raise ConfigurationError(
            "gain %g outside the admissible interval (0, %g)" % (cfg.lam, gain_cap)
        )
    g_max, g_min = remnant_extrema(mu, iface0, q)
    lo, hi = min(g_min, g_max), max(g_min, g_max)
    span = hi - lo
    tol_pad = 1e-9 * max(1.0, abs(hi), abs(lo))
    if not (lo - tol_pad <= cfg.gamma_d <= hi + tol_pad):
        raise ConfigurationError(
            "target %g outside the reachable remnant range [%g, %g]"
            % (cfg.gamma_d, lo, hi)
        )
    tol_e = cfg.tolerance if cfg.tolerance is not None else 1e-6 * span
    step_sign = -1.0 if cfg.mu_sign_mode == "positive" else 1.0

    iface = iface0
    w = cfg.w0
    clamped = False
    records = []
    status = "max_pulses"
    for k in range(cfg.max_pulses + 1):
        gamma_k, iface = remnant(mu, iface, w)
        e_k = gamma_k - cfg.gamma_d
        records.append(PulseRecord(k, w, gamma_k, e_k, clamped))
        if abs(e_k) <= tol_e:
            status = "converged"
            break
        if k == cfg.max_pulses:
            break
        w_raw = w + step_sign * cfg.lam * e_k
        w_new = min(max(w_raw, q.beta2), q.alpha2)
        clamped = w_new != w_raw
        w = w_new
    return ControlTrace(records, status, g_max, g_min, tol_e, iface)


def dense_response(mu, iface0: MemoryInterface, amplitudes, tau: float, sample_step: float):
    """Sampled input and output time series for a pulse train."""
    t, u = render_signal(amplitudes, tau, sample_step)
    iface = iface0
    y = np.zeros_like(t)
    for i, ui in enumerate(u):
        iface = iface.push_extremum(float(ui))
        y[i] = evaluate_output(mu, iface)
    return t, u, y
