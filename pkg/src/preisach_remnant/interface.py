"""Staircase memory curve of the scalar Preisach relay field.

The memory state of the relay field is a monotonically decreasing staircase
in the half-plane ``alpha >= beta``.  Relays below the curve hold state +1,
relays above hold -1.  The curve is stored as its corner vertices, ordered
from the diagonal outward; its infinite tail is clamped to the support box
because the weighting density vanishes outside it, so nothing observable is
lost.

All values are immutable; every update returns a new interface.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import ConfigurationError, OutOfRangeError

#: absolute tolerance below which adjacent corners are merged
VERTEX_MERGE_TOL = 1e-12

_NEG_INF = float("-inf")


@dataclass(frozen=True)
class Box:
    """Axis-aligned rectangle [alpha_lo, alpha_hi] x [beta_lo, beta_hi]."""

    alpha_lo: float
    alpha_hi: float
    beta_lo: float
    beta_hi: float

    def __post_init__(self):
        if not (self.alpha_hi > self.alpha_lo and self.beta_hi > self.beta_lo):
            raise ConfigurationError("degenerate box: %r" % (self,))

    def contains(self, other: "Box", tol: float = 1e-9) -> bool:
        return (
            self.alpha_lo <= other.alpha_lo + tol
            and self.alpha_hi >= other.alpha_hi - tol
            and self.beta_lo <= other.beta_lo + tol
            and self.beta_hi >= other.beta_hi - tol
        )

    def to_dict(self) -> dict:
        return {
            "alpha_lo": self.alpha_lo,
            "alpha_hi": self.alpha_hi,
            "beta_lo": self.beta_lo,
            "beta_hi": self.beta_hi,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Box":
        return cls(d["alpha_lo"], d["alpha_hi"], d["beta_lo"], d["beta_hi"])


@dataclass(frozen=True)
class PlanePoint:
    """A relay index (switch-up threshold alpha, switch-down threshold beta)."""

    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha < self.beta:
            raise ValueError(
                "relay thresholds must satisfy alpha >= beta, got (%g, %g)"
                % (self.alpha, self.beta)
            )


def _canonical_corners(corners, box: Box):
    """Clamp, merge and validate a raw corner list.

    The first corner must lie on the diagonal.  Corners deeper than the
    support box are clamped to it, near-duplicates (within
    VERTEX_MERGE_TOL) are merged, collinear middle corners are dropped and
    the tail down to the box floor is materialized.
    """
    if not corners:
        raise ConfigurationError("empty corner list")
    a0, b0 = corners[0]
    if abs(a0 - b0) > 1e-9 * max(1.0, abs(a0), abs(b0)):
        raise ConfigurationError(
            "first corner must lie on the diagonal, got (%g, %g)" % (a0, b0)
        )
    v = 0.5 * (a0 + b0)
    tail_beta = min(box.beta_lo, v)
    head_alpha = max(box.alpha_hi, v)

    pts = [(v, v)]
    for a, b in corners[1:]:
        pts.append((min(a, head_alpha), max(b, tail_beta)))

    if pts[-1][1] > tail_beta:
        pts.append((pts[-1][0], tail_beta))

    out = [pts[0]]
    for p in pts[1:]:
        q = out[-1]
        if abs(p[0] - q[0]) <= VERTEX_MERGE_TOL and abs(p[1] - q[1]) <= VERTEX_MERGE_TOL:
            continue
        out.append(p)

    i = 1
    while i + 1 < len(out):
        a_run = (
            abs(out[i - 1][0] - out[i][0]) <= VERTEX_MERGE_TOL
            and abs(out[i][0] - out[i + 1][0]) <= VERTEX_MERGE_TOL
        )
        b_run = (
            abs(out[i - 1][1] - out[i][1]) <= VERTEX_MERGE_TOL
            and abs(out[i][1] - out[i + 1][1]) <= VERTEX_MERGE_TOL
        )
        if a_run or b_run:
            del out[i]
        else:
            i += 1

    for (a1, b1), (a2, b2) in zip(out, out[1:]):
        if a2 < a1 - VERTEX_MERGE_TOL or b2 > b1 + VERTEX_MERGE_TOL:
            raise ConfigurationError("corner list is not a monotone staircase")
        da, db = abs(a2 - a1), abs(b2 - b1)
        if da > VERTEX_MERGE_TOL and db > VERTEX_MERGE_TOL:
            raise ConfigurationError(
                "segments must be axis-aligned; corner jump (%g,%g)->(%g,%g)"
                % (a1, b1, a2, b2)
            )
    return tuple(out)


@dataclass(frozen=True)
class MemoryInterface:
    """Canonical staircase memory curve plus the support box it is clamped to.

    ``corners`` runs from the diagonal corner outward; consecutive corners
    share either the alpha or the beta coordinate.
    """

    corners: tuple
    support_box: Box

    @classmethod
    def from_corners(cls, corners, box: Box) -> "MemoryInterface":
        return cls(_canonical_corners([tuple(map(float, c)) for c in corners], box), box)

    @classmethod
    def virgin(cls, box: Box, value: float = 0.0) -> "MemoryInterface":
        """All relays with alpha > value in the -1 state."""
        return cls.from_corners([(value, value)], box)

    @classmethod
    def from_extrema(cls, box: Box, extrema, end_value: float = 0.0) -> "MemoryInterface":
        """Replay an alternating extremum sequence (largest first) from the
        virgin state, finishing with a sweep to ``end_value`` so the curve
        passes through the diagonal at that input value."""
        iface = cls.virgin(box, 0.0)
        for v in extrema:
            iface = iface.push_extremum(float(v))
        return iface.push_extremum(float(end_value))

    # -- basic queries ----------------------------------------------------

    @property
    def current_value(self) -> float:
        return self.corners[0][0]

    def steps(self):
        """Upper-envelope of the +1 region as a step function of alpha.

        Returns tuples ``(a_lo, a_hi, level)`` meaning relays with
        ``a_lo < alpha <= a_hi`` are +1 iff ``beta <= level``.
        """
        out = []
        prev = _NEG_INF
        for a, b in self.corners:
            if a > prev:
                out.append((prev, a, b))
                prev = a
        out.append((prev, math.inf, _NEG_INF))
        return out

    def upper_beta(self, alpha: float) -> float:
        """Largest beta for which the relay (alpha, beta) is in the +1 state."""
        for lo, hi, level in self.steps():
            if lo < alpha <= hi:
                return level
        return _NEG_INF

    def relay_state(self, p: PlanePoint) -> int:
        """Sign of the relay at p; points on the curve count as below (+1)."""
        return 1 if p.beta <= self.upper_beta(p.alpha) else -1

    # -- memory updates ---------------------------------------------------

    def push_extremum(self, v: float) -> "MemoryInterface":
        """Monotone input sweep to value v.

        An increase switches every relay with alpha < v to +1 and wipes the
        dominated corners; a decrease is the mirror image.
        """
        v = float(v)
        v0 = self.current_value
        if abs(v - v0) <= VERTEX_MERGE_TOL:
            return self
        if v > v0:
            surv = [c for c in self.corners if c[0] > v]
            if surv:
                raw = [(v, v), (v, surv[0][1])] + surv
            else:
                raw = [(v, v)]
        else:
            surv = [c for c in self.corners if c[1] < v]
            if surv:
                raw = [(v, v), (surv[0][0], v)] + surv
            else:
                raw = [(v, v)]
        return MemoryInterface(_canonical_corners(raw, self.support_box), self.support_box)

    # -- line queries (curve re-parameterization) --------------------------

    def _segments(self):
        return list(zip(self.corners, self.corners[1:]))

    def ell_beta(self, alpha: float, which: str, tol: float = 1e-9) -> float:
        """Max/min beta over curve points on the line alpha = const."""
        vals = []
        for (a, b) in [self.corners[0]] if len(self.corners) == 1 else []:
            if abs(a - alpha) <= tol:
                vals.append(b)
        for (a1, b1), (a2, b2) in self._segments():
            if abs(b1 - b2) <= VERTEX_MERGE_TOL:  # horizontal run
                if a1 - tol <= alpha <= a2 + tol:
                    vals.append(b1)
            else:  # vertical run at alpha = a1
                if abs(a1 - alpha) <= tol:
                    vals.extend((b1, b2))
        if not vals:
            raise OutOfRangeError("line alpha=%g misses the interface" % alpha)
        return max(vals) if which == "max" else min(vals)

    def ell_alpha(self, beta: float, which: str, tol: float = 1e-9) -> float:
        """Max/min alpha over curve points on the line beta = const."""
        vals = []
        for (a, b) in [self.corners[0]] if len(self.corners) == 1 else []:
            if abs(b - beta) <= tol:
                vals.append(a)
        for (a1, b1), (a2, b2) in self._segments():
            if abs(a1 - a2) <= VERTEX_MERGE_TOL:  # vertical run
                if b2 - tol <= beta <= b1 + tol:
                    vals.append(a1)
            else:  # horizontal run at beta = b1
                if abs(b1 - beta) <= tol:
                    vals.extend((a1, a2))
        if not vals:
            raise OutOfRangeError("line beta=%g misses the interface" % beta)
        return max(vals) if which == "max" else min(vals)

    # -- region extraction --------------------------------------------------

    def below_rectangles(self, box: Box):
        """The +1 region clipped to ``box`` as disjoint rectangles
        (a_lo, a_hi, b_lo, b_hi)."""
        rects = []
        for lo, hi, level in self.steps():
            a_lo = max(lo, box.alpha_lo)
            a_hi = min(hi, box.alpha_hi)
            if a_hi <= a_lo:
                continue
            b_hi = min(level, box.beta_hi)
            if b_hi <= box.beta_lo:
                continue
            rects.append((a_lo, a_hi, box.beta_lo, b_hi))
        return rects

    # -- comparison / serialization ------------------------------------------

    def close_to(self, other: "MemoryInterface", tol: float = 1e-9) -> bool:
        if len(self.corners) != len(other.corners):
            return False
        return all(
            abs(a1 - a2) <= tol and abs(b1 - b2) <= tol
            for (a1, b1), (a2, b2) in zip(self.corners, other.corners)
        )

    def corners_json(self) -> str:
        return json.dumps([{"alpha": a, "beta": b} for a, b in self.corners])

    def to_json(self) -> str:
        return json.dumps(
            {
                "corners": [{"alpha": a, "beta": b} for a, b in self.corners],
                "support_box": self.support_box.to_dict(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "MemoryInterface":
        d = json.loads(text)
        box = Box.from_dict(d["support_box"])
        return cls.from_corners([(c["alpha"], c["beta"]) for c in d["corners"]], box)


def relay_state(p: PlanePoint, iface: MemoryInterface) -> int:
    return iface.relay_state(p)


def push_extremum(iface: MemoryInterface, v: float) -> MemoryInterface:
    return iface.push_extremum(v)
