"""Regime classification and capacity evaluators for the special channels.

Two cascade channels with one-directional conferencing (the receiver of the
conference link is receiver 2, budget d12) admit exact capacity statements:

* kind "gaussian-6":  y2 = s21*x1 + s22*y1 + z2  (receiver 2 hears y1),
* kind "gaussian-13": y1 = s11*x1 + s12*y2 + z1  (receiver 1 hears y2),

plus the one-sided channel (s12 = 0).  Each evaluator computes its region or
sum rate with independent full-power Gaussian inputs through the covariance
oracle; an optional power sweep probes whether backing off power (with a
time-sharing hull) ever enlarges the answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ChannelShapeError,
    InputError,
    RegimeViolationError,
    UndefinedThresholdError,
)
from .gaussian import GaussianIC, GaussianSystem, gaussian_mi, psi
from .regions import (
    RateConstraint,
    RateRegion,
    from_constraints,
    hull_of_points,
)

KINDS = ("gaussian-6", "gaussian-13")
REGIME_TOL = 1e-9


@dataclass(frozen=True)
class CorrelatedGaussianIC:
    """Effective two-user Gaussian channel with correlated noises.

    y = H x + n with x independent zero-mean (powers p1, p2) and n zero-mean
    with covariance noise_cov.  Cascade substitution produces these; kind and
    gains keep the originating parameterization for regime checks.
    """

    gain: np.ndarray
    noise_cov: np.ndarray
    p1: float
    p2: float
    d12: float = 0.0
    d21: float = 0.0
    kind: str | None = None
    gains: tuple[float, float, float, float] | None = None

    def __post_init__(self):
        h = np.asarray(self.gain, dtype=float)
        n = np.asarray(self.noise_cov, dtype=float)
        if h.shape != (2, 2) or n.shape != (2, 2):
            raise InputError("gain and noise_cov must be 2x2")
        if not (np.isfinite(h).all() and np.isfinite(n).all()):
            raise InputError("matrix entries must be finite")
        if not np.allclose(n, n.T, atol=1e-12):
            raise InputError("noise covariance must be symmetric")
        if np.min(np.linalg.eigvalsh((n + n.T) / 2)) < -1e-10:
            raise InputError("noise covariance must be PSD")
        if self.p1 < 0 or self.p2 < 0 or self.d12 < 0 or self.d21 < 0:
            raise InputError("powers and conference capacities must be nonnegative")
        object.__setattr__(self, "gain", h)
        object.__setattr__(self, "noise_cov", (n + n.T) / 2)

    def system(self, p1: float | None = None, p2: float | None = None) -> GaussianSystem:
        q1 = self.p1 if p1 is None else p1
        q2 = self.p2 if p2 is None else p2
        cov = np.zeros((4, 4))
        cov[0, 0], cov[1, 1] = q1, q2
        cov[2:, 2:] = self.noise_cov
        base = GaussianSystem(("x1", "x2", "n1", "n2"), cov)
        h = self.gain
        return base.extend_many({
            "y1": {"x1": h[0, 0], "x2": h[0, 1], "n1": 1.0},
            "y2": {"x1": h[1, 0], "x2": h[1, 1], "n2": 1.0},
        })


@dataclass(frozen=True)
class RegimeReport:
    """Which corollary-style condition holds, with the signed slack."""

    label: str
    threshold: float
    margin: float
    boundary: bool = field(default=False)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "threshold": self.threshold,
            "margin": self.margin,
            "boundary": self.boundary,
        }


def effective_form(
    kind: str,
    s11: float,
    s12: float,
    s21: float,
    s22: float,
    p1: float,
    p2: float,
    d12: float,
) -> CorrelatedGaussianIC:
    """Substitute the cascade output to get the explicit correlated-noise form."""
    if kind == "gaussian-6":
        h = np.array([[s11, s12],
                      [s21 + s22 * s11, s22 * s12]])
        n = np.array([[1.0, s22],
                      [s22, s22**2 + 1.0]])
    elif kind == "gaussian-13":
        h = np.array([[s11 + s12 * s21, s12 * s22],
                      [s21, s22]])
        n = np.array([[s12**2 + 1.0, s12],
                      [s12, 1.0]])
    else:
        raise ChannelShapeError(f"unknown cascade kind {kind!r}")
    return CorrelatedGaussianIC(h, n, p1, p2, d12=d12,
                                kind=kind, gains=(s11, s12, s21, s22))


def classify(kind: str, s11: float, s12: float, s21: float, s22: float) -> RegimeReport:
    """Evaluate the regime condition for the given channel kind.

    gaussian-6 channels split along (s11^2 - s21^2)/(2 s11 s21) vs s22
    (below or equal: strong regime, above or equal: mixed); gaussian-13
    channels check (s21^2 - s11^2)/(2 s11 s21) >= s12; one-sided channels
    (kind "one-sided", s12 = 0) check s21 >= s11.
    """
    if kind in ("gaussian-6", "gaussian-13"):
        if s11 == 0 or s21 == 0:
            raise UndefinedThresholdError(
                "regime threshold needs nonzero s11 and s21"
            )
    if kind == "gaussian-6":
        thr = (s11**2 - s21**2) / (2 * s11 * s21)
        if s22 >= thr:
            return RegimeReport("corollary-1", thr, s22 - thr,
                                boundary=abs(s22 - thr) == 0.0)
        return RegimeReport("corollary-2", thr, thr - s22)
    if kind == "gaussian-13":
        thr = (s21**2 - s11**2) / (2 * s11 * s21)
        margin = thr - s12
        label = "corollary-3" if margin >= 0 else "none"
        return RegimeReport(label, thr, margin, boundary=margin == 0.0)
    if kind == "one-sided":
        if s12 != 0:
            raise ChannelShapeError("one-sided classification requires s12 = 0")
        margin = s21 - s11
        label = "corollary-4" if margin >= 0 else "none"
        return RegimeReport(label, s11, margin, boundary=margin == 0.0)
    raise ChannelShapeError(f"unknown channel kind {kind!r}")


def _require(ch: CorrelatedGaussianIC, want: str, force: bool) -> None:
    if force:
        return
    if ch.kind is None or ch.gains is None:
        raise RegimeViolationError(
            "channel carries no regime metadata; pass force=True to evaluate anyway"
        )
    s11, s12, s21, s22 = ch.gains
    if want in ("corollary-1", "corollary-2"):
        thr = (s11**2 - s21**2) / (2 * s11 * s21) if s11 and s21 else math.inf
        margin = (s22 - thr) if want == "corollary-1" else (thr - s22)
    else:  # corollary-3
        thr = (s21**2 - s11**2) / (2 * s11 * s21) if s11 and s21 else -math.inf
        margin = thr - s12
    if not (margin >= -REGIME_TOL):
        raise RegimeViolationError(
            f"channel violates {want} (margin {margin:.6g}); use force to override"
        )


def _power_grid(p: float, steps: int) -> np.ndarray:
    if steps <= 1 or p == 0:
        return np.array([p])
    return np.linspace(0.0, p, steps)


def capacity_region_strong(
    ch: CorrelatedGaussianIC, force: bool = False, power_steps: int = 1
) -> RateRegion:
    """Capacity region in the strong regime (both receivers decode both).

    R1 <= I(x1;y1|x2), R2 <= min(I(x2;y2|x1) + d12, I(x2;y1|x1)),
    R1+R2 <= min(I(x1,x2;y2) + d12, I(x1,x2;y1)), evaluated with independent
    full-power Gaussian inputs; power_steps > 1 adds a power-backoff sweep
    with a time-sharing hull.
    """
    if ch.kind == "gaussian-13":
        raise ChannelShapeError("strong-regime region applies to gaussian-6 channels")
    _require(ch, "corollary-1", force)
    pts: list[tuple[float, float]] = []
    best: RateRegion | None = None
    for q1 in _power_grid(ch.p1, power_steps):
        for q2 in _power_grid(ch.p2, power_steps):
            sys = ch.system(q1, q2)
            r1 = gaussian_mi(sys, ("x1",), ("y1",), ("x2",))
            r2 = min(gaussian_mi(sys, ("x2",), ("y2",), ("x1",)) + ch.d12,
                     gaussian_mi(sys, ("x2",), ("y1",), ("x1",)))
            s = min(gaussian_mi(sys, ("x1", "x2"), ("y2",)) + ch.d12,
                    gaussian_mi(sys, ("x1", "x2"), ("y1",)))
            reg = from_constraints([
                RateConstraint(1, 0, r1, "r1"),
                RateConstraint(0, 1, r2, "r2"),
                RateConstraint(1, 1, s, "sum"),
            ], tag="strong-capacity")
            if q1 == ch.p1 and q2 == ch.p2:
                best = reg
            pts.extend(map(tuple, zip(reg.r1, reg.r2)))
    assert best is not None
    if power_steps <= 1:
        return best
    return hull_of_points(pts, tag="strong-capacity")


def sum_capacity_fwd_own(
    ch: CorrelatedGaussianIC, force: bool = False, power_steps: int = 1
) -> float:
    """Sum capacity when the conference forwards receiver 2's own message.

    min(I(x1;y1|x2) + I(x2;y2) + d12, I(x1,x2;y1)) at full power; the power
    sweep takes the max over the input family.
    """
    if ch.kind == "gaussian-13":
        raise ChannelShapeError("this sum capacity applies to gaussian-6 channels")
    _require(ch, "corollary-2", force)
    best = 0.0
    for q1 in _power_grid(ch.p1, power_steps):
        for q2 in _power_grid(ch.p2, power_steps):
            sys = ch.system(q1, q2)
            val = min(
                gaussian_mi(sys, ("x1",), ("y1",), ("x2",))
                + gaussian_mi(sys, ("x2",), ("y2",)) + ch.d12,
                gaussian_mi(sys, ("x1", "x2"), ("y1",)),
            )
            if q1 == ch.p1 and q2 == ch.p2:
                full = val
            best = max(best, val)
    return full if power_steps <= 1 else best


def sum_capacity_fwd_interference(
    ch: CorrelatedGaussianIC, force: bool = False, power_steps: int = 1
) -> float:
    """Sum capacity when the conference forwards interference information.

    min(I(x2;y2|x1) + I(x1;y1), I(x1,x2;y2) + d12) with the same input
    conventions as :func:`sum_capacity_fwd_own`.
    """
    if ch.kind == "gaussian-6":
        raise ChannelShapeError("this sum capacity applies to gaussian-13 channels")
    _require(ch, "corollary-3", force)
    best = 0.0
    for q1 in _power_grid(ch.p1, power_steps):
        for q2 in _power_grid(ch.p2, power_steps):
            sys = ch.system(q1, q2)
            val = min(
                gaussian_mi(sys, ("x2",), ("y2",), ("x1",))
                + gaussian_mi(sys, ("x1",), ("y1",)),
                gaussian_mi(sys, ("x1", "x2"), ("y2",)) + ch.d12,
            )
            if q1 == ch.p1 and q2 == ch.p2:
                full = val
            best = max(best, val)
    return full if power_steps <= 1 else best


def capacity_region_one_sided(
    ch: GaussianIC, force: bool = False
) -> RateRegion:
    """Capacity region of the one-sided channel, interference decoded at rx2.

    Requires s12 = 0; the regime gate is s21 >= s11.  The region is the
    pentagon R1 <= psi(s11^2 p1), R2 <= psi(s22^2 p2),
    R1 + R2 <= psi(s21^2 p1 + s22^2 p2) + d12.
    """
    if ch.s12 != 0:
        raise ChannelShapeError("one-sided region requires s12 = 0")
    if not force and ch.s21 < ch.s11 - REGIME_TOL:
        raise RegimeViolationError(
            f"one-sided regime needs s21 >= s11 (got {ch.s21} < {ch.s11})"
        )
    return from_constraints([
        RateConstraint(1, 0, psi(ch.s11**2 * ch.p1), "r1"),
        RateConstraint(0, 1, psi(ch.s22**2 * ch.p2), "r2"),
        RateConstraint(1, 1, psi(ch.s21**2 * ch.p1 + ch.s22**2 * ch.p2) + ch.d12,
                       "sum"),
    ], tag="one-sided-capacity")
