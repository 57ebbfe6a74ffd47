"""Finite-alphabet channels: information measures, the general outer-bound
constraint evaluator, regime-condition checkers and achievable inner regions.

Joint distributions are plain numpy arrays with a tuple of axis labels
carried alongside.  All information quantities are in bits.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ChannelShapeError, InputError
from .regions import RateConstraint, RateRegion, from_constraints, hull_of_points

NORM_TOL = 1e-12
DEGRADE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DiscreteIC:
    """Finite-alphabet channel: w[y1, y2, x1, x2] = P(y1, y2 | x1, x2)."""

    w: np.ndarray
    d12: float = 0.0
    d21: float = 0.0

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        if w.ndim != 4 or min(w.shape) < 1:
            raise InputError("transition law must be a 4-D array (y1, y2, x1, x2)")
        if np.any(w < -NORM_TOL):
            raise InputError("transition probabilities must be nonnegative")
        sums = w.sum(axis=(0, 1))
        if np.max(np.abs(sums - 1.0)) > NORM_TOL:
            raise InputError("each P(.,.|x1,x2) must sum to 1")
        if self.d12 < 0 or self.d21 < 0:
            raise InputError("conference capacities must be nonnegative")
        object.__setattr__(self, "w", np.maximum(w, 0.0))

    @property
    def ny1(self) -> int:
        return self.w.shape[0]

    @property
    def ny2(self) -> int:
        return self.w.shape[1]

    @property
    def nx1(self) -> int:
        return self.w.shape[2]

    @property
    def nx2(self) -> int:
        return self.w.shape[3]

    @classmethod
    def from_json_dict(cls, doc: dict) -> "DiscreteIC":
        try:
            ny1, ny2 = int(doc["ny1"]), int(doc["ny2"])
            nx1, nx2 = int(doc["nx1"]), int(doc["nx2"])
            flat = np.asarray(doc["w"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad discrete channel document: {exc}") from exc
        if flat.size != ny1 * ny2 * nx1 * nx2:
            raise InputError("flat transition array has the wrong length")
        w = flat.reshape(ny1, ny2, nx1, nx2)
        return cls(w, d12=float(doc.get("d12", 0.0)), d21=float(doc.get("d21", 0.0)))

    def to_json_dict(self) -> dict:
        return {
            "type": "discrete",
            "ny1": self.ny1, "ny2": self.ny2,
            "nx1": self.nx1, "nx2": self.nx2,
            "w": [float(v) for v in self.w.reshape(-1)],
            "d12": self.d12, "d21": self.d21,
        }


def entropy(table: np.ndarray) -> float:
    p = np.asarray(table, dtype=float).reshape(-1)
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def _marginal(table: np.ndarray, axes: Sequence[str], keep: Iterable[str]) -> np.ndarray:
    keep = set(keep)
    drop = tuple(i for i, name in enumerate(axes) if name not in keep)
    return table.sum(axis=drop) if drop else table


def mi(
    table: np.ndarray,
    axes: Sequence[str],
    a: Iterable[str],
    b: Iterable[str],
    cond: Iterable[str] = (),
) -> float:
    """I(a; b | cond) in bits from a joint PMF with labelled axes."""
    table = np.asarray(table, dtype=float)
    if table.ndim != len(axes):
        raise InputError("axis labels do not match table dimensions")
    if abs(float(table.sum()) - 1.0) > 1e-9 or np.any(table < -NORM_TOL):
        raise InputError("joint table must be a normalized PMF")
    a, b, c = set(a), set(b), set(cond)
    if (a & b) or (a & c) or (b & c):
        raise InputError("variable groups must be disjoint")
    for name in a | b | c:
        if name not in axes:
            raise InputError(f"unknown axis {name!r}")
    h_ac = entropy(_marginal(table, axes, a | c))
    h_bc = entropy(_marginal(table, axes, b | c))
    h_abc = entropy(_marginal(table, axes, a | b | c))
    h_c = entropy(_marginal(table, axes, c)) if c else 0.0
    return max(h_ac + h_bc - h_abc - h_c, 0.0)


@dataclass(frozen=True, eq=False)
class AuxJointDist:
    """Input and auxiliary factorization p(q) p(x1|q) p(x2|q) p(u,v|x1,x2,q)."""

    p_q: np.ndarray
    p_x1_q: np.ndarray
    p_x2_q: np.ndarray
    p_uv_x1x2q: np.ndarray

    def __post_init__(self):
        pq = np.asarray(self.p_q, dtype=float)
        p1 = np.asarray(self.p_x1_q, dtype=float)
        p2 = np.asarray(self.p_x2_q, dtype=float)
        puv = np.asarray(self.p_uv_x1x2q, dtype=float)
        nq = pq.shape[0]
        if pq.ndim != 1 or p1.ndim != 2 or p2.ndim != 2 or puv.ndim != 5:
            raise InputError("factor tables have wrong ranks")
        if p1.shape[0] != nq or p2.shape[0] != nq or puv.shape[0] != nq:
            raise InputError("factor tables disagree on |Q|")
        if puv.shape[1] != p1.shape[1] or puv.shape[2] != p2.shape[1]:
            raise InputError("auxiliary table disagrees on input alphabets")
        for t, ax in ((pq, None), (p1, 1), (p2, 1), (puv, (3, 4))):
            if np.any(t < -NORM_TOL):
                raise InputError("probabilities must be nonnegative")
            s = t.sum() if ax is None else t.sum(axis=ax)
            if np.max(np.abs(s - 1.0)) > NORM_TOL:
                raise InputError("conditional tables must be row-normalized")

    @property
    def nq(self) -> int:
        return self.p_q.shape[0]

    @property
    def nu(self) -> int:
        return self.p_uv_x1x2q.shape[3]

    @property
    def nv(self) -> int:
        return self.p_uv_x1x2q.shape[4]

    @classmethod
    def independent_inputs(cls, p1: np.ndarray, p2: np.ndarray) -> "AuxJointDist":
        """Degenerate Q, U, V with the given product input PMFs."""
        p1 = np.asarray(p1, dtype=float)
        p2 = np.asarray(p2, dtype=float)
        puv = np.ones((1, p1.size, p2.size, 1, 1))
        return cls(np.array([1.0]), p1[None, :], p2[None, :], puv)

    @classmethod
    def uniform(cls, nx1: int, nx2: int) -> "AuxJointDist":
        return cls.independent_inputs(np.full(nx1, 1 / nx1), np.full(nx2, 1 / nx2))


AXES7 = ("q", "u", "v", "x1", "x2", "y1", "y2")


def joint_with_aux(ch: DiscreteIC, dist: AuxJointDist) -> np.ndarray:
    """Joint PMF over (q, u, v, x1, x2, y1, y2)."""
    if dist.p_x1_q.shape[1] != ch.nx1 or dist.p_x2_q.shape[1] != ch.nx2:
        raise InputError("distribution alphabets do not match the channel")
    return np.einsum(
        "q,qa,qb,qabuv,cdab->quvabcd",
        dist.p_q, dist.p_x1_q, dist.p_x2_q, dist.p_uv_x1x2q, ch.w,
        optimize=True,
    )


def outer_constraints(
    ch: DiscreteIC, dist: AuxJointDist, d12: float | None = None,
    d21: float | None = None,
) -> list[RateConstraint]:
    """The 11 outer-bound constraints evaluated at one auxiliary distribution.

    The bound proper is a union over all admissible distributions; this is
    the per-distribution kernel.
    """
    d12 = ch.d12 if d12 is None else d12
    d21 = ch.d21 if d21 is None else d21
    if d12 < 0 or d21 < 0:
        raise InputError("conference capacities must be nonnegative")
    j = joint_with_aux(ch, dist)

    def f(a, b, c=()):
        return mi(j, AXES7, a, b, c)

    rows = [
        (1, 0, min(f(("u", "x1"), ("y1",), ("q",)) + d21,
                   f(("x1",), ("y1",), ("x2", "q")) + d21)),
        (1, 0, f(("x1",), ("y1",), ("y2", "x2", "v", "q"))
         + f(("x1",), ("y2",), ("x2", "q"))),
        (1, 0, f(("x1",), ("y2",), ("y1", "x2", "v", "q"))
         + f(("x1",), ("y1",), ("x2", "q"))),
        (0, 1, min(f(("v", "x2"), ("y2",), ("q",)) + d12,
                   f(("x2",), ("y2",), ("x1", "q")) + d12)),
        (0, 1, f(("x2",), ("y2",), ("y1", "x1", "u", "q"))
         + f(("x2",), ("y1",), ("x1", "q"))),
        (0, 1, f(("x2",), ("y1",), ("y2", "x1", "u", "q"))
         + f(("x2",), ("y2",), ("x1", "q"))),
        (1, 1, f(("x1",), ("y1",), ("v", "x2", "q"))
         + f(("v", "x2"), ("y2",), ("q",)) + d12 + d21),
        (1, 1, f(("x2",), ("y2",), ("u", "x1", "q"))
         + f(("u", "x1"), ("y1",), ("q",)) + d12 + d21),
        (1, 1, f(("x1",), ("y1",), ("y2", "x2", "v", "q"))
         + f(("x1", "x2"), ("y2",), ("q",)) + d12),
        (1, 1, f(("x2",), ("y2",), ("y1", "x1", "u", "q"))
         + f(("x1", "x2"), ("y1",), ("q",)) + d21),
        (1, 1, f(("x1", "x2"), ("y1", "y2"), ("q",))),
    ]
    return [RateConstraint(c1, c2, rhs, tag=f"g{i + 1:02d}")
            for i, (c1, c2, rhs) in enumerate(rows)]


# ---------------------------------------------------------------------------
# regime-condition checkers


@dataclass(frozen=True)
class ConditionReport:
    holds_on_searched_family: bool
    worst_gap: float
    markov_ok: bool
    witnesses: dict

    def to_dict(self) -> dict:
        return {
            "holds_on_searched_family": self.holds_on_searched_family,
            "worst_gap": self.worst_gap,
            "markov_ok": self.markov_ok,
            "witnesses": self.witnesses,
        }


def simplex_grid(dim: int, resolution: int) -> np.ndarray:
    """Uniform lattice on the probability simplex with the given resolution."""
    if resolution < 2:
        raise InputError("simplex resolution must be at least 2")
    steps = resolution - 1
    pts = []
    for comp in itertools.combinations_with_replacement(range(dim), steps):
        v = np.zeros(dim)
        for c in comp:
            v[c] += 1
        pts.append(v / steps)
    return np.array(pts)


def _pair_mi_gap(ch: DiscreteIC, p1: np.ndarray, p2: np.ndarray) -> float:
    """I(x1;y2|x2) - I(x1;y1|x2) at independent inputs."""
    joint = np.einsum("a,b,cdab->abcd", p1, p2, ch.w, optimize=True)
    axes = ("x1", "x2", "y1", "y2")
    return (mi(joint, axes, ("x1",), ("y2",), ("x2",))
            - mi(joint, axes, ("x1",), ("y1",), ("x2",)))


def _input_gap_search(ch: DiscreteIC, grid: int, refine: int = 2):
    """Minimize the cross-vs-direct gap over a product-input lattice."""
    lat1 = simplex_grid(ch.nx1, grid)
    lat2 = simplex_grid(ch.nx2, grid)
    best = (np.inf, None, None)
    for p1 in lat1:
        for p2 in lat2:
            g = _pair_mi_gap(ch, p1, p2)
            if g < best[0]:
                best = (g, p1, p2)
    # local refinement: shrink a simplex patch around the incumbent
    for _ in range(refine):
        g0, p1c, p2c = best
        for p1 in _shrink_patch(p1c, lat1):
            for p2 in _shrink_patch(p2c, lat2):
                g = _pair_mi_gap(ch, p1, p2)
                if g < best[0]:
                    best = (g, p1, p2)
    return best


def _shrink_patch(center: np.ndarray, lattice: np.ndarray, scale: float = 0.2):
    pts = center[None, :] + scale * (lattice - center[None, :])
    pts = np.maximum(pts, 0.0)
    return pts / pts.sum(axis=1, keepdims=True)


def _degraded_given(ch: DiscreteIC, which: str) -> bool:
    """Physical-degradedness test.

    which = "y2": P(y2 | y1, x1, x2) must not depend on x2 wherever
    P(y1 | x1, x2) > 0 (the conference source output y1 already carries
    everything y2 sees about x2).  which = "y1": symmetric in the outputs.
    """
    w = ch.w if which == "y2" else ch.w.transpose(1, 0, 2, 3)
    lead = w.sum(axis=1)  # P(front output | x1, x2)
    for x1 in range(w.shape[2]):
        for yf in range(w.shape[0]):
            ref = None
            for x2 in range(w.shape[3]):
                if lead[yf, x1, x2] <= DEGRADE_TOL:
                    continue
                cond = w[yf, :, x1, x2] / lead[yf, x1, x2]
                if ref is None:
                    ref = cond
                elif np.max(np.abs(cond - ref)) > DEGRADE_TOL:
                    return False
    return True


def one_sided_factorization(ch: DiscreteIC, tol: float = DEGRADE_TOL) -> bool:
    """True when P(y1,y2|x1,x2) factors as P(y1|x1) P(y2|x1,x2)."""
    py1 = ch.w.sum(axis=1)  # (y1, x1, x2)
    if np.max(np.abs(py1 - py1[:, :, :1])) > tol:
        return False
    py2 = ch.w.sum(axis=0)  # (y2, x1, x2)
    recon = np.einsum("cab,dab->cdab", py1, py2)
    return bool(np.max(np.abs(recon - ch.w)) <= tol)


def _sample_v_kernels(ch: DiscreteIC, aux_card: int, samples: int,
                      rng: np.random.Generator):
    """Structured plus Dirichlet-random P(v | x1, x2) kernels."""
    nx1, nx2 = ch.nx1, ch.nx2
    kernels = []
    if aux_card >= nx1:  # v = x1
        k = np.zeros((nx1, nx2, aux_card))
        for x1 in range(nx1):
            k[x1, :, x1] = 1.0
        kernels.append(k)
    if aux_card >= nx2:  # v = x2
        k = np.zeros((nx1, nx2, aux_card))
        for x2 in range(nx2):
            k[:, x2, x2] = 1.0
        kernels.append(k)
    if aux_card >= nx1 * nx2:  # v = (x1, x2)
        k = np.zeros((nx1, nx2, aux_card))
        for x1 in range(nx1):
            for x2 in range(nx2):
                k[x1, x2, x1 * nx2 + x2] = 1.0
        kernels.append(k)
    k = np.zeros((nx1, nx2, aux_card))
    k[:, :, 0] = 1.0
    kernels.append(k)  # degenerate v
    draws = rng.gamma(1.0, size=(samples, nx1, nx2, aux_card))
    kernels.extend(draws / draws.sum(axis=-1, keepdims=True))
    return kernels


def _aux_gap(ch: DiscreteIC, p1, p2, kernel) -> float:
    """I(v;y1|x2) - I(v;y2|x2) at independent inputs and P(v|x1,x2)."""
    joint = np.einsum("a,b,abv,cdab->vabcd", p1, p2, kernel, ch.w, optimize=True)
    axes = ("v", "x1", "x2", "y1", "y2")
    return (mi(joint, axes, ("v",), ("y1",), ("x2",))
            - mi(joint, axes, ("v",), ("y2",), ("x2",)))


def check_condition(
    ch: DiscreteIC,
    which: int,
    grid: int = 21,
    aux_card: int | None = None,
    samples: int = 2000,
    seed: int = 0,
) -> ConditionReport:
    """Check one of the four regime conditions (ids 4, 7, 11, 14).

    All four are universally quantified, so the checkers are falsification
    oriented: a negative worst gap is a definitive failure, a nonnegative one
    is evidence over the searched family only.

    * 4:  I(x1;y1|x2) <= I(x1;y2|x2) over product inputs, and y2 physically
          degraded with respect to y1 given x1.
    * 7:  I(v;y2|x2) <= I(v;y1|x2) over product inputs and auxiliary kernels
          P(v|x1,x2); the markov part is the same as condition 4.
    * 11: the condition-4 gap, with the degradedness roles of the outputs
          swapped (y1 degraded with respect to y2 given x1).
    * 14: the condition-4 gap on a one-sided channel.
    """
    if which == 4 or which == 11 or which == 14:
        if which == 14 and not one_sided_factorization(ch):
            raise ChannelShapeError(
                "condition 14 applies to one-sided channels "
                "(P(y1,y2|x1,x2) = P(y1|x1) P(y2|x1,x2))"
            )
        worst, p1, p2 = _input_gap_search(ch, grid)
        if which == 4:
            markov = _degraded_given(ch, "y2")
        elif which == 11:
            markov = _degraded_given(ch, "y1")
        else:
            markov = True  # factorization already enforced
        wit = {"p1": p1.tolist(), "p2": p2.tolist()}
        return ConditionReport(worst >= -1e-9, float(worst), markov, wit)
    if which == 7:
        aux_card = aux_card or ch.nx1 * ch.nx2
        if aux_card < 1:
            raise InputError("aux_card must be positive")
        rng = np.random.default_rng(seed)
        lat1 = simplex_grid(ch.nx1, max(3, grid // 4))
        lat2 = simplex_grid(ch.nx2, max(3, grid // 4))
        probes = [(p1, p2) for p1 in lat1 for p2 in lat2]
        # include the worst product input found by the condition-4 search
        g4, p1w, p2w = _input_gap_search(ch, grid, refine=1)
        probes.append((p1w, p2w))
        best = (np.inf, None)
        for kernel in _sample_v_kernels(ch, aux_card, samples, rng):
            for p1, p2 in probes:
                g = _aux_gap(ch, p1, p2, kernel)
                if g < best[0]:
                    best = (g, (p1, p2, kernel))
        worst, w = best
        p1, p2, kernel = w
        markov = _degraded_given(ch, "y2")
        wit = {"p1": p1.tolist(), "p2": p2.tolist(),
               "v_kernel": kernel.tolist()}
        return ConditionReport(worst >= -1e-9, float(worst), markov, wit)
    raise InputError(f"unknown condition id {which}; expected 4, 7, 11 or 14")


# ---------------------------------------------------------------------------
# achievable inner regions


def _product_input_polytope(ch: DiscreteIC, p1, p2, d12: float,
                            one_sided: bool) -> RateRegion:
    joint = np.einsum("a,b,cdab->abcd", p1, p2, ch.w, optimize=True)
    axes = ("x1", "x2", "y1", "y2")

    def f(a, b, c=()):
        return mi(joint, axes, a, b, c)

    if one_sided:
        r1 = f(("x1",), ("y1",))
        r2 = f(("x2",), ("y2",), ("x1",))
        s = f(("x1", "x2"), ("y2",)) + d12
    else:
        r1 = f(("x1",), ("y1",), ("x2",))
        r2 = min(f(("x2",), ("y2",), ("x1",)) + d12, f(("x2",), ("y1",), ("x1",)))
        s = min(f(("x1", "x2"), ("y2",)) + d12, f(("x1", "x2"), ("y1",)))
    return from_constraints([
        RateConstraint(1, 0, r1, "r1"),
        RateConstraint(0, 1, r2, "r2"),
        RateConstraint(1, 1, s, "sum"),
    ])


def _inner_region(ch: DiscreteIC, d12: float, grid: int,
                  one_sided: bool, tag: str) -> RateRegion:
    if grid < 2:
        raise InputError("grid must be at least 2")
    pts = []
    for p1 in simplex_grid(ch.nx1, grid):
        for p2 in simplex_grid(ch.nx2, grid):
            reg = _product_input_polytope(ch, p1, p2, d12, one_sided)
            pts.extend(zip(reg.r1, reg.r2))
    return hull_of_points(np.array(pts), tag=tag)


def inner_region_strong(ch: DiscreteIC, d12: float, grid: int = 21) -> RateRegion:
    """Achievable region when both receivers decode both messages.

    Union over a product-input lattice of the per-input polytopes, then
    convex hull (time sharing).
    """
    return _inner_region(ch, d12, grid, one_sided=False, tag="inner-strong")


def inner_region_one_sided(ch: DiscreteIC, d12: float, grid: int = 21) -> RateRegion:
    """Achievable (capacity) region of the one-sided channel."""
    if not one_sided_factorization(ch):
        raise ChannelShapeError("channel is not one-sided")
    return _inner_region(ch, d12, grid, one_sided=True, tag="inner-one-sided")
