"""Muckenhoupt / reverse-Hoelder weight calculus.

Three layers:

* exact index algebra on class specifications (A_p and RH_s indices),
* closed-form membership for power weights |x|^alpha on the line,
* grid-based estimation of the class constants by a supremum of the
  defining functionals over dyadic subintervals of [-L, L].

The index transform linking the two class scales is

    v in A_p and RH_s   <=>   v^s in A_q,   q = s(p-1) + 1,

and the constructive factorization is v = v1^(1/s) * v2^(1-p) for v1, v2
in A_1.  Both are implemented exactly on the index side and numerically on
the grid side.

All closed forms are one-dimensional: on R (n = 1),

    |x|^alpha in A_p  <=>  -1 < alpha < p-1      (p > 1)
                      <=>  -1 < alpha <= 0       (p = 1)
    |x|^alpha in RH_s <=>  alpha > -1/s          (s < inf)
                      <=>  alpha >= 0            (s = inf)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError, SearchFailed
from .exponents import INF, Exponent, ExponentLike, as_exponent, rec
from .grid import Grid

__all__ = [
    "WeightClassSpec",
    "PowerWeight",
    "GridWeight",
    "cjn_index",
    "factor_weight",
    "power_in_class",
    "power_membership",
    "estimate_class_constants",
    "openness_probe",
]


# --------------------------------------------------------------------------
# class specifications and power weights
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightClassSpec:
    """A membership claim v in A_p intersect RH_s.

    p is finite and >= 1; s is >= 1 and may be infinity (RH_1 is the trivial
    reverse-Hoelder class, so s = 1 encodes "A_p only").
    """

    p: Exponent
    s: Exponent

    def __post_init__(self):
        object.__setattr__(self, "p", as_exponent(self.p))
        object.__setattr__(self, "s", as_exponent(self.s))
        if self.p.is_inf:
            raise DomainError("A_p index must be finite")
        if self.p < 1 or self.s < 1:
            raise DomainError(f"class indices must be >= 1, got ({self.p}, {self.s})")

    def __str__(self) -> str:
        return f"A_{self.p} & RH_{self.s}"


@dataclass(frozen=True)
class PowerWeight:
    """w(x) = |x|^alpha on the line; alpha is an exact rational."""

    alpha: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))

    def on_grid(self, grid: Grid) -> "GridWeight":
        return GridWeight(np.abs(grid.x()) ** float(self.alpha), grid)


def cjn_index(p: ExponentLike, s: ExponentLike) -> Exponent:
    """The index q = s(p-1) + 1 with v in A_p & RH_s  <=>  v^s in A_q.

    Requires finite 1 <= p and 1 <= s < inf; exact.
    """
    p, s = as_exponent(p), as_exponent(s)
    if p.is_inf or s.is_inf:
        raise DomainError("cjn_index requires finite p and s")
    if p < 1 or s < 1:
        raise DomainError(f"cjn_index requires p, s >= 1, got ({p}, {s})")
    return Exponent(s.frac * (p.frac - 1) + 1)


def power_in_class(w: PowerWeight, spec: WeightClassSpec) -> bool:
    """Closed-form membership verdict for |x|^alpha in A_p & RH_s on R."""
    ok, _ = power_membership(w, spec)
    return ok


def power_membership(w: PowerWeight, spec: WeightClassSpec):
    """Membership verdict plus per-condition reasons (for reports)."""
    a = w.alpha
    p, s = spec.p, spec.s
    reasons = []

    if p == 1:
        in_ap = Fraction(-1) < a <= 0
        reasons.append(f"A_1 on R requires -1 < alpha <= 0: alpha={a} -> {in_ap}")
    else:
        in_ap = Fraction(-1) < a < p.frac - 1
        reasons.append(
            f"A_{p} on R requires -1 < alpha < p-1 = {p.frac - 1}: alpha={a} -> {in_ap}"
        )

    if s.is_inf:
        in_rh = a >= 0
        reasons.append(f"RH_inf on R requires alpha >= 0: alpha={a} -> {in_rh}")
    elif s == 1:
        in_rh = True
        reasons.append("RH_1 is trivial")
    else:
        bound = -rec(s)
        in_rh = a > bound
        reasons.append(
            f"RH_{s} on R requires alpha > -1/s = {bound}: alpha={a} -> {in_rh}"
        )

    return bool(in_ap and in_rh), reasons


# --------------------------------------------------------------------------
# grid weights
# --------------------------------------------------------------------------


@dataclass(eq=False)
class GridWeight:
    """A strictly positive, finite weight sampled on a midpoint grid."""

    samples: np.ndarray
    grid: Grid

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.shape != (self.grid.N,):
            raise DomainError(
                f"expected {self.grid.N} samples, got shape {self.samples.shape}"
            )
        if not np.all(np.isfinite(self.samples)) or np.any(self.samples <= 0):
            raise DomainError("weight samples must be strictly positive and finite")

    @classmethod
    def unit(cls, grid: Grid) -> "GridWeight":
        return cls(np.ones(grid.N), grid)

    @classmethod
    def from_callable(cls, fn, grid: Grid) -> "GridWeight":
        return cls(np.asarray(fn(grid.x()), dtype=float), grid)

    def power(self, e) -> "GridWeight":
        """Pointwise self**e for a rational (possibly signed) exponent."""
        return GridWeight(self.samples ** float(e), self.grid)

    def __mul__(self, other: "GridWeight") -> "GridWeight":
        self.grid.require_same(other.grid, "weight grids")
        return GridWeight(self.samples * other.samples, self.grid)


def factor_weight(
    v1: GridWeight, v2: GridWeight, p: ExponentLike, s: ExponentLike
) -> GridWeight:
    """Pointwise v1^(1/s) * v2^(1-p) on the common grid.

    For v1, v2 in A_1 (caller-estimated) the result lies in A_p & RH_s.
    s may be infinite (exponent 1/s = 0); p = 1 zeroes the second factor's
    exponent.
    """
    v1.grid.require_same(v2.grid, "weight grids")
    p, s = as_exponent(p), as_exponent(s)
    if p.is_inf or p < 1:
        raise DomainError(f"need 1 <= p < inf, got {p}")
    if s < 1:
        raise DomainError(f"need 1 <= s <= inf, got {s}")
    e1 = 0.0 if s.is_inf else float(rec(s))
    e2 = float(1 - p.frac)
    return GridWeight(v1.samples**e1 * v2.samples**e2, v1.grid)


# --------------------------------------------------------------------------
# constant estimation on dyadic subintervals
# --------------------------------------------------------------------------


def _level_means(values: np.ndarray, level: int) -> np.ndarray:
    """Means of `values` over the 2^level dyadic subintervals of [-L, L]."""
    parts = values.reshape(2**level, -1)
    return parts.mean(axis=1)


def _level_maxes(values: np.ndarray, level: int) -> np.ndarray:
    parts = values.reshape(2**level, -1)
    return parts.max(axis=1)


def estimate_class_constants(
    w: GridWeight, spec: WeightClassSpec, depth: int
) -> tuple[float, float]:
    """Estimated ([w]_{A_p}, [w]_{RH_s}) over dyadic subintervals.

    The supremum runs over every dyadic subinterval of [-L, L] from the whole
    interval down to `depth` halvings (capped so each interval holds at least
    one sample).  The result is monotone nondecreasing in `depth` because
    deeper estimates include every shallower interval.

    Overflow is reported as +inf in the corresponding slot, never raised.
    """
    if depth < 1:
        raise DomainError(f"depth must be >= 1, got {depth}")
    v = w.samples
    n = v.size
    max_depth = int(np.log2(n & -n))  # largest d with 2^d | N
    eff_depth = min(depth, max_depth)

    p, s = spec.p, spec.s
    pf = float(p.frac)

    with np.errstate(over="ignore", divide="ignore"):
        if p == 1:
            dual = 1.0 / v
        else:
            pprime = pf / (pf - 1.0)
            dual = v ** (1.0 - pprime)
        vs = None if s.is_inf or s == 1 else v ** float(s.frac)

        ap_best = 0.0
        rh_best = 0.0
        for level in range(eff_depth + 1):
            mv = _level_means(v, level)
            if p == 1:
                ap = mv * _level_maxes(dual, level)
            else:
                ap = mv * _level_means(dual, level) ** (pf - 1.0)
            ap_best = max(ap_best, float(np.max(ap)))

            if s == 1:
                rh = np.ones_like(mv)
            elif s.is_inf:
                rh = _level_maxes(v, level) / mv
            else:
                rh = _level_means(vs, level) ** (1.0 / float(s.frac)) / mv
            rh_best = max(rh_best, float(np.max(rh)))

    ap_best = ap_best if np.isfinite(ap_best) else float("inf")
    rh_best = rh_best if np.isfinite(rh_best) else float("inf")
    return ap_best, rh_best


DEFAULT_PROBE_DEPTH = 8
DEFAULT_PROBE_CEILING = 50.0


def openness_probe(
    w: GridWeight,
    p: ExponentLike,
    budget: int,
    *,
    cap: ExponentLike | None = None,
    ceiling: float = DEFAULT_PROBE_CEILING,
    depth: int = DEFAULT_PROBE_DEPTH,
) -> Exponent:
    """Search for a lower-endpoint eps < p with w in A_{p/eps} numerically.

    Membership is judged by the estimated A-index constant at a fixed dyadic
    depth staying below `ceiling`.  Because the A classes are nested upward,
    the passing set of eps is an interval (0, eps*); a bisection over at most
    `budget` candidates returns the largest passing eps found.

    Raises SearchFailed when no candidate passes.
    """
    p = as_exponent(p)
    if p.is_inf or p <= 0:
        raise DomainError(f"probe needs a finite positive p, got {p}")
    if budget < 1:
        raise DomainError("budget must be >= 1")
    hi = p.frac if cap is None else as_exponent(cap).frac
    if not (0 < hi <= p.frac):
        raise DomainError(f"cap must lie in (0, p], got {hi}")

    best: Fraction | None = None
    lo = Fraction(0)
    cand = hi / 2
    for _ in range(budget):
        index = Exponent(p.frac / cand)
        ap_est, _ = estimate_class_constants(w, WeightClassSpec(index, Exponent(1)), depth)
        if ap_est <= ceiling:
            best, lo = cand, cand
            cand = (cand + hi) / 2
        else:
            hi = cand
            cand = (lo + cand) / 2
    if best is None:
        raise SearchFailed(
            f"no eps in (0, {hi}) kept the estimated A_(p/eps) constant below "
            f"{ceiling} at depth {depth}"
        )
    return Exponent(best)
