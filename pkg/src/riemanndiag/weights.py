"""Skew-periodic two-variable weights with a bounded degree band, and the
perfect matchings they encode.

A weight W: Z^2 -> Z here is invariant under translation by (p, -p) and
supported on band_lo <= a1+a2 <= band_hi; it is stored by its base cells
with 0 <= a1 < p.  Perfect matchings are the non-negative unit-row/column-sum
case and carry the bijection pi with pi(i+p) = pi(i) - p.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Optional

from .errors import FoldMismatch, InputError, MissingPeriod, NotNonNegative, NotUnitSums
from .functions import RiemannFunction
from .lattice import Point, Window, box, deg, vsub


def _divisors(p: int):
    return (d for d in range(1, p + 1) if p % d == 0)


@dataclass(frozen=True)
class BandWeight2:
    """Skew-periodic banded weight; construct via :func:`band_weight`."""

    period: int
    band_lo: int
    band_hi: int
    entries: tuple  # sorted ((a1, a2, value), ...) with 0 <= a1 < period

    def __post_init__(self):
        object.__setattr__(self, "_table", {(a1, a2): v for a1, a2, v in self.entries})
        rows = {}
        for a1, a2, v in self.entries:
            rows.setdefault(a1, []).append((a2, v))
        prefix = {}
        for a1, cells in rows.items():
            cells.sort()
            cols = [c for c, _ in cells]
            acc, run = [], 0
            for _, v in cells:
                run += v
                acc.append(run)
            prefix[a1] = (cols, acc)
        object.__setattr__(self, "_rows", prefix)

    # -- evaluation ----------------------------------------------------------

    def __call__(self, a1: int, a2: int) -> int:
        q, r = divmod(a1, self.period)
        return self._table.get((r, a2 + q * self.period), 0)

    def value(self, a: Point) -> int:
        return self(a[0], a[1])

    def row_range_sum(self, a1: int, c_lo: Optional[int], c_hi: int) -> int:
        """Sum of W(a1, a2) over c_lo <= a2 <= c_hi (c_lo None = unbounded)."""
        q, r = divmod(a1, self.period)
        row = self._rows.get(r)
        if row is None:
            return 0
        cols, acc = row
        shift = q * self.period
        hi = bisect.bisect_right(cols, c_hi + shift)
        if hi == 0:
            return 0
        lo = 0 if c_lo is None else bisect.bisect_left(cols, c_lo + shift)
        return acc[hi - 1] - (acc[lo - 1] if lo > 0 else 0)

    def row_sum(self, a1: int) -> int:
        return self.row_range_sum(a1, None, self.band_hi - a1)

    def col_sum(self, a2: int) -> int:
        return sum(
            self(a1, a2) for a1 in range(self.band_lo - a2, self.band_hi - a2 + 1)
        )

    def support_rows(self, r_lo: int, r_hi: int):
        """Yield (a1, a2, value) for all nonzero cells with r_lo <= a1 <= r_hi."""
        for a1 in range(r_lo, r_hi + 1):
            q, r = divmod(a1, self.period)
            row = self._rows.get(r)
            if row is None:
                continue
            shift = q * self.period
            for a2 in row[0]:
                yield a1, a2 - shift, self._table[(r, a2)]

    def min_value(self) -> int:
        return min((v for _, _, v in self.entries), default=0)

    def is_nonnegative(self) -> bool:
        return self.min_value() >= 0

    # -- structure -----------------------------------------------------------

    def uniform_fold(self) -> Optional[int]:
        """The common row/column sum, or None if sums are not all equal."""
        sums = {self.row_sum(r) for r in range(self.period)}
        sums |= {self.col_sum(c) for c in range(self.period)}
        return sums.pop() if len(sums) == 1 else None

    def translate(self, t: Point) -> "BandWeight2":
        """W'(a) = W(a - t): the support moves by +t."""
        return band_weight(
            self.period,
            {(a1 + t[0], a2 + t[1]): v for a1, a2, v in self.entries},
        )

    def dual_at(self, L: Point) -> "BandWeight2":
        """Reflection W'(a) = W(L - a); an involution at fixed L."""
        return band_weight(
            self.period,
            {(L[0] - a1, L[1] - a2): v for a1, a2, v in self.entries},
        )

    def add(self, other: "BandWeight2", sign: int = 1) -> "BandWeight2":
        from math import lcm
        p = lcm(self.period, other.period)
        cells: dict = {}
        for w, s in ((self, 1), (other, sign)):
            for a1 in range(p):
                q, r = divmod(a1, w.period)
                row = w._rows.get(r)
                if row is None:
                    continue
                shift = q * w.period
                for a2 in row[0]:
                    key = (a1, a2 - shift)
                    cells[key] = cells.get(key, 0) + s * w._table[(r, a2)]
        return band_weight(p, cells)

    def to_json(self) -> dict:
        return {
            "period": self.period,
            "band": [self.band_lo, self.band_hi],
            "entries": [[a1, a2, v] for a1, a2, v in self.entries],
        }


def band_weight(period: int, cells: dict) -> BandWeight2:
    """Canonical constructor: folds cells into 0 <= a1 < period, drops zeros,
    tightens the band to the support, and minimizes the period."""
    if period < 1:
        raise ValueError("period must be a positive integer")
    folded: dict = {}
    for (a1, a2), v in cells.items():
        if v == 0:
            continue
        q, r = divmod(a1, period)
        key = (r, a2 + q * period)
        folded[key] = folded.get(key, 0) + v
    folded = {k: v for k, v in folded.items() if v != 0}
    if not folded:
        return BandWeight2(1, 0, 0, ())
    degs = [a1 + a2 for a1, a2 in folded]
    lo, hi = min(degs), max(degs)
    w = BandWeight2(period, lo, hi, tuple(sorted((a1, a2, v) for (a1, a2), v in folded.items())))
    for p in _divisors(period):
        if p == period:
            break
        if all(
            w(a1 + p, a2 - p) == v and w(a1 - p, a2 + p) == v
            for a1, a2, v in w.entries
        ):
            sub = {(a1, a2): v for a1, a2, v in w.entries if a1 < p}
            return BandWeight2(
                p, lo, hi, tuple(sorted((a1, a2, v) for (a1, a2), v in sub.items()))
            )
    return w


def weight_from_json(spec: dict) -> BandWeight2:
    for fld in ("period", "entries"):
        if fld not in spec:
            raise InputError(f"weight spec: missing field '{fld}'")
    try:
        cells = {(int(a1), int(a2)): int(v) for a1, a2, v in spec["entries"]}
    except (TypeError, ValueError) as exc:
        raise InputError("weight spec: bad entry in 'entries'") from exc
    return band_weight(int(spec["period"]), cells)


@dataclass(frozen=True)
class PerfectMatching:
    """Bijection pi: Z -> Z with pi(i + period) = pi(i) - period and bounded
    i + pi(i); stored by its values on [0, period).  Canonicalized to the
    minimal period on construction, so equality is equality of functions."""

    period: int
    pi: tuple

    def __post_init__(self):
        p = self.period
        if p < 1 or len(self.pi) != p:
            raise ValueError("pi must list exactly `period` values")
        if len({v % p for v in self.pi}) != p:
            raise NotUnitSums("pi residues collide: not a bijection mod the skew action")
        for q in _divisors(p):
            if q == p:
                break
            if all(self(i + q) == self(i) - q for i in range(p)):
                object.__setattr__(self, "period", q)
                object.__setattr__(self, "pi", self.pi[:q])
                break

    def __call__(self, i: int) -> int:
        q, r = divmod(i, self.period)
        return self.pi[r] - q * self.period

    @property
    def band_lo(self) -> int:
        return min(i + v for i, v in enumerate(self.pi))

    @property
    def band_hi(self) -> int:
        return max(i + v for i, v in enumerate(self.pi))

    def inverse_at(self, j: int) -> int:
        """The unique i with pi(i) = j."""
        for r, v in enumerate(self.pi):
            if (v - j) % self.period == 0:
                q = (v - j) // self.period
                return r + q * self.period
        raise AssertionError("bijectivity certificate violated")

    def shift(self, t: Point) -> "PerfectMatching":
        """Support moves by +t: pi'(i) = pi(i - t1) + t2."""
        return PerfectMatching(
            self.period, tuple(self(i - t[0]) + t[1] for i in range(self.period))
        )

    def dual_at(self, L: Point) -> "PerfectMatching":
        """Matching of the reflected weight W(L - a)."""
        return PerfectMatching(
            self.period, tuple(L[1] - self(L[0] - j) for j in range(self.period))
        )

    def to_weight(self) -> BandWeight2:
        return band_weight(self.period, {(i, v): 1 for i, v in enumerate(self.pi)})

    def to_json(self) -> dict:
        return {"period": self.period, "pi": list(self.pi)}


def matching_from_json(spec: dict) -> PerfectMatching:
    for fld in ("period", "pi"):
        if fld not in spec:
            raise InputError(f"matching spec: missing field '{fld}'")
    try:
        return PerfectMatching(int(spec["period"]), tuple(int(v) for v in spec["pi"]))
    except (TypeError, ValueError) as exc:
        raise InputError("matching spec: bad 'pi' values") from exc


# -- operations ---------------------------------------------------------------


def sum_below(w: BandWeight2, d: Point) -> int:
    """Finite triangle sum of W over {a <= d} (support makes it finite)."""
    total = 0
    for a1 in range(w.band_lo - d[1], d[0] + 1):
        total += w.row_range_sum(a1, None, d[1])
    return total


def is_riemann_weight(w: BandWeight2) -> bool:
    """True iff every row sum and every column sum equals 1 (checked once per
    residue class; skew-periodicity carries it everywhere)."""
    return all(w.row_sum(r) == 1 for r in range(w.period)) and all(
        w.col_sum(c) == 1 for c in range(w.period)
    )


def to_matching(w: BandWeight2) -> PerfectMatching:
    """Extract the bijection of a non-negative unit-sum weight."""
    if not w.is_nonnegative():
        raise NotNonNegative("weight has a negative value")
    if not is_riemann_weight(w):
        raise NotUnitSums("weight row/column sums are not all 1")
    pi = []
    for i in range(w.period):
        cells = [(a2, v) for a1, a2, v in w.entries if a1 == i]
        if len(cells) != 1 or cells[0][1] != 1:
            raise NotUnitSums(f"row {i} is not a single unit entry")
        pi.append(cells[0][0])
    return PerfectMatching(w.period, tuple(pi))


def weight_of(f2: RiemannFunction, verify_window: bool = True) -> BandWeight2:
    """The banded weight of an arity-2 periodic function, filled by Mobius
    inversion on one period of the band and tightened to the support."""
    if f2.arity != 2:
        raise ValueError("weight extraction needs an arity-2 function")
    if f2.period is None:
        raise MissingPeriod("function carries no declared period")
    p = f2.period
    lo = f2.zero_threshold + 1
    hi = f2.linear_threshold + 1
    cells = {}
    for a1 in range(p):
        for a2 in range(lo - a1, hi - a1 + 1):
            v = f2.mobius_weight((a1, a2))
            if v:
                cells[(a1, a2)] = v
    w = band_weight(p, cells)
    if verify_window:
        r = max(2, p)
        check = box(2, min(lo, 0) - r, max(hi, 0) + r)
        for d in check:
            if sum_below(w, d) != f2(d):
                raise MissingPeriod(
                    f"declared period {p} does not reproduce the function at {d}; "
                    "the period is unverifiable"
                )
    return w


def riemann_from_weight(w: BandWeight2) -> RiemannFunction:
    """The summation function of a unit-sum weight, as a RiemannFunction."""
    if not is_riemann_weight(w):
        raise NotUnitSums("weight row/column sums are not all 1")
    probe = (w.band_hi, w.band_hi)
    offset = sum_below(w, probe) - deg(probe)
    return RiemannFunction(
        arity=2,
        offset=offset,
        zero_threshold=w.band_lo - 1,
        linear_threshold=w.band_hi,
        evaluator=lambda d: sum_below(w, d),
        period=w.period,
        name="sum-of-weight",
    )


def check_dual_weight_identity(f2: RiemannFunction, K: Point,
                               window: Optional[Window] = None) -> bool:
    """For arity 2 and L = K + (1,1): the weight of the K-dual function equals
    the L-reflection of the weight, checked pointwise on the window."""
    if f2.arity != 2:
        raise ValueError("identity is implemented for arity 2")
    L = (K[0] + 1, K[1] + 1)
    dual = f2.dual(K)
    w = window or f2.default_window()
    return all(dual.mobius_weight(d) == f2.mobius_weight(vsub(L, d)) for d in w)


def require_fold(w: BandWeight2) -> int:
    """The fold r of an r-fold matching; errors name the failing property."""
    if not w.is_nonnegative():
        raise NotNonNegative("an r-fold matching must be non-negative")
    r = w.uniform_fold()
    if r is None:
        raise FoldMismatch("row/column sums are not all equal")
    return r
