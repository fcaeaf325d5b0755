"""Constructive weight decompositions.

Two routes are provided: periodic Hall splitting of non-negative r-fold
matchings into r periodic perfect matchings, and an alternating decomposition
of arbitrary periodic unit-sum weights as (sum of matchings) - (sum of
matchings), driven by a rank-2 gadget that clears one diagonal of the band
at a time.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import lcm

from .errors import FoldMismatch, NotUnitSums
from .weights import BandWeight2, PerfectMatching, band_weight, is_riemann_weight, require_fold


@dataclass(frozen=True)
class PeriodicBinarySeq:
    """Doubly-infinite 0/1 sequence given by one period of bits."""

    period: int
    bits: tuple

    def __post_init__(self):
        if self.period < 1 or len(self.bits) != self.period:
            raise ValueError("bits must list exactly `period` values")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0 or 1")

    def __call__(self, a: int) -> int:
        return self.bits[a % self.period]

    def any(self) -> bool:
        return any(self.bits)


@dataclass(frozen=True)
class AlternatingDecomposition:
    """Signed lists of perfect matchings; the weight they represent is
    sum(plus) - sum(minus)."""

    plus: tuple
    minus: tuple

    def signed_weight(self) -> BandWeight2:
        ms = list(self.plus) + list(self.minus)
        if not ms:
            return band_weight(1, {})
        p = lcm(*(m.period for m in ms))
        cells: dict = {}
        for m, sign in [(m, 1) for m in self.plus] + [(m, -1) for m in self.minus]:
            for i in range(p):
                key = (i, m(i))
                cells[key] = cells.get(key, 0) + sign
        return band_weight(p, cells)

    def verify_equals(self, w: BandWeight2) -> bool:
        return self.signed_weight() == w

    def cancelled(self) -> "AlternatingDecomposition":
        """Drop matchings occurring on both sides (equal as functions)."""
        counts = Counter(self.plus)
        counts.subtract(Counter(self.minus))
        plus, minus = [], []
        for m, c in sorted(counts.items(), key=lambda kv: (kv[0].period, kv[0].pi)):
            if c > 0:
                plus.extend([m] * c)
            elif c < 0:
                minus.extend([m] * (-c))
        return AlternatingDecomposition(tuple(plus), tuple(minus))

    def to_json(self) -> dict:
        return {
            "plus": [m.to_json() for m in self.plus],
            "minus": [m.to_json() for m in self.minus],
        }


def degree_matching(b: int) -> PerfectMatching:
    """The 1-periodic matching supported on degree b: pi(i) = b - i."""
    return PerfectMatching(1, (b,))


def u_gadget_value(s: PeriodicBinarySeq, x) -> int:
    """The gadget weight for the sequence s, evaluated at x.

    Supported in degrees 0..2 with zero row and column sums; its value on the
    degree-0 diagonal is s(a) at (a, -a).
    """
    a, d = x[0], x[0] + x[1]
    if d == 0:
        return s(a)
    if d == 1:
        return -s(a - 1) - s(a)
    if d == 2:
        return s(a - 1)
    return 0


def u_gadget_decompose(s: PeriodicBinarySeq) -> AlternatingDecomposition:
    """Write the gadget weight of s as a signed sum of p-periodic matchings
    supported in degrees 0..2.

    Cases: p = 1 uses the explicit 1-periodic combination; even p splits s
    into its even- and odd-indexed parts; odd p >= 3 splits per residue class.
    """
    p = s.period
    if not s.any():
        return AlternatingDecomposition((), ())
    if p == 1:
        w0, w1, w2 = degree_matching(0), degree_matching(1), degree_matching(2)
        return AlternatingDecomposition((w0, w2), (w1, w1))
    plus, minus = [], []
    w1 = degree_matching(1)
    if p % 2 == 0:
        if any(s(a) for a in range(0, p, 2)):
            pi = tuple(
                (-i if s(i) else 1 - i) if i % 2 == 0 else (2 - i if s(i - 1) else 1 - i)
                for i in range(p)
            )
            plus.append(PerfectMatching(p, pi))
            minus.append(w1)
        if any(s(a) for a in range(1, p, 2)):
            pi = tuple(
                (-i if s(i) else 1 - i) if i % 2 == 1 else (2 - i if s(i - 1) else 1 - i)
                for i in range(p)
            )
            plus.append(PerfectMatching(p, pi))
            minus.append(w1)
    else:
        for c in range(p):
            if not s(c):
                continue
            pi = []
            for i in range(p):
                delta = (i - c) % p
                if delta == 0:
                    pi.append(-i)
                elif delta == 1:
                    pi.append(2 - i)
                else:
                    pi.append(1 - i)
            plus.append(PerfectMatching(p, tuple(pi)))
            minus.append(w1)
    return AlternatingDecomposition(tuple(plus), tuple(minus))


def split_rfold(w: BandWeight2):
    """Split a non-negative weight with all row/column sums r into r periodic
    perfect matchings summing to it.

    Per round: build the bipartite multigraph on row/column residues with
    e(i,j) = sum of W(i,m) over m = j mod p, find a perfect matching by
    augmenting paths (lowest-index tie-breaking), lift each matched residue to
    the smallest concrete column with a positive cell, subtract, repeat.
    """
    r = require_fold(w)
    p = w.period
    work = {(a1, a2): v for a1, a2, v in w.entries}
    out = []
    for _ in range(r):
        cols_of = {i: sorted(a2 for (a1, a2) in work if a1 == i and work[(a1, a2)] > 0)
                   for i in range(p)}
        adj = {i: sorted({a2 % p for a2 in cols_of[i]}) for i in range(p)}
        match_right: dict = {}

        def try_augment(i, seen):
            for j in adj[i]:
                if j in seen:
                    continue
                seen.add(j)
                if j not in match_right or try_augment(match_right[j], seen):
                    match_right[j] = i
                    return True
            return False

        for i in range(p):
            if not try_augment(i, set()):
                raise FoldMismatch("residue graph has no perfect matching")
        match_left = {i: j for j, i in match_right.items()}
        pi = []
        for i in range(p):
            j = match_left[i]
            m = next(a2 for a2 in cols_of[i] if a2 % p == j)
            pi.append(m)
            work[(i, m)] -= 1
            if work[(i, m)] == 0:
                del work[(i, m)]
        out.append(PerfectMatching(p, tuple(pi)))
    if work:
        raise FoldMismatch("leftover cells after splitting; fold was inconsistent")
    return out


def alternating_decomposition(w: BandWeight2) -> AlternatingDecomposition:
    """Write a periodic unit-sum weight as sum(plus) - sum(minus) with
    len(plus) == len(minus) + 1, all matchings periodic.

    Non-negative weights split directly by Hall.  Otherwise the weight is
    padded to non-negative by degree matchings across the band, and the band
    is narrowed one diagonal at a time: each round clears one unit from every
    nonzero entry of the lowest diagonal by subtracting (or, for entries the
    gadget spillover drove negative, adding) a gadget decomposition.  Width
    <= 1 remainders are resolved by the two-row pattern forced by row sums.
    """
    if not is_riemann_weight(w):
        raise NotUnitSums("alternating decomposition needs all row/column sums 1")
    if w.is_nonnegative():
        return AlternatingDecomposition(tuple(split_rfold(w)), ())

    p = w.period
    plus: list = []
    minus: list = []
    work = {(a1, a2): v for a1, a2, v in w.entries}

    def apply(decomp: AlternatingDecomposition, sign: int):
        for m in decomp.plus:
            for i in range(p):
                k = (i, m(i))
                work[k] = work.get(k, 0) + sign
                if work[k] == 0:
                    del work[k]
        for m in decomp.minus:
            for i in range(p):
                k = (i, m(i))
                work[k] = work.get(k, 0) - sign
                if work[k] == 0:
                    del work[k]

    # pad to non-negative across the initial band
    c0 = -min(work.values())
    lo0, hi0 = w.band_lo, w.band_hi
    for delta in range(lo0, hi0 + 1):
        for i in range(p):
            k = (i, delta - i)
            work[k] = work.get(k, 0) + c0
            if work[k] == 0:
                del work[k]
        minus.extend([degree_matching(delta)] * c0)
    fold = 1 + c0 * (hi0 - lo0 + 1)

    guard = 0
    while work:
        degs = [a1 + a2 for a1, a2 in work]
        lo, hi = min(degs), max(degs)
        if hi - lo <= 1:
            break
        diag = [work.get((t, lo - t), 0) for t in range(p)]
        s_pos = tuple(1 if v >= 1 else 0 for v in diag)
        s_neg = tuple(1 if v <= -1 else 0 for v in diag)
        if any(s_pos):
            g = u_gadget_decompose(PeriodicBinarySeq(p, s_pos))
            g = AlternatingDecomposition(
                tuple(m.shift((0, lo)) for m in g.plus),
                tuple(m.shift((0, lo)) for m in g.minus),
            )
            plus.extend(g.plus)
            minus.extend(g.minus)
            apply(g, -1)
        if any(s_neg):
            g = u_gadget_decompose(PeriodicBinarySeq(p, s_neg))
            g = AlternatingDecomposition(
                tuple(m.shift((0, lo)) for m in g.plus),
                tuple(m.shift((0, lo)) for m in g.minus),
            )
            plus.extend(g.minus)
            minus.extend(g.plus)
            apply(g, +1)
        guard += 1
        if guard > 100_000:
            raise RuntimeError("diagonal clearing did not terminate")

    if work:
        degs = [a1 + a2 for a1, a2 in work]
        lo = min(degs)
        c = work.get((0, lo), 0)
        for t in range(p):
            if work.get((t, lo - t), 0) != c or work.get((t, lo + 1 - t), 0) != fold - c:
                raise AssertionError("two-row remainder violates the forced pattern")
        for b, count in ((lo, c), (lo + 1, fold - c)):
            side = plus if count > 0 else minus
            side.extend([degree_matching(b)] * abs(count))
    else:
        if fold != 0:
            raise AssertionError("empty remainder with nonzero fold")

    out = AlternatingDecomposition(tuple(plus), tuple(minus)).cancelled()
    if not out.verify_equals(w):
        raise AssertionError("decomposition failed to reproduce the weight")
    return out


def decomposition_by_padding(w: BandWeight2) -> AlternatingDecomposition:
    """Independent route: pad the weight to non-negative with degree matchings
    over the band, Hall-split the result, and move the padding to the minus
    side.  Used to cross-check decomposition-independent invariants."""
    if not is_riemann_weight(w):
        raise NotUnitSums("alternating decomposition needs all row/column sums 1")
    c0 = max(1, -w.min_value())
    lo, hi = w.band_lo, w.band_hi
    padded = dict({(a1, a2): v for a1, a2, v in w.entries})
    minus = []
    for delta in range(lo, hi + 1):
        for i in range(w.period):
            k = (i, delta - i)
            padded[k] = padded.get(k, 0) + c0
        minus.extend([degree_matching(delta)] * c0)
    out = AlternatingDecomposition(
        tuple(split_rfold(band_weight(w.period, padded))), tuple(minus)
    ).cancelled()
    if not out.verify_equals(w):
        raise AssertionError("padding decomposition failed to reproduce the weight")
    return out
