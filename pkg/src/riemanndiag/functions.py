"""Integer functions Z^n -> Z with threshold structure: zero for small degree,
deg(d) + offset for large degree.  Finite data is an oracle plus explicit
thresholds; every global claim is only ever verified on sampled windows."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Optional

from .errors import InputError, PeriodNotFound
from .lattice import Point, Window, deg, e_i, leq, subsets, vadd, vsub, vscale


@dataclass(frozen=True)
class RiemannFunction:
    """A function f: Z^n -> Z with f(d)=0 for deg(d) <= zero_threshold and
    f(d)=deg(d)+offset for deg(d) >= linear_threshold.

    The evaluator must be pure and total; ``period`` (invariance under all
    translations p*(e_i - e_j)) is declared metadata, checked on windows,
    never inferred silently.
    """

    arity: int
    offset: int
    zero_threshold: int
    linear_threshold: int
    evaluator: Callable[[Point], int]
    period: Optional[int] = None
    name: str = ""
    _spec: Optional[dict] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("arity must be >= 1")
        if self.zero_threshold >= self.linear_threshold:
            raise ValueError("zero_threshold must be < linear_threshold")
        if self.period is not None and self.period < 1:
            raise ValueError("period must be a positive integer")

    def __call__(self, d: Point) -> int:
        if len(d) != self.arity:
            raise ValueError(f"point arity {len(d)} != function arity {self.arity}")
        return self.evaluator(d)

    # -- weights -----------------------------------------------------------

    def mobius_weight(self, d: Point) -> int:
        """Alternating-sign sum over down-shifts: sum_I (-1)^|I| f(d - e_I)."""
        n = self.arity
        total = 0
        for sub in subsets(n):
            shifted = list(d)
            for i in sub:
                shifted[i] -= 1
            total += (-1) ** len(sub) * self(tuple(shifted))
        return total

    def sum_weight_below(self, d: Point) -> int:
        """Triangle sum of mobius_weight over {d' <= d}, arity 2 only.

        Finite because weights vanish outside the degree band
        (zero_threshold, linear_threshold + 1].
        """
        if self.arity != 2:
            raise ValueError("triangle summation is implemented for arity 2")
        lo = self.zero_threshold + 1
        total = 0
        for a1 in range(lo - d[1], d[0] + 1):
            for a2 in range(lo - a1, min(d[1], self.linear_threshold + 1 - a1) + 1):
                total += self.mobius_weight((a1, a2))
        return total

    # -- duals and restrictions ---------------------------------------------

    def dual(self, K: Point) -> "RiemannFunction":
        """The K-dual d |-> f(K-d) - deg(K-d) - offset; applying twice at the
        same K gives back a function pointwise equal to f."""
        if len(K) != self.arity:
            raise ValueError("K must have the function's arity")
        C, degK = self.offset, deg(K)
        f = self

        def ev(d: Point, _f=f, _K=K, _C=C) -> int:
            Kd = vsub(_K, d)
            return _f(Kd) - deg(Kd) - _C

        return RiemannFunction(
            arity=self.arity,
            offset=-degK - C,
            zero_threshold=degK - self.linear_threshold,
            linear_threshold=degK - self.zero_threshold,
            evaluator=ev,
            period=self.period,
            name=f"dual@{K}({self.name})" if self.name else "",
        )

    def restrict_two(self, i: int, j: int, base: Point) -> "RiemannFunction":
        """Arity-2 slice (a_i, a_j) |-> f(base + a_i e_i + a_j e_j); its offset
        is deg(base) + offset independently of the pair (i, j)."""
        n = self.arity
        if i == j:
            raise ValueError("restriction coordinates must be distinct")
        if not (0 <= i < n and 0 <= j < n):
            raise IndexError(f"coordinates ({i},{j}) out of range for arity {n}")
        if len(base) != n:
            raise ValueError("base point must have the function's arity")
        f, degb = self, deg(base)

        def ev(a: Point, _f=f, _i=i, _j=j, _base=base) -> int:
            d = list(_base)
            d[_i] += a[0]
            d[_j] += a[1]
            return _f(tuple(d))

        return RiemannFunction(
            arity=2,
            offset=degb + self.offset,
            zero_threshold=self.zero_threshold - degb,
            linear_threshold=self.linear_threshold - degb,
            evaluator=ev,
            period=self.period,
            name=f"{self.name}|({i},{j})@{base}" if self.name else "",
        )

    # -- sampled checks ------------------------------------------------------

    def default_window(self, extend: int = 2) -> Window:
        """Box whose degrees cover one unit beyond both threshold regimes;
        off-by-one faults in either rule land inside it."""
        n = self.arity
        lo_deg = self.zero_threshold - extend
        hi_deg = self.linear_threshold + extend
        lo = min(-extend, lo_deg if n == 1 else lo_deg // n - extend)
        hi = max(extend, hi_deg if n == 1 else -(-hi_deg // n) + extend)
        return Window((lo,) * n, (hi,) * n)

    def verify_axioms(self, window: Optional[Window] = None) -> "AxiomReport":
        """List violations of the initial-zero rule, the eventual-linear rule,
        and declared periodicity on a window.  Violations are data."""
        w = window or self.default_window()
        if w.arity != self.arity:
            raise ValueError("window arity mismatch")
        violations = []
        n = self.arity
        for d in w:
            v = self(d)
            dd = deg(d)
            if dd <= self.zero_threshold and v != 0:
                violations.append(("initial_zero", d, 0, v))
            if dd >= self.linear_threshold and v != dd + self.offset:
                violations.append(("eventual_linear", d, dd + self.offset, v))
        if self.period is not None:
            p = self.period
            for d in w:
                v = self(d)
                for i in range(n):
                    for j in range(i + 1, n):
                        t = vscale(p, vsub(e_i(n, i), e_i(n, j)))
                        vt = self(vadd(d, t))
                        if vt != v:
                            violations.append(("periodicity", d, v, vt))
        return AxiomReport(tuple(violations))

    def is_slowly_growing(self, window: Optional[Window] = None) -> bool:
        """True iff f(d) <= f(d + e_i) <= f(d) + 1 throughout the window."""
        w = window or self.default_window()
        n = self.arity
        for d in w:
            v = self(d)
            for i in range(n):
                vi = self(vadd(d, e_i(n, i)))
                if not v <= vi <= v + 1:
                    return False
        return True

    def is_invariant_under(self, t: Point, window: Optional[Window] = None) -> bool:
        """True iff f(d + t) = f(d) for every d in the window."""
        w = window or self.default_window()
        return all(self(vadd(d, t)) == self(d) for d in w)

    def cached(self) -> "RiemannFunction":
        """Same function with a memoizing evaluator (evaluators are pure)."""
        ev = lru_cache(maxsize=None)(self.evaluator)
        return replace(self, evaluator=ev)


@dataclass(frozen=True)
class AxiomReport:
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"rule": rule, "at": list(d), "expected": exp, "got": got}
                for rule, d, exp, got in self.violations
            ],
        }


def detect_period(fn: RiemannFunction, p_max: int = 24,
                  window: Optional[Window] = None) -> int:
    """Smallest p in [1, p_max] that is window-invariant under all
    p*(e_i - e_j); raises PeriodNotFound when none passes."""
    w = window or fn.default_window()
    n = fn.arity
    for p in range(1, p_max + 1):
        ok = True
        for i in range(n):
            for j in range(i + 1, n):
                t = vscale(p, vsub(e_i(n, i), e_i(n, j)))
                if not fn.is_invariant_under(t, w):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return p
    raise PeriodNotFound(f"no period <= {p_max} fits on the sampled window")


# -- constructors -------------------------------------------------------------


def max_zero_degree(n: int) -> RiemannFunction:
    """f(d) = max(0, deg d); the simplest genus-0 example."""
    return RiemannFunction(
        arity=n,
        offset=0,
        zero_threshold=-1,
        linear_threshold=0,
        evaluator=lambda d: max(0, deg(d)),
        period=1,
        name=f"max0deg[{n}]",
        _spec={"kind": "max_zero_degree", "n": n},
    )


def from_table(n: int, offset: int, zero_threshold: int, linear_threshold: int,
               entries: dict, period: Optional[int] = None) -> RiemannFunction:
    """Oracle backed by an explicit table on the degree band.

    Points with degree at or below ``zero_threshold`` evaluate to 0, at or
    above ``linear_threshold`` to deg+offset.  In between, the point is looked
    up in ``entries``; when a period p is declared, the first n-1 coordinates
    are first reduced mod p (compensating on the last coordinate, which
    preserves degree).  A miss raises KeyError: the table must cover the
    reduced band it is queried on.
    """
    table = {tuple(k): int(v) for k, v in entries.items()}

    def ev(d: Point) -> int:
        dd = deg(d)
        if dd <= zero_threshold:
            return 0
        if dd >= linear_threshold:
            return dd + offset
        key = d
        if period is not None:
            red = list(d)
            for i in range(n - 1):
                q, r = divmod(red[i], period)
                red[i] = r
                red[n - 1] += q * period
            key = tuple(red)
        if key not in table:
            raise KeyError(f"table function has no entry at {key} (from {d})")
        return table[key]

    return RiemannFunction(
        arity=n, offset=offset, zero_threshold=zero_threshold,
        linear_threshold=linear_threshold, evaluator=ev, period=period,
        name="table",
        _spec={
            "kind": "table", "n": n, "offset": offset,
            "zero_threshold": zero_threshold,
            "linear_threshold": linear_threshold,
            "period": period,
            "entries": sorted([list(k), v] for k, v in table.items()),
        },
    )


def alternating_combination(plus: list, minus: list) -> RiemannFunction:
    """Pointwise sum(plus) - sum(minus).  Offsets add and subtract; the result
    satisfies the threshold axioms only when len(plus) == len(minus) + 1
    (verify_axioms flags the unbalanced case)."""
    if not plus:
        raise ValueError("need at least one positive term")
    arity = plus[0].arity
    for g in list(plus) + list(minus):
        if g.arity != arity:
            raise ValueError("all terms must share one arity")
    offset = sum(g.offset for g in plus) - sum(g.offset for g in minus)
    zt = min(g.zero_threshold for g in list(plus) + list(minus))
    lt = max(g.linear_threshold for g in list(plus) + list(minus))
    periods = [g.period for g in list(plus) + list(minus)]
    period = None
    if all(p is not None for p in periods):
        from math import lcm
        period = lcm(*periods)

    def ev(d: Point, _p=tuple(plus), _m=tuple(minus)) -> int:
        return sum(g(d) for g in _p) - sum(g(d) for g in _m)

    return RiemannFunction(
        arity=arity, offset=offset, zero_threshold=min(zt, lt - 1),
        linear_threshold=lt, evaluator=ev, period=period,
        name="combination",
    )


def sum_functions(terms: list) -> RiemannFunction:
    return alternating_combination(list(terms), [])


def difference(left: RiemannFunction, right: RiemannFunction) -> RiemannFunction:
    return alternating_combination([left], [right])


# -- JSON ---------------------------------------------------------------------


def from_json(spec: dict) -> RiemannFunction:
    """Build a function from its JSON spec; see README for the schema."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise InputError("function spec: missing field 'kind'")
    kind = spec["kind"]
    if kind == "table":
        for fld in ("n", "offset", "zero_threshold", "linear_threshold", "entries"):
            if fld not in spec:
                raise InputError(f"function spec: missing field '{fld}'")
        entries = {}
        for item in spec["entries"]:
            try:
                d, v = item
                entries[tuple(int(x) for x in d)] = int(v)
            except (TypeError, ValueError) as exc:
                raise InputError(f"function spec: bad table entry {item!r}") from exc
        return from_table(int(spec["n"]), int(spec["offset"]),
                          int(spec["zero_threshold"]), int(spec["linear_threshold"]),
                          entries, spec.get("period"))
    if kind == "genus1_cycle":
        if "cycle_length" not in spec:
            raise InputError("function spec: missing field 'cycle_length'")
        from .chipfiring import cycle_genus1_function
        return cycle_genus1_function(int(spec["cycle_length"]))
    if kind == "baker_norine":
        if "graph" not in spec:
            raise InputError("function spec: missing field 'graph'")
        from .chipfiring import Multigraph, bn_function
        return bn_function(Multigraph.from_json(spec["graph"]))
    if kind == "max_zero_degree":
        if "n" not in spec:
            raise InputError("function spec: missing field 'n'")
        return max_zero_degree(int(spec["n"]))
    if kind == "sum":
        if "terms" not in spec:
            raise InputError("function spec: missing field 'terms'")
        return sum_functions([from_json(t) for t in spec["terms"]])
    if kind == "difference":
        for fld in ("left", "right"):
            if fld not in spec:
                raise InputError(f"function spec: missing field '{fld}'")
        return difference(from_json(spec["left"]), from_json(spec["right"]))
    raise InputError(f"function spec: unknown kind {kind!r}")


def to_json(fn: RiemannFunction) -> dict:
    """Serialize functions built by the JSON-able constructors."""
    if fn._spec is None:
        raise InputError("function was not built from a JSON-able constructor")
    return fn._spec
