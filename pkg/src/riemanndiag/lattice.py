"""Lattice points of Z^n, degree, standard vectors, and finite windows."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

Point = tuple[int, ...]


def deg(d: Point) -> int:
    """Sum of coordinates."""
    return sum(d)


def e_i(n: int, i: int) -> Point:
    """i-th standard basis vector of Z^n (0-indexed)."""
    if not 0 <= i < n:
        raise IndexError(f"coordinate {i} out of range for arity {n}")
    return tuple(1 if j == i else 0 for j in range(n))


def e_set(n: int, subset) -> Point:
    """Sum of standard basis vectors over a subset of coordinates."""
    s = set(subset)
    return tuple(1 if j in s else 0 for j in range(n))


def vadd(a: Point, b: Point) -> Point:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vsub(a: Point, b: Point) -> Point:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vneg(a: Point) -> Point:
    return tuple(-x for x in a)


def vscale(c: int, a: Point) -> Point:
    return tuple(c * x for x in a)


def leq(a: Point, b: Point) -> bool:
    """Componentwise partial order a <= b."""
    return all(x <= y for x, y in zip(a, b, strict=True))


def subsets(n: int):
    """All subsets of range(n), smallest first; order is deterministic."""
    for k in range(n + 1):
        yield from itertools.combinations(range(n), k)


@dataclass(frozen=True)
class Window:
    """Componentwise box {d : lower <= d <= upper} used for sampled checks."""

    lower: Point
    upper: Point

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise ValueError("window corners must have equal arity")
        if not leq(self.lower, self.upper):
            raise ValueError("window lower corner must be <= upper corner")

    @property
    def arity(self) -> int:
        return len(self.lower)

    def __iter__(self):
        ranges = [range(lo, hi + 1) for lo, hi in zip(self.lower, self.upper)]
        return (tuple(p) for p in itertools.product(*ranges))

    def __contains__(self, d: Point) -> bool:
        return leq(self.lower, d) and leq(d, self.upper)

    def size(self) -> int:
        out = 1
        for lo, hi in zip(self.lower, self.upper):
            out *= hi - lo + 1
        return out


def box(n: int, lo: int, hi: int) -> Window:
    """The cube [lo, hi]^n."""
    return Window((lo,) * n, (hi,) * n)


def parse_point(text: str) -> Point:
    """Parse "(d1,d2,...)" or "d1,d2,..." into a lattice point."""
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    parts = [p.strip() for p in s.split(",") if p.strip() != ""]
    if not parts:
        raise ValueError(f"empty lattice point: {text!r}")
    try:
        return tuple(int(p) for p in parts)
    except ValueError as exc:
        raise ValueError(f"non-integer coordinate in {text!r}") from exc


def format_point(d: Point) -> str:
    return "(" + ",".join(str(x) for x in d) + ")"
