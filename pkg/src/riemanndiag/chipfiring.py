"""Chip-firing on multigraphs: Laplacians, q-reduced divisors via burning,
Baker-Norine rank, and the induced threshold functions (including the
closed-form genus-1 cycle family)."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, lcm

from .errors import InputError
from .functions import RiemannFunction
from .lattice import Point, deg


@dataclass(frozen=True)
class Multigraph:
    """Connected multigraph without self-loops, stored as a symmetric
    multiplicity matrix."""

    n: int
    mult: tuple  # tuple of tuples, n x n

    def __post_init__(self):
        m = self.mult
        if self.n < 1 or len(m) != self.n or any(len(row) != self.n for row in m):
            raise ValueError("multiplicity matrix must be n x n")
        for i in range(self.n):
            if m[i][i] != 0:
                raise ValueError("self-loops are not allowed")
            for j in range(self.n):
                if m[i][j] < 0 or m[i][j] != m[j][i]:
                    raise ValueError("multiplicity matrix must be symmetric non-negative")
        if not self._connected():
            raise ValueError("graph must be connected")

    def _connected(self) -> bool:
        seen = {0}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for v in range(self.n):
                if self.mult[u][v] and v not in seen:
                    seen.add(v)
                    queue.append(v)
        return len(seen) == self.n

    def degree(self, v: int) -> int:
        return sum(self.mult[v])

    @property
    def edge_count(self) -> int:
        return sum(sum(row) for row in self.mult) // 2

    @property
    def genus(self) -> int:
        return self.edge_count - self.n + 1

    def distances_from(self, q: int):
        dist = [None] * self.n
        dist[q] = 0
        queue = deque([q])
        while queue:
            u = queue.popleft()
            for v in range(self.n):
                if self.mult[u][v] and dist[v] is None:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return dist

    @staticmethod
    def from_edges(n: int, edges) -> "Multigraph":
        m = [[0] * n for _ in range(n)]
        for item in edges:
            u, v, *rest = item
            w = rest[0] if rest else 1
            if u == v:
                raise ValueError("self-loops are not allowed")
            m[u][v] += w
            m[v][u] += w
        return Multigraph(n, tuple(tuple(row) for row in m))

    @staticmethod
    def from_json(spec: dict) -> "Multigraph":
        for fld in ("n", "edges"):
            if fld not in spec:
                raise InputError(f"graph spec: missing field '{fld}'")
        try:
            return Multigraph.from_edges(
                int(spec["n"]),
                [(int(u), int(v), int(w)) for u, v, w in
                 ((e + [1] if len(e) == 2 else e) for e in (list(e) for e in spec["edges"]))],
            )
        except (TypeError, ValueError) as exc:
            raise InputError(f"graph spec: {exc}") from exc

    def to_json(self) -> dict:
        edges = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if self.mult[i][j]:
                    edges.append([i, j, self.mult[i][j]])
        return {"n": self.n, "edges": edges}


def cycle_graph(n: int) -> Multigraph:
    if n == 2:
        return Multigraph.from_edges(2, [(0, 1, 2)])
    return Multigraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Multigraph:
    return Multigraph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def dipole_graph(k: int) -> Multigraph:
    """Two vertices joined by k parallel edges."""
    return Multigraph.from_edges(2, [(0, 1, k)])


def laplacian(G: Multigraph):
    return [
        [G.degree(i) if i == j else -G.mult[i][j] for j in range(G.n)]
        for i in range(G.n)
    ]


def canonical_divisor(G: Multigraph) -> Point:
    return tuple(G.degree(v) - 2 for v in range(G.n))


def dhar_reduce(G: Multigraph, d: Point, q: int = 0) -> Point:
    """The unique q-reduced divisor linearly equivalent to d.

    Phase 1 clears debt off q by reverse-firing distance shells from the
    outside in; phase 2 repeatedly fires the maximal unburnt set found by
    burning from q.  Both phases are deterministic.
    """
    if len(d) != G.n:
        raise ValueError("divisor length must match the vertex count")
    vals = list(d)
    dist = G.distances_from(q)
    for ell in range(max(dist), 0, -1):
        shell = [v for v in range(G.n) if dist[v] == ell]
        inside = [v for v in range(G.n) if dist[v] >= ell]
        outside = [v for v in range(G.n) if dist[v] < ell]
        gain = {v: sum(G.mult[v][w] for w in outside) for v in inside}
        while any(vals[v] < 0 for v in shell):
            need = max(
                -(-(-vals[v]) // gain[v]) if gain[v] else 0
                for v in shell if vals[v] < 0
            )
            times = max(1, need)
            for v in inside:
                vals[v] += times * gain[v]
            for w in outside:
                vals[w] -= times * sum(G.mult[w][v] for v in inside)
    guard = 0
    while True:
        burnt = [False] * G.n
        burnt[q] = True
        changed = True
        while changed:
            changed = False
            for v in range(G.n):
                if burnt[v]:
                    continue
                incoming = sum(G.mult[v][w] for w in range(G.n) if burnt[w])
                if vals[v] < incoming:
                    burnt[v] = True
                    changed = True
        unburnt = [v for v in range(G.n) if not burnt[v]]
        if not unburnt:
            return tuple(vals)
        for v in unburnt:
            vals[v] -= sum(G.mult[v][w] for w in range(G.n) if burnt[w])
        for w in range(G.n):
            if burnt[w]:
                vals[w] += sum(G.mult[w][v] for v in unburnt)
        guard += 1
        if guard > 100_000:
            raise RuntimeError("q-reduction did not stabilize")


@lru_cache(maxsize=None)
def _is_effective(G: Multigraph, d: Point) -> bool:
    if deg(d) < 0:
        return False
    if all(x >= 0 for x in d):
        return True
    return dhar_reduce(G, d, 0)[0] >= 0


def is_effective(G: Multigraph, d) -> bool:
    """Whether d is linearly equivalent to a non-negative divisor."""
    return _is_effective(G, tuple(d))


@lru_cache(maxsize=None)
def _f_value(G: Multigraph, d: Point) -> int:
    # min degree of an effective E with d - E not effective; non-effective
    # divisors are downward closed, so one unit step at a time suffices.
    if not _is_effective(G, d):
        return 0
    n = len(d)
    return 1 + min(
        _f_value(G, d[:i] + (d[i] - 1,) + d[i + 1:]) for i in range(n)
    )


def bn_rank(G: Multigraph, d) -> int:
    """Baker-Norine rank: -1 + distance from d to the non-effective set."""
    return _f_value(G, tuple(d)) - 1


def sandpile_invariants(G: Multigraph):
    """Diagonal entries of a unimodular diagonalization of the reduced
    Laplacian (the divisor-class group's elementary divisors, up to order)."""
    L = laplacian(G)
    reduced = [row[1:] for row in L[1:]]
    _, D = diagonalize_rows_tracked(reduced)
    return tuple(abs(D[i][i]) for i in range(len(reduced)))


def sandpile_exponent(G: Multigraph) -> int:
    invs = [x for x in sandpile_invariants(G) if x]
    return lcm(*invs) if invs else 1


def bn_function(G: Multigraph) -> RiemannFunction:
    """f = 1 + rank, with offset 1 - genus and period the exponent of the
    divisor class group."""
    g = G.genus
    return RiemannFunction(
        arity=G.n,
        offset=1 - g,
        zero_threshold=-1,
        linear_threshold=max(2 * g - 1, 0),
        evaluator=lambda d: _f_value(G, tuple(d)),
        period=sandpile_exponent(G),
        name=f"baker-norine[{G.n}]",
        _spec={"kind": "baker_norine", "graph": G.to_json()},
    )


def cycle_genus1_function(n: int) -> RiemannFunction:
    """Closed form of the cycle rank function: max(0, deg d) away from degree
    zero; at degree zero the value is 1 exactly when sum(i * d_i) over the
    first n-1 coordinates is divisible by n."""
    if n < 2:
        raise ValueError("cycle length must be >= 2")

    def ev(d: Point) -> int:
        dd = deg(d)
        if dd != 0:
            return max(0, dd)
        return 1 if sum((i + 1) * d[i] for i in range(n - 1)) % n == 0 else 0

    return RiemannFunction(
        arity=n,
        offset=0,
        zero_threshold=-1,
        linear_threshold=1,
        evaluator=ev,
        period=n,
        name=f"genus1-cycle[{n}]",
        _spec={"kind": "genus1_cycle", "cycle_length": n},
    )


# -- integer lattice helpers -------------------------------------------------------


def diagonalize_rows_tracked(A):
    """Unimodular diagonalization U*A*V = D, returning (U, D); the column
    transform is discarded.  The divisibility chain of Smith normal form is
    not enforced (memberships and lcm's do not depend on it)."""
    D = [list(row) for row in A]
    m = len(D)
    n = len(D[0]) if m else 0
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    t = 0
    while t < min(m, n):
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] != 0 and (best is None or abs(D[i][j]) < best):
                    best = abs(D[i][j])
                    piv = (i, j)
        if piv is None:
            break
        i0, j0 = piv
        if i0 != t:
            D[t], D[i0] = D[i0], D[t]
            U[t], U[i0] = U[i0], U[t]
        if j0 != t:
            for row in D:
                row[t], row[j0] = row[j0], row[t]
        while True:
            done = True
            for i in range(t + 1, m):
                if D[i][t] != 0:
                    qq = D[i][t] // D[t][t]
                    if qq:
                        D[i] = [a - qq * b for a, b in zip(D[i], D[t])]
                        U[i] = [a - qq * b for a, b in zip(U[i], U[t])]
                    if D[i][t] != 0:
                        D[t], D[i] = D[i], D[t]
                        U[t], U[i] = U[i], U[t]
                        done = False
            for j in range(t + 1, n):
                if D[t][j] != 0:
                    qq = D[t][j] // D[t][t]
                    if qq:
                        for row in D:
                            row[j] -= qq * row[t]
                    if D[t][j] != 0:
                        for row in D:
                            row[t], row[j] = row[j], row[t]
                        done = False
            if done and all(D[i][t] == 0 for i in range(t + 1, m)) and all(
                D[t][j] == 0 for j in range(t + 1, n)
            ):
                break
        t += 1
    return U, D


class LatticeMembership:
    """Membership test for the integer column span of a fixed matrix."""

    def __init__(self, A):
        self.m = len(A)
        self.U, self.D = diagonalize_rows_tracked(A)

    def contains(self, v) -> bool:
        w = [sum(self.U[i][k] * v[k] for k in range(self.m)) for i in range(self.m)]
        for i in range(self.m):
            di = self.D[i][i] if i < len(self.D) and i < len(self.D[0]) else 0
            if di == 0:
                if w[i] != 0:
                    return False
            elif w[i] % di != 0:
                return False
        return True
