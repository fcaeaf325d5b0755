"""Exact linear algebra over the rationals or a prime field.

Rational-field computations on integer matrices take a fraction-free Bareiss
fast path (numpy int64 with a magnitude guard, falling back to Fractions);
everything else runs a plain Gaussian / reduced-row-echelon pass with exact
field arithmetic.  No floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import InputError

_BAREISS_GUARD = 1 << 30


class RationalField:
    char = 0
    name = "rational"

    def of(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x)
        raise InputError(f"field entry {x!r} is not an exact rational")

    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return 1 / Fraction(a)

    def __repr__(self):
        return "QQ"


class PrimeField:
    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise InputError(f"field order {p} is not prime")
        self.char = p
        self.name = f"gf:{p}"
        self.zero = 0
        self.one = 1 % p

    def of(self, x):
        if isinstance(x, Fraction):
            den = x.denominator % self.char
            if den == 0:
                raise InputError("denominator vanishes in the prime field")
            return (x.numerator % self.char) * pow(den, self.char - 2, self.char) % self.char
        if isinstance(x, int):
            return x % self.char
        if isinstance(x, str):
            return self.of(Fraction(x))
        raise InputError(f"field entry {x!r} is not exact")

    def add(self, a, b):
        return (a + b) % self.char

    def sub(self, a, b):
        return (a - b) % self.char

    def mul(self, a, b):
        return (a * b) % self.char

    def neg(self, a):
        return (-a) % self.char

    def inv(self, a):
        a %= self.char
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.char - 2, self.char)

    def __repr__(self):
        return f"GF({self.char})"


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def exact_field(name: str):
    """Parse a field selector: "rational" or "gf:<q>"."""
    if name == "rational":
        return QQ
    if name.startswith("gf:"):
        try:
            return PrimeField(int(name[3:]))
        except ValueError as exc:
            raise InputError(f"bad field selector {name!r}") from exc
    raise InputError(f"bad field selector {name!r}")


# -- ranks ---------------------------------------------------------------------


def _bareiss_rank_int(rows) -> Optional[int]:
    """Fraction-free rank of an integer matrix; None if entries may overflow."""
    M = np.array(rows, dtype=np.int64)
    if M.size == 0:
        return 0
    m, n = M.shape
    rank = 0
    prev = 1
    for c in range(n):
        if rank == m:
            break
        col = M[rank:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            M[[rank, piv]] = M[[piv, rank]]
        if int(np.abs(M[rank:]).max(initial=0)) > _BAREISS_GUARD:
            return None
        pivval = int(M[rank, c])
        below = M[rank + 1:]
        if below.shape[0]:
            M[rank + 1:] = (pivval * below - np.outer(below[:, c], M[rank])) // prev
        prev = pivval
        rank += 1
    return rank


def _rank_mod(rows, p: int) -> int:
    M = np.array(rows, dtype=np.int64) % p
    if M.size == 0:
        return 0
    m, n = M.shape
    rank = 0
    for c in range(n):
        if rank == m:
            break
        col = M[rank:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            M[[rank, piv]] = M[[piv, rank]]
        inv = pow(int(M[rank, c]), p - 2, p)
        below = M[rank + 1:]
        if below.shape[0]:
            factors = (below[:, c] * inv) % p
            M[rank + 1:] = (below - np.outer(factors, M[rank])) % p
        rank += 1
    return rank


def _rank_generic(rows, field) -> int:
    M = [[field.of(x) for x in row] for row in rows]
    m = len(M)
    n = len(M[0]) if m else 0
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, m) if M[i][c] != field.zero), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = field.inv(M[rank][c])
        for i in range(rank + 1, m):
            if M[i][c] != field.zero:
                f = field.mul(M[i][c], inv)
                M[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(M[i], M[rank])]
        rank += 1
        if rank == m:
            break
    return rank


def rank(rows, field=QQ) -> int:
    """Exact rank over the chosen field."""
    if not rows or not rows[0]:
        return 0
    if isinstance(field, PrimeField) and all(
        isinstance(x, int) for row in rows for x in row
    ):
        return _rank_mod(rows, field.char)
    if field is QQ and all(isinstance(x, int) for row in rows for x in row):
        r = _bareiss_rank_int(rows)
        if r is not None:
            return r
    return _rank_generic(rows, field)


# -- echelon, kernels, cokernels ------------------------------------------------


def rref(rows, field=QQ):
    """Reduced row echelon form; returns (pivot column list, matrix)."""
    M = [[field.of(x) for x in row] for row in rows]
    m = len(M)
    n = len(M[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c] != field.zero), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = field.inv(M[r][c])
        M[r] = [field.mul(inv, x) for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != field.zero:
                f = M[i][c]
                M[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return pivots, M


def kernel_basis(rows, ncols: int, field=QQ):
    """Basis of the right null space, one vector per free column."""
    if not rows:
        return [tuple(field.one if j == k else field.zero for j in range(ncols))
                for k in range(ncols)]
    pivots, M = rref(rows, field)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [field.zero] * ncols
        vec[free] = field.one
        for r, c in enumerate(pivots):
            vec[c] = field.neg(M[r][free])
        basis.append(tuple(vec))
    return basis


def column_space_pivot_rows(rows, nrows: int, field=QQ):
    """Row indices hit by a first-nonzero, leftmost-column echelon pass over
    the columns; the complementary rows index cokernel representatives."""
    if not rows or not rows[0]:
        return []
    transpose = [[rows[i][j] for i in range(nrows)] for j in range(len(rows[0]))]
    pivots, _ = rref(transpose, field)
    return pivots


def mat_mul(A, B, field=QQ):
    """Exact matrix product (list-of-rows representation)."""
    if not A or not B:
        return []
    n_inner = len(B)
    out = []
    for row in A:
        out_row = []
        for j in range(len(B[0])):
            acc = field.zero
            for k in range(n_inner):
                acc = field.add(acc, field.mul(field.of(row[k]), field.of(B[k][j])))
            out_row.append(acc)
        out.append(out_row)
    return out


def mat_eq(A, B, field=QQ) -> bool:
    if len(A) != len(B):
        return False
    for ra, rb in zip(A, B):
        if len(ra) != len(rb):
            return False
        if any(field.of(a) != field.of(b) for a, b in zip(ra, rb)):
            return False
    return True


def identity(n: int):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(m: int, n: int):
    return [[0] * n for _ in range(m)]
