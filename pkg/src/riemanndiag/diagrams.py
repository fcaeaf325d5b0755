"""Finite five-space diagrams over an exact field.

A diagram has values at B1, B2, B3, A1, A2 and restriction maps
B1->A1, B2->A2, B3->A1, B3->A2.  Its differential sends (b1, b2, b3) to
(r11 b1 - r31 b3, r22 b2 - r32 b3); kernel and cokernel of that map are the
two cohomology groups.  The sign convention is frozen globally so that
morphism-induced maps commute literally.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import InputError
from .linalg import QQ, PrimeField, identity, kernel_basis, mat_eq, mat_mul, rank, rref, zeros, column_space_pivot_rows

VALUES = ("B1", "B2", "B3", "A1", "A2")
B_VALUES = ("B1", "B2", "B3")
A_VALUES = ("A1", "A2")
RESTRICTIONS = (("B1", "A1"), ("B2", "A2"), ("B3", "A1"), ("B3", "A2"))


def _freeze(M):
    return tuple(tuple(row) for row in M)


def _check_shape(name, M, nrows, ncols):
    if len(M) != nrows or any(len(row) != ncols for row in M):
        raise ValueError(f"{name} must be {nrows}x{ncols}")


@dataclass(frozen=True)
class FiniteDiagram:
    field: object
    dims: dict
    rho: dict  # (B, A) pair -> matrix, rows = dim A, cols = dim B

    def __post_init__(self):
        dims = dict(self.dims)
        if set(dims) != set(VALUES):
            raise ValueError(f"dims must have keys {VALUES}")
        if any(d < 0 for d in dims.values()):
            raise ValueError("dimensions must be non-negative")
        rho = {k: _freeze(v) for k, v in self.rho.items()}
        if set(rho) != set(RESTRICTIONS):
            raise ValueError(f"rho must have keys {RESTRICTIONS}")
        for (b, a), M in rho.items():
            _check_shape(f"rho[{b}->{a}]", M, dims[a], dims[b])
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "rho", rho)

    def dim(self, P: str) -> int:
        return self.dims[P]

    @property
    def b_dim(self) -> int:
        return sum(self.dims[P] for P in B_VALUES)

    @property
    def a_dim(self) -> int:
        return sum(self.dims[P] for P in A_VALUES)

    def differential(self):
        """Block matrix of the map F(B) -> F(A); rows A1 then A2, columns
        B1, B2, B3."""
        d = self.dims
        top = [
            list(self.rho[("B1", "A1")][r])
            + [0] * d["B2"]
            + [-x for x in self.rho[("B3", "A1")][r]]
            for r in range(d["A1"])
        ]
        bot = [
            [0] * d["B1"]
            + list(self.rho[("B2", "A2")][r])
            + [-x for x in self.rho[("B3", "A2")][r]]
            for r in range(d["A2"])
        ]
        return top + bot

    def betti(self):
        """(dim kernel, dim cokernel) of the differential."""
        M = self.differential()
        r = rank(M, self.field) if M and M[0] else 0
        return self.b_dim - r, self.a_dim - r

    def chi(self) -> int:
        b0, b1 = self.betti()
        return b0 - b1

    def cohomology(self) -> "CohomologyResult":
        M = self.differential()
        if M and M[0]:
            ker = kernel_basis(M, self.b_dim, self.field)
            pivots = column_space_pivot_rows(M, self.a_dim, self.field)
        else:
            ker = kernel_basis([], self.b_dim, self.field)
            pivots = []
        coker = [i for i in range(self.a_dim) if i not in set(pivots)]
        return CohomologyResult(len(ker), len(coker), tuple(ker), tuple(coker))


@dataclass(frozen=True)
class CohomologyResult:
    b0: int
    b1: int
    kernel: tuple  # vectors in F(B) coordinates (B1 | B2 | B3)
    cokernel_indices: tuple  # standard-basis coordinates of F(A) representing H^1


@dataclass(frozen=True)
class DiagramMorphism:
    source: FiniteDiagram
    target: FiniteDiagram
    maps: dict  # value name -> matrix (dim target(P) x dim source(P))

    def __post_init__(self):
        maps = {P: _freeze(M) for P, M in self.maps.items()}
        if set(maps) != set(VALUES):
            raise ValueError(f"morphism needs maps at {VALUES}")
        for P, M in maps.items():
            _check_shape(f"phi({P})", M, self.target.dims[P], self.source.dims[P])
        object.__setattr__(self, "maps", maps)

    def verify(self) -> bool:
        """Intertwining with all four restriction maps."""
        fld = self.source.field
        for b, a in RESTRICTIONS:
            lhs = mat_mul(self.target.rho[(b, a)], self.maps[b], fld)
            rhs = mat_mul(self.maps[a], self.source.rho[(b, a)], fld)
            if not mat_eq(lhs, rhs, fld):
                return False
        return True

    def is_isomorphism(self) -> bool:
        fld = self.source.field
        if not self.verify():
            return False
        for P in VALUES:
            n = self.source.dims[P]
            if self.target.dims[P] != n:
                return False
            if n and rank([list(r) for r in self.maps[P]], fld) != n:
                return False
        return True


# -- constructors --------------------------------------------------------------


def diagram(field, dims, rho11, rho22, rho31, rho32) -> FiniteDiagram:
    return FiniteDiagram(
        field,
        dims,
        {
            ("B1", "A1"): rho11,
            ("B2", "A2"): rho22,
            ("B3", "A1"): rho31,
            ("B3", "A2"): rho32,
        },
    )


def zero_diagram(field=QQ) -> FiniteDiagram:
    return diagram(field, dict.fromkeys(VALUES, 0), [], [], [], [])


def basic_diagram(zeroed=(), field=QQ) -> FiniteDiagram:
    """One of the four basic diagrams: value k at B3, A1, A2 and at each B_i
    not in ``zeroed``; identity restrictions."""
    zeroed = set(zeroed)
    if not zeroed <= {"B1", "B2"}:
        raise ValueError("only B1 and B2 may be zeroed")
    d1 = 0 if "B1" in zeroed else 1
    d2 = 0 if "B2" in zeroed else 1
    dims = {"B1": d1, "B2": d2, "B3": 1, "A1": 1, "A2": 1}
    one = [[1]]
    return diagram(
        field,
        dims,
        one if d1 else [[]],
        one if d2 else [[]],
        one,
        one,
    )


def constant_diagram(field=QQ) -> FiniteDiagram:
    return basic_diagram((), field)


def dualizing_diagram(field=QQ) -> FiniteDiagram:
    """The basic diagram zeroed at both B1 and B2 (the Serre-type dualizer)."""
    return basic_diagram(("B1", "B2"), field)


def skyscraper(P: str, dim: int = 1, field=QQ) -> FiniteDiagram:
    """Injective one-point diagram at P: Sky_{A_i} has V at B_i, B3, A_i with
    identity maps; Sky_{B_j} has V at B_j only."""
    if P not in VALUES:
        raise ValueError(f"unknown value name {P!r}")
    dims = dict.fromkeys(VALUES, 0)
    ident = identity(dim)
    if P == "A1":
        dims.update({"B1": dim, "B3": dim, "A1": dim})
    elif P == "A2":
        dims.update({"B2": dim, "B3": dim, "A2": dim})
    else:
        dims[P] = dim
    mats = {}
    for b, a in RESTRICTIONS:
        if dims[b] == dims[a] == dim and dim > 0 and P in ("A1", "A2"):
            mats[(b, a)] = ident
        else:
            mats[(b, a)] = zeros(dims[a], dims[b])
    return FiniteDiagram(field, dims, mats)


def coskyscraper(P: str, dim: int = 1, field=QQ) -> FiniteDiagram:
    """Projective one-point diagram at P: CoSky_{B_j} has V at B_j and at the
    A_i above it with identity maps; CoSky_{A_i} has V at A_i only."""
    if P not in VALUES:
        raise ValueError(f"unknown value name {P!r}")
    dims = dict.fromkeys(VALUES, 0)
    ident = identity(dim)
    if P == "B1":
        dims.update({"B1": dim, "A1": dim})
    elif P == "B2":
        dims.update({"B2": dim, "A2": dim})
    elif P == "B3":
        dims.update({"B3": dim, "A1": dim, "A2": dim})
    else:
        dims[P] = dim
    mats = {}
    for b, a in RESTRICTIONS:
        if dims[b] == dims[a] == dim and dim > 0 and P in ("B1", "B2", "B3"):
            mats[(b, a)] = ident
        else:
            mats[(b, a)] = zeros(dims[a], dims[b])
    return FiniteDiagram(field, dims, mats)


def direct_sum(diagrams_list, field=None) -> FiniteDiagram:
    """Blockwise direct sum; Betti numbers add."""
    ds = list(diagrams_list)
    if not ds:
        return zero_diagram(field or QQ)
    fld = field or ds[0].field
    for d in ds:
        if getattr(d.field, "char", None) != getattr(fld, "char", None):
            raise ValueError("direct sum requires a common field")
    dims = {P: sum(d.dims[P] for d in ds) for P in VALUES}
    mats = {}
    for b, a in RESTRICTIONS:
        M = zeros(dims[a], dims[b])
        ro = co = 0
        for d in ds:
            block = d.rho[(b, a)]
            for i in range(d.dims[a]):
                for j in range(d.dims[b]):
                    M[ro + i][co + j] = block[i][j]
            ro += d.dims[a]
            co += d.dims[b]
        mats[(b, a)] = M
    return FiniteDiagram(fld, dims, mats)


# -- Hom and Ext ----------------------------------------------------------------


def _hom_constraint_matrix(F: FiniteDiagram, G: FiniteDiagram):
    """Linear system in the entries of the five maps phi(P) expressing
    commutation with the restriction maps.

    Row layout doubles as the induced map on the canonical two-term projective
    resolution of F, so its corank computes Ext^1(F, G).
    """
    offs = {}
    total = 0
    for P in VALUES:
        offs[P] = total
        total += G.dims[P] * F.dims[P]

    def unknown(P, r, c):
        return offs[P] + r * F.dims[P] + c

    rows = []
    for b, a in RESTRICTIONS:
        Grho = G.rho[(b, a)]
        Frho = F.rho[(b, a)]
        for r in range(G.dims[a]):
            for c in range(F.dims[b]):
                row = [0] * total
                for p in range(G.dims[b]):
                    row[unknown(b, p, c)] += Grho[r][p]
                for cp in range(F.dims[a]):
                    row[unknown(a, r, cp)] -= Frho[cp][c]
                rows.append(row)
    return rows, total


def hom_dim(F: FiniteDiagram, G: FiniteDiagram) -> int:
    """Dimension of the space of morphisms F -> G."""
    rows, total = _hom_constraint_matrix(F, G)
    if total == 0:
        return 0
    if not rows:
        return total
    return total - rank(rows, F.field)


def hom_basis(F: FiniteDiagram, G: FiniteDiagram):
    """A basis of Hom(F, G) as explicit morphisms."""
    rows, total = _hom_constraint_matrix(F, G)
    fld = F.field
    vecs = kernel_basis(rows, total, fld) if rows else kernel_basis([], total, fld)
    out = []
    for vec in vecs:
        maps = {}
        pos = 0
        for P in VALUES:
            m, n = G.dims[P], F.dims[P]
            maps[P] = [[vec[pos + r * n + c] for c in range(n)] for r in range(m)]
            pos += m * n
        out.append(DiagramMorphism(F, G, maps))
    return out


def hom(F: FiniteDiagram, G: FiniteDiagram):
    """(dimension, basis) of the morphism space."""
    basis = hom_basis(F, G)
    return len(basis), basis


def _apply_map(mat, vec, fld, out_dim):
    if out_dim == 0:
        return []
    if not vec:
        return [fld.zero] * out_dim
    return [r[0] for r in mat_mul(mat, [[x] for x in vec], fld)]


def global_sections(F: FiniteDiagram):
    """Basis of H^0 as full section tuples (values at all five points)."""
    coh = F.cohomology()
    fld = F.field
    out = []
    d = F.dims
    for vec in coh.kernel:
        b1 = list(vec[: d["B1"]])
        b2 = list(vec[d["B1"]: d["B1"] + d["B2"]])
        b3 = list(vec[d["B1"] + d["B2"]:])
        a1 = _apply_map(F.rho[("B1", "A1")], b1, fld, d["A1"])
        a2 = _apply_map(F.rho[("B2", "A2")], b2, fld, d["A2"])
        out.append({"B1": b1, "B2": b2, "B3": b3, "A1": a1, "A2": a2})
    return out


def ext_pair(F: FiniteDiagram, G: FiniteDiagram):
    """(dim Ext^0, dim Ext^1) computed from the canonical two-term projective
    resolution of F by coskyscrapers, value by value."""
    rows, total = _hom_constraint_matrix(F, G)
    n_out = len(rows)
    if total == 0:
        return 0, 0
    r = rank(rows, F.field) if rows else 0
    return total - r, n_out - r


def constant_resolution_induced_map(F: FiniteDiagram):
    """The map Hom(P0, F) -> Hom(P1, F) induced by the minimal coskyscraper
    resolution of the constant diagram, with coefficient pattern
    alpha(1,1)=alpha(2,2)=1, alpha(i,3)=-1, alpha(1,2)=alpha(2,1)=0.

    Must coincide, matrix for matrix, with the differential of F.
    """
    alpha = {("A1", "B1"): 1, ("A1", "B2"): 0, ("A1", "B3"): -1,
             ("A2", "B1"): 0, ("A2", "B2"): 1, ("A2", "B3"): -1}
    rows = []
    for a in A_VALUES:
        for r in range(F.dims[a]):
            row = []
            for b in B_VALUES:
                coeff = alpha[(a, b)]
                if coeff == 0 or (b, a) not in F.rho:
                    row.extend([0] * F.dims[b])
                else:
                    row.extend(coeff * x for x in F.rho[(b, a)][r])
            rows.append(row)
    return rows


# -- JSON ------------------------------------------------------------------------


def _entry_to_json(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def diagram_from_json(spec: dict, field=QQ) -> FiniteDiagram:
    if "dims" not in spec:
        raise InputError("diagram spec: missing field 'dims'")
    dims = spec["dims"]
    for P in VALUES:
        if P not in dims:
            raise InputError(f"diagram spec: dims missing '{P}'")
    mats = {}
    for key, pair in (("rho11", ("B1", "A1")), ("rho22", ("B2", "A2")),
                      ("rho31", ("B3", "A1")), ("rho32", ("B3", "A2"))):
        if key not in spec:
            raise InputError(f"diagram spec: missing field '{key}'")
        try:
            mats[pair] = [[field.of(x) for x in row] for row in spec[key]]
        except (TypeError, ValueError) as exc:
            raise InputError(f"diagram spec: bad matrix '{key}'") from exc
    try:
        return FiniteDiagram(field, {P: int(dims[P]) for P in VALUES}, mats)
    except ValueError as exc:
        raise InputError(f"diagram spec: {exc}") from exc


def diagram_to_json(F: FiniteDiagram) -> dict:
    out = {"dims": {P: F.dims[P] for P in VALUES}}
    for key, pair in (("rho11", ("B1", "A1")), ("rho22", ("B2", "A2")),
                      ("rho31", ("B3", "A1")), ("rho32", ("B3", "A2"))):
        out[key] = [[_entry_to_json(x) for x in row] for row in F.rho[pair]]
    return out
