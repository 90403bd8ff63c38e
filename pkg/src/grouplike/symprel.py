"""Linear symplectic spaces and canonical relations between them.

A relation from ``A`` to ``B`` is a subspace of ``A (+) B`` measured against
``omega_A (+) -omega_B``.  Subspaces are stored as reduced row echelon bases,
so equality of relations is plain equality of tuples.  The zero-dimensional
space plays the role of the monoidal unit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .linalg import RowSpace, nullspace, rank

__all__ = [
    "SympSpace", "LinRelation", "DimensionMismatch", "MiddleMismatch", "NotSymplectic",
    "standard_space", "zero_space", "direct_sum", "opposite_space",
    "is_isotropic", "is_coisotropic", "is_lagrangian", "orthogonal",
    "graph_of_linear_map", "is_symplectic_map", "identity_rel", "compose_rel",
    "transpose_rel", "product_rel", "evaluation", "coevaluation", "check_zigzag",
    "zigzag_report", "random_symplectic_space", "random_lagrangian",
]


class DimensionMismatch(ValueError):
    pass


class MiddleMismatch(ValueError):
    pass


class NotSymplectic(ValueError):
    pass


Vec = tuple  # tuple of Fractions


def _sparse(v) -> dict:
    return {i: Fraction(x) for i, x in enumerate(v) if x}


def _dense(d: dict, n: int) -> Vec:
    return tuple(Fraction(d.get(i, 0)) for i in range(n))


def _canonical_basis(vectors, n: int) -> tuple[Vec, ...]:
    rs = RowSpace(_sparse(v) for v in vectors)
    return tuple(_dense(r, n) for r in rs.basis())


def _bilinear(omega, u, v) -> Fraction:
    return sum((u[i] * omega[i][j] * v[j]
                for i in range(len(u)) if u[i]
                for j in range(len(v)) if v[j] and omega[i][j]), Fraction(0))


@dataclass(frozen=True)
class SympSpace:
    dim: int
    omega: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        om = tuple(tuple(Fraction(x) for x in row) for row in self.omega)
        object.__setattr__(self, "omega", om)
        n = self.dim
        if len(om) != n or any(len(r) != n for r in om):
            raise DimensionMismatch(f"omega must be {n}x{n}")
        if n % 2:
            raise NotSymplectic("odd dimension")
        for i in range(n):
            for j in range(n):
                if om[i][j] != -om[j][i]:
                    raise NotSymplectic(f"omega not skew at ({i}, {j})")
        if rank(_sparse(r) for r in om) != n:
            raise NotSymplectic("omega is degenerate")

    def pairing(self, u, v) -> Fraction:
        return _bilinear(self.omega, u, v)

    def to_json(self) -> dict:
        return {"dim": self.dim, "omega": [[str(x) for x in r] for r in self.omega]}

    @classmethod
    def from_json(cls, d: dict) -> "SympSpace":
        om = d["omega"]
        return cls(int(d.get("dim", len(om))), tuple(tuple(Fraction(x) for x in r) for r in om))


def standard_space(n: int) -> SympSpace:
    """``R^{2n}`` with ``omega = [[0, I], [-I, 0]]``."""
    om = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        om[i][n + i] = 1
        om[n + i][i] = -1
    return SympSpace(2 * n, tuple(map(tuple, om)))


def zero_space() -> SympSpace:
    return SympSpace(0, ())


def _block_diag(a, b):
    n, m = len(a), len(b)
    rows = [tuple(r) + (Fraction(0),) * m for r in a]
    rows += [(Fraction(0),) * n + tuple(r) for r in b]
    return tuple(rows)


def direct_sum(A: SympSpace, B: SympSpace) -> SympSpace:
    return SympSpace(A.dim + B.dim, _block_diag(A.omega, B.omega))


def opposite_space(A: SympSpace) -> SympSpace:
    return SympSpace(A.dim, tuple(tuple(-x for x in r) for r in A.omega))


@dataclass(frozen=True)
class LinRelation:
    source: SympSpace
    target: SympSpace
    basis: tuple[Vec, ...]

    def __post_init__(self):
        n = self.source.dim + self.target.dim
        for v in self.basis:
            if len(v) != n:
                raise DimensionMismatch(f"basis vector of length {len(v)}, expected {n}")
        object.__setattr__(self, "basis", _canonical_basis(self.basis, n))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def ambient(self) -> SympSpace:
        """``source (+) target^op``, where the relation is meant to be lagrangian."""
        return direct_sum(self.source, opposite_space(self.target))

    def __contains__(self, v) -> bool:
        rs = RowSpace(_sparse(b) for b in self.basis)
        return _sparse(v) in rs

    def to_json(self) -> dict:
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "basis": [[str(x) for x in v] for v in self.basis]}

    @classmethod
    def from_json(cls, d: dict) -> "LinRelation":
        return cls(SympSpace.from_json(d["source"]), SympSpace.from_json(d["target"]),
                   tuple(tuple(Fraction(x) for x in v) for v in d["basis"]))


def orthogonal(L: LinRelation) -> tuple[Vec, ...]:
    """Basis of the symplectic orthogonal of ``L`` in its ambient space."""
    om = L.ambient.omega
    n = len(om)
    rows = [{j: sum((u[i] * om[i][j] for i in range(n) if u[i]), Fraction(0))
             for j in range(n)} for u in L.basis]
    rows = [{j: x for j, x in r.items() if x} for r in rows]
    return _canonical_basis((_dense(v, n) for v in nullspace(rows, n)), n)


def is_isotropic(L: LinRelation) -> bool:
    om = L.ambient.omega
    return all(not _bilinear(om, u, v) for i, u in enumerate(L.basis)
               for v in L.basis[i + 1:])


def is_coisotropic(L: LinRelation) -> bool:
    return all(v in L for v in orthogonal(L))


def is_lagrangian(L: LinRelation) -> bool:
    return 2 * L.dim == L.source.dim + L.target.dim and is_isotropic(L)


def is_symplectic_map(f, A: SympSpace, B: SympSpace) -> bool:
    """``f^T omega_B f == omega_A`` for ``f`` given as ``B.dim`` rows of length ``A.dim``."""
    _check_map(f, A, B)
    for i in range(A.dim):
        for j in range(A.dim):
            col_i = [Fraction(f[k][i]) for k in range(B.dim)]
            col_j = [Fraction(f[k][j]) for k in range(B.dim)]
            if B.pairing(col_i, col_j) != A.omega[i][j]:
                return False
    return True


def _check_map(f, A: SympSpace, B: SympSpace):
    if len(f) != B.dim or any(len(r) != A.dim for r in f):
        raise DimensionMismatch(f"map must be {B.dim}x{A.dim}")


def graph_of_linear_map(f, A: SympSpace, B: SympSpace) -> LinRelation:
    """``{(a, f a)}``; lagrangian exactly when ``f`` is symplectic."""
    _check_map(f, A, B)
    basis = []
    for i in range(A.dim):
        e = [Fraction(0)] * A.dim
        e[i] = Fraction(1)
        basis.append(tuple(e) + tuple(Fraction(f[k][i]) for k in range(B.dim)))
    return LinRelation(A, B, tuple(basis))


def identity_rel(A: SympSpace) -> LinRelation:
    eye = [[int(i == j) for j in range(A.dim)] for i in range(A.dim)]
    return graph_of_linear_map(eye, A, A)


def compose_rel(L: LinRelation, K: LinRelation) -> LinRelation:
    """``{(a, c) : (a, b) in L and (b, c) in K for some b}``."""
    if L.target != K.source:
        raise MiddleMismatch("target of the first relation differs from source of the second")
    na, nb, nc = L.source.dim, L.target.dim, K.target.dim
    nl, nk = L.dim, K.dim
    # unknowns x_i (coefficients on L) then y_j (on K); middle parts must agree
    rows = []
    for t in range(nb):
        row = {}
        for i, u in enumerate(L.basis):
            if u[na + t]:
                row[i] = u[na + t]
        for j, w in enumerate(K.basis):
            if w[t]:
                row[nl + j] = -w[t]
        if row:
            rows.append(row)
    out = []
    for sol in nullspace(rows, nl + nk):
        a = [Fraction(0)] * na
        c = [Fraction(0)] * nc
        for idx, x in sol.items():
            if idx < nl:
                u = L.basis[idx]
                for s in range(na):
                    a[s] += x * u[s]
            else:
                w = K.basis[idx - nl]
                for s in range(nc):
                    c[s] += x * w[nb + s]
        out.append(tuple(a) + tuple(c))
    return LinRelation(L.source, K.target, tuple(out))


def transpose_rel(L: LinRelation) -> LinRelation:
    na = L.source.dim
    return LinRelation(L.target, L.source, tuple(v[na:] + v[:na] for v in L.basis))


def product_rel(L: LinRelation, K: LinRelation) -> LinRelation:
    """``L x K`` from ``L.source (+) K.source`` to ``L.target (+) K.target``."""
    na, nb = L.source.dim, L.target.dim
    nc, nd = K.source.dim, K.target.dim
    z = Fraction(0)
    basis = [v[:na] + (z,) * nc + v[na:] + (z,) * nd for v in L.basis]
    basis += [(z,) * na + w[:nc] + (z,) * nb + w[nc:] for w in K.basis]
    return LinRelation(direct_sum(L.source, K.source), direct_sum(L.target, K.target),
                       tuple(basis))


def evaluation(S: SympSpace) -> LinRelation:
    """``S (x) S^v -> 1`` given by the diagonal ``{(s, s)}``."""
    return LinRelation(direct_sum(S, opposite_space(S)), zero_space(),
                       identity_rel(S).basis)


def coevaluation(S: SympSpace) -> LinRelation:
    """``1 -> S^v (x) S``, again the diagonal."""
    return LinRelation(zero_space(), direct_sum(opposite_space(S), S),
                       identity_rel(S).basis)


def zigzag_report(S: SympSpace, ev: LinRelation | None = None,
                  coev: LinRelation | None = None) -> dict:
    """Both snake composites compared with the identity relation."""
    ev = evaluation(S) if ev is None else ev
    coev = coevaluation(S) if coev is None else coev
    dual = opposite_space(S)
    # S -> S (x) (S^v (x) S) = (S (x) S^v) (x) S -> S
    left = compose_rel(product_rel(identity_rel(S), coev),
                       product_rel(ev, identity_rel(S)))
    # S^v -> (S^v (x) S) (x) S^v = S^v (x) (S (x) S^v) -> S^v
    right = compose_rel(product_rel(coev, identity_rel(dual)),
                        product_rel(identity_rel(dual), ev))
    return {"S": left == identity_rel(S), "S_dual": right == identity_rel(dual),
            "ev_lagrangian": is_lagrangian(ev), "coev_lagrangian": is_lagrangian(coev)}


def check_zigzag(S: SympSpace, ev: LinRelation | None = None,
                 coev: LinRelation | None = None) -> bool:
    r = zigzag_report(S, ev, coev)
    return r["S"] and r["S_dual"]


# ---------------------------------------------------------------------------
# random data

def _random_invertible(n: int, rng: random.Random, spread: int = 3):
    while True:
        P = [[Fraction(rng.randint(-spread, spread)) for _ in range(n)] for _ in range(n)]
        if rank(_sparse(r) for r in P) == n:
            return P


def random_symplectic_space(dim: int, rng: random.Random | int = 0) -> SympSpace:
    """``P^T J P`` for a random integer matrix ``P`` of full rank."""
    rng = rng if isinstance(rng, random.Random) else random.Random(rng)
    if dim % 2:
        raise NotSymplectic("odd dimension")
    J = standard_space(dim // 2).omega
    P = _random_invertible(dim, rng)
    om = [[sum(P[k][i] * J[k][l] * P[l][j] for k in range(dim) for l in range(dim))
           for j in range(dim)] for i in range(dim)]
    return SympSpace(dim, tuple(map(tuple, om)))


def random_lagrangian(A: SympSpace, B: SympSpace,
                      rng: random.Random | int = 0) -> LinRelation:
    """Random lagrangian relation, grown one isotropic vector at a time."""
    rng = rng if isinstance(rng, random.Random) else random.Random(rng)
    amb = direct_sum(A, opposite_space(B))
    n = amb.dim
    chosen: list[Vec] = []
    while 2 * len(chosen) < n:
        # vectors orthogonal to everything chosen so far
        rows = [_sparse([sum((u[i] * amb.omega[i][j] for i in range(n) if u[i]), Fraction(0))
                         for j in range(n)]) for u in chosen]
        perp = [_dense(v, n) for v in nullspace(rows, n)]
        span = RowSpace(_sparse(u) for u in chosen)
        while True:
            coeffs = [rng.randint(-2, 2) for _ in perp]
            v = tuple(sum((c * p[i] for c, p in zip(coeffs, perp)), Fraction(0))
                      for i in range(n))
            if _sparse(v) not in span:
                break
        chosen.append(v)
    return LinRelation(A, B, tuple(chosen))
