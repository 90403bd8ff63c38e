"""Sparse exact linear algebra.

Vectors are dicts ``{index: value}`` and matrices dicts ``{(i, j): value}``.
Values may be :class:`fractions.Fraction` or :class:`grouplike.scalars.Scalar`;
anything supporting ``+ - * /`` and truthiness works.  Pivots are always
chosen among invertible entries, so over :class:`Scalar` an elimination that
meets only non-unit entries raises :class:`~grouplike.scalars.NonUnitError`
instead of guessing.
"""

from __future__ import annotations

from .scalars import NonUnitError, Scalar

__all__ = ["RowSpace", "nullspace", "matmul", "identity", "mat_equal",
           "mat_vec", "rank", "is_invertible", "to_dense", "from_dense"]


def _is_unit(x) -> bool:
    if isinstance(x, Scalar):
        return x.is_unit()
    return bool(x)


def _axpy(v: dict, a, w: dict) -> None:
    """v -= a*w, in place."""
    for j, x in w.items():
        y = v.get(j)
        y = -(a * x) if y is None else y - a * x
        if y:
            v[j] = y
        else:
            v.pop(j, None)


class RowSpace:
    """Incrementally maintained reduced row echelon basis of a span.

    Each stored row has coefficient 1 at its pivot and every pivot column is
    zero in all other rows.  Over a field the pivot is the leftmost nonzero
    entry of its row, so the stored basis is the canonical RREF.
    """

    def __init__(self, rows=()):
        self.rows: dict[int, dict] = {}
        self._occ: dict[int, set] = {}  # column -> pivots of rows touching it
        for r in rows:
            self.add(r)

    def __len__(self):
        return len(self.rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def reduce(self, vec: dict) -> dict:
        v = {j: x for j, x in vec.items() if x}
        # rows are fully reduced, so subtracting one never adds another pivot
        for c in [c for c in v if c in self.rows]:
            a = v.get(c)
            if a:
                _axpy(v, a, self.rows[c])
        return v

    def __contains__(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; return False when it was already in the span."""
        v = self.reduce(vec)
        if not v:
            return False
        c = next((j for j in sorted(v) if _is_unit(v[j])), None)
        if c is None:
            raise NonUnitError(f"no invertible pivot in row {v}")
        inv = 1 / v[c]
        row = {j: x * inv for j, x in v.items()}
        occ = self._occ
        for p in list(occ.get(c, ())):
            r = self.rows[p]
            a = r.get(c)
            if not a:
                continue
            before = set(r)
            _axpy(r, a, row)
            for j in before - set(r):
                occ[j].discard(p)
            for j in set(r) - before:
                occ.setdefault(j, set()).add(p)
        self.rows[c] = row
        for j in row:
            occ.setdefault(j, set()).add(c)
        return True

    def basis(self) -> list[dict]:
        return [self.rows[c] for c in self.pivots]


def nullspace(rows, ncols: int) -> list[dict]:
    """Basis of ``{x : row . x == 0 for every row}`` in ``ncols`` unknowns."""
    rs = RowSpace(rows)
    piv = set(rs.rows)
    out = []
    for f in range(ncols):
        if f in piv:
            continue
        x = {f: _one_like(rs)}
        for c, r in rs.rows.items():
            a = r.get(f)
            if a:
                x[c] = -a
        out.append(x)
    return out


def _one_like(rs: RowSpace):
    for r in rs.rows.values():
        for x in r.values():
            return x / x
    return 1


def rank(rows) -> int:
    return len(RowSpace(rows))


def mat_vec(A: dict, v: dict) -> dict:
    out: dict = {}
    for (i, j), a in A.items():
        x = v.get(j)
        if x:
            y = out.get(i)
            out[i] = a * x if y is None else y + a * x
    return {i: x for i, x in out.items() if x}


def matmul(A: dict, B: dict) -> dict:
    by_row: dict[int, list] = {}
    for (k, j), b in B.items():
        by_row.setdefault(k, []).append((j, b))
    out: dict = {}
    for (i, k), a in A.items():
        for j, b in by_row.get(k, ()):
            y = out.get((i, j))
            out[(i, j)] = a * b if y is None else y + a * b
    return {ij: x for ij, x in out.items() if x}


def identity(n: int, one=1) -> dict:
    return {(i, i): one for i in range(n)}


def mat_equal(A: dict, B: dict) -> bool:
    keys = set(A) | set(B)
    return all(_eq(A.get(k), B.get(k)) for k in keys)


def _eq(a, b) -> bool:
    if a is None:
        return not b
    if b is None:
        return not a
    return not (a - b)


def _matrix_rows(A: dict) -> dict[int, dict]:
    rows: dict[int, dict] = {}
    for (i, j), a in A.items():
        if a:
            rows.setdefault(i, {})[j] = a
    return rows


def is_invertible(A: dict, n: int) -> bool:
    return rank(_matrix_rows(A).values()) == n


def to_dense(A: dict, nrows: int, ncols: int, zero=0) -> list[list]:
    M = [[zero] * ncols for _ in range(nrows)]
    for (i, j), a in A.items():
        M[i][j] = a
    return M


def from_dense(M) -> dict:
    return {(i, j): a for i, row in enumerate(M) for j, a in enumerate(row) if a}
