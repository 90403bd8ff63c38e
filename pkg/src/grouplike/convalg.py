"""Convolution algebras of finite groupoids and their bimodules.

The algebra ``A(G)`` has basis ``delta_g`` (one per arrow) and product
``delta_g * delta_h = delta_{gh}`` when ``r(g) == l(h)``, else 0 -- the
counting-measure case of ``(a*b)(g) = sum_h a(h) b(h^-1 g)``.

A bimodule stores one sparse matrix per basis arrow for each side, acting on
column vectors.  The right action matrices satisfy ``R[gh] = R[h] R[g]``.
Tensor products over the middle algebra are computed as exact quotients.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct

from .bibundle import (Bibundle, InvalidBibundle, MiddleMismatch,
                       stacky_group_check, validate_bibundle)
from .groupoid import (FiniteGroupoid, Violation, opposite, product, terminal)
from .linalg import (RowSpace, identity, is_invertible, mat_equal, mat_vec, matmul,
                     nullspace)
from .scalars import Angle, Scalar, ZERO

__all__ = [
    "ConvolutionAlgebra", "AlgebraElement", "Bimodule", "HopfishData",
    "AlgebraMismatch", "AxiomsFailed", "Undecided",
    "convolve", "star", "bimodule_from_bibundle", "tensor_bimodules",
    "external_tensor", "regular_bimodule", "bimodule_iso", "hopfish_from_stacky_group",
    "check_coassoc", "check_counit", "module_tensor", "right_module",
    "point_module", "character_module", "hom_space", "is_intertwiner", "SCALARS",
    "bimodule_to_json", "structure_constants", "is_commutative",
    "primitive_idempotents", "is_algebra_hom", "algebra_iso",
]


class AlgebraMismatch(ValueError):
    pass


class AxiomsFailed(ValueError):
    pass


class Undecided(RuntimeError):
    """The invertible-intertwiner search ran out of budget."""


ONE = Fraction(1)


@dataclass(frozen=True)
class ConvolutionAlgebra:
    groupoid: FiniteGroupoid

    @property
    def dim(self) -> int:
        return self.groupoid.n_arrows

    def opposite(self) -> "ConvolutionAlgebra":
        return ConvolutionAlgebra(opposite(self.groupoid))

    def tensor(self, other: "ConvolutionAlgebra") -> "ConvolutionAlgebra":
        """``A(G) (x) A(H)`` realized as ``A(G x H)`` with ``(g, h) <-> g (x) h``."""
        return ConvolutionAlgebra(product(self.groupoid, other.groupoid))

    def delta(self, g: int, coeff=1) -> "AlgebraElement":
        return AlgebraElement(self, {g: Scalar(coeff)})

    def unit(self) -> "AlgebraElement":
        G = self.groupoid
        return AlgebraElement(self, {G.unit[x]: Scalar(1) for x in G.objects})

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})


SCALARS = ConvolutionAlgebra(terminal())


@dataclass(frozen=True)
class AlgebraElement:
    algebra: ConvolutionAlgebra
    coeffs: dict = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs",
                           {g: Scalar(c) for g, c in self.coeffs.items() if c})

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        _same(self, other)
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out.get(g, ZERO) + c
        return AlgebraElement(self.algebra, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "AlgebraElement":
        c = Scalar(c)
        return AlgebraElement(self.algebra, {g: c * x for g, x in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return convolve(self, other)
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra == other.algebra and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __call__(self, g: int) -> Scalar:
        return self.coeffs.get(g, ZERO)


def _same(a: AlgebraElement, b: AlgebraElement):
    if a.algebra != b.algebra:
        raise AlgebraMismatch("elements live in different algebras")


def convolve(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    _same(a, b)
    G = a.algebra.groupoid
    out: dict = {}
    for h, x in a.coeffs.items():
        for k, y in b.coeffs.items():
            hk = G.compose(h, k)
            if hk is not None:
                out[hk] = out.get(hk, ZERO) + x * y
    return AlgebraElement(a.algebra, out)


def star(a: AlgebraElement) -> AlgebraElement:
    """``a*(g) = conj(a(g^-1))``."""
    inv = a.algebra.groupoid.inv
    return AlgebraElement(a.algebra, {inv[g]: c.conj() for g, c in a.coeffs.items()})


# ---------------------------------------------------------------------------
# algebra-level comparison

def structure_constants(A: ConvolutionAlgebra) -> dict[tuple[int, int], int]:
    """``{(g, h): gh}`` over composable pairs; every other product is 0."""
    return dict(A.groupoid._comp)


def is_commutative(A: ConvolutionAlgebra) -> bool:
    sc = structure_constants(A)
    G = A.groupoid
    return all(sc.get((h, g)) == gh for (g, h), gh in sc.items()) and \
        all((h, g) in sc for g in G.arrows for h in G.arrows if (g, h) in sc)


def _characters(arrows: list[int], G: FiniteGroupoid, e: int) -> list[dict[int, int]]:
    """Homomorphisms from the loop group on ``arrows`` into ``Z_e``, by backtracking."""
    out = []
    val: dict[int, int] = {}

    def consistent(g):
        for h in val:
            for a, b in ((g, h), (h, g)):
                ab = G.compose(a, b)
                if ab in val and (val[a] + val[b] - val[ab]) % e:
                    return False
        return True

    def search(i):
        if i == len(arrows):
            out.append(dict(val))
            return
        g = arrows[i]
        for k in range(e):
            val[g] = k
            if consistent(g):
                search(i + 1)
            del val[g]

    search(0)
    return out


def primitive_idempotents(A: ConvolutionAlgebra) -> list[tuple["AlgebraElement", dict]]:
    """``(e_chi, chi)`` for a commutative algebra, one per object and character.

    ``e_chi = |S|^-1 sum_g chi(g)^-1 delta_g`` and ``delta_g e_chi = chi(g) e_chi``;
    ``chi`` maps arrows to scalars.
    """
    if not is_commutative(A):
        raise ValueError("primitive idempotents are only computed for commutative algebras")
    G = A.groupoid
    out = []
    for x in G.objects:
        loops = [g for g in G.arrows if G.l[g] == x]
        e = len(loops)
        for ks in _characters(loops, G, e):
            chi = {g: Scalar.phase(Angle(rpi=Fraction(k, e))) for g, k in ks.items()}
            elt = AlgebraElement(A, {g: chi[g].inverse() * Fraction(1, e) for g in loops})
            out.append((elt, chi))
    return out


def is_algebra_hom(A: ConvolutionAlgebra, B: ConvolutionAlgebra, images: dict) -> bool:
    """``images[g]`` is the image of ``delta_g``; checks products and the unit."""
    zero = B.zero()
    for g in A.groupoid.arrows:
        for h in A.groupoid.arrows:
            gh = A.groupoid.compose(g, h)
            want = images[gh] if gh is not None else zero
            if images[g] * images[h] != want:
                return False
    total = zero
    for x in A.groupoid.objects:
        total = total + images[A.groupoid.unit[x]]
    return total == B.unit()


def algebra_iso(A: ConvolutionAlgebra, B: ConvolutionAlgebra) -> dict | None:
    """An algebra isomorphism between commutative convolution algebras.

    Both split as products of copies of the scalars, indexed by primitive
    idempotents; matching them up in order gives the map.  Returns the images
    of the ``delta_g``, verified against the structure constants, or None
    when the idempotent counts differ.
    """
    if A.dim != B.dim:
        return None
    ea, eb = primitive_idempotents(A), primitive_idempotents(B)
    if len(ea) != len(eb) or len(ea) != A.dim:
        return None
    images = {}
    for g in A.groupoid.arrows:
        img = B.zero()
        for (_, chi), (f, _) in zip(ea, eb):
            if g in chi:
                img = img + f.scale(chi[g])
        images[g] = img
    M = {(k, g): c for g, img in images.items() for k, c in img.coeffs.items()}
    if not is_invertible(M, A.dim) or not is_algebra_hom(A, B, images):
        raise AxiomsFailed("idempotent matching did not give an isomorphism")
    return images


# ---------------------------------------------------------------------------
# bimodules

@dataclass
class Bimodule:
    left: ConvolutionAlgebra
    right: ConvolutionAlgebra
    dim: int
    L: dict  # arrow of left algebra -> sparse matrix
    R: dict  # arrow of right algebra -> sparse matrix

    def left_matrix(self, g: int) -> dict:
        return self.L.get(g, {})

    def right_matrix(self, h: int) -> dict:
        return self.R.get(h, {})

    def violations(self) -> list[Violation]:
        out = []
        for side, alg, M, anti in (("left", self.left, self.L, False),
                                   ("right", self.right, self.R, True)):
            G = alg.groupoid
            for g, h in iproduct(G.arrows, repeat=2):
                gh = G.compose(g, h)
                lhs = (matmul(M.get(h, {}), M.get(g, {})) if anti
                       else matmul(M.get(g, {}), M.get(h, {})))
                rhs = M.get(gh, {}) if gh is not None else {}
                if not _mat_eq(lhs, rhs):
                    out.append(Violation(f"{side} action multiplicative", (g, h)))
            total: dict = {}
            for x in G.objects:
                for k, v in M.get(G.unit[x], {}).items():
                    total[k] = total.get(k, 0) + v
            if not _mat_eq(total, identity(self.dim, ONE)):
                out.append(Violation(f"{side} action unital", ()))
        for g in self.left.groupoid.arrows:
            for h in self.right.groupoid.arrows:
                a, b = self.L.get(g, {}), self.R.get(h, {})
                if not _mat_eq(matmul(a, b), matmul(b, a)):
                    out.append(Violation("actions commute", (g, h)))
        return out

    def act_left(self, a: AlgebraElement, v: dict) -> dict:
        if a.algebra != self.left:
            raise AlgebraMismatch("left algebra mismatch")
        return _apply(self.L, a, v)

    def act_right(self, v: dict, b: AlgebraElement) -> dict:
        if b.algebra != self.right:
            raise AlgebraMismatch("right algebra mismatch")
        return _apply(self.R, b, v)


def _apply(mats: dict, a: AlgebraElement, v: dict) -> dict:
    out: dict = {}
    for g, c in a.coeffs.items():
        for i, x in mat_vec(mats.get(g, {}), v).items():
            out[i] = out.get(i, 0) + c * x
    return {i: x for i, x in out.items() if x}


_mat_eq = mat_equal


def regular_bimodule(A: ConvolutionAlgebra) -> Bimodule:
    G = A.groupoid
    L: dict = {}
    R: dict = {}
    for (g, h), gh in G._comp.items():
        L.setdefault(g, {})[(gh, h)] = ONE
        R.setdefault(h, {})[(gh, g)] = ONE
    return Bimodule(A, A, G.n_arrows, L, R)


def right_module(A: ConvolutionAlgebra, dim: int, R: dict) -> Bimodule:
    """A right ``A``-module, i.e. a scalars-``A`` bimodule."""
    return Bimodule(SCALARS, A, dim, {0: identity(dim, ONE)}, R)


def point_module(A: ConvolutionAlgebra, x: int) -> Bimodule:
    """Evaluation at the object ``x``: ``delta_g`` acts by 1 iff ``g`` is the unit at ``x``."""
    G = A.groupoid
    if any((G.l[g] == x or G.r[g] == x) and g != G.unit[x] for g in G.arrows):
        raise ValueError(f"object {x} carries non-unit arrows; evaluation is not multiplicative")
    return right_module(A, 1, {G.unit[x]: {(0, 0): ONE}})


def character_module(A: ConvolutionAlgebra, chi) -> Bimodule:
    """One-dimensional module of a one-object groupoid; ``delta_g`` acts by ``chi(g)``."""
    G = A.groupoid
    if G.n_objects != 1:
        raise ValueError("characters need a single object")
    R = {}
    for g in G.arrows:
        c = Scalar(chi(g))
        if c:
            R[g] = {(0, 0): c}
    return right_module(A, 1, R)


def cyclic_character(n: int, a: int):
    """``k -> exp(2 pi i a k / n)`` as an exact scalar function."""
    return lambda k: Scalar.phase(Angle(rpi=Fraction(a * k, n)))


def bimodule_from_bibundle(M: Bibundle, check: bool = True) -> Bimodule:
    """Functions on the carrier: ``delta_g . delta_m = delta_{g.m}``, likewise on the right."""
    if check:
        bad = validate_bibundle(M)
        if bad:
            raise InvalidBibundle(bad[0])
    L: dict = {}
    R: dict = {}
    for (g, m), gm in M.actL.items():
        L.setdefault(g, {})[(gm, m)] = ONE
    for (m, h), mh in M.actR.items():
        R.setdefault(h, {})[(mh, m)] = ONE
    return Bimodule(ConvolutionAlgebra(M.left), ConvolutionAlgebra(M.right),
                    M.size, L, R)


def external_tensor(P: Bimodule, Q: Bimodule) -> Bimodule:
    """``P (x) Q`` as an ``(A (x) A')``-``(B (x) B')`` bimodule (Kronecker actions)."""
    dq = Q.dim
    nL, nR = Q.left.dim, Q.right.dim

    def kron(a: dict, b: dict) -> dict:
        return {(i * dq + k, j * dq + l): x * y
                for (i, j), x in a.items() for (k, l), y in b.items()}

    L = {g * nL + h: kron(a, b) for g, a in P.L.items() for h, b in Q.L.items()}
    R = {g * nR + h: kron(a, b) for g, a in P.R.items() for h, b in Q.R.items()}
    return Bimodule(P.left.tensor(Q.left), P.right.tensor(Q.right),
                    P.dim * dq, L, R)


def _columns(M: dict) -> dict[int, dict]:
    cols: dict[int, dict] = {}
    for (i, j), x in M.items():
        if x:
            cols.setdefault(j, {})[i] = x
    return cols


class _EchelonQuotient:
    """Quotient of ``k^n`` by a span, via reduced row echelon form."""

    def __init__(self, n: int, relations):
        self.rs = RowSpace(relations)
        self.free = [c for c in range(n) if c not in self.rs.rows]
        self.pos = {c: i for i, c in enumerate(self.free)}

    def project(self, vec: dict) -> dict:
        return {self.pos[c]: x for c, x in self.rs.reduce(vec).items()}


class _MonomialQuotient:
    """Quotient by relations with at most two terms, via weighted union-find.

    Every coordinate ends up as a multiple of its class root or zero.  This is
    the common case for bimodules built from bibundles, where the generic
    elimination would be quadratic in the number of relations.
    """

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.weight = [ONE] * n  # e_i = weight[i] * e_parent[i]
        self.zero = [False] * n

    def find(self, i: int):
        w = ONE
        path = []
        while self.parent[i] != i:
            path.append(i)
            w = w * self.weight[i]
            i = self.parent[i]
        root, acc = i, w
        for j in path:  # compress
            wj = self.weight[j]
            self.parent[j], self.weight[j] = root, acc
            acc = acc / wj
        return root, w

    @classmethod
    def build(cls, n: int, relations) -> "_MonomialQuotient | None":
        q = cls(n)
        for v in relations:
            if len(v) > 2 or not all(_unit(x) for x in v.values()):
                return None
            if len(v) == 1:
                (c, _), = v.items()
                r, _ = q.find(c)
                q.zero[r] = True
                continue
            (a, x), (b, y) = v.items()
            ra, wa = q.find(a)
            rb, wb = q.find(b)
            # x wa e_ra + y wb e_rb = 0
            if ra == rb:
                if x * wa + y * wb:
                    q.zero[ra] = True
                continue
            q.parent[ra] = rb
            q.weight[ra] = -(y * wb) / (x * wa)
            q.zero[rb] = q.zero[rb] or q.zero[ra]
        roots = [c for c in range(n) if q.parent[c] == c and not q.zero[c]]
        q.free = roots
        q.pos = {c: i for i, c in enumerate(roots)}
        return q

    def project(self, vec: dict) -> dict:
        out: dict = {}
        for c, x in vec.items():
            r, w = self.find(c)
            if self.zero[r]:
                continue
            k = self.pos[r]
            out[k] = out.get(k, 0) + x * w
        return {k: x for k, x in out.items() if x}


def _unit(x) -> bool:
    return x.is_unit() if isinstance(x, Scalar) else bool(x)


@dataclass
class TensorReport:
    full_dim: int
    relation_rank: int
    dim: int


def tensor_bimodules(P: Bimodule, Q: Bimodule, report: list | None = None) -> Bimodule:
    """``P (x)_B Q``: the tensor space modulo ``p.b (x) q - p (x) b.q``."""
    if P.right != Q.left:
        raise MiddleMismatch("P's right algebra differs from Q's left algebra")
    dp, dq = P.dim, Q.dim
    relations = []
    for b in P.right.groupoid.arrows:
        Rb = _columns(P.R.get(b, {}))
        Lb = _columns(Q.L.get(b, {}))
        pairs = set()
        for i in Rb:
            pairs.update((i, j) for j in range(dq))
        for j in Lb:
            pairs.update((i, j) for i in range(dp))
        for i, j in sorted(pairs):
            v: dict = {}
            for k, x in Rb.get(i, {}).items():
                v[k * dq + j] = v.get(k * dq + j, 0) + x
            for k, x in Lb.get(j, {}).items():
                v[i * dq + k] = v.get(i * dq + k, 0) - x
            v = {c: x for c, x in v.items() if x}
            if v:
                relations.append(v)
    quotient = _MonomialQuotient.build(dp * dq, relations)
    if quotient is None:
        quotient = _EchelonQuotient(dp * dq, relations)
    free = quotient.free
    project = quotient.project

    def induced(mats: dict, on_left: bool) -> dict:
        out = {}
        for g, M in mats.items():
            cols = _columns(M)
            new: dict = {}
            for n, c in enumerate(free):
                i, j = divmod(c, dq)
                if on_left:
                    img = {k * dq + j: x for k, x in cols.get(i, {}).items()}
                else:
                    img = {i * dq + k: x for k, x in cols.get(j, {}).items()}
                for m, x in project(img).items():
                    new[(m, n)] = x
            if new:
                out[g] = new
        return out

    if report is not None:
        report.append(TensorReport(dp * dq, dp * dq - len(free), len(free)))
    return Bimodule(P.left, Q.right, len(free), induced(P.L, True), induced(Q.R, False))


# ---------------------------------------------------------------------------
# isomorphism

def hom_space(P: Bimodule, Q: Bimodule) -> list[dict]:
    """Basis of bimodule maps ``X: P -> Q`` (``X`` is ``Q.dim x P.dim``)."""
    if P.left != Q.left or P.right != Q.right:
        raise AlgebraMismatch("bimodules over different algebra pairs")
    dp, dq = P.dim, Q.dim

    def var(k, i):
        return k * dp + i

    # one-term equations force an unknown to zero; drop those as they appear
    # so later arrows only generate equations in the surviving unknowns
    live = set(range(dp * dq))
    built = -1
    by_col: dict = {}
    by_row: dict = {}
    eqs: list[dict] = []
    for mats_p, mats_q, G in ((P.L, Q.L, P.left.groupoid), (P.R, Q.R, P.right.groupoid)):
        # idempotents first: they kill most unknowns
        order = sorted(G.arrows, key=lambda g: (g not in set(G.unit), g))
        for g in order:
            A, B = mats_p.get(g, {}), mats_q.get(g, {})
            if 2 * len(live) < built or built < 0:
                by_col, by_row = {}, {}
                for c in live:
                    k, i = divmod(c, dp)
                    by_col.setdefault(i, []).append(k)
                    by_row.setdefault(k, []).append(i)
                built = len(live)
            eq: dict = {}
            # (X A)_{k,i} = sum_j X_{k j} A_{j i};  (B X)_{k,i} = sum_j B_{k j} X_{j i}
            for (j, i), x in A.items():
                for k in by_col.get(j, ()):
                    c = var(k, j)
                    if c not in live:
                        continue
                    row = eq.setdefault((k, i), {})
                    row[c] = row.get(c, 0) + x
            for (k, j), x in B.items():
                for i in by_row.get(j, ()):
                    c = var(j, i)
                    if c not in live:
                        continue
                    row = eq.setdefault((k, i), {})
                    row[c] = row.get(c, 0) - x
            for key in sorted(eq):
                v = {c: x for c, x in eq[key].items() if x}
                if len(v) == 1:
                    live.difference_update(v)
                elif v:
                    eqs.append(v)
    changed = True
    while changed:
        changed = False
        kept = []
        for v in eqs:
            v = {c: x for c, x in v.items() if c in live}
            if len(v) == 1:
                live.difference_update(v)
                changed = True
            elif v:
                kept.append(v)
        eqs = kept
    cols = sorted(live)
    pos = {c: n for n, c in enumerate(cols)}
    small = nullspace([{pos[c]: x for c, x in v.items()} for v in eqs], len(cols))
    basis = [{cols[n]: x for n, x in b.items()} for b in small]
    return [{(c // dp, c % dp): x for c, x in b.items()} for b in basis]


def bimodule_iso(P: Bimodule, Q: Bimodule, budget: int = 4096,
                 seed: int = 0) -> dict | None:
    """An invertible bimodule map ``P -> Q`` or None when none can exist.

    Tries the sum of the Hom basis, then 64 random small-integer
    combinations, then exhaustive combinations with coefficients in
    ``{0, 1, -1, 2}``.  Raises :class:`Undecided` past ``budget`` attempts.
    """
    if P.left != Q.left or P.right != Q.right:
        raise AlgebraMismatch("bimodules over different algebra pairs")
    if P.dim != Q.dim:
        return None
    n = P.dim
    if n == 0:
        return {}
    basis = hom_space(P, Q)
    if not basis:
        return None
    # the images of all Hom elements together must span Q
    image = RowSpace()
    for X in basis:
        for c in _columns(X).values():
            image.add(c)
    if len(image) < n:
        return None

    def combo(coeffs):
        out: dict = {}
        for c, X in zip(coeffs, basis):
            if c:
                for k, x in X.items():
                    out[k] = out.get(k, 0) + c * x
        return {k: x for k, x in out.items() if x}

    tried = 0
    candidates = [[1] * len(basis)]
    rng = random.Random(seed)
    candidates += [[rng.randint(-3, 3) for _ in basis] for _ in range(64)]
    for coeffs in candidates:
        X = combo(coeffs)
        tried += 1
        if is_invertible(X, n):
            return X
    for coeffs in iproduct((0, 1, -1, 2), repeat=len(basis)):
        tried += 1
        if tried > budget:
            break
        X = combo(coeffs)
        if is_invertible(X, n):
            return X
    raise Undecided(f"no invertible intertwiner found in {budget} attempts")


def is_intertwiner(X: dict, P: Bimodule, Q: Bimodule) -> bool:
    for g in P.left.groupoid.arrows:
        if not _mat_eq(matmul(X, P.L.get(g, {})), matmul(Q.L.get(g, {}), X)):
            return False
    for h in P.right.groupoid.arrows:
        if not _mat_eq(matmul(X, P.R.get(h, {})), matmul(Q.R.get(h, {}), X)):
            return False
    return True


# ---------------------------------------------------------------------------
# hopfish structure

@dataclass
class HopfishData:
    algebra: ConvolutionAlgebra
    delta: Bimodule
    epsilon: Bimodule
    antipode: Bimodule


def hopfish_from_stacky_group(G: FiniteGroupoid, Em: Bibundle, Ee: Bibundle,
                              Einv: Bibundle) -> HopfishData:
    report = stacky_group_check(G, Em, Ee, Einv)
    if not report:
        raise AxiomsFailed(report.to_json())
    A = ConvolutionAlgebra(G)
    delta = bimodule_from_bibundle(Em, check=False)
    eps = bimodule_from_bibundle(Ee, check=False)
    raw = bimodule_from_bibundle(Einv, check=False)
    # right action through the star: delta_h acts as delta_h^* = delta_{h^-1}
    R = {h: {k: (x.conj() if isinstance(x, Scalar) else x)
             for k, x in raw.R.get(G.inv[h], {}).items()}
         for h in G.arrows if raw.R.get(G.inv[h])}
    antipode = Bimodule(A, A.opposite(), raw.dim, raw.L, R)
    return HopfishData(A, delta, eps, antipode)


def _well_formed(D: HopfishData) -> bool:
    A = D.algebra
    AA = A.tensor(A)
    if D.delta.left != AA or D.delta.right != A:
        return False
    if D.epsilon.left != SCALARS or D.epsilon.right != A:
        return False
    return not D.delta.violations() and not D.epsilon.violations()


def _iso_exists(P: Bimodule, Q: Bimodule) -> bool:
    try:
        return bimodule_iso(P, Q) is not None
    except AlgebraMismatch:
        return False


def check_coassoc(D: HopfishData) -> bool:
    """``(A (x) Delta) (x)_{A(x)A} Delta  ~=  (Delta (x) A) (x)_{A(x)A} Delta``."""
    if not _well_formed(D):
        return False
    reg = regular_bimodule(D.algebra)
    lhs = tensor_bimodules(external_tensor(reg, D.delta), D.delta)
    rhs = tensor_bimodules(external_tensor(D.delta, reg), D.delta)
    return _iso_exists(lhs, rhs)


def check_counit(D: HopfishData) -> bool:
    """``(eps (x) A) (x)_{A(x)A} Delta  ~=  A  ~=  (A (x) eps) (x)_{A(x)A} Delta``."""
    if not _well_formed(D):
        return False
    reg = regular_bimodule(D.algebra)
    lhs = tensor_bimodules(external_tensor(D.epsilon, reg), D.delta)
    rhs = tensor_bimodules(external_tensor(reg, D.epsilon), D.delta)
    # 1 x G and G x 1 have the same tables as G
    return _iso_exists(lhs, reg) and _iso_exists(rhs, reg)


def module_tensor(T: Bimodule, T2: Bimodule, D: HopfishData) -> Bimodule:
    """``T (x)_Delta T' = (T (x) T') (x)_{A(x)A} Delta`` for right ``A``-modules."""
    for M in (T, T2):
        if M.right != D.algebra or M.left != SCALARS:
            raise AlgebraMismatch("module_tensor needs right modules over D's algebra")
    return tensor_bimodules(external_tensor(T, T2), D.delta)


# ---------------------------------------------------------------------------
# JSON

def _entry_json(x):
    if isinstance(x, Scalar):
        return x.to_json()
    return Scalar(x).to_json()


def bimodule_to_json(P: Bimodule) -> dict:
    def dense(M):
        return [[_entry_json(M.get((i, j), 0)) for j in range(P.dim)]
                for i in range(P.dim)]
    return {
        "dim": P.dim,
        "left_arrows": P.left.dim,
        "right_arrows": P.right.dim,
        "actLeft": {str(g): dense(M) for g, M in sorted(P.L.items())},
        "actRight": {str(h): dense(M) for h, M in sorted(P.R.items())},
    }
