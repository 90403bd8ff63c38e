"""Groupoid bibundles as generalized morphisms.

Conventions (fixed once, used everywhere):

* a right principal G-H bibundle is a morphism ``G -> H``;
* ``g.m`` is defined iff ``r(g) == lM(m)``;
* ``m.h`` is defined iff ``l(h) == rM(m)``.

With these, the identity bibundle of ``G`` is ``G1`` acted on by composition
on both sides.
"""

from __future__ import annotations

import os
import random
from collections import deque
from dataclasses import dataclass, field
from itertools import product as iproduct

from .groupoid import (FiniteGroupoid, Functor, GroupSpec, NotAFunctor,
                       Violation, find_group_isomorphism, groupoid_from_json,
                       groupoid_to_json, isotropy, orbits, terminal,
                       group_as_groupoid, trivial_groupoid, action_groupoid,
                       GroupAction)
from .groupoid import product as groupoid_product

__all__ = [
    "Bibundle", "Check", "Obstruction", "StackyReport",
    "InvalidBibundle", "MiddleMismatch", "NotPrincipal", "BudgetExceeded",
    "validate_bibundle", "is_right_principal", "is_left_principal",
    "identity_bibundle", "bibundle_from_functor", "compose", "product_bibundle",
    "disjoint_union", "relabel", "transpose", "retarget", "find_biequivariant_iso", "morita_refute",
    "morita_verify", "stacky_group_check", "functor_stacky_group",
    "quotient_stack_group", "mutate_action", "bibundle_to_json", "bibundle_from_json",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 4096
CONVENTION = "right principal G-H bibundle = morphism G -> H"


class InvalidBibundle(ValueError):
    pass


class MiddleMismatch(ValueError):
    pass


class NotPrincipal(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


def search_budget() -> int:
    return int(os.environ.get("GROUPLIKE_BUDGET", DEFAULT_BUDGET))


@dataclass(frozen=True)
class Check:
    """A truthy/falsy verdict carrying a witness."""

    ok: bool
    witness: tuple = ()
    reason: str = ""

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"ok": self.ok, "reason": self.reason, "witness": _jsonable(self.witness)}


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


@dataclass(frozen=True)
class Bibundle:
    left: FiniteGroupoid
    right: FiniteGroupoid
    lM: tuple[int, ...]
    rM: tuple[int, ...]
    actL: dict = field(hash=False)
    actR: dict = field(hash=False)
    labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(len(self.lM))))
        left_moves = [[] for _ in self.lM]
        right_moves = [[] for _ in self.lM]
        for (g, m), gm in self.actL.items():
            left_moves[m].append((g, gm))
        for (m, h), mh in self.actR.items():
            right_moves[m].append((h, mh))
        object.__setattr__(self, "left_moves", left_moves)
        object.__setattr__(self, "right_moves", right_moves)

    @property
    def size(self) -> int:
        return len(self.lM)

    @property
    def carrier(self) -> range:
        return range(len(self.lM))

    def act_left(self, g: int, m: int) -> int | None:
        return self.actL.get((g, m))

    def act_right(self, m: int, h: int) -> int | None:
        return self.actR.get((m, h))

    def __repr__(self):
        return (f"Bibundle({self.left!r} -> {self.right!r}, "
                f"carrier {self.size})")


def validate_bibundle(B: Bibundle) -> list[Violation]:
    G, H, out = B.left, B.right, []
    for m in B.carrier:
        if not (0 <= B.lM[m] < G.n_objects and 0 <= B.rM[m] < H.n_objects):
            out.append(Violation("moment map range", (m,)))
            return out
    for g, m in iproduct(G.arrows, B.carrier):
        gm = B.actL.get((g, m))
        if (G.r[g] == B.lM[m]) != (gm is not None):
            out.append(Violation("left action domain", (g, m)))
        elif gm is not None and (B.lM[gm] != G.l[g] or B.rM[gm] != B.rM[m]):
            out.append(Violation("left action moments", (g, m, gm)))
    for m, h in iproduct(B.carrier, H.arrows):
        mh = B.actR.get((m, h))
        if (H.l[h] == B.rM[m]) != (mh is not None):
            out.append(Violation("right action domain", (m, h)))
        elif mh is not None and (B.rM[mh] != H.r[h] or B.lM[mh] != B.lM[m]):
            out.append(Violation("right action moments", (m, h, mh)))
    if out:
        return out
    for m in B.carrier:
        if B.actL[(G.unit[B.lM[m]], m)] != m:
            out.append(Violation("left unit", (m,)))
        if B.actR[(m, H.unit[B.rM[m]])] != m:
            out.append(Violation("right unit", (m,)))
    for (g, g2), gg in G._comp.items():
        for m in B.carrier:
            if G.r[g2] == B.lM[m] and B.actL[(g, B.actL[(g2, m)])] != B.actL[(gg, m)]:
                out.append(Violation("left associativity", (g, g2, m)))
    for (h, h2), hh in H._comp.items():
        for m in B.carrier:
            if H.l[h] == B.rM[m] and B.actR[(B.actR[(m, h)], h2)] != B.actR[(m, hh)]:
                out.append(Violation("right associativity", (m, h, h2)))
    for (g, m), gm in B.actL.items():
        for h in H.arrows:
            if H.l[h] == B.rM[m] and B.actR[(gm, h)] != B.actL[(g, B.actR[(m, h)])]:
                out.append(Violation("actions commute", (g, m, h)))
    return out


def _require_valid(B: Bibundle):
    bad = validate_bibundle(B)
    if bad:
        raise InvalidBibundle(bad[0])


def is_right_principal(B: Bibundle, check_valid: bool = True) -> Check:
    """``lM`` onto, and ``m.h = m'`` has exactly one solution within lM-fibers."""
    if check_valid:
        _require_valid(B)
    G = B.left
    hit = set(B.lM)
    for x in G.objects:
        if x not in hit:
            return Check(False, (x,), "left moment map not surjective")
    for m in B.carrier:
        sols: dict[int, list[int]] = {}
        for h, mh in B.right_moves[m]:
            sols.setdefault(mh, []).append(h)
        for m2 in B.carrier:
            if B.lM[m2] != B.lM[m]:
                continue
            hs = sols.get(m2, [])
            if len(hs) != 1:
                return Check(False, (m, m2, tuple(hs)),
                             "no unique h with m.h = m'")
    return Check(True)


def is_left_principal(B: Bibundle, check_valid: bool = True) -> Check:
    if check_valid:
        _require_valid(B)
    H = B.right
    hit = set(B.rM)
    for y in H.objects:
        if y not in hit:
            return Check(False, (y,), "right moment map not surjective")
    for m in B.carrier:
        sols: dict[int, list[int]] = {}
        for g, gm in B.left_moves[m]:
            sols.setdefault(gm, []).append(g)
        for m2 in B.carrier:
            if B.rM[m2] != B.rM[m]:
                continue
            gs = sols.get(m2, [])
            if len(gs) != 1:
                return Check(False, (m, m2, tuple(gs)),
                             "no unique g with g.m = m'")
    return Check(True)


# ---------------------------------------------------------------------------
# constructions

def identity_bibundle(G: FiniteGroupoid) -> Bibundle:
    actL = {(g, m): gm for (g, m), gm in G._comp.items()}
    actR = dict(actL)
    return Bibundle(G, G, G.l, G.r, actL, actR, G.arrow_labels)


def bibundle_from_functor(phi: Functor, check: bool = True) -> Bibundle:
    """Carrier ``{(x, h) : l(h) = phi(x)}`` with ``g.(x,h) = (l(g), phi(g)h)``."""
    if check:
        bad = phi.violations()
        if bad:
            raise NotAFunctor(bad[0])
    G, H = phi.source, phi.target
    pts = [(x, h) for x in G.objects for h in H.arrows if H.l[h] == phi.on_objects[x]]
    idx = {p: i for i, p in enumerate(pts)}
    lM = tuple(x for x, _ in pts)
    rM = tuple(H.r[h] for _, h in pts)
    actL, actR = {}, {}
    for i, (x, h) in enumerate(pts):
        for g in G.arrows:
            if G.r[g] == x:
                actL[(g, i)] = idx[(G.l[g], H.compose(phi.on_arrows[g], h))]
        for h2 in H.arrows:
            hh = H.compose(h, h2)
            if hh is not None:
                actR[(i, h2)] = idx[(x, hh)]
    labels = tuple((G.object_labels[x], H.arrow_labels[h]) for x, h in pts)
    return Bibundle(G, H, lM, rM, actL, actR, labels)


def compose(M: Bibundle, N: Bibundle, check: bool = True) -> Bibundle:
    """``(M x_{H0} N)/H`` with ``(m, n).h = (m.h, h^-1.n)``."""
    if M.right != N.left:
        raise MiddleMismatch("right groupoid of M differs from left groupoid of N")
    if check:
        _require_valid(M)
        _require_valid(N)
        pr = is_right_principal(M, check_valid=False)
        if not pr:
            raise NotPrincipal(pr)
    H = M.right
    by_object: dict[int, list[int]] = {}
    for n in N.carrier:
        by_object.setdefault(N.lM[n], []).append(n)
    pairs = [(m, n) for m in M.carrier for n in by_object.get(M.rM[m], ())]
    pidx = {p: i for i, p in enumerate(pairs)}
    parent = list(range(len(pairs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, (m, n) in enumerate(pairs):
        for h, mh in M.right_moves[m]:
            hn = N.actL[(H.inv[h], n)]
            a, b = find(i), find(pidx[(mh, hn)])
            if a != b:
                parent[max(a, b)] = min(a, b)
    roots = sorted({find(i) for i in range(len(pairs))})
    cls = {r: k for k, r in enumerate(roots)}
    of = [cls[find(i)] for i in range(len(pairs))]
    lM = tuple(M.lM[pairs[r][0]] for r in roots)
    rM = tuple(N.rM[pairs[r][1]] for r in roots)
    actL, actR = {}, {}
    for i, (m, n) in enumerate(pairs):
        c = of[i]
        for g, gm in M.left_moves[m]:
            actL[(g, c)] = of[pidx[(gm, n)]]
        for k, nk in N.right_moves[n]:
            actR[(c, k)] = of[pidx[(m, nk)]]
    labels = tuple((M.labels[pairs[r][0]], N.labels[pairs[r][1]]) for r in roots)
    return Bibundle(M.left, N.right, lM, rM, actL, actR, labels)


def product_bibundle(M: Bibundle, N: Bibundle) -> Bibundle:
    G = groupoid_product(M.left, N.left)
    H = groupoid_product(M.right, N.right)
    k = N.size
    g1, h1 = N.left.n_arrows, N.right.n_arrows
    n0, r0 = N.left.n_objects, N.right.n_objects
    lM = tuple(M.lM[a] * n0 + N.lM[b] for a in M.carrier for b in N.carrier)
    rM = tuple(M.rM[a] * r0 + N.rM[b] for a in M.carrier for b in N.carrier)
    actL = {(g * g1 + g2, a * k + b): ga * k + gb
            for (g, a), ga in M.actL.items() for (g2, b), gb in N.actL.items()}
    actR = {(a * k + b, h * h1 + h2): ah * k + bh
            for (a, h), ah in M.actR.items() for (b, h2), bh in N.actR.items()}
    labels = tuple(iproduct(M.labels, N.labels))
    return Bibundle(G, H, lM, rM, actL, actR, labels)


def disjoint_union(M: Bibundle, N: Bibundle) -> Bibundle:
    if M.left != N.left or M.right != N.right:
        raise MiddleMismatch("disjoint union needs equal groupoids")
    k = M.size
    actL = dict(M.actL)
    actL.update({(g, b + k): c + k for (g, b), c in N.actL.items()})
    actR = dict(M.actR)
    actR.update({(b + k, h): c + k for (b, h), c in N.actR.items()})
    labels = tuple((0, x) for x in M.labels) + tuple((1, x) for x in N.labels)
    return Bibundle(M.left, M.right, M.lM + N.lM, M.rM + N.rM, actL, actR, labels)


def relabel(M: Bibundle, perm: list[int]) -> Bibundle:
    """Transport ``M`` along the carrier bijection ``m -> perm[m]``."""
    n = M.size
    inv = [0] * n
    for m, p in enumerate(perm):
        inv[p] = m
    lM = tuple(M.lM[inv[p]] for p in range(n))
    rM = tuple(M.rM[inv[p]] for p in range(n))
    actL = {(g, perm[m]): perm[gm] for (g, m), gm in M.actL.items()}
    actR = {(perm[m], h): perm[mh] for (m, h), mh in M.actR.items()}
    labels = tuple(M.labels[inv[p]] for p in range(n))
    return Bibundle(M.left, M.right, lM, rM, actL, actR, labels)


def retarget(M: Bibundle, left: FiniteGroupoid | None = None,
             right: FiniteGroupoid | None = None) -> Bibundle:
    """Replace a structurally equal groupoid (e.g. ``1 x G`` by ``G``)."""
    left = M.left if left is None else left
    right = M.right if right is None else right
    if left != M.left or right != M.right:
        raise MiddleMismatch("retarget requires structurally equal groupoids")
    return Bibundle(left, right, M.lM, M.rM, M.actL, M.actR, M.labels)


def transpose(M: Bibundle) -> Bibundle:
    """The H-G bibundle on the same carrier, acting through inverses.

    Right principal exactly when ``M`` is left principal, so the transpose of
    a Morita equivalence is its inverse.
    """
    G, H = M.left, M.right
    # h.m = m.h^-1 and m.g = g^-1.m
    actL = {(H.inv[h], m): mh for (m, h), mh in M.actR.items()}
    actR = {(m, G.inv[g]): gm for (g, m), gm in M.actL.items()}
    return Bibundle(H, G, M.rM, M.lM, actL, actR, M.labels)


# ---------------------------------------------------------------------------
# 2-isomorphisms

def find_biequivariant_iso(M: Bibundle, N: Bibundle,
                           budget: int | None = None) -> list[int] | None:
    """A carrier bijection commuting with moments and both actions, or None.

    Exact backtracking: fixing the image of one point fixes it on that point's
    whole G-H orbit, so only orbit representatives are branched on.  Orbits
    and candidates are visited in increasing id order, so the result is the
    first isomorphism in that order.
    """
    if M.left != N.left or M.right != N.right:
        raise MiddleMismatch("bibundles must share left and right groupoids")
    budget = search_budget() if budget is None else budget
    if max(M.size, N.size) > budget:
        raise BudgetExceeded(f"carrier size exceeds budget {budget}")
    if M.size != N.size:
        return None

    def fiber_key(B, m):
        return (B.lM[m], B.rM[m])

    from collections import Counter
    if Counter(fiber_key(M, m) for m in M.carrier) != Counter(
            fiber_key(N, m) for m in N.carrier):
        return None

    adjM = {m: [(("L", g), b) for g, b in M.left_moves[m]]
            + [(("R", h), b) for h, b in M.right_moves[m]] for m in M.carrier}
    adjN_L = {key: v for key, v in N.actL.items()}
    adjN_R = {key: v for key, v in N.actR.items()}

    def step_N(kind, x, n):
        return adjN_L.get((x, n)) if kind == "L" else adjN_R.get((n, x))

    f = [-1] * M.size
    used = [False] * N.size
    steps = [0]

    def propagate(m0, n0):
        assigned = []
        q = deque([(m0, n0)])
        while q:
            m, n = q.popleft()
            if f[m] != -1:
                if f[m] != n:
                    return assigned, False
                continue
            if used[n] or fiber_key(M, m) != fiber_key(N, n):
                return assigned, False
            f[m] = n
            used[n] = True
            assigned.append(m)
            for (kind, x), m2 in adjM[m]:
                n2 = step_N(kind, x, n)
                if n2 is None:
                    return assigned, False
                q.append((m2, n2))
        return assigned, True

    def undo(assigned):
        for m in assigned:
            used[f[m]] = False
            f[m] = -1

    def search():
        m = next((i for i in M.carrier if f[i] == -1), None)
        if m is None:
            return True
        for n in N.carrier:
            if used[n] or fiber_key(M, m) != fiber_key(N, n):
                continue
            steps[0] += 1
            if steps[0] > budget * 64:
                raise BudgetExceeded("biequivariant search exceeded its budget")
            assigned, ok = propagate(m, n)
            if ok and search():
                return True
            undo(assigned)
        return False

    return list(f) if search() else None


# ---------------------------------------------------------------------------
# Morita

@dataclass(frozen=True)
class Obstruction:
    invariant: str
    left: object
    right: object
    all_differences: dict = field(default_factory=dict, compare=False, hash=False)

    def to_json(self):
        return {"invariant": self.invariant, "left": _jsonable(self.left),
                "right": _jsonable(self.right),
                "all_differences": _jsonable(self.all_differences)}


def _isotropy_classes(G: FiniteGroupoid) -> list[GroupSpec]:
    return [isotropy(G, block[0]) for block in orbits(G)]


def _group_name(S: GroupSpec) -> str:
    if S.order == 1:
        return "1"
    if find_group_isomorphism(S, GroupSpec.cyclic(S.order)) is not None:
        return f"Z{S.order}"
    return f"G{S.order}" + ("ab" if S.is_abelian() else "")


def _same_isotropy_multiset(ig: list[GroupSpec], ih: list[GroupSpec]) -> bool:
    if len(ig) != len(ih):
        return False
    remaining = list(ih)
    for S in ig:
        match = next((i for i, T in enumerate(remaining)
                      if find_group_isomorphism(S, T) is not None), None)
        if match is None:
            return False
        remaining.pop(match)
    return True


def morita_refute(G: FiniteGroupoid, H: FiniteGroupoid) -> Obstruction | None:
    """Differing Morita invariants, or None (which proves nothing).

    Both invariants are always evaluated; ``invariant`` names the isotropy
    obstruction when present since it subsumes the orbit count.
    """
    found = {}
    ig, ih = _isotropy_classes(G), _isotropy_classes(H)
    if not _same_isotropy_multiset(ig, ih):
        found["isotropy classes"] = (sorted(_group_name(S) for S in ig),
                                     sorted(_group_name(T) for T in ih))
    if len(ig) != len(ih):
        found["orbit count"] = (len(ig), len(ih))
    if not found:
        return None
    key = next(iter(found))
    return Obstruction(key, found[key][0], found[key][1], found)


def morita_verify(G: FiniteGroupoid, H: FiniteGroupoid, M: Bibundle) -> Check:
    """True iff ``M`` is a biprincipal G-H bibundle."""
    if M.left != G or M.right != H:
        raise InvalidBibundle("bibundle does not go between the given groupoids")
    _require_valid(M)
    r = is_right_principal(M, check_valid=False)
    if not r:
        return r
    return is_left_principal(M, check_valid=False)


# ---------------------------------------------------------------------------
# stacky groups

@dataclass
class StackyReport:
    checks: dict[str, Check]
    convention: str = CONVENTION

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"ok": self.ok, "convention": self.convention,
                "checks": {k: v.to_json() for k, v in self.checks.items()}}


def _iso_check(A: Bibundle, B: Bibundle, what: str) -> Check:
    iso = find_biequivariant_iso(A, B)
    if iso is not None:
        return Check(True, tuple(iso), what)
    return Check(False, (A.size, B.size), f"{what}: no biequivariant isomorphism")


def stacky_group_check(G: FiniteGroupoid, Em: Bibundle, Ee: Bibundle,
                       Einv: Bibundle) -> StackyReport:
    """Group-object diagrams for ``(G, Em, Ee, Einv)`` up to biequivariant iso."""
    GG = groupoid_product(G, G)
    one = terminal()
    checks: dict[str, Check] = {}
    for name, B, (L, R) in (("Em", Em, (GG, G)), ("Ee", Ee, (one, G)),
                            ("Einv", Einv, (G, G))):
        if B.left != L or B.right != R:
            raise MiddleMismatch(f"{name} has the wrong groupoids")
        bad = validate_bibundle(B)
        if bad:
            checks[f"{name} valid"] = Check(False, bad[0].to_json(),
                                            f"{name}: {bad[0].axiom}")
            return StackyReport(checks)
        pr = is_right_principal(B, check_valid=False)
        if not pr:
            raise NotPrincipal((name, pr))
    Id = identity_bibundle(G)
    # (G x G) x G and G x (G x G) share ids, so the associator is the identity
    left_assoc = compose(product_bibundle(Em, Id), Em, check=False)
    right_assoc = compose(product_bibundle(Id, Em), Em, check=False)
    checks["associativity"] = _iso_check(left_assoc, right_assoc, "associativity")
    # 1 x G == G structurally, so the unitors are the identity too
    lu = retarget(compose(product_bibundle(Ee, Id), Em, check=False), left=G)
    ru = retarget(compose(product_bibundle(Id, Ee), Em, check=False), left=G)
    checks["left unit"] = _iso_check(lu, Id, "left unit")
    checks["right unit"] = _iso_check(ru, Id, "right unit")
    diag = bibundle_from_functor(Functor.diagonal(G))
    eta_e = compose(bibundle_from_functor(Functor.to_terminal(G)), Ee, check=False)
    li = compose(compose(diag, product_bibundle(Einv, Id), check=False), Em, check=False)
    ri = compose(compose(diag, product_bibundle(Id, Einv), check=False), Em, check=False)
    checks["left inverse"] = _iso_check(li, eta_e, "left inverse")
    checks["right inverse"] = _iso_check(ri, eta_e, "right inverse")
    return StackyReport(checks)


def functor_stacky_group(S: GroupSpec, discrete: bool):
    """Stacky group data from an honest group, via functor graphs.

    ``discrete=True`` gives the trivial groupoid on the set ``S``;
    ``discrete=False`` gives ``BS`` (one object), which needs ``S`` abelian
    for multiplication to be a functor.
    """
    n = S.order
    if discrete:
        G = trivial_groupoid(S.labels)
        GG = groupoid_product(G, G)
        m = Functor(GG, G, tuple(S.mul[a][b] for a in range(n) for b in range(n)),
                    tuple(S.mul[a][b] for a in range(n) for b in range(n)))
        e = Functor(terminal(), G, (S.identity,), (S.identity,))
        inv = Functor(G, G, tuple(S.inverse(a) for a in range(n)),
                      tuple(S.inverse(a) for a in range(n)))
    else:
        G = group_as_groupoid(S)
        GG = groupoid_product(G, G)
        m = Functor(GG, G, (0,), tuple(S.mul[a][b] for a in range(n) for b in range(n)))
        e = Functor(terminal(), G, (0,), (S.identity,))
        inv = Functor(G, G, (0,), tuple(S.inverse(a) for a in range(n)))
    return (G, bibundle_from_functor(m), bibundle_from_functor(e),
            bibundle_from_functor(inv))


def quotient_stack_group(n: int, d: int):
    """Stacky group data for ``Z_n // <d>``, the subgroup acting by translation.

    ``Em`` has carrier ``{(x, y, z) : x + y = z mod <d>}`` with ``lM = (x, y)``
    and ``rM = z``; ``Ee`` and ``Einv`` are the analogous lifts of the unit and
    of negation.
    """
    if n % d:
        raise ValueError("d must divide n")
    k = n // d
    K = GroupSpec.cyclic(k)
    A = GroupAction(K, tuple(tuple((p + a * d) % n for p in range(n)) for a in range(k)))
    G = action_groupoid(A)
    GG = groupoid_product(G, G)
    one = terminal()

    def arrow(a, p):
        return a * n + p

    def same_coset(u, v):
        return (u - v) % d == 0

    def right_action(pts, idx, zpos):
        actR = {}
        for i, pt in enumerate(pts):
            z = pt[zpos]
            for a in range(k):
                for w in range(n):
                    if (a * d + w) % n == z:
                        new = pt[:zpos] + (w,) + pt[zpos + 1:]
                        actR[(i, arrow(a, w))] = idx[new]
        return actR

    # multiplication
    pts = [(x, y, z) for x in range(n) for y in range(n) for z in range(n)
           if same_coset(x + y, z)]
    idx = {p: i for i, p in enumerate(pts)}
    lM = tuple(x * n + y for x, y, _ in pts)
    rM = tuple(z for _, _, z in pts)
    actL = {}
    m1 = G.n_arrows
    for i, (x, y, z) in enumerate(pts):
        for a, b in iproduct(range(k), repeat=2):
            g = arrow(a, x) * m1 + arrow(b, y)
            actL[(g, i)] = idx[((x + a * d) % n, (y + b * d) % n, z)]
    Em = Bibundle(GG, G, lM, rM, actL, right_action(pts, idx, 2), tuple(pts))
    # unit
    upts = [(z,) for z in range(n) if same_coset(z, 0)]
    uidx = {p: i for i, p in enumerate(upts)}
    Ee = Bibundle(one, G, (0,) * len(upts), tuple(z for z, in upts),
                  {(0, i): i for i in range(len(upts))},
                  right_action(upts, uidx, 0), tuple(upts))
    # inverse
    ipts = [(x, z) for x in range(n) for z in range(n) if same_coset(-x, z)]
    iidx = {p: i for i, p in enumerate(ipts)}
    actL = {}
    for i, (x, z) in enumerate(ipts):
        for a in range(k):
            actL[(arrow(a, x), i)] = iidx[((x + a * d) % n, z)]
    Einv = Bibundle(G, G, tuple(x for x, _ in ipts), tuple(z for _, z in ipts),
                    actL, right_action(ipts, iidx, 1), tuple(ipts))
    return G, Em, Ee, Einv


def mutate_action(B: Bibundle, seed: int, side: str = "left") -> tuple[Bibundle, dict]:
    """Redirect one action entry, preferring a target with the same moments."""
    rng = random.Random(seed)
    act = B.actL if side == "left" else B.actR
    keys = sorted(act)
    key = keys[rng.randrange(len(keys))]
    old = act[key]
    same = [m for m in B.carrier
            if m != old and B.lM[m] == B.lM[old] and B.rM[m] == B.rM[old]]
    pool = same or [m for m in B.carrier if m != old]
    new = rng.choice(pool)
    act = dict(act)
    act[key] = new
    actL, actR = (act, B.actR) if side == "left" else (B.actL, act)
    M = Bibundle(B.left, B.right, B.lM, B.rM, actL, actR, B.labels)
    return M, {"side": side, "entry": list(key), "old": old, "new": new,
               "moments_preserved": bool(same)}


# ---------------------------------------------------------------------------
# JSON

def bibundle_to_json(B: Bibundle) -> dict:
    return {
        "left": groupoid_to_json(B.left),
        "right": groupoid_to_json(B.right),
        "carrier": list(B.carrier),
        "lM": {str(m): B.lM[m] for m in B.carrier},
        "rM": {str(m): B.rM[m] for m in B.carrier},
        "actL": [[g, m, gm] for (g, m), gm in sorted(B.actL.items())],
        "actR": [[m, h, mh] for (m, h), mh in sorted(B.actR.items())],
    }


def bibundle_from_json(d: dict, groupoids: dict | None = None) -> Bibundle:
    """Parse a bibundle; ``left``/``right`` are inline groupoids or names in ``groupoids``."""
    groupoids = groupoids or {}

    def ref(x):
        if isinstance(x, str):
            return groupoids[x]
        return groupoid_from_json(x)

    G, H = ref(d["left"]), ref(d["right"])
    carrier = list(d["carrier"])
    idx = {str(m): i for i, m in enumerate(carrier)}
    lM = tuple(int(d["lM"][str(m)]) for m in carrier)
    rM = tuple(int(d["rM"][str(m)]) for m in carrier)
    actL = {(int(g), idx[str(m)]): idx[str(gm)] for g, m, gm in d["actL"]}
    actR = {(idx[str(m)], int(h)): idx[str(mh)] for m, h, mh in d["actR"]}
    return Bibundle(G, H, lM, rM, actL, actR, tuple(carrier))
