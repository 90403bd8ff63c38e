"""Finite groupoids given by explicit tables.

Objects and arrows are dense integer ids ``0..n-1``; human-readable labels
live in separate tuples and take no part in equality.  Composition follows a
single convention everywhere: ``comp(g, h)`` is defined iff ``r(g) == l(h)``,
and then ``l(gh) = l(g)``, ``r(gh) = r(h)``.

Products use mixed-radix ids (``(g, h) -> g*|H1| + h``), so the associator
``(G x H) x K = G x (H x K)`` and the unitors ``1 x G = G = G x 1`` are the
identity on ids and the resulting tables compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

__all__ = [
    "GroupSpec", "GroupAction", "FiniteGroupoid", "Violation", "Functor",
    "InvalidAction", "UnknownObject", "NotAFunctor",
    "validate", "action_groupoid", "isotropy", "orbits", "product",
    "terminal", "group_as_groupoid", "opposite", "trivial_groupoid", "pair_groupoid",
    "find_group_isomorphism", "groupoid_to_json", "groupoid_from_json",
    "action_from_json",
]


class InvalidAction(ValueError):
    pass


class UnknownObject(KeyError):
    pass


class NotAFunctor(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple

    def to_json(self):
        return {"axiom": self.axiom, "witness": list(self.witness)}


# ---------------------------------------------------------------------------
# groups

@dataclass(frozen=True)
class GroupSpec:
    """A finite group as a multiplication table on ``0..n-1``."""

    mul: tuple[tuple[int, ...], ...]
    identity: int = 0
    labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(len(self.mul))))

    @property
    def order(self) -> int:
        return len(self.mul)

    @property
    def elements(self) -> range:
        return range(len(self.mul))

    def inverse(self, a: int) -> int:
        row = self.mul[a]
        return row.index(self.identity)

    def violations(self) -> list[Violation]:
        n, e, out = self.order, self.identity, []
        for a in range(n):
            if self.mul[a][e] != a or self.mul[e][a] != a:
                out.append(Violation("group identity", (a,)))
            if e not in self.mul[a]:
                out.append(Violation("group inverse", (a,)))
        for a, b, c in iproduct(range(n), repeat=3):
            if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]]:
                out.append(Violation("group associativity", (a, b, c)))
                break
        return out

    def is_abelian(self) -> bool:
        return all(self.mul[a][b] == self.mul[b][a]
                   for a in range(self.order) for b in range(a))

    @classmethod
    def cyclic(cls, n: int) -> "GroupSpec":
        return cls(tuple(tuple((a + b) % n for b in range(n)) for a in range(n)))

    @classmethod
    def trivial(cls) -> "GroupSpec":
        return cls.cyclic(1)

    @classmethod
    def from_function(cls, elements, mul, identity) -> "GroupSpec":
        elements = list(elements)
        idx = {x: i for i, x in enumerate(elements)}
        table = tuple(tuple(idx[mul(a, b)] for b in elements) for a in elements)
        return cls(table, idx[identity], tuple(elements))

    def direct_product(self, other: "GroupSpec") -> "GroupSpec":
        m = other.order
        table = tuple(
            tuple(self.mul[a // m][b // m] * m + other.mul[a % m][b % m]
                  for b in range(self.order * m))
            for a in range(self.order * m))
        labels = tuple(iproduct(self.labels, other.labels))
        return GroupSpec(table, self.identity * m + other.identity, labels)


def symmetric_group(n: int) -> GroupSpec:
    from itertools import permutations
    perms = list(permutations(range(n)))
    return GroupSpec.from_function(
        perms, lambda a, b: tuple(a[b[i]] for i in range(n)), tuple(range(n)))


def find_group_isomorphism(A: GroupSpec, B: GroupSpec) -> dict[int, int] | None:
    """Backtracking search for an isomorphism ``A -> B``."""
    if A.order != B.order:
        return None

    def order_of(G, a):
        k, x = 1, a
        while x != G.identity:
            x, k = G.mul[x][a], k + 1
        return k

    oa = [order_of(A, a) for a in A.elements]
    ob = [order_of(B, b) for b in B.elements]
    if sorted(oa) != sorted(ob):
        return None
    elems = sorted(A.elements, key=lambda a: -oa[a])
    phi: dict[int, int] = {}

    def consistent():
        for a, fa in phi.items():
            for b, fb in phi.items():
                c = A.mul[a][b]
                if c in phi and phi[c] != B.mul[fa][fb]:
                    return False
        return True

    def extend(i):
        if i == len(elems):
            return True
        a = elems[i]
        if a in phi:
            return extend(i + 1)
        used = set(phi.values())
        for b in B.elements:
            if b in used or ob[b] != oa[a]:
                continue
            phi[a] = b
            added = [a]
            ok = True
            # close under products of already mapped elements
            frontier = True
            while ok and frontier:
                frontier = False
                for x, fx in list(phi.items()):
                    for y, fy in list(phi.items()):
                        c, fc = A.mul[x][y], B.mul[fx][fy]
                        if c in phi:
                            if phi[c] != fc:
                                ok = False
                                break
                        elif fc in phi.values():
                            ok = False
                            break
                        else:
                            phi[c] = fc
                            added.append(c)
                            frontier = True
                    if not ok:
                        break
            if ok and consistent() and extend(i + 1):
                return True
            for x in added:
                phi.pop(x, None)
        return False

    phi[A.identity] = B.identity
    return dict(phi) if extend(0) else None


@dataclass(frozen=True)
class GroupAction:
    """Left action ``act[a][p]`` of a group on ``0..n-1``."""

    group: GroupSpec
    act: tuple[tuple[int, ...], ...]
    carrier: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if not self.carrier:
            n = len(self.act[0]) if self.act else 0
            object.__setattr__(self, "carrier", tuple(range(n)))

    @property
    def size(self) -> int:
        return len(self.carrier)

    def violations(self) -> list[Violation]:
        G, out = self.group, []
        for p in range(self.size):
            if self.act[G.identity][p] != p:
                out.append(Violation("action identity", (p,)))
        for a, b, p in iproduct(G.elements, G.elements, range(self.size)):
            if self.act[a][self.act[b][p]] != self.act[G.mul[a][b]][p]:
                out.append(Violation("action compatibility", (a, b, p)))
        return out

    def stabilizer(self, p: int) -> list[int]:
        return [a for a in self.group.elements if self.act[a][p] == p]

    @classmethod
    def from_function(cls, group: GroupSpec, carrier, f) -> "GroupAction":
        carrier = list(carrier)
        idx = {x: i for i, x in enumerate(carrier)}
        table = tuple(tuple(idx[f(group.labels[a], x)] for x in carrier)
                      for a in group.elements)
        return cls(group, table, tuple(carrier))


# ---------------------------------------------------------------------------
# groupoids

@dataclass(frozen=True, eq=True)
class FiniteGroupoid:
    n_objects: int
    l: tuple[int, ...]
    r: tuple[int, ...]
    unit: tuple[int, ...]
    inv: tuple[int, ...]
    comp: tuple[tuple[tuple[int, int], int], ...]
    object_labels: tuple = field(default=(), compare=False)
    arrow_labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if not self.object_labels:
            object.__setattr__(self, "object_labels", tuple(range(self.n_objects)))
        if not self.arrow_labels:
            object.__setattr__(self, "arrow_labels", tuple(range(len(self.l))))
        object.__setattr__(self, "_comp", dict(self.comp))

    @classmethod
    def build(cls, n_objects, l, r, unit, inv, comp: dict,
              object_labels=(), arrow_labels=()) -> "FiniteGroupoid":
        return cls(n_objects, tuple(l), tuple(r), tuple(unit), tuple(inv),
                   tuple(sorted(comp.items())), tuple(object_labels),
                   tuple(arrow_labels))

    @property
    def n_arrows(self) -> int:
        return len(self.l)

    @property
    def objects(self) -> range:
        return range(self.n_objects)

    @property
    def arrows(self) -> range:
        return range(len(self.l))

    def compose(self, g: int, h: int) -> int | None:
        """``gh``, or None when ``r(g) != l(h)``."""
        return self._comp.get((g, h))

    def arrows_from(self, x: int) -> list[int]:
        return [g for g in self.arrows if self.l[g] == x]

    def __hash__(self):
        return hash((self.n_objects, self.l, self.r, self.comp))

    def __repr__(self):
        return f"FiniteGroupoid({self.n_objects} objects, {self.n_arrows} arrows)"


def validate(G: FiniteGroupoid) -> list[Violation]:
    """Every violated groupoid axiom with a witness; empty iff ``G`` is valid."""
    out: list[Violation] = []
    n0 = G.n_objects
    for g in G.arrows:
        if not (0 <= G.l[g] < n0 and 0 <= G.r[g] < n0):
            out.append(Violation("source/target range", (g,)))
            return out
    comp = G._comp
    for (g, h), gh in comp.items():
        if G.r[g] != G.l[h]:
            out.append(Violation("composability", (g, h)))
        elif G.l[gh] != G.l[g] or G.r[gh] != G.r[h]:
            out.append(Violation("composite endpoints", (g, h, gh)))
    for g in G.arrows:
        for h in G.arrows:
            if G.r[g] == G.l[h] and (g, h) not in comp:
                out.append(Violation("composition undefined", (g, h)))
    for x in G.objects:
        e = G.unit[x]
        if G.l[e] != x or G.r[e] != x:
            out.append(Violation("unit endpoints", (x, e)))
    for g in G.arrows:
        if comp.get((G.unit[G.l[g]], g)) != g or comp.get((g, G.unit[G.r[g]])) != g:
            out.append(Violation("unit law", (g,)))
        gi = G.inv[g]
        if comp.get((g, gi)) != G.unit[G.l[g]] or comp.get((gi, g)) != G.unit[G.r[g]]:
            out.append(Violation("inverse law", (g, gi)))
    for (g, h), gh in comp.items():
        for k in G.arrows:
            hk = comp.get((h, k))
            if hk is None:
                continue
            a, b = comp.get((gh, k)), comp.get((g, hk))
            if a != b:
                out.append(Violation("associativity", (g, h, k)))
    return out


def action_groupoid(A: GroupAction) -> FiniteGroupoid:
    """Arrows ``(a, p)`` with ``l = a.p``, ``r = p``; ``(a,p)(b,q) = (ab, q)``."""
    bad = A.violations()
    if bad:
        raise InvalidAction(bad[0])
    G, n = A.group, A.size

    def aid(a, p):
        return a * n + p

    l, r, inv = [], [], []
    for a, p in iproduct(G.elements, range(n)):
        l.append(A.act[a][p])
        r.append(p)
        inv.append(aid(G.inverse(a), A.act[a][p]))
    comp = {}
    for a, p in iproduct(G.elements, range(n)):
        for b, q in iproduct(G.elements, range(n)):
            if A.act[b][q] == p:
                comp[(aid(a, p), aid(b, q))] = aid(G.mul[a][b], q)
    unit = [aid(G.identity, p) for p in range(n)]
    labels = tuple((G.labels[a], A.carrier[p]) for a, p in iproduct(G.elements, range(n)))
    return FiniteGroupoid.build(n, l, r, unit, inv, comp, A.carrier, labels)


def group_as_groupoid(S: GroupSpec) -> FiniteGroupoid:
    n = S.order
    comp = {(a, b): S.mul[a][b] for a in range(n) for b in range(n)}
    return FiniteGroupoid.build(1, [0] * n, [0] * n, [S.identity],
                                [S.inverse(a) for a in range(n)], comp,
                                ("*",), S.labels)


def terminal() -> FiniteGroupoid:
    return group_as_groupoid(GroupSpec.trivial())


def trivial_groupoid(X) -> FiniteGroupoid:
    """Identities only over the finite set ``X`` (or ``range(X)``)."""
    X = tuple(range(X)) if isinstance(X, int) else tuple(X)
    n = len(X)
    return FiniteGroupoid.build(n, range(n), range(n), range(n), range(n),
                                {(x, x): x for x in range(n)}, X, X)


def pair_groupoid(X) -> FiniteGroupoid:
    """Arrows ``(x, y)`` with ``(x,y)(y,z) = (x,z)``."""
    X = tuple(range(X)) if isinstance(X, int) else tuple(X)
    n = len(X)
    l = [x for x in range(n) for _ in range(n)]
    r = [y for _ in range(n) for y in range(n)]
    comp = {(x * n + y, y * n + z): x * n + z
            for x in range(n) for y in range(n) for z in range(n)}
    return FiniteGroupoid.build(
        n, l, r, [x * n + x for x in range(n)],
        [y * n + x for x in range(n) for y in range(n)], comp, X,
        tuple(iproduct(X, X)))


def product(G: FiniteGroupoid, H: FiniteGroupoid) -> FiniteGroupoid:
    m0, m1 = H.n_objects, H.n_arrows
    l, r, inv = [], [], []
    for g, h in iproduct(G.arrows, H.arrows):
        l.append(G.l[g] * m0 + H.l[h])
        r.append(G.r[g] * m0 + H.r[h])
        inv.append(G.inv[g] * m1 + H.inv[h])
    unit = [G.unit[x] * m1 + H.unit[y] for x, y in iproduct(G.objects, H.objects)]
    comp = {}
    for (g1, g2), g in G._comp.items():
        for (h1, h2), h in H._comp.items():
            comp[(g1 * m1 + h1, g2 * m1 + h2)] = g * m1 + h
    return FiniteGroupoid.build(
        G.n_objects * m0, l, r, unit, inv, comp,
        tuple(iproduct(G.object_labels, H.object_labels)),
        tuple(iproduct(G.arrow_labels, H.arrow_labels)))


def opposite(G: FiniteGroupoid) -> FiniteGroupoid:
    """Same arrows with ``l``/``r`` swapped and ``g op h = hg``."""
    comp = {(h, g): gh for (g, h), gh in G._comp.items()}
    return FiniteGroupoid.build(G.n_objects, G.r, G.l, G.unit, G.inv, comp,
                                G.object_labels, G.arrow_labels)


def isotropy(G: FiniteGroupoid, x: int) -> GroupSpec:
    """The group of arrows with ``l = r = x``; labels are the arrow ids."""
    if not 0 <= x < G.n_objects:
        raise UnknownObject(x)
    arrows = [g for g in G.arrows if G.l[g] == x and G.r[g] == x]
    idx = {g: i for i, g in enumerate(arrows)}
    table = tuple(tuple(idx[G.compose(g, h)] for h in arrows) for g in arrows)
    return GroupSpec(table, idx[G.unit[x]], tuple(arrows))


def orbits(G: FiniteGroupoid) -> list[list[int]]:
    """Blocks of the finest partition of objects joining ``l(g)`` and ``r(g)``."""
    parent = list(G.objects)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in G.arrows:
        a, b = find(G.l[g]), find(G.r[g])
        if a != b:
            parent[max(a, b)] = min(a, b)
    blocks: dict[int, list[int]] = {}
    for x in G.objects:
        blocks.setdefault(find(x), []).append(x)
    return sorted(blocks.values())


# ---------------------------------------------------------------------------
# functors

@dataclass(frozen=True)
class Functor:
    source: FiniteGroupoid
    target: FiniteGroupoid
    on_objects: tuple[int, ...]
    on_arrows: tuple[int, ...]

    def violations(self) -> list[Violation]:
        G, H, fo, fa = self.source, self.target, self.on_objects, self.on_arrows
        out = []
        for g in G.arrows:
            if H.l[fa[g]] != fo[G.l[g]] or H.r[fa[g]] != fo[G.r[g]]:
                out.append(Violation("functor endpoints", (g,)))
        for x in G.objects:
            if fa[G.unit[x]] != H.unit[fo[x]]:
                out.append(Violation("functor units", (x,)))
        for (g, h), gh in G._comp.items():
            if H.compose(fa[g], fa[h]) != fa[gh]:
                out.append(Violation("functor composition", (g, h)))
        return out

    @classmethod
    def identity(cls, G: FiniteGroupoid) -> "Functor":
        return cls(G, G, tuple(G.objects), tuple(G.arrows))

    @classmethod
    def to_terminal(cls, G: FiniteGroupoid) -> "Functor":
        return cls(G, terminal(), (0,) * G.n_objects, (0,) * G.n_arrows)

    @classmethod
    def diagonal(cls, G: FiniteGroupoid) -> "Functor":
        P = product(G, G)
        n0, n1 = G.n_objects, G.n_arrows
        return cls(G, P, tuple(x * n0 + x for x in G.objects),
                   tuple(g * n1 + g for g in G.arrows))

    @classmethod
    def from_homomorphism(cls, S: GroupSpec, T: GroupSpec, f) -> "Functor":
        """Functor between one-object groupoids from a map on group elements."""
        return cls(group_as_groupoid(S), group_as_groupoid(T), (0,),
                   tuple(f(a) for a in S.elements))

    def then(self, other: "Functor") -> "Functor":
        if self.target != other.source:
            raise NotAFunctor("functors are not composable")
        return Functor(self.source, other.target,
                       tuple(other.on_objects[x] for x in self.on_objects),
                       tuple(other.on_arrows[g] for g in self.on_arrows))


# ---------------------------------------------------------------------------
# JSON

def groupoid_to_json(G: FiniteGroupoid) -> dict:
    return {
        "objects": list(G.objects),
        "arrows": [{"id": g, "l": G.l[g], "r": G.r[g]} for g in G.arrows],
        "units": {str(x): G.unit[x] for x in G.objects},
        "inv": {str(g): G.inv[g] for g in G.arrows},
        "comp": [[g, h, gh] for (g, h), gh in G.comp],
    }


def group_from_json(d: dict) -> GroupSpec:
    if "cyclic" in d:
        return GroupSpec.cyclic(int(d["cyclic"]))
    table = tuple(tuple(row) for row in d["table"])
    return GroupSpec(table, d.get("identity", 0), tuple(d.get("elements", ())))


def action_from_json(d: dict) -> GroupAction:
    group = group_from_json(d["group"])
    carrier = list(d["carrier"])
    idx = {p: i for i, p in enumerate(carrier)}
    glab = {lab: i for i, lab in enumerate(group.labels)}
    table = [list(range(len(carrier))) for _ in group.elements]
    for a, p, ap in d["act"]:
        table[glab.get(a, a)][idx[p]] = idx[ap]
    return GroupAction(group, tuple(map(tuple, table)), tuple(carrier))


def groupoid_from_json(d: dict) -> FiniteGroupoid:
    """Parse either the explicit table format or the action shorthand."""
    if "group" in d and "act" in d:
        return action_groupoid(action_from_json(d))
    if "pair" in d:
        return pair_groupoid(d["pair"])
    if "trivial" in d:
        return trivial_groupoid(d["trivial"])
    if "bgroup" in d:
        return group_as_groupoid(group_from_json(d["bgroup"]))
    objs = list(d["objects"])
    oidx = {str(o): i for i, o in enumerate(objs)}
    arrows = d["arrows"]
    aidx = {str(a["id"]): i for i, a in enumerate(arrows)}
    l = [oidx[str(a["l"])] for a in arrows]
    r = [oidx[str(a["r"])] for a in arrows]
    unit = [aidx[str(d["units"][str(o)])] for o in objs]
    inv = [aidx[str(d["inv"][str(a["id"])])] for a in arrows]
    comp = {(aidx[str(g)], aidx[str(h)]): aidx[str(gh)] for g, h, gh in d["comp"]}
    return FiniteGroupoid.build(len(objs), l, r, unit, inv, comp, tuple(objs),
                                tuple(a["id"] for a in arrows))
