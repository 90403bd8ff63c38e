"""The noncommutative torus on the basis ``a_{n,l}`` and its modules ``T^alpha_{pq}``.

Multiplication is ``a_{n1,l1} a_{n2,l2} = e^{i lam n1 l2} a_{n1+n2, l1+l2}``.
A module class ``(p, q, alpha)`` names the quotient of the algebra by the
right ideal generated by ``e^{-i alpha} a_{pq} - 1``; classes are compared
after flipping to a positive sign and reducing ``alpha`` modulo ``lam`` and
``2 pi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .scalars import (LAM, TWO_PI, ZERO_ANGLE, Angle, Scalar, angle_congruent,
                      ext_gcd, lcm)

__all__ = [
    "NCTElement", "ModuleClass", "TensorResult", "RealizedModule",
    "ZeroClass", "NotCoprime", "WindowTooSmall",
    "basis", "nct_mul", "nct_star", "class_canonicalize", "tensor_classify",
    "realize_module",
]


class ZeroClass(ValueError):
    """``(p, q) == (0, 0)``."""


class NotCoprime(ValueError):
    pass


class WindowTooSmall(IndexError):
    pass


def _phase(angle: Angle) -> Scalar:
    return Scalar.phase(angle)


@dataclass(frozen=True)
class NCTElement:
    coeffs: dict = field(hash=False)

    def __post_init__(self):
        clean = {}
        for (n, l), c in self.coeffs.items():
            c = Scalar(c)
            if c:
                clean[(int(n), int(l))] = c
        object.__setattr__(self, "coeffs", clean)

    def __eq__(self, other):
        if not isinstance(other, NCTElement):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other: "NCTElement") -> "NCTElement":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, Scalar(0)) + c
        return NCTElement(out)

    def __neg__(self):
        return NCTElement({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, NCTElement):
            return nct_mul(self, other)
        c = Scalar(other)
        return NCTElement({k: c * x for k, x in self.coeffs.items()})

    def __rmul__(self, other):
        c = Scalar(other)
        return NCTElement({k: c * x for k, x in self.coeffs.items()})

    def __repr__(self):
        terms = " + ".join(f"({c})a[{n},{l}]" for (n, l), c in sorted(self.coeffs.items()))
        return f"NCTElement({terms or '0'})"

    def constant_term(self) -> Scalar:
        return self.coeffs.get((0, 0), Scalar(0))

    def to_json(self) -> list:
        return [{"n": n, "l": l, "coeff": c.to_json()}
                for (n, l), c in sorted(self.coeffs.items())]


def basis(n: int, l: int, coeff=1) -> NCTElement:
    return NCTElement({(n, l): coeff})


def nct_mul(x: NCTElement, y: NCTElement) -> NCTElement:
    out: dict = {}
    for (n1, l1), c1 in x.coeffs.items():
        for (n2, l2), c2 in y.coeffs.items():
            k = (n1 + n2, l1 + l2)
            term = c1 * c2 * _phase(LAM * (n1 * l2))
            out[k] = out[k] + term if k in out else term
    return NCTElement(out)


def nct_star(x: NCTElement) -> NCTElement:
    """``a_{n,l}^* = e^{i lam n l} a_{-n,-l}``, extended conjugate-linearly."""
    return NCTElement({(-n, -l): c.conj() * _phase(LAM * (n * l))
                       for (n, l), c in x.coeffs.items()})


# ---------------------------------------------------------------------------
# module classes

@dataclass(frozen=True)
class ModuleClass:
    p: int
    q: int
    alpha: Angle = ZERO_ANGLE

    @property
    def primitive(self) -> bool:
        return gcd(self.p, self.q) == 1

    @property
    def canonical(self) -> bool:
        sign_ok = self.p > 0 or (self.p == 0 and self.q > 0)
        return sign_ok and self.alpha == self.alpha.reduced()

    def __str__(self):
        return f"T[{self.p},{self.q}]^({self.alpha})"

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "alpha": str(self.alpha),
                "primitive": self.primitive, "canonical": self.canonical}

    @classmethod
    def from_json(cls, d: dict) -> "ModuleClass":
        a = d.get("alpha", "0")
        alpha = Angle.parse(a) if isinstance(a, str) else Angle.from_json(a)
        return cls(int(d["p"]), int(d["q"]), alpha)


def class_canonicalize(c: ModuleClass) -> ModuleClass:
    """Flip to ``p > 0`` (or ``p == 0 < q``) and reduce alpha modulo lam and 2pi."""
    p, q, alpha = c.p, c.q, c.alpha
    if p == 0 and q == 0:
        raise ZeroClass("(p, q) = (0, 0) does not name a module")
    if p < 0 or (p == 0 and q < 0):
        p, q, alpha = -p, -q, -alpha
    return ModuleClass(p, q, alpha.reduced())


@dataclass(frozen=True)
class TensorResult:
    multiplicity: int
    result: ModuleClass | None  # canonical
    raw: ModuleClass | None     # before canonicalization
    branch: str

    @property
    def primitive(self) -> bool:
        return self.result is not None and self.result.primitive

    def to_json(self) -> dict:
        return {
            "mult": self.multiplicity,
            "branch": self.branch,
            "raw": self.raw.to_json() if self.raw else None,
            "canonical": self.result.to_json() if self.result else None,
            "primitive": self.primitive,
        }


def _oriented(c: ModuleClass) -> ModuleClass:
    if c.p < 0 or (c.p == 0 and c.q < 0):
        return ModuleClass(-c.p, -c.q, -c.alpha)
    return c


def tensor_classify(c1: ModuleClass, c2: ModuleClass) -> TensorResult:
    """Decompose ``T1 (x)_Delta T2`` as a multiple of a single class."""
    for c in (c1, c2):
        if c.p == 0 and c.q == 0:
            raise ZeroClass(str(c))
        if not c.primitive:
            raise NotCoprime(f"{c} has gcd(p, q) = {gcd(c.p, c.q)}")
    # orient only; reducing alpha here would break alpha/p on the raw output
    c1, c2 = _oriented(c1), _oriented(c2)
    p1, q1, a1 = c1.p, c1.q, c1.alpha
    p2, q2, a2 = c2.p, c2.q, c2.alpha
    if p1 or p2:
        g = gcd(p1, p2)
        raw = ModuleClass(lcm(p1, p2), (p1 * q2 + p2 * q1) // g,
                          (a1 * p2 + a2 * p1) / g)
        branch = "p" if p1 and p2 else "mixed"
        return TensorResult(g, class_canonicalize(raw), raw, branch)
    g = gcd(q1, q2)
    # (a1 q2 - a2 q1) / (lam g) must be an integer modulo lcm(q1, q2) 2pi / lam
    if not angle_congruent(a1 * q2 - a2 * q1, ZERO_ANGLE,
                           [LAM * g, TWO_PI * (g * lcm(q1, q2))]):
        return TensorResult(0, None, None, "zero")
    _, s, t = ext_gcd(q2, q1)   # s q2 + t q1 = g
    s1, s2 = s, -t              # s1 q2 - s2 q1 = g
    raw = ModuleClass(0, g, a2 * s1 - a1 * s2)
    return TensorResult(1, class_canonicalize(raw), raw, "zero")


# ---------------------------------------------------------------------------
# finite realizations

@dataclass(frozen=True)
class RealizedModule:
    """A window ``lo <= c <= hi`` of the basis ``e_c = [a_{rep(c)}]`` of ``T^alpha_{pq}``.

    Cosets of ``Z(p, q)`` in ``Z^2`` are indexed by ``c = p l - q n``.
    """

    cls: ModuleClass
    lo: int
    hi: int

    def __post_init__(self):
        if not self.cls.primitive:
            raise NotCoprime(str(self.cls))
        if self.lo > self.hi:
            raise ValueError("empty window")

    @property
    def window(self) -> range:
        return range(self.lo, self.hi + 1)

    def index(self, n: int, l: int) -> int:
        return self.cls.p * l - self.cls.q * n

    def rep(self, c: int) -> tuple[int, int]:
        p, q = self.cls.p, self.cls.q
        _, s, t = ext_gcd(p, q)  # s p + t q = 1
        return (-t * c, s * c)

    def reduce(self, n: int, l: int) -> tuple[int, Scalar]:
        """``[a_{n,l}] = phase * e_c``."""
        p, q, alpha = self.cls.p, self.cls.q, self.cls.alpha
        c = self.index(n, l)
        n0, l0 = self.rep(c)
        j = (n - n0) // p if p else (l - l0) // q
        # iterate [a_{n+p, l+q}] = e^{i alpha} e^{-i lam p l} [a_{n,l}] j times
        angle = alpha * j - LAM * (p * (j * l0 + q * Fraction(j * (j - 1), 2)))
        return c, _phase(angle)

    def act(self, c: int, n: int, l: int) -> tuple[int, Scalar]:
        """``e_c . a_{n,l}``."""
        if c not in self.window:
            raise WindowTooSmall(f"index {c} outside [{self.lo}, {self.hi}]")
        n0, l0 = self.rep(c)
        tgt, ph = self.reduce(n0 + n, l0 + l)
        if tgt not in self.window:
            raise WindowTooSmall(f"e_{c} . a[{n},{l}] lands at {tgt}, "
                                 f"outside [{self.lo}, {self.hi}]")
        return tgt, ph * _phase(LAM * (n0 * l))

    def act_element(self, vec: dict, x: NCTElement) -> dict:
        out: dict = {}
        for c, v in vec.items():
            for (n, l), a in x.coeffs.items():
                tgt, ph = self.act(c, n, l)
                out[tgt] = out.get(tgt, Scalar(0)) + v * a * ph
        return {c: v for c, v in out.items() if v}

    def generator(self) -> dict:
        return {self.index(0, 0): Scalar(1)}


def realize_module(c: ModuleClass, lo: int = -8, hi: int = 8) -> RealizedModule:
    return RealizedModule(c, lo, hi)
