"""Exact angles, phases and phase-valued scalars.

An angle is a formal linear combination ``r0 + rlam*lam + rpi*2pi`` (plus
optional named symbols such as ``a1``) with rational coefficients.  The
generators are treated as linearly independent over Q, which makes every
equality and congruence test below decidable.

A scalar is a finite sum ``sum_k c_k * exp(i*x_k)``.  Internally the
torsion-free part of each exponent (everything except ``rpi``) is the key of a
term and the root of unity ``exp(2 pi i rpi)`` is folded into a cyclotomic
coefficient, so relations such as ``1 + w + w^2 = 0`` hold exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd

__all__ = [
    "Angle", "Phase", "Scalar", "Cyclo", "NonUnitError",
    "ext_gcd", "lcm", "angle_congruent", "lattice_solve",
    "LAM", "TWO_PI", "ZERO_ANGLE", "I",
]


class NonUnitError(ZeroDivisionError):
    """Division by a scalar that is not a single nonzero phase term."""


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        k, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - k * s1
        t0, t1 = t1, t0 - k * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def lcm(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return abs(a * b) // gcd(a, b)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---------------------------------------------------------------------------
# cyclotomic numbers

def _prime_factors(n: int) -> list[int]:
    ps, p = [], 2
    while p * p <= n:
        if n % p == 0:
            ps.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        ps.append(n)
    return ps


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    assert not any(num), "inexact polynomial division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


def _reduce_poly(coeffs: list[Fraction], n: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    c = list(coeffs)
    for i in range(len(c) - 1, deg - 1, -1):
        a = c[i]
        if a:
            # phi is monic
            for j in range(deg):
                c[i - deg + j] -= a * phi[j]
        c[i] = 0
    c += [Fraction(0)] * (deg - len(c))
    return tuple(c[:deg])


def _solve_rational(cols: list[tuple[Fraction, ...]], rhs: tuple[Fraction, ...]):
    """Solve sum_j y_j cols[j] == rhs over Q; None when inconsistent."""
    m, k = len(rhs), len(cols)
    rows = [[cols[j][i] for j in range(k)] + [rhs[i]] for i in range(m)]
    piv_cols, r = [], 0
    for c in range(k):
        p = next((i for i in range(r, m) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(rows[i][k] for i in range(r, m)):
        return None
    y = [Fraction(0)] * k
    for i, c in enumerate(piv_cols):
        y[c] = rows[i][k]
    return y


class Cyclo:
    """Element of Q(zeta_n), stored at its minimal conductor in the power basis."""

    __slots__ = ("n", "c")

    def __init__(self, n: int, c):
        self.n = n
        self.c = tuple(c)

    @classmethod
    def rational(cls, x) -> "Cyclo":
        return cls(1, (_frac(x),))

    @classmethod
    def root_of_unity(cls, frac) -> "Cyclo":
        """exp(2 pi i * frac)."""
        frac = _frac(frac) % 1
        n, k = frac.denominator, frac.numerator
        if n == 1:
            return cls(1, (Fraction(1),))
        v = [Fraction(0)] * (k + 1)
        v[k] = Fraction(1)
        return cls(n, _reduce_poly(v, n))._canon()

    @classmethod
    def gaussian(cls, re_, im) -> "Cyclo":
        re_, im = _frac(re_), _frac(im)
        if not im:
            return cls(1, (re_,))
        return cls(4, (re_, im))

    def _lift(self, m: int) -> tuple[Fraction, ...]:
        if m == self.n:
            return self.c
        step = m // self.n
        v = [Fraction(0)] * (step * (len(self.c) - 1) + 1)
        for k, a in enumerate(self.c):
            v[k * step] = a
        return _reduce_poly(v, m)

    def _canon(self) -> "Cyclo":
        n, c = self.n, self.c
        descended = True
        while descended and n > 1:
            descended = False
            if not any(c[1:]):
                return Cyclo(1, (c[0],))
            for p in _prime_factors(n):
                d = n // p
                if d % 4 == 2:
                    d //= 2
                deg = len(cyclotomic_poly(d)) - 1
                step = n // d
                cols = []
                for j in range(deg):
                    v = [Fraction(0)] * (j * step + 1)
                    v[j * step] = Fraction(1)
                    cols.append(_reduce_poly(v, n))
                y = _solve_rational(cols, c)
                if y is not None:
                    n, c = d, tuple(y)
                    descended = True
                    break
        return Cyclo(n, c)

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_rational(self) -> bool:
        return self.n == 1

    def __eq__(self, other):
        if not isinstance(other, Cyclo):
            return NotImplemented
        return self.n == other.n and self.c == other.c

    def __hash__(self):
        return hash((self.n, self.c))

    def __add__(self, other: "Cyclo") -> "Cyclo":
        if self.n == other.n == 1:
            return Cyclo(1, (self.c[0] + other.c[0],))
        m = lcm(self.n, other.n)
        a, b = self._lift(m), other._lift(m)
        return Cyclo(m, tuple(x + y for x, y in zip(a, b)))._canon()

    def __neg__(self) -> "Cyclo":
        return Cyclo(self.n, tuple(-x for x in self.c))

    def __sub__(self, other: "Cyclo") -> "Cyclo":
        return self + (-other)

    def __mul__(self, other: "Cyclo") -> "Cyclo":
        if self.n == 1 or other.n == 1:
            a, o = (self.c[0], other) if self.n == 1 else (other.c[0], self)
            if not a:
                return Cyclo(1, (Fraction(0),))
            return Cyclo(o.n, tuple(a * x for x in o.c))
        m = lcm(self.n, other.n)
        a, b = self._lift(m), other._lift(m)
        v = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        v[i + j] += x * y
        return Cyclo(m, _reduce_poly(v, m))._canon()

    def conj(self) -> "Cyclo":
        if self.n == 1:
            return self
        n = self.n
        v = [Fraction(0)] * n
        for k, a in enumerate(self.c):
            v[(-k) % n] += a
        return Cyclo(n, _reduce_poly(v, n))._canon()

    def inverse(self) -> "Cyclo":
        if self.is_zero():
            raise ZeroDivisionError("zero cyclotomic number")
        if self.n == 1:
            return Cyclo(1, (1 / self.c[0],))
        return _cyclo_inverse(self)

    def _inverse(self) -> "Cyclo":
        n, deg = self.n, len(self.c)
        # columns: self * zeta^j
        cols = []
        for j in range(deg):
            v = [Fraction(0)] * (deg + j)
            for k, a in enumerate(self.c):
                v[k + j] = a
            cols.append(_reduce_poly(v, n))
        one = (Fraction(1),) + (Fraction(0),) * (deg - 1)
        y = _solve_rational(cols, one)
        return Cyclo(n, y)._canon()

    def terms(self):
        """Yield ``(k/n, c_k)`` for the nonzero power-basis coordinates."""
        for k, a in enumerate(self.c):
            if a:
                yield Fraction(k, self.n), a

    def __repr__(self):
        if self.n == 1:
            return f"Cyclo({self.c[0]})"
        return f"Cyclo(n={self.n}, {list(map(str, self.c))})"


@lru_cache(maxsize=4096)
def _cyclo_inverse(x: Cyclo) -> Cyclo:
    # the same few roots of unity are inverted over and over in module tensors
    return x._inverse()


# ---------------------------------------------------------------------------
# angles

_SYM_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_RESERVED = {"lam", "lambda", "pi", "i"}


@dataclass(frozen=True)
class Angle:
    """``r0 + rlam*lam + rpi*2pi + sum(c*sym)`` with rational coefficients."""

    r0: Fraction = Fraction(0)
    rlam: Fraction = Fraction(0)
    rpi: Fraction = Fraction(0)
    syms: tuple[tuple[str, Fraction], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "r0", _frac(self.r0))
        object.__setattr__(self, "rlam", _frac(self.rlam))
        object.__setattr__(self, "rpi", _frac(self.rpi))
        syms = self.syms
        if isinstance(syms, dict):
            syms = syms.items()
        merged: dict[str, Fraction] = {}
        for name, c in syms:
            merged[name] = merged.get(name, Fraction(0)) + _frac(c)
        object.__setattr__(
            self, "syms", tuple(sorted((k, v) for k, v in merged.items() if v)))

    @classmethod
    def sym(cls, name: str, coeff=1) -> "Angle":
        if not _SYM_RE.fullmatch(name) or name in _RESERVED:
            raise ValueError(f"bad symbol name {name!r}")
        return cls(syms=((name, _frac(coeff)),))

    def __add__(self, other: "Angle") -> "Angle":
        return Angle(self.r0 + other.r0, self.rlam + other.rlam,
                     self.rpi + other.rpi, self.syms + other.syms)

    def __neg__(self) -> "Angle":
        return Angle(-self.r0, -self.rlam, -self.rpi,
                     tuple((k, -v) for k, v in self.syms))

    def __sub__(self, other: "Angle") -> "Angle":
        return self + (-other)

    def __mul__(self, k) -> "Angle":
        k = _frac(k)
        return Angle(self.r0 * k, self.rlam * k, self.rpi * k,
                     tuple((s, v * k) for s, v in self.syms))

    __rmul__ = __mul__

    def __truediv__(self, k) -> "Angle":
        return self * (1 / _frac(k))

    def is_zero(self) -> bool:
        return not (self.r0 or self.rlam or self.rpi or self.syms)

    def free_part(self) -> tuple:
        """The exponent with the 2pi component dropped (a term key for scalars)."""
        return (self.r0, self.rlam, self.syms)

    def reduced(self) -> "Angle":
        """Representative modulo the lattice generated by lam and 2pi."""
        return Angle(self.r0, self.rlam % 1, self.rpi % 1, self.syms)

    def coords(self, names: list[str]) -> list[Fraction]:
        d = dict(self.syms)
        return [self.r0, self.rlam, self.rpi] + [d.get(n, Fraction(0)) for n in names]

    def __str__(self):
        parts = []
        for coeff, name in [(self.r0, "")] + [(v, k) for k, v in self.syms] + [
                (self.rlam, "lam"), (self.rpi, "2pi")]:
            if not coeff:
                continue
            if not name:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append(name)
            elif coeff == -1:
                parts.append("-" + name)
            elif coeff.denominator == 1:
                parts.append(f"{coeff}*{name}")
            elif coeff.numerator == 1:
                parts.append(f"{name}/{coeff.denominator}")
            elif coeff.numerator == -1:
                parts.append(f"-{name}/{coeff.denominator}")
            else:
                parts.append(f"{coeff.numerator}*{name}/{coeff.denominator}")
        if not parts:
            return "0"
        s = parts[0]
        for p in parts[1:]:
            s += p if p.startswith("-") else "+" + p
        return s

    _TERM = re.compile(
        r"\s*([+-])?\s*(?:(\d+)(?!\d|pi|π)(?:\s*/\s*(\d+))?\s*\*?\s*)?"
        r"(2pi|2π|lam|lambda|λ|[A-Za-z_][A-Za-z_0-9]*)?\s*(?:/\s*(\d+))?\s*")

    @classmethod
    def parse(cls, text: str) -> "Angle":
        """Parse a linear expression such as ``"3*a1+2*a2"`` or ``"2pi/3 - lam"``."""
        text = text.strip()
        if not text:
            raise ValueError("empty angle expression")
        pos, total, first = 0, cls(), True
        while pos < len(text):
            m = cls._TERM.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse angle {text!r} at {pos}")
            sign, num, den, name, div = m.groups()
            if sign is None and not first:
                raise ValueError(f"missing operator in {text!r} at {pos}")
            if num is None and name is None:
                raise ValueError(f"empty term in {text!r} at {pos}")
            coeff = Fraction(int(num) if num else 1, int(den) if den else 1)
            if div:
                coeff /= int(div)
            if sign == "-":
                coeff = -coeff
            if name is None:
                term = cls(r0=coeff)
            elif name in ("2pi", "2π"):
                term = cls(rpi=coeff)
            elif name in ("lam", "lambda", "λ"):
                term = cls(rlam=coeff)
            else:
                term = cls.sym(name, coeff)
            total = total + term
            pos, first = m.end(), False
        return total

    def to_json(self) -> dict:
        d = {"r0": str(self.r0), "rlam": str(self.rlam), "rpi": str(self.rpi)}
        if self.syms:
            d["syms"] = {k: str(v) for k, v in self.syms}
        return d

    @classmethod
    def from_json(cls, d) -> "Angle":
        if isinstance(d, str):
            return cls.parse(d)
        return cls(Fraction(d.get("r0", "0")), Fraction(d.get("rlam", "0")),
                   Fraction(d.get("rpi", "0")),
                   tuple((k, Fraction(v)) for k, v in d.get("syms", {}).items()))


ZERO_ANGLE = Angle()
LAM = Angle(rlam=1)
TWO_PI = Angle(rpi=1)


# ---------------------------------------------------------------------------
# lattice congruence

def _integer_echelon(rows: list[list[int]]):
    """Unimodular row reduction: returns (H, U, pivots) with U*rows == H."""
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    H = [list(r) for r in rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    pivots, r = [], 0
    for c in range(ncols):
        if r == m:
            break
        for i in range(r + 1, m):
            if H[i][c] == 0:
                continue
            g, s, t = ext_gcd(H[r][c], H[i][c])
            a, b = H[r][c] // g, H[i][c] // g
            H[r], H[i] = ([s * x + t * y for x, y in zip(H[r], H[i])],
                          [-b * x + a * y for x, y in zip(H[r], H[i])])
            U[r], U[i] = ([s * x + t * y for x, y in zip(U[r], U[i])],
                          [-b * x + a * y for x, y in zip(U[r], U[i])])
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        pivots.append(c)
        r += 1
    return H, U, pivots


def lattice_solve(target: Angle, gens: list[Angle]) -> list[int] | None:
    """Integers ``x`` with ``sum(x_i * gens[i]) == target``, or None."""
    names = sorted({k for a in [target, *gens] for k, _ in a.syms})
    vecs = [g.coords(names) for g in gens]
    t = target.coords(names)
    den = reduce(lcm, (x.denominator for v in vecs + [t] for x in v), 1)
    G = [[int(x * den) for x in v] for v in vecs]
    tv = [int(x * den) for x in t]
    H, U, pivots = _integer_echelon(G)
    y = [0] * len(G)
    rem = list(tv)
    for r, c in enumerate(pivots):
        q, rr = divmod(rem[c], H[r][c])
        if rr:
            return None
        y[r] = q
        rem = [a - q * b for a, b in zip(rem, H[r])]
    if any(rem):
        return None
    return [sum(y[r] * U[r][i] for r in range(len(G))) for i in range(len(G))]


def angle_congruent(a: Angle, b: Angle, lattice_gens: list[Angle]) -> bool:
    """True iff ``a - b`` lies in the integer span of ``lattice_gens``."""
    if not lattice_gens:
        raise ValueError("lattice_gens must be nonempty")
    return lattice_solve(a - b, lattice_gens) is not None


# ---------------------------------------------------------------------------
# phases and scalars

@dataclass(frozen=True)
class Phase:
    """``exp(i * exponent)``."""

    exponent: Angle = ZERO_ANGLE

    def __mul__(self, other: "Phase") -> "Phase":
        return Phase(self.exponent + other.exponent)

    def conj(self) -> "Phase":
        return Phase(-self.exponent)

    def canonical(self) -> "Phase":
        e = self.exponent
        return Phase(Angle(e.r0, e.rlam, e.rpi % 1, e.syms))

    def equiv(self, other: "Phase") -> bool:
        d = self.exponent - other.exponent
        return not (d.r0 or d.rlam or d.syms) and d.rpi.denominator == 1


def phase_eq(p: Phase, q: Phase) -> bool:
    return p.equiv(q)


def _free_key_neg(key):
    r0, rlam, syms = key
    return (-r0, -rlam, tuple((k, -v) for k, v in syms))


def _free_key_add(k1, k2):
    if not k2[2]:
        return (k1[0] + k2[0], k1[1] + k2[1], k1[2])
    return Angle(k1[0] + k2[0], k1[1] + k2[1], 0, k1[2] + k2[2]).free_part()


_ZERO_KEY = (Fraction(0), Fraction(0), ())


class Scalar:
    """Finite sum of phases with cyclotomic (in particular Gaussian) coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, value=0):
        if isinstance(value, Scalar):
            self.terms = value.terms
        elif isinstance(value, dict):
            self.terms = {k: v for k, v in value.items() if not v.is_zero()}
        elif isinstance(value, complex):
            raise TypeError("floating point complex values are not exact")
        else:
            v = _frac(value)
            self.terms = {_ZERO_KEY: Cyclo(1, (v,))} if v else {}
        self._hash = None

    @classmethod
    def phase(cls, angle: Angle, coeff=1) -> "Scalar":
        c = Cyclo.root_of_unity(angle.rpi)
        if not (isinstance(coeff, int) and coeff == 1):
            c = c * _as_cyclo(coeff)
        return cls({angle.free_part(): c})

    @classmethod
    def gaussian(cls, re_, im=0) -> "Scalar":
        return cls({_ZERO_KEY: Cyclo.gaussian(re_, im)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_unit(self) -> bool:
        return len(self.terms) == 1

    def is_rational(self) -> bool:
        if not self.terms:
            return True
        if len(self.terms) > 1:
            return False
        (k, v), = self.terms.items()
        return k == _ZERO_KEY and v.n == 1

    def to_fraction(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return next(iter(self.terms.values())).c[0]

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            other = Scalar(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for k, v in other.terms.items():
            w = out.get(k)
            if w is None:
                out[k] = v
            else:
                s = w + v
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
        return _mk(out)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return _mk({k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            other = Scalar(other)
        return self + (-other)

    def __rsub__(self, other) -> "Scalar":
        return Scalar(other) - self

    def __mul__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            other = Scalar(other)
        if not self.terms or not other.terms:
            return ZERO
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = k2 if k1 == _ZERO_KEY else (
                    k1 if k2 == _ZERO_KEY else _free_key_add(k1, k2))
                p = v1 * v2
                w = out.get(k)
                out[k] = p if w is None else w + p
        return Scalar(out)

    __rmul__ = __mul__

    def conj(self) -> "Scalar":
        return _mk({_free_key_neg(k): v.conj() for k, v in self.terms.items()})

    def inverse(self) -> "Scalar":
        if len(self.terms) != 1:
            raise NonUnitError(f"{self} is not a unit")
        (k, v), = self.terms.items()
        return _mk({_free_key_neg(k): v.inverse()})

    def __truediv__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            other = Scalar(other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "Scalar":
        return Scalar(other) * self.inverse()

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def expand(self):
        """Yield ``(Fraction coefficient, Angle)`` pairs of the expanded sum."""
        for (r0, rlam, syms), v in sorted(self.terms.items(), key=_term_order):
            for rpi, a in v.terms():
                yield a, Angle(r0, rlam, rpi, syms)

    def to_json(self) -> list:
        return [{"coeff_re": str(a), "coeff_im": "0", "angle": ang.to_json()}
                for a, ang in self.expand()]

    @classmethod
    def from_json(cls, entries) -> "Scalar":
        total = ZERO
        for e in entries:
            c = Cyclo.gaussian(Fraction(e.get("coeff_re", "0")),
                               Fraction(e.get("coeff_im", "0")))
            total = total + Scalar.phase(Angle.from_json(e["angle"]), c)
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for a, ang in self.expand():
            if ang.is_zero():
                parts.append(str(a))
            else:
                parts.append(("" if a == 1 else "-" if a == -1 else f"{a}*")
                             + f"e^(i*({ang}))")
        return " + ".join(parts)

    def __repr__(self):
        return f"Scalar({self})"


def _as_cyclo(x) -> Cyclo:
    if isinstance(x, Cyclo):
        return x
    return Cyclo.rational(x)


def _term_order(item):
    (r0, rlam, syms), _ = item
    return (r0, rlam, syms)


def _mk(terms: dict) -> Scalar:
    s = Scalar.__new__(Scalar)
    s.terms = terms
    s._hash = None
    return s


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar.gaussian(0, 1)
