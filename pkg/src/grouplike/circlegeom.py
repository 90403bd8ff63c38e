"""Circles ``p th1 + q th2 = alpha`` on the 2-torus and their groupoid products.

The groupoid is ``T^2 => T^1`` with source and target both the projection to
``th2`` and composition adding ``th1``.  Composing two circles means adding
their ``th1`` values over every common ``th2``.  Solving each circle for
``th1`` gives ``|p|`` branches, and winding ``th2`` once around permutes them.
The composed circles are the orbits of that permutation, found here by
walking them.  This is deliberately independent of the gcd/lcm formulas in
:mod:`grouplike.nctorus`, so the two can check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import Callable

from .nctorus import ModuleClass, class_canonicalize, tensor_classify
from .scalars import LAM, TWO_PI, ZERO_ANGLE, Angle, lattice_solve

__all__ = [
    "TorusCircle", "ComposedComponent", "AgreementReport",
    "compose_circles", "oracle_compare", "sweep", "bisection_translate",
    "emit_plot", "render_svg", "DEFAULT_LAMBDA",
]

# display only: 2pi(sqrt 2 - 1) rounded to 1e-6
DEFAULT_LAMBDA = round(2 * math.pi * (math.sqrt(2) - 1), 6)


@dataclass(frozen=True)
class TorusCircle:
    p: int
    q: int
    alpha: Angle = ZERO_ANGLE

    def __post_init__(self):
        if self.p == 0 and self.q == 0:
            raise ValueError("(p, q) = (0, 0) is not a circle")

    def as_class(self) -> ModuleClass:
        return ModuleClass(self.p, self.q, self.alpha)

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "alpha": str(self.alpha)}


@dataclass(frozen=True)
class ComposedComponent:
    circle: TorusCircle
    winding_multiplicity: int
    branches: tuple = ()  # the branch labels visited, in order

    def to_json(self) -> dict:
        return {"circle": self.circle.to_json(),
                "windingMultiplicity": self.winding_multiplicity,
                "branches": [list(b) for b in self.branches]}


def _branch_orbits(p1: int, q1: int, p2: int, q2: int) -> list[list[tuple[int, int]]]:
    """Orbits of ``(k1, k2) -> (k1 - q1, k2 - q2)`` on ``Z_p1 x Z_p2``, by walking."""
    seen = set()
    orbits = []
    for start in iproduct(range(p1), range(p2)):
        if start in seen:
            continue
        orbit = []
        k = start
        while k not in seen:
            seen.add(k)
            orbit.append(k)
            k = ((k[0] - q1) % p1, (k[1] - q2) % p2)
        orbits.append(orbit)
    return orbits


def _normalize(c: TorusCircle) -> TorusCircle:
    if c.p < 0 or (c.p == 0 and c.q < 0):
        return TorusCircle(-c.p, -c.q, -c.alpha)
    return c


def compose_circles(C1: TorusCircle, C2: TorusCircle) -> list[ComposedComponent]:
    C1, C2 = _normalize(C1), _normalize(C2)
    p1, q1, a1 = C1.p, C1.q, C1.alpha
    p2, q2, a2 = C2.p, C2.q, C2.alpha
    if p1 and p2:
        out = []
        for orbit in _branch_orbits(p1, q1, p2, q2):
            k1, k2 = orbit[0]
            # th1 + th1' along the branch, starting at th2 = 0:
            #   S(t) = (a1 - q1 t + 2pi k1)/p1 + (a2 - q2 t + 2pi k2)/p2
            # after len(orbit) turns th2 has wound N times and S has wound M.
            N = len(orbit)
            M = -N * (Fraction(q1, p1) + Fraction(q2, p2))
            assert M.denominator == 1, "orbit did not close"
            M = int(M)
            # the curve (S(t), t) solves N th1 - M th2 = N S(0)
            start = (a1 + TWO_PI * k1) / p1 + (a2 + TWO_PI * k2) / p2
            circle = _normalize(TorusCircle(N, -M, start * N))
            out.append(ComposedComponent(circle, math.gcd(N, M), tuple(orbit)))
        return out
    if p1 or p2:
        # one side is horizontal: th2 is pinned by it, the other side contributes
        # one branch per value of k; th1 then sweeps the whole circle
        flat, other = (C1, C2) if p1 == 0 else (C2, C1)
        return [ComposedComponent(TorusCircle(0, flat.q, flat.alpha), abs(flat.q), ((k,),))
                for k in range(abs(other.p))]
    # both horizontal: need th2 with q1 th2 in a1 + L and q2 th2 in a2 + L,
    # L = lam Z + 2pi Z.  Writing th2 = (a1 + x)/q1 = (a2 + y)/q2 with x, y in L
    # means q2 a1 - q1 a2 = q1 y - q2 x.
    sol = lattice_solve(a1 * q2 - a2 * q1,
                        [LAM * q1, TWO_PI * q1, LAM * -q2, TWO_PI * -q2])
    if sol is None:
        return []
    x = LAM * sol[2] + TWO_PI * sol[3]
    g = math.gcd(q1, q2)
    th2 = (a1 + x) / q1
    return [ComposedComponent(TorusCircle(0, g, th2 * g), g, ())]


# ---------------------------------------------------------------------------
# agreement with the classifier

@dataclass
class AgreementReport:
    c1: ModuleClass
    c2: ModuleClass
    classifier: dict
    geometric: list
    agree: bool
    witnesses: list

    def to_json(self) -> dict:
        return {"inputs": [self.c1.to_json(), self.c2.to_json()],
                "classifier": self.classifier, "geometric": self.geometric,
                "agree": self.agree, "witnesses": self.witnesses}


def oracle_compare(c1: ModuleClass, c2: ModuleClass,
                   classify: Callable = tensor_classify) -> AgreementReport:
    res = classify(c1, c2)
    comps = compose_circles(TorusCircle(c1.p, c1.q, c1.alpha),
                            TorusCircle(c2.p, c2.q, c2.alpha))
    witnesses = []
    if len(comps) != res.multiplicity:
        witnesses.append({"kind": "count", "classifier": res.multiplicity,
                          "geometric": len(comps)})
    for comp in comps:
        geo = class_canonicalize(comp.circle.as_class())
        if res.result is None:
            break
        if (geo.p, geo.q) != (res.result.p, res.result.q):
            witnesses.append({"kind": "winding", "classifier": [res.result.p, res.result.q],
                              "geometric": [geo.p, geo.q], "branches": comp.to_json()["branches"]})
        elif geo.alpha != res.result.alpha:
            witnesses.append({"kind": "offset", "classifier": str(res.result.alpha),
                              "geometric": str(geo.alpha), "branches": comp.to_json()["branches"]})
    return AgreementReport(c1, c2, res.to_json(), [c.to_json() for c in comps],
                           not witnesses, witnesses)


def primitive_classes(bound: int) -> list[tuple[int, int]]:
    """Canonical coprime ``(p, q)`` with ``|p|, |q| <= bound``."""
    out = []
    for p in range(0, bound + 1):
        for q in range(-bound, bound + 1):
            if (p > 0 or q > 0) and math.gcd(p, q) == 1:
                out.append((p, q))
    return out


DEFAULT_ALPHAS = ("0", "lam", "lam/2", "2pi/3", "a1", "a2")


def sweep(bound: int = 5, alphas=DEFAULT_ALPHAS,
          classify: Callable = tensor_classify) -> list[AgreementReport]:
    """Every ordered pair of canonical coprime classes times every pair of offsets."""
    angles = [Angle.parse(a) for a in alphas]
    classes = primitive_classes(bound)
    out = []
    for (p1, q1), (p2, q2) in iproduct(classes, repeat=2):
        for x, y in iproduct(angles, repeat=2):
            out.append(oracle_compare(ModuleClass(p1, q1, x), ModuleClass(p2, q2, y),
                                      classify))
    return out


# ---------------------------------------------------------------------------

def bisection_translate(C: TorusCircle, m: int, n: int) -> TorusCircle:
    """Translate by ``(-lam n, lam m)``: ``alpha -> alpha + lam (n p - m q)``."""
    return TorusCircle(C.p, C.q, C.alpha + LAM * (n * C.p - m * C.q))


# ---------------------------------------------------------------------------
# plotting

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#17becf", "#8c564b", "#e377c2")


def _numeric(angle: Angle, lam: float, symbols: dict) -> float:
    val = float(angle.r0) + float(angle.rlam) * lam + float(angle.rpi) * 2 * math.pi
    for name, c in angle.syms:
        val += float(c) * symbols.get(name, 0.0)
    return val


def _segments(C: TorusCircle, value: float, steps: int):
    """Polyline pieces of the locus inside ``[0, 2pi)^2``, split at the wraps."""
    tau = 2 * math.pi
    p, q = C.p, C.q
    pieces = []
    if p == 0:
        for k in range(abs(q)):
            th2 = ((value + tau * k) / q) % tau
            pieces.append([(0.0, th2), (tau, th2)])
        return pieces
    for k in range(abs(p)):
        cur = []
        prev = None
        for i in range(steps + 1):
            t = tau * i / steps
            th1 = ((value - q * t + tau * k) / p) % tau
            if prev is not None and abs(th1 - prev) > math.pi:
                pieces.append(cur)
                cur = []
            cur.append((th1, t))
            prev = th1
        pieces.append(cur)
    return pieces


def render_svg(circles, lam: float = DEFAULT_LAMBDA, symbols: dict | None = None,
               size: int = 400, steps: int = 240, groups=None) -> str:
    """SVG text; ``groups`` optionally assigns a color index per circle."""
    symbols = symbols or {}
    tau = 2 * math.pi
    pad = 30

    def xy(th1, th2):
        return (pad + th1 / tau * size, pad + (1 - th2 / tau) * size)

    w = size + 2 * pad
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{w + 20}" '
        f'viewBox="0 0 {w} {w + 20}">',
        f'<rect x="{pad}" y="{pad}" width="{size}" height="{size}" fill="none" stroke="#000"/>',
        f'<text x="{pad}" y="{pad - 8}" font-size="11">th2 (vertical) vs th1 (horizontal), [0, 2pi)^2</text>',
        f'<text x="{pad}" y="{w + 12}" font-size="11">rendering choice: lam = {lam:.6f}'
        + "".join(f", {k} = {v:.6f}" for k, v in sorted(symbols.items()))
        + "</text>",
    ]
    for idx, C in enumerate(circles):
        color = _PALETTE[(groups[idx] if groups else idx) % len(_PALETTE)]
        value = _numeric(C.alpha, lam, symbols)
        for piece in _segments(C, value, steps):
            pts = " ".join(f"{x:.3f},{y:.3f}" for x, y in (xy(a, b) for a, b in piece))
            lines.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                         f'points="{pts}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def emit_plot(circles, path, **kw) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_svg(circles, **kw))
