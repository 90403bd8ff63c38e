import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grouplike.circlegeom import (DEFAULT_LAMBDA, TorusCircle, bisection_translate,
                                  compose_circles, emit_plot, oracle_compare,
                                  primitive_classes, render_svg, sweep)
from grouplike.nctorus import ModuleClass, TensorResult, class_canonicalize, tensor_classify
from grouplike.scalars import LAM, TWO_PI, ZERO_ANGLE, Angle

TAU = 2 * math.pi
SYMS = {"a1": 0.4123, "a2": 1.2345}
A1, A2 = Angle.sym("a1"), Angle.sym("a2")


def value(a: Angle) -> float:
    v = float(a.r0) + float(a.rlam) * DEFAULT_LAMBDA + float(a.rpi) * TAU
    return v + sum(float(c) * SYMS[k] for k, c in a.syms)


def near_multiple(x, period=TAU, tol=1e-7):
    r = x % period
    return min(r, period - r) < tol


def sample_products(C1, C2, steps=7):
    """Points of the composite: pairs over a common th2, th1 values added."""
    pts = []
    for i in range(steps):
        t = TAU * (i + 0.37) / steps
        for k1 in range(abs(C1.p)):
            for k2 in range(abs(C2.p)):
                s1 = (value(C1.alpha) - C1.q * t + TAU * k1) / C1.p
                s2 = (value(C2.alpha) - C2.q * t + TAU * k2) / C2.p
                pts.append((s1 + s2, t))
    return pts


coprime = st.tuples(st.integers(1, 5), st.integers(-5, 5)).filter(lambda t: math.gcd(*t) == 1)
alphas = st.sampled_from([ZERO_ANGLE, LAM, LAM / 2, TWO_PI / 3, A1, A2])


@settings(max_examples=60, deadline=None)
@given(coprime, coprime, alphas, alphas)
def test_sampled_points_lie_on_components(c1, c2, x, y):
    C1, C2 = TorusCircle(*c1, x), TorusCircle(*c2, y)
    comps = compose_circles(C1, C2)
    assert sum(c.circle.p for c in comps) == c1[0] * c2[0]
    for th1, th2 in sample_products(C1, C2):
        assert any(near_multiple(c.circle.p * th1 + c.circle.q * th2 - value(c.circle.alpha))
                   for c in comps)


def test_branch_orbits_example():
    # (2,1) x (3,1): 6 branches in one orbit, giving (6, 5)
    comps = compose_circles(TorusCircle(2, 1, A1), TorusCircle(3, 1, A2))
    assert len(comps) == 1
    c = comps[0]
    assert (c.circle.p, c.circle.q) == (6, 5)
    assert class_canonicalize(c.circle.as_class()).alpha == (A1 * 3 + A2 * 2).reduced()
    assert len(c.branches) == 6


def test_equal_slopes_split():
    comps = compose_circles(TorusCircle(2, 1, A1), TorusCircle(2, 1, A2))
    assert len(comps) == 2
    assert all((c.circle.p, c.circle.q) == (2, 2) for c in comps)
    assert all(c.winding_multiplicity == 2 for c in comps)


def test_horizontal_cases():
    mixed = compose_circles(TorusCircle(0, 1, A1), TorusCircle(3, 2, A2))
    assert len(mixed) == 3
    assert all(c.circle == TorusCircle(0, 1, A1) for c in mixed)
    both = compose_circles(TorusCircle(0, 1, A1), TorusCircle(0, 1, A1 + LAM))
    assert len(both) == 1
    assert class_canonicalize(both[0].circle.as_class()) == ModuleClass(0, 1, A1)
    assert compose_circles(TorusCircle(0, 1), TorusCircle(0, 1, TWO_PI / 3)) == []


def test_zero_circle_rejected():
    with pytest.raises(ValueError):
        TorusCircle(0, 0)


def test_primitive_classes():
    cls = primitive_classes(5)
    assert len(cls) == len(set(cls))
    assert (0, 1) in cls and (1, 0) in cls and (0, -1) not in cls
    assert all(math.gcd(p, q) == 1 for p, q in cls)


def test_small_sweep_agrees():
    reports = sweep(2)
    assert reports and all(r.agree for r in reports)


def _flip_q(c1, c2):
    r = tensor_classify(c1, c2)
    if r.result is None or r.result.q == 0:
        return r
    bad = ModuleClass(r.result.p, -r.result.q, r.result.alpha)
    return TensorResult(r.multiplicity, bad, bad, r.branch)


def _drop_copy(c1, c2):
    r = tensor_classify(c1, c2)
    return TensorResult(max(r.multiplicity - 1, 0), r.result, r.raw, r.branch)


def _shift_offset(c1, c2):
    r = tensor_classify(c1, c2)
    if r.result is None:
        return r
    bad = ModuleClass(r.result.p, r.result.q, r.result.alpha + TWO_PI / 5)
    return TensorResult(r.multiplicity, class_canonicalize(bad), bad, r.branch)


@pytest.mark.parametrize("mutant,kind", [(_flip_q, "winding"), (_drop_copy, "count"),
                                         (_shift_offset, "offset")])
def test_mutated_classifier_detected(mutant, kind):
    reports = sweep(2, classify=mutant)
    bad = [r for r in reports if not r.agree]
    assert bad
    assert any(w["kind"] == kind for r in bad for w in r.witnesses)


def test_report_json():
    r = oracle_compare(ModuleClass(2, 1, A1), ModuleClass(3, 1, A2))
    d = r.to_json()
    assert d["agree"] and d["classifier"]["mult"] == 1
    assert d["geometric"][0]["circle"]["p"] == 6


def test_bisection_translate():
    C = TorusCircle(2, 1, A1)
    T = bisection_translate(C, 1, 2)
    # alpha + lam (n p - m q) = a1 + lam (4 - 1)
    assert T.alpha == A1 + LAM * 3
    assert class_canonicalize(T.as_class()) == class_canonicalize(C.as_class())


@settings(max_examples=50, deadline=None)
@given(coprime, alphas, st.integers(-3, 3), st.integers(-3, 3))
def test_bisection_preserves_class(c, x, m, n):
    C = TorusCircle(*c, x)
    assert class_canonicalize(bisection_translate(C, m, n).as_class()) == \
        class_canonicalize(C.as_class())


def test_svg_deterministic(tmp_path):
    circles = [TorusCircle(2, 1, A1), TorusCircle(0, 1, LAM / 2)]
    a = render_svg(circles, symbols={"a1": 0.5})
    b = render_svg(circles, symbols={"a1": 0.5})
    assert a == b
    assert a.startswith("<svg") and a.rstrip().endswith("</svg>")
    assert "rendering choice: lam = " in a
    assert a.count("<polyline") >= 3
    out = tmp_path / "c.svg"
    emit_plot(circles, out, symbols={"a1": 0.5})
    assert out.read_text() == a


def test_default_lambda():
    assert DEFAULT_LAMBDA == round(TAU * (math.sqrt(2) - 1), 6)
