"""Acceptance criteria 1-9.  Each test prints one PASS/FAIL line; run with ``-s``."""

import random
import time
from fractions import Fraction

import pytest

from generators import random_element, random_groupoid, random_principal
from grouplike.bibundle import (compose, functor_stacky_group, morita_refute, mutate_action,
                                quotient_stack_group, stacky_group_check)
from grouplike.circlegeom import primitive_classes, sweep
from grouplike.convalg import (ConvolutionAlgebra, algebra_iso, bimodule_from_bibundle,
                               bimodule_iso, character_module, check_coassoc, check_counit,
                               cyclic_character, hopfish_from_stacky_group, is_algebra_hom,
                               is_commutative, is_intertwiner, module_tensor, point_module,
                               star, structure_constants, tensor_bimodules)
from grouplike.groupoid import GroupSpec, group_as_groupoid, trivial_groupoid
from grouplike.nctorus import ModuleClass, NCTElement, basis, nct_mul, tensor_classify
from grouplike.scalars import LAM, TWO_PI, Angle, Scalar
from grouplike.symprel import (check_zigzag, compose_rel, is_lagrangian, random_lagrangian,
                               random_symplectic_space, standard_space)

A1, A2 = Angle.sym("a1"), Angle.sym("a2")


def verdict(n, ok, detail):
    print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
    assert ok, detail


def test_criterion_1_oracle_agreement():
    start = time.perf_counter()
    reports = sweep(5)
    elapsed = time.perf_counter() - start
    bad = [r for r in reports if not r.agree]
    branches = {r.classifier["branch"] for r in reports}
    ok = not bad and branches == {"p", "mixed", "zero"} and elapsed < 30
    verdict(1, ok, f"{len(reports)} cases, {len(bad)} disagreements, "
                   f"branches {sorted(branches)}, {elapsed:.1f}s")


def test_criterion_2_spot_checks():
    cases = [
        ((2, 1, A1), (3, 1, A2), 1, ModuleClass(6, 5, A1 * 3 + A2 * 2)),
        ((2, 1, A1), (2, 1, A2), 2, ModuleClass(2, 2, A1 + A2)),
        ((0, 1, A1), (0, 1, A1 + LAM), 1, ModuleClass(0, 1, A1)),
    ]
    failures = []
    for c1, c2, mult, expect in cases:
        r = tensor_classify(ModuleClass(*c1), ModuleClass(*c2))
        if r.multiplicity != mult or r.raw != expect:
            failures.append((c1, c2, r.to_json()))
    r = tensor_classify(ModuleClass(0, 1), ModuleClass(0, 1, TWO_PI / 3))
    if r.multiplicity != 0 or r.result is not None:
        failures.append(((0, 1, 0), (0, 1, "2pi/3"), r.to_json()))
    verdict(2, not failures, f"4 spot checks, failures: {failures}")


def test_criterion_3_observation_identities():
    alphas = [Angle.parse(a) for a in ("0", "lam", "lam/2", "2pi/3", "a1", "a2")]
    classes = primitive_classes(5)
    checked, failures = 0, []
    for p1, q1 in classes:
        for p2, q2 in classes:
            for x in alphas:
                for y in alphas:
                    r = tensor_classify(ModuleClass(p1, q1, x), ModuleClass(p2, q2, y))
                    if r.branch != "p":
                        continue
                    checked += 1
                    p, q, a = r.raw.p, r.raw.q, r.raw.alpha
                    if Fraction(q, p) != Fraction(q1, p1) + Fraction(q2, p2) \
                            or a / p != x / p1 + y / p2:
                        failures.append(((p1, q1, str(x)), (p2, q2, str(y))))
    verdict(3, checked > 0 and not failures,
            f"{checked} p-branch outputs, {len(failures)} violations")


def _iso(P, Q):
    X = bimodule_iso(P, Q)
    return X is not None and is_intertwiner(X, P, Q)


def test_criterion_4_hopfish_reduction():
    start = time.perf_counter()
    problems = []
    for n in range(2, 7):
        D = hopfish_from_stacky_group(*functor_stacky_group(GroupSpec.cyclic(n), True))
        A = D.algebra
        for g1 in range(n):
            for g2 in range(n):
                T = module_tensor(point_module(A, g1), point_module(A, g2), D)
                if not _iso(T, point_module(A, (g1 + g2) % n)):
                    problems.append(f"discrete Z{n} points ({g1},{g2})")
        if not (check_coassoc(D) and check_counit(D)):
            problems.append(f"discrete Z{n} coassoc/counit")
        D = hopfish_from_stacky_group(*functor_stacky_group(GroupSpec.cyclic(n), False))
        A = D.algebra
        for a in range(n):
            for b in range(n):
                T = module_tensor(character_module(A, cyclic_character(n, a)),
                                  character_module(A, cyclic_character(n, b)), D)
                if not _iso(T, character_module(A, cyclic_character(n, (a + b) % n))):
                    problems.append(f"BZ{n} chi_{a} x chi_{b} (dim {T.dim}) != chi_{(a + b) % n}")
        if not (check_coassoc(D) and check_counit(D)):
            problems.append(f"BZ{n} coassoc/counit")
    elapsed = time.perf_counter() - start
    if elapsed >= 10:
        problems.append(f"runtime {elapsed:.1f}s")
    chars = [x for x in problems if " chi_" in x]
    other = [x for x in problems if " chi_" not in x]
    verdict(4, not problems,
            f"{elapsed:.1f}s; point modules, coassoc, counit: {other or 'ok'}; "
            f"BZn characters: {len(chars)} mismatches, e.g. {chars[:2]}")


def test_criterion_5_functoriality():
    failures = []
    for seed in range(50):
        rng = random.Random(seed)
        G, H, K = (random_groupoid(rng) for _ in range(3))
        M, N = random_principal(G, H, rng), random_principal(H, K, rng)
        P = bimodule_from_bibundle(compose(M, N))
        Q = tensor_bimodules(bimodule_from_bibundle(M), bimodule_from_bibundle(N))
        if not _iso(P, Q):
            failures.append(seed)
    verdict(5, not failures, f"50 seeded principal pairs, failing seeds: {failures}")


def test_criterion_6_stacky_groups():
    problems = []
    for n in range(1, 5):
        if not stacky_group_check(*functor_stacky_group(GroupSpec.cyclic(n), True)):
            problems.append(f"discrete Z{n}")
    for n, d in [(2, 1), (4, 2), (6, 3), (6, 2), (5, 5)]:
        if not stacky_group_check(*quotient_stack_group(n, d)):
            problems.append(f"quotient ({n},{d})")
    caught = 0
    for seed in range(10):
        G, Em, Ee, Einv = functor_stacky_group(GroupSpec.cyclic(3), True)
        bad, _ = mutate_action(Em, seed, "left" if seed % 2 else "right")
        rep = stacky_group_check(G, bad, Ee, Einv)
        failed = [k for k, v in rep.checks.items() if not v]
        if not rep.ok and failed and rep.checks[failed[0]].witness:
            caught += 1
    if caught != 10:
        problems.append(f"only {caught}/10 mutations caught")
    verdict(6, not problems, f"families and 10 mutations, problems: {problems}")


def test_criterion_7_morita_footnote():
    BZ2 = group_as_groupoid(GroupSpec.cyclic(2))
    two = trivial_groupoid(2)
    obs = morita_refute(BZ2, two)
    A, B = ConvolutionAlgebra(BZ2), ConvolutionAlgebra(two)
    images = algebra_iso(A, B)
    ok = (obs is not None and obs.invariant == "isotropy classes"
          and A.dim == B.dim == 2 and is_commutative(A) and is_commutative(B)
          and images is not None and is_algebra_hom(A, B, images))
    verdict(7, ok, f"obstruction {obs.to_json() if obs else None}; "
                   f"structure constants {structure_constants(A)} vs {structure_constants(B)}; "
                   f"iso {dict((k, str(v)) for k, v in (images or {}).items())}")


def test_criterion_8_zigzag():
    problems = []
    for n in (1, 2, 3):
        if not check_zigzag(standard_space(n)):
            problems.append(f"standard dim {2 * n}")
    for seed in range(20):
        for dim in (2, 4, 6):
            if not check_zigzag(random_symplectic_space(dim, seed)):
                problems.append(f"random dim {dim} seed {seed}")
    for seed in range(100):
        rng = random.Random(seed)
        A, B, C = (random_symplectic_space(2 * rng.randint(0, 3), rng) for _ in range(3))
        L, K = random_lagrangian(A, B, rng), random_lagrangian(B, C, rng)
        if not is_lagrangian(compose_rel(L, K)):
            problems.append(f"composition seed {seed}")
    verdict(8, not problems, f"zig-zag 63 forms, 100 compositions, problems: {problems}")


def _random_nct(rng):
    coeffs = {}
    for _ in range(3):
        k = (rng.randint(-3, 3), rng.randint(-3, 3))
        coeffs[k] = Scalar.phase(A1 * rng.randint(-1, 1) + LAM * rng.randint(-1, 1),
                                 rng.randint(1, 2))
    return NCTElement(coeffs)


def test_criterion_9_algebra_axioms():
    problems = []
    rng = random.Random(2024)
    for gi in range(10):
        A = ConvolutionAlgebra(random_groupoid(rng))
        for _ in range(10):
            a, b, c = (random_element(A, rng) for _ in range(3))
            if (a * b) * c != a * (b * c):
                problems.append(f"assoc groupoid {gi}")
            if star(a * b) != star(b) * star(a):
                problems.append(f"star groupoid {gi}")
    for _ in range(50):
        x, y, z = _random_nct(rng), _random_nct(rng), _random_nct(rng)
        if nct_mul(nct_mul(x, y), z) != nct_mul(x, nct_mul(y, z)):
            problems.append("nct assoc")
    for n1 in range(-2, 3):
        for l1 in range(-2, 3):
            for n2 in range(-2, 3):
                for l2 in range(-2, 3):
                    if nct_mul(basis(n1, l1), basis(n2, l2)) != \
                            basis(n1 + n2, l1 + l2, Scalar.phase(LAM * (n1 * l2))):
                        problems.append(f"basis rule {(n1, l1, n2, l2)}")
    verdict(9, not problems, f"100 elements over 10 groupoids, nct checks, problems: {problems[:5]}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-s", "-q"]))
