import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grouplike.symprel import (DimensionMismatch, LinRelation, MiddleMismatch,
                               NotSymplectic, SympSpace, check_zigzag, coevaluation,
                               compose_rel, direct_sum, evaluation, graph_of_linear_map,
                               identity_rel, is_coisotropic, is_isotropic, is_lagrangian,
                               is_symplectic_map, opposite_space, orthogonal, product_rel,
                               random_lagrangian, random_symplectic_space, standard_space,
                               transpose_rel, zero_space, zigzag_report)

seeds = st.integers(0, 10**6)
F = Fraction


def matmul(a, b):
    return [[sum(F(a[i][k]) * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def random_symplectic_matrix(n, rng):
    """Product of elementary symplectic shears on the standard space of dim 2n."""
    M = [[F(int(i == j)) for j in range(2 * n)] for i in range(2 * n)]
    for _ in range(4):
        S = [[F(int(i == j)) for j in range(2 * n)] for i in range(2 * n)]
        # [[I, B], [0, I]] with B symmetric, or its transpose
        B = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                B[i][j] = B[j][i] = rng.randint(-2, 2)
        lower = rng.random() < 0.5
        for i in range(n):
            for j in range(n):
                if lower:
                    S[n + i][j] = F(B[i][j])
                else:
                    S[i][n + j] = F(B[i][j])
        M = matmul(S, M)
    return M


def test_standard_space():
    S = standard_space(2)
    assert S.dim == 4
    assert S.pairing((1, 0, 0, 0), (0, 0, 1, 0)) == 1
    assert S.pairing((0, 0, 1, 0), (1, 0, 0, 0)) == -1


@pytest.mark.parametrize("omega,err", [
    (((0, 1), (1, 0)), NotSymplectic),
    (((0, 0), (0, 0)), NotSymplectic),
    (((0,),), NotSymplectic),
    (((0, 1, 0), (-1, 0, 0)), DimensionMismatch),
])
def test_bad_forms_rejected(omega, err):
    with pytest.raises(err):
        SympSpace(len(omega), omega)


def test_lagrangian_examples():
    S = standard_space(1)
    assert is_lagrangian(identity_rel(S))
    # scaling by 2 does not preserve the form
    assert not is_lagrangian(graph_of_linear_map([[2, 0], [0, 2]], S, S))
    assert not is_symplectic_map([[2, 0], [0, 2]], S, S)
    # det 1 on a 2-dim space is symplectic
    assert is_symplectic_map([[2, 1], [1, 1]], S, S)
    assert is_lagrangian(graph_of_linear_map([[2, 1], [1, 1]], S, S))


def test_isotropic_vs_coisotropic():
    S = standard_space(1)
    line = LinRelation(S, zero_space(), ((F(1), F(0)),))
    assert is_isotropic(line) and is_coisotropic(line) and is_lagrangian(line)
    whole = LinRelation(S, zero_space(), ((F(1), F(0)), (F(0), F(1))))
    assert not is_isotropic(whole) and is_coisotropic(whole)
    S2 = standard_space(2)
    small = LinRelation(S2, zero_space(), ((F(1), F(0), F(0), F(0)),))
    assert is_isotropic(small) and not is_coisotropic(small)
    assert len(orthogonal(small)) == 3


def test_relation_canonical_equality():
    S = standard_space(1)
    a = LinRelation(S, zero_space(), ((F(1), F(1)),))
    b = LinRelation(S, zero_space(), ((F(-3), F(-3)),))
    assert a == b


def test_dimension_checks():
    S = standard_space(1)
    with pytest.raises(DimensionMismatch):
        LinRelation(S, S, ((F(1),),))
    with pytest.raises(DimensionMismatch):
        graph_of_linear_map([[1, 0, 0]], S, S)
    with pytest.raises(MiddleMismatch):
        compose_rel(identity_rel(S), identity_rel(standard_space(2)))


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 3))
def test_compose_graphs_matches_matrix_product(seed, n):
    rng = random.Random(seed)
    S = standard_space(n)
    f, g = random_symplectic_matrix(n, rng), random_symplectic_matrix(n, rng)
    assert is_symplectic_map(f, S, S) and is_symplectic_map(g, S, S)
    composite = compose_rel(graph_of_linear_map(f, S, S), graph_of_linear_map(g, S, S))
    assert composite == graph_of_linear_map(matmul(g, f), S, S)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_identity_and_transpose(seed):
    rng = random.Random(seed)
    A = random_symplectic_space(2, rng)
    B = random_symplectic_space(4, rng)
    L = random_lagrangian(A, B, rng)
    assert compose_rel(identity_rel(A), L) == L
    assert compose_rel(L, identity_rel(B)) == L
    assert transpose_rel(transpose_rel(L)) == L
    assert is_lagrangian(transpose_rel(L))


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_random_lagrangians_compose(seed):
    rng = random.Random(seed)
    A, B, C = (random_symplectic_space(2 * rng.randint(0, 2), rng) for _ in range(3))
    L, K = random_lagrangian(A, B, rng), random_lagrangian(B, C, rng)
    assert is_lagrangian(L) and is_lagrangian(K)
    assert is_lagrangian(compose_rel(L, K))


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_compose_associative(seed):
    rng = random.Random(seed)
    A, B, C, D = (random_symplectic_space(2, rng) for _ in range(4))
    L, K, M = random_lagrangian(A, B, rng), random_lagrangian(B, C, rng), random_lagrangian(C, D, rng)
    assert compose_rel(compose_rel(L, K), M) == compose_rel(L, compose_rel(K, M))


def test_product_rel_is_lagrangian():
    S, T = standard_space(1), standard_space(2)
    P = product_rel(identity_rel(S), identity_rel(T))
    assert P == identity_rel(direct_sum(S, T))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_zigzag_standard(n):
    S = standard_space(n)
    rep = zigzag_report(S)
    assert rep == {"S": True, "S_dual": True, "ev_lagrangian": True, "coev_lagrangian": True}
    assert check_zigzag(S)


@settings(max_examples=20, deadline=None)
@given(seeds, st.sampled_from([2, 4, 6]))
def test_zigzag_random_forms(seed, dim):
    assert check_zigzag(random_symplectic_space(dim, seed))


def test_zigzag_fails_for_wrong_evaluation():
    S = standard_space(1)
    dual = opposite_space(S)
    # pair s with -s instead of s
    bad = LinRelation(direct_sum(S, dual), zero_space(),
                      ((F(1), F(0), F(-1), F(0)), (F(0), F(1), F(0), F(-1))))
    assert is_lagrangian(bad)
    assert not check_zigzag(S, ev=bad)
    assert is_lagrangian(evaluation(S)) and is_lagrangian(coevaluation(S))


def test_json_round_trip():
    L = random_lagrangian(standard_space(1), random_symplectic_space(2, 3), 5)
    assert LinRelation.from_json(L.to_json()) == L
