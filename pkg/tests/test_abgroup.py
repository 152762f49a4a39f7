import random

import pytest
from hypothesis import given, settings, strategies as st

from extquot.abgroup import (
    FgAbelianGroup,
    IntegerMatrix,
    ShapeError,
    cokernel,
    hermite_normal_form,
    kernel_basis,
    smith_normal_form,
)

import oracles


def matrices(max_dim=6, lo=-9, hi=9):
    return st.integers(1, max_dim).flatmap(
        lambda m: st.integers(1, max_dim).flatmap(
            lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def random_unimodular(n, rng, steps=12):
    a = oracles.identity(n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        op = rng.randrange(3)
        if op == 0 and n > 1:
            k = rng.randint(-3, 3)
            a[i] = [x + k * y for x, y in zip(a[i], a[j])]
        elif op == 1 and n > 1:
            a[i], a[j] = a[j], a[i]
        else:
            a[i] = [-x for x in a[i]]
    return a


@settings(max_examples=300, deadline=None)
@given(matrices())
def test_snf_identity_and_unimodularity(rows):
    M = IntegerMatrix.from_rows(rows)
    snf = smith_normal_form(M)
    assert snf.U @ M @ snf.V == snf.D
    assert abs(snf.U.det()) == 1 and abs(snf.V.det()) == 1
    d = snf.diagonal
    for i in range(snf.D.rows):
        for j in range(snf.D.cols):
            if i != j:
                assert snf.D[i, j] == 0
    assert all(x >= 0 for x in d)
    nonzero = [x for x in d if x]
    assert d[:len(nonzero)] == tuple(nonzero)
    assert all(nonzero[i + 1] % nonzero[i] == 0 for i in range(len(nonzero) - 1))


@settings(max_examples=150, deadline=None)
@given(matrices(max_dim=4, lo=-6, hi=6))
def test_snf_matches_determinantal_divisors(rows):
    d = smith_normal_form(rows).diagonal
    assert tuple(x for x in d if x) == oracles.invariant_factors(rows)


@settings(max_examples=100, deadline=None)
@given(matrices(max_dim=5), st.integers(0, 2**32))
def test_cokernel_invariant_under_unimodular_change(rows, seed):
    rng = random.Random(seed)
    L = random_unimodular(len(rows), rng)
    R = random_unimodular(len(rows[0]), rng)
    changed = oracles.matmul(oracles.matmul(L, rows), R)
    assert cokernel(changed) == cokernel(rows)


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_kernel_rank_nullity(rows):
    M = IntegerMatrix.from_rows(rows)
    K = kernel_basis(M)
    assert len(K) + M.rank() == M.cols
    for v in K:
        assert all(x == 0 for x in M.apply(v))
    if K:
        assert IntegerMatrix.from_rows(K).rank() == len(K)


@settings(max_examples=100, deadline=None)
@given(matrices(max_dim=4))
def test_kernel_basis_is_saturated(rows):
    # a saturated sublattice has a unimodular completion: the gcd of maximal minors is 1
    K = kernel_basis(rows)
    if K:
        assert oracles.invariant_factors(K) == (1,) * len(K)


def test_named_snf_example():
    # determinantal divisors: gcd(2,4,6,8) = 2 and |det| = 8
    snf = smith_normal_form([[2, 4], [6, 8]])
    assert snf.diagonal == (2, 4)
    assert cokernel([[2, 4], [6, 8]]) == FgAbelianGroup(0, (2, 4))


def test_snf_is_deterministic():
    a = smith_normal_form([[3, 1, 4], [1, 5, 9], [2, 6, 5]])
    b = smith_normal_form([[3, 1, 4], [1, 5, 9], [2, 6, 5]])
    assert a == b


def test_cokernel_of_reflection_minus_identity():
    # the swap on Z^2: (w - 1) has image spanned by (1, -1)
    M = [[-1, 1], [1, -1]]
    assert cokernel(M) == FgAbelianGroup(1, ())
    assert kernel_basis(M) == [(1, 1)]


def test_cokernel_of_minus_two():
    assert cokernel([[-2]]) == FgAbelianGroup(0, (2,))


def test_cokernel_ambient_rank_mismatch():
    with pytest.raises(ShapeError):
        cokernel([[1, 2, 3]], ambient_rank=2)


def test_shape_errors():
    with pytest.raises(ShapeError):
        IntegerMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(ShapeError):
        IntegerMatrix.identity(2) @ IntegerMatrix.identity(3)


def test_fg_group_validation_and_arithmetic():
    with pytest.raises(ValueError):
        FgAbelianGroup(0, (4, 2))
    with pytest.raises(ValueError):
        FgAbelianGroup(0, (1,))
    G = FgAbelianGroup.from_cyclic_orders([4, 6])
    assert G == FgAbelianGroup(0, (2, 12))
    assert G.order == 24
    assert len(list(G.elements())) == 24
    assert G.element_order((1, 1)) == 12
    assert G.add((1, 11), (1, 1)) == (0, 0)
    assert G.neg((1, 5)) == (1, 7)
    H = FgAbelianGroup.from_cyclic_orders([0, 3])
    assert H.free_rank == 1 and H.order is None
    assert H.element_order((1, 0)) is None


def test_hermite_normal_form_spans_same_lattice():
    vecs = [(2, 4, 4), (-6, 6, 12), (10, -4, -16)]
    H = hermite_normal_form(vecs)
    assert oracles.invariant_factors([list(v) for v in H]) == oracles.invariant_factors([list(v) for v in vecs])
    assert hermite_normal_form(H) == H


def test_inverse_and_power():
    M = IntegerMatrix.from_rows([[2, 1], [1, 1]])
    assert M @ M.inverse() == IntegerMatrix.identity(2)
    assert M ** -1 == M.inverse()
    assert M ** 3 == M @ M @ M
    assert M.is_unimodular()
    with pytest.raises(ValueError):
        IntegerMatrix.from_rows([[2, 0], [0, 1]]).inverse()
