from itertools import product
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from complicial import simplex as sx
from complicial.adc import (Chain, ChainMorphism, FreeADC, GradedSubgroup, NotFreeQuotient,
                            StructuralError, augmentation, boundary, boundary_parts,
                            check_isomorphism, check_morphism, check_total_order,
                            enumerate_morphisms, generated_subcomplex, iterated_join, join,
                            join_order, morphism_kernel, order_witness, quotient)
from complicial.linalg import NonnegSolver, integer_kernel


@pytest.mark.parametrize("m", range(9))
def test_simplex_is_a_chain_complex(m):
    D = sx.delta(m)
    assert not np.any(D.dmat @ D.dmat)
    assert not np.any(D.eps @ D.dmat)
    assert [D.rank(q) for q in range(m + 1)] == [comb(m + 1, q + 1) for q in range(m + 1)]


def chains(m):
    """Homogeneous integer chains on delta(m) of positive dimension."""
    D = sx.delta(m)

    def build(q, vals):
        v = np.zeros(len(D), dtype=np.int64)
        v[D.block(q)] = vals[:D.rank(q)]
        return D.chain(v)
    return st.builds(build, st.integers(1, m),
                     st.lists(st.integers(-3, 3), min_size=len(D), max_size=len(D)))


@given(chains(3))
def test_boundary_parts_split_the_boundary(c):
    D = sx.delta(3)
    plus, minus = boundary_parts(c, D)
    assert plus.is_nonneg() and minus.is_nonneg()
    assert not set(plus) & set(minus)
    assert plus - minus == boundary(c, D)


@given(chains(4))
def test_boundary_squares_to_zero(c):
    D = sx.delta(4)
    v = D.vec(c)
    assert not np.any(D.dmat @ (D.dmat @ v))
    if D.dim_of(next(iter(c), (0, 1))) >= 2 and boundary(c, D):
        assert boundary(boundary(c, D), D) == Chain()


def test_chain_arithmetic():
    a = Chain({"x": 2, "y": -1})
    assert a - a == Chain()
    assert (a * 3)["x"] == 6
    assert a.positive() == Chain({"x": 2}) and a.negative() == Chain({"y": 1})


def test_augmentation_of_vertices():
    D = sx.delta(2)
    assert augmentation(Chain({(0,): 1, (2,): 2}), D) == 3


def test_duplicate_labels_rejected():
    with pytest.raises(StructuralError):
        FreeADC([(0, "a"), (0, "a")], augmentation={"a": 1})


def test_bad_complex_rejected():
    with pytest.raises(StructuralError):
        FreeADC([(0, "a"), (0, "b"), (1, "e")], {"e": {"a": 1, "b": 1}}, {"a": 1, "b": 1})


@pytest.mark.parametrize("m", range(7))
def test_simplex_total_order(m):
    D = sx.delta(m)
    order, unique = order_witness(D)
    assert unique
    assert check_total_order(D, order).valid
    assert order[0] == (0,) and order[-1] == (m,)


@pytest.mark.parametrize("m", range(7))
def test_iterated_join_of_points_is_a_simplex(m):
    J, order, f = sx.points_join_isomorphism(m)
    assert check_isomorphism(f)
    assert check_total_order(J, order).valid


def test_join_ranks_and_associativity():
    A, B, C = sx.delta(1), sx.delta(0), sx.delta(1)
    left, right = join(join(A, B), C), join(A, join(B, C))
    assert [left.rank(q) for q in range(left.top + 1)] == [right.rank(q) for q in range(right.top + 1)]
    assert check_total_order(join(A, C), join_order(A, C, order_witness(A)[0], order_witness(C)[0])).valid


def test_iterated_join_uses_given_orders():
    parts = [sx.delta(1), sx.delta(1)]
    _, order = iterated_join(parts, [order_witness(P)[0] for P in parts])
    assert check_total_order(join(*parts), order).valid


def test_quotient_by_an_edge():
    D = sx.delta(2)
    Q = quotient(D, [(0, 1)])
    assert [Q.complex.rank(q) for q in range(3)] == [2, 2, 1]
    assert morphism_kernel(Q.map).equal(generated_subcomplex(D, [(0, 1)]))
    assert check_morphism(Q.map).valid


def test_quotient_with_torsion_is_rejected():
    D = sx.delta(1)
    U = GradedSubgroup(D, [D.vec({(0, 1): 2})])
    with pytest.raises(NotFreeQuotient):
        quotient(D, U)


def test_morphism_count_between_small_simplexes():
    homs, complete = enumerate_morphisms(sx.delta(1), sx.delta(1))
    assert complete and len(homs) == 3
    homs, complete = enumerate_morphisms(sx.delta(1), sx.delta(2))
    assert complete and len(homs) == 7


def test_chain_morphism_shape_checked():
    with pytest.raises(StructuralError):
        ChainMorphism(sx.delta(1), sx.delta(1), np.zeros((2, 3), dtype=np.int64))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-2, 2), min_size=4, max_size=4), min_size=1, max_size=3),
       st.lists(st.integers(0, 4), min_size=3, max_size=3))
def test_nonneg_solver_against_box_search(rows, coeffs):
    a = np.array(rows, dtype=np.int64)
    c0 = np.array((coeffs + [0, 0])[:a.shape[1]], dtype=np.int64)
    t = a @ c0
    got, complete = NonnegSolver(a).solve(tuple(int(v) for v in t), 4)
    box = sorted(tuple(int(v) for v in c) for c in product(range(5), repeat=a.shape[1])
                 if np.array_equal(a @ np.array(c), t))
    if complete:
        assert sorted(tuple(int(v) for v in s) for s in got) == box
    else:
        assert set(tuple(int(v) for v in s) for s in got) <= set(box)
    assert tuple(int(v) for v in c0) in box


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=3))
def test_integer_kernel(rows):
    # left kernel: x with sum_i x_i rows[i] = 0
    a = np.array(rows, dtype=np.int64)
    ker = integer_kernel([dict(enumerate(r)) for r in rows], 4)
    n = len(rows)
    vecs = np.array([[v.get(j, 0) for j in range(n)] for v in ker], dtype=np.int64).reshape(-1, n)
    assert not np.any(vecs @ a)
    assert len(ker) == n - np.linalg.matrix_rank(a.astype(float))
