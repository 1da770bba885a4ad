import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from complicial import simplex as sx
from complicial.adc import check_morphism
from complicial.updown import enumerate_updown


@pytest.mark.parametrize("m", range(7))
def test_cosimplicial_identities(m):
    assert sx.cosimplicial_identity_failures(m) == []


@pytest.mark.parametrize("m", range(1, 7))
def test_face_and_degeneracy_maps_are_morphisms(m):
    for i in range(m + 1):
        assert check_morphism(sx.face_morphism(m, i)).valid
        assert check_morphism(sx.degeneracy_morphism(m - 1, min(i, m - 1))).valid


@pytest.mark.parametrize("m", range(1, 6))
def test_phi_identities(m):
    bad = [c.name for c in sx.phi_identity_checks(m) if not c.ok]
    assert bad == []


@pytest.mark.parametrize("n", range(6))
def test_w_identities(n):
    bad = [c.name for c in sx.w_identity_checks(n) if not c.ok]
    assert bad == []


def test_w_closed_form_needs_exponent_k_in_last_term():
    # regression: with exponent l in the last term the formula is not w
    # whenever k != l, and not even idempotent for k > l
    rows = sx.w_exponent_regression(4)
    assert rows and not any(r["equals_w"] for r in rows)
    assert all(not r["idempotent"] for r in rows if r["k"] > r["l"])
    assert all(np.array_equal(sx.w_closed(4, k, k, last_exponent=k), sx.w_dual(4, k, k)) for k in range(3))


@pytest.mark.parametrize("s", [tuple(s) for s in enumerate_updown(5)])
def test_psi_closed_forms(s):
    n = sx.size(s)
    for i in range(1, n):
        assert np.array_equal(sx.psi_dual(s, i), sx.psi_closed(s, i))
    assert np.array_equal(sx.Psi_dual(s), sx.Psi_closed(s))


def test_psi_sequence():
    assert sx.psi_sequence(4) == [1, 2, 3, 1, 2, 1]
    assert sx.psi_sequence(1) == []


def test_Psi_of_one_point_shape():
    # Psi for s = (2) is phi_{1,1}
    assert np.array_equal(sx.Psi_dual((2,)), sx.phi_dual(2, 1, 1))


@pytest.mark.parametrize("m,i", [(m, i) for m in range(1, 5) for i in range(m)])
def test_wedge_recovers_its_faces(m, i):
    x = sx.identity(m)
    # a partner y with face_{i+1} y = face_i x
    y = sx.degeneracy(sx.face(x, i), i)
    z = sx.wedge(x, y, i)
    assert np.array_equal(sx.face(z, i + 2), x)
    assert np.array_equal(sx.face(z, i), y)


def test_wedge_rejects_incompatible_pair():
    x = sx.identity(1)
    with pytest.raises(sx.WedgeUndefined):
        sx.wedge(x, x, 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6).flatmap(lambda m: st.tuples(st.just(m), st.integers(0, m - 1), st.integers(1, m))))
def test_face_relation_on_identity(args):
    m, i, j = args
    if i < j:
        x = sx.identity(m)
        assert np.array_equal(sx.face(sx.face(x, j), i), sx.face(sx.face(x, i), j - 1))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n))).flatmap(
    lambda t: st.tuples(st.just(t[0]), st.just(t[1]), st.integers(0, t[0] - t[1]))))
def test_w_is_idempotent(args):
    n, k, l = args
    W = sx.w_dual(n, k, l)
    assert np.array_equal(W @ W, W)
