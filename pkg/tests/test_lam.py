import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from complicial import lam
from complicial import simplex as sx
from complicial.adc import enumerate_morphisms

# sizes of (lambda delta(n))_m, m = 0..n+2, checked against the generic
# morphism enumerator (the n = 3 row takes about a minute that way)
FROZEN = {0: [1, 1, 1], 1: [2, 3, 4, 5], 2: [3, 7, 15, 31, 63],
          3: [4, 15, 60, 265, 1316, 7461]}


@pytest.mark.parametrize("n", range(3))
def test_counts_against_generic_enumerator(n):
    X = lam.delta_model(n)
    assert X.complete
    assert X.counts() == [len(enumerate_morphisms(sx.delta(m), sx.delta(n))[0]) for m in range(n + 3)]


@pytest.mark.parametrize("n", range(4))
def test_frozen_counts(n):
    assert lam.delta_model(n).counts() == FROZEN[n]


def test_lam_enumerate_returns_valid_elements():
    els, complete = lam.lam_enumerate(sx.delta(1), 1)
    assert complete and len(els) == 3
    assert all(x.is_valid() for x in els)
    assert els == sorted(els)


def test_lookup_errors():
    X = lam.delta_model(1, 2)
    with pytest.raises(lam.BeyondCutoff):
        X.index(np.zeros((len(X.K), len(sx.delta(3))), dtype=np.int64))
    with pytest.raises(lam.NotInModel):
        X.index(np.zeros((len(X.K), len(sx.delta(1))), dtype=np.int64))


@pytest.mark.parametrize("n", range(3))
def test_axioms(n):
    X = lam.delta_model(n)
    assert [c.name for c in lam.check_complicial_axioms(X) if not c.ok] == []


@pytest.mark.parametrize("n", range(3))
def test_operations_agree_with_their_matrices(n):
    X = lam.delta_model(n)
    assert [c.name for c in lam.check_operation_agreement(X) if not c.ok] == []


def test_corrupted_wedge_table_breaks_axiom_four():
    # a fresh model so the cached one is not disturbed
    X = lam.ComplicialModel(sx.delta(2), 4)
    before = {c.name: c.ok for c in lam.check_complicial_axioms(X, axioms=[4])}
    assert all(before.values())
    keys = sorted(X.wedge_table)
    m, i, a, b = keys[len(keys) // 2]
    wrong = (X.wedge_table[(m, i, a, b)] + 1) % X.size(m + 1)
    X.wedge_table[(m, i, a, b)] = wrong
    after = {c.name: c.ok for c in lam.check_complicial_axioms(X, axioms=[4])}
    assert not all(after.values())


@pytest.mark.parametrize("n", range(3))
def test_psi_images_and_pullbacks(n):
    X = lam.delta_model(n, max(n + 2, 4))
    bad = []
    for s in [(1,), (2,), (1, 0, 1), (2, 1, 2), (1, 0, 2), (2, 0, 1), (3,)]:
        checks = lam.check_psi_correspondence(X, s) + lam.check_tail_fixed_points(X, s)
        if len(s) > 1:
            checks += lam.check_simple_pullback(X, s)
        bad += [(s, c.name) for c in checks if not c.ok]
    for k, l, q in [(1, 1, 0), (1, 1, 1), (2, 1, 0), (1, 2, 0), (0, 2, 1)]:
        bad += [((k, l, q), c.name) for c in lam.check_w_pullback(X, k, l, q) if not c.ok]
    for k, l in [(1, 1), (1, 2), (2, 1)]:
        bad += [((k, l), c.name) for c in lam.check_w_face_equations(X, k + l, k, l) if not c.ok]
    assert bad == []


@pytest.mark.parametrize("n,m", [(n, m) for n in range(3) for m in range(1, 4)])
def test_reconstruction(n, m):
    X = lam.delta_model(n, max(n + 2, m + 1))
    checks = lam.check_reconstruction(X, m)
    for i in range(1, m):
        checks += lam.check_triples(X, m, i)
    assert [c.name for c in checks if not c.ok] == []


def test_image_needs_compatible_faces_and_outer_equations():
    # imposing only the inner face equations admits far too many tuples
    X = lam.delta_model(2)
    assert len(lam.image_tuples(X, 3)) == X.size(3) == 31
    assert len(lam.image_tuples(X, 3, compatible=False, outer=False)) == 5928


@pytest.mark.parametrize("n,m", [(n, m) for n in range(3) for m in range(4)])
def test_equivalence_chain(n, m):
    X = lam.delta_model(n, max(n + 2, m + 1))
    assert [c.name for c in lam.check_equivalence_chain(X, m) if not c.ok] == []


def test_free_generation_by_the_identity():
    for n in range(3):
        X = lam.delta_model(n)
        assert lam.generated_counts(n, n + 2)[:n + 2] == X.counts()[:n + 2]


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_wedge_faces(data):
    X = lam.delta_model(2)
    m = data.draw(st.integers(1, 3))
    i = data.draw(st.integers(0, m - 1))
    a = data.draw(st.integers(0, X.size(m) - 1))
    partners = [b for b in range(X.size(m)) if X.wedge_defined(m, a, b, i)]
    if not partners:
        return
    b = data.draw(st.sampled_from(partners))
    z = X.wedge(m, a, b, i)
    assert X.d(m + 1, z, i + 2) == a and X.d(m + 1, z, i) == b


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_Psi_is_idempotent_on_elements(data):
    X = lam.delta_model(2)
    ops = lam.Ops(X)
    s = data.draw(st.sampled_from([(1,), (2,), (1, 0, 1), (2, 1, 2), (3,), (2, 0, 1)]))
    n = sx.size(s)
    a = data.draw(st.integers(0, X.size(n) - 1))
    b = ops.Psi(n, a, s)
    assert ops.Psi(n, b, s) == b
    assert np.array_equal(X.matrix(n, b), X.matrix(n, a) @ sx.Psi_dual(s))
