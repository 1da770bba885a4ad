import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from complicial import nu
from complicial import simplex as sx
from oracles import nu_count

# counts of (nu delta(m))_p with coefficient bound 3, from the oracle
FROZEN = {(1, 1): 3, (2, 1): 7, (2, 2): 8, (3, 1): 15, (3, 2): 23, (3, 3): 24}


@pytest.mark.parametrize("m,p", [(m, p) for m in range(4) for p in range(m + 2)])
def test_counts_against_lattice_oracle(m, p):
    els, complete = nu.nu_enumerate(sx.delta(m), p, 3)
    assert complete
    assert len(els) == nu_count(m, p, 3)


def test_frozen_counts():
    for (m, p), n in FROZEN.items():
        assert len(nu.nu_enumerate(sx.delta(m), p, 3)[0]) == n


@pytest.mark.parametrize("m", range(4))
def test_axioms_on_truncations(m):
    T = nu.truncation(sx.delta(m), m + 1, 3)
    assert T.complete
    assert [c.name for c in nu.check_omega_axioms(T) if not c.ok] == []


def test_atoms_are_elements():
    D = sx.delta(2)
    els = set(nu.nu_enumerate(D, 2, 3)[0])
    for lab in D.labels:
        x = nu.atom(D, lab)
        assert nu.is_valid(x, D)
        assert x in els
    top = nu.atom(D, (0, 1, 2))
    assert top.dim == 2


def test_source_and_target_of_an_edge_atom():
    D = sx.delta(1)
    e = nu.atom(D, (0, 1))
    assert nu.d(-1, 0, e) == nu.atom(D, (0,))
    assert nu.d(1, 0, e) == nu.atom(D, (1,))


def test_composition_of_edges():
    D = sx.delta(2)
    a, b = nu.atom(D, (0, 1)), nu.atom(D, (1, 2))
    c = nu.compose(a, b, 0, D)
    assert nu.d(-1, 0, c) == nu.atom(D, (0,)) and nu.d(1, 0, c) == nu.atom(D, (2,))
    assert nu.d(1, 1, nu.atom(D, (0, 1, 2))) == c
    with pytest.raises(nu.NotComposable):
        nu.compose(b, a, 0, D)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_identities_for_composition(data):
    D = sx.delta(2)
    els = nu.nu_enumerate(D, 2, 3)[0]
    x = data.draw(st.sampled_from(els))
    q = data.draw(st.integers(0, 1))
    assert nu.compose(nu.d(-1, q, x), x, q, D) == x
    assert nu.compose(x, nu.d(1, q, x), q, D) == x
