from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from complicial import simplex as sx
from complicial import updown as ud
from complicial.adc import ChainMorphism, check_morphism, morphism_kernel

SHAPES = [tuple(s) for s in ud.enumerate_updown(4)]


def brute_updown(n):
    out = set()
    for length in range(1, 2 * n + 2, 2):
        for t in product(range(n + 1), repeat=length):
            if all(t[i - 1] > t[i] < t[i + 1] for i in range(1, length, 2)):
                if sum(t[0::2]) - sum(t[1::2]) <= n:
                    out.add(t)
    return out


@pytest.mark.parametrize("n", range(4))
def test_enumeration_of_updown_vectors(n):
    assert {tuple(s) for s in ud.enumerate_updown(n)} == brute_updown(n)


def test_malformed_vectors_rejected():
    for bad in [(), (1, 2), (1, 1, 2), (2, 3, 4), (-1,)]:
        with pytest.raises(ValueError):
            ud.UpDownVector(bad)
    assert ud.parse_updown("(2,1,2)") == (2, 1, 2)


def test_one_term_quotient_is_a_globe():
    for p in range(5):
        S = ud.simple_quotient((p,))
        assert [S.complex.rank(q) for q in range(p + 1)] == [2] * p + [1]


@pytest.mark.parametrize("s", SHAPES)
def test_simple_complexes(s):
    S = ud.simple_quotient(s)
    bad = [c.name for c in ud.check_simple(S) + [ud.check_final_tower(S)] if not c.ok]
    assert bad == []


@pytest.mark.parametrize("p", range(6))
def test_one_term_identification_pattern(p):
    assert ud.check_one_term_pattern(p).ok


@pytest.mark.parametrize("s", [s for s in SHAPES if len(s) > 1])
def test_squares_and_decomposition(s):
    bad = [c.name for c in ud.simple_square(s) + ud.check_decomposition(s) if not c.ok]
    assert bad == []


@pytest.mark.parametrize("s", SHAPES)
def test_kernel_theorem(s):
    bad = [c.name for c in ud.verify_kernel_theorem(s) + ud.psi_display_checks(s) if not c.ok]
    assert bad == []


def test_rejected_readings_of_displayed_psi_formulas():
    # the variant w phi at the middle index and the literal lower-face
    # formula with psi_{|s|-q} both fail somewhere, the readings used do not
    failing = {}
    for s in ud.enumerate_updown(4):
        for c in ud.psi_display_checks(s, readings=True):
            if not c.ok:
                failing.setdefault(tuple(s), []).append(c.name)
    assert all("alternative/" in n or "-literal" in n for names in failing.values() for n in names)
    assert any("alternative/" in n for n in failing.get((2, 1, 2), []))
    assert any("-literal" in n for n in failing.get((2, 1, 3), []))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SHAPES))
def test_Psi_is_an_idempotent_retraction_onto_the_quotient(s):
    n = sx.size(s)
    P = sx.Psi_dual(s)
    S = ud.simple_quotient(s)
    q = S.qmap.matrix
    assert np.array_equal(P @ P, P)
    assert np.array_equal(q @ P, q)
    assert morphism_kernel(ChainMorphism(sx.delta(n), sx.delta(n), P)).equal(ud.u_subcomplex(s))
    assert check_morphism(S.qmap).valid
