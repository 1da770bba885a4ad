import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from complicial import colim, serialize
from complicial import simplex as sx
from complicial import updown as ud
from complicial.lam import delta_model

labels = st.one_of(
    st.lists(st.integers(0, 9), min_size=1, max_size=4).map(tuple),
    st.tuples(st.from_regex(r"[a-z][a-z0-9_]{0,5}", fullmatch=True),
              st.lists(st.integers(0, 9), min_size=1, max_size=3).map(tuple)),
    st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,6}", fullmatch=True),
)


@given(labels)
def test_label_round_trip(lab):
    assert serialize.parse_label(serialize.label_text(lab)) == lab


@given(st.dictionaries(st.lists(st.integers(0, 5), min_size=1, max_size=3).map(tuple),
                       st.integers(-5, 5).filter(bool), max_size=5))
def test_chain_round_trip(c):
    assert serialize.parse_chain(serialize.chain_text(c)) == c


def complexes():
    yield from (sx.delta(m) for m in range(5))
    yield from (ud.simple_quotient(s).complex for s in ud.enumerate_updown(3))
    yield from (colim.build(*inst).complex for inst in colim.instances(3))


@pytest.mark.parametrize("K", list(complexes()), ids=lambda K: K.name or "K")
def test_complex_round_trip(K):
    text = serialize.dump_complex(K)
    L = serialize.parse_complex(text)
    assert L.same_as(K)
    assert serialize.dump_complex(L) == text


@pytest.mark.parametrize("s", [tuple(s) for s in ud.enumerate_updown(3)])
def test_morphism_round_trip(s):
    f = ud.simple_quotient(s).qmap
    g = serialize.parse_morphism(serialize.dump_morphism(f))
    assert g == f


@pytest.mark.parametrize("s", [(2,), (2, 1, 2), (1, 0, 2)])
def test_matrix_round_trip(s):
    D = sx.delta(sx.size(s))
    M = sx.Psi_dual(s)
    assert np.array_equal(serialize.parse_matrix(serialize.dump_matrix(M, D, D), D, D), M)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_element_line_round_trip(data):
    X = delta_model(2)
    m = data.draw(st.integers(0, 3))
    a = data.draw(st.integers(0, X.size(m) - 1))
    line = serialize.morphism_line(X.matrix(m, a), sx.delta(m), X.K)
    assert np.array_equal(serialize.parse_morphism_line(line, sx.delta(m), X.K), X.matrix(m, a))


def test_delta_one_format():
    assert serialize.dump_complex(sx.delta(1)).splitlines() == [
        "complex delta(1)", "0 [0] aug 1", "0 [1] aug 1", "1 [0,1] bd -1[0] +1[1]", "end"]


@pytest.mark.parametrize("text,line", [
    ("complex K\n0 [0] aug 1\n1 [0,1] bd +1[0] +1[2]\nend", 3),
    ("complex K\n0 [0] aug 1\nx [1] aug 1\nend", 3),
    ("complex K\n0 [0] aug 1\n0 [1] zz 1\nend", 3),
    ("complex K\n0 [0] aug 1", 2),
    ("complex K\n0 [0 aug 1\nend", 2),
])
def test_parse_errors_carry_positions(text, line):
    with pytest.raises(serialize.ParseError) as e:
        serialize.parse_complex(text)
    assert e.value.line == line


def test_bad_chain_term():
    with pytest.raises(serialize.ParseError):
        serialize.parse_chain("+1[0] 2[1]")


def test_unserializable_label():
    from complicial.adc import StructuralError
    with pytest.raises(StructuralError):
        serialize.label_text(("L", ("x",)))
