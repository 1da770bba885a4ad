import numpy as np
import pytest

from complicial import colim
from complicial import simplex as sx
from complicial.adc import ChainMorphism, check_total_order
from complicial.lam import delta_model

LISTINGS = {
    (2, 1, 0): ["eta_x[0]", "eta_x[0,1]", "eta_x[1]=eta_y[0]", "eta_y[0,1]", "eta_y[1]"],
    (5, 1, 0): ["eta_b[0]", "eta_b[0,2]", "eta_b[0,1,2]", "eta_b[0,1]", "eta_b[1]=eta_y[0]",
                "eta_y[0,1]", "eta_y[1]=eta_z[0]", "eta_z[0,1]", "eta_z[1]"],
    (6, 1, 0): ["eta_c[0]", "eta_c[0,2]", "eta_c[0,1,2]", "eta_x[0,1]", "eta_x[1]=eta_y[0]",
                "eta_y[0,1]", "eta_y[1]=eta_c[1]", "eta_c[1,2]", "eta_c[2]"],
    (7, 1, 0): ["eta_x[0]", "eta_x[0,1]", "eta_x[1]=eta_y[0]", "eta_y[0,1]",
                "eta_y[1]=eta_z[0]", "eta_z[0,1]", "eta_z[1]"],
    (8, 2, 0): ["eta_y[0]", "eta_y[0,2]", "eta_y[0,1,2]", "eta_y[0,1]=eta_x[0,2]", "eta_x[0,1,2]",
                "eta_x[0,1]", "eta_x[1]", "eta_x[1,2]", "eta_x[2]=eta_z[0]", "eta_z[0,2]",
                "eta_z[0,1,2]", "eta_z[0,1]", "eta_w[0,1,2]", "eta_w[0,1]", "eta_w[1]",
                "eta_w[1,2]", "eta_w[2]=eta_z[1]", "eta_z[1,2]", "eta_z[2]"],
}


def chain(C, terms):
    return {C.complex.labels[i]: int(v) for i, v in enumerate(
        sum(v * C.legs[leg].matrix[:, sx.delta(C.legs[leg].source.top).index[lab]]
            for leg, lab, v in terms)) if v}


@pytest.mark.parametrize("key", sorted(LISTINGS))
def test_ordered_bases(key):
    C = colim.build(*key)
    order, unique = colim.ordered_basis(C)
    assert unique
    assert C.listing(order) == LISTINGS[key]
    assert check_total_order(C.complex, order).valid


def _parts(C, leg, lab):
    from complicial.adc import boundary_parts
    f = C.legs[leg]
    col = f.matrix[:, f.source.index[lab]]
    (k,) = np.flatnonzero(col)
    return boundary_parts({C.complex.labels[k]: 1}, C.complex)


def test_boundary_identities():
    C = colim.build(5, 1, 0)
    plus, _ = _parts(C, "eta_b", (0, 1, 2))
    assert dict(plus) == chain(C, [("eta_b", (0, 1), 1), ("eta_y", (0, 1), 1), ("eta_z", (0, 1), 1)])
    C = colim.build(6, 1, 0)
    plus, _ = _parts(C, "eta_c", (0, 1, 2))
    assert dict(plus) == chain(C, [("eta_x", (0, 1), 1), ("eta_y", (0, 1), 1), ("eta_c", (1, 2), 1)])
    C = colim.build(8, 2, 0)
    _, minus = _parts(C, "eta_w", (0, 1, 2))
    w02 = chain(C, [("eta_w", (0, 2), 1)])
    assert dict(minus) == w02 == chain(C, [("eta_x", (1, 2), 1), ("eta_z", (0, 1), 1)])


@pytest.mark.parametrize("inst", colim.instances(3))
def test_colimits_and_join_decompositions(inst):
    C = colim.build(*inst)
    checks = colim.check_colimit(C) + colim.check_join_decomposition(*inst)
    assert [c.name for c in checks if not c.ok] == []


@pytest.mark.parametrize("m,i", [(m, i) for m in range(1, 5) for i in range(m)])
def test_wedge_morphism(m, i):
    assert all(c.ok for c in colim.check_v(m, i))
    assert isinstance(colim.v_morphism(m, i), ChainMorphism)


def test_bad_indices():
    with pytest.raises(ValueError):
        colim.build(2, 1, 1)
    with pytest.raises(ValueError):
        colim.build(9, 3, 1, 3)
    with pytest.raises(ValueError):
        colim.build(3, 1, 0)


@pytest.mark.parametrize("n", range(3))
def test_morphisms_out_of_colimits_are_compatible_tuples(n):
    X = delta_model(n, max(n + 2, 3))
    for inst in [(2, 1, 0), (5, 1, 0), (6, 1, 0), (7, 1, 0), (8, 2, 0), (2, 2, 1), (9, 3, 0, 3)]:
        assert all(c.ok for c in colim.check_hom_limit(colim.build(*inst), X)), inst
    for m, i in [(1, 0), (2, 0), (2, 1)]:
        assert colim.check_wedge_by_v(m, i, X).ok


def test_hom_limit_beyond_cutoff():
    from complicial.lam import BeyondCutoff
    with pytest.raises(BeyondCutoff):
        colim.check_hom_limit(colim.build(9, 3, 0, 3), delta_model(0, 2))


def test_instance_list():
    inst = colim.instances(4)
    assert len(inst) == len(set(inst)) == 50
    assert (9, 3, 0, 3) in inst and (8, 2, 0) in inst
