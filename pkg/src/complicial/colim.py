"""Colimit complexes representing the domains of the wedge axioms.

Each complex is a direct sum of copies of simplexes (the legs, named
``eta_x``, ``eta_y`` and so on) divided by the relations of its diagram.
Relations through the wedge morphism v are lifted to the direct sum by its
three-term formula.  Basis elements of the quotient are labelled by a
representative ``(leg, simplex label)``; ``names`` lists every such pair in
the class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import simplex as sx
from .adc import (ChainMorphism, FreeADC, GradedSubgroup, check_isomorphism,
                  check_total_order, enumerate_morphisms, is_morphism, iterated_join,
                  join_morphism, join_vertex_tuple, morphism_kernel, order_witness, quotient)
from .lam import BeyondCutoff
from .reports import Check
from .serialize import label_text

TAGS = (2, 5, 6, 7, 8, 9)


@dataclass
class ColimitComplex:
    tag: int
    indices: tuple
    complex: FreeADC
    legs: dict  # leg name -> ChainMorphism delta(k) -> complex
    relations: list  # (description, matrix from a simplex into the direct sum)
    total: FreeADC  # the direct sum
    qmap: ChainMorphism
    names: dict = field(default_factory=dict)  # basis label -> list of (leg, label)

    def leg_order(self):
        return list(self.legs)

    def name(self, lab, first=None) -> str:
        """All names of a basis element joined by '=', leg ``first`` first."""
        ns = list(self.names[lab])
        if first is not None:
            ns.sort(key=lambda t: t[0] != first)
        return "=".join(f"{leg}{label_text(s)}" for leg, s in ns)

    def listing(self, order) -> list[str]:
        """Ordered basis as display strings.  Each element is named in the leg
        of its predecessor when possible, otherwise in a leg it shares with
        its successor; an element also shows its name in the successor's leg."""
        legs = [[leg for leg, _ in self.names[lab]] for lab in order]
        primary = []
        for k, ls in enumerate(legs):
            prev = primary[-1] if primary else None
            if prev in ls:
                primary.append(prev)
                continue
            nxt = legs[k + 1] if k + 1 < len(legs) else []
            primary.append(next((leg for leg in ls if leg in nxt), ls[0]))
        out = []
        for k, lab in enumerate(order):
            by_leg = dict(self.names[lab])
            shown = [primary[k]]
            if k + 1 < len(order) and primary[k + 1] in by_leg and primary[k + 1] != primary[k]:
                shown.append(primary[k + 1])
            out.append("=".join(f"{leg}{label_text(by_leg[leg])}" for leg in shown))
        return out


def _direct_sum(legs):
    """legs: list of (name, dim).  Returns (complex, {name: inclusion matrix})."""
    cells, bd, aug = [], {}, {}
    for name, k in legs:
        D = sx.delta(k)
        for lab, q in zip(D.labels, D.dims):
            cells.append((int(q), (name, lab)))
            if q == 0:
                aug[(name, lab)] = 1
            else:
                bd[(name, lab)] = {(name, f): v for f, v in D.boundary_of(lab).items()}
    T = FreeADC(cells, bd, aug, name="sum", check=False)
    inc = {}
    for name, k in legs:
        D = sx.delta(k)
        m = np.zeros((len(T), len(D)), dtype=np.int64)
        for j, lab in enumerate(D.labels):
            m[T.index[(name, lab)], j] = 1
        inc[name] = m
    return T, inc


def _v_lift(m, i, ix, iy):
    """The wedge morphism delta(m+1) -> (sum) for legs with inclusions ix, iy."""
    return (ix @ sx.E(m, i + 1) - ix @ sx.D(m, i) @ sx.E(m - 1, i) @ sx.E(m, i)
            + iy @ sx.E(m, i))


def _diagram(tag, m, i, j=None):
    """(legs, relations) with relations as (text, matrix into the sum)."""
    if tag == 2:
        legs = [("eta_x", m), ("eta_y", m)]
    elif tag == 5:
        legs = [("eta_b", m + 1), ("eta_y", m), ("eta_z", m)]
    elif tag == 6:
        legs = [("eta_x", m), ("eta_y", m), ("eta_c", m + 1)]
    elif tag in (7, 8, 9):
        legs = [("eta_x", m), ("eta_y", m), ("eta_z", m)] + ([("eta_w", m)] if tag != 7 else [])
    else:
        raise ValueError(f"unknown tag {tag}")
    T, inc = _direct_sum(legs)
    D = sx.D
    x, y, z = inc.get("eta_x"), inc.get("eta_y"), inc.get("eta_z")

    def glue(a, fa, b, fb, text):
        return (text, a @ D(m, fa) - b @ D(m, fb))

    rels = []
    if tag == 2:
        rels.append(glue(x, i, y, i + 1, f"x d{i} = y d{i + 1}"))
    elif tag == 5:
        b = inc["eta_b"]
        rels.append(glue(y, i, z, i + 1, f"y d{i} = z d{i + 1}"))
        rels.append((f"b d{i} = v(y,z) d{i + 1}", b @ D(m + 1, i) - _v_lift(m, i, y, z) @ D(m + 1, i + 1)))
    elif tag == 6:
        c = inc["eta_c"]
        rels.append(glue(x, i, y, i + 1, f"x d{i} = y d{i + 1}"))
        rels.append((f"c d{i + 2} = v(x,y) d{i + 1}", c @ D(m + 1, i + 2) - _v_lift(m, i, x, y) @ D(m + 1, i + 1)))
    elif tag == 7:
        rels.append(glue(x, i, y, i + 1, f"x d{i} = y d{i + 1}"))
        rels.append(glue(y, i, z, i + 1, f"y d{i} = z d{i + 1}"))
    elif tag == 8:
        w = inc["eta_w"]
        rels.append(glue(x, i + 1, y, i + 2, f"x d{i + 1} = y d{i + 2}"))
        rels.append(glue(y, i, z, i + 1, f"y d{i} = z d{i + 1}"))
        # v on delta(m-1) with legs x d_i and z d_{i+2}
        vl = _v_lift(m - 1, i, x @ D(m, i), z @ D(m, i + 2))
        rels.append((f"w d{i + 1} = v(x d{i}, z d{i + 2}) d{i + 1}", w @ D(m, i + 1) - vl @ D(m, i + 1)))
    elif tag == 9:
        w = inc["eta_w"]
        rels.append(glue(x, i, y, i + 1, f"x d{i} = y d{i + 1}"))
        rels.append(glue(z, i, w, i + 1, f"z d{i} = w d{i + 1}"))
        rels.append(glue(x, j - 1, z, j, f"x d{j - 1} = z d{j}"))
        rels.append(glue(y, j - 1, w, j, f"y d{j - 1} = w d{j}"))
    return legs, T, inc, rels


def _check_indices(tag, m, i, j):
    if tag in (2, 5, 6, 7):
        ok = 0 <= i < m
    elif tag == 8:
        ok = 0 <= i <= m - 2
    elif tag == 9:
        ok = j is not None and 0 <= i <= j - 3 <= m - 3
    else:
        raise ValueError(f"unknown tag {tag}")
    if not ok:
        raise ValueError(f"indices out of range for tag {tag}: m={m} i={i} j={j}")


@lru_cache(maxsize=None)
def build(tag: int, m: int, i: int, j: int | None = None) -> ColimitComplex:
    _check_indices(tag, m, i, j)
    legs, T, inc, rels = _diagram(tag, m, i, j)
    U = GradedSubgroup(T)
    for _, R in rels:
        for col in R.T:
            U.add(col)
    idx = f"{m},{i}" + (f",{j}" if j is not None else "")
    Q = quotient(T, U, name=f"colim{tag}({idx})")
    K = Q.complex
    qm = Q.map.matrix
    legmaps = {name: ChainMorphism(sx.delta(k), K, qm @ inc[name], name) for name, k in legs}
    names = {}
    for lab in K.labels:
        col = qm[:, T.index[lab]]
        names[lab] = [t for t in T.labels if np.array_equal(qm[:, T.index[t]], col)]
    return ColimitComplex(tag, (m, i) if j is None else (m, i, j), K, legmaps, rels, T, Q.map, names)


def v_morphism(m: int, i: int) -> ChainMorphism:
    """delta(m+1) -> colim2(m, i) representing the wedge."""
    if not 0 <= i < m:
        raise ValueError(f"wedge index {i} out of range for dimension {m}")
    C = build(2, m, i)
    x, y = C.legs["eta_x"].matrix, C.legs["eta_y"].matrix
    return ChainMorphism(sx.delta(m + 1), C.complex, _v_lift(m, i, x, y), f"v[{m},{i}]")


def check_v(m: int, i: int) -> list[Check]:
    C = build(2, m, i)
    v = v_morphism(m, i).matrix
    x, y = C.legs["eta_x"].matrix, C.legs["eta_y"].matrix
    second = x @ sx.E(m, i + 1) - y @ sx.D(m, i + 1) @ sx.E(m - 1, i) @ sx.E(m, i) + y @ sx.E(m, i)
    return [
        Check("two-forms-agree", np.array_equal(v, second)),
        Check("is-morphism", is_morphism(v, sx.delta(m + 1), C.complex)),
        Check("face-recovers-x", np.array_equal(v @ sx.D(m + 1, i + 2), x)),
        Check("face-recovers-y", np.array_equal(v @ sx.D(m + 1, i), y)),
    ]


# ---------------------------------------------------------------------------
# structure checks


def check_colimit(C: ColimitComplex) -> list[Check]:
    """The quotient is the cokernel of the relations: legs are morphisms, the
    diagram commutes, ranks add up, the kernel of the quotient map is the
    relation subgroup and the basis is the set of leg images."""
    T, K, qm = C.total, C.complex, C.qmap.matrix
    legs_ok = all(is_morphism(f.matrix, f.source, K) for f in C.legs.values())
    commute = all(not np.any(qm @ R) for _, R in C.relations)
    U = GradedSubgroup(T)
    for _, R in C.relations:
        for col in R.T:
            U.add(col)
    ranks = [T.rank(q) - U.parts[q].rank == K.rank(q) for q in range(T.top + 1)]
    kern = morphism_kernel(C.qmap).equal(U)
    units = {int(np.flatnonzero(c)[0]) for c in qm.T
             if np.count_nonzero(c) == 1 and c.sum() == 1}
    covered = units == set(range(len(K))) and all(C.names[lab] for lab in K.labels)
    return [Check("legs-are-morphisms", legs_ok), Check("diagram-commutes", commute),
            Check("ranks", all(ranks)), Check("kernel-is-relations", kern),
            Check("basis-from-leg-images", covered)]


def ordered_basis(C: ColimitComplex):
    """The order forced by 'negative terms < a < positive terms'; returns
    (order, unique)."""
    return order_witness(C.complex)


# join decompositions

_LEG_CHOICE = {9: {"eta_x": ("eta_x", "eta_x"), "eta_y": ("eta_y", "eta_x"),
                   "eta_z": ("eta_x", "eta_y"), "eta_w": ("eta_y", "eta_y")}}


def _factors(tag, m, i, j=None):
    """Join factors: ints for simplexes delta(k), ColimitComplex for the base."""
    if tag in (2, 5, 6, 7):
        return [i - 1, build(tag, 1, 0), m - i - 2]
    if tag == 8:
        return [i - 1, build(8, 2, 0), m - i - 3]
    return [i - 1, build(2, 1, 0), j - i - 4, build(2, 1, 0), m - j - 1]


def join_decomposition(tag, m, i, j=None):
    """(iterated join J, its insertion order, phi: J -> the complex)."""
    C = build(tag, m, i, j)
    facs = _factors(tag, m, i, j)
    parts, orders = [], []
    for f in facs:
        if isinstance(f, int):
            parts.append(sx.delta(f))
            orders.append(order_witness(sx.delta(f))[0])
        else:
            parts.append(f.complex)
            orders.append(ordered_basis(f)[0])
    J, order = iterated_join(parts, orders)
    phi = np.zeros((len(C.complex), len(J)), dtype=np.int64)
    consistent = True
    pending = []
    for leg, lf in C.legs.items():
        choice = _LEG_CHOICE.get(tag, {}).get(leg, (leg,))
        maps, sizes, ci = [], [], 0
        for f in facs:
            if isinstance(f, int):
                maps.append(ChainMorphism.identity(sx.delta(f)))
                sizes.append(f + 1)
            else:
                g = f.legs[choice[ci]]
                ci += 1
                maps.append(g)
                sizes.append(len(g.source.basis(0)))
        F = maps[0]
        for g in maps[1:]:
            F = join_morphism(F, g)
        Fm = F.matrix
        for col, lab in enumerate(F.source.labels):
            nz = np.flatnonzero(Fm[:, col])
            if len(nz) != 1 or Fm[nz[0], col] != 1:
                continue
            target = lf.matrix[:, lf.source.index[join_vertex_tuple(lab, sizes)]]
            if np.any(phi[:, nz[0]]) and not np.array_equal(phi[:, nz[0]], target):
                consistent = False
            phi[:, nz[0]] = target
        # the whole leg must factor through phi
        R = np.zeros((len(F.source), len(lf.source)), dtype=np.int64)
        for col, lab in enumerate(F.source.labels):
            R[col, lf.source.index[join_vertex_tuple(lab, sizes)]] = 1
        pending.append((Fm, R, lf.matrix))
    factors_ok = all(np.array_equal(phi @ Fm, lm @ R.T) for Fm, R, lm in pending)
    return J, order, ChainMorphism(J, C.complex, phi, "join-iso"), consistent and factors_ok


def check_join_decomposition(tag, m, i, j=None) -> list[Check]:
    C = build(tag, m, i, j)
    J, order, phi, consistent = join_decomposition(tag, m, i, j)
    iso = check_isomorphism(phi)
    checks = [Check("legs-factor-through-join", consistent), Check("isomorphism", iso)]
    if iso:
        img = [C.complex.labels[int(np.flatnonzero(phi.matrix[:, J.index[lab]])[0])] for lab in order]
        checks.append(Check("join-order-is-total-order", check_total_order(C.complex, img).valid))
    else:
        checks.append(Check("join-order-is-total-order", False, "no isomorphism"))
    return checks


def instances(max_m: int = 4):
    """All (tag, m, i[, j]) with m <= max_m."""
    out = []
    for tag in TAGS:
        for m in range(1, max_m + 1):
            if tag == 9:
                for j in range(3, m + 1):
                    for i in range(0, j - 2):
                        out.append((tag, m, i, j))
            else:
                top = m - 2 if tag == 8 else m - 1
                for i in range(0, top + 1):
                    out.append((tag, m, i))
    return out


# ---------------------------------------------------------------------------
# morphisms into lambda K: limits of Hom-sets


def check_hom_limit(C: ColimitComplex, X) -> list[Check]:
    """Morphisms from C into K, restricted along the legs, are exactly the
    tuples of elements of lambda K satisfying the relations of the diagram."""
    K = X.K
    homs, complete = enumerate_morphisms(C.complex, K)
    legs = list(C.legs)
    dims = {leg: C.legs[leg].source.top for leg in legs}
    if max(dims.values()) > X.cutoff:
        raise BeyondCutoff(f"legs of dimension {max(dims.values())} exceed the cutoff {X.cutoff}")
    T = C.total
    # per leg, the block of each relation matrix belonging to that leg
    cols = {leg: [T.index[(leg, lab)] for lab in sx.delta(dims[leg]).labels] for leg in legs}
    blocks = {leg: [R[cols[leg], :] for _, R in C.relations] for leg in legs}
    # backtracking over legs with relations checked as soon as their legs are set
    last_leg = []
    for r, (_, R) in enumerate(C.relations):
        used = [k for k, leg in enumerate(legs) if np.any(blocks[leg][r])]
        last_leg.append(max(used))
    contrib = {}
    for k, leg in enumerate(legs):
        els = X.elements[dims[leg]]
        contrib[leg] = [[x @ blocks[leg][r] for r in range(len(C.relations))] for x in els]
    found = []

    def rec(k, chosen, acc):
        if k == len(legs):
            found.append(tuple(chosen))
            return
        leg = legs[k]
        for a, cs in enumerate(contrib[leg]):
            new = [acc[r] + cs[r] for r in range(len(acc))]
            if any(last_leg[r] == k and np.any(new[r]) for r in range(len(new))):
                continue
            chosen.append(a)
            rec(k + 1, chosen, new)
            chosen.pop()

    zero = [np.zeros((len(K), R.shape[1]), dtype=np.int64) for _, R in C.relations]
    rec(0, [], zero)
    restricted = sorted(tuple(X._find(dims[leg], g.matrix @ C.legs[leg].matrix) for leg in legs) for g in homs)
    return [Check("hom-is-limit", complete and restricted == sorted(found) and len(set(restricted)) == len(restricted),
                  f"{len(homs)} morphisms, {len(found)} compatible tuples")]


def check_wedge_by_v(m: int, i: int, X) -> Check:
    """The wedge of two elements of lambda K is the induced morphism on
    colim2(m, i) composed with v."""
    C = build(2, m, i)
    v = v_morphism(m, i).matrix
    homs, _ = enumerate_morphisms(C.complex, X.K)
    ok = True
    for g in homs:
        x = g.matrix @ C.legs["eta_x"].matrix
        y = g.matrix @ C.legs["eta_y"].matrix
        ok = ok and np.array_equal(sx.wedge(x, y, i), g.matrix @ v)
    return Check("wedge-is-composite-with-v", ok, f"{len(homs)} pairs")
