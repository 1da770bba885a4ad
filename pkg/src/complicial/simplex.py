"""Simplexes, their face and degeneracy morphisms, and the operator calculus.

Conventions used throughout:

* An element of dimension m in lambda K is an integer matrix ``x`` of shape
  (len(K), len(delta(m))).  An operation theta acts by precomposition,
  ``theta(x) = x @ theta_dual``, so dual matrices compose in reverse order.
* ``D(m, i)`` is the face morphism delta(m-1) -> delta(m) and ``E(m, i)`` the
  degeneracy delta(m+1) -> delta(m).
* Up-down vectors are plain integer tuples (p0, q1, p1, ..., qk, pk).

The element-level recursions (``phi``, ``wedge_kl``, ``w``, ``psi``, ``Psi``)
are the primary definitions.  Operator matrices are obtained by evaluating
them on the identity element; the ``*_closed`` functions are independent
closed-form formulas used as oracles.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

from .adc import ChainMorphism, FreeADC, iterated_join, join_vertex_tuple, zero_complex
from .linalg import imatmul


class WedgeUndefined(ValueError):
    pass


class IndexError_(ValueError):
    pass


def _ro(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@lru_cache(maxsize=None)
def delta(m: int) -> FreeADC:
    """The m-simplex; delta(-1) is the zero complex."""
    if m < -1:
        raise IndexError_(f"no simplex of dimension {m}")
    if m == -1:
        return zero_complex()
    cells, bd, aug = [], {}, {}
    for q in range(m + 1):
        for a in combinations(range(m + 1), q + 1):
            cells.append((q, a))
            if q:
                bd[a] = {a[:k] + a[k + 1:]: (-1) ** k for k in range(q + 1)}
            else:
                aug[a] = 1
    K = FreeADC(cells, bd, aug, name=f"delta({m})", check=False)
    for arr in (K.dmat, K.eps):
        arr.setflags(write=False)
    return K


def dim_of_element(x: np.ndarray) -> int:
    n = x.shape[1]
    m = (n + 1).bit_length() - 2
    if (1 << (m + 1)) - 1 != n:
        raise ValueError("matrix width is not the size of a simplex")
    return m


def _shift_up(a, i):
    return tuple(v if v < i else v + 1 for v in a)


@lru_cache(maxsize=None)
def D(m: int, i: int) -> np.ndarray:
    """Face morphism delta(m-1) -> delta(m) omitting vertex i."""
    if m <= 0 or not 0 <= i <= m:
        raise IndexError_(f"face index {i} out of range for dimension {m}")
    src, tgt = delta(m - 1), delta(m)
    out = np.zeros((len(tgt), len(src)), dtype=np.int64)
    for j, a in enumerate(src.labels):
        out[tgt.index[_shift_up(a, i)], j] = 1
    return _ro(out)


@lru_cache(maxsize=None)
def E(m: int, i: int) -> np.ndarray:
    """Degeneracy morphism delta(m+1) -> delta(m) collapsing i and i+1."""
    if m < 0 or not 0 <= i <= m:
        raise IndexError_(f"degeneracy index {i} out of range for dimension {m}")
    src, tgt = delta(m + 1), delta(m)
    out = np.zeros((len(tgt), len(src)), dtype=np.int64)
    for j, b in enumerate(src.labels):
        if i in b and i + 1 in b:
            continue
        out[tgt.index[tuple(v if v <= i else v - 1 for v in b)], j] = 1
    return _ro(out)


def face_morphism(m: int, i: int) -> ChainMorphism:
    return ChainMorphism(delta(m - 1), delta(m), D(m, i), f"face[{m},{i}]")


def degeneracy_morphism(m: int, i: int) -> ChainMorphism:
    return ChainMorphism(delta(m + 1), delta(m), E(m, i), f"degeneracy[{m},{i}]")


@lru_cache(maxsize=None)
def identity(m: int) -> np.ndarray:
    return _ro(np.eye(len(delta(m)), dtype=np.int64))


@lru_cache(maxsize=None)
def face_power(n: int, i: int, r: int) -> np.ndarray:
    """r-fold face morphism with index i: delta(n-r) -> delta(n)."""
    out = identity(n)
    for t in range(r):
        out = imatmul(out, D(n - t, i))
    return _ro(np.asarray(out))


@lru_cache(maxsize=None)
def deg_power(n: int, i: int, r: int) -> np.ndarray:
    """r-fold degeneracy morphism with index i: delta(n) -> delta(n-r)."""
    out = identity(n)
    for t in range(r):
        out = imatmul(E(n - t - 1, i), out)
    return _ro(np.asarray(out))


# ---------------------------------------------------------------------------
# element level operations (x is a matrix with columns indexed by delta(m))


def face(x: np.ndarray, i: int) -> np.ndarray:
    return imatmul(x, D(dim_of_element(x), i))


def faces(x: np.ndarray, i: int, r: int) -> np.ndarray:
    for _ in range(r):
        x = face(x, i)
    return x


def degeneracy(x: np.ndarray, i: int) -> np.ndarray:
    return imatmul(x, E(dim_of_element(x), i))


def wedge(x: np.ndarray, y: np.ndarray, i: int, check=True) -> np.ndarray:
    """x wedge_i y; defined when face_i x == face_{i+1} y."""
    m = dim_of_element(x)
    if dim_of_element(y) != m or not 0 <= i < m:
        raise WedgeUndefined(f"wedge index {i} out of range for dimension {m}")
    dx = imatmul(x, D(m, i))
    if check and not np.array_equal(dx, imatmul(y, D(m, i + 1))):
        raise WedgeUndefined(f"wedge undefined: face {i} of x differs from face {i + 1} of y")
    return (imatmul(x, E(m, i + 1)) - imatmul(dx, imatmul(E(m - 1, i), E(m, i)))
            + imatmul(y, E(m, i)))


def wedge_chain_map(x: ChainMorphism, y: ChainMorphism, i: int) -> ChainMorphism:
    m = dim_of_element(x.matrix)
    z = wedge(x.matrix, y.matrix, i)
    return ChainMorphism(delta(m + 1), x.target, z, f"wedge[{i}]")


def phi_tilde(x: np.ndarray, i: int, j: int) -> np.ndarray:
    m = dim_of_element(x)
    if not (0 < i <= i + j <= m):
        raise IndexError_(f"phi indices ({i},{j}) out of range for dimension {m}")
    if j == 0:
        return degeneracy(x, i - 1)
    return wedge(phi_tilde(face(x, i + 1), i, j - 1), x, i)


def phi(x: np.ndarray, i: int, j: int) -> np.ndarray:
    return face(phi_tilde(x, i, j), i + 1)


def wedge_kl(x: np.ndarray, y: np.ndarray, k: int, l: int) -> np.ndarray:
    """Iterated wedge; defined when face_0^k x == face_1^l y."""
    if not np.array_equal(faces(x, 0, k), faces(y, 1, l)):
        raise WedgeUndefined(f"iterated wedge ({k},{l}) undefined: end faces differ")
    memo = {}

    def rec(a, b, kk, ll):
        if ll == 0:
            return a
        if kk == 0:
            return b
        key = (kk, ll)
        if key in memo:
            return memo[key]
        left = rec(a, face(b, 1), kk, ll - 1)
        right = rec(face(a, kk - 1), b, kk - 1, ll)
        out = wedge(left, right, kk - 1)
        memo[key] = out
        return out

    return rec(x, y, k, l)


def w(x: np.ndarray, k: int, l: int) -> np.ndarray:
    n = dim_of_element(x)
    if k < 0 or l < 0 or n < k + l:
        raise IndexError_(f"w({k},{l}) needs dimension at least {k + l}")
    return wedge_kl(faces(x, k + 1, l), faces(x, 0, k), k, l)


def size(s) -> int:
    s = tuple(s)
    return sum(s[0::2]) - sum(s[1::2])


def _check_s(s):
    s = tuple(int(v) for v in s)
    if not s or len(s) % 2 == 0 or any(v < 0 for v in s):
        raise ValueError(f"malformed up-down vector {s}")
    for t in range(1, len(s), 2):
        if not (s[t - 1] > s[t] < s[t + 1]):
            raise ValueError(f"malformed up-down vector {s}")
    return s


def psi(x: np.ndarray, i: int, s) -> np.ndarray:
    """The operation psi_{i,s} on an element of dimension |s|."""
    s = _check_s(s)
    n, p = size(s), s[-1]
    if dim_of_element(x) != n:
        raise ValueError("element dimension does not match the up-down vector")
    if not 0 < i < n:
        raise IndexError_(f"psi index {i} out of range for |s| = {n}")
    if i > n - p:
        return phi(x, i, 1)
    q, sp = s[-2], s[:-2]
    k, l = n - p, p - q
    if i == k:
        if q == 0:
            return w(x, k, l)
        return w(phi(x, k, l + 1), k, l)
    return wedge_kl(psi(faces(x, k + 1, l), i, sp), faces(x, 0, k), k, l)


def psi_sequence(n: int) -> list[int]:
    """Order in which the psi operations are applied by Psi."""
    out = []
    for top in range(n - 1, 0, -1):
        out.extend(range(1, top + 1))
    return out


def Psi(x: np.ndarray, s) -> np.ndarray:
    s = _check_s(s)
    for i in psi_sequence(size(s)):
        x = psi(x, i, s)
    return x


# ---------------------------------------------------------------------------
# operator matrices from the element level definitions


@lru_cache(maxsize=None)
def phi_tilde_dual(m: int, i: int, j: int) -> np.ndarray:
    return _ro(phi_tilde(identity(m), i, j))


@lru_cache(maxsize=None)
def phi_dual(m: int, i: int, j: int) -> np.ndarray:
    return _ro(phi(identity(m), i, j))


@lru_cache(maxsize=None)
def w_dual(n: int, k: int, l: int) -> np.ndarray:
    return _ro(w(identity(n), k, l))


@lru_cache(maxsize=None)
def psi_dual(s: tuple, i: int) -> np.ndarray:
    return _ro(psi(identity(size(s)), i, s))


@lru_cache(maxsize=None)
def Psi_dual(s: tuple) -> np.ndarray:
    """Psi_s as an endomorphism of delta(|s|), composed from the psi matrices."""
    s = _check_s(s)
    n = size(s)
    out = identity(n)
    for i in psi_sequence(n):
        out = imatmul(out, psi_dual(s, i))
    return _ro(np.asarray(out))


def phi_morphism(m: int, i: int, j: int) -> ChainMorphism:
    return ChainMorphism(delta(m), delta(m), phi_dual(m, i, j), f"phi[{i},{j}]")


def w_morphism(n: int, k: int, l: int) -> ChainMorphism:
    return ChainMorphism(delta(n), delta(n), w_dual(n, k, l), f"w[{k},{l}]")


def psi_morphism(s, i: int) -> ChainMorphism:
    s = _check_s(s)
    n = size(s)
    return ChainMorphism(delta(n), delta(n), psi_dual(s, i), f"psi[{i},{s}]")


def Psi_morphism(s) -> ChainMorphism:
    s = _check_s(s)
    n = size(s)
    return ChainMorphism(delta(n), delta(n), Psi_dual(s), f"Psi[{s}]")


# ---------------------------------------------------------------------------
# closed forms (independent oracles)


def _mm(*ms):
    out = ms[0]
    for m in ms[1:]:
        out = imatmul(out, m)
    return np.asarray(out)


def wedge_dual_closed(m: int, i: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three terms of the wedge as maps out of delta(m+1).

    z = x @ A - (x @ D_i) @ B + y @ C with A = E_{i+1}, B = E_i E_i, C = E_i.
    """
    return E(m, i + 1), _mm(E(m - 1, i), E(m, i)), E(m, i)


def phi_closed(m: int, i: int, j: int) -> np.ndarray:
    if not (0 < i <= i + j <= m and j > 0):
        raise IndexError_(f"phi indices ({i},{j}) out of range for dimension {m}")
    a = face_power(m, i + 1, j)
    mid = E(m - j, i - 1) - E(m - j, i)
    return a @ mid @ deg_power(m, i + 1, j - 1) + identity(m)


def phi_tilde_closed(m: int, i: int, j: int) -> np.ndarray:
    """Map delta(m+1) -> delta(m)."""
    a = face_power(m, i + 1, j)
    mid = E(m - j, i - 1) - E(m - j, i)
    return a @ mid @ deg_power(m + 1, i + 1, j) + E(m, i)


def w_closed(n: int, k: int, l: int, last_exponent: int | None = None) -> np.ndarray:
    """Closed form of w_{k,l}; the exponent of the final degeneracy power
    defaults to k.  Passing ``last_exponent=l`` gives the formula with the
    other exponent, which is not idempotent in general."""
    e = k if last_exponent is None else last_exponent
    t1 = _mm(face_power(n, k + 1, l), deg_power(n, k, l))
    t2 = _mm(face_power(n, k + 1, l), face_power(n - l, 0, k), deg_power(n, 0, k + l))
    t3 = _mm(face_power(n, 0, e), deg_power(n, 0, e))
    return t1 - t2 + t3


def psi_closed(s, i: int) -> np.ndarray:
    """Closed form of psi_{i,s} assembled from the closed forms of phi and w."""
    s = _check_s(s)
    n, p = size(s), s[-1]
    if not 0 < i < n:
        raise IndexError_(f"psi index {i} out of range for |s| = {n}")
    if i > n - p:
        return phi_closed(n, i, 1)
    q, sp = s[-2], s[:-2]
    k, l = n - p, p - q
    wd = w_closed(n, k, l)
    up = face_power(n, k + 1, l)
    if i < k:
        inner = psi_closed(sp, i) - identity(size(sp))
        return wd + _mm(up, inner, deg_power(n, k, l))
    if q == 0:
        return wd
    inner = phi_closed(size(sp), k, 1) - identity(size(sp))
    return wd + _mm(up, inner, deg_power(n, k + 1, l), wd)


def Psi_closed(s) -> np.ndarray:
    s = _check_s(s)
    n = size(s)
    out = identity(n)
    for i in psi_sequence(n):
        out = _mm(out, psi_closed(s, i))
    return out


def psi_alternative(s, i: int) -> np.ndarray:
    """The variant w_{k,l+1} phi_{k,l+1} at i = |s|-p with q > 0."""
    s = _check_s(s)
    n, p, q = size(s), s[-1], s[-2]
    k, l = n - p, p - q
    if i != k or q == 0:
        raise ValueError("alternative reading applies only at i = |s|-p with q > 0")
    return _mm(phi_dual(n, k, l + 1), w_dual(n, k, l + 1))


def points_join_isomorphism(m: int):
    """The iterated join of m+1 points, its insertion order and the
    isomorphism onto delta(m) sending a join element to its vertex tuple."""
    J, order = iterated_join([delta(0)] * (m + 1))
    D = delta(m)
    mat = np.zeros((len(D), len(J)), dtype=np.int64)
    for j, lab in enumerate(J.labels):
        mat[D.index[join_vertex_tuple(lab, [1] * (m + 1))], j] = 1
    return J, order, ChainMorphism(J, D, mat, "points")


def cosimplicial_identity_failures(m: int) -> list[str]:
    """Check the duals of the simplicial identities on delta(m) exhaustively."""
    bad = []
    eq = np.array_equal
    # faces: d_i d_j = d_{j-1} d_i  (i < j) on elements of dimension m
    for j in range(m + 1):
        for i in range(j):
            if m >= 2 and not eq(_mm(D(m, j), D(m - 1, i)), _mm(D(m, i), D(m - 1, j - 1))):
                bad.append(f"faces {i}<{j} on {m}")
    for j in range(m + 1):
        Ej = E(m, j)
        for i in range(m + 2):
            lhs = _mm(Ej, D(m + 1, i))  # dual of d_i e_j
            if i < j:
                rhs = _mm(D(m, i), E(m - 1, j - 1))
            elif i in (j, j + 1):
                rhs = identity(m)
            else:
                rhs = _mm(D(m, i - 1), E(m - 1, j))
            if rhs is not None and not eq(lhs, rhs):
                bad.append(f"face {i} degeneracy {j} on {m}")
        for i in range(j + 1):
            # e_i e_j = e_{j+1} e_i
            if not eq(_mm(E(m, j), E(m + 1, i)), _mm(E(m, i), E(m + 1, j + 1))):
                bad.append(f"degeneracies {i}<={j} on {m}")
    # wedge identities as operator equations on delta(m), 0 <= i < m
    I = identity(m)
    for i in range(m):
        if not eq(wedge(degeneracy(face(I, i + 1), i), I, i), degeneracy(I, i)):
            bad.append(f"left degenerate wedge {i} on {m}")
        if not eq(wedge(I, degeneracy(face(I, i), i), i), degeneracy(I, i + 1)):
            bad.append(f"right degenerate wedge {i} on {m}")
    return bad


# ---------------------------------------------------------------------------
# operator identities (element identities turned into matrix equations)


def phi_identity_checks(m: int):
    from .reports import Check

    eq = np.array_equal
    out = []
    for i in range(1, m + 1):
        for j in range(1, m - i + 1):
            P, T = phi_dual(m, i, j), phi_tilde_dual(m, i, j)
            tag = f"({m},{i},{j})"
            out.append(Check(f"phi-keeps-face-i{tag}", eq(_mm(P, D(m, i)), D(m, i))))
            lhs = _mm(P, face_power(m, i + 1, j))
            mid = _mm(T, face_power(m + 1, i + 1, j + 1))
            rhs = _mm(face_power(m, i, j + 1), E(m - j - 1, i - 1))
            out.append(Check(f"phi-upper-faces-degenerate{tag}", eq(lhs, mid) and eq(mid, rhs)))
            out.append(Check(f"phi-closed-form{tag}", eq(P, phi_closed(m, i, j))))
            out.append(Check(f"phi-tilde-closed-form{tag}", eq(T, phi_tilde_closed(m, i, j))))
    return out


def w_identity_checks(n: int):
    from .reports import Check

    eq = np.array_equal
    out = []
    for k in range(n + 1):
        for l in range(n - k + 1):
            W = w_dual(n, k, l)
            tag = f"({n},{k},{l})"
            out.append(Check(f"w-idempotent{tag}", eq(_mm(W, W), W)))
            out.append(Check(f"w-keeps-upper-faces{tag}",
                             eq(_mm(W, face_power(n, k + 1, l)), face_power(n, k + 1, l))))
            out.append(Check(f"w-keeps-lower-faces{tag}",
                             eq(_mm(W, face_power(n, 0, k)), face_power(n, 0, k))))
            out.append(Check(f"w-closed-form{tag}", eq(W, w_closed(n, k, l))))
    return out


def w_exponent_regression(n: int) -> list[dict]:
    """Properties of the closed form with final exponent l instead of k, for
    every k != l with k + l <= n."""
    out = []
    for k in range(n + 1):
        for l in range(n - k + 1):
            if k == l:
                continue
            bad = w_closed(n, k, l, last_exponent=l)
            out.append(dict(
                k=k, l=l,
                equals_w=bool(np.array_equal(bad, w_dual(n, k, l))),
                idempotent=bool(np.array_equal(_mm(bad, bad), bad)),
                keeps_faces=bool(np.array_equal(_mm(bad, face_power(n, k + 1, l)), face_power(n, k + 1, l))
                                 and np.array_equal(_mm(bad, face_power(n, 0, k)), face_power(n, 0, k)))))
    return out
