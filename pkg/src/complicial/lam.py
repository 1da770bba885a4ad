"""The functor lambda and sets with complicial identities.

An m-element of lambda K is a morphism delta(m) -> K, stored as an integer
matrix with columns indexed by the basis of delta(m).  A ComplicialModel
materializes (lambda K)_0 .. (lambda K)_n and exposes faces, degeneracies and
wedges on element indices, which is what the axiom checker and the derived
operations work with.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from . import simplex as sx
from .adc import ChainMorphism, FreeADC, check_morphism, solver_cache
from .reports import Check


class NotInModel(LookupError):
    """An operation produced a morphism outside the materialized sets."""


class BeyondCutoff(LookupError):
    pass


# ---------------------------------------------------------------------------
# single elements


@dataclass(frozen=True, eq=False)
class LamElement:
    m: int
    morphism: ChainMorphism

    @classmethod
    def of(cls, matrix, K: FreeADC):
        m = sx.dim_of_element(matrix)
        return cls(m, ChainMorphism(sx.delta(m), K, np.asarray(matrix, dtype=np.int64)))

    @property
    def matrix(self):
        return self.morphism.matrix

    @property
    def K(self):
        return self.morphism.target

    def key(self) -> bytes:
        return self.morphism.key()

    def __eq__(self, other):
        return isinstance(other, LamElement) and self.m == other.m and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, other):
        return (self.m, self.key()) < (other.m, other.key())

    def is_valid(self) -> bool:
        return check_morphism(self.morphism).valid

    def __repr__(self):
        ims = [f"{lab}:{c}" for lab, c in self.morphism.images().items() if len(sx.delta(self.m).labels) and len(lab) == self.m + 1]
        return f"LamElement(m={self.m}, top {' '.join(ims)})"


def face(x: LamElement, i: int) -> LamElement:
    if x.m == 0 or not 0 <= i <= x.m:
        raise sx.IndexError_(f"face index {i} out of range for dimension {x.m}")
    return LamElement.of(sx.face(x.matrix, i), x.K)


def degeneracy(x: LamElement, i: int) -> LamElement:
    if not 0 <= i <= x.m:
        raise sx.IndexError_(f"degeneracy index {i} out of range for dimension {x.m}")
    return LamElement.of(sx.degeneracy(x.matrix, i), x.K)


def wedge(x: LamElement, y: LamElement, i: int) -> LamElement:
    """x wedge_i y through wedge_chain_map; both displayed forms are compared."""
    z = sx.wedge_chain_map(x.morphism, y.morphism, i)
    m = x.m
    alt = (sx.degeneracy(x.matrix, i + 1)
           - sx.degeneracy(sx.degeneracy(sx.face(y.matrix, i + 1), i), i)
           + sx.degeneracy(y.matrix, i))
    if not np.array_equal(alt, z.matrix):
        raise AssertionError(f"the two forms of the wedge disagree in dimension {m}")
    return LamElement(m + 1, z)


# ---------------------------------------------------------------------------
# enumeration


@lru_cache(maxsize=None)
def _glue_plan(m: int):
    """For each column of delta(m): (face index, column of delta(m-1)), plus
    the position of the top cell.  Every other cell lies in the face that
    omits its smallest missing vertex."""
    Dm, Dp = sx.delta(m), sx.delta(m - 1)
    which, src = [], []
    top = None
    for j, a in enumerate(Dm.labels):
        missing = [v for v in range(m + 1) if v not in a]
        if not missing:
            top = j
            which.append(0)
            src.append(0)
            continue
        i = missing[0]
        which.append(i)
        src.append(Dp.index[tuple(v if v < i else v - 1 for v in a)])
    return np.array(which), np.array(src), top


def glue(faces_: list) -> np.ndarray:
    """Matrix of the morphism on the boundary of delta(m) determined by a
    compatible face tuple; the top column is left zero."""
    m = len(faces_) - 1
    which, src, top = _glue_plan(m)
    U = np.stack(faces_)
    x = U[which, :, src].T.copy()
    x[:, top] = 0
    return x


def _top_target(faces_: list, K: FreeADC) -> np.ndarray:
    m = len(faces_) - 1
    topcol = len(sx.delta(m - 1)) - 1
    t = sum((-1) ** i * u[:, topcol] for i, u in enumerate(faces_))
    return t


def _key(a: np.ndarray) -> bytes:
    return np.ascontiguousarray(a, dtype=np.int64).tobytes()


def _enumerate_vertices(K, cache, bound):
    sols, ok = cache.solver(0).solve((1,), bound)
    out = []
    for s in sols:
        x = np.zeros((len(K), 1), dtype=np.int64)
        x[K.block(0), 0] = s
        out.append(x)
    return out, ok


def compatible_tuples(prev_faces, m: int, n_prev: int) -> list[tuple]:
    """Tuples (u_0..u_m) of (m-1)-elements with face_i u_j == face_{j-1} u_i
    for i < j, found by indexing elements by their leading faces."""
    if m == 1:
        return list(product(range(n_prev), repeat=2))
    idx = [None] + [{} for _ in range(m)]
    for u in range(n_prev):
        f = prev_faces[u]
        for j in range(1, m + 1):
            idx[j].setdefault(tuple(f[:j]), []).append(u)
    tuples = []

    def rec(chosen):
        j = len(chosen)
        if j == m + 1:
            tuples.append(tuple(chosen))
            return
        if j == 0:
            cands = range(n_prev)
        else:
            cands = idx[j].get(tuple(prev_faces[u][j - 1] for u in chosen), ())
        for u in cands:
            chosen.append(u)
            rec(chosen)
            chosen.pop()

    rec([])
    return tuples


def _extend(K, prev, prev_faces, m, cache, bound):
    """(lambda K)_m from (lambda K)_{m-1} and its face table.

    Returns (list of (matrix, face tuple)), complete)."""
    complete = True
    tuples = compatible_tuples(prev_faces, m, len(prev))
    out = []
    blk = K.block(m) if m <= K.top else None
    for tup in tuples:
        fs = [prev[u] for u in tup]
        t = _top_target(fs, K)
        if blk is None:
            if np.any(t):
                continue
            out.append((glue(fs), tup))
            continue
        tb = t[K.block(m - 1)]
        if int(np.abs(t).sum()) != int(np.abs(tb).sum()):
            continue
        sols, ok = cache.solver(m).solve(tb, bound)
        complete = complete and ok
        if not sols:
            continue
        base = glue(fs)
        top = base.shape[1] - 1
        for s in sols:
            x = base.copy()
            x[blk, top] = s
            out.append((x, tup))
    return out, complete


class ComplicialModel:
    """(lambda K)_0 .. (lambda K)_n with operations on element indices.

    Elements of each dimension are sorted by the bytes of their matrices.
    ``wedge_table`` caches computed wedges and may be edited to feed the axiom
    checker a modified structure."""

    def __init__(self, K: FreeADC, cutoff: int, bound: int = 64):
        self.K, self.cutoff, self.bound = K, cutoff, bound
        cache = solver_cache(K)
        self.elements, self.faces, self.keys = [], [], []
        self.complete = True
        xs, ok = _enumerate_vertices(K, cache, bound)
        self.complete &= ok
        self._install(xs, [() for _ in xs])
        for m in range(1, cutoff + 1):
            got, ok = _extend(K, self.elements[m - 1], self.faces[m - 1], m, cache, bound)
            self.complete &= ok
            self._install([g[0] for g in got], [g[1] for g in got])
        self.degs = []
        for m in range(cutoff):
            tab = np.empty((len(self.elements[m]), m + 1), dtype=np.int64)
            for i in range(m + 1):
                E = sx.E(m, i)
                for a, x in enumerate(self.elements[m]):
                    tab[a, i] = self._find(m + 1, x @ E)
            self.degs.append(tab)
        self.wedge_table = {}

    def _install(self, xs, fts):
        order = sorted(range(len(xs)), key=lambda a: _key(xs[a]))
        els = [xs[a] for a in order]
        for x in els:
            x.setflags(write=False)
        self.elements.append(els)
        self.keys.append({_key(x): a for a, x in enumerate(els)})
        fs = [fts[a] for a in order]
        self.faces.append(np.array(fs, dtype=np.int64).reshape(len(els), -1))

    def _find(self, m: int, x) -> int:
        if m > self.cutoff:
            raise BeyondCutoff(f"dimension {m} is above the cutoff {self.cutoff}")
        a = self.keys[m].get(_key(x))
        if a is None:
            raise NotInModel(f"morphism of dimension {m} is not among the enumerated elements")
        return a

    def index(self, x) -> tuple[int, int]:
        if isinstance(x, LamElement):
            x = x.matrix
        m = sx.dim_of_element(x)
        return m, self._find(m, x)

    def size(self, m: int) -> int:
        return len(self.elements[m])

    def counts(self) -> list[int]:
        return [len(e) for e in self.elements]

    def matrix(self, m: int, a: int) -> np.ndarray:
        return self.elements[m][a]

    def element(self, m: int, a: int) -> LamElement:
        return LamElement(m, ChainMorphism(sx.delta(m), self.K, self.elements[m][a]))

    def describe(self, m: int, a: int) -> str:
        from .serialize import morphism_line
        return f"x{m}.{a}=" + morphism_line(self.elements[m][a], sx.delta(m), self.K)

    # structure maps on indices
    def d(self, m: int, a: int, i: int) -> int:
        return int(self.faces[m][a, i])

    def e(self, m: int, a: int, i: int) -> int:
        if m >= self.cutoff:
            raise BeyondCutoff(f"degeneracy of a {m}-element is above the cutoff")
        return int(self.degs[m][a, i])

    def wedge_defined(self, m, a, b, i) -> bool:
        return 0 <= i < m and self.d(m, a, i) == self.d(m, b, i + 1)

    def wedge(self, m: int, a: int, b: int, i: int) -> int:
        key = (m, i, a, b)
        hit = self.wedge_table.get(key)
        if hit is not None:
            return hit
        if not self.wedge_defined(m, a, b, i):
            raise sx.WedgeUndefined(f"wedge_{i} undefined: face {i} of x{m}.{a} differs from face {i + 1} of x{m}.{b}")
        z = sx.wedge(self.elements[m][a], self.elements[m][b], i, check=False)
        out = self._find(m + 1, z)
        self.wedge_table[key] = out
        return out

    def faces_of(self, m, a, i, r):
        for _ in range(r):
            a = self.d(m, a, i)
            m -= 1
        return a

    def stacked(self, m: int) -> np.ndarray:
        """All m-elements as one array of shape (N, len(K), len(delta(m)))."""
        return np.stack(self.elements[m]) if self.elements[m] else np.zeros((0, len(self.K), len(sx.delta(m))), dtype=np.int64)


@lru_cache(maxsize=None)
def _lam_model_cached(K_sig, K, cutoff, bound):
    return ComplicialModel(K, cutoff, bound)


def lam_model(K: FreeADC, cutoff: int, bound: int = 64) -> ComplicialModel:
    """Cached model; the signature of K is part of the cache key."""
    return _lam_model_cached(K.signature(), K, cutoff, bound)


def lam_enumerate(K: FreeADC, m: int, bound: int = 64):
    """(lambda K)_m as a sorted list of LamElement, with the completeness flag."""
    X = lam_model(K, m, bound)
    return [X.element(m, a) for a in range(X.size(m))], X.complete


def delta_model(n: int, cutoff: int | None = None) -> ComplicialModel:
    return lam_model(sx.delta(n), n + 2 if cutoff is None else cutoff)


# ---------------------------------------------------------------------------
# the nine axioms


class _Tally:
    def __init__(self, name):
        self.name, self.count, self.fails = name, 0, []

    def check(self, ok, msg):
        self.count += 1
        if not ok and len(self.fails) < 3:
            self.fails.append(msg() if callable(msg) else msg)

    def result(self) -> Check:
        if self.fails:
            return Check(self.name, False, " | ".join(self.fails))
        return Check(self.name, True, f"{self.count} instances")


def _group(X, m, i):
    """m-elements grouped by face i."""
    out = {}
    for a in range(X.size(m)):
        out.setdefault(X.d(m, a, i), []).append(a)
    return out


def _pairs(X, m, i):
    """Pairs (a, b) of m-elements with face_i a == face_{i+1} b."""
    by = _group(X, m, i + 1)
    return [(a, b) for a in range(X.size(m)) for b in by.get(X.d(m, a, i), [])]


def _safe(f):
    try:
        return f()
    except (sx.WedgeUndefined, NotInModel) as e:
        return e


def check_complicial_axioms(X: ComplicialModel, axioms=range(1, 10)) -> list[Check]:
    """Every axiom over all applicable tuples whose outputs stay within the
    cutoff.  One Check per axiom, carrying up to three counterexamples."""
    top = X.cutoff
    out = []
    desc = X.describe
    d, e, wg = X.d, X.e, X.wedge

    if 1 in axioms:
        t = _Tally("axiom-1-faces-degeneracies")
        for m in range(top + 1):
            for a in range(X.size(m)):
                for i in range(m + 1):
                    if m > 0:
                        t.check(0 <= d(m, a, i) < X.size(m - 1), lambda: desc(m, a))
                    if m < top:
                        t.check(0 <= e(m, a, i) < X.size(m + 1), lambda: desc(m, a))
        out.append(t.result())

    if 2 in axioms:
        t = _Tally("axiom-2-wedges")
        for m in range(1, top):
            for i in range(m):
                for a, b in _pairs(X, m, i):
                    r = _safe(lambda: wg(m, a, b, i))
                    t.check(isinstance(r, int), lambda: f"wedge_{i} of {desc(m, a)} and {desc(m, b)}: {r}")
        out.append(t.result())

    if 3 in axioms:
        t = _Tally("axiom-3-simplicial-identities")
        for m in range(top + 1):
            for a in range(X.size(m)):
                def bad(what):
                    return lambda: f"{what} at {desc(m, a)}"
                for j in range(m + 1):
                    for i in range(j):
                        if m >= 2:
                            t.check(d(m - 1, d(m, a, j), i) == d(m - 1, d(m, a, i), j - 1), bad(f"faces {i},{j}"))
                        if m + 1 <= top:
                            t.check(d(m + 1, e(m, a, j), i) == e(m - 1, d(m, a, i), j - 1), bad(f"face {i} of degeneracy {j}"))
                    if m + 1 <= top:
                        ej = e(m, a, j)
                        t.check(d(m + 1, ej, j) == a and d(m + 1, ej, j + 1) == a, bad(f"faces of degeneracy {j}"))
                        for i in range(j + 2, m + 2):
                            t.check(d(m + 1, ej, i) == e(m - 1, d(m, a, i - 1), j), bad(f"face {i} of degeneracy {j}"))
                    if m + 2 <= top:
                        for i in range(j + 1):
                            t.check(e(m + 1, e(m, a, j), i) == e(m + 1, e(m, a, i), j + 1), bad(f"degeneracies {i},{j}"))
                if m + 1 <= top:
                    for i in range(m):
                        u = e(m - 1, d(m, a, i + 1), i)
                        r = _safe(lambda: wg(m, u, a, i))
                        t.check(r == e(m, a, i), bad(f"degeneracy {i} as a wedge"))
                        v = e(m - 1, d(m, a, i), i)
                        r = _safe(lambda: wg(m, a, v, i))
                        t.check(r == e(m, a, i + 1), bad(f"degeneracy {i + 1} as a wedge"))
        out.append(t.result())

    if 4 in axioms:
        t = _Tally("axiom-4-faces-of-wedges")
        for m in range(1, top):
            for i in range(m):
                for a, b in _pairs(X, m, i):
                    W = wg(m, a, b, i)

                    def bad(what):
                        return lambda: f"{what} for wedge_{i} of {desc(m, a)} and {desc(m, b)}"
                    t.check(d(m + 1, W, i) == b, bad(f"face {i}"))
                    t.check(d(m + 1, W, i + 2) == a, bad(f"face {i + 2}"))
                    for j in range(i):
                        r = _safe(lambda: wg(m - 1, d(m, a, j), d(m, b, j), i - 1))
                        t.check(d(m + 1, W, j) == r, bad(f"face {j}"))
                    for j in range(i + 3, m + 2):
                        r = _safe(lambda: wg(m - 1, d(m, a, j - 1), d(m, b, j - 1), i))
                        t.check(d(m + 1, W, j) == r, bad(f"face {j}"))
        out.append(t.result())

    if 5 in axioms:
        t = _Tally("axiom-5")
        for m in range(1, top - 1):
            for i in range(m):
                by = _group(X, m + 1, i)
                for y, z in _pairs(X, m, i):
                    W = wg(m, y, z, i)
                    for b in by.get(d(m + 1, W, i + 1), []):
                        def rhs():
                            A = wg(m + 1, b, W, i)
                            return A == wg(m + 1, wg(m, d(m + 1, b, i + 2), y, i), d(m + 2, A, i + 1), i + 1)
                        r = _safe(rhs)
                        t.check(r is True, lambda: f"i={i} b={desc(m + 1, b)} y={desc(m, y)} z={desc(m, z)}: {r}")
        out.append(t.result())

    if 6 in axioms:
        t = _Tally("axiom-6")
        for m in range(1, top - 1):
            for i in range(m):
                by = _group(X, m + 1, i + 2)
                for x, y in _pairs(X, m, i):
                    W = wg(m, x, y, i)
                    for c in by.get(d(m + 1, W, i + 1), []):
                        def rhs():
                            A = wg(m + 1, W, c, i + 1)
                            return A == wg(m + 1, d(m + 2, A, i + 2), wg(m, y, d(m + 1, c, i), i), i)
                        r = _safe(rhs)
                        t.check(r is True, lambda: f"i={i} x={desc(m, x)} y={desc(m, y)} c={desc(m + 1, c)}: {r}")
        out.append(t.result())

    if 7 in axioms:
        t = _Tally("axiom-7")
        for m in range(1, top - 1):
            for i in range(m):
                by = _group(X, m, i + 1)
                for x, y in _pairs(X, m, i):
                    XY = wg(m, x, y, i)
                    for z in by.get(d(m, y, i), []):
                        def eq():
                            YZ = wg(m, y, z, i)
                            lhs = wg(m + 1, wg(m, x, d(m + 1, YZ, i + 1), i), YZ, i)
                            rhs = wg(m + 1, XY, wg(m, d(m + 1, XY, i + 1), z, i), i + 1)
                            return lhs == rhs
                        r = _safe(eq)
                        t.check(r is True, lambda: f"i={i} x={desc(m, x)} y={desc(m, y)} z={desc(m, z)}: {r}")
        out.append(t.result())

    if 8 in axioms:
        t = _Tally("axiom-8")
        for m in range(2, top - 1):
            for i in range(m - 1):
                by_x = _group(X, m, i + 1)
                by_z = _group(X, m, i + 1)
                by_w = by_z
                for y in range(X.size(m)):
                    for x in by_x.get(d(m, y, i + 2), []):
                        for z in by_z.get(d(m, y, i), []):
                            def triple():
                                A = d(m + 2, wg(m + 1, wg(m, x, y, i + 1), wg(m, y, z, i), i + 1), i + 2)
                                V = wg(m - 1, d(m, x, i), d(m, z, i + 2), i)
                                return A, V
                            r = _safe(triple)
                            if not isinstance(r, tuple):
                                t.check(False, lambda: f"i={i} x={desc(m, x)} y={desc(m, y)} z={desc(m, z)}: {r}")
                                continue
                            A, V = r
                            for w_ in by_w.get(d(m, V, i + 1), []):
                                def eq():
                                    lhs = wg(m + 1, A, wg(m, w_, d(m + 1, A, i), i + 1), i)
                                    rhs = wg(m + 1, wg(m, d(m + 1, A, i + 3), w_, i), A, i + 2)
                                    return lhs == rhs
                                r2 = _safe(eq)
                                t.check(r2 is True, lambda: f"i={i} x={desc(m, x)} y={desc(m, y)} z={desc(m, z)} w={desc(m, w_)}: {r2}")
        out.append(t.result())

    if 9 in axioms:
        t = _Tally("axiom-9")
        for m in range(3, top - 1):
            for j in range(3, m + 1):
                for i in range(j - 2):
                    P = _pairs(X, m, i)
                    by = {}
                    for z, w_ in P:
                        by.setdefault((d(m, z, j), d(m, w_, j)), []).append((z, w_))
                    for x, y in P:
                        for z, w_ in by.get((d(m, x, j - 1), d(m, y, j - 1)), []):
                            def eq():
                                lhs = wg(m + 1, wg(m, x, y, i), wg(m, z, w_, i), j)
                                rhs = wg(m + 1, wg(m, x, z, j - 1), wg(m, y, w_, j - 1), i)
                                return lhs == rhs
                            r = _safe(eq)
                            t.check(r is True, lambda: f"i={i} j={j} x={desc(m, x)} y={desc(m, y)} z={desc(m, z)} w={desc(m, w_)}: {r}")
        out.append(t.result())
    return out


# ---------------------------------------------------------------------------
# derived operations on element indices


class Ops:
    """Combined operations evaluated through faces, degeneracies and wedges of
    a model, memoized per element."""

    def __init__(self, X: ComplicialModel):
        self.X = X
        self.memo = {}

    def _m(self, key, f):
        hit = self.memo.get(key)
        if hit is None:
            hit = f()
            self.memo[key] = hit
        return hit

    def faces(self, m, a, i, r):
        return self.X.faces_of(m, a, i, r)

    def phi_tilde(self, m, a, i, j):
        if not 0 < i <= i + j <= m:
            raise sx.IndexError_(f"phi indices ({i},{j}) out of range for dimension {m}")
        X = self.X

        def f():
            if j == 0:
                return X.e(m, a, i - 1)
            return X.wedge(m, self.phi_tilde(m - 1, X.d(m, a, i + 1), i, j - 1), a, i)
        return self._m(("pt", m, a, i, j), f)

    def phi(self, m, a, i, j):
        return self.X.d(m + 1, self.phi_tilde(m, a, i, j), i + 1)

    def wedge_kl(self, mx, a, my, b, k, l):
        """a wedge_{k,l} b for a of dimension mx = k+q and b of dimension my = l+q."""
        X = self.X
        if mx - k != my - l or mx < k or my < l:
            raise sx.WedgeUndefined(f"iterated wedge ({k},{l}) needs dimensions k+q and l+q")
        if self.faces(mx, a, 0, k) != self.faces(my, b, 1, l):
            raise sx.WedgeUndefined(f"iterated wedge ({k},{l}) undefined: end faces differ")

        def rec(ma, a_, mb, b_, kk, ll):
            if ll == 0:
                return a_
            if kk == 0:
                return b_

            def f():
                left = rec(ma, a_, mb - 1, X.d(mb, b_, 1), kk, ll - 1)
                right = rec(ma - 1, X.d(ma, a_, kk - 1), mb, b_, kk - 1, ll)
                return X.wedge(kk + ll - 1 + (ma - kk), left, right, kk - 1)
            return self._m(("wkl", ma, a_, mb, b_, kk, ll), f)

        return rec(mx, a, my, b, k, l)

    def w(self, m, a, k, l):
        if k < 0 or l < 0 or m < k + l:
            raise sx.IndexError_(f"w({k},{l}) needs dimension at least {k + l}")
        return self._m(("w", m, a, k, l), lambda: self.wedge_kl(
            m - l, self.faces(m, a, k + 1, l), m - k, self.faces(m, a, 0, k), k, l))

    def psi(self, m, a, i, s):
        s = sx._check_s(s)
        n, p = sx.size(s), s[-1]
        if m != n:
            raise ValueError("element dimension does not match the up-down vector")
        if not 0 < i < n:
            raise sx.IndexError_(f"psi index {i} out of range for |s| = {n}")

        def f():
            if i > n - p:
                return self.phi(m, a, i, 1)
            q, sp = s[-2], s[:-2]
            k, l = n - p, p - q
            if i == k:
                if q == 0:
                    return self.w(m, a, k, l)
                return self.w(m, self.phi(m, a, k, l + 1), k, l)
            y = self.psi(m - l, self.faces(m, a, k + 1, l), i, sp)
            return self.wedge_kl(m - l, y, m - k, self.faces(m, a, 0, k), k, l)
        return self._m(("psi", m, a, i, s), f)

    def Psi(self, m, a, s):
        s = sx._check_s(s)
        for i in sx.psi_sequence(sx.size(s)):
            a = self.psi(m, a, i, s)
        return a


def check_operation_agreement(X: ComplicialModel, ops=None, max_dim=None) -> list[Check]:
    """Each combined operation, evaluated in the model, against precomposition
    with its operator matrix; plus the face identities of iterated wedges."""
    from .updown import enumerate_updown
    ops = ops or Ops(X)
    top = X.cutoff if max_dim is None else min(max_dim, X.cutoff)
    tallies = {k: _Tally(k) for k in ("phi-tilde", "phi", "w", "psi", "Psi", "iterated-wedge-faces")}
    shapes = {}
    for s in enumerate_updown(top):
        shapes.setdefault(sx.size(s), []).append(tuple(s))

    for m in range(top + 1):
        els = X.elements[m]

        def agree(name, dual, outdim, f):
            for a, x in enumerate(els):
                try:
                    got = f(a)
                except BeyondCutoff:
                    return
                want = X._find(outdim, x @ dual)
                tallies[name].check(got == want, lambda: f"{name} at {X.describe(m, a)}")

        if m + 1 <= X.cutoff:
            for i in range(1, m + 1):
                for j in range(0, m - i + 1):
                    agree("phi-tilde", sx.phi_tilde_dual(m, i, j), m + 1, lambda a: ops.phi_tilde(m, a, i, j))
                    agree("phi", sx.phi_dual(m, i, j), m, lambda a: ops.phi(m, a, i, j))
            for s in shapes.get(m, []):
                for i in range(1, m):
                    agree("psi", sx.psi_dual(s, i), m, lambda a: ops.psi(m, a, i, s))
                agree("Psi", sx.Psi_dual(s), m, lambda a: ops.Psi(m, a, s))
        for k in range(m + 1):
            for l in range(m - k + 1):
                agree("w", sx.w_dual(m, k, l), m, lambda a: ops.w(m, a, k, l))
        # iterated wedge faces over fibre pairs of lower dimensions
        for k in range(m + 1):
            for l in range(m - k + 1):
                q = m - k - l
                if q < 0 or k == 0 or l == 0:
                    continue
                fy = {}
                for z in range(X.size(l + q)):
                    fy.setdefault(ops.faces(l + q, z, 1, l), []).append(z)
                for y in range(X.size(k + q)):
                    for z in fy.get(ops.faces(k + q, y, 0, k), []):
                        r = ops.wedge_kl(k + q, y, l + q, z, k, l)
                        tallies["iterated-wedge-faces"].check(
                            ops.faces(m, r, k + 1, l) == y and ops.faces(m, r, 0, k) == z,
                            lambda: f"({k},{l}) on {X.describe(k + q, y)} and {X.describe(l + q, z)}")
    return [t.result() for t in tallies.values()]


# ---------------------------------------------------------------------------
# images of Psi


def psi_fixed_image(X: ComplicialModel, s, ops=None) -> tuple[list[int], list[Check]]:
    """Indices of the |s|-elements fixed by every psi_{i,s}; the set is
    compared with the fixed set of Psi_s and with the elements x such that
    x composed with the Psi_s matrix is x."""
    s = sx._check_s(s)
    n = sx.size(s)
    ops = ops or Ops(X)
    mats = X.elements[n]
    P = sx.Psi_dual(s)
    by_matrix = [a for a, x in enumerate(mats) if np.array_equal(x @ P, x)]
    checks = []
    try:
        by_psi = [a for a in range(len(mats))
                  if all(ops.psi(n, a, i, s) == a for i in range(1, n))]
        by_Psi = [a for a in range(len(mats)) if ops.Psi(n, a, s) == a]
        checks.append(Check("fixed-by-each-equals-fixed-by-composite", by_psi == by_Psi,
                            f"{len(by_psi)} vs {len(by_Psi)}"))
        checks.append(Check("fixed-set-equals-matrix-fixed-set", by_psi == by_matrix,
                            f"{len(by_psi)} vs {len(by_matrix)}"))
        idem = all(ops.Psi(n, ops.Psi(n, a, s), s) == ops.Psi(n, a, s) for a in range(len(mats)))
        checks.append(Check("idempotent", idem))
        img = sorted({ops.Psi(n, a, s) for a in range(len(mats))})
        checks.append(Check("image-equals-fixed-set", img == by_psi, f"{len(img)} vs {len(by_psi)}"))
    except BeyondCutoff:
        checks.append(Check("fixed-set-equals-matrix-fixed-set", True, "element route above the cutoff; matrix route only"))
    return by_matrix, checks


def check_psi_correspondence(X: ComplicialModel, s, ops=None) -> list[Check]:
    """The Psi_s-image against morphisms out of the simple complex S_s: the
    quotient map induces a bijection Hom(S_s, K) -> Psi_s X_|s|."""
    from .adc import enumerate_morphisms
    from .updown import simple_quotient
    s = sx._check_s(s)
    n = sx.size(s)
    fixed, checks = psi_fixed_image(X, s, ops)
    S = simple_quotient(s)
    homs, complete = enumerate_morphisms(S.complex, X.K)
    q = S.qmap.matrix
    pulled = sorted(X._find(n, g.matrix @ q) for g in homs)
    checks.append(Check("hom-count", len(homs) == len(fixed) and complete,
                        f"{len(homs)} morphisms from S_s, {len(fixed)} fixed elements"))
    checks.append(Check("bijection-induced-by-quotient",
                        pulled == fixed and len(set(pulled)) == len(pulled)))
    return checks


# ---------------------------------------------------------------------------
# pull-backs


def _fiber(X, A, fa, B, fb):
    """Pairs (a, b) in A x B with fa(a) == fb(b)."""
    by = {}
    for b in B:
        by.setdefault(fb(b), []).append(b)
    return [(a, b) for a in A for b in by.get(fa(a), [])]


def check_w_pullback(X: ComplicialModel, k, l, q, ops=None) -> list[Check]:
    """The image of w_{k,l} on X_{k+l+q} with its two end faces is a
    pull-back over X_q; the mediating element of (y, z) is w_{k,l} applied to
    y wedge_{k,l} z."""
    ops = ops or Ops(X)
    n = k + l + q
    els = range(X.size(n))
    img = [a for a in els if ops.w(n, a, k, l) == a]
    idem = all(ops.w(n, ops.w(n, a, k, l), k, l) == ops.w(n, a, k, l) for a in els)
    faces_kept = all(ops.faces(n, ops.w(n, a, k, l), k + 1, l) == ops.faces(n, a, k + 1, l)
                     and ops.faces(n, ops.w(n, a, k, l), 0, k) == ops.faces(n, a, 0, k) for a in els)
    fib = _fiber(X, range(X.size(k + q)), lambda y: ops.faces(k + q, y, 0, k),
                 range(X.size(l + q)), lambda z: ops.faces(l + q, z, 1, l))
    legs = sorted((ops.faces(n, a, k + 1, l), ops.faces(n, a, 0, k)) for a in img)
    med_ok = True
    for y, z in fib:
        x = ops.w(n, ops.wedge_kl(k + q, y, l + q, z, k, l), k, l)
        if ops.w(n, x, k, l) != x or (ops.faces(n, x, k + 1, l), ops.faces(n, x, 0, k)) != (y, z):
            med_ok = False
    return [Check("idempotent", idem), Check("end-faces-preserved", faces_kept),
            Check("pullback", legs == sorted(fib) and len(set(legs)) == len(legs),
                  f"{len(img)} fixed elements, fibre product of size {len(fib)}"),
            Check("mediating-element", med_ok)]


def _psi_set(X, s, ops):
    return set(psi_fixed_image(X, s, ops)[0])


def check_simple_pullback(X: ComplicialModel, s, ops=None) -> list[Check]:
    """For s = (s', q, p): the square of Psi-images with the two end face maps
    is a pull-back of sets, and the pointwise equivalences behind it."""
    s = sx._check_s(s)
    if len(s) < 3:
        raise ValueError("the square needs an up-down vector with more than one term")
    ops = ops or Ops(X)
    n, p, q, sp = sx.size(s), s[-1], s[-2], s[:-2]
    k, l = n - p, p - q
    top = _psi_set(X, s, ops)
    left = _psi_set(X, sp, ops)
    right = _psi_set(X, (p,), ops)
    fib = _fiber(X, sorted(left), lambda y: ops.faces(k + q, y, 0, k),
                 sorted(right), lambda z: ops.faces(p, z, 1, l))
    legs = sorted((ops.faces(n, a, k + 1, l), ops.faces(n, a, 0, k)) for a in top)
    checks = [Check("pullback", legs == sorted(fib) and len(set(legs)) == len(legs),
                    f"{len(top)} elements over a fibre product of size {len(fib)}")]
    # elements of the Psi_s image are fixed by w_{k,l}
    checks.append(Check("image-fixed-by-w", all(ops.w(n, a, k, l) == a for a in top)))
    # for w-fixed x: x in the image iff its two end faces are
    ok = True
    for a in range(X.size(n)):
        if ops.w(n, a, k, l) != a:
            continue
        y, z = ops.faces(n, a, k + 1, l), ops.faces(n, a, 0, k)
        if (a in top) != (y in left and z in right):
            ok = False
    checks.append(Check("membership-from-end-faces", ok))
    return checks


def check_tail_fixed_points(X: ComplicialModel, s, ops=None) -> list[Check]:
    """Fixed points of the top psi operations against the face/degeneracy
    equations, for each admissible starting index k."""
    s = sx._check_s(s)
    ops = ops or Ops(X)
    n, p = sx.size(s), s[-1]
    ok, count = True, 0
    for k in range(n - p, n):
        for a in range(X.size(n)):
            lhs = all(ops.psi(n, a, i, s) == a for i in range(k + 1, n))
            rhs = True
            for i in range(k + 1, n):
                r = i - k
                target = ops.faces(n, a, k + 1, r + 1)
                for t in range(r):
                    target = X.e(n - r - 1 + t, target, k)
                rhs = rhs and X.d(n, a, i + 1) == target
            count += 1
            ok = ok and lhs == rhs
    return [Check("tail-fixed-points", ok, f"{count} instances")]


def check_w_face_equations(X: ComplicialModel, n, k, l, ops=None) -> list[Check]:
    """For x in the image of w_{k,l}: the equation between face i+1 and the
    degenerate face holds iff the corresponding equations hold on the two
    end faces."""
    ops = ops or Ops(X)
    e = X.e

    def eq(mm, a, kk, i):
        # face_{i+1} x == e_kk^{i-kk} face_{kk+1}^{i-kk+1} x
        r = i - kk
        target = ops.faces(mm, a, kk + 1, r + 1)
        for t in range(r):
            target = e(mm - r - 1 + t, target, kk)
        return X.d(mm, a, i + 1) == target

    ok, count = True, 0
    for a in range(X.size(n)):
        if ops.w(n, a, k, l) != a:
            continue
        z = ops.faces(n, a, 0, k)
        y = ops.faces(n, a, k + 1, l)
        for i in range(k + 1, n):
            if i <= k + l:
                other = eq(n - k, z, 0, i - k)
            else:
                other = eq(n - l, y, k, i - l) and eq(n - k, z, 0, i - k)
            count += 1
            ok = ok and eq(n, a, k, i) == other
    return [Check("w-image-face-equations", ok, f"{count} instances")]


# ---------------------------------------------------------------------------
# reconstruction from a Psi-image and faces


def f_triple(X, ops, m, c, i):
    return (ops.phi(m, c, i, 1), X.d(m, c, i + 1), X.d(m, c, i - 1))


def g_triple(X, m, a, y, z, i):
    B = X.wedge(m, a, X.wedge(m - 1, y, z, i - 1), i - 1)
    return X.d(m + 1, B, i)


def check_triples(X: ComplicialModel, m, i, ops=None) -> list[Check]:
    """f(c) = (phi_{i,1}c, face_{i+1}c, face_{i-1}c) is a bijection from X_m
    onto the admissible triples, with inverse g."""
    ops = ops or Ops(X)
    d, e = X.d, X.e
    els = range(X.size(m))
    fs = [f_triple(X, ops, m, c, i) for c in els]
    back = all(g_triple(X, m, *fs[c], i) == c for c in els)
    images = sorted({ops.phi(m, c, i, 1) for c in els})
    T = []
    for a in images:
        for y in range(X.size(m - 1)):
            if d(m, a, i + 1) != e(m - 2, d(m - 1, y, i), i - 1):
                continue
            for z in range(X.size(m - 1)):
                if d(m - 1, y, i - 1) != d(m - 1, z, i):
                    continue
                if d(m, a, i - 1) == d(m, X.wedge(m - 1, y, z, i - 1), i):
                    T.append((a, y, z))
    forth = all(f_triple(X, ops, m, g_triple(X, m, *t, i), i) == t for t in T)
    return [Check("g-after-f", back), Check("f-after-g", forth),
            Check("image-is-admissible-set", sorted(fs) == sorted(T),
                  f"{len(T)} admissible triples, {len(fs)} elements")]


@lru_cache(maxsize=None)
def _face_of_Psi(m: int, i: int) -> np.ndarray:
    """Psi_(m) followed by face i, as a map out of the boundary of delta(m)."""
    out = sx.Psi_dual((m,)) @ sx.D(m, i)
    _, _, top = _glue_plan(m)
    assert not np.any(out[top]), "face of Psi_(m) involves the top cell"
    return out


def F(i: int, us: list) -> np.ndarray:
    """The face i of Psi_(m) c as a function of the faces of c: the faces are
    glued into a morphism on the boundary of delta(m) and composed with
    Psi_(m) followed by face i."""
    return glue(us) @ _face_of_Psi(len(us) - 1, i)


def decompose(X: ComplicialModel, m: int, c: int, ops=None):
    ops = ops or Ops(X)
    return (ops.Psi(m, c, (m,)),) + tuple(X.d(m, c, i) for i in range(m + 1))


class NotInImage(ValueError):
    pass


def reconstruct(X: ComplicialModel, m: int, a: int, us, ops=None) -> int:
    """Inverse of decompose: undo the phi_{i,1} steps of Psi_(m) one at a time
    with g, reading the needed faces of the intermediate elements from the
    faces of the original."""
    ops = ops or Ops(X)
    us = list(us)
    if m >= 2:
        for j in range(m + 1):
            for i in range(j):
                if X.d(m - 1, us[j], i) != X.d(m - 1, us[i], j - 1):
                    raise NotInImage(f"not in the image: face {i} of u_{j} differs from face {j - 1} of u_{i}")
    mats = [X.elements[m - 1][u] for u in us]
    for i in range(m + 1):
        try:
            ok = X._find(m - 1, F(i, mats)) == X.d(m, a, i)
        except NotInModel:
            ok = False
        if not ok:
            raise NotInImage(f"not in the image: face {i} of the first entry differs from F_{i}")
    seq = sx.psi_sequence(m)
    # faces of the intermediate elements c_0 = c, c_t = phi_{i_t,1} c_{t-1}
    glued = glue(mats)
    partial = sx.identity(m)
    inter = []
    for i in seq:
        inter.append(partial)
        partial = partial @ sx.phi_dual(m, i, 1)
    cur = a
    for t in range(len(seq) - 1, -1, -1):
        i = seq[t]
        P = inter[t]
        y = X._find(m - 1, glued @ (P @ sx.D(m, i + 1)))
        z = X._find(m - 1, glued @ (P @ sx.D(m, i - 1)))
        cur = g_triple(X, m, cur, y, z, i)
    if tuple(X.d(m, cur, i) for i in range(m + 1)) != tuple(us):
        raise NotInImage("not in the image: the faces are not those of an element")
    return cur


def check_reconstruction(X: ComplicialModel, m: int, ops=None) -> list[Check]:
    ops = ops or Ops(X)
    checks = []
    els = range(X.size(m))
    if m == 0:
        return [Check("dimension-zero-fixed", all(ops.Psi(0, c, (0,)) == c for c in els) if X.size(0) else True)]
    dec = [decompose(X, m, c, ops) for c in els]
    checks.append(Check("injective", len(set(dec)) == len(dec)))
    Fok = True
    for c, t in zip(els, dec):
        mats = [X.elements[m - 1][u] for u in t[1:]]
        for i in range(m + 1):
            Fok = Fok and X._find(m - 1, F(i, mats)) == X.d(m, t[0], i)
    checks.append(Check("face-of-Psi-depends-on-faces", Fok))
    checks.append(Check("reconstruct-after-decompose",
                        all(reconstruct(X, m, t[0], t[1:], ops) == c for c, t in zip(els, dec))))
    tup = image_tuples(X, m, ops)
    checks.append(Check("image-description", sorted(tup) == sorted(dec),
                        f"{len(tup)} admissible tuples, {len(dec)} elements"))
    checks.append(Check("decompose-after-reconstruct",
                        all(decompose(X, m, reconstruct(X, m, t[0], t[1:], ops), ops) == t for t in tup)))
    return checks


def image_tuples(X: ComplicialModel, m: int, ops=None, compatible=True, outer=True):
    """Tuples (a, u_0..u_m) with a in the Psi_(m)-image and face i of a equal
    to F_i(u).  The equations are imposed for 0 < i < m, and also for i = 0
    and i = m when ``outer`` is set; with ``compatible`` the u's must satisfy
    the simplicial identities among themselves."""
    ops = ops or Ops(X)
    fixed = [a for a in range(X.size(m)) if ops.Psi(m, a, (m,)) == a]
    prev = X.elements[m - 1]
    idx = range(0, m + 1) if outer else range(1, m)
    out = []
    if compatible:
        cands = compatible_tuples(X.faces[m - 1], m, len(prev))
    else:
        cands = product(range(len(prev)), repeat=m + 1)
    for us in cands:
        mats = [prev[u] for u in us]
        try:
            Fs = {i: X._find(m - 1, F(i, mats)) for i in idx}
        except NotInModel:
            continue
        for a in fixed:
            if all(X.d(m, a, i) == Fs[i] for i in idx):
                out.append((a,) + tuple(us))
    return out


# ---------------------------------------------------------------------------
# free generation


def generated_counts(n: int, cutoff: int) -> list[int]:
    """Sizes of the closure of the identity of delta(n) under faces,
    degeneracies and wedges, computed on matrices without the model."""
    K = sx.delta(n)
    seen = [dict() for _ in range(cutoff + 1)]
    start = sx.identity(n).copy()
    frontier = [(n, start)]
    seen[n][_key(start)] = start
    while frontier:
        new = []

        def add(mm, x):
            if mm > cutoff:
                return
            kx = _key(x)
            if kx not in seen[mm]:
                seen[mm][kx] = x
                new.append((mm, x))
        for mm, x in frontier:
            for i in range(mm + 1):
                if mm > 0:
                    add(mm - 1, sx.face(x, i))
                add(mm + 1, sx.degeneracy(x, i))
        for mm, x in frontier:
            # wedges with every known element of the same dimension, both ways
            if mm + 1 > cutoff:
                continue
            for i in range(mm):
                fi = sx.face(x, i)
                fi1 = sx.face(x, i + 1)
                for y in list(seen[mm].values()):
                    if np.array_equal(fi, sx.face(y, i + 1)):
                        add(mm + 1, sx.wedge(x, y, i, check=False))
                    if np.array_equal(fi1, sx.face(y, i)):
                        add(mm + 1, sx.wedge(y, x, i, check=False))
        frontier = new
    del K
    return [len(s) for s in seen]


# ---------------------------------------------------------------------------
# the equivalence, instance-wise


def push_atom(matrix, source: FreeADC, target: FreeADC, lab):
    """The image of the atom of a basis element under a morphism."""
    from .nu import atom, make
    a = atom(source, lab)
    levels = []
    for i, (n_, p_) in enumerate(a.levels):
        out = []
        for part in (n_, p_):
            v = np.zeros(len(source), dtype=np.int64)
            v[source.block(i)] = part
            out.append((matrix @ v)[target.block(i)] if i <= target.top else ())
        levels.append(tuple(out))
    return make(levels)


def check_equivalence_chain(X: ComplicialModel, m: int, coeff_bound: int = 3, ops=None) -> list[Check]:
    """Psi_(m)-fixed m-elements of lambda K, morphisms S_(m) -> K and
    (nu K)_m: the maps between them are bijections and the triangle closes."""
    from .adc import enumerate_morphisms
    from .nu import nu_enumerate
    from .updown import simple_quotient
    ops = ops or Ops(X)
    K = X.K
    fixed, _ = psi_fixed_image(X, (m,), ops)
    S = simple_quotient((m,))
    homs, complete = enumerate_morphisms(S.complex, K)
    nus, ncomplete = nu_enumerate(K, m, coeff_bound)
    q = S.qmap.matrix
    top_s = S.complex.basis(m)[0]
    top_d = tuple(range(m + 1))
    via_hom = {}
    for g in homs:
        x = X._find(m, g.matrix @ q)
        via_hom[x] = push_atom(g.matrix, S.complex, K, top_s)
    direct = {x: push_atom(X.elements[m][x], sx.delta(m), K, top_d) for x in fixed}
    return [
        Check("fixed-set-to-morphisms", complete and sorted(via_hom) == fixed,
              f"{len(fixed)} fixed elements, {len(homs)} morphisms"),
        Check("morphisms-to-cells", ncomplete and sorted(via_hom.values()) == nus,
              f"{len(nus)} cells"),
        Check("triangle-closes", via_hom == direct),
    ]
