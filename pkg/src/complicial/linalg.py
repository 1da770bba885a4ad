"""Exact integer linear algebra: echelon lattices, kernels, and bounded
nonnegative solutions of integer systems.

Vectors are handled as sparse dicts ``{index: int}`` with Python integers, so
nothing here can overflow.  Dense matrices come in as numpy arrays and are
multiplied through :func:`imatmul`, which falls back to object arithmetic when
an int64 product could overflow.
"""

from __future__ import annotations

from fractions import Fraction
from math import floor, gcd

import numpy as np

_SAFE = 2 ** 62


def imatmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact integer matrix product."""
    if a.dtype == object or b.dtype == object:
        return np.dot(a.astype(object), b.astype(object))
    if a.size == 0 or b.size == 0:
        return a @ b
    bound = int(np.abs(a).max()) * int(np.abs(b).max()) * max(1, a.shape[-1])
    if bound < _SAFE:
        return a @ b
    return np.dot(a.astype(object), b.astype(object))


def to_sparse(vec) -> dict:
    return {i: int(v) for i, v in enumerate(vec) if v != 0}


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _axpy(v: dict, c: int, w: dict) -> dict:
    """Return v + c*w."""
    out = dict(v)
    for k, x in w.items():
        y = out.get(k, 0) + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def _comb(a: int, v: dict, b: int, w: dict) -> dict:
    out = {}
    for k in v.keys() | w.keys():
        y = a * v.get(k, 0) + b * w.get(k, 0)
        if y:
            out[k] = y
    return out


class Subgroup:
    """A subgroup of Z^n kept as a row echelon basis over the integers.

    Rows are indexed by their pivot (leading) column.  Insertion uses
    unimodular two-row operations, so the rows always form a lattice basis of
    the span of everything inserted so far.
    """

    def __init__(self, n: int, gens=()):
        self.n = n
        self.rows: dict[int, dict] = {}
        for g in gens:
            self.add(g)

    def copy(self) -> "Subgroup":
        out = Subgroup(self.n)
        out.rows = {k: dict(v) for k, v in self.rows.items()}
        return out

    def add(self, v) -> None:
        v = to_sparse(v) if not isinstance(v, dict) else {
            k: x for k, x in v.items() if x}
        while v:
            c = min(v)
            r = self.rows.get(c)
            if r is None:
                if v[c] < 0:
                    v = {k: -x for k, x in v.items()}
                self.rows[c] = v
                return
            a, b = r[c], v[c]
            if b % a == 0:
                v = _axpy(v, -(b // a), r)
                continue
            g, s, t = _xgcd(a, b)
            new = _comb(s, r, t, v)
            v = _comb(a // g, v, -(b // g), r)
            if new[c] < 0:
                new = {k: -x for k, x in new.items()}
            self.rows[c] = new

    def reduce(self, v) -> dict:
        """Reduce v against the pivots; the result is zero iff v is a member."""
        v = to_sparse(v) if not isinstance(v, dict) else {
            k: x for k, x in v.items() if x}
        for c in sorted(self.rows):
            if c in v:
                a = self.rows[c][c]
                q = v[c] // a
                if q:
                    v = _axpy(v, -q, self.rows[c])
        return v

    def contains(self, v) -> bool:
        v = to_sparse(v) if not isinstance(v, dict) else {
            k: x for k, x in v.items() if x}
        while v:
            c = min(v)
            r = self.rows.get(c)
            if r is None or v[c] % r[c]:
                return False
            v = _axpy(v, -(v[c] // r[c]), r)
        return True

    members = contains

    @property
    def rank(self) -> int:
        return len(self.rows)

    def basis(self) -> list[dict]:
        return [self.rows[c] for c in sorted(self.rows)]

    def contains_group(self, other: "Subgroup") -> bool:
        return all(self.contains(r) for r in other.rows.values())

    def equal(self, other: "Subgroup") -> bool:
        return (self.rank == other.rank and self.contains_group(other)
                and other.contains_group(self))

    def __add__(self, other: "Subgroup") -> "Subgroup":
        out = self.copy()
        for r in other.rows.values():
            out.add(r)
        return out

    def intersection(self, other: "Subgroup") -> "Subgroup":
        """Exact intersection via the kernel of (u, v) -> u - v."""
        a, b = self.basis(), other.basis()
        rows = [dict(r) for r in a] + [{k: -x for k, x in r.items()} for r in b]
        ker = integer_kernel(rows, self.n)
        out = Subgroup(self.n)
        for k in ker:
            vec = {}
            for i, c in k.items():
                if i < len(a):
                    vec = _axpy(vec, c, a[i])
            out.add(vec)
        return out

    def dense_basis(self) -> np.ndarray:
        out = np.zeros((self.rank, self.n), dtype=object)
        for i, r in enumerate(self.basis()):
            for k, x in r.items():
                out[i, k] = x
        return out


def integer_kernel(rows: list, ncols: int) -> list[dict]:
    """Basis of {x : sum_i x_i rows[i] = 0} over the integers.

    Reduces the augmented rows (rows[i] | e_i); echelon rows whose pivot lies
    in the identity block form a lattice basis of the kernel.
    """
    sg = Subgroup(ncols + len(rows))
    for i, r in enumerate(rows):
        if not isinstance(r, dict):
            r = to_sparse(r)
        v = dict(r)
        v[ncols + i] = 1
        sg.add(v)
    out = []
    for c in sorted(sg.rows):
        if c >= ncols:
            out.append({k - ncols: x for k, x in sg.rows[c].items()})
    return out


def column_kernel(mat: np.ndarray) -> list[dict]:
    """Basis of {c : mat @ c = 0}."""
    return integer_kernel([to_sparse(mat[:, j]) for j in range(mat.shape[1])],
                          mat.shape[0])


# ---------------------------------------------------------------------------
# nonnegative integer solutions


def _rationalize(x: np.ndarray, den: int) -> list[Fraction]:
    return [Fraction(float(v)).limit_denominator(den) for v in x]


def _certificate(a: np.ndarray, t=None):
    """Search for rational g with a.T @ g >= 1 exactly.

    Then every nonnegative solution c of a @ c = t has sum(c) <= g . t.
    Returns a list of Fractions or None.
    """
    from scipy.optimize import linprog

    r, n = a.shape
    if n == 0:
        return [Fraction(0)] * r
    if r == 0:
        return None
    af = a.astype(float)
    obj = np.asarray(t, dtype=float) if t is not None else np.abs(af).sum(axis=1) + 1.0
    res = linprog(obj, A_ub=-af.T, b_ub=-np.ones(n), bounds=[(None, None)] * r,
                  method="highs")
    if res.status == 3 and t is not None:
        res = linprog(np.abs(af).sum(axis=1) + 1.0, A_ub=-af.T, b_ub=-np.ones(n),
                      bounds=[(-1e6, 1e6)] * r, method="highs")
    if res.status != 0:
        return None
    for den in (1, 2, 6, 12, 60, 840, 10 ** 6):
        g = _rationalize(res.x, den)
        if all(sum(int(a[i, j]) * g[i] for i in range(r)) >= 1 for j in range(n)):
            return g
    return None


def _farkas_infeasible(a: np.ndarray, t) -> bool:
    """Exact proof that a @ c = t has no rational solution c >= 0."""
    from scipy.optimize import linprog

    r, n = a.shape
    if r == 0:
        return False
    af = a.astype(float)
    res = linprog(np.asarray(t, dtype=float), A_ub=-af.T if n else None,
                  b_ub=np.zeros(n) if n else None, bounds=[(-1, 1)] * r,
                  method="highs")
    if res.status != 0 or res.fun > -1e-9:
        return False
    for den in (1, 2, 6, 12, 60, 840, 10 ** 6):
        y = _rationalize(res.x, den)
        ok = all(sum(int(a[i, j]) * y[i] for i in range(r)) >= 0 for j in range(n))
        if ok and sum(int(t[i]) * y[i] for i in range(r)) < 0:
            return True
    return False


class NonnegSolver:
    """All nonnegative integer solutions of a @ c = t for a fixed matrix a.

    The search is a depth-first enumeration over the columns of ``a``,
    pruned row by row (sign patterns of the remaining columns) and by a
    dual certificate g with a.T @ g >= 1, which bounds sum(c) by g . t.
    Results are cached per target.
    """

    def __init__(self, a: np.ndarray):
        self.a = np.asarray(a, dtype=np.int64)
        self.r, self.n = self.a.shape
        self._certs: list[list[Fraction]] = []
        self._no_cert = False
        self._cache: dict = {}
        cols = self.a
        # suffix sign information for row pruning
        self._pos = np.zeros((self.n + 1, self.r), dtype=bool)
        self._neg = np.zeros((self.n + 1, self.r), dtype=bool)
        for j in range(self.n - 1, -1, -1):
            self._pos[j] = self._pos[j + 1] | (cols[:, j] > 0)
            self._neg[j] = self._neg[j + 1] | (cols[:, j] < 0)
        self._cols = [self.a[:, j].tolist() for j in range(self.n)]

    def _bound(self, t):
        """Certified bound on sum(c), or None."""
        best = None
        for g in self._certs:
            b = floor(sum(g[i] * int(t[i]) for i in range(self.r)))
            best = b if best is None else min(best, b)
        return best

    def _scaled(self):
        g = self._certs[0]
        den = 1
        for x in g:
            den = den * x.denominator // gcd(den, x.denominator)
        return [int(x * den) for x in g], den

    def solve(self, t, cap: int):
        """Return (sorted list of solution tuples, complete flag).

        ``complete`` is True when the returned list provably contains every
        nonnegative solution with all coefficients at most ``cap``, and no
        solution of the system exceeds ``cap``.
        """
        t = tuple(int(x) for x in t)
        key = (t, cap)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        bound = self._bound(t)
        if (bound is None or bound > cap) and not self._no_cert:
            g = _certificate(self.a, t)
            if g is None:
                if not self._certs:
                    self._no_cert = True
            else:
                self._certs.append(g)
                bound = self._bound(t)
        if bound is None:
            if _farkas_infeasible(self.a, t):
                out = ([], True)
            else:
                sols = self._search(t, cap)
                out = (sols, False)
        elif bound < 0:
            out = ([], True)
        else:
            sols = self._search(t, bound)
            big = [s for s in sols if s and max(s) > cap]
            sols = [s for s in sols if not s or max(s) <= cap]
            out = (sols, not big)
        self._cache[key] = out
        return out

    def _search(self, t, cap: int) -> list[tuple]:
        n, r = self.n, self.r
        cols = self._cols
        pos, neg = self._pos, self._neg
        if self._certs:
            gs, den = self._scaled()
            gcol = [sum(gs[i] * cols[j][i] for i in range(r)) for j in range(n)]
        else:
            gs = None
        out = []
        c = [0] * n
        res = list(t)

        def feasible(j):
            for i in range(r):
                x = res[i]
                if x > 0 and not pos[j][i]:
                    return False
                if x < 0 and not neg[j][i]:
                    return False
            return True

        def rec(j, gval):
            if j == n:
                if not any(res):
                    out.append(tuple(c))
                return
            if not feasible(j):
                return
            hi = cap
            if gs is not None:
                # remaining sum(c) * den <= gval
                if gval < 0:
                    return
                hi = min(hi, gval // den)
            col = cols[j]
            k = 0
            while k <= hi:
                c[j] = k
                rec(j + 1, gval - k * gcol[j] if gs is not None else 0)
                for i in range(r):
                    res[i] -= col[i]
                k += 1
            for i in range(r):
                res[i] += col[i] * k
            c[j] = 0

        g0 = sum(gs[i] * t[i] for i in range(r)) if gs is not None else 0
        rec(0, g0)
        out.sort()
        return out
