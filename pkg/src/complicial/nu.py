"""The omega-category nu K of a free augmented directed complex.

Elements are double sequences (x_0^-, x_0^+ | x_1^-, x_1^+ | ...) of
nonnegative chains.  Identities are literal inclusions, so an element is
stored with its trailing zero levels removed and belongs to (nu K)_p for every
p at least its own dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .adc import FreeADC, boundary_parts, solver_cache
from .reports import Check


@dataclass(frozen=True, order=True)
class NuElement:
    levels: tuple  # ((neg, pos), ...) with neg/pos tuples over the basis block

    @property
    def dim(self) -> int:
        return len(self.levels) - 1

    def level(self, i: int, K: FreeADC):
        if i < len(self.levels):
            return self.levels[i]
        z = (0,) * K.rank(i)
        return (z, z)

    def chains(self, K: FreeADC) -> list:
        """Levels as pairs of label -> coefficient dicts."""
        out = []
        for i, (n, p) in enumerate(self.levels):
            labs = K.basis(i)
            out.append(({labs[j]: c for j, c in enumerate(n) if c},
                        {labs[j]: c for j, c in enumerate(p) if c}))
        return out

    def __repr__(self):
        return f"NuElement{self.levels}"


class NotComposable(ValueError):
    pass


def _trim(levels) -> tuple:
    levels = list(levels)
    while len(levels) > 1 and not any(levels[-1][0]) and not any(levels[-1][1]):
        levels.pop()
    return tuple(levels)


def make(levels) -> NuElement:
    return NuElement(_trim(tuple((tuple(int(v) for v in n), tuple(int(v) for v in p))
                                 for n, p in levels)))


def is_valid(x: NuElement, K: FreeADC) -> bool:
    L = x.levels
    if not L:
        return False
    for i, (n, p) in enumerate(L):
        if len(n) != K.rank(i) or len(p) != K.rank(i):
            return False
        if min(n + p, default=0) < 0:
            return False
    eps = K.eps[K.block(0)]
    if int(eps @ np.array(L[0][0])) != 1 or int(eps @ np.array(L[0][1])) != 1:
        return False
    for i in range(len(L)):
        n, p = L[i]
        if i + 1 < len(L):
            bd = K.boundary_block(i + 1)
            diff = np.array(p) - np.array(n)
            if not (np.array_equal(bd @ np.array(L[i + 1][0]), diff)
                    and np.array_equal(bd @ np.array(L[i + 1][1]), diff)):
                return False
        elif n != p:
            return False
    return True


def d(alpha: int, q: int, x: NuElement, K: FreeADC | None = None) -> NuElement:
    """Source (alpha = -1) or target (alpha = +1) in dimension q."""
    if q < 0:
        raise ValueError("negative dimension")
    if q >= len(x.levels):
        return x
    c = x.levels[q][1 if alpha > 0 else 0]
    return NuElement(_trim(x.levels[:q] + ((c, c),)))


def _sub(a, b):
    return tuple(u - v for u, v in zip(a, b))


def _add(a, b):
    return tuple(u + v for u, v in zip(a, b))


def compose(x: NuElement, y: NuElement, q: int, K: FreeADC) -> NuElement:
    """x #_q y = x - i z + y where z = d_q^+ x = d_q^- y."""
    z = d(1, q, x)
    if z != d(-1, q, y):
        raise NotComposable(f"not composable in dimension {q}")
    top = max(len(x.levels), len(y.levels), q + 1)
    out = []
    for i in range(top):
        xn, xp = x.level(i, K)
        yn, yp = y.level(i, K)
        zn, zp = z.level(i, K)
        out.append((_add(_sub(xn, zn), yn), _add(_sub(xp, zp), yp)))
    return NuElement(_trim(tuple(out)))


def atom(K: FreeADC, a) -> NuElement:
    p = K.dim_of(a)
    levels = [None] * (p + 1)
    neg = pos = {a: 1}
    levels[p] = (K.vec(neg)[K.block(p)], K.vec(pos)[K.block(p)])
    for i in range(p - 1, -1, -1):
        neg = boundary_parts(neg, K)[1]
        pos = boundary_parts(pos, K)[0]
        levels[i] = (K.vec(neg)[K.block(i)], K.vec(pos)[K.block(i)])
    x = make(levels)
    if not is_valid(x, K):
        raise ValueError(f"{a!r} does not give an atom: the complex is not totally ordered there")
    return x


def nu_enumerate(K: FreeADC, p: int, coeff_bound: int = 3, cache=None):
    """All elements of (nu K)_p with coefficients at most coeff_bound.

    Returns (sorted list, complete).  ``complete`` means that no solution of
    any level system was cut off by the bound."""
    cache = cache or solver_cache(K)
    out = []
    complete = True
    top = min(p, K.top)

    def sols(q, t):
        nonlocal complete
        got, ok = cache.solver(q).solve(t, coeff_bound)
        complete = complete and ok
        return got

    def rec(levels):
        i = len(levels)
        n, pp = levels[-1]
        if n == pp:
            out.append(make(levels))
        if i > top:
            return
        t = _sub(pp, n)
        cands = sols(i, t)
        if not cands:
            return
        # level i pairs; the pair must be equal at the top, and a zero pair
        # only continues the sequence if the lower level is already equal
        for a, b in product(cands, repeat=2):
            if not any(a) and not any(b):
                continue
            if i == top and a != b:
                continue
            rec(levels + [(a, b)])

    for a, b in product(sols(0, (1,)), repeat=2):
        rec([(a, b)])
    return sorted(set(out)), complete


# ---------------------------------------------------------------------------
# axiom checking


@dataclass
class Truncation:
    K: FreeADC
    top: int
    elements: dict  # p -> sorted list of elements of (nu K)_p
    complete: bool
    coeff_bound: int = 3


def truncation(K: FreeADC, top: int, coeff_bound: int = 3) -> Truncation:
    cache = solver_cache(K)
    els, ok = {}, True
    for p in range(top + 1):
        e, c = nu_enumerate(K, p, coeff_bound, cache)
        els[p] = e
        ok = ok and c
    return Truncation(K, top, els, ok, coeff_bound)


def _index(xs, alpha, q):
    out = {}
    for x in xs:
        out.setdefault(d(alpha, q, x), []).append(x)
    return out


def check_omega_axioms(T: Truncation, max_quadruples: int | None = None) -> list[Check]:
    """Axioms (3)-(6) over every applicable tuple of enumerated elements.

    Composites are always computed from the formula; they are also required
    to lie in the enumerated set of the same dimension, so closure is part of
    the check."""
    K = T.K
    fails = {k: [] for k in ("identities", "units", "source-target", "closure",
                             "composite-faces", "associativity", "interchange",
                             "interchange-hypotheses")}
    counts = {k: 0 for k in fails}

    def fail(key, msg):
        if len(fails[key]) < 3:
            fails[key].append(msg)

    for p in range(T.top + 1):
        Tp = T.elements[p]
        members = set(Tp)
        for x in Tp:
            if x.dim < p:
                continue  # lower elements are identities; covered in their own dimension
            for n in range(p + 1, T.top + 1):
                counts["identities"] += 1
                if x not in set(T.elements[n]) or d(-1, p, x) != x or d(1, p, x) != x:
                    fail("identities", f"{x!r} in {n}")
            for m in range(p):
                counts["units"] += 1
                left = compose(d(-1, m, x), x, m, K)
                right = compose(x, d(1, m, x), m, K)
                if left != x or right != x:
                    fail("units", f"{x!r} at {m}")
                for n in range(m + 1, p):
                    counts["source-target"] += 1
                    for a in (-1, 1):
                        if not (d(a, m, d(-1, n, x)) == d(a, m, d(1, n, x)) == d(a, m, x)):
                            fail("source-target", f"{x!r} at {m},{n}")
        for q in range(p):
            by_src = _index(Tp, -1, q)
            for x in Tp:
                for y in by_src.get(d(1, q, x), []):
                    if max(x.dim, y.dim) < p:
                        continue
                    xy = compose(x, y, q, K)
                    counts["closure"] += 1
                    if not is_valid(xy, K) or xy not in members and _within(xy, T):
                        fail("closure", f"{x!r} #{q} {y!r}")
                    counts["composite-faces"] += 1
                    ok = d(-1, q, xy) == d(-1, q, x) and d(1, q, xy) == d(1, q, y)
                    for m in range(q + 1, p):
                        for a in (-1, 1):
                            ok = ok and d(a, m, xy) == compose(d(a, m, x), d(a, m, y), q, K)
                    if not ok:
                        fail("composite-faces", f"{x!r} #{q} {y!r}")
                    for z in by_src.get(d(1, q, y), []):
                        counts["associativity"] += 1
                        if compose(xy, z, q, K) != compose(x, compose(y, z, q, K), q, K):
                            fail("associativity", f"{x!r},{y!r},{z!r} at {q}")
        # interchange
        for q in range(1, p):
            by_src_q = _index(Tp, -1, q)
            pairs = [(x, y) for x in Tp for y in by_src_q.get(d(1, q, x), [])]
            for m in range(q):
                by_m = {}
                for z, w in pairs:
                    by_m.setdefault(d(-1, m, z), []).append((z, w))
                done = 0
                for x, y in pairs:
                    for z, w in by_m.get(d(1, m, y), []):
                        if max_quadruples is not None and done >= max_quadruples:
                            break
                        done += 1
                        counts["interchange"] += 1
                        alt = d(1, m, x) == d(-1, m, z) and d(1, m, y) == d(-1, m, w)
                        if not alt:
                            fail("interchange-hypotheses", f"{x!r},{y!r},{z!r},{w!r}")
                        counts["interchange-hypotheses"] += 1
                        lhs = compose(compose(x, y, q, K), compose(z, w, q, K), m, K)
                        rhs = compose(compose(x, z, m, K), compose(y, w, m, K), q, K)
                        if lhs != rhs:
                            fail("interchange", f"{x!r},{y!r},{z!r},{w!r} at {q},{m}")
    return [Check(k, not fails[k], "; ".join(fails[k]) if fails[k] else f"{counts[k]} instances")
            for k in fails]


def _within(x: NuElement, T: Truncation) -> bool:
    """Whether x has all coefficients inside the enumeration bound, so that it
    must appear in the enumerated set."""
    return max(max(n + p) for n, p in x.levels) <= T.coeff_bound


def generated_closure(K: FreeADC, gens, top: int, limit: int = 100000) -> set:
    """Closure of a set of elements under sources, targets and composition,
    restricted to dimension at most top."""
    seen = set(gens)
    frontier = list(gens)
    while frontier:
        new = []
        for x in frontier:
            for q in range(x.dim):
                for a in (-1, 1):
                    y = d(a, q, x)
                    if y not in seen:
                        seen.add(y)
                        new.append(y)
        cur = sorted(seen)
        for x in cur:
            for q in range(top):
                tx = d(1, q, x)
                for y in cur:
                    if d(-1, q, y) == tx and max(x.dim, y.dim) > q:
                        z = compose(x, y, q, K)
                        if z not in seen and z.dim <= top:
                            seen.add(z)
                            new.append(z)
        if len(seen) > limit:
            raise RuntimeError("closure exceeded the size limit")
        frontier = new
    return seen
