"""Free augmented directed complexes.

A complex stores one global basis ordered by dimension, a dense integer
boundary matrix and an augmentation vector.  Morphisms are dense integer
matrices (target basis x source basis) which are block diagonal by dimension.
Labels must be hashable and unique across the whole complex.
"""

from __future__ import annotations

from collections import namedtuple
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from .linalg import NonnegSolver, Subgroup, column_kernel, imatmul


class StructuralError(ValueError):
    pass


class NotFreeQuotient(StructuralError):
    pass


BasisElement = namedtuple("BasisElement", "dim label")


def _label_key(label):
    return repr(label)


class Chain(Mapping):
    """A finite integer combination of basis labels with no zero entries."""

    __slots__ = ("_d", "_h")

    def __init__(self, data=None):
        if data is None:
            data = {}
        elif not isinstance(data, Mapping):
            data = dict(data)
        self._d = {k: int(v) for k, v in data.items() if v}
        self._h = None

    @classmethod
    def basis(cls, label, coef=1):
        return cls({label: coef})

    def __getitem__(self, k):
        return self._d.get(k, 0)

    def __iter__(self):
        return iter(sorted(self._d, key=_label_key))

    def __len__(self):
        return len(self._d)

    def __contains__(self, k):
        return k in self._d

    def __eq__(self, other):
        if isinstance(other, Chain):
            return self._d == other._d
        if isinstance(other, Mapping):
            return self._d == Chain(other)._d
        if other == 0:
            return not self._d
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self._d.items()))
        return self._h

    def __add__(self, other):
        out = dict(self._d)
        for k, v in Chain(other)._d.items():
            out[k] = out.get(k, 0) + v
        return Chain(out)

    def __neg__(self):
        return Chain({k: -v for k, v in self._d.items()})

    def __sub__(self, other):
        return self + (-Chain(other))

    def __mul__(self, c: int):
        return Chain({k: c * v for k, v in self._d.items()})

    __rmul__ = __mul__

    def positive(self) -> "Chain":
        return Chain({k: v for k, v in self._d.items() if v > 0})

    def negative(self) -> "Chain":
        return Chain({k: -v for k, v in self._d.items() if v < 0})

    def is_nonneg(self) -> bool:
        return all(v > 0 for v in self._d.values())

    def __repr__(self):
        if not self._d:
            return "0"
        parts = []
        for k in self:
            v = self._d[k]
            parts.append(f"{v:+d}*{k!r}")
        return " ".join(parts)


class FreeADC:
    """A free augmented directed complex with a finite graded basis.

    ``cells`` is a list of ``(dim, label)`` pairs; ``boundary`` maps labels
    to mappings label -> coefficient; ``augmentation`` maps 0-dimensional
    labels to integers (missing labels count as 0).
    """

    def __init__(self, cells, boundary=None, augmentation=None, name=None,
                 check=True):
        cells = [(int(d), lab) for d, lab in cells]
        cells.sort(key=lambda c: c[0])  # stable: keeps the given order inside a dim
        self.name = name
        self.labels = [lab for _, lab in cells]
        self.dims = np.array([d for d, _ in cells], dtype=np.int64)
        self.index = {}
        for i, lab in enumerate(self.labels):
            if lab in self.index:
                raise StructuralError(f"duplicate label {lab!r}")
            self.index[lab] = i
        self.top = int(self.dims.max()) if len(cells) else -1
        self.offsets = [0] * (self.top + 2)
        for q in range(self.top + 1):
            self.offsets[q + 1] = self.offsets[q] + int((self.dims == q).sum())
        n = len(cells)
        self.dmat = np.zeros((n, n), dtype=np.int64)
        self.eps = np.zeros(n, dtype=np.int64)
        boundary = boundary or {}
        augmentation = augmentation or {}
        for lab, bd in boundary.items():
            j = self._idx(lab)
            for k, v in Chain(bd).items():
                i = self._idx(k)
                if self.dims[i] != self.dims[j] - 1:
                    raise StructuralError(f"boundary of {lab!r} has wrong dimension")
                self.dmat[i, j] = v
        for lab, v in augmentation.items():
            j = self._idx(lab)
            if v and self.dims[j] != 0:
                raise StructuralError(f"augmentation on positive-dimensional {lab!r}")
            self.eps[j] = v
        if check:
            if np.any(imatmul(self.dmat, self.dmat)):
                raise StructuralError("boundary does not square to zero")
            if np.any(imatmul(self.eps[None, :], self.dmat)):
                raise StructuralError("augmentation does not vanish on boundaries")

    @classmethod
    def from_matrices(cls, labels, dims, dmat, eps, name=None):
        out = cls.__new__(cls)
        out.name = name
        out.labels = list(labels)
        out.dims = np.asarray(dims, dtype=np.int64)
        out.index = {lab: i for i, lab in enumerate(out.labels)}
        out.top = int(out.dims.max()) if len(out.labels) else -1
        out.offsets = [0] * (out.top + 2)
        for q in range(out.top + 1):
            out.offsets[q + 1] = out.offsets[q] + int((out.dims == q).sum())
        out.dmat = np.asarray(dmat)
        out.eps = np.asarray(eps)
        return out

    def _idx(self, lab):
        try:
            return self.index[lab]
        except KeyError:
            raise StructuralError(f"unknown basis element {lab!r}") from None

    def __len__(self):
        return len(self.labels)

    @property
    def size(self) -> int:
        return len(self.labels)

    def dim_of(self, lab) -> int:
        return int(self.dims[self._idx(lab)])

    def block(self, q: int) -> slice:
        if q < 0 or q > self.top:
            return slice(0, 0)
        return slice(self.offsets[q], self.offsets[q + 1])

    def basis(self, q: int | None = None) -> list:
        if q is None:
            return list(self.labels)
        return self.labels[self.block(q)]

    def elements(self) -> list[BasisElement]:
        return [BasisElement(int(d), lab) for d, lab in zip(self.dims, self.labels)]

    def rank(self, q: int) -> int:
        s = self.block(q)
        return s.stop - s.start

    def boundary_block(self, q: int) -> np.ndarray:
        """Boundary matrix from dimension q to q-1."""
        return self.dmat[self.block(q - 1), self.block(q)]

    # chains <-> vectors

    def vec(self, c) -> np.ndarray:
        out = np.zeros(len(self.labels), dtype=np.int64)
        for k, v in Chain(c).items():
            out[self._idx(k)] += v
        return out

    def chain(self, v) -> Chain:
        return Chain({self.labels[i]: int(v[i]) for i in np.flatnonzero(v)})

    def boundary_of(self, lab) -> Chain:
        return self.chain(self.dmat[:, self._idx(lab)])

    def signature(self) -> tuple:
        return (tuple(self.labels), self.dmat.tobytes(), self.eps.tobytes())

    def same_as(self, other: "FreeADC") -> bool:
        return (self is other or (self.labels == other.labels
                and np.array_equal(self.dmat, other.dmat)
                and np.array_equal(self.eps, other.eps)))

    def __repr__(self):
        ranks = [self.rank(q) for q in range(self.top + 1)]
        return f"FreeADC({self.name or ''} ranks={ranks})"


def zero_complex() -> FreeADC:
    """The zero complex, an identity for joins."""
    return FreeADC([], name="zero")


def _homogeneous_dim(c: Chain, K: FreeADC):
    dims = {K.dim_of(k) for k in c}
    if len(dims) > 1:
        raise StructuralError("chain is not homogeneous")
    return dims.pop() if dims else None


def boundary(c, K: FreeADC) -> Chain:
    c = Chain(c)
    _homogeneous_dim(c, K)
    return K.chain(imatmul(K.dmat, K.vec(c)))


def boundary_parts(c, K: FreeADC) -> tuple[Chain, Chain]:
    """(positive part, negative part) of the boundary of c."""
    b = boundary(c, K)
    return b.positive(), b.negative()


def augmentation(c, K: FreeADC) -> int:
    return int(K.eps @ K.vec(c))


def iterated_parts(c, K: FreeADC, sign: int, times: int) -> Chain:
    """Apply the positive (sign=+1) or negative (-1) boundary part repeatedly."""
    c = Chain(c)
    for _ in range(times):
        pos, neg = boundary_parts(c, K)
        c = pos if sign > 0 else neg
    return c


# ---------------------------------------------------------------------------
# morphisms


class ChainMorphism:
    """Degree preserving map given by a dense matrix (target x source)."""

    __slots__ = ("source", "target", "matrix", "name")

    def __init__(self, source: FreeADC, target: FreeADC, matrix, name=None):
        m = np.asarray(matrix)
        if m.shape != (len(target), len(source)):
            raise StructuralError(
                f"matrix shape {m.shape} does not match {len(target)}x{len(source)}")
        self.source, self.target, self.matrix, self.name = source, target, m, name

    @classmethod
    def from_images(cls, source, target, images: Mapping, name=None):
        m = np.zeros((len(target), len(source)), dtype=np.int64)
        for lab, img in images.items():
            m[:, source._idx(lab)] = target.vec(img)
        return cls(source, target, m, name)

    @classmethod
    def identity(cls, K: FreeADC):
        return cls(K, K, np.eye(len(K), dtype=np.int64), "id")

    def image(self, lab) -> Chain:
        return self.target.chain(self.matrix[:, self.source._idx(lab)])

    def images(self) -> dict:
        return {lab: self.image(lab) for lab in self.source.labels}

    def __call__(self, c) -> Chain:
        return self.target.chain(imatmul(self.matrix, self.source.vec(c)))

    def __matmul__(self, other: "ChainMorphism") -> "ChainMorphism":
        return compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, ChainMorphism):
            return NotImplemented
        return (self.source.same_as(other.source) and self.target.same_as(other.target)
                and np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def key(self) -> bytes:
        return np.ascontiguousarray(self.matrix, dtype=np.int64).tobytes()

    def __repr__(self):
        return f"ChainMorphism({self.name or ''} {self.source!r}->{self.target!r})"


def compose(f: ChainMorphism, g: ChainMorphism, check=False) -> ChainMorphism:
    """f after g."""
    if not g.target.same_as(f.source):
        raise StructuralError("cannot compose: target of g is not source of f")
    out = ChainMorphism(g.source, f.target, imatmul(f.matrix, g.matrix))
    if check and not check_morphism(out).valid:
        raise StructuralError("composite is not a morphism")
    return out


@dataclass
class MorphismCheck:
    valid: bool
    failures: list = field(default_factory=list)  # (label, reason)


def check_morphism(f, K: FreeADC | None = None, L: FreeADC | None = None,
                   stop_early=False) -> MorphismCheck:
    """Check chain map, augmentation and nonnegativity conditions per basis element.

    ``f`` may be a ChainMorphism or a mapping from labels of K to chains of L.
    """
    if isinstance(f, ChainMorphism):
        K, L, m = f.source, f.target, f.matrix
    else:
        m = ChainMorphism.from_images(K, L, f).matrix
        missing = [lab for lab in K.labels if lab not in f]
        if missing:
            return MorphismCheck(False, [(lab, "no image") for lab in missing])
    fails = []
    bd = imatmul(L.dmat, m) - imatmul(m, K.dmat)
    aug = imatmul(L.eps[None, :], m)[0] - K.eps
    for j, lab in enumerate(K.labels):
        col = m[:, j]
        nz = np.flatnonzero(col)
        if len(nz) and np.any(L.dims[nz] != K.dims[j]):
            fails.append((lab, "image has wrong dimension"))
        if np.any(bd[:, j]):
            fails.append((lab, "does not commute with boundary"))
        if aug[j]:
            fails.append((lab, "does not preserve augmentation"))
        if np.any(col < 0):
            fails.append((lab, "image is not in the prescribed submonoid"))
        if fails and stop_early:
            break
    return MorphismCheck(not fails, fails)


def is_morphism(m: np.ndarray, K: FreeADC, L: FreeADC) -> bool:
    if np.any(m < 0):
        return False
    if np.any(imatmul(L.dmat, m) != imatmul(m, K.dmat)):
        return False
    if np.any(imatmul(L.eps[None, :], m)[0] != K.eps):
        return False
    nz = np.nonzero(m)
    return bool(np.all(L.dims[nz[0]] == K.dims[nz[1]]))


def check_isomorphism(f: ChainMorphism) -> bool:
    """A morphism is an isomorphism of free complexes iff it maps basis
    elements bijectively onto basis elements with coefficient 1."""
    m = f.matrix
    if m.shape[0] != m.shape[1] or not is_morphism(m, f.source, f.target):
        return False
    return bool(np.all((m == 0) | (m == 1)) and np.all(m.sum(axis=0) == 1)
                and np.all(m.sum(axis=1) == 1))


def map_labels(K: FreeADC, L: FreeADC, mapping: Mapping) -> ChainMorphism:
    """Morphism sending each basis label of K to a single basis label of L."""
    m = np.zeros((len(L), len(K)), dtype=np.int64)
    for lab, tgt in mapping.items():
        m[L._idx(tgt), K._idx(lab)] = 1
    return ChainMorphism(K, L, m)


# ---------------------------------------------------------------------------
# joins


def join(K: FreeADC, L: FreeADC, name=None) -> FreeADC:
    """The join K*L with labels ('L', x), ('R', y) and ('T', x, y)."""
    cells = []
    for lab, d in zip(K.labels, K.dims):
        cells.append((d, ("L", lab)))
    for lab, d in zip(L.labels, L.dims):
        cells.append((d, ("R", lab)))
    for x, i in zip(K.labels, K.dims):
        for y, j in zip(L.labels, L.dims):
            cells.append((i + j + 1, ("T", x, y)))
    bd, aug = {}, {}
    for x in K.labels:
        bd[("L", x)] = {("L", k): v for k, v in K.boundary_of(x).items()}
        e = int(K.eps[K.index[x]])
        if e:
            aug[("L", x)] = e
    for y in L.labels:
        bd[("R", y)] = {("R", k): v for k, v in L.boundary_of(y).items()}
        e = int(L.eps[L.index[y]])
        if e:
            aug[("R", y)] = e
    for x, i in zip(K.labels, K.dims):
        ex = int(K.eps[K.index[x]]) if i == 0 else 0
        dx = K.boundary_of(x)
        for y, j in zip(L.labels, L.dims):
            ey = int(L.eps[L.index[y]]) if j == 0 else 0
            dy = L.boundary_of(y)
            c = Chain()
            if i == 0:
                c = c + Chain({("R", y): ex})
            else:
                c = c + Chain({("T", k, y): v for k, v in dx.items()})
            if j == 0:
                c = c - Chain({("L", x): (-1) ** i * ey if i else ey})
            else:
                c = c - Chain({("T", x, k): (-1) ** i * v for k, v in dy.items()})
            bd[("T", x, y)] = c
    return FreeADC(cells, bd, aug, name=name)


def join_order(K: FreeADC, L: FreeADC, order_k=None, order_l=None) -> list:
    """Basis order of K*L obtained by inserting the tensor elements.

    Tensors a(x)b go before a in the order of b when a is odd-dimensional,
    and after a in reverse order of b when a is even-dimensional.
    """
    order_k = list(K.labels) if order_k is None else list(order_k)
    order_l = list(L.labels) if order_l is None else list(order_l)
    out = []
    for a in order_k:
        tens = [("T", a, b) for b in order_l]
        if K.dim_of(a) % 2:
            out.extend(tens)
            out.append(("L", a))
        else:
            out.append(("L", a))
            out.extend(reversed(tens))
    out.extend(("R", b) for b in order_l)
    return out


def join_morphism(f: ChainMorphism, g: ChainMorphism) -> ChainMorphism:
    """f*g between joins, acting bilinearly on tensor elements."""
    src = join(f.source, g.source)
    tgt = join(f.target, g.target)
    m = np.zeros((len(tgt), len(src)), dtype=np.int64)
    for x in f.source.labels:
        for k, v in f.image(x).items():
            m[tgt.index[("L", k)], src.index[("L", x)]] = v
    for y in g.source.labels:
        for k, v in g.image(y).items():
            m[tgt.index[("R", k)], src.index[("R", y)]] = v
    for x in f.source.labels:
        fx = f.image(x)
        for y in g.source.labels:
            gy = g.image(y)
            col = src.index[("T", x, y)]
            for k, v in fx.items():
                for l, w in gy.items():
                    m[tgt.index[("T", k, l)], col] += v * w
    return ChainMorphism(src, tgt, m)


def iterated_join(parts: list[FreeADC], orders=None) -> tuple[FreeADC, list]:
    """Left-associated join of several complexes with its insertion order.
    ``orders`` gives a basis order for each part (default: stored order)."""
    orders = orders or [list(P.labels) for P in parts]
    acc, order = None, None
    for P, o in zip(parts, orders):
        if acc is None:
            acc, order = P, list(o)
            continue
        order = join_order(acc, P, order, o)
        acc = join(acc, P)
    if acc is None:
        acc, order = zero_complex(), []
    return acc, order


def join_vertex_tuple(lab, sizes):
    """Vertex tuple of a basis element of a left-associated join of
    simplexes with the given numbers of vertices."""
    t = len(sizes) - 1
    if t == 0:
        return tuple(lab)
    off = sum(sizes[:t])
    if lab[0] == "L":
        return join_vertex_tuple(lab[1], sizes[:t])
    if lab[0] == "R":
        return tuple(v + off for v in lab[1])
    return join_vertex_tuple(lab[1], sizes[:t]) + tuple(v + off for v in lab[2])


# ---------------------------------------------------------------------------
# total orders


@dataclass
class OrderCheck:
    valid: bool
    failures: list = field(default_factory=list)


def check_total_order(K: FreeADC, order) -> OrderCheck:
    """Check that ``order`` lists the basis so that every element sits after
    its negative boundary terms and before its positive ones, and that the
    iterated boundary parts have augmentation 1."""
    order = list(order)
    fails = []
    if sorted(map(repr, order)) != sorted(map(repr, K.labels)) or len(set(order)) != len(order):
        return OrderCheck(False, [(None, "order does not cover the basis exactly")])
    pos = {lab: i for i, lab in enumerate(order)}
    for lab in order:
        p = K.dim_of(lab)
        plus, minus = boundary_parts(Chain.basis(lab), K)
        if any(pos[k] > pos[lab] for k in minus) or any(pos[k] < pos[lab] for k in plus):
            fails.append((lab, "not between its negative and positive boundary"))
        lo = iterated_parts(Chain.basis(lab), K, -1, p)
        hi = iterated_parts(Chain.basis(lab), K, +1, p)
        if augmentation(lo, K) != 1 or augmentation(hi, K) != 1:
            fails.append((lab, "iterated boundary parts do not have augmentation 1"))
    return OrderCheck(not fails, fails)


def order_witness(K: FreeADC, prefer=None):
    """Topological sort of the relation 'negative terms < a < positive terms'.

    Returns (order, unique).  Ties are broken by ``prefer`` (a list of labels)
    or by the stored basis order.
    """
    rank = {lab: i for i, lab in enumerate(prefer or K.labels)}
    succ = {lab: set() for lab in K.labels}
    indeg = {lab: 0 for lab in K.labels}
    for lab in K.labels:
        plus, minus = boundary_parts(Chain.basis(lab), K)
        for k in minus:
            if lab not in succ[k]:
                succ[k].add(lab)
                indeg[lab] += 1
        for k in plus:
            if k not in succ[lab]:
                succ[lab].add(k)
                indeg[k] += 1
    import heapq

    ready = [(rank[lab], i, lab) for i, lab in enumerate(K.labels) if indeg[lab] == 0]
    heapq.heapify(ready)
    out, unique = [], True
    idx = {lab: i for i, lab in enumerate(K.labels)}
    while ready:
        if len(ready) > 1:
            unique = False
        _, _, lab = heapq.heappop(ready)
        out.append(lab)
        for k in succ[lab]:
            indeg[k] -= 1
            if indeg[k] == 0:
                heapq.heappush(ready, (rank[k], idx[k], k))
    if len(out) != len(K.labels):
        return None, False
    return out, unique


# ---------------------------------------------------------------------------
# subgroups and quotients


class GradedSubgroup:
    """A subgroup of the chains of K, kept separately in each dimension."""

    def __init__(self, K: FreeADC, gens=()):
        self.K = K
        self.parts = {q: Subgroup(K.rank(q)) for q in range(K.top + 1)}
        for g in gens:
            self.add(g)

    def _split(self, c):
        if isinstance(c, np.ndarray):
            v = c
        else:
            v = self.K.vec(c)
        for q in range(self.K.top + 1):
            b = v[self.K.block(q)]
            if np.any(b):
                yield q, b

    def add(self, c):
        for q, b in self._split(c):
            self.parts[q].add(b)

    def members(self, c) -> bool:
        return all(self.parts[q].contains(b) for q, b in self._split(c))

    contains = members

    def contains_group(self, other: "GradedSubgroup") -> bool:
        return all(self.parts[q].contains_group(other.parts[q]) for q in self.parts)

    def equal(self, other: "GradedSubgroup") -> bool:
        return all(self.parts[q].equal(other.parts[q]) for q in self.parts)

    def __add__(self, other):
        out = GradedSubgroup(self.K)
        out.parts = {q: self.parts[q] + other.parts[q] for q in self.parts}
        return out

    def intersection(self, other):
        out = GradedSubgroup(self.K)
        out.parts = {q: self.parts[q].intersection(other.parts[q]) for q in self.parts}
        return out

    def ranks(self) -> list[int]:
        return [self.parts[q].rank for q in sorted(self.parts)]

    def vectors(self):
        """Lattice basis as full-length vectors."""
        for q in sorted(self.parts):
            off = self.K.offsets[q]
            for r in self.parts[q].basis():
                v = np.zeros(len(self.K), dtype=object)
                for k, x in r.items():
                    v[off + k] = x
                yield v


def subgroup_from_generators(gens, K: FreeADC) -> GradedSubgroup:
    return GradedSubgroup(K, gens)


def generated_subcomplex(K: FreeADC, labels) -> GradedSubgroup:
    """Subgroup generated by the given basis elements and their boundaries."""
    g = GradedSubgroup(K)
    for lab in labels:
        j = K._idx(lab)
        v = np.zeros(len(K), dtype=np.int64)
        v[j] = 1
        g.add(v)
        g.add(K.dmat[:, j])
    return g


def morphism_kernel(f: ChainMorphism) -> GradedSubgroup:
    out = GradedSubgroup(f.source)
    for q in range(f.source.top + 1):
        cols = f.source.block(q)
        rows = f.target.block(q)
        blk = f.matrix[rows, cols]
        n = cols.stop - cols.start
        if blk.shape[0] == 0:
            for k in range(n):
                out.parts[q].add({k: 1})
            continue
        for k in column_kernel(blk):
            out.parts[q].add(k)
    return out


def morphism_image(f: ChainMorphism) -> GradedSubgroup:
    out = GradedSubgroup(f.target)
    for j in range(len(f.source)):
        out.add(f.matrix[:, j])
    return out


def _positive_functional(vecs: np.ndarray):
    """Rational weights g with g . v > 0 on every column (float estimate)."""
    from scipy.optimize import linprog

    r, n = vecs.shape
    if n == 0 or r == 0:
        return np.zeros(r)
    a = vecs.astype(float)
    res = linprog(np.abs(a).sum(axis=1) + 1.0, A_ub=-a.T, b_ub=-np.ones(n),
                  bounds=[(None, None)] * r, method="highs")
    if res.status != 0:
        return None
    return res.x


def _int_coords(bmat: np.ndarray, v: np.ndarray):
    """Integer c with bmat @ c == v, or None."""
    if bmat.shape[1] == 0:
        return np.zeros(0, dtype=np.int64) if not np.any(v) else None
    c, *_ = np.linalg.lstsq(bmat.astype(float), v.astype(float), rcond=None)
    c = np.rint(c).astype(np.int64)
    if np.array_equal(imatmul(bmat, c), v):
        return c
    return None


@dataclass
class Quotient:
    complex: FreeADC
    map: ChainMorphism
    classes: dict  # quotient label -> list of source labels with that class


def quotient(K: FreeADC, U, name=None) -> Quotient:
    """The quotient K/U as a free complex.

    U is a GradedSubgroup (or a list of generating basis labels, closed up by
    adding boundaries).  The basis of the result consists of distinct images
    of basis elements which are indecomposable in the image monoid; the
    quotient must be torsion free and the image monoid freely generated by
    them, otherwise NotFreeQuotient is raised.
    """
    if not isinstance(U, GradedSubgroup):
        U = generated_subcomplex(K, U)
    coords = {}  # q -> (basis columns matrix, source coords matrix)
    qlabels, qdims, classes = [], [], {}
    rep_of = {}
    for q in range(K.top + 1):
        n = K.rank(q)
        sub = U.parts[q]
        umat = sub.dense_basis() if sub.rank else np.zeros((0, n), dtype=object)
        if sub.rank:
            ann = column_kernel(umat)
        else:
            ann = [{i: 1} for i in range(n)]
        ymat = np.zeros((len(ann), n), dtype=np.int64)
        for i, r in enumerate(ann):
            for k, x in r.items():
                ymat[i, k] = x
        back = Subgroup(n, column_kernel(ymat) if len(ann) else [{i: 1} for i in range(n)])
        if not back.equal(sub):
            raise NotFreeQuotient(f"not a free quotient: torsion in dimension {q}")
        r = ymat.shape[0]
        imgs = ymat
        order = [j for j in range(n) if np.any(imgs[:, j])]
        distinct = {}
        for j in order:
            distinct.setdefault(imgs[:, j].tobytes(), j)
        reps = list(distinct.values())
        g = _positive_functional(imgs[:, reps]) if reps else np.zeros(r)
        if g is None:
            raise NotFreeQuotient(f"not a free quotient: image monoid not pointed in dimension {q}")
        weights = {j: float(g @ imgs[:, j]) for j in reps}
        reps.sort(key=lambda j: (round(weights[j], 9), j))
        chosen = []
        bmat = np.zeros((r, 0), dtype=np.int64)
        for j in reps:
            c = _int_coords(bmat, imgs[:, j])
            if c is None:
                chosen.append(j)
                bmat = np.concatenate([bmat, imgs[:, j:j + 1]], axis=1)
            elif np.any(c < 0):
                raise NotFreeQuotient(
                    f"not a free quotient: image monoid not freely generated in dimension {q}")
        if len(chosen) != r:
            raise NotFreeQuotient(f"not a free quotient: rank mismatch in dimension {q}")
        chosen.sort()
        bmat = imgs[:, chosen]
        cmat = np.zeros((r, n), dtype=np.int64)
        for j in range(n):
            c = _int_coords(bmat, imgs[:, j])
            if c is None or np.any(c < 0):
                raise NotFreeQuotient(
                    f"not a free quotient: image of {K.basis(q)[j]!r} is not a nonnegative combination")
            cmat[:, j] = c
        coords[q] = cmat
        labs = K.basis(q)
        for t, j in enumerate(chosen):
            lab = labs[j]
            qlabels.append(lab)
            qdims.append(q)
            rep_of[lab] = (q, j)
            classes[lab] = [labs[k] for k in range(n)
                            if np.array_equal(cmat[:, k], cmat[:, j])]
    N = len(qlabels)
    qidx = {lab: i for i, lab in enumerate(qlabels)}
    offs = {}
    for i, d in enumerate(qdims):
        offs.setdefault(d, i)
    pm = np.zeros((N, len(K)), dtype=np.int64)
    for q, cmat in coords.items():
        if cmat.shape[0]:
            pm[offs[q]:offs[q] + cmat.shape[0], K.block(q)] = cmat
    dm = np.zeros((N, N), dtype=np.int64)
    ev = np.zeros(N, dtype=np.int64)
    for lab in qlabels:
        i = qidx[lab]
        j = K.index[lab]
        dm[:, i] = pm @ K.dmat[:, j]
        ev[i] = K.eps[j]
    Q = FreeADC.from_matrices(qlabels, qdims, dm, ev, name=name)
    qmap = ChainMorphism(K, Q, pm, "quotient")
    # boundary and augmentation must be well defined on classes
    if np.any(imatmul(Q.dmat, pm) != imatmul(pm, K.dmat)):
        raise StructuralError("subgroup is not closed under the boundary")
    if np.any(Q.eps @ pm != K.eps):
        raise StructuralError("augmentation does not vanish on the subgroup")
    if np.any(imatmul(Q.dmat, Q.dmat)):
        raise StructuralError("quotient boundary does not square to zero")
    return Quotient(Q, qmap, classes)


# ---------------------------------------------------------------------------
# enumeration of morphisms


class _SolverCache:
    def __init__(self, L: FreeADC):
        self.L = L
        self.solvers = {}

    def solver(self, q: int) -> NonnegSolver:
        s = self.solvers.get(q)
        if s is None:
            if q == 0:
                a = self.L.eps[self.L.block(0)][None, :]
            else:
                a = self.L.boundary_block(q)
            s = NonnegSolver(a)
            self.solvers[q] = s
        return s


def solver_cache(L: FreeADC) -> _SolverCache:
    return _SolverCache(L)


def enumerate_morphisms(K: FreeADC, L: FreeADC, bound: int = 64, cache=None):
    """All morphisms K -> L by depth-first search over the basis of K.

    Returns (sorted list of ChainMorphism, complete flag).  Every coefficient
    is searched up to ``bound``; ``complete`` is True when the search is
    certified exhaustive.
    """
    cache = cache or _SolverCache(L)
    n = len(K)
    m = np.zeros((len(L), n), dtype=np.int64)
    out, complete = [], True

    def rec(j):
        nonlocal complete
        if j == n:
            out.append(m.copy())
            return
        q = int(K.dims[j])
        if q > L.top:
            # only the zero image is possible; it must have zero boundary image
            if q == 0 and K.eps[j]:
                return
            if q > 0 and np.any(m @ K.dmat[:, j]):
                return
            rec(j + 1)
            return
        if q == 0:
            t = [int(K.eps[j])]
        else:
            t = (m @ K.dmat[:, j])[L.block(q - 1)]
        sols, ok = cache.solver(q).solve(t, bound)
        complete = complete and ok
        blk = L.block(q)
        for s in sols:
            m[blk, j] = s
            rec(j + 1)
        m[blk, j] = 0

    rec(0)
    out.sort(key=lambda a: a.tobytes())
    return [ChainMorphism(K, L, a) for a in out], complete
