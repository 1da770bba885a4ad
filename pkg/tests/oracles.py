"""Brute-force reference computations, written without the package's
solvers so they can be compared against it."""

from itertools import combinations, product


def simplex_cells(m):
    """Nonempty vertex subsets of {0..m}, by dimension."""
    return {q: list(combinations(range(m + 1), q + 1)) for q in range(m + 1)}


def simplex_boundary(cell):
    return {cell[:i] + cell[i + 1:]: (-1) ** i for i in range(len(cell))} if len(cell) > 1 else {}


def nu_count(m, p, bound):
    """Number of double sequences (x_0^-, x_0^+, ..., x_p^-, x_p^+) of
    nonnegative chains on delta(m) with entries at most ``bound``,
    augmentation 1 at the bottom, d x_q^(+-) = x_{q-1}^+ - x_{q-1}^- and
    x_p^- = x_p^+.  Box enumeration per level, grouped by boundary."""
    cells = simplex_cells(m)
    top = min(p, m)

    def bd(q, v):
        out = {}
        for c, x in zip(cells[q], v):
            for f, s in simplex_boundary(c).items():
                out[f] = out.get(f, 0) + s * x
        return tuple(out.get(f, 0) for f in cells[q - 1])

    # vectors of each level grouped by boundary
    by_bd = {}
    for q in range(1, top + 1):
        g = {}
        for v in product(range(bound + 1), repeat=len(cells[q])):
            g.setdefault(bd(q, v), []).append(v)
        by_bd[q] = g
    base = [v for v in product(range(bound + 1), repeat=len(cells[0])) if sum(v) == 1]

    def count(q, neg, pos):
        # completions of a sequence whose level q-1 is (neg, pos)
        if q > p or q > m:
            return 1 if neg == pos else 0
        diff = tuple(x - y for x, y in zip(pos, neg))
        cands = by_bd[q].get(diff, [])
        return sum(count(q + 1, a, b) for a in cands for b in cands)

    n = 0
    for a in base:
        for b in base:
            n += count(1, a, b)
    return n
