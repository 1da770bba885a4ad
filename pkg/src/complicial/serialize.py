"""Line-oriented text format for complexes, morphisms and operator matrices.

Labels are written as ``[0,1,2]`` (tuples of integers), ``name[0,1]``
(a name attached to such a tuple) or a bare identifier.  A chain is a list of
signed terms such as ``+1[0,1] -2[1,2]``, or ``0``.

Complex::

    complex delta(1)
    0 [0] aug 1
    0 [1] aug 1
    1 [0,1] bd -1[0] +1[1]
    end

A morphism is a source complex, a target complex and one ``map`` record per
source basis element with a nonzero image.
"""

from __future__ import annotations

import re

import numpy as np

from .adc import ChainMorphism, FreeADC, StructuralError


class ParseError(ValueError):
    def __init__(self, msg, line=None, col=None):
        where = f"line {line}" if line is not None else ""
        if col is not None:
            where += f", column {col}"
        super().__init__(f"{where}: {msg}" if where else msg)
        self.line, self.col = line, col


_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_.'-]*$")
_LABEL = re.compile(r"^(?P<name>[A-Za-z_][A-Za-z0-9_.'-]*)?(?:\[(?P<ints>-?\d+(?:,-?\d+)*)?\])?$")


def label_text(lab) -> str:
    if isinstance(lab, tuple) and all(isinstance(v, (int, np.integer)) for v in lab):
        return "[" + ",".join(str(int(v)) for v in lab) + "]"
    if (isinstance(lab, tuple) and len(lab) == 2 and isinstance(lab[0], str)
            and isinstance(lab[1], tuple)):
        return lab[0] + label_text(lab[1])
    if isinstance(lab, str) and _IDENT.match(lab):
        return lab
    raise StructuralError(f"label {lab!r} has no text form")


def parse_label(text: str):
    mt = _LABEL.match(text)
    if not mt or not text:
        raise ParseError(f"bad label {text!r}")
    name, ints = mt.group("name"), mt.group("ints")
    if "[" not in text:
        return name
    tup = tuple(int(v) for v in ints.split(",")) if ints else ()
    return (name, tup) if name else tup


def chain_text(coeffs: dict) -> str:
    """coeffs: label -> integer, in the order given."""
    terms = [f"{int(c):+d}{label_text(lab)}" for lab, c in coeffs.items() if c]
    return " ".join(terms) if terms else "0"


def parse_chain(text: str) -> dict:
    text = text.strip()
    if text == "0" or not text:
        return {}
    out = {}
    for tok in text.split():
        mt = re.match(r"^([+-]\d+)(.+)$", tok)
        if not mt:
            raise ParseError(f"bad chain term {tok!r}")
        lab = parse_label(mt.group(2))
        out[lab] = out.get(lab, 0) + int(mt.group(1))
    return {k: v for k, v in out.items() if v}


def _column(K: FreeADC, col) -> dict:
    return {K.labels[i]: int(col[i]) for i in np.flatnonzero(col)}


# ---------------------------------------------------------------------------
# complexes


def dump_complex(K: FreeADC) -> str:
    lines = [f"complex {K.name or 'K'}"]
    for j, lab in enumerate(K.labels):
        q = int(K.dims[j])
        if q == 0:
            lines.append(f"0 {label_text(lab)} aug {int(K.eps[j])}")
        else:
            lines.append(f"{q} {label_text(lab)} bd {chain_text(_column(K, K.dmat[:, j]))}")
    lines.append("end")
    return "\n".join(lines)


def _parse_complex(lines, start):
    head = lines[start].split(None, 1)
    if not head or head[0] != "complex":
        raise ParseError("expected 'complex'", start + 1)
    name = head[1].strip() if len(head) > 1 else None
    cells, bd, aug = [], {}, {}
    i = start + 1
    while i < len(lines) and lines[i].strip() != "end":
        parts = lines[i].split(None, 3)
        if len(parts) < 4:
            raise ParseError("expected '<dim> <label> aug|bd <value>'", i + 1)
        try:
            q = int(parts[0])
        except ValueError:
            raise ParseError(f"bad dimension {parts[0]!r}", i + 1, 1) from None
        try:
            lab = parse_label(parts[1])
            if parts[2] == "aug" and q == 0:
                aug[lab] = int(parts[3])
            elif parts[2] == "bd" and q > 0:
                bd[lab] = parse_chain(parts[3])
            else:
                raise ParseError(f"unexpected field {parts[2]!r}", i + 1)
        except ParseError as e:
            raise ParseError(str(e), i + 1) from None
        cells.append((q, lab))
        i += 1
    if i == len(lines):
        raise ParseError("missing 'end'", i)
    known = {lab for _, lab in cells}
    for row, (_, lab) in enumerate(cells, start + 2):
        missing = [f for f in bd.get(lab, {}) if f not in known]
        if missing:
            raise ParseError(f"boundary refers to unknown element {label_text(missing[0])}", row)
    try:
        return FreeADC(cells, bd, aug, name=name), i + 1
    except StructuralError as e:
        raise ParseError(str(e), start + 1) from None


def parse_complex(text: str) -> FreeADC:
    K, _ = _parse_complex(text.strip().splitlines(), 0)
    return K


# ---------------------------------------------------------------------------
# morphisms


def dump_morphism(f: ChainMorphism) -> str:
    lines = [f"morphism {f.name or 'f'}", dump_complex(f.source), dump_complex(f.target)]
    for j, lab in enumerate(f.source.labels):
        col = f.matrix[:, j]
        if np.any(col):
            lines.append(f"map {label_text(lab)} -> {chain_text(_column(f.target, col))}")
    lines.append("end")
    return "\n".join(lines)


def parse_morphism(text: str) -> ChainMorphism:
    lines = text.strip().splitlines()
    head = lines[0].split(None, 1)
    if head[0] != "morphism":
        raise ParseError("expected 'morphism'", 1)
    K, i = _parse_complex(lines, 1)
    L, i = _parse_complex(lines, i)
    m = np.zeros((len(L), len(K)), dtype=np.int64)
    while i < len(lines) and lines[i].strip() != "end":
        mt = re.match(r"^map (\S+) -> (.*)$", lines[i].strip())
        if not mt:
            raise ParseError("expected 'map <label> -> <chain>'", i + 1)
        try:
            m[:, K._idx(parse_label(mt.group(1)))] = L.vec(parse_chain(mt.group(2)))
        except (StructuralError, ParseError) as e:
            raise ParseError(str(e), i + 1) from None
        i += 1
    return ChainMorphism(K, L, m, head[1].strip() if len(head) > 1 else None)


def morphism_line(matrix, K: FreeADC, L: FreeADC) -> str:
    """Compact one-line form listing nonzero images: ``[0]:+1[1]; ...``."""
    recs = []
    for j, lab in enumerate(K.labels):
        col = matrix[:, j]
        if np.any(col):
            recs.append(f"{label_text(lab)}:{chain_text(_column(L, col)).replace(' ', '')}")
    return "; ".join(recs) if recs else "0"


def parse_morphism_line(text: str, K: FreeADC, L: FreeADC) -> np.ndarray:
    m = np.zeros((len(L), len(K)), dtype=np.int64)
    if text.strip() == "0":
        return m
    for rec in text.split(";"):
        lab, _, ch = rec.strip().partition(":")
        ch = re.sub(r"(?<=\S)([+-]\d)", r" \1", ch)
        m[:, K._idx(parse_label(lab))] = L.vec(parse_chain(ch))
    return m


# ---------------------------------------------------------------------------
# matrices


def dump_matrix(mat, K: FreeADC, L: FreeADC, name="M") -> str:
    """Per-dimension integer blocks; rows are target basis elements and
    columns source basis elements, both listed in order."""
    lines = [f"matrix {name}"]
    for q in range(max(K.top, L.top) + 1):
        if q > K.top or q > L.top:
            continue
        rk, rl = K.basis(q), L.basis(q)
        lines.append(f"dim {q} rows {' '.join(label_text(x) for x in rl)}")
        lines.append(f"dim {q} cols {' '.join(label_text(x) for x in rk)}")
        blk = np.asarray(mat)[L.block(q), K.block(q)]
        for r in blk:
            lines.append(" ".join(str(int(v)) for v in r))
    lines.append("end")
    return "\n".join(lines)


def parse_matrix(text: str, K: FreeADC, L: FreeADC) -> np.ndarray:
    lines = text.strip().splitlines()
    out = np.zeros((len(L), len(K)), dtype=np.int64)
    i = 1
    while i < len(lines) and lines[i] != "end":
        rows = [parse_label(t) for t in lines[i].split()[3:]]
        cols = [parse_label(t) for t in lines[i + 1].split()[3:]]
        for r, lab in enumerate(rows):
            vals = [int(v) for v in lines[i + 2 + r].split()]
            for c, v in zip(cols, vals):
                out[L._idx(lab), K._idx(c)] = v
        i += 2 + len(rows)
    return out
