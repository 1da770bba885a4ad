"""Command line front end: ``dump``, ``verify`` and ``enumerate``.

Every subcommand writes either plain text or a structured (JSON) document
and is deterministic: the same invocation gives byte-identical output.
``verify`` exits with status 0 only if every claim passes and every
enumeration it relied on is complete.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor

from . import colim, lam, nu, serialize
from . import simplex as sx
from . import updown as ud
from .adc import StructuralError
from .reports import Report

SUITES = ("kernel", "simplicity", "squares", "axioms", "pullbacks", "reconstruction",
          "equivalence", "colimits")


class SelectorError(ValueError):
    def __init__(self, msg, col=None):
        super().__init__(f"column {col}: {msg}" if col is not None else msg)
        self.col = col


# ---------------------------------------------------------------------------
# selectors: "delta 3", "psi s=(2,1,2) i=1", "colim tag=8 m=2 i=0"

_TOKEN = re.compile(r"\s*(?:(?P<key>[A-Za-z_]+)=(?P<val>\([^)]*\)|-?\d+)(?![^\s])"
                    r"|(?P<word>[A-Za-z_-]+(?![=\w])|-?\d+(?![^\s])))")


def parse_selector(text: str):
    """(kind, positional ints, keyword values).  Up-down vectors are
    returned as tuples."""
    pos, kw, words = [], {}, []
    i = 0
    text = text.rstrip()
    while i < len(text):
        mt = _TOKEN.match(text, i)
        if not mt or mt.end() == i:
            start = i + len(text[i:]) - len(text[i:].lstrip())
            bad = text[start:].split()[0]
            what = f"bad value for {bad.split('=')[0]!r}" if "=" in bad else f"cannot parse {bad!r}"
            raise SelectorError(what, start + 1)
        col = mt.start() + len(mt.group(0)) - len(mt.group(0).lstrip()) + 1
        if mt.group("key"):
            key, val = mt.group("key"), mt.group("val")
            if key in kw:
                raise SelectorError(f"repeated key {key!r}", col)
            if val.startswith("("):
                try:
                    kw[key] = tuple(ud.parse_updown(val))
                except ValueError as e:
                    raise SelectorError(str(e), col) from None
            else:
                kw[key] = int(val)
        elif mt.group("word").lstrip("-").isdigit():
            pos.append(int(mt.group("word")))
        else:
            if pos or kw:
                raise SelectorError(f"unexpected word {mt.group('word')!r}", col)
            words.append(mt.group("word"))
        i = mt.end()
    if not words:
        raise SelectorError("missing object kind", 1)
    return " ".join(words), pos, kw


def _need(kw, keys, kind):
    missing = [k for k in keys if k not in kw]
    if missing:
        raise SelectorError(f"{kind} needs {', '.join(k + '=' for k in missing)}")
    extra = [k for k in kw if k not in keys]
    if extra:
        raise SelectorError(f"{kind} does not take {', '.join(extra)}")
    return [kw[k] for k in keys]


def _one(pos, kind):
    if len(pos) != 1:
        raise SelectorError(f"{kind} needs exactly one integer")
    if pos[0] < 0:
        raise SelectorError(f"{kind} needs a nonnegative integer")
    return pos[0]


def select_complex(text: str):
    """delta N, simple s=(...), or colim tag= m= i= [j=]."""
    kind, pos, kw = parse_selector(text)
    if kind == "delta":
        return sx.delta(_one(pos, kind))
    if kind == "simple":
        (s,) = _need(kw, ["s"], kind)
        return ud.simple_quotient(s).complex
    if kind == "colim":
        keys = ["tag", "m", "i"] + (["j"] if "j" in kw else [])
        return colim.build(*_need(kw, keys, kind)).complex
    raise SelectorError(f"unknown complex {kind!r}")


# ---------------------------------------------------------------------------
# dump


def dump(text: str) -> dict:
    kind, pos, kw = parse_selector(text)
    if kind == "delta":
        K = sx.delta(_one(pos, kind))
        return {"kind": "complex", "text": serialize.dump_complex(K), "rank": len(K)}
    if kind in ("psi", "Psi"):
        if kind == "psi":
            s, i = _need(kw, ["s", "i"], kind)
            M, name = sx.psi_dual(s, i), f"psi[{i},{ud.UpDownVector(s)!r}]"
        else:
            (s,) = _need(kw, ["s"], kind)
            M, name = sx.Psi_dual(s), f"Psi[{ud.UpDownVector(s)!r}]"
        D = sx.delta(sx.size(s))
        return {"kind": "matrix", "text": serialize.dump_matrix(M, D, D, name), "rank": len(D)}
    if kind == "phi":
        m, i, j = _need(kw, ["m", "i", "j"], kind)
        D = sx.delta(m)
        return {"kind": "matrix", "text": serialize.dump_matrix(sx.phi_dual(m, i, j), D, D, f"phi[{i},{j}]"),
                "rank": len(D)}
    if kind == "w":
        n, k, l = _need(kw, ["n", "k", "l"], kind)
        D = sx.delta(n)
        return {"kind": "matrix", "text": serialize.dump_matrix(sx.w_dual(n, k, l), D, D, f"w[{k},{l}]"),
                "rank": len(D)}
    if kind == "simple":
        (s,) = _need(kw, ["s"], kind)
        S = ud.simple_quotient(s)
        return {"kind": "morphism", "text": serialize.dump_morphism(S.qmap), "rank": len(S.complex)}
    if kind == "colim":
        keys = ["tag", "m", "i"] + (["j"] if "j" in kw else [])
        C = colim.build(*_need(kw, keys, kind))
        order, unique = colim.ordered_basis(C)
        lines = [serialize.dump_complex(C.complex)]
        for leg, f in C.legs.items():
            lines.append(f"leg {leg} {serialize.morphism_line(f.matrix, f.source, f.target)}")
        lines.append("order " + " ".join(C.listing(order)))
        return {"kind": "colimit", "text": "\n".join(lines), "rank": len(C.complex),
                "order_unique": unique}
    raise SelectorError(f"unknown selector {kind!r}")


# ---------------------------------------------------------------------------
# enumerate


def _nu_row(x, K) -> str:
    parts = []
    for q, (n, p) in enumerate(x.chains(K)):
        parts.append(f"{q}: {serialize.chain_text(n)} | {serialize.chain_text(p)}")
    return "; ".join(parts)


def enumerate_cmd(functor: str, complex_text: str, dim: int, bound: int) -> dict:
    K = select_complex(complex_text)
    if functor == "nu":
        els, complete = nu.nu_enumerate(K, dim, bound)
        rows = [_nu_row(x, K) for x in els]
    elif functor == "lam":
        els, complete = lam.lam_enumerate(K, dim, bound)
        D = sx.delta(dim)
        rows = [serialize.morphism_line(x.matrix, D, K) for x in els]
    else:
        raise SelectorError(f"unknown functor {functor!r}")
    return {"functor": functor, "complex": complex_text, "dim": dim, "bound": bound,
            "complete": complete, "rows": rows}


# ---------------------------------------------------------------------------
# verify: each suite is a list of independent tasks, each returning
# (claim prefix, topic, checks) triples


def _task_kernel(s):
    S = ud.UpDownVector(s)
    return [(f"kernel/{S!r}", "kernel theorem", ud.verify_kernel_theorem(S)),
            (f"psi-identities/{S!r}", "psi identities", ud.psi_display_checks(S))]


def _task_operators(n):
    checks = sx.phi_identity_checks(n) + sx.w_identity_checks(n)
    return [(f"operators/{n}", "phi and w identities", checks)]


def _task_simplicity(s):
    S = ud.simple_quotient(s)
    tag = repr(ud.UpDownVector(s))
    out = [(f"simple/{tag}", "simple complex", ud.check_simple(S) + [ud.check_final_tower(S)])]
    if len(s) == 1:
        out.append((f"one-term-pattern/{tag}", "simple complex", [ud.check_one_term_pattern(s[0])]))
    return out


def _task_squares(s):
    tag = repr(ud.UpDownVector(s))
    return [(f"square/{tag}", "push-out square", ud.simple_square(s)),
            (f"decomposition/{tag}", "direct sum decomposition", ud.check_decomposition(s))]


def _task_axioms(model, n, cutoff, bound):
    if model == "lambda-delta":
        X = lam.lam_model(sx.delta(n), cutoff, bound)
        checks = lam.check_complicial_axioms(X) + lam.check_operation_agreement(X)
        return [(f"lambda-delta-{n}", "complicial axioms", checks)], X.complete
    T = nu.truncation(sx.delta(n), cutoff, bound)
    return [(f"nu-delta-{n}", "omega-category axioms", nu.check_omega_axioms(T))], T.complete


def _model(n, max_size):
    return lam.delta_model(n, max(n + 2, max_size + 1))


def _task_pullbacks(n, max_size, s):
    X = _model(n, max_size)
    tag = repr(ud.UpDownVector(s))
    out = [(f"psi-image/{n}/{tag}", "psi image", lam.check_psi_correspondence(X, s)),
           (f"tail-fixed-points/{n}/{tag}", "psi fixed points", lam.check_tail_fixed_points(X, s))]
    if len(s) > 1:
        out.append((f"simple-pullback/{n}/{tag}", "pull-back square", lam.check_simple_pullback(X, s)))
    return out, X.complete


def _task_w_pullback(n, max_size, k, l, q):
    X = _model(n, max_size)
    out = [(f"w-pullback/{n}/{k},{l},{q}", "pull-back square", lam.check_w_pullback(X, k, l, q))]
    if q == 0 and k >= 1:
        out.append((f"w-face-equations/{n}/{k},{l}", "w image", lam.check_w_face_equations(X, k + l, k, l)))
    return out, X.complete


def _task_reconstruction(n, m):
    X = lam.delta_model(n, max(n + 2, m + 1))
    checks = lam.check_reconstruction(X, m)
    for i in range(1, m):
        checks += [type(c)(f"triples-{i}/{c.name}", c.ok, c.detail) for c in lam.check_triples(X, m, i)]
    return [(f"reconstruction/{n}/{m}", "reconstruction", checks)], X.complete


def _task_equivalence(n, m):
    X = lam.delta_model(n, max(n + 2, m + 1))
    return [(f"equivalence-chain/{n}/{m}", "equivalence", lam.check_equivalence_chain(X, m))], X.complete


def _task_colimit(inst):
    C = colim.build(*inst)
    tag = ",".join(map(str, inst))
    checks = colim.check_colimit(C) + colim.check_join_decomposition(*inst)
    checks.append(type(checks[0])("ordered-basis-unique", colim.ordered_basis(C)[1]))
    return [(f"colimit/{tag}", "wedge domains", checks)]


def _run(task):
    fn, args = task
    out = fn(*args)
    if isinstance(out, tuple):
        return out
    return out, True


def suite_tasks(suite, a):
    size = a.max_size
    shapes = ud.enumerate_updown(size)
    if suite == "kernel":
        return ([(_task_operators, (n,)) for n in range(size + 1)]
                + [(_task_kernel, (tuple(s),)) for s in shapes])
    if suite == "simplicity":
        return [(_task_simplicity, (tuple(s),)) for s in shapes]
    if suite == "squares":
        return [(_task_squares, (tuple(s),)) for s in shapes if len(s) > 1]
    if suite == "axioms":
        kind, n = a.model
        cutoff = a.cutoff if a.cutoff is not None else n + 2
        return [(_task_axioms, (kind, n, cutoff, a.bound))]
    targets = range(a.target + 1)
    if suite == "pullbacks":
        tasks = [(_task_pullbacks, (n, size, tuple(s))) for n in targets for s in shapes]
        tasks += [(_task_w_pullback, (n, size, k, l, q)) for n in targets
                  for k in range(size + 1) for l in range(size + 1 - k)
                  for q in range(size + 1 - k - l)]
        return tasks
    if suite == "reconstruction":
        return [(_task_reconstruction, (n, m)) for n in targets for m in range(1, min(size, 3) + 1)]
    if suite == "equivalence":
        tasks = [(_task_pullbacks, (n, size, tuple(s))) for n in targets for s in shapes
                 if len(s) == 1]
        tasks += [(_task_equivalence, (n, m)) for n in targets for m in range(min(size, 3) + 1)]
        return tasks
    if suite == "colimits":
        return [(_task_colimit, (inst,)) for inst in colim.instances(size)]
    raise SelectorError(f"unknown suite {suite!r}")


def verify(suite, a) -> Report:
    tasks = suite_tasks(suite, a)
    if a.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(a.workers) as ex:
            results = list(ex.map(_run, tasks))
    else:
        results = [_run(t) for t in tasks]
    rep = Report(suite)
    for groups, complete in results:
        for prefix, topic, checks in groups:
            for c in checks:
                payload = {"detail": c.detail} if c.detail and not c.ok else {}
                rep.add(f"{prefix}/{c.name}", topic, c.ok, payload, complete=complete)
    return rep


# ---------------------------------------------------------------------------
# entry point


def _model_arg(text):
    mt = re.fullmatch(r"(lambda-delta|nu-delta)\s*(\d+)", text.strip())
    if not mt:
        raise argparse.ArgumentTypeError("expected 'lambda-delta N' or 'nu-delta N'")
    return mt.group(1), int(mt.group(2))


def build_parser():
    p = argparse.ArgumentParser(prog="complicial", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "structured"], default="text")
    common.add_argument("--out", help="write output here instead of stdout")
    sub = p.add_subparsers(dest="cmd", required=True)

    d = sub.add_parser("dump", parents=[common], help="serialize a complex, matrix or morphism")
    d.add_argument("selector", nargs="+")

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--max-size", type=int, default=4, help="largest |s| (cost grows quickly)")
    v.add_argument("--target", type=int, default=2, help="largest n for lambda delta(n) models")
    v.add_argument("--model", type=_model_arg, default=("lambda-delta", 2))
    v.add_argument("--cutoff", type=int, default=None, help="top enumerated dimension")
    v.add_argument("--bound", type=int, default=4, help="coefficient bound for enumerations")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--verbose", action="store_true", help="list passing claims in text output")

    e = sub.add_parser("enumerate", parents=[common], help="list elements of nu K or lambda K")
    e.add_argument("functor", choices=["nu", "lam"])
    e.add_argument("complex", nargs="+")
    e.add_argument("--dim", type=int, required=True)
    e.add_argument("--bound", type=int, default=4)
    return p


def _emit(text, a):
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    try:
        if a.cmd == "dump":
            res = dump(" ".join(a.selector))
            out = json.dumps(res, sort_keys=True, indent=1) if a.format == "structured" else res["text"]
            _emit(out, a)
            return 0
        if a.cmd == "enumerate":
            res = enumerate_cmd(a.functor, " ".join(a.complex), a.dim, a.bound)
            if a.format == "structured":
                out = json.dumps(res, sort_keys=True, indent=1)
            else:
                head = (f"{a.functor} {res['complex']} dim {a.dim} bound {a.bound}: "
                        f"{len(res['rows'])} rows, {'complete' if res['complete'] else 'INCOMPLETE'}")
                out = "\n".join([head] + res["rows"])
            _emit(out, a)
            return 0 if res["complete"] else 1
        rep = verify(a.suite, a)
        _emit(rep.to_json() if a.format == "structured" else rep.to_text(a.verbose), a)
        return 0 if rep.ok else 1
    except (SelectorError, StructuralError, ValueError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
