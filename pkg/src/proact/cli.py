"""Command-line interface: validate instances, run the pipelines, verify certificates.

Instance files are canonical JSON documents with a ``version`` field and a
``type``:

``towers``
    ``{"towers": {name: tower, ...}}``; checked by ``validate``.
``hom``
    ``{"source": tower, "target": tower}``; morphism classes via ``hom``.
``group-action``
    ``{"acting": tower, "carrier": tower, "gamma": index, "chi": index,
    "tables": [table_0, table_1, ...]}`` with ``table_n`` of shape
    ``|G_gamma(n)| x |X_chi(n)|``; levels past the list reuse the last table.
``ring-action``
    like ``group-action`` with ``rho``/``sigma`` and ``left``/``right``
    tables, plus optional ``scalars`` masks for the algebra flavor.
``certificate``
    emitted by the strictify commands and re-checked by ``verify``.

A tower is either explicit (``{"kind", "structures", "levels", "bonds"}``,
constant after the last level) or schematic: ``{"constructor":
"constant", "structure": S}``, ``{"constructor": "cyclic-2-power"}`` or
``{"constructor": "vector", "p": p, "stable_from": k}``.  A structure is
explicit or ``{"catalog": name, "kind": "group" | "ring"}``.  An index map
is ``{"shift": c}`` (n -> n + c) or an explicit list continued with slope 1.

Exit status: 0 verified, 1 violation or malformed input, 2 inconclusive.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import serialize
from .errors import ContractError, Inconclusive, ProactError, ResourceError, StructureError
from .finalg import catalog
from .prosys import CheckReport, Tower, check_tower, hom_classes

EXIT = {"verified": 0, "violation": 1, "inconclusive": 2}


# -- instance parsing -------------------------------------------------------------------


def structure_from_spec(d):
    if isinstance(d, dict) and "catalog" in d:
        kind = d.get("kind", "group")
        return catalog.group(d["catalog"]) if kind == "group" else catalog.ring(d["catalog"])
    return serialize.structure_from_json(d)


def tower_from_spec(d):
    if not isinstance(d, dict):
        raise ContractError("a tower must be an object")
    cons = d.get("constructor")
    if cons is None:
        if "structures" in d:
            d = dict(d, structures=[structure_from_spec(s) for s in d["structures"]])
            levels = [d["structures"][i] for i in d["levels"]]
            return Tower.from_levels(levels, [np.asarray(b, dtype=np.int64) for b in d["bonds"]])
        raise ContractError("a tower needs a constructor or explicit levels")
    if cons == "constant":
        return Tower.constant(structure_from_spec(d["structure"]))
    if cons == "cyclic-2-power":
        return Tower.cyclic_2power()
    if cons == "vector":
        return Tower.vector(int(d["p"]), d.get("stable_from"))
    raise ContractError(f"unknown tower constructor {cons!r}")


def index_from_spec(d):
    if isinstance(d, dict) and "shift" in d:
        c = int(d["shift"])
        return lambda n: n + c
    if isinstance(d, list) and d:
        vals = [int(v) for v in d]
        return lambda n: vals[n] if n < len(vals) else vals[-1] + n - len(vals) + 1
    raise ContractError("an index map is {'shift': c} or a non-empty list")


def _per_level(tables):
    arrs = [np.asarray(t, dtype=np.int64) for t in tables]
    if not arrs:
        raise ContractError("action data needs at least one table")
    return lambda n: arrs[min(n, len(arrs) - 1)]


def group_action_from_doc(doc):
    from .actions import ShiftedGroupAction

    return ShiftedGroupAction(
        tower_from_spec(doc["acting"]),
        tower_from_spec(doc["carrier"]),
        index_from_spec(doc.get("gamma", {"shift": 0})),
        index_from_spec(doc.get("chi", {"shift": 0})),
        _per_level(doc["tables"]),
    )


def ring_action_from_doc(doc):
    from .actions import ShiftedRingAction

    scalars = None
    if "scalars" in doc:
        masks = [np.asarray(m, dtype=bool) for m in doc["scalars"]]
        scalars = lambda n: masks[min(n, len(masks) - 1)]  # noqa: E731
    R = tower_from_spec(doc["acting"])
    return ShiftedRingAction(
        R,
        tower_from_spec(doc["carrier"]),
        index_from_spec(doc.get("rho", {"shift": 0})),
        index_from_spec(doc.get("sigma", {"shift": 0})),
        _per_level(doc["left"]),
        _per_level(doc["right"]),
        scalars=scalars,
        unital=doc.get("unital"),
    )


def read_doc(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ContractError(f"cannot read {path}: {e.strerror}") from None
    return serialize.loads(text)


def _need_type(doc, *types):
    t = doc.get("type")
    if t not in types:
        raise ContractError(f"expected a document of type {' or '.join(types)}, got {t!r}")
    return t


# -- output -------------------------------------------------------------------------------


def _emit(doc, out):
    text = serialize.dumps(doc)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_doc(rep, **extra):
    doc = {
        "type": "report",
        "status": rep.status,
        "checked": rep.checked,
        "failures": [[lv, msg] for lv, msg in rep.failures],
        "inconclusive": [[lv, msg] for lv, msg in rep.inconclusive],
    }
    doc.update(extra)
    return doc


def _summary(rep):
    line = f"{rep.status}: {rep.checked} checks"
    if rep.failures:
        lv, msg = rep.failures[0]
        line += f"; first violation at level {lv}: {msg}"
    elif rep.inconclusive:
        lv, msg = rep.inconclusive[0]
        line += f"; inconclusive at level {lv}: {msg}"
    print(line, file=sys.stderr)


# -- commands ----------------------------------------------------------------------------


def cmd_validate(args):
    doc = read_doc(args.instance)
    t = _need_type(doc, "towers", "group-action", "ring-action")
    rep = CheckReport()
    if t == "towers":
        for name, spec in sorted(doc["towers"].items()):
            rep.merge(check_tower(tower_from_spec(spec), args.depth), prefix=f"{name}: ")
    else:
        from .proobj import check_object_axioms

        A = group_action_from_doc(doc) if t == "group-action" else ring_action_from_doc(doc)
        for name, T in (("acting", A.G if t == "group-action" else A.R), ("carrier", A.X if t == "group-action" else A.S)):
            rep.merge(check_tower(T, args.depth), prefix=f"{name}: ")
        rep.merge(check_object_axioms(A.object_structure(), args.depth))
    _emit(_report_doc(rep), args.out)
    _summary(rep)
    return EXIT[rep.status]


def cmd_hom(args):
    doc = read_doc(args.instance)
    _need_type(doc, "hom")
    X, Y = tower_from_spec(doc["source"]), tower_from_spec(doc["target"])
    hc = hom_classes(X, Y, args.bound)
    out = {
        "type": "hom-classes",
        "status": hc.status,
        "count": len(hc),
        "source_level": hc.source_level,
        "target_level": hc.target_level,
        "classes": [h.table for h in hc.classes],
    }
    _emit(out, args.out)
    print(f"{hc.status}: {len(hc)} classes", file=sys.stderr)
    return 0 if hc.exact else 2


def _certify(S, depth, out):
    from .actions import verify_certificate

    cert = serialize.loads(serialize.dumps(S.certificate(depth)))
    rep = verify_certificate(cert, depth)
    _emit(cert, out)
    _summary(rep)
    return EXIT[rep.status]


def cmd_strictify_group(args):
    from .actions import normalize_group_action, strictify_group_action

    doc = read_doc(args.instance)
    _need_type(doc, "group-action")
    A = normalize_group_action(group_action_from_doc(doc), bound=args.depth, search=args.search)
    return _certify(strictify_group_action(A), args.depth, args.out)


def cmd_strictify_ring(args):
    from .actions import strictify_ring

    doc = read_doc(args.instance)
    _need_type(doc, "ring-action")
    S = strictify_ring(ring_action_from_doc(doc), args.flavor, bound=args.depth, search=args.search)
    return _certify(S, args.depth, args.out)


def cmd_verify(args):
    from .actions import verify_certificate

    doc = read_doc(args.instance)
    _need_type(doc, "certificate")
    rep = verify_certificate(doc, args.depth)
    _emit(_report_doc(rep), args.out)
    _summary(rep)
    return EXIT[rep.status]


def cmd_demo(args):
    if args.demo == "lie-counterexample":
        from .liecounter import build_instance, check_obstruction

        inst = build_instance(args.p, args.depth)
        axioms = inst.check_axioms()
        report = check_obstruction(inst, args.dim)
        doc = report.to_json()
        doc["object_axioms"] = axioms.status
        _emit(doc, args.out)
        ok = report.confirmed and axioms.ok
        print(f"{'verified' if ok else 'violation'}: obstruction {'confirmed' if report.confirmed else 'refuted'}", file=sys.stderr)
        return 0 if ok else 1
    from .actions import order_n_demo, verify_certificate

    S, report = order_n_demo(args.n, depth=args.depth)
    cert = serialize.loads(serialize.dumps(S.certificate(args.depth)))
    rep = verify_certificate(cert, args.depth)
    doc = dict(report, type="order-n-demo", certificate=cert, status=rep.status)
    _emit(doc, args.out)
    _summary(rep)
    if not report["orders_divide_n"]:
        return 1
    return EXIT[rep.status]


def build_parser():
    p = argparse.ArgumentParser(prog="proact", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, depth=8):
        sp.add_argument("--out", help="write the canonical output here instead of stdout")
        sp.add_argument("--depth", type=int, default=depth, help="levels 0..depth (default %(default)s)")

    sp = sub.add_parser("validate", help="check towers or object-action axioms")
    sp.add_argument("instance")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("hom", help="morphism classes between two towers")
    sp.add_argument("instance")
    sp.add_argument("--bound", type=int, default=8)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_hom)

    sp = sub.add_parser("strictify-group", help="normalize and strictify a group action; emit a certificate")
    sp.add_argument("instance")
    sp.add_argument("--search", type=int, default=4, help="largest extra index shift tried per level")
    common(sp)
    sp.set_defaults(func=cmd_strictify_group)

    sp = sub.add_parser("strictify-ring", help="normalize and strictify a ring action; emit a certificate")
    sp.add_argument("instance")
    sp.add_argument("--flavor", choices=["alg", "ring", "cring", "rng", "crng"], default="ring")
    sp.add_argument("--search", type=int, default=4)
    common(sp)
    sp.set_defaults(func=cmd_strictify_ring)

    sp = sub.add_parser("verify", help="re-check a certificate from its tables")
    sp.add_argument("instance")
    sp.add_argument("--depth", type=int, default=None, help="levels to check (default: all stored)")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("demo", help="built-in demonstrations")
    demos = sp.add_subparsers(dest="demo", required=True)
    d = demos.add_parser("lie-counterexample")
    d.add_argument("--p", type=int, default=2)
    d.add_argument("--depth", type=int, default=3)
    d.add_argument("--dim", type=int, default=2, help="largest Lie algebra dimension enumerated")
    d.add_argument("--out")
    d.set_defaults(func=cmd_demo)
    d = demos.add_parser("order-n")
    d.add_argument("--n", type=int, default=2, choices=[2, 3])
    d.add_argument("--depth", type=int, default=6)
    d.add_argument("--out")
    d.set_defaults(func=cmd_demo)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except serialize.ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 1
    except (ResourceError, Inconclusive) as e:
        print(f"inconclusive: {_describe(e)}", file=sys.stderr)
        return 2
    except (ContractError, StructureError, ProactError) as e:
        print(f"violation: {_describe(e)}", file=sys.stderr)
        return 1
    except (KeyError, TypeError, ValueError, IndexError) as e:
        print(f"violation: malformed instance: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


def _describe(e):
    level = getattr(e, "level", None)
    return f"{e} (level {level})" if level is not None and f"level {level}" not in str(e) else str(e)


if __name__ == "__main__":
    sys.exit(main())
