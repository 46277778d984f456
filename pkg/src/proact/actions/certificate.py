"""Self-contained certificates for strictified actions and their verifier.

A certificate stores, as plain tables, the source towers, the action
data, the strict towers with their levelwise split extensions, and for
each comparison map its level maps plus an iso witness.  Verification
uses only table algebra and the iso criterion; it never reruns a
construction.
"""

from __future__ import annotations

import numpy as np

from ..config import DEFAULT_DEPTH
from ..errors import ProactError
from ..finalg.constructions import SplitExtension
from ..finalg.structures import Hom
from ..prosys import CheckReport, IsoWitness, RawProMorphism, Tower, check_tower, verify_iso_witness
from ..serialize import tower_from_json, tower_to_json

# -- emission ----------------------------------------------------------------------


def _maps(forward, witness, top, depth):
    return {
        "forward": [forward(n) for n in range(top + 1)],
        "level": [witness.at(i)[0] for i in range(depth + 1)],
        "back": [witness.at(i)[1] for i in range(depth + 1)],
    }


def _split_tables(split, top):
    return {
        "include": [split(n).include.table for n in range(top + 1)],
        "project": [split(n).project.table for n in range(top + 1)],
        "section": [split(n).section.table for n in range(top + 1)],
    }


def group_certificate(S, depth=DEFAULT_DEPTH):
    A = S.action
    top = max(max(A.chi(n), A.gamma(n)) for n in range(depth + 1))
    strict = {
        "acting": tower_to_json(S.acting, top),
        "carrier": tower_to_json(S.carrier, top),
        "extension": tower_to_json(S.extension, top),
    }
    strict.update(_split_tables(S.split, top))
    return {
        "type": "certificate",
        "theory": "group",
        "depth": depth,
        "source": {"acting": tower_to_json(S.G, top), "carrier": tower_to_json(S.X, top)},
        "action": {
            "gamma": [A.gamma(n) for n in range(depth + 1)],
            "chi": [A.chi(n) for n in range(depth + 1)],
            "tables": [A.table(n) for n in range(depth + 1)],
        },
        "strict": strict,
        "maps": {
            "acting": _maps(S.acting_forward, S.acting_witness(), top, depth),
            "carrier": _maps(S.carrier_forward, S.carrier_witness(), top, depth),
            "extension": _maps(S.extension_forward, S.extension_witness(), top, depth),
        },
    }


# -- verification ------------------------------------------------------------------


class _Missing(Exception):
    pass


def _table(lst, n):
    if n >= len(lst):
        raise _Missing(n)
    return np.asarray(lst[n], dtype=np.int64)


def _level_morphism(src, tgt, maps, top):
    def m(n):
        if n > top:
            raise _Missing(n)
        return _table(maps["forward"], n)

    return RawProMorphism.level_morphism(src, tgt, m)


def _check_morphism(name, f, top, rep, structural=True, unital=False):
    """Level maps are homomorphisms (optional) commuting with the bonds."""
    for n in range(top + 1):
        t = f.map(n)
        if structural:
            bad = f.source.level(n).hom_violation(t, f.target.level(n), unital=unital) if unital else f.source.level(n).hom_violation(t, f.target.level(n))
            if bad:
                rep.fail(n, f"{name}: level map does not preserve {bad}")
        if n < top:
            if not (f.target.bond(n).table[f.map(n + 1)] == t[f.source.bond(n).table]).all():
                rep.fail(n + 1, f"{name}: level maps do not commute with the bonds")
        rep.checked += 1


def _check_witness(name, f, maps, d, rep):
    levels = maps["level"]
    if len(levels) <= d:
        rep.inconclusive.append((d, f"{name}: no witness stored for level {d}"))
        return
    w = IsoWitness(lambda i: int(levels[i]), lambda i: np.asarray(maps["back"][i], dtype=np.int64))
    rep.merge(verify_iso_witness(f, w, d), prefix=f"{name}: ")


def _check_split(E, Xp, Gp, tables, top, rep, unital=False):
    for n in range(top + 1):
        try:
            ext = SplitExtension(
                Xp.level(n),
                E.level(n),
                Gp.level(n),
                Hom(Xp.level(n), E.level(n), _table(tables["include"], n), check=False),
                Hom(E.level(n), Gp.level(n), _table(tables["project"], n), check=False, unital=unital),
                Hom(Gp.level(n), E.level(n), _table(tables["section"], n), check=False, unital=unital),
            )
        except ValueError as e:
            rep.fail(n, f"split extension tables malformed: {e}")
            continue
        for law in ext.check():
            rep.fail(n, f"split extension: {law}")
        if unital:
            for nm, h in (("project", ext.project), ("section", ext.section)):
                if h.source.is_unital and h.target.is_unital and h.table[h.source.one] != h.target.one:
                    rep.fail(n, f"split extension: {nm} is not unital")
        if n < top:
            eb, xb, gb = E.bond(n).table, Xp.bond(n).table, Gp.bond(n).table
            inc0, inc1 = _table(tables["include"], n), _table(tables["include"], n + 1)
            pr0, pr1 = _table(tables["project"], n), _table(tables["project"], n + 1)
            se0, se1 = _table(tables["section"], n), _table(tables["section"], n + 1)
            if not ((eb[inc1] == inc0[xb]).all() and (pr0[eb] == gb[pr1]).all() and (eb[se1] == se0[gb]).all()):
                rep.fail(n + 1, "split extension maps do not commute with the bonds")
        rep.checked += 1


def _group_semantics(doc, towers, d, rep):
    """The extension's comparison map carries the multiplication of the action."""
    X, G, E = towers["X"], towers["G"], towers["E"]
    act = doc["action"]
    maps = doc["maps"]
    for n in range(d + 1):
        gn, cn = int(act["gamma"][n]), int(act["chi"][n])
        k = max(n, gn, cn)
        A = _table(act["tables"], n)
        e_n, e_k = _table(maps["extension"]["forward"], n), _table(maps["extension"]["forward"], k)
        f_n = _table(maps["carrier"]["forward"], n)
        g_n = _table(maps["acting"]["forward"], n)
        Gk, Gn, Xn = G.level(k), G.level(n), X.level(n)
        if A.shape != (G.level(gn).order, X.level(cn).order):
            rep.fail(n, "action table has the wrong shape")
            continue
        eb = E.bond_table(k, n)
        Et = E.level(n).table
        lhs = e_n[Et[eb[:, None], eb[None, :]]]
        x, g = np.divmod(e_k, Gk.order)
        xn, gnn = X.bond_table(k, n)[x], G.bond_table(k, n)[g]
        av = A[G.bond_table(k, gn)[g][:, None], X.bond_table(k, cn)[x][None, :]]
        rhs = Xn.table[xn[:, None], av] * Gn.order + Gn.table[gnn[:, None], gnn[None, :]]
        if not (lhs == rhs).all():
            rep.fail(n, "extension comparison map is not multiplicative for the action")
        inc = _table(doc["strict"]["include"], n)
        sec = _table(doc["strict"]["section"], n)
        prj = _table(doc["strict"]["project"], n)
        if not (e_n[inc] == f_n * Gn.order + Gn.identity).all():
            rep.fail(n, "extension comparison map does not restrict to the carrier map")
        if not (e_n[sec] == Xn.identity * Gn.order + g_n).all():
            rep.fail(n, "extension comparison map does not restrict to the acting map")
        if not (e_n % Gn.order == g_n[prj]).all():
            rep.fail(n, "extension comparison map does not cover the projection")
        rep.checked += 1


def _load_towers(doc, names):
    out = {}
    for key, path in names.items():
        node = doc
        for p in path:
            node = node[p]
        out[key] = tower_from_json(node)
    return out


def verify_certificate(doc, depth=None):
    """Re-check a certificate at levels ``0..depth`` from its tables alone."""
    rep = CheckReport()
    D = int(doc["depth"])
    d = D if depth is None else int(depth)
    if d > D:
        rep.inconclusive.append((D + 1, f"certificate covers levels up to {D}, {d} requested"))
        d = D
    theory = doc.get("theory")
    try:
        if theory == "group":
            _verify_group(doc, d, rep)
        elif theory == "ring":
            from .ring import verify_ring_certificate

            verify_ring_certificate(doc, d, rep)
        else:
            rep.fail(0, f"unknown certificate theory {theory!r}")
    except _Missing as e:
        rep.inconclusive.append((int(e.args[0]), "certificate does not store this level"))
    except (ProactError, KeyError, IndexError, TypeError, ValueError) as e:
        rep.fail(0, f"malformed certificate: {type(e).__name__}: {e}")
    return rep


def _top(doc):
    return len(doc["strict"]["extension"]["levels"]) - 1


def check_towers(towers, top, rep):
    for name, T in towers.items():
        rep.merge(check_tower(T, top), prefix=f"tower {name}: ")


def _verify_group(doc, d, rep):
    towers = _load_towers(
        doc,
        {
            "G": ("source", "acting"),
            "X": ("source", "carrier"),
            "G'": ("strict", "acting"),
            "X'": ("strict", "carrier"),
            "E": ("strict", "extension"),
        },
    )
    top = _top(doc)
    check_towers(towers, top, rep)
    _check_split(towers["E"], towers["X'"], towers["G'"], doc["strict"], top, rep)
    P = Tower.product(towers["X"], towers["G"])
    maps = doc["maps"]
    fa = _level_morphism(towers["G'"], towers["G"], maps["acting"], top)
    fc = _level_morphism(towers["X'"], towers["X"], maps["carrier"], top)
    fe = _level_morphism(towers["E"], P, maps["extension"], top)
    _check_morphism("acting map", fa, top, rep)
    _check_morphism("carrier map", fc, top, rep)
    _check_morphism("extension map", fe, top, rep, structural=False)
    for name, f, m in (("acting map", fa, maps["acting"]), ("carrier map", fc, maps["carrier"]), ("extension map", fe, maps["extension"])):
        _check_witness(name, f, m, d, rep)
    _group_semantics(doc, {"X": towers["X"], "G": towers["G"], "E": towers["E"]}, d, rep)
