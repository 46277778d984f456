"""Canonical JSON for structures, towers and documents.

Every document carries a ``version`` field, keys are sorted and
separators are fixed, so identical inputs give byte-identical output.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import ContractError, StructureError
from .finalg.structures import FinGroup, FinLieAlg, FinRng, FinSet
from .prosys import Tower

FORMAT_VERSION = 1


class ParseError(ContractError):
    """Malformed instance text; carries 1-based line and column."""

    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line, self.column = line, column


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def dumps(doc):
    """Canonical text: sorted keys, compact separators, trailing newline."""
    doc = dict(_plain(doc))
    doc.setdefault("version", FORMAT_VERSION)
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def loads(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", 1, 1)
    version = doc.get("version")
    if version != FORMAT_VERSION:
        raise ContractError(f"unsupported format version {version!r}")
    return doc


# -- structures ---------------------------------------------------------------------


def structure_to_json(S):
    if isinstance(S, FinGroup):
        return {"kind": "group", "table": S.table}
    if isinstance(S, FinRng):
        return {"kind": "ring", "add": S.add.table, "mul": S.mul_table, "one": S.one}
    if isinstance(S, FinLieAlg):
        return {
            "kind": "lie",
            "scalars": structure_to_json(S.scalars),
            "add": S.add.table,
            "smul": S.smul,
            "bracket": S.bracket,
        }
    if isinstance(S, FinSet):
        return {"kind": "set", "order": S.order}
    raise StructureError(f"cannot serialize {S!r}")


def structure_from_json(d):
    try:
        kind = d["kind"]
        if kind == "group":
            return FinGroup(d["table"])
        if kind == "ring":
            return FinRng(d["add"], d["mul"], one=d.get("one"))
        if kind == "lie":
            return FinLieAlg(structure_from_json(d["scalars"]), FinGroup(d["add"]), np.array(d["smul"]), np.array(d["bracket"]))
        if kind == "set":
            return FinSet(int(d["order"]))
    except (KeyError, TypeError, ValueError) as e:
        raise StructureError(f"malformed structure: {e}") from None
    raise StructureError(f"unknown structure kind {kind!r}")


# -- towers ---------------------------------------------------------------------------


def tower_to_json(T, up_to):
    """Levels ``0..up_to`` with identical levels stored once."""
    pool, index, levels = [], {}, []
    for n in range(up_to + 1):
        enc = structure_to_json(T.level(n))
        key = json.dumps(_plain(enc), sort_keys=True)
        if key not in index:
            index[key] = len(pool)
            pool.append(enc)
        levels.append(index[key])
    bonds = [T.bond(n).table for n in range(up_to)]
    return {"kind": T.kind, "structures": pool, "levels": levels, "bonds": bonds}


def tower_from_json(d):
    """Explicit tower; constant after the last stored level."""
    try:
        pool = [structure_from_json(s) for s in d["structures"]]
        levels = [pool[i] for i in d["levels"]]
        bonds = [np.asarray(b, dtype=np.int64) for b in d["bonds"]]
    except (KeyError, TypeError, IndexError) as e:
        raise StructureError(f"malformed tower: {e}") from None
    return Tower.from_levels(levels, bonds)


def stored_levels(d):
    return len(d["levels"]) - 1
