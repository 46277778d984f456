import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from proact.errors import ContractError, StructureError
from proact.finalg import same_structure
from proact.finalg.catalog import GROUPS, RINGS, abelian_lie
from proact.prosys import Tower
from proact.serialize import (
    ParseError,
    dumps,
    loads,
    structure_from_json,
    structure_to_json,
    tower_from_json,
    tower_to_json,
)

structures = st.one_of(
    st.sampled_from(sorted(GROUPS)).map(lambda n: GROUPS[n]()),
    st.sampled_from(sorted(RINGS)).map(lambda n: RINGS[n]()),
    st.integers(0, 2).map(lambda d: abelian_lie(2, d)),
)


@given(structures)
@settings(max_examples=40, deadline=None)
def test_structure_round_trip(S):
    text = dumps({"s": structure_to_json(S)})
    back = structure_from_json(loads(text)["s"])
    assert same_structure(S, back)
    assert dumps({"s": structure_to_json(back)}) == text


@given(st.dictionaries(st.text(max_size=5), st.integers() | st.lists(st.integers(), max_size=3), max_size=5))
def test_canonical_text_is_a_fixed_point(doc):
    text = dumps(doc)
    assert dumps(loads(text)) == text
    assert text.endswith("\n")


def test_numpy_values_serialize_like_plain_ones():
    assert dumps({"a": np.arange(3), "b": np.int64(4), "c": np.bool_(True)}) == dumps({"a": [0, 1, 2], "b": 4, "c": True})


def test_tower_round_trip_shares_repeated_levels():
    T = Tower.vector(2, stable_from=2)
    d = tower_to_json(T, 5)
    assert len(d["structures"]) == 3
    back = tower_from_json(loads(dumps(d)))
    for n in range(7):
        assert same_structure(back.level(n), T.level(n))
        assert (back.bond(n).table == T.bond(n).table).all()


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as e:
        loads('{"version": 1,\n  "a": }')
    assert (e.value.line, e.value.column) == (2, 8)
    with pytest.raises(ParseError):
        loads("[1, 2]")


def test_version_is_checked():
    with pytest.raises(ContractError):
        loads('{"version": 2}')


def test_malformed_structure():
    with pytest.raises(StructureError):
        structure_from_json({"kind": "group"})
    with pytest.raises(StructureError):
        structure_from_json({"kind": "monoid", "table": [[0]]})
