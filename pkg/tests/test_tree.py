import json

import pytest
from hypothesis import given, strategies as st

from rooted_iso.tree import (
    CapacityError,
    DepthError,
    ValencySeq,
    children,
    layer,
    parent,
)

valencies = st.lists(st.integers(1, 4), min_size=1, max_size=4).map(lambda m: ValencySeq(tuple(m)))


def test_layer_examples():
    binary = ValencySeq.regular(2, 4)
    assert layer(binary, 0) == [()]
    assert layer(binary, 2) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert len(layer(ValencySeq((3, 2)), 2)) == 6


def test_children_examples():
    binary = ValencySeq.regular(2, 4)
    assert children(binary, ()) == [(0,), (1,)]
    assert children(binary, (0, 1)) == [(0, 1, 0), (0, 1, 1)]
    assert children(ValencySeq((2, 3)), (1,)) == [(1, 0), (1, 1), (1, 2)]


def test_children_depth_exceeded():
    with pytest.raises(DepthError):
        children(ValencySeq((2, 2)), (0, 1))


def test_bad_letter():
    with pytest.raises(ValueError):
        children(ValencySeq((2, 3)), (2,))


def test_capacity_error():
    with pytest.raises(CapacityError):
        layer(ValencySeq.regular(2, 12), 12, bound=1000)


def test_bound_from_environment(monkeypatch):
    monkeypatch.setenv("ROOTED_ISO_BOUND", "10")
    with pytest.raises(CapacityError):
        layer(ValencySeq.regular(2, 4), 4)


def test_nonpositive_valency_rejected():
    with pytest.raises(ValueError):
        ValencySeq((2, 0))
    with pytest.raises(ValueError):
        ValencySeq((2, 1)).require_branching()


def test_json_round_trip():
    vs = ValencySeq((2, 2, 2, 2))
    assert vs.to_json() == "[2, 2, 2, 2]"
    assert ValencySeq.from_json(vs.to_json()) == vs
    assert json.loads(vs.to_json()) == [2, 2, 2, 2]


@given(valencies)
def test_layer_sizes_and_parents(vs):
    total = 1
    for n in range(vs.max_depth + 1):
        lay = layer(vs, n)
        assert len(lay) == vs.layer_size(n) == total
        assert lay == sorted(lay)
        for i, v in enumerate(lay):
            assert vs.index(v) == i
            assert vs.word(n, i) == v
            if v:
                assert v in children(vs, parent(v))
        if n < vs.max_depth:
            total *= vs.m[n]


@given(valencies)
def test_lex_order_is_depth_first_order(vs):
    n = vs.max_depth
    dfs = []

    def visit(v):
        if len(v) == n:
            dfs.append(v)
            return
        for c in children(vs, v):
            visit(c)

    visit(())
    assert dfs == layer(vs, n)


def test_vertex_strings():
    small = ValencySeq((2, 3))
    assert small.format_vertex((1, 2)) == "12"
    assert small.parse_vertex("12") == (1, 2)
    assert small.parse_vertex("") == ()
    big = ValencySeq((40, 2))
    assert big.format_vertex((37, 1)) == "37.1"
    assert big.parse_vertex("37.1") == (37, 1)
