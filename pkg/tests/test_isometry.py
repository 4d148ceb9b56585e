import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import leaf_map, then, to_int, to_word, walk, words
from rooted_iso.groups import adding_machine, odometer_rule
from rooted_iso.isometry import (
    EvaluationError,
    IsoGenerator,
    Portrait,
    ShapeError,
    apply,
    compose,
    evaluate,
    identity_generator,
    inverse,
    order_at_level,
    power,
    random_portrait,
    truncate,
)
from rooted_iso.tree import DepthError, ValencySeq, layer

BINARY = ValencySeq.regular(2, 6)
SHAPES = [((2, 2, 2), 3), ((3, 2), 2), ((2, 3, 2), 3), ((2, 2, 2, 2), 4), ((4, 3), 2)]


def odometer(depth):
    return evaluate(adding_machine(depth).generators[0], depth)


def labels_of(g):
    return {v: g.perm_at(v) for k in range(g.depth) for v in layer(g.vs, k)}


@st.composite
def portraits(draw, count=1):
    m, depth = draw(st.sampled_from(SHAPES))
    rng = random.Random(draw(st.integers(0, 2**32)))
    vs = ValencySeq(m)
    return [random_portrait(vs, depth, rng) for _ in range(count)]


def test_identity_fixes_everything():
    e = Portrait.identity(BINARY, 3)
    assert all(apply(e, v) == v for k in range(4) for v in layer(e.vs, k))


def test_adding_machine_examples():
    g = odometer(3)
    assert apply(g, (0, 0, 0)) == (1, 0, 0)
    assert apply(g, (1, 0, 0)) == (0, 1, 0)


def test_adding_machine_is_plus_one():
    for n in range(1, 7):
        g = odometer(n)
        for w in words((2,) * n, n):
            assert apply(g, w) == to_word((to_int(w) + 1) % 2**n, n)


def test_square_is_plus_two():
    g = odometer(3)
    g2 = compose(g, g)
    assert apply(g2, (0, 0, 0)) == (0, 1, 0)
    for w in words((2, 2, 2), 3):
        assert apply(g2, w) == to_word((to_int(w) + 2) % 8, 3)


def test_inverse_is_minus_one():
    g = odometer(3)
    assert apply(inverse(g), (1, 0, 0)) == (0, 0, 0)
    for w in words((2, 2, 2), 3):
        assert apply(inverse(g), w) == to_word((to_int(w) - 1) % 8, 3)


def test_compose_and_inverse_examples():
    rng = random.Random(5)
    g = random_portrait(BINARY, 4, rng)
    e = Portrait.identity(BINARY, 4)
    assert compose(g, e) == g
    assert compose(g, inverse(g)) == e
    assert inverse(e) == e
    for _ in range(100):
        h = random_portrait(BINARY, 4, rng)
        assert inverse(inverse(h)) == h


def test_truncate_examples():
    g = odometer(4)
    assert truncate(g, 4) == g
    assert truncate(Portrait.identity(BINARY, 4), 2).is_identity()
    t = truncate(g, 2)
    for w in words((2, 2), 2):
        assert apply(t, w) == to_word((to_int(w) + 1) % 4, 2)
    assert order_at_level(t) == 4
    with pytest.raises(DepthError):
        truncate(g, 5)


def test_evaluate_examples():
    assert evaluate(identity_generator(ValencySeq.regular(2, 5)), 5).is_identity()
    am = adding_machine(6).generators[0]
    root = evaluate(am, 1)
    assert root.perms == (((1, 0),),)
    assert truncate(evaluate(am, 3), 2) == evaluate(am, 2)
    with pytest.raises(DepthError):
        evaluate(am, 7)


def test_evaluate_reports_rule_failure():
    bad = IsoGenerator(ValencySeq((2, 2)), lambda v: (0, 0), "bad")
    with pytest.raises(EvaluationError):
        evaluate(bad, 2)


def test_order_examples():
    assert order_at_level(Portrait.identity(BINARY, 3)) == 1
    for n in range(1, 7):
        assert order_at_level(odometer(n)) == 2**n
    swap = Portrait.from_vertex_map(BINARY, 3, {(): (1, 0)})
    assert order_at_level(swap) == 2


def test_powers_match_odometer_rule():
    g = odometer(5)
    for s in range(-9, 40):
        expected = evaluate(IsoGenerator(ValencySeq.regular(2, 5), odometer_rule(s)), 5)
        assert power(g, s) == expected


def test_shape_mismatch():
    a = Portrait.identity(BINARY, 3)
    b = Portrait.identity(BINARY, 2)
    with pytest.raises(ShapeError):
        compose(a, b)
    with pytest.raises(DepthError):
        apply(b, (0, 0, 0))


def test_from_leaf_action_round_trip():
    rng = random.Random(11)
    for m, depth in SHAPES:
        g = random_portrait(ValencySeq(m), depth, rng)
        assert Portrait.from_leaf_action(g.vs, depth, g.leaf_action) == g


@given(portraits(3))
@settings(max_examples=150)
def test_group_axioms(ps):
    f, g, h = ps
    e = Portrait.identity(f.vs, f.depth)
    assert compose(compose(f, g), h) == compose(f, compose(g, h))
    assert compose(e, f) == f == compose(f, e)
    assert compose(f, inverse(f)) == e == compose(inverse(f), f)


@given(portraits(2))
@settings(max_examples=150)
def test_homomorphism_against_path_walk(ps):
    f, g = ps
    fg = compose(f, g)
    expected = then(leaf_map(labels_of(f), f.vs.m, f.depth), leaf_map(labels_of(g), g.vs.m, g.depth))
    for k in range(f.depth + 1):
        for v in layer(f.vs, k):
            assert apply(fg, v) == apply(g, apply(f, v))
            assert apply(f, v) == walk(labels_of(f), v)
    assert {w: apply(fg, w) for w in expected} == expected


@given(portraits(2), st.data())
@settings(max_examples=150)
def test_truncation_is_a_homomorphism(ps, data):
    f, g = ps
    k = data.draw(st.integers(0, f.depth))
    assert truncate(compose(f, g), k) == compose(truncate(f, k), truncate(g, k))
    assert order_at_level(f) % order_at_level(truncate(f, k)) == 0


@given(portraits(1))
def test_layer_maps_are_bijections(ps):
    (g,) = ps
    for k, row in enumerate(g.actions):
        assert sorted(row) == list(range(g.vs.layer_size(k)))


@given(portraits(1))
def test_json_round_trip(ps):
    (g,) = ps
    assert Portrait.from_json(g.to_json()) == g
    assert Portrait.from_json(g.to_json()).to_json() == g.to_json()


def test_json_format():
    g = odometer(2)
    d = g.to_dict()
    assert d == {"valency": [2, 2], "depth": 2, "perms": {"": [1, 0], "0": [0, 1], "1": [1, 0]}}
