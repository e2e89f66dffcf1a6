import json
import random

import pytest

from checks import check_matsumoto, check_nil, random_admissible_nonreduced, random_atomic, trace_problems
from singcox import (
    ZERO,
    AtomicExpression,
    NilMorphism,
    apply_shrinking_moves,
    atomic_braid,
    atomic_factorize,
    atomic_length,
    atomic_rex_graph,
    enumerate_atomic_rexes,
    evaluate,
    load_system,
    maximal_element,
    neighbors,
    nil_compose,
    parse_atomic,
    parse_expression,
    presentation_witness,
    reduce_admissible,
    singular_rex_graph,
)
from singcox.errors import Budget, MismatchedMiddle, NotAdmissible, NotCore
from singcox.rewrite import vertex_id


def test_neighbors_apply_the_braid_relation():
    S = load_system("D4")
    lhs, rhs = atomic_braid(S, S.full, S.gen("s4"), S.gen("s2"))
    assert (rhs, "atomic-braid@0") in neighbors(lhs)
    assert (lhs, "atomic-braid@0") in neighbors(rhs)


def test_d4_maximal_rex_graph():
    S = load_system("D4")
    p = maximal_element(S, S.gen("s2") and 0b0010)
    g = atomic_rex_graph(p)
    assert len(g) == 24 and g.is_connected()
    assert {v.width for v in g.vertices} == {14}
    assert atomic_length(p) == 7
    assert set(g.vertices) == enumerate_atomic_rexes(p)
    data = g.to_json()
    assert len(data["vertices"]) == 24
    assert json.loads(json.dumps(data)) == data
    dot = g.to_dot()
    assert dot.startswith("graph") and dot.count("--") == len(g.edges)
    assert vertex_id(g.vertices[0].format()) == vertex_id(g.vertices[0].format())


def test_atomic_length_rejects_non_core():
    S = load_system("A2")
    from singcox import identity_coset

    with pytest.raises(NotCore):
        atomic_length(identity_coset(S, 0b01, 0b11))


@pytest.mark.parametrize("name", ["A3", "B3", "H3", "I2(5)", "A4"])
def test_matsumoto_small(name):
    bad, skipped = check_matsumoto(name)
    assert bad == [] and skipped == 0


@pytest.mark.parametrize("name", ["A3", "B3", "D4"])
def test_nil_compose(name):
    assert check_nil(name, samples=150, seed=5) == []


def test_nil_compose_edges():
    S = load_system("A3")
    a = parse_atomic(S, "[{s2} +s1 -s2]").atoms[0]
    m = NilMorphism(a.coset)
    assert (m.source, m.target) == (0b010, 0b001)
    assert nil_compose([m, NilMorphism(a.inverse().coset)]) is ZERO
    assert nil_compose([m, ZERO]) is ZERO
    assert not ZERO and repr(ZERO) == "ZERO"
    with pytest.raises(MismatchedMiddle):
        nil_compose([m, m])
    with pytest.raises(ValueError):
        nil_compose([])


def test_singular_rex_graph_contains_atomic_rexes():
    S = load_system("D4")
    p = maximal_element(S, 0b0010)
    e = atomic_factorize(p)
    g = singular_rex_graph(S, e.singular())
    assert {v.singular() for v in enumerate_atomic_rexes(p)} <= set(g.vertices)
    for v in g.vertices:
        ev = evaluate(S, v)
        assert ev.reduced and ev.coset == p
    with pytest.raises(Exception):
        singular_rex_graph(S, parse_expression(S, "[{s1,s3} +s2 -s2 +s2 -s2]"))


def test_budget():
    S = load_system("D4")
    with pytest.raises(Budget):
        atomic_rex_graph(maximal_element(S, 0b0010), budget=5)
    with pytest.raises(Budget):
        enumerate_atomic_rexes(maximal_element(S, 0), budget=10)


def test_quadratic_reduction():
    S = load_system("A3")
    e = parse_atomic(S, "[{s1,s3} +s2 -s2 +s2 -s2]")
    r, trace = reduce_admissible(e)
    assert r.format() == "[{s1,s3} +s2 -s2]"
    assert [m.kind for m in trace] == ["quadratic"]
    assert r.evaluate().coset == e.evaluate().coset


def test_literal_cubic_move():
    S = load_system("A3")
    # [I + s - t + t - s + s - t] with I = {s2}, s = s1 and t = s2
    e = parse_atomic(S, "[{s2} +s1 -s2 +s2 -s1 +s1 -s2]")
    assert not e.is_admissible()
    with pytest.raises(NotAdmissible):
        reduce_admissible(e)
    r, trace = apply_shrinking_moves(e)
    assert r.format() == "[{s2} +s1 -s2]"
    assert [m.kind for m in trace] == ["cubic"]
    assert r.evaluate().coset == e.evaluate().coset


def _check_trace(S, e, r, trace):
    assert trace_problems(S, e, r, trace) == []


@pytest.mark.parametrize("name", ["A3", "B3", "D4"])
def test_reduce_admissible_random(name):
    S = load_system(name)
    rng = random.Random(11)
    kinds = set()
    for _ in range(60):
        e = random_admissible_nonreduced(S, rng)
        r, trace = reduce_admissible(e)
        assert r.is_reduced() and r.evaluate().coset == e.evaluate().coset
        _check_trace(S, e, r, trace)
        kinds |= {m.kind for m in trace}
    assert "quadratic" in kinds


def test_presentation_witness():
    S = load_system("A3")
    e, k = presentation_witness(parse_atomic(S, "[{s2} +s1 -s2 +s2 -s1]"))
    assert k == 0
    rng = random.Random(2)
    found = 0
    for _ in range(400):
        chain = random_atomic(S, rng, rng.randrange(2, 6))
        if nil_compose([NilMorphism(a.coset) for a in chain.atoms]) is not ZERO:
            with pytest.raises(Exception):
                presentation_witness(chain)
            continue
        found += 1
        w, k = presentation_witness(chain)
        assert (w.start, w.end, len(w)) == (chain.start, chain.end, len(chain))
        a, b = w.atoms[k], w.atoms[k + 1]
        assert b == a.inverse()
        assert w.evaluate().coset == chain.evaluate().coset
    assert found > 20


def _all_chains(S, n):
    from singcox.coxeter import bits

    for start in range(S.full):
        stack = [(start, ())]
        while stack:
            L, ups = stack.pop()
            if ups:
                yield AtomicExpression(S, start, ups)
            if len(ups) < n:
                for x in bits(S.full & ~L):
                    K = L | (1 << x)
                    stack.append((K & ~(1 << S.bar(x, K)), ups + (x,)))


@pytest.mark.parametrize("name,n", [("A3", 6), ("B3", 5), ("D4", 4)])
def test_first_bad_atom_of_admissible_is_quadratic(name, n):
    """At the first non-reduced atom of an admissible expression the atom is
    always [+s -s]: the cubic shape never survives admissibility."""
    S = load_system(name)
    count = 0
    for e in _all_chains(S, n):
        if e.is_reduced() or not e.is_admissible():
            continue
        count += 1
        m = e.evaluate().first_bad // 2
        assert e.ups[m] == e.downs[m]
    assert count > 100
