import networkx as nx
import pytest
from oracles import brute

from singcox import (
    anti_involution,
    anti_isomorphism,
    atomic_rex_graph,
    compose,
    coset_of,
    dihedral_classify,
    enumerate_core,
    load_system,
    maximal_element,
)
from singcox.errors import BarMismatch, WrongCorank
from singcox.poset import complement_in_maximum

FIGURE_PATHS = [
    "1 11 21 31 41 51 61 7",
    "11 22 32 42 51",
    "1 12 23 31",
    "43 53 62 7",
    "12 24 34 44 52 61",
    "1 13 25 33 43 53 62",
    "13 26", "21 32", "22 33", "23 34", "24 35", "25 36", "26 35", "26 36",
    "35 45 55 63 7",
    "36 46", "41 52", "42 53", "43 54", "44 55", "45 56", "46 54", "46 56", "54 62", "56 63",
]
FIGURE_REX = [1, 1, 1, 2, 2, 4, 8, 24]


def figure_graph():
    g = nx.Graph()
    for path in FIGURE_PATHS:
        nodes = path.split()
        nx.add_path(g, nodes)
    for v in g:
        level = 0 if v == "1" else (7 if v == "7" else int(v[0]))
        g.nodes[v]["level"] = level
        g.nodes[v]["rex"] = FIGURE_REX[level]
    return g


def poset_graph(P):
    g = nx.Graph()
    for i, (lv, c) in enumerate(zip(P.levels, P.rex_counts)):
        g.add_node(i, level=lv, rex=c)
    g.add_edges_from(P.cover_pairs())
    return g


def test_figure_is_well_formed():
    g = figure_graph()
    assert g.number_of_nodes() == 32
    for u, v in g.edges:
        assert abs(g.nodes[u]["level"] - g.nodes[v]["level"]) == 1


def test_d4_hasse_matches_figure():
    S = load_system("D4")
    P = enumerate_core(S, S.mask("c"))
    assert len(P) == 32 and P.max_length == 7
    assert P.histogram == [1, 3, 6, 6, 6, 6, 3, 1]
    assert [sorted(set(x)) for x in P.rex_counts_by_length()] == [[c] for c in FIGURE_REX]
    match = lambda a, b: a["level"] == b["level"] and a["rex"] == b["rex"]
    assert nx.is_isomorphic(poset_graph(P), figure_graph(), node_match=match)
    # rex counts are what the braid closure finds
    for p, c in zip(P.elements, P.rex_counts):
        assert len(atomic_rex_graph(p)) == c


def test_hasse_dot_and_json():
    S = load_system("D4")
    P = enumerate_core(S, 0b0010)
    dot = P.hasse_dot()
    assert dot.count("->") == len(P.cover_pairs()) and "rank=same" in dot
    data = P.to_json()
    assert data["size"] == 32 and data["histogram"] == P.histogram and len(data["covers"]) == len(P.covers)
    assert P.maximum == maximal_element(S, 0b0010)


def _brute_core_cosets(name, J):
    S, G = load_system(name), brute(name)
    out = set()
    for I in range(1 << S.rank):
        WI, WJ = G.subgroup(I), G.subgroup(J)
        for block in G.partition(I, J):
            x = G.min_of(block)
            if {G.multiply(w, x) for w in WI} == {G.multiply(x, w) for w in WJ}:
                out.add(coset_of(S, I, S.element(G.words[x]), J).key)
    return out


@pytest.mark.parametrize("name", ["A3", "B3", "D4", "H3"])
def test_enumeration_matches_brute_force(name):
    S = load_system(name)
    for J in range(1 << S.rank):
        P = enumerate_core(S, J)
        assert {p.key for p in P.elements} == _brute_core_cosets(name, J)
        R = enumerate_core(S, J, side="right")
        assert {p.inverse().key for p in R.elements} == {p.key for p in P.elements}
        assert R.histogram == P.histogram


def test_weak_order_against_definition():
    S = load_system("D4")
    J = 0b0010
    P = enumerate_core(S, J)
    left_sets = {p.left for p in P.elements}
    core_to = {I: enumerate_core(S, I).elements for I in left_sets}
    for i, p in enumerate(P.elements):
        above = set()
        for r in [x for I in left_sets for x in core_to[I] if x.right == p.left]:
            q, reduced = compose(r, p)
            if reduced:
                above.add(P.position(q))
        assert above == {j for j in range(len(P)) if P.below(i, j)}
    for a, b, atom in P.covers:
        assert P.levels[b] == P.levels[a] + 1
        assert compose(atom.coset, P.elements[a]) == (P.elements[b], True)


def test_anti_involution_d4():
    S = load_system("D4")
    P = enumerate_core(S, 0b0010)
    f = anti_involution(S, 0b0010, P)
    assert all(f[f[i]] == i for i in f)
    assert {(f[b], f[a]) for a, b in P.cover_pairs()} == P.cover_pairs()
    for p in P.elements:
        q = complement_in_maximum(p)
        assert compose(q, p) == (P.maximum, True)


def test_anti_involution_needs_bar_fixed():
    S = load_system("A3")
    with pytest.raises(BarMismatch):
        anti_involution(S, 0b001)


def test_anti_isomorphism_a3():
    S = load_system("A3")
    J = 0b001
    P = enumerate_core(S, J)
    T = enumerate_core(S, S.bar_mask(J), side="right")
    g = anti_isomorphism(S, J, P, T)
    assert sorted(g.values()) == list(range(len(T)))
    assert {(g[b], g[a]) for a, b in P.cover_pairs()} == T.cover_pairs()


@pytest.mark.parametrize("name,J,m", [
    ("H4", "{s3,s4}", 10), ("H4", "{s1,s2}", 12), ("H4", "{s1,s3}", 12), ("H4", "{s2,s4}", 12),
    ("D4", "{c,s1}", 3), ("D4", "{s1,s3}", 4), ("D5", "{s1,s2,s3}", 3), ("A3", "{s2}", 3),
    ("B3", "{s2}", 4), ("A3", "{s1}", 3), ("B2", "{}", 4), ("I2(7)", "{}", 7),
])
def test_dihedral_classification(name, J, m):
    S = load_system(name)
    D = dihedral_classify(S, S.mask(J))
    assert D.m == m
    P = enumerate_core(S, S.mask(J))
    assert len(P) == 2 * m
    assert sum(P.rex_counts) == 2 * m + 1
    assert {c.key for c in D.cosets} == {p.key for p in P.elements}
    assert len(D.bijection()) == 2 * m
    top = atomic_rex_graph(P.maximum)
    assert len(top) == 2 and len(top.edges) == 1
    assert set(top.vertices) == set(D.braid)
    for p, c in zip(P.elements, P.rex_counts):
        assert c == (2 if p == P.maximum else 1)


def test_dihedral_wrong_corank():
    S = load_system("D4")
    with pytest.raises(WrongCorank):
        dihedral_classify(S, 0b0001)
