import json
import math

import pytest
from hypothesis import given, settings, strategies as st
from oracles import brute

from singcox import CoxeterMatrix, CoxeterSystem, INF, build_system, load_system, preset
from singcox.coxeter import bits, popcount
from singcox.errors import InvalidMatrix, NonFinite, NotAGenerator

ORDERS = {
    "A1": 2, "A2": 6, "A3": 24, "A4": 120, "B2": 8, "B3": 48, "D4": 192, "D5": 1920,
    "E6": 51840, "F4": 1152, "G2": 12, "H3": 120, "H4": 14400, "I2(7)": 14,
}


@pytest.mark.parametrize("name,order", sorted(ORDERS.items()))
def test_group_orders(name, order):
    assert load_system(name).order == order


@pytest.mark.parametrize("name,npos", [("E8", 120), ("E7", 63), ("H4", 60), ("F4", 24)])
def test_positive_root_counts(name, npos):
    assert load_system(name).npos == npos


def test_e8_stays_lazy():
    S = load_system("E8")
    w0 = S.longest
    assert w0.length == 120
    assert "elements" not in S.__dict__
    assert all(S.bar(s) == s for s in range(8))


@pytest.mark.parametrize("name", ["A3", "B3", "D4", "H3", "I2(5)", "F4"])
def test_lengths_match_cayley_distance(name):
    S, G = load_system(name), brute(name)
    assert S.order == G.order
    for x in S.elements:
        i = G.id_of(x)
        assert x.length == G.length[i] == len(x.word)
        assert S.element(G.words[i]) == x


@pytest.mark.parametrize("name", ["A3", "B3", "H3"])
def test_multiplication_table(name):
    S, G = load_system(name), brute(name)
    elems = S.elements
    for x in elems[::7]:
        for y in elems[::5]:
            assert G.id_of(x * y) == G.multiply(G.id_of(x), G.id_of(y))
        assert (x * x.inverse()) == S.identity


def test_descents_and_longest():
    S = load_system("A3")
    w0 = S.longest
    assert w0.length == 6
    assert S.descents(w0) == S.full == S.descents(w0, "left")
    assert S.descents(S.identity) == 0
    x = S.element([0, 1])
    assert S.descents(x) == 0b010 and S.descents(x, "left") == 0b001
    for mask in range(8):
        wk = S.longest_element(mask)
        assert wk.length == max(y.length for y in S.parabolic_elements(mask))


def test_star_product():
    S = load_system("A2")
    s1, s2 = S.generators
    assert S.star(s1, s1) == s1
    assert S.star(s1, s2) == s1 * s2
    assert S.star(S.star(s1, s2), s1) == S.longest
    assert S.star_many(s1, s2, s1, s2) == S.longest


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_star_associative_and_monotone(data):
    S = load_system("B3")
    pick = st.sampled_from(S.elements)
    x, y, z = data.draw(pick), data.draw(pick), data.draw(pick)
    assert S.star(S.star(x, y), z) == S.star(x, S.star(y, z))
    xy = S.star(x, y)
    assert xy.length >= max(x.length, y.length)
    assert S.is_reduced_product(x, y) == ((x * y).length == x.length + y.length)
    if S.is_reduced_product(x, y):
        assert xy == x * y


@pytest.mark.parametrize("name,expected", [
    ("A3", [2, 1, 0]), ("A4", [3, 2, 1, 0]), ("D4", [0, 1, 2, 3]), ("D5", [0, 1, 2, 4, 3]),
    ("E6", [5, 1, 4, 3, 2, 0]), ("E7", list(range(7))), ("H3", [0, 1, 2]), ("I2(5)", [1, 0]), ("I2(6)", [0, 1]),
])
def test_bar_involution(name, expected):
    S = load_system(name)
    assert [S.bar(s) for s in range(S.rank)] == expected


def test_bar_inside_parabolic():
    S = load_system("D4")
    # in the A3 parabolic {s1,s2,s3}, bar swaps s1 and s3
    assert S.bar(0, 0b0111) == 2
    with pytest.raises(NotAGenerator):
        S.bar(3, 0b0111)


@pytest.mark.parametrize("name", ["A3", "B3", "D4", "H3", "F4"])
def test_poincare_polynomial_symmetric(name):
    S = load_system(name)
    counts = [0] * (S.longest.length + 1)
    for x in S.elements:
        counts[x.length] += 1
    assert counts == counts[::-1]
    assert counts[0] == 1 and counts[1] == S.rank


def test_matrix_validation():
    with pytest.raises(InvalidMatrix):
        CoxeterMatrix.from_labels([[1, 3], [2, 1]])
    with pytest.raises(InvalidMatrix):
        CoxeterMatrix.from_labels([[1, 1], [1, 1]])
    with pytest.raises(InvalidMatrix):
        CoxeterMatrix.from_labels([[2, 3], [3, 1]])
    with pytest.raises(InvalidMatrix):
        preset("Z9")
    with pytest.raises(InvalidMatrix):
        CoxeterMatrix.from_labels([[1, 3], [3, 1]], names=["a", "a"])


def test_infinite_and_affine_are_rejected():
    with pytest.raises(NonFinite):
        CoxeterSystem(CoxeterMatrix.from_labels([[1, 0], [0, 1]]))
    assert CoxeterMatrix.from_labels([[1, 0], [0, 1]]).labels[0][1] == INF
    affine_a2 = CoxeterMatrix.from_labels([[1, 3, 3], [3, 1, 3], [3, 3, 1]])
    with pytest.raises(NonFinite):
        CoxeterSystem(affine_a2, root_cap=500)


def test_element_cap():
    with pytest.raises(NonFinite):
        build_system(preset("A4"), cap=100)


def test_json_roundtrip(tmp_path):
    m = preset("H3")
    path = tmp_path / "h3.json"
    path.write_text(json.dumps(m.to_json()))
    S = load_system(str(path))
    assert S.matrix == m and S.order == 120


def test_reordered_and_names():
    S = load_system("D4", order=["s2", "s1", "s3", "s4"])
    assert S.names == ("s2", "s1", "s3", "s4")
    assert S.order == 192
    D = load_system("D4")
    assert D.gen("c") == 1 and D.gen("s3") == 2 and D.gen(0) == 0
    assert D.mask("{s1,s3}") == D.mask(["s1", "s3"]) == 0b0101
    assert D.format_subset(0b0101) == "{s1,s3}"
    assert D.format_word(()) == "e"
    with pytest.raises(NotAGenerator):
        D.gen("s9")


def test_bits_popcount():
    assert list(bits(0b10110)) == [1, 2, 4]
    assert popcount(0b10110) == 3


def test_word_is_shortlex_minimal():
    S = load_system("A3")
    words = [x.word for x in S.elements]
    for x, w in zip(S.elements, words):
        same = [v for y, v in zip(S.elements, words) if y == x]
        assert w == min(same)
    assert S.longest.word == (0, 1, 0, 2, 1, 0)


def test_conjugate_generator():
    S = load_system("A2")
    w0 = S.longest
    assert S.conjugate_generator(w0, 0) == 1
    assert S.conjugate_generator(S.generators[0], 1) is None
    assert math.isclose(S.ring.to_float(S.roots[2][0]), 1.0)
