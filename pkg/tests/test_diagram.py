import math

import pytest
from hypothesis import given, strategies as st

from coxstar.diagram import (
    DiagramError,
    GeneralSystem,
    StarSystem,
    coxeter_matrix,
    diagram_automorphisms,
    generator_class,
    hyperbolicity_report,
    index_partitions,
    is_hyperbolic,
    parse_any,
    parse_general,
    parse_star,
)

labels_st = st.lists(st.integers(2, 9), min_size=2, max_size=5)


def test_parse_star_basic():
    s = parse_star("labels 3 4")
    assert s == StarSystem((3, 4)) and s.n == 2 and s.rank == 3
    assert parse_star(b"# comment\nlabels 3 4  # trailing\n") == s


@pytest.mark.parametrize("text", ["labels 2", "labels 3 1 5", "labels", "labels 3 x", "", "foo 3 4"])
def test_parse_star_rejects(text):
    with pytest.raises(DiagramError):
        parse_star(text)


@pytest.mark.parametrize("labels, odd, even, two", [
    ((3, 4, 6), {1}, {2, 3}, set()),
    ((2, 2), set(), {1, 2}, {1, 2}),
    ((3, 3, 5), {1, 2, 3}, set(), set()),
])
def test_index_partitions(labels, odd, even, two):
    assert index_partitions(StarSystem(labels)) == (odd, even, two)


def test_diagram_automorphisms_examples():
    d = diagram_automorphisms(StarSystem.of(3, 3, 4))
    assert d.order == 2 and d.odd_blocks == ((1, 2),) and d.even_blocks == ()
    assert diagram_automorphisms(StarSystem.of(3, 4, 6)).order == 1
    d = diagram_automorphisms(StarSystem.of(4, 4, 4))
    assert d.order == 6 and d.even_blocks == ((1, 2, 3),)
    assert len(d.elements()) == 6


@given(labels_st)
def test_diag_order_matches_elements(labels):
    sys = StarSystem(tuple(labels))
    d = diagram_automorphisms(sys)
    elems = d.elements()
    assert len(elems) == len(set(elems)) == d.order
    for p in elems:
        assert all(sys.m(i) == sys.m(p[i - 1]) for i in sys.leaves)
    want = 1
    for lab in set(labels):
        want *= math.factorial(labels.count(lab))
    assert d.order == want


def test_generator_class():
    s = StarSystem.of(3, 4)
    assert [generator_class(s, i).tag for i in range(3)] == ["central-odd", "central-odd", "even-leaf"]
    assert generator_class(s, 2).leaf == 2
    with pytest.raises(IndexError):
        generator_class(s, 3)


@pytest.mark.parametrize("labels", [(3, 4), (2, 2, 2), (6, 6, 6, 6), (2, 3), (7, 7)])
def test_hyperbolic(labels):
    assert is_hyperbolic(StarSystem(labels))


def test_hyperbolicity_detects_affine():
    # affine A~2 triangle and a commuting pair of infinite parabolics
    inf = math.inf
    rep = hyperbolicity_report([[1, 3, 3], [3, 1, 3], [3, 3, 1]])
    assert not rep.hyperbolic and rep.affine_simplices
    rep = hyperbolicity_report([[1, inf, 2, 2], [inf, 1, 2, 2], [2, 2, 1, inf], [2, 2, inf, 1]])
    assert not rep.hyperbolic and rep.commuting_infinite_pairs


def test_coxeter_matrix_shape():
    m = coxeter_matrix(StarSystem.of(3, 4))
    assert m[0] == [1, 3, 4] and m[1][2] == math.inf and m[2][1] == math.inf


def test_general_roundtrip():
    text = "vertex a\nvertex b\nvertex c\nedge a b 3\nedge b c 4\n"
    g = parse_general(text)
    assert parse_general(g.to_text()) == g
    assert g.label("a", "c") == math.inf and g.degree("b") == 2
    assert not g.is_star() or g.star_center() == "b"


def test_general_errors():
    for bad in ["vertex a\nedge a b 3\n", "vertex a\nvertex a\n", "vertex a\nvertex b\nedge a b 1\n",
                "vertex a\nvertex b\nedge a b 3\nedge b a 3\n", "edge a b 3\n", "vertex a\nvertex b\nedge a a 3\n"]:
        with pytest.raises(DiagramError):
            parse_general(bad)


def test_parse_any_star_and_to_star():
    g = parse_any("labels 3 4")
    assert g.is_star() and g.to_star() == StarSystem.of(3, 4) and g.reference == StarSystem.of(3, 4)
    h = GeneralSystem.from_star(StarSystem.of(5, 2, 2), ["c", "x", "y", "z"])
    assert h.star_center() == "c" and h.label_multiset() == (2, 2, 5)
