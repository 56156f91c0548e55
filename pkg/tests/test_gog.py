import pytest

from demuskin.words import Alphabet, Word, WordError, commutator, conjugate_in_free
from demuskin.gog import (GoEdge, GoGraph, GoVertex, GraphError, Presentation,
                          apply_endo, collapse_subtree, compose_images,
                          dehn_twist, fundamental_presentation, to_dot,
                          validate)


def amalgam_graph():
    a = Alphabet(("a1", "a2"))
    b = Alphabet(("b1", "b2"))
    return GoGraph(
        (GoVertex("A", a), GoVertex("B", b)),
        (GoEdge("e", "er", "B", b.word("b1 b2")),
         GoEdge("er", "e", "A", a.word("a1^2"))),
        frozenset({"e", "er"}),
    )


def loop_graph():
    a = Alphabet(("a1", "a2"))
    return GoGraph(
        (GoVertex("A", a),),
        (GoEdge("e", "er", "A", a.word("a1 a2")),
         GoEdge("er", "e", "A", a.word("a2"))),
        frozenset(),
    )


def triangle_graph():
    a, b, c = Alphabet(("a",)), Alphabet(("b",)), Alphabet(("c",))
    return GoGraph(
        (GoVertex("A", a), GoVertex("B", b), GoVertex("C", c)),
        (GoEdge("alpha", "alphar", "B", b.word("b")),
         GoEdge("alphar", "alpha", "A", a.word("a")),
         GoEdge("beta", "betar", "C", c.word("c")),
         GoEdge("betar", "beta", "B", b.word("b^2")),
         GoEdge("gamma", "gammar", "A", a.word("a^2")),
         GoEdge("gammar", "gamma", "C", c.word("c^3"))),
        frozenset({"alpha", "alphar", "beta", "betar"}),
    )


def test_validate_ok():
    assert validate(amalgam_graph()) == []
    assert validate(loop_graph()) == []
    assert validate(triangle_graph()) == []


def test_validate_trivial_boundary():
    a = Alphabet(("a1",))
    b = Alphabet(("b1",))
    g = GoGraph(
        (GoVertex("A", a), GoVertex("B", b)),
        (GoEdge("e", "er", "B", b.identity()),
         GoEdge("er", "e", "A", a.word("a1"))),
        frozenset({"e", "er"}),
    )
    assert any("trivial boundary" in msg for msg in validate(g))


def test_validate_disconnected():
    a, b = Alphabet(("a1",)), Alphabet(("b1",))
    g = GoGraph((GoVertex("A", a), GoVertex("B", b)), (), frozenset())
    msgs = validate(g)
    assert any("not connected" in m for m in msgs)


def test_fundamental_presentation_hnn():
    pres = fundamental_presentation(loop_graph())
    assert pres.alphabet.names == ("a1", "a2", "t_e")
    assert len(pres.relators) == 1
    # t phi_e t^-1 phi_ebar^-1
    assert str(pres.relators[0]) == "t_e a1 a2 t_e^-1 a2^-1"


def test_fundamental_presentation_amalgam():
    pres = fundamental_presentation(amalgam_graph())
    assert pres.alphabet.names == ("a1", "a2", "b1", "b2")
    assert [str(r) for r in pres.relators] == ["b1 b2 a1^-2"]


def test_fundamental_presentation_triangle():
    pres = fundamental_presentation(triangle_graph())
    # two identification relators and one stable letter
    assert pres.alphabet.names == ("a", "b", "c", "t_gamma")
    assert len(pres.relators) == 3
    stable = [r for r in pres.relators if "t_gamma" in str(r)]
    assert len(stable) == 1


def test_collapse_single_vertex_is_isomorphic():
    g = amalgam_graph()
    collapsed = collapse_subtree(g, ["A"])
    assert validate(collapsed) == []
    assert {v.id for v in collapsed.vertices} == {"A", "B"}
    assert {str(r) for r in fundamental_presentation(collapsed).relators} == \
        {str(r) for r in fundamental_presentation(g).relators}


def test_collapse_triangle_stepwise():
    g = triangle_graph()
    once = collapse_subtree(g, ["A", "B"], ["alpha"])
    assert validate(once) == []
    twice = collapse_subtree(once, [v.id for v in once.vertices],
                             ["beta"])
    assert validate(twice) == []
    assert len(twice.vertices) == 1
    (v,) = twice.vertices
    assert isinstance(v.data, Presentation)
    # one loop remains
    assert len(twice.orbits()) == 1
    pres = fundamental_presentation(twice)
    assert len(pres.relators) == 3


def test_collapse_whole_graph():
    g = triangle_graph()
    collapsed = collapse_subtree(g, ["A", "B", "C"],
                                 ["alpha", "beta", "gamma"])
    assert len(collapsed.vertices) == 1
    assert collapsed.edges == ()
    (v,) = collapsed.vertices
    assert isinstance(v.data, Presentation)
    assert len(v.data.relators) == 3


def test_collapse_relator_sets_match():
    # Tietze relation: collapsing tree edges leaves the same relator set
    g = triangle_graph()
    before = {str(r) for r in fundamental_presentation(g).relators}
    after = {str(r) for r in
             fundamental_presentation(collapse_subtree(g, ["A", "B"], ["alpha"])).relators}
    assert before == after


def test_collapse_rejects_non_subgraph():
    g = triangle_graph()
    with pytest.raises(GraphError):
        collapse_subtree(g, ["A"], ["alpha"])  # alpha leaves {A}


def test_dehn_twist_all_zero_is_identity():
    g = amalgam_graph()
    endo = dehn_twist(g, {}, "A", 1)
    pres = fundamental_presentation(g)
    for name in pres.alphabet.names:
        assert endo[name] == pres.alphabet.gen(name)


def test_dehn_twist_amalgam():
    g = amalgam_graph()
    endo = dehn_twist(g, {"e": 1}, "A", 1)
    pres = fundamental_presentation(g)
    big = pres.alphabet
    phi = big.word("b1 b2")
    for name in ("a1", "a2"):
        assert endo[name] == big.gen(name)
    for name in ("b1", "b2"):
        assert endo[name] == phi * big.gen(name) * phi.inverse()


def test_dehn_twist_hnn_loop():
    g = loop_graph()
    endo = dehn_twist(g, {"e": 1}, "A", 1)
    big = fundamental_presentation(g).alphabet
    assert endo["t_e"] == big.word("a2") * big.gen("t_e")
    assert endo["a1"] == big.gen("a1")


def test_dehn_twist_base_must_exist():
    with pytest.raises(GraphError):
        dehn_twist(loop_graph(), {"e": 1}, "Z", 1)


def test_twist_power_law_on_loop():
    g = loop_graph()
    one = dehn_twist(g, {"e": 1}, "A", 1)
    two = dehn_twist(g, {"e": 1}, "A", 2)
    double_m = dehn_twist(g, {"e": 2}, "A", 1)
    big = fundamental_presentation(g).alphabet
    for name in big.names:
        iterated = apply_endo(one, apply_endo(one, big.gen(name)))
        assert iterated == two[name] == double_m[name]


def test_twist_sends_relator_to_conjugate():
    for g in (amalgam_graph(), loop_graph()):
        pres = fundamental_presentation(g)
        endo = dehn_twist(g, {"e": 1}, "A", 1)
        for rel in pres.relators:
            assert conjugate_in_free(apply_endo(endo, rel), rel)


def test_apply_endo_identity_and_composition():
    a = Alphabet(("x", "y"))
    ident = {"x": a.gen("x"), "y": a.gen("y")}
    w = a.word("x y x^-1 y^-1")
    assert apply_endo(ident, w) == w
    sq = {"x": a.word("x y"), "y": a.gen("y")}
    comp = compose_images(sq, sq)
    assert apply_endo(comp, a.gen("x")) == apply_endo(sq, apply_endo(sq, a.gen("x")))


def test_apply_endo_unmapped_generator():
    a = Alphabet(("x", "y"))
    with pytest.raises(WordError):
        apply_endo({"x": a.gen("x")}, a.word("x y"))


def test_neukirch_substitution_identity():
    # psi with x4 -> x4 x3 turns [x3, x4] into [x3, x4 x3]
    a = Alphabet(("x3", "x4"))
    psi = {"x3": a.gen("x3"), "x4": a.word("x4 x3")}
    lhs = apply_endo(psi, commutator(a.gen("x3"), a.gen("x4")))
    rhs = commutator(a.gen("x3"), a.word("x4 x3"))
    assert lhs == rhs


def test_dot_output():
    dot = to_dot(triangle_graph())
    assert dot.startswith("graph")
    assert dot.count("--") == 3
    assert dot.count("{") == dot.count("}") == 1


def test_graph_json_round_trip():
    g = triangle_graph()
    data = g.to_json()
    g2 = GoGraph.from_json(data)
    assert g2.to_json() == data
    assert fundamental_presentation(g2).relators == fundamental_presentation(g).relators


def test_collapsed_graph_json_round_trip():
    g = collapse_subtree(triangle_graph(), ["A", "B"], ["alpha"])
    data = g.to_json()
    g2 = GoGraph.from_json(data)
    assert g2.to_json() == data
    assert {str(r) for r in fundamental_presentation(g2).relators} == \
        {str(r) for r in fundamental_presentation(g).relators}
