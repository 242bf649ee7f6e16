import numpy as np
import pytest

from beauville.dsl import parse_spec, parse_word
from beauville.errors import CosetLimitExceeded, UnboundGenerator, UnknownGenerator
from beauville.fp import Presentation, finitely_presented, realize, todd_coxeter
from beauville.groups import element_order, normal_closure
from beauville.words import Word, evaluate_word, generator_assignment

from corpus import P243_4, P243_4_RELATION, P729_34, P81_9, N729_34
from oracles import sympy_fp_order


def presentation(text: str) -> Presentation:
    node = parse_spec(text)
    return Presentation(node.generators, node.relators)


def check_table(table):
    rows = table.rows
    n = table.live
    assert table.is_complete()
    for col in range(rows.shape[1]):
        assert sorted(rows[:, col].tolist()) == list(range(n))
    for col in range(0, rows.shape[1], 2):
        assert np.array_equal(rows[rows[:, col], col + 1], np.arange(n))
    for r in table.presentation.relators:
        cols = table.presentation.letters(r)
        for c in range(n):
            cur = c
            for x in cols:
                cur = rows[cur, x]
            assert cur == c


def check_relators(G, p):
    a = generator_assignment(G)
    for r in p.relators:
        assert evaluate_word(G, a, r) == 0


def test_cyclic_five():
    p = presentation("fp(x; x^5)")
    t = todd_coxeter(p)
    assert t.live == 5
    check_table(t)
    G = realize(p, t)
    assert G.order == 5 and element_order(G, G.generators[0]) == 5


@pytest.mark.parametrize("text", [P243_4, P243_4_RELATION])
def test_p243_either_reading(text):
    p = presentation(text)
    t = todd_coxeter(p)
    assert t.live == 243
    check_table(t)
    G = realize(p, t)
    G.validate()
    check_relators(G, p)
    assert [element_order(G, g) for g in G.generators] == [9, 9]


def test_p729_34_presentations():
    pg = presentation(P729_34)
    G = realize(pg, todd_coxeter(pg))
    assert G.order == 729
    check_relators(G, pg)
    assert element_order(G, G.generators[0]) == 3
    seeds = [evaluate_word(G, generator_assignment(G), parse_word(w)) for w in N729_34]
    assert len(normal_closure(G, seeds)) == 9
    ph = presentation(P81_9)
    t = todd_coxeter(ph)
    assert t.live == 81
    check_table(t)


@pytest.mark.parametrize(
    "gens,rels,order",
    [
        (("a", "b"), ("a^2", "b^3", "(a*b)^5"), 60),
        (("a", "b"), ("a^2", "b^3", "(a*b)^4"), 24),
        (("a", "b"), ("a^2", "b^3", "(a*b)^3"), 12),
        (("a", "b"), ("a^4", "b^2", "(a*b)^2"), 8),
        (("a", "b"), ("a^4", "a^2*b^-2", "b^-1*a*b*a"), 8),
        (("a", "b"), ("a^7", "b^3", "b^-1*a*b*a^-2"), 21),
        (("a", "b", "c"), ("a^2", "b^2", "c^2", "(a*b)^3", "(b*c)^3", "(a*c)^2"), 24),
        (("x", "y"), ("x^3", "y^3", "(x*y)^3", "(x*y^-1)^3"), 27),
        (("a",), ("a^12", "a^18"), 6),
    ],
)
def test_orders_match_sympy(gens, rels, order):
    assert sympy_fp_order(gens, rels) == order
    p = Presentation(gens, tuple(parse_word(r) for r in rels))
    t = todd_coxeter(p)
    assert t.live == order
    check_table(t)
    G = realize(p, t)
    G.validate()
    check_relators(G, p)


def test_trivial_and_free_cases():
    assert finitely_presented(["a"], [parse_word("a")]).order == 1
    with pytest.raises(CosetLimitExceeded):
        finitely_presented(["a", "b"], [parse_word("[a, b]")], max_cosets=500)
    with pytest.raises(CosetLimitExceeded):
        finitely_presented(["a"], [], max_cosets=50)


@pytest.mark.parametrize("text", [P243_4, P81_9, "fp(a,b; a^2, b^3, (a*b)^5)"])
def test_order_stable_across_coset_limits(text):
    p = presentation(text)
    small = todd_coxeter(p, max_cosets=20_000)
    large = todd_coxeter(p, max_cosets=200_000)
    assert small.live == large.live
    assert np.array_equal(small.rows, large.rows)


def test_enumeration_is_deterministic():
    p = presentation(P243_4)
    assert np.array_equal(todd_coxeter(p).rows, todd_coxeter(p).rows)


def test_presentation_validation():
    with pytest.raises(UnknownGenerator):
        Presentation(("a",), (parse_word("b"),))
    with pytest.raises(ValueError):
        Presentation((), ())


def test_evaluate_word():
    G = finitely_presented(["a", "b"], [parse_word(w) for w in ("a^4", "b^2", "(a*b)^2")])
    a = generator_assignment(G)
    assert evaluate_word(G, a, Word()) == 0
    with pytest.raises(UnboundGenerator):
        evaluate_word(G, a, parse_word("c"))
    A = finitely_presented(["a", "b"], [parse_word(w) for w in ("a^3", "b^5", "[a, b]")])
    assert evaluate_word(A, generator_assignment(A), parse_word("[a, b]")) == 0
