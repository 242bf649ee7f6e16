import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beauville.catalog import expand_presets
from beauville.constructions import cyclic_group, quotient
from beauville.core import (
    Classification,
    GeneratingPair,
    beauville_dimension,
    check_structure,
    enumerate_sigma_records,
    is_faithfully_represented,
    is_generating_pair,
    iter_structures,
    lift_structure,
    minimum_family,
    prune_supersets,
    sigma,
    verify_certificate,
)
from beauville.dsl import build, parse_word
from beauville.elements import ElementSet
from beauville.errors import (
    DegenerateTrivialGroup,
    EmptyFamily,
    ImagesNotStructure,
    NotGenerating,
    NotTwoGenerated,
    PremiseFailed,
)
from beauville.groups import cyclic_subgroup, element_order, normal_closure
from beauville.words import evaluate_word, generator_assignment

from corpus import P243_4, P729_9, P729_34, N729_34, group, small_specs
from oracles import Naive, all_subsets_trivial, brute_dimension

THM8_7 = "C(3) x sd(C(7), C(3), [2])"


def ev(G, w):
    """Evaluate ``w``; ``x`` and ``y`` name the designated generators."""
    names = dict(zip("xy", G.generators))
    names.update(generator_assignment(G))
    return evaluate_word(G, names, parse_word(w))


def _has_pair(G):
    try:
        enumerate_sigma_records(G)
    except NotTwoGenerated:
        return False
    return True


ORACLE_CORPUS = [s for s in small_specs(100) if group(s).order > 1 and _has_pair(group(s))]
SMALL = [s for s in ORACLE_CORPUS if group(s).order <= 60]


# --- sigma ------------------------------------------------------------------


def test_sigma_examples():
    G = group("C(3) x C(3)")
    x, y = G.generators
    s = sigma(G, x, y)
    expected = set(cyclic_subgroup(G, x)) | set(cyclic_subgroup(G, y)) | set(cyclic_subgroup(G, G.mul(x, y)))
    assert len(s) == 7 and set(s) == expected
    C5 = cyclic_group(5)
    assert sigma(C5, C5.generators[0], 0) == ElementSet.full(5)
    T = group(THM8_7)
    order3 = [g for g in range(T.order) if T.element_orders[g] == 3]
    from beauville.groups import center

    z = center(T)
    noncentral = [g for g in order3 if g not in z]
    x, y = next((a, b) for a, b in itertools.combinations(noncentral, 2) if is_generating_pair(T, a, b))
    s = sigma(T, x, y)
    assert len(s) == 43
    assert sum(1 for g in s if T.element_orders[g] == 3) == 42


def test_generating_pair_examples():
    G = group("C(3) x C(3)")
    assert not is_generating_pair(G, 0, 0)
    C5 = cyclic_group(5)
    assert is_generating_pair(C5, C5.generators[0], 0)
    assert sum(is_generating_pair(G, x, y) for x in range(9) for y in range(9)) == 48
    assert len(Naive(G).generating_pairs()) == 48


def test_generating_pair_triple():
    G = group("@S3")
    p = GeneratingPair.of(G, *G.generators)
    assert G.mul(G.mul(p.x, p.y), p.z) == 0


@pytest.mark.parametrize("spec", SMALL)
def test_sigma_records_match_oracle(spec):
    G = group(spec)
    nv = Naive(G)
    records = enumerate_sigma_records(G)
    assert {frozenset(r.carrier) for r in records} == nv.carriers()
    pairs = nv.generating_pairs()
    assert sum(r.pair_count for r in records) == len(pairs)
    counts = {}
    for x, y in pairs:
        key = nv.sigma(x, y)
        counts[key] = counts.get(key, 0) + 1
    assert {frozenset(r.carrier): r.pair_count for r in records} == counts
    for r in records:
        p = r.canonical_pair
        assert is_generating_pair(G, p.x, p.y)
        assert sigma(G, p.x, p.y) == r.carrier
        assert 1 <= len(r.producing_pairs) <= 16
        assert r.canonical_pair == r.producing_pairs[0]


@pytest.mark.parametrize("spec", SMALL)
def test_sigma_symmetry_and_conjugation_invariance(spec):
    G = group(spec)
    n = G.order
    records = enumerate_sigma_records(G)
    ids = {r.carrier.mask: i for i, r in enumerate(records)}
    table = np.full((n, n), -1)
    for x in range(n):
        for y in range(n):
            if is_generating_pair(G, x, y):
                table[x, y] = ids[sigma(G, x, y).mask]
    assert np.array_equal(table, table.T)
    g = np.arange(n)
    for h in range(n):
        conj = G.mult[G.mult[G.inv[h], g], h]
        assert np.array_equal(table[np.ix_(conj, conj)], table)


def test_record_counts():
    assert len(enumerate_sigma_records(group("C(3) x C(3)"))) == 4
    assert len(enumerate_sigma_records(group(THM8_7))) == 4
    C55 = group("C(5) x C(5)")
    assert len(enumerate_sigma_records(C55)) == len(Naive(C55).carriers()) == 20


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(ORACLE_CORPUS), st.data())
def test_carrier_closure(spec, data):
    G = group(spec)
    records = enumerate_sigma_records(G)
    r = records[data.draw(st.integers(0, len(records) - 1))]
    c = r.carrier
    assert 0 in c
    e = data.draw(st.sampled_from(list(c)))
    h = data.draw(st.integers(0, G.order - 1))
    k = data.draw(st.integers(-20, 20))
    assert G.power(e, k) in c
    assert G.mul(G.mul(int(G.inv[h]), e), h) in c
    p = r.canonical_pair
    for g in (p.x, p.y, G.mul(p.x, p.y)):
        assert cyclic_subgroup(G, g).issubset(c)


def test_not_two_generated():
    with pytest.raises(NotTwoGenerated):
        enumerate_sigma_records(group("C(2) x C(2) x C(2)"))
    with pytest.raises(NotTwoGenerated):
        beauville_dimension(group("C(3) x C(3) x C(3)"))
    with pytest.raises(DegenerateTrivialGroup):
        beauville_dimension(cyclic_group(1))


# --- dimension --------------------------------------------------------------


@pytest.mark.parametrize(
    "spec,d",
    [("C(3) x C(3)", 4), ("C(5) x C(5)", 2), ("C(4) x C(4)", 1), (P243_4, 3), ("@S5", 2), (THM8_7, 4)],
)
def test_dimension_examples(spec, d):
    G = group(spec)
    r = beauville_dimension(G)
    assert r.d == d
    assert verify_certificate(G, r)
    if d == 1:
        assert r.witness is None and r.blocking_element not in (None, 0)
        assert all(r.blocking_element in rec.carrier for rec in r.records)
    else:
        assert r.blocking_element is None and len(r.witness.pairs) == d
        assert r.witness.intersection().is_trivial()
        masks = [rec.carrier.mask for rec in r.records]
        assert minimum_family(masks, G.order, max_size=d - 1) is None


@pytest.mark.parametrize("spec", ORACLE_CORPUS)
def test_pruned_dimension_matches_brute_force(spec):
    G = group(spec)
    r = beauville_dimension(G)
    assert r.d == brute_dimension(G)
    assert beauville_dimension(G, prune=False).d == r.d
    assert verify_certificate(G, r)


def test_certificate_rejects_tampering():
    G = group("C(3) x C(3)")
    r = beauville_dimension(G)
    bad = type(r)(r.d, r.witness, None, r.certificate[1:], r.records)
    assert not verify_certificate(G, bad)
    e, i = r.certificate[0]
    wrong = next(j for j in range(r.d) if e in r.witness.sigma_carriers[j])
    bad = type(r)(r.d, r.witness, None, ((e, wrong),) + r.certificate[1:], r.records)
    assert not verify_certificate(G, bad)


def test_minimum_family_and_pruning():
    n = 7
    masks = [0b0000111, 0b0001111, 0b0011001, 0b1100001]
    assert prune_supersets(masks) == [0, 2, 3]
    assert minimum_family(masks, n) == [0, 2]
    assert minimum_family(masks, n, prune=False) == [0, 2]
    assert minimum_family([0b111, 0b101], 3) is None
    assert minimum_family(masks, n, max_size=1) is None


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(1, 2**9 - 1).map(lambda m: m << 1 | 1), min_size=1, max_size=9, unique=True))
def test_minimum_family_matches_exhaustive(masks):
    # like real carriers: distinct, each with the identity and something else
    sets = [frozenset(i for i in range(10) if m >> i & 1) for m in masks]
    trivial = all_subsets_trivial(sets)
    found = minimum_family(masks, 10)
    if not trivial:
        assert found is None
    else:
        assert found is not None and len(found) == min(map(len, trivial))
        inter = -1
        for i in found:
            inter &= masks[i]
        assert inter == 1


def test_workers_give_identical_records():
    for spec in (P243_4, "@S5", "C(3) x @A4"):
        a = enumerate_sigma_records(build(expand_presets(spec)), workers=1)
        b = enumerate_sigma_records(build(expand_presets(spec)), workers=4)
        assert a == b


# --- structures -------------------------------------------------------------


def test_c3xc3_family_is_minimal():
    G = group("C(3) x C(3)")
    fam = [(ev(G, a), ev(G, b)) for a, b in [("x", "y"), ("x", "x*y"), ("y", "x*y^2"), ("y", "x*y")]]
    assert [len(c) for c in check_structure(G, fam).sigma_carriers] == [7] * 4
    s = check_structure(G, fam)
    assert s.classification is Classification.MINIMAL and s.is_structure
    for k in (2, 3):
        for sub in itertools.combinations(fam, k):
            assert check_structure(G, sub).classification is Classification.NOT_A_STRUCTURE


def p243_family(G):
    return [
        (ev(G, "x^-1*y^3"), ev(G, "x^2*y")),
        (ev(G, "x^3*y^-1"), ev(G, "x*y^-3")),
        (ev(G, "x^-1*y"), ev(G, "x*y")),
    ]


def test_p243_family():
    G = group(P243_4)
    fam = p243_family(G)
    assert check_structure(G, fam).classification is Classification.MINIMAL
    for a, b in itertools.combinations(fam, 2):
        assert check_structure(G, [a, b]).classification is Classification.NOT_A_STRUCTURE


def p729_family(G):
    return [(ev(G, a), ev(G, b)) for a, b in [("x", "y"), ("x", "x*y"), ("y", "x^2*y"), ("x", "x^2*y")]]


def test_p729_family_is_non_derived():
    G = group(P729_34)
    s = check_structure(G, p729_family(G))
    assert s.classification is Classification.NON_DERIVED
    assert beauville_dimension(G).d == 2


def test_derived_classification():
    G = group("C(3) x C(3)")
    fam = [(ev(G, a), ev(G, b)) for a, b in [("x", "y"), ("x", "x*y"), ("y", "x*y^2"), ("y", "x*y"), ("x", "y")]]
    assert check_structure(G, fam).classification is Classification.DERIVED
    H = group("C(5) x C(5)")
    r = beauville_dimension(H)
    pair = r.witness.pairs
    assert check_structure(H, list(pair)).classification is Classification.MINIMAL
    assert check_structure(H, list(pair) + [pair[0]]).classification is Classification.DERIVED


def test_check_structure_errors():
    G = group("C(3) x C(3)")
    with pytest.raises(EmptyFamily):
        check_structure(G, [])
    with pytest.raises(NotGenerating):
        check_structure(G, [(0, 0)])


@pytest.mark.parametrize("spec", [s for s in ORACLE_CORPUS if group(s).order <= 64][:60])
def test_lemma2b_bounds(spec):
    G = group(spec)
    r = beauville_dimension(G)
    if r.d == 1:
        assert list(iter_structures(G)) == []
        return
    for fam in iter_structures(G, minimal_only=False, limit=20):
        s = check_structure(G, fam.pairs)
        assert s.is_structure
        assert 2 <= r.d <= len(fam.pairs)
        assert s.classification in (Classification.MINIMAL, Classification.NON_DERIVED)
        assert (s.classification is Classification.MINIMAL) == (len(fam.pairs) == r.d)


def test_iter_structures_minimal_only():
    G = group("C(3) x C(3)")
    fams = list(iter_structures(G))
    assert len(fams) == 1 and len(fams[0].pairs) == 4
    assert len(list(iter_structures(group(P243_4), limit=2))) <= 2


# --- quotients and lifting --------------------------------------------------


def p729_quotient():
    G = group(P729_34)
    N = normal_closure(G, [ev(G, w) for w in N729_34])
    return G, quotient(G, N)


def test_faithful_representation():
    G, q = p729_quotient()
    assert is_faithfully_represented(q, 0)
    k = next(g for g in q.kernel if g != 0)
    assert not is_faithfully_represented(q, k)
    triple = [ev(G, "x"), ev(G, "x^2*y"), ev(G, "y^2")]
    assert [is_faithfully_represented(q, g) for g in triple] == [True] * 3
    assert [element_order(G, g) for g in triple] == [3, 9, 3]


def test_lift_through_trivial_kernel():
    G = group(P243_4)
    q = quotient(G, ElementSet.identity_only(G.order))
    fam = p243_family(G)
    lifted = lift_structure(q, fam)
    images = [(int(q.image[a]), int(q.image[b])) for a, b in fam]
    assert lifted.classification == check_structure(q.target, images).classification


def test_p729_34_lift():
    G, q = p729_quotient()
    assert q.target.order == 81
    lifted = lift_structure(q, p729_family(G))
    assert lifted.classification is Classification.NON_DERIVED
    assert beauville_dimension(q.target).d == 4
    assert beauville_dimension(G).d == 2


def test_p729_9_lift_preserves_dimension():
    G = group(P729_9)
    assert G.order == 729
    q = quotient(G, normal_closure(G, [ev(G, "(y*x)^3*x^3*y^3")]))
    assert q.target.order == 243
    r = beauville_dimension(q.target)
    assert r.d == 3
    preimage = {}
    for g in range(G.order):
        preimage.setdefault(int(q.image[g]), g)
    fam = [(preimage[p.x], preimage[p.y]) for p in r.witness.pairs]
    assert lift_structure(q, fam).classification is Classification.MINIMAL
    assert beauville_dimension(G).d == 3


def test_lift_premises():
    G, q = p729_quotient()
    k = next(g for g in q.kernel if g != 0)
    with pytest.raises(PremiseFailed):
        lift_structure(q, [(k, ev(G, "x"))])
    fam = p729_family(G)
    with pytest.raises(ImagesNotStructure):
        lift_structure(q, fam[2:])
    with pytest.raises(EmptyFamily):
        lift_structure(q, [])
    C9 = group("C(9) x C(9)")
    q9 = quotient(C9, normal_closure(C9, [C9.power(g, 3) for g in C9.generators]))
    with pytest.raises(PremiseFailed) as info:
        lift_structure(q9, [tuple(C9.generators)])
    assert "faithfully" in str(info.value)
