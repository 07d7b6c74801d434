import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finkat.corpus import (
    arrow_category,
    boolean_lattice,
    chain,
    discrete_category,
    finset_category,
    finset_tier,
    semilattice,
)
from finkat.kernel import (
    Arrow,
    CategoryError,
    ExplicitCategory,
    Tier,
    all_pullbacks,
    as_tier,
    classify_basic,
    initial,
    is_epi,
    is_mono,
    is_pullback_square,
    mediating_isos,
    opposite,
    pullback,
    pushout,
    terminal,
    terminal_category,
    validate,
)


def brute_force_is_pullback(T, f, g, p1, p2):
    """Oracle: every commuting cone from a core object has exactly one mediator."""
    cat = T.ambient
    p = cat.dom(p1)
    for w in T.core:
        for h1 in cat.hom(w, cat.dom(f)):
            for h2 in cat.hom(w, cat.dom(g)):
                if cat.compose(f, h1) != cat.compose(g, h2):
                    continue
                mediators = [
                    k for k in cat.hom(w, p)
                    if cat.compose(p1, k) == h1 and cat.compose(p2, k) == h2
                ]
                if len(mediators) != 1:
                    return False
    return True


class TestValidate:
    def test_terminal_category_is_valid(self):
        rep = validate(terminal_category())
        assert rep.valid and rep.violations == []

    def test_wrong_codomain_in_table_is_reported(self):
        cat = ExplicitCategory(
            ["A", "B"],
            {"idA": ("A", "A"), "idB": ("B", "B"), "f": ("A", "B")},
            {"A": "idA", "B": "idB"},
            {("idA", "idA"): "idA", ("idB", "idB"): "idB", ("f", "idA"): "idA", ("idB", "f"): "f"},
        )
        rep = validate(cat)
        assert not rep.valid
        assert any("f . idA" in v and "expected A->B" in v for v in rep.violations)

    def test_missing_composite_is_reported(self):
        cat = ExplicitCategory(["A"], {"idA": ("A", "A")}, {"A": "idA"}, {})
        rep = validate(cat)
        assert any("missing composite" in v for v in rep.violations)

    def test_associativity_failure_is_reported(self):
        # one object, non-identity x, y with x.x = y, x.y = x, y.x = y, y.y = y:
        # (x.x).x = y.x = y but x.(x.x) = x.y = x
        mors = {"1": ("*", "*"), "x": ("*", "*"), "y": ("*", "*")}
        table = {("x", "x"): "y", ("x", "y"): "x", ("y", "x"): "y", ("y", "y"): "y"}
        comp = {}
        for g, f in itertools.product(mors, repeat=2):
            comp[(g, f)] = f if g == "1" else g if f == "1" else table[(g, f)]
        rep = validate(ExplicitCategory(["*"], mors, {"*": "1"}, comp))
        assert any("associativity" in v for v in rep.violations)

    def test_boolean_lattice(self, b2):
        rep = validate(b2)
        assert rep.valid
        assert len(list(b2.morphisms())) == 9  # 4 reflexive + 5 strict comparable pairs

    def test_empty_category_is_valid(self):
        assert validate(ExplicitCategory([], {}, {}, {})).valid


class TestClassify:
    def test_identity_has_every_flag(self, finset24):
        flags = classify_basic(finset24, finset24.ambient.identity(2))
        assert all([flags.mono, flags.epi, flags.split_mono, flags.split_epi, flags.iso])

    def test_two_to_one_is_split_epi_not_mono(self, finset24):
        f = Arrow(2, 1, (0, 0))
        flags = classify_basic(finset24, f)
        assert flags.epi and flags.split_epi and not flags.mono and not flags.iso

    def test_initial_to_point_is_bimorphism_not_iso(self, pointed_initial):
        f = Arrow(0, 1, ())
        flags = classify_basic(pointed_initial, f)
        assert flags.bimorphism and not flags.iso and not flags.split_mono

    def test_unknown_morphism_raises(self, b2):
        with pytest.raises(CategoryError):
            classify_basic(b2, "nope")

    def test_flag_implications(self, finset24):
        for m in finset24.core_morphisms():
            fl = classify_basic(finset24, m)
            assert not fl.split_mono or fl.mono
            assert not fl.split_epi or fl.epi
            assert not fl.iso or (fl.mono and fl.epi and fl.split_mono and fl.split_epi)


class TestPullbacks:
    def test_meet_in_semilattice(self, b2):
        r = pullback(b2, "a<=1", "b<=1")
        assert r.apex == "0"
        assert brute_force_is_pullback(as_tier(b2), "a<=1", "b<=1", r.proj1, r.proj2)

    def test_identity_pullback(self, finset24):
        i = finset24.ambient.identity(2)
        r = pullback(finset24, i, i)
        assert r.apex == 2
        assert classify_basic(finset24, r.proj1).iso

    def test_absent_in_small_skeleton(self):
        T = as_tier(finset_category(3))
        f = Arrow(2, 1, (0, 0))
        # cones from 3 number 4**3 = 64, but |Hom(3, P)| = |P|**3 <= 27
        assert pullback(T, f, f) is None

    def test_found_squares_satisfy_brute_force_oracle(self, finset24):
        for f, g in itertools.islice(finset24.core_cospans(), 200):
            r = pullback(finset24, f, g)
            assert r is not None
            assert brute_force_is_pullback(finset24, f, g, r.proj1, r.proj2)
            assert is_pullback_square(finset24, f, g, r.proj1, r.proj2)

    def test_swapped_cospan_gives_isomorphic_apex(self, finset24):
        from finkat.kernel import isomorphism

        for f, g in itertools.islice(finset24.core_cospans(), 150):
            a, b = pullback(finset24, f, g), pullback(finset24, g, f)
            assert isomorphism(finset24, a.apex, b.apex) is not None

    def test_unique_mediating_iso(self, finset24):
        for f, g in finset24.core_cospans():
            squares = all_pullbacks(finset24, f, g)
            for x, y in itertools.product(squares, repeat=2):
                assert len(mediating_isos(finset24, x, y)) == 1

    def test_non_cospan_raises(self, b2):
        with pytest.raises(CategoryError):
            pullback(b2, "a<=1", "0<=b")

    def test_deterministic_smallest_apex(self, finset24):
        f = Arrow(2, 1, (0, 0))
        r = pullback(finset24, f, f)
        isos = [p for p in finset24.ambient.objects if finset24.ambient.size(p) == 4]
        assert r.apex == min(isos)


class TestPushouts:
    def test_identity_pushout(self, b2):
        r = pushout(b2, "a<=a", "a<=a")
        assert r.apex == "a"

    def test_join_in_semilattice(self, b2):
        assert pushout(b2, "0<=a", "0<=b").apex == "1"

    def test_meet_as_pushout_in_opposite(self, b2):
        assert pushout(opposite(b2), "a<=1", "b<=1").apex == "0"

    def test_absent_in_truncated_skeleton(self):
        T = as_tier(finset_category(3))
        f = Arrow(0, 2, ())
        assert pushout(T, f, f) is None


class TestTerminalInitial:
    def test_semilattice_top(self, b2):
        assert terminal(b2) == "1" and initial(b2) == "0"

    def test_finset(self):
        C = finset_category(3)
        assert terminal(C) == 1 and initial(C) == 0

    def test_discrete_has_none(self):
        D = discrete_category(["p", "q"])
        assert terminal(D) is None and initial(D) is None


class TestOpposite:
    def test_involution(self, b2):
        assert opposite(opposite(b2)) is b2

    def test_reversed_order(self, b2):
        op = opposite(b2)
        for a, b in itertools.product(b2.objects, repeat=2):
            assert op.hom(a, b) == b2.hom(b, a)

    def test_mono_is_epi_in_opposite(self, finset24, pointed_initial, b2):
        for T in (finset24, pointed_initial, as_tier(b2)):
            for m in T.core_morphisms():
                assert is_mono(T, m) == is_epi(T.opposite(), m)
                assert is_epi(T, m) == is_mono(T.opposite(), m)

    def test_tier_opposite_keeps_core(self, finset24):
        assert finset24.opposite().core == finset24.core
        assert finset24.opposite().opposite() is finset24


def test_tier_rejects_foreign_core():
    with pytest.raises(CategoryError):
        Tier(boolean_lattice(), core=["z"])


def test_closure_flags(finset24):
    assert finset24.pullback_closed_for_core
    assert finset24.pushout_closed_for_core
    small = Tier(finset_category(3))
    assert not small.pullback_closed_for_core
    assert small.closure_failure() is not None


@st.composite
def chains_and_pairs(draw):
    k = draw(st.integers(1, 5))
    L = chain(k)
    objs = list(L.objects)
    i, j = sorted(draw(st.lists(st.sampled_from(objs), min_size=2, max_size=2)), key=objs.index)
    return L, i, j


@settings(max_examples=40, deadline=None)
@given(chains_and_pairs())
def test_chain_pullback_is_meet(data):
    L, i, j = data
    top = L.objects[-1]
    f, g = L.hom(i, top)[0], L.hom(j, top)[0]
    r = pullback(L, f, g)
    objs = list(L.objects)
    assert r.apex == min(i, j, key=objs.index)
    assert brute_force_is_pullback(as_tier(L), f, g, r.proj1, r.proj2)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 4), st.integers(0, 4))
def test_finset_hom_counts(a, b):
    C = finset_category(4)
    assert len(C.hom(a, b)) == b**a


def test_semilattice_and_arrow_validate():
    for C in (chain(3), arrow_category(), semilattice({("x", "x"): "x"}, ["x"])):
        assert validate(C).valid


def test_pointed_preorder_pullback_sees_free_elements(pointed_preord):
    # core test objects have one free element, so they cannot see the relation
    # (1,0) <= (1,1) of the product; rival candidate apexes must rule it out
    T = pointed_preord.C
    cat = T.ambient
    f, g = Arrow(1, 0, (0, 0)), Arrow(2, 0, (0, 0))
    r = pullback(T, f, g)
    pairs = {i: (r.proj1.fn[i], r.proj2.fn[i]) for i in range(cat.size(r.apex))}
    expected = {(x, y) for x in pairs for y in pairs
                if x != y and pairs[x][0] == pairs[y][0] and pairs[x][1] <= pairs[y][1]}
    assert set(cat.relation(r.apex)) == expected
    squares = all_pullbacks(T, f, g)
    for a, b in itertools.product(squares, repeat=2):
        assert len(mediating_isos(T, a, b)) == 1
    wrong = cat.lookup(4, sum(1 << (i * 4 + i) for i in range(4)) | 1 << 1)
    assert not is_pullback_square(T, f, g, Arrow(wrong, 1, (0, 0, 1, 1)), Arrow(wrong, 2, (0, 1, 0, 1)))
