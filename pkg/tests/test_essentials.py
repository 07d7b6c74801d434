import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finkat.corpus import (
    arrow_category,
    chain,
    finset_category,
    finset_tier,
    semilattice,
)
from finkat.essentials import (
    Condition,
    MonoClassRegistry,
    check_condition,
    condition_matrix,
    essential_failure,
    is_essential_epi,
    is_essential_mono,
    is_pb_stable_essential_mono,
    pb_stability,
    split_implies_others,
    st_mono_e,
    witness_is_violation,
)
from finkat.kernel import (
    Arrow,
    CategoryError,
    ExplicitCategory,
    IntegrityError,
    Tier,
    as_tier,
    is_iso,
    is_mono,
)


def brute_force_essential(T, m):
    """Oracle: m mono and every f out of cod(m) with f.m mono is itself mono,
    with monicity decided by direct pair enumeration."""
    cat = T.ambient

    def mono(g):
        for w in T.core:
            hs = cat.hom(w, cat.dom(g))
            images = [cat.compose(g, h) for h in hs]
            if len(set(images)) != len(images):
                return False
        return True

    if not mono(m):
        return False
    for y in T.core:
        for f in cat.hom(cat.cod(m), y):
            if mono(cat.compose(f, m)) and not mono(f):
                return False
    return True


class TestEssentialMonos:
    def test_empty_to_point_in_finset(self, finset24):
        assert is_essential_mono(finset24, Arrow(0, 1, ()))

    def test_every_semilattice_morphism(self, b2):
        assert all(is_essential_mono(b2, m) for m in b2.morphisms())

    def test_z2_into_z4(self, ab):
        assert is_essential_mono(ab, Arrow("Z/2", "Z/4", (0, 2)))

    def test_non_mono_is_not_essential(self, finset24):
        assert not is_essential_mono(finset24, Arrow(2, 1, (0, 0)))

    def test_failure_witness(self, finset24):
        # 0 -> 2 is mono but composing with 2 -> 1 keeps it mono
        m = Arrow(0, 2, ())
        f = essential_failure(finset24, m)
        assert f is not None and not is_mono(finset24, f)

    def test_unknown_id(self, b2):
        with pytest.raises(CategoryError):
            is_essential_mono(b2, "x<=y")

    def test_finset_census_matches_oracle(self, finset24):
        for m in finset24.core_codomain_morphisms():
            assert is_essential_mono(finset24, m) == brute_force_essential(finset24, m)

    def test_essential_epi_is_dual(self, finset24, b2):
        for T in (finset24, as_tier(b2)):
            for m in T.core_morphisms():
                assert is_essential_epi(T, m) == is_essential_mono(T.opposite(), m)


class TestStability:
    def test_empty_to_point_not_stable(self, finset24):
        v = pb_stability(finset24, Arrow(0, 1, ()))
        assert not v.holds and v.witness is not None

    def test_iso_is_stable(self, finset24):
        swap = Arrow(2, 2, (1, 0))
        assert is_iso(finset24, swap)
        assert is_pb_stable_essential_mono(finset24, swap)

    def test_discrete_to_indiscrete(self, preord):
        C = preord.C
        cat = C.ambient
        d, i = cat.discrete(2), cat.indiscrete(2)
        assert is_pb_stable_essential_mono(C, Arrow(d, i, (0, 1)))

    def test_codomain_outside_core_raises(self, finset24):
        with pytest.raises(CategoryError):
            pb_stability(finset24, finset24.ambient.identity(4))

    def test_bounded_when_pullbacks_missing(self):
        reg = st_mono_e(Tier(finset_category(3)))
        assert reg.bounded

    def test_integrity_error_when_closure_claimed(self):
        # a, b below 1 without a meet: the cospan a -> 1 <- b has no pullback
        cat = ExplicitCategory(
            ["a", "b", "1"],
            {"a<=a": ("a", "a"), "b<=b": ("b", "b"), "1<=1": ("1", "1"),
             "a<=1": ("a", "1"), "b<=1": ("b", "1")},
            {"a": "a<=a", "b": "b<=b", "1": "1<=1"},
            {
                ("a<=a", "a<=a"): "a<=a", ("b<=b", "b<=b"): "b<=b", ("1<=1", "1<=1"): "1<=1",
                ("a<=1", "a<=a"): "a<=1", ("1<=1", "a<=1"): "a<=1",
                ("b<=1", "b<=b"): "b<=1", ("1<=1", "b<=1"): "b<=1",
            },
        )
        T = Tier(cat)
        assert not T.pullback_closed_for_core
        T2 = Tier(cat)
        T2.__dict__["pullback_closed_for_core"] = True  # a false claim
        with pytest.raises(IntegrityError):
            pb_stability(T2, "a<=1")


class TestRegistry:
    def test_semilattice_all_stable(self, b2):
        reg = st_mono_e(b2)
        assert len(reg.pb_stable_essential) == 9

    def test_finset_stable_are_isos(self, finset39):
        reg = st_mono_e(finset39)
        assert reg.pb_stable_essential == reg.isos

    def test_finset_essential_census(self, finset39):
        reg = st_mono_e(finset39)
        # 1 + 1 + 2 + 6 automorphisms of 0..3 plus 0 -> 1
        assert len(reg.essential) == 11
        assert reg.essential - reg.isos == {Arrow(0, 1, ())}

    def test_invariants_on_corpus(self, b2, finset24, pointed_initial, pointed24, preord):
        for T in (as_tier(b2), finset24, pointed_initial, pointed24, preord.C):
            reg = st_mono_e(T)
            assert isinstance(reg, MonoClassRegistry)
            assert reg.violations() == []
            for a in T.core:
                assert T.ambient.identity(a) in reg.pb_stable_essential


class TestConditions:
    def test_finset(self, finset39):
        assert check_condition(finset39, "balanced").holds
        assert check_condition(finset39, "pbse-iso").holds
        v = check_condition(finset39, Condition.MONO_SPLIT)
        assert not v.holds and v.witness == (Arrow(0, 1, ()),)

    def test_pointed_with_initial(self, pointed_initial):
        assert check_condition(pointed_initial, "pbse-iso").holds
        v = check_condition(pointed_initial, "balanced")
        assert not v.holds
        assert pointed_initial.ambient.show(v.witness[0]) == "I->*1[]"
        assert not check_condition(pointed_initial, "mono-split").holds

    def test_abelian_fragment(self, ab):
        assert check_condition(ab, "balanced").holds
        v = check_condition(ab, "essential-iso")
        assert not v.holds
        assert v.witness == (Arrow("Z/2", "Z/4", (0, 2)),)

    def test_witnesses_recheck(self, finset24, pointed_initial, ab, b2):
        for T in (finset24, pointed_initial, ab, as_tier(b2)):
            for tag, v in condition_matrix(T).items():
                assert (v.witness is None) == v.holds, tag
                if not v.holds:
                    assert witness_is_violation(T, v), tag

    def test_duals_run_on_opposite(self, b2):
        T = as_tier(b2)
        for tag in Condition:
            assert check_condition(T, tag.dual).holds == check_condition(T.opposite(), tag).holds
            assert tag.dual.dual is tag

    def test_split_implies_others_everywhere(self, b2, finset24, pointed_initial, pointed24, ab, preord):
        for T in (as_tier(b2), finset24, pointed_initial, pointed24, ab, preord.C, preord.X):
            assert split_implies_others(T)

    def test_pointed_sets_split(self, pointed24):
        assert check_condition(pointed24, "mono-split").holds

    def test_unknown_tag(self, b2):
        with pytest.raises(ValueError):
            check_condition(b2, "nonsense")


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 5))
def test_chain_morphisms_all_stable(k):
    L = chain(k)
    reg = st_mono_e(L)
    assert len(reg.pb_stable_essential) == k * (k + 1) // 2


def test_arrow_category_classes():
    A = arrow_category()
    assert is_essential_mono(A, "u")
    assert not check_condition(A, "balanced").holds


def test_single_element_semilattice():
    L = semilattice({("x", "x"): "x"})
    assert st_mono_e(L).pb_stable_essential == frozenset({"x<=x"})


def test_finset_small_essential(finset24):
    reg = st_mono_e(finset_tier(2, 4))
    assert len(reg.essential - reg.isos) == 1
