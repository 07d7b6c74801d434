import pytest

from finkat.corpus import (
    constant_functor,
    corrupted_finpreord_localization,
    finset_tier,
    free_basepoint_adjunction,
    identity_localization,
    inclusion_discrete_into_arrow,
)
from finkat.functors import (
    FAIL,
    NOT_APPLICABLE,
    PASS,
    Adjunction,
    NaturalTransformation,
    check_localization_consequences,
    check_sle_hypotheses,
    compose_functors,
    functor_properties,
    functor_violations,
    identity_functor,
    is_faithful_essential_localization,
    is_fully_faithful,
    reflection_properties,
    validate_adjunction,
    verify_preservation_theorems,
    weak_fibration_kind,
    weak_opfibration,
)
from finkat.kernel import Arrow, as_tier, is_iso


class TestFunctorProperties:
    def test_forgetful_faithful_not_full(self, preord):
        p = functor_properties(preord.F)
        assert p.faithful and not p.full
        w = p.witnesses["full"]
        assert w is not None

    def test_indiscrete_fully_faithful(self, preord):
        assert is_fully_faithful(preord.G)
        assert is_fully_faithful(preord.H)

    def test_identity_has_all_flags(self, finset24):
        p = functor_properties(identity_functor(finset24))
        assert all(p.flags.values())

    def test_functor_laws_hold(self, preord, pointed_preord):
        for L in (preord, pointed_preord):
            for F in (L.F, L.G, L.H):
                assert functor_violations(F) == []

    def test_broken_functor_detected(self, finset24):
        cat = finset24.ambient
        bad = identity_functor(finset24)
        swap = Arrow(2, 2, (1, 0))
        F = type(bad)(finset24, finset24, lambda a: a,
                      lambda f: swap if f == cat.identity(2) else f, "bad")
        assert functor_violations(F)

    def test_pullback_preservation_implies_monos(self, preord, pointed_preord, b2_loc):
        for L in (preord, pointed_preord, b2_loc):
            for F in (L.F, L.G, L.H):
                p = functor_properties(F)
                if p.preserves_pullbacks:
                    assert p.preserves_monos, F.name


class TestAdjunctions:
    def test_both_preorder_adjunctions_valid(self, preord):
        assert validate_adjunction(preord.right).valid
        assert validate_adjunction(preord.left).valid

    def test_dual_triple_adjunctions_valid(self, preord):
        D = preord.dual()
        assert validate_adjunction(D.right).valid
        assert validate_adjunction(D.left).valid

    def test_corrupted_unit_reported(self, preord):
        A = preord.right
        c0 = preord.C.core[-1]
        swap = Arrow(c0, preord.G.obj(preord.F.obj(c0)), (1, 0))
        unit = NaturalTransformation(
            A.unit.source, A.unit.target,
            lambda c: swap if c == c0 else A.unit.at(c), "eta'",
        )
        rep = validate_adjunction(Adjunction(A.left, A.right, unit, A.counit))
        assert not rep.valid and rep.violations

    def test_corrupted_triple_is_not_a_localization(self):
        v = is_faithful_essential_localization(corrupted_finpreord_localization())
        assert not v.holds


class TestLocalizations:
    def test_preorders_over_sets(self, preord):
        assert is_faithful_essential_localization(preord).holds

    def test_identity_triple(self, finset24):
        assert is_faithful_essential_localization(identity_localization(finset24)).holds

    def test_semilattice_triple(self, b2_loc):
        assert is_faithful_essential_localization(b2_loc).holds

    def test_localization_consequences(self, preord, pointed_preord, b2_loc, finset24):
        for L in (preord, pointed_preord, b2_loc, identity_localization(finset24)):
            r = check_localization_consequences(L)
            assert r.status == PASS, r.counterexamples

    def test_unit_and_counit_images_are_identities(self, preord):
        X = preord.X.ambient
        for c in preord.C.core:
            for comp in (preord.eta.at(c), preord.theta.at(c)):
                img = preord.F.mor(comp)
                assert X.dom(img) == X.cod(img) and img == X.identity(X.dom(img))


class TestFibrations:
    def test_forgetful_special_bifibration(self, preord):
        assert weak_fibration_kind(preord.F).kind == "special"
        assert weak_opfibration(preord.F)

    def test_constant_to_terminal(self, b2):
        assert weak_fibration_kind(constant_functor(as_tier(b2))).kind != "none"

    def test_inclusion_into_arrow_not_opfibration(self):
        v = weak_opfibration(inclusion_discrete_into_arrow())
        assert not v and v.witness is not None


class TestSemiLeftExact:
    def test_forgetful_indiscrete(self, preord):
        v = check_sle_hypotheses(preord.right)
        assert v.holds

    def test_identity_adjunction(self, finset24):
        assert check_sle_hypotheses(identity_localization(finset24).right).holds

    def test_free_basepoint_reports_component(self):
        A = free_basepoint_adjunction()
        v = check_sle_hypotheses(A)
        assert not v.holds and v.witness
        assert "not epi" in v.detail


class TestPreservationTheorems:
    def test_preorders(self, preord):
        results = verify_preservation_theorems(preord)
        assert [r.status for r in results] == [PASS, PASS, PASS]
        assert all(r.checked > 10000 for r in results)

    def test_identity(self, finset24):
        results = verify_preservation_theorems(identity_localization(finset24))
        assert all(r.status == PASS for r in results)

    def test_semilattice(self, b2_loc):
        results = verify_preservation_theorems(b2_loc)
        assert results[2].status == PASS
        C = b2_loc.C
        for m in C.core_codomain_morphisms():
            assert is_iso(b2_loc.X, b2_loc.F.mor(m))

    def test_corrupted_triple_is_not_applicable(self):
        results = verify_preservation_theorems(corrupted_finpreord_localization())
        assert results[2].status == NOT_APPLICABLE
        assert all(r.status != FAIL for r in results)

    def test_reflection(self, preord):
        assert reflection_properties(preord.F).status == PASS


def test_composite_functor(preord):
    GF = compose_functors(preord.G, preord.F)
    assert functor_violations(GF) == []
    c = preord.C.core[-1]
    assert GF.obj(c) == preord.C.ambient.indiscrete(preord.C.ambient.size(c))


@pytest.mark.parametrize("n,N", [(1, 1), (2, 4)])
def test_identity_localization_sizes(n, N):
    L = identity_localization(finset_tier(n, N))
    assert validate_adjunction(L.right).valid
