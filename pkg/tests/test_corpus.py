from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finkat.corpus import (
    CORPUS_NAMES,
    CorpusError,
    ab_fragment,
    expected_condition_table,
    finset_tier,
    load_corpus,
    parse_group,
    pointed_finset_with_initial,
    semilattice,
    verify_condition_matrix,
)
from finkat.functors import PASS, validate_adjunction
from finkat.kernel import Arrow, validate


class TestTiers:
    def test_finset_hom_counts(self, finset24):
        cat = finset24.ambient
        for a in finset24.core:
            for b in range(5):
                assert len(cat.hom(a, b)) == b**a

    def test_bound_must_cover_squares(self):
        with pytest.raises(CorpusError):
            finset_tier(2, 3)

    def test_preorder_core(self, preord, pointed_preord):
        # preorders on 0, 1 and 2 points: 1 + 1 + 4
        assert len(preord.C.core) == 6
        # pointed: one point, or two points with 4 preorders
        assert len(pointed_preord.C.core) == 5

    def test_pointed_initial_object(self, pointed_initial):
        cat = pointed_initial.ambient
        assert cat.show_object(0) == "I" and cat.show_object(1) == "*1"
        for b in pointed_initial.core:
            assert len(cat.hom(0, b)) == 1

    def test_pointed_initial_small(self):
        T = pointed_finset_with_initial(1, 1)
        assert list(T.core) == [0, 1]


class TestGroups:
    def test_hom_z2_z4(self, ab):
        assert len(ab.ambient.hom("Z/2", "Z/4")) == 2
        assert Arrow("Z/2", "Z/4", (0, 2)) in ab.ambient.hom("Z/2", "Z/4")

    @pytest.mark.parametrize("text,orders", [("0", ()), ("Z/4", (4,)), ("Z/2^2", (2, 2)),
                                             ("Z/2+Z/4", (2, 4))])
    def test_parse(self, text, orders):
        assert parse_group(text) == orders

    @pytest.mark.parametrize("text", ["S3", "Z/0", "Z/2xZ/3", "foo", "Z/1"])
    def test_parse_errors(self, text):
        with pytest.raises(CorpusError):
            parse_group(text)

    def test_cyclic_hom_counts(self):
        # |Hom(Z/m, Z/n)| = gcd(m, n) for cyclic groups
        cat = ab_fragment(["Z/2", "Z/3", "Z/4", "Z/6"]).ambient

        for m in (2, 3, 4, 6):
            for n in (2, 3, 4, 6):
                assert len(cat.hom(f"Z/{m}", f"Z/{n}")) == gcd(m, n)


class TestSemilattices:
    def test_missing_meet(self):
        with pytest.raises(CorpusError, match="missing"):
            semilattice({("x", "x"): "x"}, ["x", "y"])

    def test_not_commutative(self):
        table = {("x", "x"): "x", ("y", "y"): "y", ("x", "y"): "x", ("y", "x"): "y"}
        with pytest.raises(CorpusError, match="commutative"):
            semilattice(table)

    def test_valid_chain(self):
        table = {("x", "x"): "x", ("y", "y"): "y", ("x", "y"): "x", ("y", "x"): "x"}
        L = semilattice(table)
        assert validate(L).valid and L.hom("x", "y") == ("x<=y",)


class TestLoadCorpus:
    def test_unknown(self):
        with pytest.raises(CorpusError):
            load_corpus("nonsense")

    def test_bad_parameters(self):
        with pytest.raises(CorpusError):
            load_corpus("finset:a,b")
        with pytest.raises(CorpusError):
            load_corpus("finset:1,2,3")
        with pytest.raises(CorpusError):
            load_corpus("semilattice:B7")

    def test_overrides(self):
        e = load_corpus("finset:3,9", core=1, ambient=2)
        assert e.name == "finset:1,2" and list(e.tier.core) == [0, 1]

    @pytest.mark.parametrize("name", CORPUS_NAMES)
    def test_every_entry_is_valid(self, name):
        e = load_corpus(name)
        assert validate(e.tier).valid
        if e.localization is not None:
            assert validate_adjunction(e.localization.right).valid
            assert validate_adjunction(e.localization.left).valid


def test_condition_matrix():
    r = verify_condition_matrix()
    assert r.status == PASS, r.counterexamples
    assert r.checked >= sum(len(s.expected) for s in expected_condition_table())


def test_condition_matrix_detects_wrong_expectation():
    table = expected_condition_table()
    table[0].expected["balanced"] = False
    assert verify_condition_matrix(table).status != PASS


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2), st.integers(0, 3))
def test_finset_bounds(n, extra):
    T = finset_tier(n, max(n, n * n) + extra)
    assert len(T.core) == n + 1
