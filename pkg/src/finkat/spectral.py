"""The spectral category: fractions ``f . s^-1`` inverting the
pullback-stable essential monomorphisms, built as an explicit finite
category together with its projection functor."""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

from .essentials import Condition, ConditionVerdict, check_condition, st_mono_e
from .functors import (
    FAIL,
    NOT_APPLICABLE,
    PASS,
    Functor,
    LocalizationTriple,
    TheoremResult,
    equivalence_report,
    is_equivalence,
    is_faithful_essential_localization,
)
from .kernel import (
    CategoryError,
    ExplicitCategory,
    Tier,
    all_pullbacks,
    as_tier,
    inverse,
    is_iso,
    is_mono,
    is_epi,
    pullback,
)

DEFAULT_SPAN_CAP = 10**6


class SpecError(RuntimeError):
    pass


class SpanCapExceeded(SpecError):
    pass


def span_cap(explicit: Optional[int] = None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get("FINKAT_SPAN_CAP")
    return int(env) if env else DEFAULT_SPAN_CAP


@dataclass(frozen=True)
class SpanFraction:
    """``A <-s- D -f-> B`` standing for ``f . s^-1``."""

    s: object
    f: object


def _check_span(cat, S, sp: SpanFraction):
    if cat.dom(sp.s) != cat.dom(sp.f):
        raise CategoryError("span legs have different domains")
    if sp.s not in S:
        raise CategoryError(f"left leg {cat.show(sp.s)} is not in the inverted class")


# ---------------------------------------------------------------------------
# calculus of fractions


def check_right_fraction_calculus(T, S) -> ConditionVerdict:
    """Identities, composition closure, the Ore condition and cancellability
    for ``S`` (a set of morphisms with core codomain)."""
    T = as_tier(T)
    cat = T.ambient
    S = frozenset(S)
    tag = "right-calculus"
    by_cod: dict = {}
    for s in S:
        by_cod.setdefault(cat.cod(s), []).append(s)
    for v in by_cod.values():
        v.sort()
    for a in T.core:
        i = cat.identity(a)
        if i not in S:
            return ConditionVerdict(tag, False, (i,), detail=f"identity of {cat.show_object(a)} not in S")
    for s2 in sorted(S):
        for s1 in by_cod.get(cat.dom(s2), ()):
            if cat.compose(s2, s1) not in S:
                return ConditionVerdict(
                    tag, False, (s2, s1), detail=f"S not closed: {cat.show(s2)} . {cat.show(s1)}"
                )
    for a in T.core:
        for s in by_cod.get(a, ()):
            d = cat.dom(s)
            for x in T.core:
                for f in cat.hom(x, a):
                    r = pullback(T, f, s)
                    if r is not None and r.proj1 in S:
                        continue
                    if not any(
                        cat.compose(s, g) == cat.compose(f, t)
                        for t in by_cod.get(x, ())
                        for g in cat.hom(cat.dom(t), d)
                    ):
                        return ConditionVerdict(
                            tag, False, (f, s),
                            detail=f"no Ore square for {cat.show(f)} against {cat.show(s)}",
                        )
    for s in sorted(S):
        d = cat.dom(s)
        for y in T.core:
            hs = cat.hom(y, d)
            for f in hs:
                for g in hs:
                    if f == g or cat.compose(s, f) != cat.compose(s, g):
                        continue
                    if not any(
                        cat.compose(f, t) == cat.compose(g, t) for t in by_cod.get(y, ())
                    ):
                        return ConditionVerdict(
                            tag, False, (s, f, g),
                            detail=f"{cat.show(s)} does not cancel {cat.show(f)}, {cat.show(g)}",
                        )
    return ConditionVerdict(tag, True)


# ---------------------------------------------------------------------------
# fraction equivalence


class _Partition:
    def __init__(self, items):
        self.items = list(items)
        self.index = {x: i for i, x in enumerate(self.items)}
        self.parent = list(range(len(self.items)))

    def find(self, i):
        p = self.parent
        while p[i] != i:
            p[i] = p[p[i]]
            i = p[i]
        return i

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)

    def classes(self):
        groups: dict = {}
        for i in range(len(self.items)):
            groups.setdefault(self.find(i), []).append(self.items[i])
        return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])


def _restrictions(cat, s_into, sp):
    """``(t, f . u)`` for every ``t`` in ``S`` into the same object and every
    ``u`` with ``s . u = t``; each is one step from ``sp``."""
    s, f = sp
    d = cat.dom(s)
    for t in s_into:
        for u in cat.hom(cat.dom(t), d):
            if cat.compose(s, u) == t:
                yield (t, cat.compose(f, u))


def _raw_spans(cat, s_into, b):
    return [(s, f) for s in s_into for f in cat.hom(cat.dom(s), b)]


def _partition_spans(cat, s_into, raw):
    part = _Partition(raw)
    for i, sp in enumerate(raw):
        for other in _restrictions(cat, s_into, sp):
            j = part.index.get(other)
            if j is None:
                raise SpecError(f"restricted span {other!r} is not a raw span")
            part.union(i, j)
    return part


def span_equivalent(T, S, a: SpanFraction, b: SpanFraction) -> bool:
    """Whether two fractions lie in the same class of the equivalence
    generated by common refinements with a leg in ``S``."""
    T = as_tier(T)
    cat = T.ambient
    S = frozenset(S)
    _check_span(cat, S, a)
    _check_span(cat, S, b)
    A, B = cat.cod(a.s), cat.cod(a.f)
    if cat.cod(b.s) != A or cat.cod(b.f) != B:
        raise CategoryError("fractions have different endpoints")
    s_into = sorted(s for s in S if cat.cod(s) == A)
    raw = _raw_spans(cat, s_into, B)
    for sp in ((a.s, a.f), (b.s, b.f)):
        if sp not in raw:
            raw.append(sp)
    part = _partition_spans(cat, s_into, raw)
    return part.find(part.index[(a.s, a.f)]) == part.find(part.index[(b.s, b.f)])


# ---------------------------------------------------------------------------
# the spectral category


class FractionCategory(ExplicitCategory):
    def __init__(self, spec: "SpecCategory", *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._spec = spec

    def show_object(self, a):
        return self._spec.tier.ambient.show_object(a)

    def show(self, m):
        a, b, k = m
        s, f = self._spec.classes[(a, b)][k][0]
        cat = self._spec.tier.ambient
        return f"[{cat.show(f)} / {cat.show(s)}]"


@dataclass
class SpecCategory:
    tier: Tier
    S: frozenset
    classes: dict  # (A, B) -> list of classes, each a sorted list of raw spans
    class_of: dict  # raw span -> (A, B, k)
    category: Optional[FractionCategory] = None
    projection: Optional[Functor] = None
    checks: dict = field(default_factory=dict)

    @property
    def objects(self):
        return self.tier.core

    def hom_size(self, a, b) -> int:
        return len(self.classes[(a, b)])

    def as_tier(self) -> Tier:
        return as_tier(self.category)


def spec_build(T, cap: Optional[int] = None, check: bool = True) -> SpecCategory:
    """Build ``C[S^-1]`` for ``S`` the pullback-stable essential monos of the tier.

    Objects are the core objects.  Composition goes through the pullback of
    the middle cospan; with ``check`` every pair of representatives and every
    available pullback is re-composed and must land in the same class.
    """
    T = as_tier(T)
    cat = T.ambient
    reg = st_mono_e(T)
    S = reg.pb_stable_essential
    calc = check_right_fraction_calculus(T, S)
    if not calc.holds:
        raise SpecError(f"no right calculus of fractions: {calc.detail}")
    limit = span_cap(cap)
    s_into = {a: sorted(s for s in S if cat.cod(s) == a) for a in T.core}

    classes: dict = {}
    class_of: dict = {}
    for a in T.core:
        for b in T.core:
            raw = _raw_spans(cat, s_into[a], b)
            if len(raw) > limit:
                raise SpanCapExceeded(
                    f"{len(raw)} raw spans from {cat.show_object(a)} to {cat.show_object(b)} "
                    f"exceed the cap of {limit}"
                )
            cls = _partition_spans(cat, s_into[a], raw).classes()
            classes[(a, b)] = cls
            for k, c in enumerate(cls):
                for sp in c:
                    class_of[sp] = (a, b, k)

    spec = SpecCategory(T, S, classes, class_of)
    bad: list = []

    def compose_spans(x, y, pb):
        # x = (s1, f1): A <- D1 -> B, y = (s2, f2): B <- D2 -> C
        s1 = x[0]
        f2 = y[1]
        p1, p2 = pb.proj1, pb.proj2
        new = (cat.compose(s1, p1), cat.compose(f2, p2))
        hit = class_of.get(new)
        if hit is None:
            raise SpecError(f"composite span leaves the fraction class: {new!r}")
        return hit

    comp: dict = {}
    core = T.core
    for a in core:
        for b in core:
            for i, cx in enumerate(classes[(a, b)]):
                for c in core:
                    for j, cy in enumerate(classes[(b, c)]):
                        x, y = cx[0], cy[0]
                        r = pullback(T, x[1], y[0])
                        if r is None:
                            raise SpecError(
                                f"no Ore square for {cat.show(x[1])} against {cat.show(y[0])}"
                            )
                        if T.in_core(cat.cod(r.proj1)) and r.proj1 not in S:
                            raise SpecError(f"Ore leg {cat.show(r.proj1)} is not in S")
                        res = compose_spans(x, y, r)
                        comp[((b, c, j), (a, b, i))] = res
                        if check:
                            for alt in all_pullbacks(T, x[1], y[0]):
                                if compose_spans(x, y, alt) != res:
                                    bad.append(f"composite depends on the Ore square at {x!r}, {y!r}")
                            for x2 in cx:
                                for y2 in cy:
                                    r2 = pullback(T, x2[1], y2[0])
                                    if r2 is None or compose_spans(x2, y2, r2) != res:
                                        bad.append(f"composite depends on representatives {x2!r}, {y2!r}")
    mors = {m: (m[0], m[1]) for m in set(class_of.values())}
    ids = {a: class_of[(cat.identity(a), cat.identity(a))] for a in core}
    spec.category = FractionCategory(spec, core, mors, ids, comp, f"Spec({T.name})")

    def project(f):
        return class_of[(cat.identity(cat.dom(f)), f)]

    spec.projection = Functor(T, spec.category, lambda a: a, project, "P")

    if check:
        ST = as_tier(spec.category)
        for f in T.core_morphisms():
            if is_iso(ST, project(f)) != (f in S):
                bad.append(f"projection inverts {cat.show(f)}: {f in S and 'should' or 'should not'}")
    spec.checks = {"violations": bad, "calculus": calc}
    return spec


def projection_generates(spec: SpecCategory) -> list:
    """Every class equals ``P(f) . P(s)^-1`` for its representative; this is
    what makes factorisations through the projection unique."""
    cat = spec.tier.ambient
    sc = spec.category
    ST = as_tier(sc)
    P = spec.projection
    out = []
    for (a, b), cls in spec.classes.items():
        for k, c in enumerate(cls):
            s, f = c[0]
            if not spec.tier.in_core(cat.dom(s)):
                # P is only defined on the core; skip fractions through ambient objects
                continue
            inv = inverse(ST, P.mor(s))
            if inv is None or sc.compose(P.mor(f), inv) != (a, b, k):
                out.append(f"class {(a, b, k)} is not P(f) . P(s)^-1")
    return out


def induced_functor(spec: SpecCategory, F: Functor, name=None) -> Functor:
    """The unique ``Fbar`` with ``Fbar . P = F``: ``[f / s] |-> F(f) . F(s)^-1``."""
    cat = spec.tier.ambient
    X = F.target
    inverses = {}
    for s in sorted(spec.S):
        inv = inverse(X, F.mor(s))
        if inv is None:
            raise SpecError(f"{F.name} does not invert {cat.show(s)}")
        inverses[s] = inv
    table = {}
    for (a, b), cls in spec.classes.items():
        for k, c in enumerate(cls):
            vals = {X.ambient.compose(F.mor(f), inverses[s]) for s, f in c}
            if len(vals) != 1:
                raise SpecError(f"{F.name} is not constant on the class {(a, b, k)}")
            table[(a, b, k)] = vals.pop()
    return Functor(spec.category, X, F.obj, table, name or f"{F.name}bar")


def factorization_violations(spec: SpecCategory, F: Functor, Fbar: Functor) -> list:
    cat = spec.tier.ambient
    return [
        f"Fbar . P differs from F at {cat.show(f)}"
        for f in spec.tier.core_morphisms()
        if Fbar.mor(spec.projection.mor(f)) != F.mor(f)
    ]


# ---------------------------------------------------------------------------
# verifiers


def _hypotheses(L: LocalizationTriple, extra=()):
    X = L.X
    pb = check_condition(X, Condition.PBSE_ISO)
    hyps = {
        "faithful essential localization": is_faithful_essential_localization(L).holds,
        "stable essential monos of X are isos": pb.holds and not pb.bounded,
        "C pullback-closed": L.C.pullback_closed_for_core,
    }
    for label, fn in extra:
        hyps[label] = fn()
    return hyps


def verify_spectral_equivalence(L: LocalizationTriple, cap=None) -> TheoremResult:
    """F factors uniquely through the projection onto the spectral category
    and the induced functor is an equivalence."""
    claim = "spectral-equivalence"
    hyps = _hypotheses(L)
    if not all(hyps.values()):
        bad = [k for k, v in hyps.items() if not v]
        return TheoremResult(claim, NOT_APPLICABLE, 0, [], hyps, [f"hypothesis fails: {k}" for k in bad])
    spec = spec_build(L.C, cap)
    bad = list(spec.checks["violations"])
    Fbar = induced_functor(spec, L.F)
    bad += factorization_violations(spec, L.F, Fbar)
    bad += projection_generates(spec)
    rep = equivalence_report(Fbar)
    if not (rep["full"] and rep["faithful"] and rep["essentially_surjective"]):
        bad.append(f"induced functor is not an equivalence: {rep}")
    n = sum(len(c) for c in spec.classes.values())
    notes = [
        f"Spec has {len(spec.objects)} objects and {n} morphisms",
        "equivalence realised by the induced functor Fbar",
    ]
    return TheoremResult(claim, FAIL if bad else PASS, n, bad[:20], hyps, notes)


def verify_bimorphism_duality(L: LocalizationTriple, cap=None) -> list:
    """Stable essential monos coincide with bimorphisms; with the dual
    condition they also coincide with the dual class and both spectral
    categories are equivalent to X."""
    C, X = L.C, L.X
    cat = C.ambient
    results = []
    bal = check_condition(X, Condition.BALANCED)
    hyps = _hypotheses(L, [("X balanced", lambda: bal.holds)])
    claim = "stable-essential-equals-bimorphism"
    if not all(hyps.values()):
        bad = [k for k, v in hyps.items() if not v]
        results.append(TheoremResult(claim, NOT_APPLICABLE, 0, [], hyps, [f"hypothesis fails: {k}" for k in bad]))
    else:
        St = st_mono_e(C).pb_stable_essential
        morphs = C.core_codomain_morphisms()
        bad = [
            cat.show(m) for m in morphs
            if (m in St) != (is_mono(C, m) and is_epi(C, m))
        ]
        results.append(TheoremResult(claim, FAIL if bad else PASS, len(morphs), bad[:20], hyps, []))

    claim = "self-dual-spectral"
    co = check_condition(X, Condition.CO_PBSE_ISO)
    hyps6 = dict(hyps)
    hyps6["dual condition on X"] = co.holds and not co.bounded
    hyps6["C pushout-closed"] = C.pushout_closed_for_core
    if not all(hyps6.values()):
        bad = [k for k, v in hyps6.items() if not v]
        results.append(TheoremResult(claim, NOT_APPLICABLE, 0, [], hyps6, [f"hypothesis fails: {k}" for k in bad]))
        return results
    bad = []
    core_m = C.core_morphisms()
    St = st_mono_e(C).pb_stable_essential
    St_op = st_mono_e(C.opposite()).pb_stable_essential
    bim = {m for m in core_m if is_mono(C, m) and is_epi(C, m)}
    left = {m for m in core_m if m in St}
    right = {m for m in core_m if m in St_op}
    if left != right:
        bad.append(f"classes differ on {len(left ^ right)} core morphisms")
    if left != bim:
        bad.append(f"stable essential monos differ from bimorphisms on {len(left ^ bim)} core morphisms")
    spec = spec_build(C, cap)
    spec_op = spec_build(C.opposite(), cap)
    bad += spec.checks["violations"] + spec_op.checks["violations"]
    Fbar = induced_functor(spec, L.F)
    Fbar_op = induced_functor(spec_op, L.F.opposite())
    if not is_equivalence(Fbar):
        bad.append("Spec(C) -> X is not an equivalence")
    if not is_equivalence(Fbar_op):
        bad.append("Spec(C^op) -> X^op is not an equivalence")
    for a in C.core:
        for b in C.core:
            if spec.hom_size(a, b) != spec_op.hom_size(b, a):
                bad.append(
                    f"hom-class counts differ at {cat.show_object(a)}, {cat.show_object(b)}"
                )
    notes = [
        "Spec(C) ~ X realised by Fbar; Spec(C^op)^op ~ X by the opposite of (F^op)bar",
        "class comparison restricted to morphisms between core objects",
    ]
    results.append(TheoremResult(claim, FAIL if bad else PASS, len(core_m), bad[:20], hyps6, notes))
    return results
