"""Functors, natural transformations, adjunctions and localizations between
tiers, with exhaustive checkers for the lifting and preservation properties
of localizations."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from .essentials import (
    Condition,
    ConditionVerdict,
    check_condition,
    is_essential_mono,
    pb_stability,
)
from .kernel import (
    Tier,
    ValidationReport,
    as_tier,
    is_epi,
    is_iso,
    is_mono,
    is_pullback_square,
    isomorphism,
    pullback,
    terminal,
)

PASS, FAIL, NOT_APPLICABLE = "PASS", "FAIL", "NOT APPLICABLE"


def _lookup(table):
    if callable(table):
        return table
    return table.__getitem__


class Functor:
    """A functor between tiers, given by object and morphism maps.

    The maps may be dicts or callables; they are only ever evaluated on the
    morphisms a check actually touches.
    """

    def __init__(self, source, target, on_objects, on_morphisms, name="F"):
        self.source: Tier = as_tier(source)
        self.target: Tier = as_tier(target)
        self._obj = _lookup(on_objects)
        self._mor = _lookup(on_morphisms)
        self.name = name
        self._op: Optional[Functor] = None

    def obj(self, a):
        return self._obj(a)

    def mor(self, f):
        return self._mor(f)

    def opposite(self) -> "Functor":
        if self._op is None:
            op = Functor(
                self.source.opposite(), self.target.opposite(), self._obj, self._mor,
                f"{self.name}^op",
            )
            op._op = self
            self._op = op
        return self._op

    def __repr__(self):
        return f"<Functor {self.name}: {self.source.name} -> {self.target.name}>"


def identity_functor(T, name="1") -> Functor:
    return Functor(T, T, lambda a: a, lambda f: f, name)


def compose_functors(G: Functor, F: Functor, name=None) -> Functor:
    return Functor(
        F.source, G.target, lambda a: G.obj(F.obj(a)), lambda f: G.mor(F.mor(f)),
        name or f"{G.name}{F.name}",
    )


def functor_violations(F: Functor, limit=20) -> list:
    """Typing, identity and composition failures over the source core."""
    C, X = F.source.ambient, F.target.ambient
    out = []
    core = F.source.core
    homs = {(a, b): C.hom(a, b) for a in core for b in core}
    for a in core:
        if F.mor(C.identity(a)) != X.identity(F.obj(a)):
            out.append(f"{F.name} does not preserve the identity of {C.show_object(a)}")
    for (a, b), fs in homs.items():
        for f in fs:
            ff = F.mor(f)
            if not X.contains(ff) or X.dom(ff) != F.obj(a) or X.cod(ff) != F.obj(b):
                out.append(f"{F.name}({C.show(f)}) is not a morphism {F.obj(a)}->{F.obj(b)}")
    if out:
        return out[:limit]
    for (a, b), fs in homs.items():
        for c in core:
            for g in homs[(b, c)]:
                fg = F.mor(g)
                for f in fs:
                    if F.mor(C.compose(g, f)) != X.compose(fg, F.mor(f)):
                        out.append(f"{F.name} breaks composition at {C.show(g)} . {C.show(f)}")
                        if len(out) >= limit:
                            return out
    return out


class NaturalTransformation:
    """Components ``alpha_a: S(a) -> T(a)`` for functors ``S, T`` with a common source."""

    def __init__(self, source: Functor, target: Functor, components, name="alpha"):
        self.source = source
        self.target = target
        self._at = _lookup(components)
        self.name = name

    def at(self, a):
        return self._at(a)

    def opposite(self) -> "NaturalTransformation":
        """The same components read as ``T^op => S^op``."""
        return NaturalTransformation(
            self.target.opposite(), self.source.opposite(), self._at, f"{self.name}^op"
        )

    def violations(self, limit=20) -> list:
        S, T = self.source, self.target
        C, X = S.source.ambient, S.target.ambient
        out = []
        for a in S.source.core:
            c = self.at(a)
            if not X.contains(c) or X.dom(c) != S.obj(a) or X.cod(c) != T.obj(a):
                out.append(f"{self.name} at {C.show_object(a)} is not a morphism S(a)->T(a)")
        if out:
            return out[:limit]
        core = S.source.core
        for a in core:
            for b in core:
                for f in C.hom(a, b):
                    if X.compose(T.mor(f), self.at(a)) != X.compose(self.at(b), S.mor(f)):
                        out.append(f"naturality square of {self.name} fails at {C.show(f)}")
                        if len(out) >= limit:
                            return out
        return out


@dataclass
class Adjunction:
    """``left -| right`` with ``unit: 1 => right.left`` and ``counit: left.right => 1``."""

    left: Functor
    right: Functor
    unit: NaturalTransformation
    counit: NaturalTransformation


def validate_adjunction(A: Adjunction) -> ValidationReport:
    out = []
    for F in (A.left, A.right):
        out += functor_violations(F)
    for nt in (A.unit, A.counit):
        out += nt.violations()
    if out:
        return ValidationReport(False, out)
    F, G = A.left, A.right
    C, X = F.source.ambient, F.target.ambient
    for a in F.source.core:
        fa = F.obj(a)
        if X.compose(A.counit.at(fa), F.mor(A.unit.at(a))) != X.identity(fa):
            out.append(f"triangle identity fails at {C.show_object(a)} (counit.F after F.unit)")
    for x in G.source.core:
        gx = G.obj(x)
        if C.compose(G.mor(A.counit.at(x)), A.unit.at(gx)) != C.identity(gx):
            out.append(f"triangle identity fails at {X.show_object(x)} (G.counit after unit.G)")
    return ValidationReport(not out, out)


@dataclass
class LocalizationTriple:
    """``H -| F -| G`` with the four transformations housed in one place.

    ``eta: 1 => GF``, ``eps: FG => 1``, ``zeta: 1 => FH``, ``theta: HF => 1``.
    """

    F: Functor
    G: Functor
    H: Functor
    eta: NaturalTransformation
    eps: NaturalTransformation
    zeta: NaturalTransformation
    theta: NaturalTransformation
    name: str = "L"

    @property
    def C(self) -> Tier:
        return self.F.source

    @property
    def X(self) -> Tier:
        return self.F.target

    @property
    def right(self) -> Adjunction:
        return Adjunction(self.F, self.G, self.eta, self.eps)

    @property
    def left(self) -> Adjunction:
        return Adjunction(self.H, self.F, self.zeta, self.theta)

    def dual(self) -> "LocalizationTriple":
        """``G^op -| F^op -| H^op`` between the opposite tiers."""
        return LocalizationTriple(
            self.F.opposite(), self.H.opposite(), self.G.opposite(),
            self.theta.opposite(), self.zeta.opposite(), self.eps.opposite(),
            self.eta.opposite(), f"{self.name}^op",
        )


# ---------------------------------------------------------------------------
# functor properties


@dataclass
class PropertyReport:
    flags: dict
    witnesses: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def __getattr__(self, name):
        try:
            return self.__dict__["flags"][name]
        except KeyError:
            raise AttributeError(name) from None


def _faithful_full(F: Functor):
    C, X = F.source.ambient, F.target.ambient
    faithful = full = None
    for a in F.source.core:
        for b in F.source.core:
            hs = C.hom(a, b)
            images = {F.mor(f) for f in hs}
            if faithful is None and len(images) != len(hs):
                seen = {}
                for f in hs:
                    if F.mor(f) in seen:
                        faithful = (seen[F.mor(f)], f)
                        break
                    seen[F.mor(f)] = f
            if full is None:
                missing = [h for h in X.hom(F.obj(a), F.obj(b)) if h not in images]
                if missing:
                    full = missing[0]
    return faithful, full


def functor_properties(F: Functor, pullbacks=True) -> PropertyReport:
    """Exhaustive property flags over the source core, each with a witness."""
    S, T = F.source, F.target
    C = S.ambient
    w: dict = {}
    notes: list = []
    not_faithful, not_full = _faithful_full(F)
    if not_faithful is not None:
        w["faithful"] = not_faithful
    if not_full is not None:
        w["full"] = not_full
    for f in S.core_morphisms():
        ff = F.mor(f)
        m, fm = is_mono(S, f), is_mono(T, ff)
        e, fe = is_epi(S, f), is_epi(T, ff)
        if m and not fm:
            w.setdefault("preserves_monos", f)
        if fm and not m:
            w.setdefault("reflects_monos", f)
        if e and not fe:
            w.setdefault("preserves_epis", f)
        if fe and not e:
            w.setdefault("reflects_epis", f)
    if pullbacks:
        missing = 0
        for f, g in S.core_cospans():
            r = pullback(S, f, g)
            if r is None:
                missing += 1
                continue
            if not is_pullback_square(T, F.mor(f), F.mor(g), F.mor(r.proj1), F.mor(r.proj2)):
                w["preserves_pullbacks"] = (f, g)
                break
        if missing:
            notes.append(f"{missing} core cospans without pullback were skipped")
    t = terminal(S)
    if t is not None:
        ft = F.obj(t)
        X = T.ambient
        if any(X.hom_count(x, ft) != 1 for x in X.objects):
            w["preserves_terminal"] = t
    else:
        notes.append("source has no terminal object")
    names = [
        "faithful", "full", "preserves_monos", "reflects_monos", "preserves_epis",
        "reflects_epis", "preserves_terminal",
    ]
    if pullbacks:
        names.append("preserves_pullbacks")
    flags = {n: n not in w for n in names}
    notes.append("finite limits are checked as pullbacks plus terminal object")
    return PropertyReport(flags, w, notes)


def is_fully_faithful(F: Functor) -> bool:
    a, b = _faithful_full(F)
    return a is None and b is None


def equivalence_report(F: Functor) -> dict:
    """Full, faithful and essentially surjective (over the cores)."""
    not_faithful, not_full = _faithful_full(F)
    images = [F.obj(a) for a in F.source.core]
    missed = None
    for y in F.target.core:
        if not any(isomorphism(F.target, im, y) is not None for im in images):
            missed = y
            break
    return {
        "faithful": not_faithful is None,
        "full": not_full is None,
        "essentially_surjective": missed is None,
        "witness": not_faithful or not_full or missed,
    }


def is_equivalence(F: Functor) -> bool:
    r = equivalence_report(F)
    return r["faithful"] and r["full"] and r["essentially_surjective"]


# ---------------------------------------------------------------------------
# weak fibrations


@dataclass(frozen=True)
class FibrationVerdict:
    kind: str  # "none" | "weak" | "special" (opfibrations use "none" | "weak")
    witness: Any = None

    def __bool__(self):
        return self.kind != "none"


def _lift(F: Functor, c, x, u):
    """Best lift of ``u: x -> F(c)``: ``"special"``, ``"weak"`` or ``None``."""
    S, T = F.source, F.target
    C, X = S.ambient, T.ambient
    best = None
    for U in S.core:
        fu = F.obj(U)
        phis = X.hom(fu, x)
        if not phis:
            continue
        for f in C.hom(U, c):
            ff = F.mor(f)
            for phi in phis:
                if X.compose(u, phi) != ff:
                    continue
                if is_iso(T, phi):
                    return "special"
                if best is None and is_epi(T, phi):
                    best = "weak"
    return best


def weak_fibration_kind(F: Functor) -> FibrationVerdict:
    """For every core ``c`` and ``u: x -> F(c)`` look for ``f: U -> c`` and an
    epi (or iso, for ``special``) ``phi`` with ``F(f) = u . phi``."""
    S, T = F.source, F.target
    X = T.ambient
    kind = "special"
    weak_at = None
    for c in S.core:
        fc = F.obj(c)
        for x in T.core:
            for u in X.hom(x, fc):
                got = _lift(F, c, x, u)
                if got is None:
                    return FibrationVerdict("none", (c, u))
                if got == "weak" and kind == "special":
                    kind, weak_at = "weak", (c, u)
    return FibrationVerdict(kind, weak_at)


def weak_opfibration(F: Functor) -> FibrationVerdict:
    """For every core ``c`` and ``v: F(c) -> y`` look for ``g: c -> V`` and a
    mono ``psi`` with ``F(g) = psi . v``."""
    S, T = F.source, F.target
    C, X = S.ambient, T.ambient
    for c in S.core:
        fc = F.obj(c)
        for y in T.core:
            for v in X.hom(fc, y):
                ok = False
                for V in S.core:
                    psis = X.hom(y, F.obj(V))
                    if not psis:
                        continue
                    for g in C.hom(c, V):
                        fg = F.mor(g)
                        if any(X.compose(psi, v) == fg and is_mono(T, psi) for psi in psis):
                            ok = True
                            break
                    if ok:
                        break
                if not ok:
                    return FibrationVerdict("none", (c, v))
    return FibrationVerdict("weak")


def is_special_weak_bifibration(F: Functor) -> bool:
    return weak_fibration_kind(F).kind == "special" and bool(weak_opfibration(F))


def check_sle_hypotheses(A: Adjunction) -> ConditionVerdict:
    """Unit components pullback-stable epis, counit components epis; when both
    hold, the left adjoint must come out as a weak fibration."""
    F, G = A.left, A.right
    S, T = F.source, F.target
    C, X = S.ambient, T.ambient
    bounded = False
    for c in S.core:
        eta = A.unit.at(c)
        if not is_epi(S, eta):
            return ConditionVerdict(
                "sle", False, (eta,), detail=f"unit component at {C.show_object(c)} is not epi"
            )
        target = C.cod(eta)
        for y in S.core:
            for u in C.hom(y, target):
                r = pullback(S, eta, u)
                if r is None:
                    bounded = True
                    continue
                if not is_epi(S, r.proj2):
                    return ConditionVerdict(
                        "sle", False, (eta, u), bounded,
                        f"pullback of the unit at {C.show_object(c)} along {C.show(u)} is not epi",
                    )
    for x in G.source.core:
        eps = A.counit.at(x)
        if not is_epi(T, eps):
            return ConditionVerdict(
                "sle", False, (eps,), bounded,
                f"counit component at {X.show_object(x)} is not epi",
            )
    kind = weak_fibration_kind(F)
    if not kind:
        return ConditionVerdict(
            "sle", False, kind.witness, bounded,
            "hypotheses hold but the left adjoint is not a weak fibration",
        )
    return ConditionVerdict("sle", True, None, bounded, f"left adjoint is a {kind.kind} weak fibration")


# ---------------------------------------------------------------------------
# localizations


def is_faithful_essential_localization(L: LocalizationTriple) -> ConditionVerdict:
    tag = "faithful-essential-localization"
    for label, adj in (("F -| G", L.right), ("H -| F", L.left)):
        rep = validate_adjunction(adj)
        if not rep.valid:
            return ConditionVerdict(tag, False, None, detail=f"{label}: {rep.violations[0]}")
    props = functor_properties(L.F)
    for flag in ("preserves_pullbacks", "preserves_terminal", "faithful"):
        if not props.flags[flag]:
            return ConditionVerdict(tag, False, (props.witnesses[flag],), detail=f"F fails {flag}")
    for label, fun in (("G", L.G), ("H", L.H)):
        if not is_fully_faithful(fun):
            return ConditionVerdict(tag, False, None, detail=f"{label} is not fully faithful")
    return ConditionVerdict(tag, True, detail="finite limits checked as pullbacks plus terminal")


@dataclass
class TheoremResult:
    claim: str
    status: str
    checked: int = 0
    counterexamples: list = field(default_factory=list)
    hypotheses: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    witness: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def as_dict(self) -> dict:
        return {
            "claim": self.claim,
            "status": self.status,
            "checked": self.checked,
            "counterexamples": list(self.counterexamples),
            "hypotheses": dict(self.hypotheses),
            "notes": list(self.notes),
            "witness": self.witness,
        }


def _not_applicable(claim, hyps, notes=()):
    failing = [k for k, v in hyps.items() if not v]
    return TheoremResult(
        claim, NOT_APPLICABLE, 0, [], hyps, [f"hypothesis fails: {k}" for k in failing] + list(notes)
    )


def _finish(claim, hyps, checked, bad, notes):
    return TheoremResult(claim, FAIL if bad else PASS, checked, bad[:20], hyps, notes)


def verify_preservation_theorems(L: LocalizationTriple) -> list:
    """Both directions of the three preservation/reflection equivalences,
    over every morphism of ``C`` with core codomain."""
    F = L.F
    S, T = L.C, L.X
    C = S.ambient
    props = functor_properties(F)
    opfib = weak_opfibration(F)
    fib = weak_fibration_kind(F)
    scope = ["finite limits are checked as pullbacks plus terminal object"]
    morphisms = S.core_codomain_morphisms()
    results = []

    hyps = {
        "weak opfibration": bool(opfib),
        "preserves monos": props.preserves_monos,
        "reflects monos": props.reflects_monos,
    }
    if all(hyps.values()):
        bad = [
            C.show(m) for m in morphisms
            if is_essential_mono(S, m) != is_essential_mono(T, F.mor(m))
        ]
        results.append(_finish("essential-reflected-and-preserved", hyps, len(morphisms), bad, []))
    else:
        results.append(_not_applicable("essential-reflected-and-preserved", hyps))

    hyps = {
        "special weak bifibration": fib.kind == "special" and bool(opfib),
        "preserves pullbacks": props.preserves_pullbacks,
        "reflects monos": props.reflects_monos,
        "C pullback-closed": S.pullback_closed_for_core,
        "X pullback-closed": T.pullback_closed_for_core,
    }
    if all(hyps.values()):
        bad, n, skipped = [], 0, 0
        for m in morphisms:
            fm = F.mor(m)
            if not T.in_core(T.ambient.cod(fm)):
                skipped += 1
                continue
            n += 1
            if pb_stability(S, m).holds != pb_stability(T, fm).holds:
                bad.append(C.show(m))
        notes = [f"{skipped} morphisms skipped: image codomain outside X core"] if skipped else []
        results.append(_finish("stable-essential-reflected-and-preserved", hyps, n, bad, notes + scope))
    else:
        results.append(_not_applicable("stable-essential-reflected-and-preserved", hyps, scope))

    loc = is_faithful_essential_localization(L)
    pbse_iso = check_condition(T, Condition.PBSE_ISO)
    hyps = {
        "faithful essential localization": loc.holds,
        "stable essential monos of X are isos": pbse_iso.holds and not pbse_iso.bounded,
        "C pullback-closed": S.pullback_closed_for_core,
    }
    if all(hyps.values()):
        bad = [
            C.show(m) for m in morphisms
            if pb_stability(S, m).holds != is_iso(T, F.mor(m))
        ]
        results.append(_finish("stable-essential-iff-image-iso", hyps, len(morphisms), bad, scope))
    else:
        results.append(_not_applicable("stable-essential-iff-image-iso", hyps, scope))
    return results


def check_localization_consequences(L: LocalizationTriple) -> TheoremResult:
    """Consequences of a faithful essential localization: the adjoints of F
    are fully faithful, F preserves and reflects monos and epis, eps and zeta
    are isos, F(theta), F(eta) are isos, theta and eta are bimorphisms, and F
    is an equivalence when C is balanced."""
    S, T = L.C, L.X
    C, X = S.ambient, T.ambient
    loc = is_faithful_essential_localization(L)
    hyps = {"faithful essential localization": loc.holds}
    if not loc.holds:
        return _not_applicable("localization-consequences", hyps, [loc.detail])
    bad = []
    props = functor_properties(L.F)
    for flag in ("preserves_monos", "preserves_epis", "reflects_monos", "reflects_epis"):
        if not props.flags[flag]:
            bad.append(f"F fails {flag}")
    if not is_fully_faithful(L.H):
        bad.append("left adjoint H is not fully faithful")
    n = 0
    for x in T.core:
        for name, nt in (("eps", L.eps), ("zeta", L.zeta)):
            n += 1
            if not is_iso(T, nt.at(x)):
                bad.append(f"{name} at {X.show_object(x)} is not iso")
    for c in S.core:
        for name, nt in (("eta", L.eta), ("theta", L.theta)):
            n += 2
            comp = nt.at(c)
            if not is_iso(T, L.F.mor(comp)):
                bad.append(f"F({name}) at {C.show_object(c)} is not iso")
            if not (is_mono(S, comp) and is_epi(S, comp)):
                bad.append(f"{name} at {C.show_object(c)} is not a bimorphism")
    notes = []
    if check_condition(S, Condition.BALANCED).holds:
        n += 1
        if not is_equivalence(L.F):
            bad.append("C is balanced but F is not an equivalence")
        notes.append("C balanced: F checked to be an equivalence")
    return _finish("localization-consequences", hyps, n, bad, notes)


def reflection_properties(F: Functor) -> TheoremResult:
    """Reflection of (stable) essential monos whenever the functor preserves
    and reflects monos (and preserves pullbacks)."""
    S, T = F.source, F.target
    C = S.ambient
    props = functor_properties(F)
    hyps = {"preserves monos": props.preserves_monos, "reflects monos": props.reflects_monos}
    if not all(hyps.values()):
        return _not_applicable("reflects-essential", hyps)
    bad, n = [], 0
    stable_too = props.preserves_pullbacks and S.pullback_closed_for_core and T.pullback_closed_for_core
    for m in S.core_morphisms():
        fm = F.mor(m)
        n += 1
        if is_essential_mono(T, fm) and not is_essential_mono(S, m):
            bad.append(f"essential not reflected at {C.show(m)}")
        if stable_too and T.in_core(T.ambient.cod(fm)):
            if pb_stability(T, fm).holds and not pb_stability(S, m).holds:
                bad.append(f"stable essential not reflected at {C.show(m)}")
    notes = [] if stable_too else ["stable reflection skipped: pullback hypotheses unmet"]
    return _finish("reflects-essential", hyps, n, bad, notes)
