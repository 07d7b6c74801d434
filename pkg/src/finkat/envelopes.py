"""Injective and projective objects, envelopes and covers, and the
certificates produced by the units and counits of a localization."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .essentials import (
    Condition,
    check_condition,
    is_essential_epi,
    is_essential_mono,
    st_mono_e,
)
from .functors import (
    FAIL,
    NOT_APPLICABLE,
    PASS,
    Functor,
    LocalizationTriple,
    TheoremResult,
    compose_functors,
    is_equivalence,
    is_faithful_essential_localization,
)
from .kernel import CategoryError, Tier, as_tier, is_iso, is_mono
from .spectral import SpecError, induced_functor, spec_build


def _require_object(T: Tier, x):
    if not T.ambient.has_object(x):
        raise CategoryError(f"unknown object {x!r}")


def injectivity_failure(C, x):
    """``(m, h)`` with ``h`` not extending along the mono ``m``, or ``None``.

    Monos range over morphisms between core objects.
    """
    T = as_tier(C)
    _require_object(T, x)
    cat = T.ambient
    for a in T.core:
        into_x = cat.hom(a, x)
        if not into_x:
            continue
        for b in T.core:
            out_b = cat.hom(b, x)
            for m in cat.hom(a, b):
                if not is_mono(T, m):
                    continue
                reached = {cat.compose(k, m) for k in out_b}
                for h in into_x:
                    if h not in reached:
                        return m, h
    return None


def is_injective(C, x) -> bool:
    return injectivity_failure(C, x) is None


def is_projective(C, x) -> bool:
    return is_injective(as_tier(C).opposite(), x)


def is_injective_envelope(C, m) -> bool:
    T = as_tier(C)
    return is_essential_mono(T, m) and is_injective(T, T.ambient.cod(m))


def is_projective_cover(C, e) -> bool:
    T = as_tier(C)
    return is_essential_epi(T, e) and is_projective(T, T.ambient.dom(e))


def injective_objects(C) -> list:
    T = as_tier(C)
    return [a for a in T.core if is_injective(T, a)]


def projective_objects(C) -> list:
    return injective_objects(as_tier(C).opposite())


def injective_envelopes(C, a) -> list:
    """All injective envelopes of ``a`` with core codomain, in id order."""
    T = as_tier(C)
    cat = T.ambient
    inj = injective_objects(T)
    return sorted(m for b in inj for m in cat.hom(a, b) if is_essential_mono(T, m))


def envelopes_isomorphic(C, e1, e2) -> bool:
    """Whether some iso ``phi`` between the codomains has ``phi . e1 = e2``."""
    T = as_tier(C)
    cat = T.ambient
    return any(
        is_iso(T, phi) and cat.compose(phi, e1) == e2
        for phi in cat.hom(cat.cod(e1), cat.cod(e2))
    )


# ---------------------------------------------------------------------------
# certificates


@dataclass
class EnvelopeCertificate:
    """``eta_C`` as an injective envelope, or ``theta_C`` as a projective cover.

    Each entry of ``checks`` is computed independently; the certificate is
    valid when every entry is true.
    """

    object: object
    morphism: object
    kind: str  # "envelope" | "cover"
    checks: dict = field(default_factory=dict)
    status: str = PASS
    witness: Optional[object] = None
    detail: str = ""

    @property
    def valid(self) -> bool:
        return self.status != NOT_APPLICABLE and all(self.checks.values())

    def as_dict(self, show=str, show_object=str) -> dict:
        return {
            "object": show_object(self.object),
            "morphism": None if self.morphism is None else show(self.morphism),
            "kind": self.kind,
            "checks": dict(self.checks),
            "status": self.status,
            "valid": self.valid,
            "witness": None if self.witness is None else show(self.witness),
        }


def _square_failures(L: LocalizationTriple, c) -> list:
    """Naturality squares of ``eta`` that touch ``c``, in both directions."""
    C = L.C
    cat = C.ambient
    GF = compose_functors(L.G, L.F)
    out = []
    for d in C.core:
        for f in cat.hom(c, d) + cat.hom(d, c):
            a, b = cat.dom(f), cat.cod(f)
            if cat.compose(GF.mor(f), L.eta.at(a)) != cat.compose(L.eta.at(b), f):
                out.append(f)
    return out


def _unit_certificate(L: LocalizationTriple, c, kind: str) -> EnvelopeCertificate:
    C = L.C
    cat = C.ambient
    _require_object(C, c)
    split = check_condition(L.X, Condition.MONO_SPLIT)
    if not split.holds:
        (w,) = split.witness
        return EnvelopeCertificate(
            c, None, kind, {}, NOT_APPLICABLE, w,
            f"hypothesis fails: {split.detail}",
        )
    m = L.eta.at(c)
    names = (
        ("codomain_injective", "morphism_essential")
        if kind == "envelope"
        else ("domain_projective", "morphism_coessential")
    )
    checks = {
        names[0]: is_injective(C, cat.cod(m)),
        names[1]: is_essential_mono(C, m),
        "naturality_ok": not _square_failures(L, c),
        "fixed_point_ok": is_injective(C, c) == is_iso(C, m),
    }
    status = PASS if all(checks.values()) else FAIL
    return EnvelopeCertificate(c, m, kind, checks, status)


def envelope_via_unit(L: LocalizationTriple, c) -> EnvelopeCertificate:
    """Certificate that ``eta_c: c -> GF(c)`` is an injective envelope;
    not applicable unless every mono of ``X`` splits."""
    return _unit_certificate(L, c, "envelope")


def cover_via_counit(L: LocalizationTriple, c) -> EnvelopeCertificate:
    """Certificate that ``theta_c: HF(c) -> c`` is a projective cover; runs
    the envelope certificate on the opposite triple."""
    return _unit_certificate(L.dual(), c, "cover")


# ---------------------------------------------------------------------------
# verifiers


def _envelope_theorem(L: LocalizationTriple, hyps: dict, claim: str, kind: str, cap=None):
    """Shared body of the envelope and cover verifiers.  ``L`` is already
    dualised for covers; ``hyps`` are the hypotheses on the original triple."""
    C, X = L.C, L.X
    cat = C.ambient
    split = check_condition(X, Condition.MONO_SPLIT)
    label = "monos of X split" if kind == "envelope" else "epis of X split"
    hyps = dict(hyps)
    hyps[label] = split.holds
    if not all(hyps.values()):
        failing = [k for k, v in hyps.items() if not v]
        notes = [f"hypothesis fails: {k}" for k in failing]
        witness = None
        if not split.holds:
            witness = X.ambient.show(split.witness[0])
            notes.append(split.detail)
        return TheoremResult(claim, NOT_APPLICABLE, 0, [], hyps, notes, witness)
    bad = []
    n = 0
    for c in C.core:
        cert = _unit_certificate(L, c, kind)
        n += 1
        if not cert.valid:
            failed = [k for k, v in cert.checks.items() if not v]
            bad.append(f"certificate at {cat.show_object(c)} fails {', '.join(failed)}")
        # essential-ness cross-checked against the registry as well
        if L.eta.at(c) not in st_mono_e(C).essential:
            bad.append(f"unit at {cat.show_object(c)} missing from the essential class")
    bad += L.eta.violations()
    # uniqueness of envelopes up to iso
    for c in C.core:
        envs = injective_envelopes(C, c)
        n += len(envs)
        for e in envs[1:]:
            if not envelopes_isomorphic(C, envs[0], e):
                bad.append(f"two non-isomorphic envelopes of {cat.show_object(c)}")
    inj = injective_objects(C)
    inj_tier = Tier(cat, inj, name=f"Inj({C.name})")
    for x in X.core:
        if L.G.obj(x) not in inj_tier._core_set:
            bad.append(f"G({X.ambient.show_object(x)}) is not an injective core object")
    if not bad:
        G_inj = Functor(X, inj_tier, L.G.obj, L.G.mor, "G")
        if not is_equivalence(G_inj):
            bad.append("X is not equivalent to the injective objects via G")
        try:
            spec = spec_build(C, cap)
        except SpecError as exc:
            bad.append(f"spectral category unavailable: {exc}")
        else:
            bad += spec.checks["violations"]
            Fbar = induced_functor(spec, L.F)
            if not is_equivalence(Fbar):
                bad.append("Spec is not equivalent to X via Fbar")
            if not is_equivalence(compose_functors(G_inj, Fbar, "G.Fbar")):
                bad.append("Spec is not equivalent to the injective objects via G.Fbar")
    shown = ", ".join(cat.show_object(a) for a in inj)
    notes = [
        f"{'injective' if kind == 'envelope' else 'projective'} core objects: {shown}",
        "equivalences realised by G, Fbar and G.Fbar"
        if kind == "envelope"
        else "equivalences realised by H^op, (F^op)bar and their composite",
    ]
    return TheoremResult(claim, FAIL if bad else PASS, n, bad[:20], hyps, notes)


def verify_natural_envelopes(L: LocalizationTriple, cap=None) -> TheoremResult:
    """Every unit component is an injective envelope, the envelopes are
    natural, and Spec, X and the injective objects are equivalent."""
    hyps = {"faithful essential localization": is_faithful_essential_localization(L).holds}
    return _envelope_theorem(L, hyps, "natural-injective-envelopes", "envelope", cap)


def verify_projective_covers(L: LocalizationTriple, cap=None) -> TheoremResult:
    """Dual statement: counit components are projective covers and
    Spec(C^op), X^op and the opposite of the projectives are equivalent."""
    hyps = {"faithful essential localization": is_faithful_essential_localization(L).holds}
    return _envelope_theorem(L.dual(), hyps, "natural-projective-covers", "cover", cap)


def verify_semilattice_example(L: LocalizationTriple, cap=None) -> TheoremResult:
    """A meet-semilattice mapped to the terminal category: every morphism is
    a stable essential mono, Spec is trivial, the top is the only injective
    and every object's envelope is its map to the top."""
    from .kernel import terminal, terminal_category

    C, X = L.C, L.X
    cat = C.ambient
    claim = "semilattice-example"
    hyps = {
        "C is thin": all(cat.hom_count(a, b) <= 1 for a in C.core for b in C.core),
        "X is the terminal category": len(X.core) == 1
        and X.ambient.hom_count(X.core[0], X.core[0]) == 1,
    }
    if not all(hyps.values()):
        failing = [k for k, v in hyps.items() if not v]
        return TheoremResult(claim, NOT_APPLICABLE, 0, [], hyps, [f"hypothesis fails: {k}" for k in failing])
    bad = []
    morphs = C.core_codomain_morphisms()
    reg = st_mono_e(C)
    missing = [cat.show(m) for m in morphs if m not in reg.pb_stable_essential]
    if missing:
        bad.append(f"not stable essential: {', '.join(missing)}")
    spec = spec_build(C, cap)
    bad += spec.checks["violations"]
    sizes = {spec.hom_size(a, b) for a in C.core for b in C.core}
    if sizes != {1}:
        bad.append(f"Spec hom-class sizes {sorted(sizes)}, expected all 1")
    one = terminal_category()
    to_one = Functor(spec.category, one, lambda a: "*", lambda f: "id*", "!")
    if not is_equivalence(to_one):
        bad.append("Spec is not equivalent to the terminal category")
    top = terminal(C)
    inj = injective_objects(C)
    if inj != [top]:
        bad.append(f"injective objects {inj!r}, expected [{top!r}]")
    for a in C.core:
        envs = injective_envelopes(C, a)
        if len(envs) != 1 or cat.cod(envs[0]) != top:
            bad.append(f"envelope of {cat.show_object(a)} is not its map to the top")
    notes = [
        f"{len(morphs)} morphisms, injective objects: {', '.join(map(str, inj))}",
        f"Spec hom-class sizes: {sorted(sizes)}",
    ]
    return TheoremResult(claim, FAIL if bad else PASS, len(morphs), bad[:20], hyps, notes)
