"""Essential monomorphisms, their pullback-stable core, and the conditions
on a category that the rest of the engine tests for."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .kernel import (
    CategoryError,
    IntegrityError,
    Tier,
    as_tier,
    is_epi,
    is_iso,
    is_mono,
    is_split_mono,
    pullback,
)


def _memo(T: Tier, name: str) -> dict:
    return T.__dict__.setdefault(name, {})


def essential_failure(C, m):
    """A non-mono ``f`` with ``f . m`` mono, or ``None`` if there is none.

    ``f`` ranges over morphisms out of ``cod(m)`` into core objects.
    """
    T = as_tier(C)
    cat = T.ambient
    b = cat.cod(m)
    for y in T.core:
        for f in cat.hom(b, y):
            if not is_mono(T, f) and is_mono(T, cat.compose(f, m)):
                return f
    return None


def is_essential_mono(C, m) -> bool:
    T = as_tier(C)
    memo = _memo(T, "_essential")
    hit = memo.get(m)
    if hit is None:
        if not T.ambient.contains(m):
            raise CategoryError(f"unknown morphism {m!r}")
        hit = memo[m] = is_mono(T, m) and essential_failure(T, m) is None
    return hit


def is_essential_epi(C, e) -> bool:
    return is_essential_mono(as_tier(C).opposite(), e)


@dataclass(frozen=True)
class StabilityVerdict:
    holds: bool
    bounded: bool = False
    # (u, projection) pair whose pullback projection is not essential
    witness: Optional[tuple] = None


def pb_stability(T: Tier, m) -> StabilityVerdict:
    """Pullback-stability of essential-ness for ``m``, with provenance.

    Every pullback of ``m`` along ``u: X -> cod(m)``, ``X`` core, must be an
    essential mono; ``u = id`` covers ``m`` itself.  Missing pullbacks mark
    the verdict as bounded.
    """
    T = as_tier(T)
    memo = _memo(T, "_pbse")
    hit = memo.get(m)
    if hit is not None:
        return hit
    cat = T.ambient
    c = cat.cod(m)
    if not T.in_core(c):
        raise CategoryError(f"codomain of {cat.show(m)} is not a core object")
    if not is_mono(T, m):
        hit = StabilityVerdict(False, witness=(cat.identity(c), None))
        memo[m] = hit
        return hit
    bounded = False
    hit = None
    for x in T.core:
        for u in cat.hom(x, c):
            r = pullback(T, m, u)
            if r is None:
                if T.in_core(cat.dom(m)) and T.__dict__.get("pullback_closed_for_core"):
                    raise IntegrityError(
                        f"tier {T.name} claims pullback closure but "
                        f"{cat.show(m)}, {cat.show(u)} has no pullback"
                    )
                bounded = True
                continue
            if not is_essential_mono(T, r.proj2):
                hit = StabilityVerdict(False, bounded, (u, r.proj2))
                break
        if hit is not None:
            break
    if hit is None:
        hit = StabilityVerdict(True, bounded)
    memo[m] = hit
    return hit


def is_pb_stable_essential_mono(T, m) -> bool:
    return pb_stability(as_tier(T), m).holds


@dataclass
class MonoClassRegistry:
    """Monos, essential monos and pullback-stable essential monos of a tier,
    enumerated over morphisms whose codomain is a core object."""

    tier: Tier
    monos: frozenset
    essential: frozenset
    pb_stable_essential: frozenset
    bounded: bool
    isos: frozenset = field(default=frozenset())

    def violations(self) -> list:
        """Registry invariants: inclusions, isos inside, closure under composition."""
        cat = self.tier.ambient
        out = []
        if not self.pb_stable_essential <= self.essential:
            out.append("pb-stable essential monos not contained in essential monos")
        if not self.essential <= self.monos:
            out.append("essential monos not contained in monos")
        for i in sorted(self.isos - self.pb_stable_essential):
            out.append(f"isomorphism {cat.show(i)} missing from pb-stable essential class")
        by_cod: dict = {}
        for s in self.pb_stable_essential:
            by_cod.setdefault(cat.cod(s), []).append(s)
        for s2 in sorted(self.pb_stable_essential):
            for s1 in by_cod.get(cat.dom(s2), ()):
                comp = cat.compose(s2, s1)
                if comp not in self.pb_stable_essential:
                    out.append(f"{cat.show(s2)} . {cat.show(s1)} leaves the class")
        return out


def st_mono_e(T) -> MonoClassRegistry:
    T = as_tier(T)
    reg = T.__dict__.get("_registry")
    if reg is not None:
        return reg
    monos, ess, pbse, isos = set(), set(), set(), set()
    bounded = not T.pullback_closed_for_core
    for m in T.core_codomain_morphisms():
        if not is_mono(T, m):
            continue
        monos.add(m)
        if is_iso(T, m):
            isos.add(m)
        if not is_essential_mono(T, m):
            continue
        ess.add(m)
        v = pb_stability(T, m)
        bounded = bounded or v.bounded
        if v.holds:
            pbse.add(m)
    reg = MonoClassRegistry(
        T, frozenset(monos), frozenset(ess), frozenset(pbse), bounded, frozenset(isos)
    )
    T.__dict__["_registry"] = reg
    return reg


# ---------------------------------------------------------------------------
# conditions


class Condition(str, Enum):
    PBSE_ISO = "pbse-iso"
    MONO_SPLIT = "mono-split"
    BALANCED = "balanced"
    ESSENTIAL_ISO = "essential-iso"
    CO_PBSE_ISO = "co-pbse-iso"
    EPI_SPLIT = "epi-split"
    CO_BALANCED = "co-balanced"
    CO_ESSENTIAL_ISO = "co-essential-iso"

    @property
    def dual(self) -> "Condition":
        return _DUALS[self]

    @property
    def is_dual(self) -> bool:
        return self in (
            Condition.CO_PBSE_ISO,
            Condition.EPI_SPLIT,
            Condition.CO_BALANCED,
            Condition.CO_ESSENTIAL_ISO,
        )


_DUALS = {
    Condition.PBSE_ISO: Condition.CO_PBSE_ISO,
    Condition.MONO_SPLIT: Condition.EPI_SPLIT,
    Condition.BALANCED: Condition.CO_BALANCED,
    Condition.ESSENTIAL_ISO: Condition.CO_ESSENTIAL_ISO,
}
_DUALS.update({v: k for k, v in list(_DUALS.items())})


@dataclass(frozen=True)
class ConditionVerdict:
    tag: str
    holds: bool
    witness: Optional[tuple] = None
    bounded: bool = False
    detail: str = ""

    def __bool__(self):
        return self.holds


def _smallest(items):
    return min(items) if items else None


def check_condition(T, tag) -> ConditionVerdict:
    """Evaluate a condition on the core-codomain morphisms of a tier.

    Dual tags run the primal check on the opposite tier.  Witnesses are the
    smallest violating morphism id.
    """
    T = as_tier(T)
    tag = Condition(tag)
    if tag.is_dual:
        v = check_condition(T.opposite(), tag.dual)
        return ConditionVerdict(tag.value, v.holds, v.witness, v.bounded, v.detail)
    cat = T.ambient
    if tag is Condition.PBSE_ISO:
        reg = st_mono_e(T)
        bad = _smallest([m for m in reg.pb_stable_essential if m not in reg.isos])
        detail = "pullback-stable essential mono that is not an isomorphism"
        bounded = reg.bounded
    elif tag is Condition.ESSENTIAL_ISO:
        reg = st_mono_e(T)
        bad = _smallest([m for m in reg.essential if m not in reg.isos])
        detail = "essential mono that is not an isomorphism"
        bounded = False
    elif tag is Condition.MONO_SPLIT:
        bad = None
        for m in T.core_codomain_morphisms():
            if is_mono(T, m) and not is_split_mono(T, m):
                bad = m
                break
        detail = "monomorphism without a retraction"
        bounded = False
    else:
        bad = None
        for m in T.core_codomain_morphisms():
            if is_mono(T, m) and is_epi(T, m) and not is_iso(T, m):
                bad = m
                break
        detail = "bimorphism that is not an isomorphism"
        bounded = False
    if bad is None:
        return ConditionVerdict(tag.value, True, None, bounded, "")
    return ConditionVerdict(
        tag.value, False, (bad,), bounded, f"{detail}: {cat.show(bad)}"
    )


def witness_is_violation(T, verdict: ConditionVerdict) -> bool:
    """Re-check a failing verdict's witness from scratch."""
    T = as_tier(T)
    tag = Condition(verdict.tag)
    if verdict.holds or not verdict.witness:
        return False
    if tag.is_dual:
        T, tag = T.opposite(), tag.dual
    (m,) = verdict.witness
    if is_iso(T, m):
        return False
    if tag is Condition.PBSE_ISO:
        return is_pb_stable_essential_mono(T, m)
    if tag is Condition.ESSENTIAL_ISO:
        return is_essential_mono(T, m)
    if tag is Condition.MONO_SPLIT:
        return is_mono(T, m) and not is_split_mono(T, m)
    return is_mono(T, m) and is_epi(T, m)


def condition_matrix(T, tags=None) -> dict:
    tags = list(Condition) if tags is None else [Condition(t) for t in tags]
    return {t.value: check_condition(T, t) for t in tags}


def split_implies_others(T) -> bool:
    """Split monos force both the iso condition on stable essentials and balance."""
    if not check_condition(T, Condition.MONO_SPLIT).holds:
        return True
    return (
        check_condition(T, Condition.PBSE_ISO).holds
        and check_condition(T, Condition.BALANCED).holds
    )
