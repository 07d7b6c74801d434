"""Command-line theorem ids and the verifier each one runs."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .corpus import CorpusEntry, verify_condition_matrix
from .envelopes import (
    verify_natural_envelopes,
    verify_projective_covers,
    verify_semilattice_example,
)
from .functors import NOT_APPLICABLE, TheoremResult, verify_preservation_theorems
from .spectral import verify_bimorphism_duality, verify_spectral_equivalence


@dataclass(frozen=True)
class TheoremSpec:
    verifier: Callable
    # position in the verifier's result list, or None for a single result
    index: Optional[int]
    default_corpus: str
    needs_localization: bool = True
    description: str = ""


THEOREMS = {
    "2.5": TheoremSpec(
        verify_preservation_theorems, 0, "finpreord:2,4",
        description="essential monos are preserved and reflected",
    ),
    "3.2": TheoremSpec(
        verify_preservation_theorems, 1, "finpreord:2,4",
        description="pullback-stable essential monos are preserved and reflected",
    ),
    "4.9": TheoremSpec(
        verify_preservation_theorems, 2, "finpreord:2,4",
        description="m is a stable essential mono iff F(m) is an isomorphism",
    ),
    "5.1": TheoremSpec(
        verify_spectral_equivalence, None, "finpreord:2,4",
        description="F factors through Spec(C) by an equivalence",
    ),
    "6.3": TheoremSpec(
        verify_condition_matrix, None, "", needs_localization=False,
        description="condition matrix on FinSet, pointed sets with I and the abelian fragment",
    ),
    "6.5": TheoremSpec(
        verify_bimorphism_duality, 0, "finpreord:2,4",
        description="stable essential monos are exactly the bimorphisms",
    ),
    "6.6": TheoremSpec(
        verify_bimorphism_duality, 1, "finpreord:2,4",
        description="the dual class coincides and Spec(C), X, Spec(C^op)^op are equivalent",
    ),
    "7.1a": TheoremSpec(
        verify_natural_envelopes, None, "finpreord-pointed:2,4",
        description="unit components are natural injective envelopes",
    ),
    "7.1b": TheoremSpec(
        verify_projective_covers, None, "finpreord-unpointed:2,4",
        description="counit components are natural projective covers",
    ),
    "example-1.1": TheoremSpec(
        verify_semilattice_example, None, "semilattice:B2",
        description="semilattice example: trivial Spec and the top as sole injective",
    ),
}

_USES_CAP = {verify_spectral_equivalence, verify_bimorphism_duality, verify_natural_envelopes,
             verify_projective_covers, verify_semilattice_example}


def run_theorem(theorem_id: str, entry: Optional[CorpusEntry], cap=None) -> TheoremResult:
    spec = THEOREMS[theorem_id]
    if not spec.needs_localization:
        return spec.verifier()
    if entry is None or entry.localization is None:
        name = entry.name if entry else "none"
        return TheoremResult(
            theorem_id, NOT_APPLICABLE, 0, [], {"localization supplied": False},
            [f"corpus entry {name} carries no localization"],
        )
    if spec.verifier in _USES_CAP:
        out = spec.verifier(entry.localization, cap)
    else:
        out = spec.verifier(entry.localization)
    return out if spec.index is None else out[spec.index]
