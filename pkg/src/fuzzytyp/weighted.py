"""Element weights for distinguished concepts, faithfulness, coherence,
and fm-modelhood of a weighted knowledge base.

The weight of an element x for a distinguished concept C is the sum,
over C's weighted typicality inclusions, of weight times the element's
degree in the consequent, provided x belongs to C with positive degree;
non-members get minus infinity.  Faithfulness demands that strictly
higher C-membership forces a strictly higher weight; coherence demands
the two strict orders coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from fuzzytyp.algebra import ZERO
from fuzzytyp.interpretation import (
    FuzzyInterpretation,
    StrictViolation,
    _eval_all,
    is_model_strict,
)
from fuzzytyp.syntax import WeightedKB

#: Bottom of the extended weight order.  Compares strictly below every
#: Fraction; NEG_INF > NEG_INF is false, so two non-members never form a
#: violating pair.
NEG_INF = float("-inf")

ExtendedWeight = Union[Fraction, float]


def weight(interp: FuzzyInterpretation, kb: WeightedKB, concept_name: str,
           elem: str) -> ExtendedWeight:
    """Weight of ``elem`` w.r.t. the distinguished ``concept_name``.

    An empty weighted table gives weight 0 to every member.
    """
    if concept_name not in kb.distinguished:
        raise ValueError(f"{concept_name!r} is not a distinguished concept")
    if interp.concept_degree(concept_name, elem) == ZERO:
        return NEG_INF
    total = Fraction(0)
    for incl in kb.weighted_inclusions(concept_name):
        total += incl.weight * _eval_all(interp, incl.consequent)[elem]
    return total


def weight_table(interp: FuzzyInterpretation, kb: WeightedKB
                 ) -> dict[tuple[str, str], ExtendedWeight]:
    """All weights, keyed by (distinguished concept, element)."""
    return {(name, x): weight(interp, kb, name, x)
            for name in kb.distinguished
            for x in interp.domain}


@dataclass(frozen=True)
class PreferenceWeightViolation:
    """A pair breaking faithfulness or coherence, with the evidence."""

    kind: str  # "faithfulness" (preferred but not heavier) or
               # "coherence" (heavier but not preferred)
    concept: str
    x: str
    y: str
    degree_x: Fraction
    degree_y: Fraction
    weight_x: ExtendedWeight
    weight_y: ExtendedWeight

    def __str__(self) -> str:
        reason = ("preferred without higher weight" if self.kind == "faithfulness"
                  else "higher weight without preference")
        return (f"{self.kind} violation for {self.concept}: ({self.x}, {self.y}) "
                f"degrees {self.degree_x}/{self.degree_y} "
                f"weights {self.weight_x}/{self.weight_y} ({reason})")


def _scan_pairs(interp: FuzzyInterpretation, kb: WeightedKB, check_converse: bool
                ) -> list[PreferenceWeightViolation]:
    violations: list[PreferenceWeightViolation] = []
    for name in kb.distinguished:
        # a concept listed as distinguished but owning no weighted
        # inclusions constrains nothing: all its members would weigh 0,
        # so any strict membership preference would be unmatchable
        if not kb.weighted_inclusions(name):
            continue
        degrees = {x: interp.concept_degree(name, x) for x in interp.domain}
        weights = {x: weight(interp, kb, name, x) for x in interp.domain}
        for x in interp.domain:
            for y in interp.domain:
                preferred = degrees[x] > degrees[y]
                heavier = weights[x] > weights[y]
                if preferred and not heavier:
                    violations.append(PreferenceWeightViolation(
                        "faithfulness", name, x, y,
                        degrees[x], degrees[y], weights[x], weights[y]))
                elif check_converse and heavier and not preferred:
                    violations.append(PreferenceWeightViolation(
                        "coherence", name, x, y,
                        degrees[x], degrees[y], weights[x], weights[y]))
    return violations


def is_faithful(interp: FuzzyInterpretation, kb: WeightedKB
                ) -> tuple[bool, list[PreferenceWeightViolation]]:
    """True iff every strict membership preference for a distinguished
    concept is matched by a strict weight drop; violations enumerated
    exhaustively over ordered pairs."""
    violations = _scan_pairs(interp, kb, check_converse=False)
    return not violations, violations


def is_coherent(interp: FuzzyInterpretation, kb: WeightedKB
                ) -> tuple[bool, list[PreferenceWeightViolation]]:
    """True iff membership preference and strict weight order coincide
    for every distinguished concept (faithfulness plus its converse)."""
    violations = _scan_pairs(interp, kb, check_converse=True)
    return not violations, violations


@dataclass(frozen=True)
class FmModelReport:
    is_fm_model: bool
    strict_ok: bool
    strict_violations: tuple[StrictViolation, ...]
    faithful: bool
    faithfulness_violations: tuple[PreferenceWeightViolation, ...]


def is_fm_model(interp: FuzzyInterpretation, kb: WeightedKB) -> FmModelReport:
    """Faithful multipreference modelhood: the strict part is satisfied
    and every induced preference is faithful to its weighted table."""
    strict_ok, strict_violations = is_model_strict(interp, kb)
    faithful, faith_violations = is_faithful(interp, kb)
    return FmModelReport(
        is_fm_model=strict_ok and faithful,
        strict_ok=strict_ok,
        strict_violations=tuple(strict_violations),
        faithful=faithful,
        faithfulness_violations=tuple(faith_violations),
    )
