"""Finite fuzzy interpretations and compositional concept evaluation.

The domain is finite, so the suprema and infima of the role quantifiers
are plain max/min over the domain (every bound is witnessed).  The
typicality concept T(C) gets a crisp value: 1 exactly on the elements
whose C-degree is maximal among the elements with positive C-degree.
That is the set of minimal elements of the preference induced by C
(x is preferred to y iff its C-degree is strictly higher), restricted
to positive membership.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from fuzzytyp.algebra import Degree, LogicFamily, ONE, ZERO, implication, negation, snorm, tnorm
from fuzzytyp.syntax import (
    And,
    Atomic,
    Bottom,
    Concept,
    ConceptAssertion,
    Exists,
    Forall,
    FuzzyAxiom,
    Inclusion,
    NestedTypicalityError,
    Not,
    Or,
    RoleAssertion,
    Top,
    Typ,
    UndeclaredNameError,
    WeightedKB,
    contains_typ,
)


@dataclass
class FuzzyInterpretation:
    """Immutable finite fuzzy interpretation.

    Valuations are total over the declared signature; entries missing
    from the dicts default to degree 0.
    """

    logic: LogicFamily
    domain: tuple[str, ...]
    concept_names: tuple[str, ...]
    role_names: tuple[str, ...] = ()
    concept_val: dict[tuple[str, str], Fraction] = field(default_factory=dict)
    role_val: dict[tuple[str, str, str], Fraction] = field(default_factory=dict)
    individuals: dict[str, str] = field(default_factory=dict)
    _cache: dict[Concept, dict[str, Fraction]] = field(
        default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.domain:
            raise ValueError("domain must be nonempty")

    def concept_degree(self, name: str, elem: str) -> Degree:
        if name not in self.concept_names:
            raise UndeclaredNameError(f"undeclared concept name {name!r}")
        return self.concept_val.get((name, elem), ZERO)

    def role_degree(self, name: str, a: str, b: str) -> Degree:
        if name not in self.role_names:
            raise UndeclaredNameError(f"undeclared role name {name!r}")
        return self.role_val.get((name, a, b), ZERO)

    def element_of(self, individual: str) -> str:
        try:
            return self.individuals[individual]
        except KeyError:
            raise UndeclaredNameError(f"unbound individual {individual!r}") from None


def _eval_all(interp: FuzzyInterpretation, concept: Concept) -> dict[str, Fraction]:
    """Degree of every domain element in ``concept`` (cached per concept)."""
    cached = interp._cache.get(concept)
    if cached is not None:
        return cached
    logic = interp.logic
    dom = interp.domain
    if isinstance(concept, Atomic):
        if concept.name not in interp.concept_names:
            raise UndeclaredNameError(f"undeclared concept name {concept.name!r}")
        vals = {x: interp.concept_val.get((concept.name, x), ZERO) for x in dom}
    elif isinstance(concept, Top):
        vals = {x: ONE for x in dom}
    elif isinstance(concept, Bottom):
        vals = {x: ZERO for x in dom}
    elif isinstance(concept, Not):
        sub = _eval_all(interp, concept.sub)
        vals = {x: negation(logic, sub[x]) for x in dom}
    elif isinstance(concept, And):
        left = _eval_all(interp, concept.left)
        right = _eval_all(interp, concept.right)
        vals = {x: tnorm(logic, left[x], right[x]) for x in dom}
    elif isinstance(concept, Or):
        left = _eval_all(interp, concept.left)
        right = _eval_all(interp, concept.right)
        vals = {x: snorm(logic, left[x], right[x]) for x in dom}
    elif isinstance(concept, Exists):
        if concept.role not in interp.role_names:
            raise UndeclaredNameError(f"undeclared role name {concept.role!r}")
        filler = _eval_all(interp, concept.filler)
        rv = interp.role_val
        vals = {x: max(tnorm(logic, rv.get((concept.role, x, y), ZERO), filler[y])
                       for y in dom)
                for x in dom}
    elif isinstance(concept, Forall):
        if concept.role not in interp.role_names:
            raise UndeclaredNameError(f"undeclared role name {concept.role!r}")
        filler = _eval_all(interp, concept.filler)
        rv = interp.role_val
        vals = {x: min(implication(logic, rv.get((concept.role, x, y), ZERO), filler[y])
                       for y in dom)
                for x in dom}
    elif isinstance(concept, Typ):
        sub = _eval_all(interp, concept.sub)
        top = max(sub.values())
        if top > ZERO:
            vals = {x: ONE if sub[x] == top else ZERO for x in dom}
        else:
            vals = {x: ZERO for x in dom}
    else:
        raise TypeError(f"not a concept: {concept!r}")
    interp._cache[concept] = vals
    return vals


def eval_concept(interp: FuzzyInterpretation, concept: Concept, elem: str) -> Degree:
    """Membership degree of ``elem`` in ``concept``."""
    if elem not in interp.domain:
        raise UndeclaredNameError(f"element {elem!r} not in domain")
    return _eval_all(interp, concept)[elem]


@dataclass(frozen=True)
class InducedPreference:
    """Strict preference induced by a concept's membership degrees:
    (x, y) is in ``pairs`` iff x's degree is strictly higher than y's."""

    concept: Concept
    domain: tuple[str, ...]
    pairs: frozenset[tuple[str, str]]

    def prefers(self, x: str, y: str) -> bool:
        return (x, y) in self.pairs

    def is_irreflexive(self) -> bool:
        return all((x, x) not in self.pairs for x in self.domain)

    def is_transitive(self) -> bool:
        return all((x, z) in self.pairs
                   for (x, y) in self.pairs
                   for (y2, z) in self.pairs if y2 == y)

    def is_modular(self) -> bool:
        return all((x, z) in self.pairs or (z, y) in self.pairs
                   for (x, y) in self.pairs
                   for z in self.domain)

    def is_well_founded(self) -> bool:
        # a strict order on a finite domain is well-founded iff acyclic;
        # transitivity + irreflexivity already rule cycles out
        return self.is_irreflexive() and self.is_transitive()


def induced_preference(interp: FuzzyInterpretation, concept: Concept) -> InducedPreference:
    vals = _eval_all(interp, concept)
    pairs = frozenset((x, y) for x in interp.domain for y in interp.domain
                      if vals[x] > vals[y])
    return InducedPreference(concept, interp.domain, pairs)


def typical_elements(interp: FuzzyInterpretation, concept: Concept) -> set[str]:
    """Elements whose degree in ``concept`` is maximal among the positive
    ones; empty iff the concept has degree 0 everywhere."""
    if isinstance(concept, Typ):
        concept = concept.sub
    if contains_typ(concept):
        raise NestedTypicalityError("typicality operator may not be nested")
    vals = _eval_all(interp, concept)
    top = max(vals.values())
    if top == ZERO:
        return set()
    return {x for x, d in vals.items() if d == top}


def axiom_degree(interp: FuzzyInterpretation, axiom: FuzzyAxiom) -> Degree:
    """Degree of an inclusion (inf of pointwise implications) or of an
    assertion (membership at the named individual / role pair)."""
    if isinstance(axiom, Inclusion):
        lhs = _eval_all(interp, axiom.lhs)
        rhs = _eval_all(interp, axiom.rhs)
        return min(implication(interp.logic, lhs[x], rhs[x]) for x in interp.domain)
    if isinstance(axiom, ConceptAssertion):
        elem = interp.element_of(axiom.individual)
        return eval_concept(interp, axiom.concept, elem)
    if isinstance(axiom, RoleAssertion):
        a = interp.element_of(axiom.subject)
        b = interp.element_of(axiom.object)
        return interp.role_degree(axiom.role, a, b)
    raise TypeError(f"not an axiom: {axiom!r}")


def satisfies(interp: FuzzyInterpretation, axiom: FuzzyAxiom) -> bool:
    return axiom.cmp.apply(axiom_degree(interp, axiom), axiom.threshold)


@dataclass(frozen=True)
class StrictViolation:
    axiom: FuzzyAxiom
    degree: Fraction

    def __str__(self) -> str:
        return f"{self.axiom}  (actual degree {self.degree})"


def is_model_strict(interp: FuzzyInterpretation, kb: WeightedKB
                    ) -> tuple[bool, list[StrictViolation]]:
    """Check the strict part only: every TBox inclusion and ABox
    assertion.  Weighted typicality tables are the business of the
    weighted-semantics module."""
    violations = [StrictViolation(ax, d)
                  for ax in kb.all_axioms()
                  if not ax.cmp.apply(d := axiom_degree(interp, ax), ax.threshold)]
    return not violations, violations
