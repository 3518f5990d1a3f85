"""Bounded enumeration of finite fuzzy interpretations over a degree
grid, and countermodel search for entailment, fm-entailment, and
validity.

Entailment over the full (infinite) model class is out of reach; the
engine gives two-sided answers only for refutation.  A returned
countermodel is a genuine witness and can be re-checked independently;
"no countermodel within bounds" is exactly that, never a proof.

Enumeration is exhaustive for the given bounds and indexable: the
atomic valuations of an interpretation with domain size n form a mixed
radix numeral (base q+1 per concept/role entry, base n per individual),
with the first declared concept's entries varying fastest.  Domain
sizes are scanned in ascending order, so the first countermodel found
has a minimal domain.  Identical configurations yield identical
streams, verdicts, and statistics, whatever the worker count.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterator, Literal

from fuzzytyp.algebra import LogicFamily
from fuzzytyp.interpretation import FuzzyInterpretation, is_model_strict, satisfies
from fuzzytyp.syntax import (
    ConceptAssertion,
    FuzzyAxiom,
    Inclusion,
    RoleAssertion,
    WeightedKB,
    concept_names,
    role_names,
)
from fuzzytyp.weighted import is_fm_model


@dataclass(frozen=True)
class EnumSignature:
    """The names an enumerated interpretation assigns values to."""

    concepts: tuple[str, ...]
    roles: tuple[str, ...] = ()
    individuals: tuple[str, ...] = ()


@dataclass(frozen=True)
class SearchConfig:
    """Bounds for model enumeration and search."""

    logic: LogicFamily
    max_domain_size: int = 2
    denominator: int = 2
    budget: int = 200_000
    mode: Literal["plain", "fm"] = "plain"
    seed: int = 0
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.max_domain_size < 1:
            raise ValueError("max_domain_size must be >= 1")
        if self.denominator < 1:
            raise ValueError("denominator must be >= 1")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


def domain_elements(n: int) -> tuple[str, ...]:
    return tuple(f"e{i}" for i in range(n))


def count_interpretations(sig: EnumSignature, domain_size: int, denominator: int) -> int:
    """Closed form: (q+1)^(concept entries + role entries) * n^individuals."""
    n = domain_size
    entries = len(sig.concepts) * n + len(sig.roles) * n * n
    return (denominator + 1) ** entries * n ** len(sig.individuals)


def interpretation_at(sig: EnumSignature, logic: LogicFamily, domain_size: int,
                      denominator: int, index: int) -> FuzzyInterpretation:
    """Decode the interpretation at ``index`` (0-based) of the size-n
    block of the enumeration stream."""
    n = domain_size
    q = denominator
    dom = domain_elements(n)
    grid = [Fraction(i, q) for i in range(q + 1)]
    base = q + 1
    k = index

    concept_val: dict[tuple[str, str], Fraction] = {}
    for name in sig.concepts:
        for elem in dom:
            k, digit = divmod(k, base)
            if digit:
                concept_val[(name, elem)] = grid[digit]
    role_val: dict[tuple[str, str, str], Fraction] = {}
    for name in sig.roles:
        for a in dom:
            for b in dom:
                k, digit = divmod(k, base)
                if digit:
                    role_val[(name, a, b)] = grid[digit]
    individuals: dict[str, str] = {}
    for ind in sig.individuals:
        k, digit = divmod(k, n)
        individuals[ind] = dom[digit]
    if k:
        raise IndexError(f"index {index} out of range for domain size {n}")

    return FuzzyInterpretation(
        logic=logic, domain=dom,
        concept_names=sig.concepts, role_names=sig.roles,
        concept_val=concept_val, role_val=role_val, individuals=individuals)


def enumerate_interpretations(sig: EnumSignature, config: SearchConfig
                              ) -> Iterator[FuzzyInterpretation]:
    """All interpretations with domain size <= the bound and atomic
    valuations on the grid {0, 1/q, ..., 1}; sizes ascending."""
    for n in range(1, config.max_domain_size + 1):
        total = count_interpretations(sig, n, config.denominator)
        for k in range(total):
            yield interpretation_at(sig, config.logic, n, config.denominator, k)


def random_interpretation(rng: random.Random, sig: EnumSignature, logic: LogicFamily,
                          domain_size: int, denominator: int) -> FuzzyInterpretation:
    """One uniformly random grid interpretation (used by the randomized
    property suites; exhaustive search does not use the seed)."""
    n = domain_size
    total = count_interpretations(sig, n, denominator)
    return interpretation_at(sig, logic, n, denominator, rng.randrange(total))


# --------------------------------------------------------------------------
# Verdicts
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SearchStats:
    examined: int
    models_found: int
    truncated: bool
    max_domain_size: int
    denominator: int

    def __str__(self) -> str:
        tail = ", budget exhausted" if self.truncated else ""
        return (f"examined {self.examined} interpretations "
                f"({self.models_found} models) within |domain| <= "
                f"{self.max_domain_size}, grid 1/{self.denominator}{tail}")


@dataclass(frozen=True)
class Refuted:
    countermodel: FuzzyInterpretation
    stats: SearchStats


@dataclass(frozen=True)
class NoCountermodel:
    stats: SearchStats


EntailmentVerdict = Refuted | NoCountermodel

#: Size blocks smaller than this are scanned in-process even when more
#: workers were requested; forking costs more than it saves there.
POOL_MIN_SPAN = 4096


# --------------------------------------------------------------------------
# Scan machinery
# --------------------------------------------------------------------------

# Predicate descriptor: ("entail", kb, goal, mode) or ("validity", goal).
# Kept as plain picklable tuples so worker processes can evaluate them.

def _test_one(pred, interp: FuzzyInterpretation) -> tuple[bool, bool]:
    """Returns (is_model, is_countermodel)."""
    if pred[0] == "validity":
        return True, not satisfies(interp, pred[1])
    _, kb, goal, mode = pred
    if mode == "fm":
        report = is_fm_model(interp, kb)
        if not report.is_fm_model:
            return False, False
    else:
        ok, _ = is_model_strict(interp, kb)
        if not ok:
            return False, False
    return True, not satisfies(interp, goal)


def _scan_chunk(args) -> tuple[int | None, int, int]:
    """Scan indices [start, stop) of one size block; returns
    (local index of first countermodel or None, indices examined,
    models seen up to and including that index)."""
    sig, logic, n, q, start, stop, pred = args
    models = 0
    for k in range(start, stop):
        interp = interpretation_at(sig, logic, n, q, k)
        is_model, is_counter = _test_one(pred, interp)
        if is_model:
            models += 1
        if is_counter:
            return k, k - start + 1, models
    return None, stop - start, models


def _scan(sig: EnumSignature, config: SearchConfig, pred) -> EntailmentVerdict:
    examined = 0
    models = 0
    truncated = False
    remaining = config.budget

    for n in range(1, config.max_domain_size + 1):
        total = count_interpretations(sig, n, config.denominator)
        if remaining <= 0:
            truncated = True
            break
        span = min(total, remaining)
        if span < total:
            truncated = True
        found: int | None = None

        if config.jobs == 1 or span < POOL_MIN_SPAN:
            found, seen, m = _scan_chunk((sig, config.logic, n, config.denominator,
                                          0, span, pred))
            examined += seen
            models += m
        else:
            chunk = max(2048, span // (config.jobs * 8))
            starts = list(range(0, span, chunk))
            with ProcessPoolExecutor(max_workers=config.jobs) as pool:
                futures = [pool.submit(_scan_chunk,
                                       (sig, config.logic, n, config.denominator,
                                        s, min(s + chunk, span), pred))
                           for s in starts]
                # chunk-ordered aggregation keeps the verdict identical to
                # the sequential scan: the first countermodel by index wins
                for fut in futures:
                    local, seen, m = fut.result()
                    examined += seen
                    models += m
                    if local is not None:
                        found = local  # _scan_chunk reports absolute indices
                        for later in futures:
                            later.cancel()
                        break

        remaining -= span if found is None else found + 1
        if found is not None:
            stats = SearchStats(examined, models, truncated,
                                config.max_domain_size, config.denominator)
            counter = interpretation_at(sig, config.logic, n, config.denominator, found)
            return Refuted(counter, stats)

    stats = SearchStats(examined, models, truncated,
                        config.max_domain_size, config.denominator)
    return NoCountermodel(stats)


# --------------------------------------------------------------------------
# Signatures of KBs and axioms
# --------------------------------------------------------------------------

def _axiom_names(ax: FuzzyAxiom) -> tuple[set[str], set[str], set[str]]:
    if isinstance(ax, Inclusion):
        return (concept_names(ax.lhs) | concept_names(ax.rhs),
                role_names(ax.lhs) | role_names(ax.rhs), set())
    if isinstance(ax, ConceptAssertion):
        return concept_names(ax.concept), role_names(ax.concept), {ax.individual}
    if isinstance(ax, RoleAssertion):
        return set(), {ax.role}, {ax.subject, ax.object}
    raise TypeError(f"not an axiom: {ax!r}")


def signature_for(kb: WeightedKB, goal: FuzzyAxiom | None = None) -> EnumSignature:
    """Names occurring in the KB's axioms, its weighted tables, and the
    goal, in declaration order.  Names that occur nowhere cannot affect
    any verdict and are left out of the enumeration."""
    cs: set[str] = set()
    rs: set[str] = set()
    inds: set[str] = set()
    for ax in kb.all_axioms():
        c, r, i = _axiom_names(ax)
        cs |= c
        rs |= r
        inds |= i
    for name, inclusions in kb.wtbox.items():
        cs.add(name)
        for incl in inclusions:
            cs |= concept_names(incl.consequent)
            rs |= role_names(incl.consequent)
    if goal is not None:
        c, r, i = _axiom_names(goal)
        cs |= c
        rs |= r
        inds |= i
    order = {name: pos for pos, name in enumerate(kb.concepts)}
    return EnumSignature(
        concepts=tuple(sorted(cs, key=lambda s: order.get(s, len(order)))),
        roles=tuple(sorted(rs, key=lambda s: (kb.roles.index(s) if s in kb.roles else 10**9))),
        individuals=tuple(sorted(inds, key=lambda s: (kb.individuals.index(s)
                                                      if s in kb.individuals else 10**9))),
    )


def signature_of_axiom(ax: FuzzyAxiom) -> EnumSignature:
    c, r, i = _axiom_names(ax)
    return EnumSignature(tuple(sorted(c)), tuple(sorted(r)), tuple(sorted(i)))


# --------------------------------------------------------------------------
# Public checks
# --------------------------------------------------------------------------

def check_entailment_bounded(kb: WeightedKB, goal: FuzzyAxiom,
                             config: SearchConfig) -> EntailmentVerdict:
    """Search for a model of the KB (its strict part in plain mode, an
    fm-model in fm mode) falsifying the goal axiom."""
    sig = signature_for(kb, goal)
    return _scan(sig, config, ("entail", kb, goal, config.mode))


def check_fm_entailment_bounded(kb: WeightedKB, goal: FuzzyAxiom,
                                config: SearchConfig) -> EntailmentVerdict:
    """check_entailment_bounded with the fm-model filter forced on."""
    return check_entailment_bounded(kb, goal, replace(config, mode="fm"))


def check_validity_bounded(goal: FuzzyAxiom, logic: LogicFamily,
                           config: SearchConfig) -> EntailmentVerdict:
    """Search for any interpretation at all falsifying the axiom."""
    sig = signature_of_axiom(goal)
    config = replace(config, logic=logic)
    return _scan(sig, config, ("validity", goal))
