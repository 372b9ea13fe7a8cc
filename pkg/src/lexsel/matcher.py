"""Aggregate similarity between projections and graded constraint scoring.

Word-level similarity sums weighted concept similarity over the union of
the two projections' domains; a domain present on only one side
contributes zero, which penalizes candidates that cover a different set
of domains than the clause meaning.  Weights are renormalized to sum to 1
over that union, so scores stay in [0, 1].  Everything is computed with
exact rationals so equality comparisons in ranking are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Mapping, Optional, Sequence

import json

from .errors import MatcherError
from .lexicon import (
    ArgumentStructure,
    InterRep,
    ProjectionSlot,
    SelectionConstraint,
    SlotStatus,
    VerbSense,
)
from .taxonomy import ConceptId, TaxonomyStore, con_sim


def _as_fraction(value: object, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, float, str, Fraction)):
        raise MatcherError(f"{where}: weight must be a number, got {value!r}")
    try:
        if isinstance(value, float):
            return Fraction(Decimal(str(value)))
        return Fraction(value)
    except (ValueError, ArithmeticError):
        raise MatcherError(f"{where}: cannot read weight {value!r}") from None


@dataclass(frozen=True)
class DomainWeights:
    """Per-domain weights; unlisted domains get ``default_weight``."""

    weights: Mapping[str, Fraction] = field(default_factory=dict)
    default_weight: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        for name, w in self.weights.items():
            if w < 0:
                raise MatcherError(f"weight for domain {name!r} is negative")
        if self.default_weight < 0:
            raise MatcherError("default weight is negative")

    def weight(self, domain: str) -> Fraction:
        return self.weights.get(domain, self.default_weight)

    @classmethod
    def from_json(cls, text: str) -> "DomainWeights":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MatcherError(f"weights document is not valid JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise MatcherError("weights document must map domain names to numbers")
        default = _as_fraction(doc.pop("default", 1), "weights document")
        weights = {
            name: _as_fraction(value, f"domain {name!r}") for name, value in doc.items()
        }
        return cls(weights=weights, default_weight=default)


@total_ordering
@dataclass(frozen=True)
class MatchScore:
    """Lexicographic pair: concept similarity first, then constraint fit."""

    concept_score: Fraction
    constraint_score: Fraction

    def _key(self) -> tuple[Fraction, Fraction]:
        return (self.concept_score, self.constraint_score)

    def __lt__(self, other: "MatchScore") -> bool:
        return self._key() < other._key()


def compare(x: MatchScore, y: MatchScore) -> int:
    """1 if x ranks ahead of y, -1 if behind, 0 if exactly equal."""
    if x._key() == y._key():
        return 0
    return 1 if x._key() > y._key() else -1


def _by_domain(slots: Iterable[ProjectionSlot]) -> dict[str, ConceptId]:
    out: dict[str, ConceptId] = {}
    for slot in slots:
        if slot.concept is None:
            continue
        out[slot.domain] = slot.concept
    return out


@dataclass(frozen=True)
class DomainContribution:
    domain: str
    weight: Fraction  # normalized share of the total
    similarity: Fraction
    left: Optional[ConceptId]
    right: Optional[ConceptId]


def word_sim_breakdown(
    a: Sequence[ProjectionSlot],
    b: Sequence[ProjectionSlot],
    weights: DomainWeights,
    store: TaxonomyStore,
) -> tuple[Fraction, list[DomainContribution]]:
    """Weighted per-domain similarity over the union of both domain sets."""
    left, right = _by_domain(a), _by_domain(b)
    union = sorted(left.keys() | right.keys())
    if not union:
        return Fraction(0), []
    total = sum((weights.weight(d) for d in union), Fraction(0))
    if total == 0:
        raise MatcherError(
            f"all weights are zero over domains {', '.join(union)}"
        )
    score = Fraction(0)
    parts: list[DomainContribution] = []
    for domain in union:
        ca, cb = left.get(domain), right.get(domain)
        sim = con_sim(store, ca, cb) if ca is not None and cb is not None else Fraction(0)
        share = weights.weight(domain) / total
        score += share * sim
        parts.append(
            DomainContribution(domain=domain, weight=share, similarity=sim, left=ca, right=cb)
        )
    return score, parts


def word_sim(
    a: Sequence[ProjectionSlot],
    b: Sequence[ProjectionSlot],
    weights: DomainWeights,
    store: TaxonomyStore,
) -> Fraction:
    score, _ = word_sim_breakdown(a, b, weights, store)
    return score


@dataclass(frozen=True)
class ConstraintDegree:
    constraint: SelectionConstraint
    degree: Fraction
    bound_to: Optional[ConceptId]  # None when the role is unbound


def constraint_degrees(
    sense: VerbSense, args: ArgumentStructure, store: TaxonomyStore
) -> list[ConstraintDegree]:
    """Per-constraint fit: 1 on subsumption, graded similarity otherwise.

    A constraint whose role is unbound contributes 0.
    """
    out: list[ConstraintDegree] = []
    for constraint in sense.constraints:
        binding = args.bindings.get(constraint.role)
        if binding is None:
            out.append(ConstraintDegree(constraint, Fraction(0), None))
        elif store.is_a(binding.concept, constraint.concept):
            out.append(ConstraintDegree(constraint, Fraction(1), binding.concept))
        else:
            degree = con_sim(store, binding.concept, constraint.concept)
            out.append(ConstraintDegree(constraint, degree, binding.concept))
    return out


def constraint_satisfaction(
    sense: VerbSense, args: ArgumentStructure, store: TaxonomyStore
) -> Fraction:
    """Arithmetic mean of per-constraint degrees; 1 when unconstrained."""
    degrees = constraint_degrees(sense, args, store)
    if not degrees:
        return Fraction(1)
    return sum((d.degree for d in degrees), Fraction(0)) / len(degrees)


def candidate_slots(inter_rep: InterRep, candidate: VerbSense) -> list[ProjectionSlot]:
    """The candidate slots a clause meaning is matched against.

    All OBL slots count.  An OPT slot counts only when the clause meaning
    realizes that domain: an alternation that is not realized says nothing
    about the fit.  IMP slots never enter the similarity; the implicit
    action component is consulted separately by the selection tree.
    """
    present = set(inter_rep.domains())
    out = []
    for slot in candidate.projection:
        if slot.status is SlotStatus.OBL:
            out.append(slot)
        elif slot.status is SlotStatus.OPT and slot.domain in present:
            out.append(slot)
    return out


def inexact_match(
    inter_rep: InterRep,
    candidate: VerbSense,
    args: ArgumentStructure,
    weights: DomainWeights,
    store: TaxonomyStore,
) -> MatchScore:
    """Score a target sense against a clause meaning.

    Pure: no store or lexicon state is touched.
    """
    concept = word_sim(inter_rep.slots, candidate_slots(inter_rep, candidate), weights, store)
    constraint = constraint_satisfaction(candidate, args, store)
    return MatchScore(concept_score=concept, constraint_score=constraint)
