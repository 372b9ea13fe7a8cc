"""Word-level similarity, domain weights, and constraint scoring."""

import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lexsel import (
    ArgumentStructure,
    ConceptId,
    DomainWeights,
    MatcherError,
    MatchScore,
    ProjectionSlot,
    Role,
    SlotStatus,
    build_inter_rep,
    candidate_slots,
    compare,
    constraint_degrees,
    constraint_satisfaction,
    inexact_match,
    resolve_mention,
    word_sim,
    word_sim_breakdown,
)
from lexsel.bundled import load_bundled_lexicon, load_bundled_store


@pytest.fixture(scope="module")
def store():
    return load_bundled_store()


@pytest.fixture(scope="module")
def lexicon(store):
    return load_bundled_lexicon(store)


def slot(domain: str, concept: str, status=SlotStatus.OBL) -> ProjectionSlot:
    return ProjectionSlot(
        domain=domain, status=status, concept=ConceptId(domain, concept), args=()
    )


def args_for(store, lexeme="break", markers=(), **mentions) -> ArgumentStructure:
    bindings = {
        Role[r.upper()]: resolve_mention(store, "entity", m) for r, m in mentions.items()
    }
    return ArgumentStructure(
        source_lexeme=lexeme, bindings=bindings, context_markers=frozenset(markers)
    )


UNIFORM = DomainWeights()


class TestDomainWeights:
    def test_default_is_uniform(self):
        assert UNIFORM.weight("anything") == 1

    def test_from_json(self):
        w = DomainWeights.from_json('{"ch-of-state": 3, "default": 0.5}')
        assert w.weight("ch-of-state") == 3
        assert w.weight("other") == Fraction(1, 2)

    def test_float_weights_read_exactly(self):
        w = DomainWeights.from_json('{"a": 0.1}')
        assert w.weight("a") == Fraction(1, 10)

    def test_rejects_negative(self):
        with pytest.raises(MatcherError):
            DomainWeights(weights={"a": Fraction(-1)})

    def test_rejects_non_numeric(self):
        with pytest.raises(MatcherError):
            DomainWeights.from_json('{"a": "heavy"}')

    def test_rejects_bad_json(self):
        with pytest.raises(MatcherError):
            DomainWeights.from_json("nope")


class TestWordSimilarity:
    def test_identical_projections(self, store):
        slots = [slot("ch-of-state", "%separate-in-duan-state")]
        assert word_sim(slots, slots, UNIFORM, store) == 1

    def test_disjoint_domains(self, store):
        a = [slot("ch-of-state", "%separate-in-duan-state")]
        b = [slot("causation", "%cause")]
        assert word_sim(a, b, UNIFORM, store) == 0

    def test_single_shared_domain(self, store):
        a = [slot("ch-of-state", "%change-of-integrity")]
        b = [slot("ch-of-state", "%separate-in-duan-state")]
        assert word_sim(a, b, UNIFORM, store) == Fraction(4, 5)

    def test_one_sided_domain_dilutes(self, store):
        a = [
            slot("ch-of-state", "%change-of-integrity"),
            slot("causation", "%cause"),
        ]
        b = [slot("ch-of-state", "%separate-in-duan-state")]
        # causation contributes 0 over a union of two domains
        assert word_sim(a, b, UNIFORM, store) == Fraction(2, 5)

    def test_empty_projections(self, store):
        assert word_sim([], [], UNIFORM, store) == 0

    def test_weight_scale_invariance(self, store):
        a = [
            slot("ch-of-state", "%change-of-integrity"),
            slot("causation", "%cause"),
        ]
        b = [
            slot("ch-of-state", "%separate-in-duan-state"),
            slot("causation", "%cause"),
        ]
        w1 = DomainWeights(weights={"ch-of-state": Fraction(2), "causation": Fraction(1)})
        w2 = DomainWeights(weights={"ch-of-state": Fraction(6), "causation": Fraction(3)})
        assert word_sim(a, b, w1, store) == word_sim(a, b, w2, store)

    def test_weights_shift_the_score(self, store):
        a = [
            slot("ch-of-state", "%change-of-integrity"),
            slot("causation", "%cause"),
        ]
        b = [slot("ch-of-state", "%separate-in-duan-state")]
        heavy = DomainWeights(weights={"ch-of-state": Fraction(3)})
        # shares: 3/4 for ch-of-state, 1/4 for causation
        assert word_sim(a, b, heavy, store) == Fraction(3, 4) * Fraction(4, 5)

    def test_all_zero_weights_rejected(self, store):
        a = [slot("ch-of-state", "%change-of-integrity")]
        zero = DomainWeights(default_weight=Fraction(0))
        with pytest.raises(MatcherError, match="all weights are zero"):
            word_sim(a, a, zero, store)

    def test_breakdown_shares_sum_to_one(self, store):
        a = [
            slot("ch-of-state", "%change-of-integrity"),
            slot("causation", "%cause"),
            slot("instrument", "%with-instrument"),
        ]
        b = [slot("ch-of-state", "%separate-in-pieces-state")]
        score, parts = word_sim_breakdown(a, b, UNIFORM, store)
        assert sum(p.weight for p in parts) == 1
        assert [p.domain for p in parts] == ["causation", "ch-of-state", "instrument"]
        assert score == sum(p.weight * p.similarity for p in parts)

    def test_score_never_exceeds_one(self, store):
        a = [
            slot("ch-of-state", "%separate-in-duan-state"),
            slot("causation", "%cause"),
        ]
        assert word_sim(a, a, UNIFORM, store) == 1


class TestConstraints:
    def test_subsumption_gives_full_degree(self, lexicon, store):
        sense = lexicon.senses["duan-la"]
        degrees = constraint_degrees(sense, args_for(store, e1="branch-1"), store)
        assert [(d.constraint.concept.name, d.degree) for d in degrees] == [
            ("line-segment-object", Fraction(1))
        ]

    def test_near_miss_is_graded(self, lexicon, store):
        sense = lexicon.senses["da-sui"]  # wants a brittle patient
        degrees = constraint_degrees(sense, args_for(store, e1="branch-1"), store)
        assert degrees[0].degree == Fraction(2, 3)

    def test_unbound_role_scores_zero(self, lexicon, store):
        sense = lexicon.senses["da-duan"]  # constrains E1 and E2
        score = constraint_satisfaction(sense, args_for(store, e1="branch-1"), store)
        assert score == Fraction(1, 2)

    def test_mean_over_constraints(self, lexicon, store):
        sense = lexicon.senses["BREAK-1"]  # E1, E0, E2 constrained
        args = args_for(store, e1="vase-1")
        assert constraint_satisfaction(sense, args, store) == Fraction(1, 3)

    def test_source_disambiguation_degrees(self, lexicon, store):
        args = args_for(store, e0="john-1", e1="language-barrier-1")
        barrier = constraint_satisfaction(lexicon.senses["BREAK-2"], args, store)
        assert barrier == Fraction(3, 4)

    def test_no_constraints_means_fully_satisfied(self, lexicon, store):
        sense = lexicon.senses["duan-la"]
        unconstrained = type(sense)(
            sense_id="x",
            lexeme="x",
            language="target",
            gloss="",
            example="",
            constraints=(),
            projection=sense.projection,
        )
        assert constraint_satisfaction(unconstrained, args_for(store), store) == 1


class TestCandidateSlots:
    def test_optional_slot_needs_realized_domain(self, lexicon, store):
        rep_plain = build_inter_rep(
            lexicon.senses["BREAK-1"], args_for(store, e1="branch-1")
        )
        rep_caused = build_inter_rep(
            lexicon.senses["BREAK-1"], args_for(store, e0="john-1", e1="branch-1")
        )
        candidate = lexicon.senses["zhe-duan"]  # OBL duan + OPT causation + IMP action
        assert [s.domain for s in candidate_slots(rep_plain, candidate)] == ["ch-of-state"]
        assert [s.domain for s in candidate_slots(rep_caused, candidate)] == [
            "ch-of-state",
            "causation",
        ]

    def test_implicit_slots_never_count(self, lexicon, store):
        rep = build_inter_rep(
            lexicon.senses["BREAK-1"], args_for(store, e0="john-1", e1="vase-1")
        )
        candidate = lexicon.senses["da-sui"]
        domains = [s.domain for s in candidate_slots(rep, candidate)]
        assert "action" not in domains


class TestMatchScore:
    def test_lexicographic_order(self):
        high = MatchScore(Fraction(4, 5), Fraction(0))
        low = MatchScore(Fraction(2, 3), Fraction(1))
        assert high > low
        assert compare(high, low) == 1
        assert compare(low, high) == -1

    def test_constraint_breaks_concept_ties(self):
        a = MatchScore(Fraction(4, 5), Fraction(1))
        b = MatchScore(Fraction(4, 5), Fraction(1, 2))
        assert compare(a, b) == 1

    def test_exact_equality(self):
        a = MatchScore(Fraction(1, 3), Fraction(2, 3))
        b = MatchScore(Fraction(2, 6), Fraction(4, 6))
        assert compare(a, b) == 0
        assert a == b

    def test_full_pipeline_example(self, lexicon, store):
        args = args_for(store, e1="branch-1")
        rep = build_inter_rep(lexicon.senses["BREAK-1"], args)
        best = inexact_match(rep, lexicon.senses["duan-la"], args, UNIFORM, store)
        rival = inexact_match(rep, lexicon.senses["da-sui"], args, UNIFORM, store)
        assert best == MatchScore(Fraction(4, 5), Fraction(1))
        assert rival == MatchScore(Fraction(4, 5), Fraction(2, 3))
        assert compare(best, rival) == 1


class TestGradedDegradation:
    def test_patient_mismatch_degrades_smoothly(self, lexicon, store):
        # duan-la wants a line-segment patient; stick fits, vase is worse,
        # diplomatic ties are worse still
        sense = lexicon.senses["duan-la"]
        scores = [
            constraint_satisfaction(sense, args_for(store, e1=m), store)
            for m in ("stick-1", "vase-1", "diplomatic-ties-1")
        ]
        assert scores[0] == 1
        assert scores[0] > scores[1] > scores[2] > 0

    @given(st.integers(min_value=0, max_value=10**9))
    @settings(max_examples=40, deadline=None)
    def test_word_sim_stays_in_unit_interval(self, seed):
        store = load_bundled_store()
        rng = random.Random(seed)
        domains = ["ch-of-state", "causation", "instrument", "functionality"]
        concepts = {
            "ch-of-state": [
                "%change-of-state",
                "%change-of-integrity",
                "%separate-in-duan-state",
                "%separate-in-pieces-state",
            ],
            "causation": ["%cause"],
            "instrument": ["%with-instrument"],
            "functionality": ["%functionality", "%loss-of-functionality"],
        }

        def random_slots():
            picked = rng.sample(domains, rng.randint(0, len(domains)))
            return [slot(d, rng.choice(concepts[d])) for d in picked]

        a, b = random_slots(), random_slots()
        score = word_sim(a, b, UNIFORM, store)
        assert 0 <= score <= 1
        assert score == word_sim(b, a, UNIFORM, store)


class TestWeightsDocumentRoundTrip:
    def test_json_shapes(self):
        doc = {"ch-of-state": 2, "causation": 1, "default": 1}
        w = DomainWeights.from_json(json.dumps(doc))
        assert w.weight("ch-of-state") == 2
        assert w.weight("space") == 1
