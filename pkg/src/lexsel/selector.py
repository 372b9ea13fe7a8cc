"""Target-verb selection: exact realizations, neighborhood coercion, ranking.

The pipeline disambiguates the source lexeme, instantiates the clause
meaning, gathers target senses realized at the meaning's OBL concepts
(falling back to taxonomy neighbors above a similarity floor when a
concept has no realization at all), scores every candidate, and ranks by
match score, neighborhood similarity, then sense id.

``translate`` additionally consults a data-driven decision tree that
names the action implied by the patient and context (hit, bend, ...).
Within each group of candidates tied on concept score, senses whose
implicit action component equals the decided action are promoted.  A tree
leaf naming the action-domain root means "no particular action implied"
and promotes nothing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import DecisionTreeFormatError, VocabularyGapError
from .lexicon import (
    ArgumentStructure,
    InterRep,
    Lexicon,
    Role,
    VerbSense,
    build_inter_rep,
    disambiguate,
)
from .matcher import DomainWeights, MatchScore, inexact_match
from .taxonomy import ConceptId, TaxonomyStore, neighborhood


@dataclass(frozen=True)
class SelectionConfig:
    floor: Fraction = Fraction(1, 2)
    max_candidates: int = 10
    weights: DomainWeights = field(default_factory=DomainWeights)
    action_domain: str = "action"


@dataclass(frozen=True)
class SelectionResult:
    sense_id: str
    score: MatchScore
    via_concept: ConceptId
    neighborhood_sim: Fraction


@dataclass(frozen=True)
class TreeTest:
    kind: str  # "is-a" | "has-marker" | "role-bound"
    value: str

    def evaluate(
        self, object_concept: ConceptId, args: ArgumentStructure, store: TaxonomyStore
    ) -> bool:
        if self.kind == "is-a":
            return store.is_a(object_concept, ConceptId(object_concept.domain, self.value))
        if self.kind == "has-marker":
            return self.value in args.context_markers
        return Role(self.value) in args.bindings  # role-bound


@dataclass(frozen=True)
class TreeBranch:
    test: TreeTest
    then: "TreeNode"
    otherwise: "TreeNode"


@dataclass(frozen=True)
class TreeLeaf:
    action: ConceptId


TreeNode = Union[TreeBranch, TreeLeaf]


@dataclass(frozen=True)
class DecisionTree:
    root: TreeNode
    action_domain: str


def _parse_tree_node(
    raw: object, store: TaxonomyStore, action_domain: str, nominal_domain: str, path: str
) -> TreeNode:
    if not isinstance(raw, dict):
        raise DecisionTreeFormatError(f"{path}: node must be an object")
    if "action" in raw:
        name = raw["action"]
        if not isinstance(name, str):
            raise DecisionTreeFormatError(f"{path}: leaf action must be a string")
        concept = ConceptId(action_domain, name)
        if not store.has_concept(concept):
            raise DecisionTreeFormatError(
                f"{path}: leaf names unknown action concept {name!r}"
            )
        return TreeLeaf(action=concept)
    if "test" not in raw or "then" not in raw or "else" not in raw:
        raise DecisionTreeFormatError(
            f"{path}: node needs either an action or test/then/else"
        )
    test_raw = raw["test"]
    if not isinstance(test_raw, dict):
        raise DecisionTreeFormatError(f"{path}: test must be an object")
    kind = test_raw.get("kind")
    if kind == "is-a":
        value = test_raw.get("concept")
        if not isinstance(value, str) or not store.has_concept(
            ConceptId(nominal_domain, value)
        ):
            raise DecisionTreeFormatError(
                f"{path}: is-a test names unknown nominal concept {value!r}"
            )
    elif kind == "has-marker":
        value = test_raw.get("marker")
        if not isinstance(value, str) or not value:
            raise DecisionTreeFormatError(f"{path}: has-marker test needs a marker string")
    elif kind == "role-bound":
        value = test_raw.get("role")
        if value not in (r.value for r in Role):
            raise DecisionTreeFormatError(f"{path}: role-bound test has bad role {value!r}")
    else:
        raise DecisionTreeFormatError(f"{path}: unknown test kind {kind!r}")
    return TreeBranch(
        test=TreeTest(kind=kind, value=value),
        then=_parse_tree_node(raw["then"], store, action_domain, nominal_domain, path + "/then"),
        otherwise=_parse_tree_node(raw["else"], store, action_domain, nominal_domain, path + "/else"),
    )


def load_decision_tree(
    text: str, store: TaxonomyStore, nominal_domain: str, action_domain: str = "action"
) -> DecisionTree:
    """Parse a decision-tree document; every path must end in a leaf."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DecisionTreeFormatError(f"tree document is not valid JSON: {exc}") from None
    if action_domain not in store.domains:
        raise DecisionTreeFormatError(f"unknown action domain {action_domain!r}")
    root = _parse_tree_node(doc, store, action_domain, nominal_domain, "root")
    return DecisionTree(root=root, action_domain=action_domain)


def decide_action(
    tree: DecisionTree, object_concept: ConceptId, args: ArgumentStructure, store: TaxonomyStore
) -> ConceptId:
    """Walk the tree for the given patient concept and context."""
    node = tree.root
    while isinstance(node, TreeBranch):
        node = node.then if node.test.evaluate(object_concept, args, store) else node.otherwise
    return node.action


def _gather_candidates(
    lexicon: Lexicon, store: TaxonomyStore, inter_rep: InterRep, config: SelectionConfig
) -> dict[str, tuple[ConceptId, Fraction]]:
    """Map sense_id -> (via_concept, similarity) over all OBL concepts.

    Concepts with an exact realization contribute at similarity 1; only a
    concept with no realization is widened to its taxonomy neighborhood,
    keeping neighbors that have realizations.  A sense reachable several
    ways keeps its best similarity (ties: smallest via-concept name).
    """
    found: dict[str, tuple[ConceptId, Fraction]] = {}

    def offer(sense_id: str, via: ConceptId, sim: Fraction) -> None:
        old = found.get(sense_id)
        if old is None or sim > old[1] or (sim == old[1] and via.name < old[0].name):
            found[sense_id] = (via, sim)

    for concept in inter_rep.obl_concepts():
        exact = lexicon.realization_ids(concept)
        if exact:
            for sense_id in exact:
                offer(sense_id, concept, Fraction(1))
            continue
        for neighbor, sim in neighborhood(store, concept, config.max_candidates, config.floor):
            for sense_id in lexicon.realization_ids(neighbor):
                offer(sense_id, neighbor, sim)
    return found


def select_target(
    lexicon: Lexicon,
    store: TaxonomyStore,
    args: ArgumentStructure,
    config: SelectionConfig = SelectionConfig(),
    sentence_id: str = "sentence-1",
) -> list[SelectionResult]:
    """Rank target senses for one clause; raises on a vocabulary gap."""
    sense = disambiguate(lexicon, args, store)
    inter_rep = build_inter_rep(sense, args, sentence_id)
    return rank_candidates(lexicon, store, inter_rep, args, config)


def rank_candidates(
    lexicon: Lexicon,
    store: TaxonomyStore,
    inter_rep: InterRep,
    args: ArgumentStructure,
    config: SelectionConfig,
) -> list[SelectionResult]:
    found = _gather_candidates(lexicon, store, inter_rep, config)
    if not found:
        concepts = ", ".join(str(c) for c in inter_rep.obl_concepts())
        raise VocabularyGapError(
            f"no target realization within floor {config.floor} of: {concepts}"
        )
    results = []
    for sense_id, (via, sim) in found.items():
        score = inexact_match(inter_rep, lexicon.senses[sense_id], args, config.weights, store)
        results.append(
            SelectionResult(
                sense_id=sense_id, score=score, via_concept=via, neighborhood_sim=sim
            )
        )
    results.sort(
        key=lambda r: (
            -r.score.concept_score,
            -r.score.constraint_score,
            -r.neighborhood_sim,
            r.sense_id,
        )
    )
    return results


def _action_component(
    lexicon: Lexicon, sense_id: str, action_domain: str
) -> Optional[ConceptId]:
    slot = lexicon.senses[sense_id].slot(action_domain)
    return None if slot is None else slot.concept


def rerank_by_action(
    ranking: list[SelectionResult],
    action: Optional[ConceptId],
    lexicon: Lexicon,
    action_domain: str,
) -> list[SelectionResult]:
    """Within ties on concept score, move action-matching senses first.

    Stable within each band, so the match-score order is kept among the
    promoted senses and again among the rest.
    """
    if action is None:
        return list(ranking)
    out: list[SelectionResult] = []
    i = 0
    while i < len(ranking):
        j = i
        while (
            j < len(ranking)
            and ranking[j].score.concept_score == ranking[i].score.concept_score
        ):
            j += 1
        band = ranking[i:j]
        hits = [r for r in band if _action_component(lexicon, r.sense_id, action_domain) == action]
        misses = [r for r in band if _action_component(lexicon, r.sense_id, action_domain) != action]
        out.extend(hits + misses)
        i = j
    return out


@dataclass(frozen=True)
class Translation:
    """Top pick plus everything needed to explain it."""

    lexeme: str
    sense_id: str
    gloss: str
    score: MatchScore
    via_concept: ConceptId
    neighborhood_sim: Fraction
    source_sense: str
    inter_rep: InterRep
    decided_action: Optional[ConceptId]
    ranking: tuple[SelectionResult, ...]


def translate(
    lexicon: Lexicon,
    store: TaxonomyStore,
    args: ArgumentStructure,
    config: SelectionConfig = SelectionConfig(),
    tree: Optional[DecisionTree] = None,
    sentence_id: str = "sentence-1",
) -> Translation:
    """Full pipeline for one clause; the top result is the translation."""
    sense = disambiguate(lexicon, args, store)
    inter_rep = build_inter_rep(sense, args, sentence_id)
    ranking = rank_candidates(lexicon, store, inter_rep, args, config)
    action: Optional[ConceptId] = None
    promote: Optional[ConceptId] = None
    patient = args.bindings.get(Role.E1)
    if tree is not None and patient is not None:
        action = decide_action(tree, patient.concept, args, store)
        # the action-domain root stands for "no particular action implied"
        if action.name != store.domain(tree.action_domain).root:
            promote = action
    ranking = rerank_by_action(ranking, promote, lexicon, config.action_domain)
    top = ranking[0]
    chosen = lexicon.senses[top.sense_id]
    return Translation(
        lexeme=chosen.lexeme,
        sense_id=chosen.sense_id,
        gloss=chosen.gloss,
        score=top.score,
        via_concept=top.via_concept,
        neighborhood_sim=top.neighborhood_sim,
        source_sense=sense.sense_id,
        inter_rep=inter_rep,
        decided_action=action,
        ranking=tuple(ranking),
    )
