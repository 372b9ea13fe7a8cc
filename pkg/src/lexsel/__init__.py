"""Taxonomy-backed lexical selection with graded constraint matching."""

from .errors import (
    CorpusFormatError,
    CrossDomainError,
    DecisionTreeFormatError,
    LexiconFormatError,
    LexselError,
    MatcherError,
    TaxonomyFormatError,
    UnboundRoleError,
    UnknownConceptError,
    UnknownLexemeError,
    VocabularyGapError,
)
from .taxonomy import (
    ConceptId,
    ConceptNode,
    DomainTaxonomy,
    PathMetrics,
    TaxonomyStore,
    ancestors,
    con_sim,
    least_common_superconcept,
    load_taxonomy,
    merge_stores,
    neighborhood,
)
from .lexicon import (
    ArgumentStructure,
    Binding,
    InterRep,
    Lexicon,
    ProjectionSlot,
    Role,
    SelectionConstraint,
    SlotStatus,
    VerbSense,
    build_inter_rep,
    disambiguate,
    load_lexicon,
    realizations,
    resolve_mention,
)
from .matcher import (
    ConstraintDegree,
    DomainContribution,
    DomainWeights,
    MatchScore,
    candidate_slots,
    compare,
    constraint_degrees,
    constraint_satisfaction,
    inexact_match,
    word_sim,
    word_sim_breakdown,
)
from .selector import (
    DecisionTree,
    SelectionConfig,
    SelectionResult,
    Translation,
    decide_action,
    load_decision_tree,
    rank_candidates,
    rerank_by_action,
    select_target,
    translate,
)
from .corpus import (
    Corpus,
    CorpusRecord,
    EvalItem,
    EvalReport,
    FreqTable,
    evaluate_corpus,
    frequency_table,
    load_corpus,
    to_argument_structure,
)

__version__ = "0.1.0"
