"""Exception types shared across the package.

Every error raised on bad input data names the offending object (domain,
concept, sense, record line) so callers can report it without digging.
"""


class LexselError(Exception):
    """Base class for all errors raised by this package."""


class TaxonomyFormatError(LexselError):
    """Taxonomy document is malformed or violates a structural rule."""


class UnknownConceptError(LexselError):
    """A concept or domain was referenced that the store does not contain."""


class CrossDomainError(LexselError):
    """Two concepts from different domains were compared."""


class LexiconFormatError(LexselError):
    """Lexicon document is malformed or references unknown concepts."""


class UnknownLexemeError(LexselError):
    """No source sense exists for the requested lexeme."""


class UnboundRoleError(LexselError):
    """An obligatory projection slot needs a role that is not bound."""


class MatcherError(LexselError):
    """Similarity could not be computed (e.g. all weights zero)."""


class DecisionTreeFormatError(LexselError):
    """Decision-tree document is malformed."""


class CorpusFormatError(LexselError):
    """Corpus document is malformed; message includes the line number."""


class VocabularyGapError(LexselError):
    """No target realization exists within the neighborhood floor."""
