"""Verb senses as multi-domain projections, plus the realization index.

A sense projects onto named domains through slots with one of three
statuses: OBL slots carry the core of the meaning, OPT slots surface only
through syntactic alternations (e.g. an external causer), and IMP slots
are implicit background (time, place, an unspecified action).  Selection
constraints pair a thematic role (E0 agent, E1 patient, E2 instrument)
with a nominal concept.

Placeholder tokens in slot arguments: ``@t0``/``@l0``/``@l1``/``@l2`` are
unfilled time/space variables, ``*`` stands for the event itself, and a
slot with no concept at all is written as a bare ``@`` in glosses.  The
placeholders are stored but carry no selection force.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .errors import (
    LexiconFormatError,
    UnboundRoleError,
    UnknownConceptError,
    UnknownLexemeError,
)
from .taxonomy import ConceptId, TaxonomyStore


class Role(str, Enum):
    E0 = "E0"  # agent
    E1 = "E1"  # patient
    E2 = "E2"  # instrument

    def __str__(self) -> str:
        return self.value


class SlotStatus(str, Enum):
    OBL = "OBL"
    OPT = "OPT"
    IMP = "IMP"

    def __str__(self) -> str:
        return self.value


VARIABLE_PLACEHOLDERS = frozenset({"@t0", "@l0", "@l1", "@l2"})
EVENT_TOKEN = "*"
UNSPECIFIED_TOKEN = "@"
_ROLE_NAMES = frozenset(r.value for r in Role)
_MENTION_SUFFIX = re.compile(r"-\d+$")


@dataclass(frozen=True)
class SelectionConstraint:
    role: Role
    concept: ConceptId  # nominal domain


@dataclass(frozen=True)
class ProjectionSlot:
    domain: str
    status: SlotStatus
    concept: Optional[ConceptId]  # None only for IMP (a bare '@')
    args: tuple[str, ...] = ()

    def render(self) -> str:
        inner = "@" if self.concept is None else self.concept.name
        if self.args:
            inner += " " + " ".join(self.args)
        return f"{self.domain} ({inner})"


@dataclass(frozen=True)
class VerbSense:
    sense_id: str
    lexeme: str
    language: str  # "source" or "target"
    gloss: str
    example: str
    constraints: tuple[SelectionConstraint, ...]
    projection: tuple[ProjectionSlot, ...]

    def obl_slots(self) -> tuple[ProjectionSlot, ...]:
        return tuple(s for s in self.projection if s.status is SlotStatus.OBL)

    def slot(self, domain: str) -> Optional[ProjectionSlot]:
        for s in self.projection:
            if s.domain == domain:
                return s
        return None


@dataclass(frozen=True)
class Binding:
    """An entity mention resolved to its nominal concept."""

    mention: str
    concept: ConceptId


@dataclass(frozen=True)
class ArgumentStructure:
    source_lexeme: str
    bindings: dict[Role, Binding] = field(default_factory=dict)
    context_markers: frozenset[str] = frozenset()


@dataclass(frozen=True)
class InterRep:
    """Language-neutral clause meaning: projection slots with roles filled."""

    sentence_id: str
    source_sense: str
    slots: tuple[ProjectionSlot, ...]

    def obl_concepts(self) -> tuple[ConceptId, ...]:
        return tuple(
            s.concept
            for s in self.slots
            if s.status is SlotStatus.OBL and s.concept is not None
        )

    def domains(self) -> tuple[str, ...]:
        return tuple(s.domain for s in self.slots)


def resolve_mention(store: TaxonomyStore, nominal_domain: str, token: str) -> Binding:
    """Map a mention like ``branch-1`` to its nominal concept.

    A trailing ``-<digits>`` tags an instance and is stripped when the
    stripped base names a concept; otherwise the token itself must.
    """
    if not token or any(ch.isspace() for ch in token):
        raise LexiconFormatError(f"bad entity mention {token!r}")
    dom = store.domain(nominal_domain)
    base = _MENTION_SUFFIX.sub("", token)
    if base in dom.nodes:
        return Binding(mention=token, concept=ConceptId(nominal_domain, base))
    if token in dom.nodes:
        return Binding(mention=token, concept=ConceptId(nominal_domain, token))
    raise UnknownConceptError(
        f"mention {token!r} does not name a concept in domain {nominal_domain!r}"
    )


class Lexicon:
    """Validated sense inventory plus the target realization index."""

    def __init__(self, nominal_domain: str, senses: list[VerbSense]):
        self.nominal_domain = nominal_domain
        self.senses: dict[str, VerbSense] = {s.sense_id: s for s in senses}
        self._source_by_lexeme: dict[str, list[str]] = {}
        self._index: dict[ConceptId, tuple[str, ...]] = {}
        by_concept: dict[ConceptId, list[str]] = {}
        for sense in senses:  # document order preserved
            if sense.language == "source":
                self._source_by_lexeme.setdefault(sense.lexeme, []).append(sense.sense_id)
            else:
                for slot in sense.obl_slots():
                    assert slot.concept is not None
                    by_concept.setdefault(slot.concept, []).append(sense.sense_id)
        self._index = {c: tuple(sorted(ids)) for c, ids in by_concept.items()}

    def source_senses(self, lexeme: str) -> list[VerbSense]:
        try:
            ids = self._source_by_lexeme[lexeme]
        except KeyError:
            raise UnknownLexemeError(f"unknown source lexeme {lexeme!r}") from None
        return [self.senses[i] for i in ids]

    def realization_ids(self, concept: ConceptId) -> tuple[str, ...]:
        return self._index.get(concept, ())

    def to_document(self) -> dict:
        """Serializable form; ``load_lexicon`` round-trips it."""
        senses = []
        for sense in self.senses.values():
            senses.append(
                {
                    "sense_id": sense.sense_id,
                    "lexeme": sense.lexeme,
                    "language": sense.language,
                    "gloss": sense.gloss,
                    "example": sense.example,
                    "constraints": [
                        {"role": c.role.value, "concept": c.concept.name}
                        for c in sense.constraints
                    ],
                    "projection": [
                        {
                            "domain": s.domain,
                            "status": s.status.value,
                            **({} if s.concept is None else {"concept": s.concept.name}),
                            "args": list(s.args),
                        }
                        for s in sense.projection
                    ],
                }
            )
        return {"nominal_domain": self.nominal_domain, "senses": senses}


def realizations(lexicon: Lexicon, concept: ConceptId) -> list[VerbSense]:
    """Target senses whose OBL slots name this concept, by sense_id."""
    return [lexicon.senses[i] for i in lexicon.realization_ids(concept)]


def _require_str(raw: dict, key: str, where: str) -> str:
    value = raw.get(key)
    if not isinstance(value, str):
        raise LexiconFormatError(f"{where}: field {key!r} must be a string")
    return value


def _parse_slot(raw: dict, store: TaxonomyStore, where: str) -> ProjectionSlot:
    if not isinstance(raw, dict):
        raise LexiconFormatError(f"{where}: projection slot must be an object")
    domain = _require_str(raw, "domain", where)
    if domain not in store.domains:
        raise LexiconFormatError(f"{where}: unknown domain {domain!r}")
    status_raw = _require_str(raw, "status", where)
    try:
        status = SlotStatus(status_raw)
    except ValueError:
        raise LexiconFormatError(f"{where}: bad slot status {status_raw!r}") from None
    concept: Optional[ConceptId] = None
    if "concept" in raw and raw["concept"] is not None:
        cname = raw["concept"]
        if not isinstance(cname, str):
            raise LexiconFormatError(f"{where}: slot concept must be a string")
        concept = ConceptId(domain, cname)
        if not store.has_concept(concept):
            raise LexiconFormatError(
                f"{where}: domain {domain!r} has no concept {cname!r}"
            )
    elif status is not SlotStatus.IMP:
        raise LexiconFormatError(
            f"{where}: {status.value} slot in domain {domain!r} must name a concept"
        )
    args_raw = raw.get("args", [])
    if not isinstance(args_raw, list):
        raise LexiconFormatError(f"{where}: slot args must be a list")
    args = []
    for tok in args_raw:
        if tok in _ROLE_NAMES or tok in VARIABLE_PLACEHOLDERS or tok in (
            EVENT_TOKEN,
            UNSPECIFIED_TOKEN,
        ):
            args.append(tok)
        else:
            raise LexiconFormatError(f"{where}: bad argument token {tok!r}")
    return ProjectionSlot(domain=domain, status=status, concept=concept, args=tuple(args))


def load_lexicon(text: str, store: TaxonomyStore) -> Lexicon:
    """Parse and validate a lexicon document against a taxonomy store."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LexiconFormatError(f"lexicon document is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise LexiconFormatError("lexicon document must be an object")
    nominal = doc.get("nominal_domain")
    if not isinstance(nominal, str) or nominal not in store.domains:
        raise LexiconFormatError(f"nominal_domain {nominal!r} is not a loaded domain")
    raw_senses = doc.get("senses")
    if not isinstance(raw_senses, list):
        raise LexiconFormatError('lexicon document needs a "senses" list')

    senses: list[VerbSense] = []
    seen: set[str] = set()
    for raw in raw_senses:
        if not isinstance(raw, dict):
            raise LexiconFormatError("sense entry must be an object")
        sense_id = _require_str(raw, "sense_id", "sense")
        where = f"sense {sense_id!r}"
        if sense_id in seen:
            raise LexiconFormatError(f"duplicate sense_id {sense_id!r}")
        seen.add(sense_id)
        lexeme = _require_str(raw, "lexeme", where)
        language = _require_str(raw, "language", where)
        if language not in ("source", "target"):
            raise LexiconFormatError(f"{where}: language must be 'source' or 'target'")
        gloss = _require_str(raw, "gloss", where)
        example = raw.get("example", "")
        if not isinstance(example, str):
            raise LexiconFormatError(f"{where}: example must be a string")

        constraints = []
        for c in raw.get("constraints", []):
            if not isinstance(c, dict):
                raise LexiconFormatError(f"{where}: constraint must be an object")
            role_raw = _require_str(c, "role", where)
            try:
                role = Role(role_raw)
            except ValueError:
                raise LexiconFormatError(f"{where}: bad constraint role {role_raw!r}") from None
            cname = _require_str(c, "concept", where)
            concept = ConceptId(nominal, cname)
            if not store.has_concept(concept):
                raise LexiconFormatError(
                    f"{where}: constraint names unknown nominal concept {cname!r}"
                )
            constraints.append(SelectionConstraint(role=role, concept=concept))

        projection_raw = raw.get("projection")
        if not isinstance(projection_raw, list) or not projection_raw:
            raise LexiconFormatError(f"{where}: needs a non-empty projection list")
        slots = [_parse_slot(s, store, where) for s in projection_raw]
        domains_seen: set[str] = set()
        for slot in slots:
            if slot.domain in domains_seen:
                raise LexiconFormatError(
                    f"{where}: more than one slot in domain {slot.domain!r}"
                )
            domains_seen.add(slot.domain)
        if not any(s.status is SlotStatus.OBL for s in slots):
            raise LexiconFormatError(f"{where}: needs at least one OBL slot")

        senses.append(
            VerbSense(
                sense_id=sense_id,
                lexeme=lexeme,
                language=language,
                gloss=gloss,
                example=example,
                constraints=tuple(constraints),
                projection=tuple(slots),
            )
        )
    return Lexicon(nominal_domain=nominal, senses=senses)


def disambiguate(
    lexicon: Lexicon, args: ArgumentStructure, store: TaxonomyStore
) -> VerbSense:
    """Pick the source sense whose constraints fit the arguments best.

    Degrees are exact rationals; ties keep the sense that appears first in
    the lexicon document.
    """
    from .matcher import constraint_satisfaction  # local import avoids a cycle

    candidates = lexicon.source_senses(args.source_lexeme)
    best = candidates[0]
    best_score = constraint_satisfaction(best, args, store)
    for sense in candidates[1:]:
        score = constraint_satisfaction(sense, args, store)
        if score > best_score:
            best, best_score = sense, score
    return best


def _substitute(slot: ProjectionSlot, args: ArgumentStructure) -> Optional[tuple[str, ...]]:
    """Fill role tokens with mentions; None means the slot stays implicit.

    A variable placeholder (unknown time or place) always keeps the slot
    out of the clause meaning; ``*`` passes through untouched.
    """
    out: list[str] = []
    for tok in slot.args:
        if tok in _ROLE_NAMES:
            binding = args.bindings.get(Role(tok))
            if binding is None:
                if slot.status is SlotStatus.OBL:
                    raise UnboundRoleError(
                        f"slot {slot.render()} needs role {tok} but it is not bound"
                    )
                return None
            out.append(binding.mention)
        elif tok in VARIABLE_PLACEHOLDERS:
            return None
        else:  # EVENT_TOKEN / UNSPECIFIED_TOKEN
            out.append(tok)
    return tuple(out)


def build_inter_rep(
    sense: VerbSense, args: ArgumentStructure, sentence_id: str = "sentence-1"
) -> InterRep:
    """Instantiate a source sense with bound arguments.

    OBL slots are always present (an unbound OBL role is an error); OPT and
    concept-bearing IMP slots survive only when every role they mention is
    bound; slots with no concept are dropped.
    """
    if sense.language != "source":
        raise LexiconFormatError(
            f"sense {sense.sense_id!r} is not a source sense; cannot build a clause meaning"
        )
    kept: list[ProjectionSlot] = []
    for slot in sense.projection:
        if slot.concept is None:
            continue
        filled = _substitute(slot, args)
        if filled is None:
            continue
        kept.append(
            ProjectionSlot(
                domain=slot.domain, status=slot.status, concept=slot.concept, args=filled
            )
        )
    return InterRep(sentence_id=sentence_id, source_sense=sense.sense_id, slots=tuple(kept))
