"""Rooted-DAG concept taxonomies and path-based concept similarity.

A store holds one rooted DAG per named domain.  Edges point from a concept
to its parents (more general concepts).  Node depth is counted in nodes
along a maximum-length path to the root, so the root has depth 1.

Similarity between two concepts of the same domain is

    2 * n3 / (n1 + n2 + 2 * n3)

where the least common superconcept is the shared ancestor of maximal
depth, n1 and n2 are the minimal edge counts from each concept up to it,
and n3 is its depth.  All values are exact ``fractions.Fraction``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import CrossDomainError, TaxonomyFormatError, UnknownConceptError


class ConceptId(NamedTuple):
    domain: str
    name: str

    def __str__(self) -> str:
        return f"{self.domain}:{self.name}"


class PathMetrics(NamedTuple):
    """Path counts underlying one similarity value."""

    n1: int
    n2: int
    n3: int
    lcs: "ConceptId"


@dataclass(frozen=True)
class ConceptNode:
    id: ConceptId
    label: str
    parents: tuple[str, ...]  # parent concept names, same domain, sorted


def _check_token(token: object, what: str, where: str) -> str:
    if not isinstance(token, str) or not token:
        raise TaxonomyFormatError(f"{where}: {what} must be a non-empty string")
    if any(ch.isspace() for ch in token):
        raise TaxonomyFormatError(f"{where}: {what} {token!r} contains whitespace")
    if ":" in token:
        raise TaxonomyFormatError(f"{where}: {what} {token!r} contains ':'")
    return token


@dataclass(frozen=True)
class DomainTaxonomy:
    """One validated domain: nodes plus precomputed path indices.

    Treat instances as immutable after construction; all query state is
    derived once in ``build``.
    """

    domain: str
    nodes: dict[str, ConceptNode]
    root: str
    depth: dict[str, int] = field(repr=False)
    up: dict[str, dict[str, int]] = field(repr=False)  # min edges to each ancestor

    @classmethod
    def build(cls, domain: str, nodes: dict[str, ConceptNode]) -> "DomainTaxonomy":
        where = f"domain {domain!r}"
        roots = [name for name, node in nodes.items() if not node.parents]
        if not roots:
            raise TaxonomyFormatError(f"{where}: no root concept (zero parents)")
        if len(roots) > 1:
            raise TaxonomyFormatError(
                f"{where}: multiple root concepts: {', '.join(sorted(roots))}"
            )
        for node in nodes.values():
            for parent in node.parents:
                if parent not in nodes:
                    raise TaxonomyFormatError(
                        f"{where}: concept {node.id.name!r} names missing parent {parent!r}"
                    )
        cls._check_acyclic(domain, nodes)
        depth = cls._depths(nodes)
        up = {name: cls._up_distances(nodes, name) for name in nodes}
        return cls(domain=domain, nodes=nodes, root=roots[0], depth=depth, up=up)

    @staticmethod
    def _check_acyclic(domain: str, nodes: dict[str, ConceptNode]) -> None:
        DONE, IN_PROGRESS = 2, 1
        state: dict[str, int] = {}
        for start in nodes:
            if state.get(start) == DONE:
                continue
            stack = [(start, iter(nodes[start].parents))]
            state[start] = IN_PROGRESS
            while stack:
                name, parents = stack[-1]
                advanced = False
                for parent in parents:
                    if state.get(parent) == IN_PROGRESS:
                        raise TaxonomyFormatError(
                            f"domain {domain!r}: cycle through concept {parent!r}"
                        )
                    if state.get(parent) != DONE:
                        state[parent] = IN_PROGRESS
                        stack.append((parent, iter(nodes[parent].parents)))
                        advanced = True
                        break
                if not advanced:
                    state[name] = DONE
                    stack.pop()

    @staticmethod
    def _depths(nodes: dict[str, ConceptNode]) -> dict[str, int]:
        depth: dict[str, int] = {}

        def visit(name: str) -> int:
            if name in depth:
                return depth[name]
            node = nodes[name]
            if not node.parents:
                depth[name] = 1
            else:
                depth[name] = 1 + max(visit(p) for p in node.parents)
            return depth[name]

        for name in nodes:
            visit(name)
        return depth

    @staticmethod
    def _up_distances(nodes: dict[str, ConceptNode], start: str) -> dict[str, int]:
        dist = {start: 0}
        frontier = [start]
        while frontier:
            nxt: list[str] = []
            for name in frontier:
                d = dist[name] + 1
                for parent in nodes[name].parents:
                    if parent not in dist or d < dist[parent]:
                        dist[parent] = d
                        nxt.append(parent)
            frontier = nxt
        return dist

    def require(self, name: str) -> ConceptNode:
        try:
            return self.nodes[name]
        except KeyError:
            raise UnknownConceptError(
                f"domain {self.domain!r} has no concept {name!r}"
            ) from None


@dataclass(frozen=True)
class TaxonomyStore:
    """Immutable collection of domain taxonomies keyed by domain name."""

    domains: dict[str, DomainTaxonomy]
    note: str = ""

    def domain(self, name: str) -> DomainTaxonomy:
        try:
            return self.domains[name]
        except KeyError:
            raise UnknownConceptError(f"unknown domain {name!r}") from None

    def node(self, concept: ConceptId) -> ConceptNode:
        return self.domain(concept.domain).require(concept.name)

    def has_concept(self, concept: ConceptId) -> bool:
        dom = self.domains.get(concept.domain)
        return dom is not None and concept.name in dom.nodes

    def is_a(self, concept: ConceptId, ancestor: ConceptId) -> bool:
        """Reflexive-transitive subsumption within one domain."""
        if concept.domain != ancestor.domain:
            raise CrossDomainError(
                f"cannot relate {concept} to {ancestor}: different domains"
            )
        dom = self.domain(concept.domain)
        dom.require(concept.name)
        dom.require(ancestor.name)
        return ancestor.name in dom.up[concept.name]

    def resolve(self, token: str) -> ConceptId:
        """Resolve ``domain:name`` or a bare name unique across domains."""
        if ":" in token:
            domain, _, name = token.partition(":")
            concept = ConceptId(domain, name)
            self.node(concept)
            return concept
        hits = [d for d in sorted(self.domains) if token in self.domains[d].nodes]
        if not hits:
            raise UnknownConceptError(f"no domain contains concept {token!r}")
        if len(hits) > 1:
            raise UnknownConceptError(
                f"concept {token!r} is ambiguous across domains {', '.join(hits)}; "
                f"use domain:name"
            )
        return ConceptId(hits[0], token)


def load_taxonomy(text: str) -> TaxonomyStore:
    """Parse and validate a taxonomy document.

    Document shape: ``{"domains": [{"name", "concepts": [{"id", "label",
    "parents": [...]}]}]}`` with an optional top-level ``"note"``.  A
    concept with an empty parent list is the domain root; each domain must
    have exactly one.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TaxonomyFormatError(f"taxonomy document is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("domains"), list):
        raise TaxonomyFormatError('taxonomy document must be {"domains": [...]}')
    note = doc.get("note", "")
    if not isinstance(note, str):
        raise TaxonomyFormatError('taxonomy "note" must be a string')

    domains: dict[str, DomainTaxonomy] = {}
    for entry in doc["domains"]:
        if not isinstance(entry, dict):
            raise TaxonomyFormatError("domain entry must be an object")
        name = _check_token(entry.get("name"), "domain name", "taxonomy document")
        if name in domains:
            raise TaxonomyFormatError(f"duplicate domain {name!r}")
        concepts = entry.get("concepts")
        if not isinstance(concepts, list) or not concepts:
            raise TaxonomyFormatError(f"domain {name!r}: needs a non-empty concept list")
        nodes: dict[str, ConceptNode] = {}
        for raw in concepts:
            if not isinstance(raw, dict):
                raise TaxonomyFormatError(f"domain {name!r}: concept entry must be an object")
            cname = _check_token(raw.get("id"), "concept id", f"domain {name!r}")
            if cname in nodes:
                raise TaxonomyFormatError(f"domain {name!r}: duplicate concept {cname!r}")
            label = raw.get("label", "")
            if not isinstance(label, str):
                raise TaxonomyFormatError(
                    f"domain {name!r}: concept {cname!r} label must be a string"
                )
            parents_raw = raw.get("parents")
            if not isinstance(parents_raw, list):
                raise TaxonomyFormatError(
                    f"domain {name!r}: concept {cname!r} needs a parent list"
                )
            parents = tuple(
                sorted(
                    _check_token(p, "parent id", f"domain {name!r} concept {cname!r}")
                    for p in parents_raw
                )
            )
            if len(set(parents)) != len(parents):
                raise TaxonomyFormatError(
                    f"domain {name!r}: concept {cname!r} lists a parent twice"
                )
            nodes[cname] = ConceptNode(id=ConceptId(name, cname), label=label, parents=parents)
        domains[name] = DomainTaxonomy.build(name, nodes)
    return TaxonomyStore(domains=domains, note=note)


def merge_stores(stores: Iterable[TaxonomyStore]) -> TaxonomyStore:
    """Combine stores; duplicate domain names are an error."""
    merged: dict[str, DomainTaxonomy] = {}
    notes: list[str] = []
    for store in stores:
        for name, dom in store.domains.items():
            if name in merged:
                raise TaxonomyFormatError(f"domain {name!r} appears in more than one document")
            merged[name] = dom
        if store.note:
            notes.append(store.note)
    return TaxonomyStore(domains=merged, note="; ".join(notes))


def ancestors(store: TaxonomyStore, concept: ConceptId) -> list[ConceptId]:
    """The concept itself plus all its ancestors.

    Ordered by increasing edge distance, then by concept name, so the
    result is deterministic on diamond-shaped regions.
    """
    dom = store.domain(concept.domain)
    dom.require(concept.name)
    dist = dom.up[concept.name]
    names = sorted(dist, key=lambda n: (dist[n], n))
    return [ConceptId(concept.domain, n) for n in names]


def least_common_superconcept(
    store: TaxonomyStore, c1: ConceptId, c2: ConceptId
) -> PathMetrics:
    """Deepest shared ancestor with its path counts.

    Ties on depth are broken by minimal n1+n2, then by concept name.
    """
    if c1.domain != c2.domain:
        raise CrossDomainError(f"cannot compare {c1} with {c2}: different domains")
    dom = store.domain(c1.domain)
    dom.require(c1.name)
    dom.require(c2.name)
    up1, up2 = dom.up[c1.name], dom.up[c2.name]
    common = up1.keys() & up2.keys()
    # Root is an ancestor of everything, so `common` is never empty.
    best = min(common, key=lambda a: (-dom.depth[a], up1[a] + up2[a], a))
    return PathMetrics(
        n1=up1[best], n2=up2[best], n3=dom.depth[best], lcs=ConceptId(c1.domain, best)
    )


def con_sim(store: TaxonomyStore, c1: ConceptId, c2: ConceptId) -> Fraction:
    """Exact similarity in (0, 1]; 1 iff the concepts are identical."""
    m = least_common_superconcept(store, c1, c2)
    return Fraction(2 * m.n3, m.n1 + m.n2 + 2 * m.n3)


def neighborhood(
    store: TaxonomyStore,
    concept: ConceptId,
    max_size: int,
    floor: float | Fraction,
) -> list[tuple[ConceptId, Fraction]]:
    """Nearest same-domain concepts with similarity >= floor.

    Sorted by similarity descending, ties by concept name, truncated to
    ``max_size``.  The concept itself is excluded.
    """
    if max_size < 1:
        raise ValueError(f"max_size must be >= 1, got {max_size}")
    if not 0 <= floor <= 1:
        raise ValueError(f"floor must be within [0, 1], got {floor}")
    dom = store.domain(concept.domain)
    dom.require(concept.name)
    scored = []
    for name in dom.nodes:
        if name == concept.name:
            continue
        other = ConceptId(concept.domain, name)
        sim = con_sim(store, concept, other)
        if sim >= floor:
            scored.append((other, sim))
    scored.sort(key=lambda pair: (-pair[1], pair[0].name))
    return scored[:max_size]
