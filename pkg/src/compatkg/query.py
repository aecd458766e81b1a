"""Search-bar query parsing and resolution against the knowledge graph.

Three query forms are recognized: a pair of versioned components ("Does
python 3.6.8 work with ubuntu 16.04.6?"), a single versioned component
("python 3.5"), and a bare component name ("tensorflow").  Parsing
reuses the mention recognizer, so anything the extraction pipeline can
read, the search bar can read too.  Version operands match graph nodes
by prefix subsumption in either direction, preferring exact matches.
"""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass

import httpx

from .errors import UnrecognizedQueryError
from .graph import KnowledgeGraph, Relation, node_to_obj, pair_key, relation_to_obj
from .recognizer import (
    COMPONENT,
    LAYERS,
    ComponentEntry,
    VersionedComponent,
    analyze_paragraph,
    bind_versions,
)
from .versions import Version, shared_prefix_len, versions_match

__all__ = [
    "PAIR",
    "VERSIONED_COMPONENT",
    "COMPONENT_ONLY",
    "Query",
    "Subgraph",
    "LayerStats",
    "QueryResult",
    "RemoteQueryParser",
    "parse_query",
    "resolve",
    "top_components",
    "query_payload",
    "SCHEMA_VERSION",
]

PAIR = "pair"
VERSIONED_COMPONENT = "versioned_component"
COMPONENT_ONLY = "component"

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Query:
    kind: str
    first: tuple[str, Version | None]
    second: tuple[str, Version] | None
    raw: str


@dataclass(frozen=True)
class Subgraph:
    """A closed fragment of the graph: every link's endpoints are included."""

    nodes: tuple[VersionedComponent, ...]
    links: tuple[Relation, ...]
    focus: tuple[VersionedComponent, ...]


@dataclass(frozen=True)
class LayerStats:
    layer: str
    top: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class QueryResult:
    query: Query
    subgraph: Subgraph
    verdict: str | None
    confidence: float | None
    message: str


def parse_query(text: str, dictionary: Sequence[ComponentEntry]) -> Query:
    """Classify free text into one of the three query forms.

    Two bound versioned components make a pair query, one makes a
    versioned-component query, and a bare component mention falls back
    to a component query.  Text without any known component raises
    :class:`UnrecognizedQueryError`.
    """
    mentions = analyze_paragraph(text, dictionary)
    bound = [b.component for b in bind_versions(mentions)]
    if len(bound) >= 2:
        a, b = bound[0], bound[1]
        return Query(
            kind=PAIR,
            first=(a.component_id, a.version),
            second=(b.component_id, b.version),
            raw=text,
        )
    if len(bound) == 1:
        vc = bound[0]
        return Query(kind=VERSIONED_COMPONENT, first=(vc.component_id, vc.version), second=None, raw=text)
    component_mentions = [m for m in mentions if m.kind == COMPONENT]
    if component_mentions:
        return Query(
            kind=COMPONENT_ONLY,
            first=(component_mentions[0].component_id, None),
            second=None,
            raw=text,
        )
    raise UnrecognizedQueryError(text, sorted(e.id for e in dictionary))


def _match_nodes(
    g: KnowledgeGraph, component_id: str, version: Version | None
) -> list[VersionedComponent]:
    """Graph nodes for a component, narrowed by prefix-matching the version.

    Exact version matches are preferred; otherwise every node whose
    version subsumes or is subsumed by the query version is returned.
    """
    nodes = list(g.nodes_by_component.get(component_id, ()))
    if version is None:
        return nodes
    exact = [n for n in nodes if n.version == version]
    if exact:
        return exact
    return [n for n in nodes if versions_match(version, n.version)]


def _close_over(focus: Sequence[VersionedComponent], links: Sequence[Relation]) -> Subgraph:
    nodes = set(focus)
    for rel in links:
        nodes.add(rel.a)
        nodes.add(rel.b)
    return Subgraph(
        nodes=tuple(sorted(nodes, key=pair_key)),
        links=tuple(sorted(links, key=lambda r: r.key)),
        focus=tuple(sorted(set(focus), key=pair_key)),
    )


def _relation_specificity(rel: Relation, qa: Version, qb: Version) -> tuple:
    shared = shared_prefix_len(qa, rel.a.version) + shared_prefix_len(qb, rel.b.version)
    wildcards = int(rel.a.version.wildcard) + int(rel.b.version.wildcard)
    return (-shared, wildcards, rel.key)


def resolve(g: KnowledgeGraph, q: Query) -> QueryResult:
    """Resolve a parsed query to a subgraph and an answer summary."""
    if q.kind == PAIR:
        ops = sorted([q.first, q.second], key=lambda op: (op[0], op[1].normalized))
        (comp_a, ver_a), (comp_b, ver_b) = ops
        matched_a = _match_nodes(g, comp_a, ver_a)
        matched_b = _match_nodes(g, comp_b, ver_b)
        candidates = []
        for na in matched_a:
            for nb in matched_b:
                rel = g.relation_between(na, nb)
                if rel is not None:
                    candidates.append(rel)
        if not candidates:
            subgraph = _close_over(matched_a + matched_b, [])
            return QueryResult(
                query=q,
                subgraph=subgraph,
                verdict="unknown",
                confidence=None,
                message=f"no stored knowledge about {comp_a} {ver_a.normalized} "
                f"and {comp_b} {ver_b.normalized}",
            )
        candidates.sort(key=lambda r: _relation_specificity(r, ver_a, ver_b))
        best = candidates[0]
        subgraph = _close_over(matched_a + matched_b, sorted(set(candidates), key=lambda r: r.key))
        return QueryResult(
            query=q,
            subgraph=subgraph,
            verdict=best.label,
            confidence=best.confidence,
            message=f"{best.a.component_id} {best.a.version.normalized} and "
            f"{best.b.component_id} {best.b.version.normalized} are {best.label} "
            f"(confidence {best.confidence:+.3f}, "
            f"{best.n_compatible} vs {best.n_incompatible} posts)",
        )

    comp, ver = q.first
    focus = _match_nodes(g, comp, ver)
    if not focus:
        return QueryResult(
            query=q,
            subgraph=Subgraph(nodes=(), links=(), focus=()),
            verdict=None,
            confidence=None,
            message=f"no knowledge about {comp}"
            + (f" {ver.normalized}" if ver is not None else ""),
        )
    links = sorted(
        {rel for node in focus for rel in g.links_by_node.get(node, ())},
        key=lambda r: r.key,
    )
    subgraph = _close_over(focus, links)
    label = comp + (f" {ver.normalized}" if ver is not None else "")
    return QueryResult(
        query=q,
        subgraph=subgraph,
        verdict=None,
        confidence=None,
        message=f"{label}: {len(focus)} matching node(s), {len(links)} relation(s)",
    )


def top_components(g: KnowledgeGraph, k: int = 5) -> list[LayerStats]:
    """Per layer, the k components with the most incident relations."""
    counts: dict[str, int] = {}
    for rel in g.links:
        counts[rel.a.component_id] = counts.get(rel.a.component_id, 0) + 1
        counts[rel.b.component_id] = counts.get(rel.b.component_id, 0) + 1
    stats = []
    for layer in LAYERS:
        ranked = sorted(
            ((cid, counts[cid]) for cid in g.components_by_layer.get(layer, ())),
            key=lambda item: (-item[1], item[0]),
        )
        stats.append(LayerStats(layer=layer, top=tuple(ranked[:k])))
    return stats


# --------------------------------------------------------------------------
# Shared serialization (CLI machine output == HTTP API response)
# --------------------------------------------------------------------------


def subgraph_to_obj(sub: Subgraph) -> dict:
    return {
        "nodes": [node_to_obj(n) for n in sub.nodes],
        "links": [relation_to_obj(r) for r in sub.links],
        "focus": [node_to_obj(n) for n in sub.focus],
    }


def query_payload(g: KnowledgeGraph, text: str, dictionary: Sequence[ComponentEntry]) -> dict:
    """The one query-response shape used by both the CLI and the HTTP API."""
    q = parse_query(text, dictionary)
    result = resolve(g, q)
    operands = [{"component": q.first[0], "version": q.first[1].normalized if q.first[1] else None}]
    if q.second is not None:
        operands.append({"component": q.second[0], "version": q.second[1].normalized})
    return {
        "schema_version": SCHEMA_VERSION,
        "query": {"kind": q.kind, "raw": q.raw, "operands": operands},
        "verdict": result.verdict,
        "confidence": result.confidence,
        "message": result.message,
        "subgraph": subgraph_to_obj(result.subgraph),
    }


class RemoteQueryParser:
    """Optional client for an external query parser.

    Speaks the same wire shape as the inference oracle: it sends
    {"context": "", "question": <raw text>} and expects {"answer":
    <normalized operand text>}, which is then parsed locally.  Disabled
    unless an endpoint is configured; any failure falls back to local
    parsing.
    """

    def __init__(self, endpoint: str, timeout_ms: int = 5000, client: httpx.Client | None = None):
        self.endpoint = endpoint
        self.timeout_ms = timeout_ms
        self.client = client
        self.diagnostics: list[str] = []

    def parse(self, text: str, dictionary: Sequence[ComponentEntry]) -> Query:
        own_client = self.client is None
        client = self.client or httpx.Client(timeout=self.timeout_ms / 1000.0)
        try:
            response = client.post(
                self.endpoint,
                json={"context": "", "question": text},
                timeout=self.timeout_ms / 1000.0,
            )
            response.raise_for_status()
            answer = str(response.json().get("answer", ""))
        except (httpx.HTTPError, ValueError, json.JSONDecodeError) as exc:
            self.diagnostics.append(f"remote parser failed for {text!r}: {exc}")
            return parse_query(text, dictionary)
        finally:
            if own_client:
                client.close()
        try:
            parsed = parse_query(answer, dictionary)
        except UnrecognizedQueryError:
            self.diagnostics.append(f"remote parser answer {answer!r} not recognized")
            return parse_query(text, dictionary)
        return Query(kind=parsed.kind, first=parsed.first, second=parsed.second, raw=text)
