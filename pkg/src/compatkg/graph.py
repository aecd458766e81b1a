"""Verdict aggregation into an immutable, confidence-scored knowledge graph.

A relation between two versioned components counts the posts inferring
each label; the confidence score is (compatible - incompatible) over the
total, so its sign is the majority label.  Evenly split pairs are
neutral and never stored.  Votes are kept as evidence metadata only,
they do not weight the counts.  The discard rule compares the integer
counts directly, never a floating-point value against zero.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .errors import DataError, GraphFormatError, StorageError
from .inference import COMPATIBLE, INCOMPATIBLE, Verdict
from .recognizer import LAYERS, VersionedComponent
from .versions import normalize_version

__all__ = [
    "Evidence",
    "Relation",
    "KnowledgeGraph",
    "AggregationStats",
    "GRAPH_FORMAT_VERSION",
    "confidence_score",
    "canonical_pair",
    "aggregate",
    "aggregate_with_stats",
    "build_graph",
    "save_graph",
    "load_graph",
    "node_to_obj",
    "relation_to_obj",
]

GRAPH_FORMAT_VERSION = 1


@dataclass(frozen=True)
class Evidence:
    """One post's contribution to a relation."""

    post_id: int
    votes: int
    label: str

    def __post_init__(self) -> None:
        if self.label not in (COMPATIBLE, INCOMPATIBLE):
            raise ValueError(f"evidence label must be compatible/incompatible, got {self.label!r}")


def confidence_score(n_compatible: int, n_incompatible: int) -> float:
    """(compatible - incompatible) / (compatible + incompatible)."""
    total = n_compatible + n_incompatible
    if total < 1:
        raise ValueError("confidence needs at least one counted post")
    return (n_compatible - n_incompatible) / total


def pair_key(vc: VersionedComponent) -> tuple[str, str]:
    return (vc.component_id, vc.version.normalized)


def canonical_pair(
    a: VersionedComponent, b: VersionedComponent
) -> tuple[VersionedComponent, VersionedComponent]:
    """Order a pair lexicographically by (component id, normalized version)."""
    return (a, b) if pair_key(a) <= pair_key(b) else (b, a)


@dataclass(frozen=True)
class Relation:
    """An aggregated undirected link between two versioned components."""

    a: VersionedComponent
    b: VersionedComponent
    n_compatible: int
    n_incompatible: int
    evidence: tuple[Evidence, ...]

    def __post_init__(self) -> None:
        if self.a.component_id == self.b.component_id:
            raise DataError(f"self-loop on component {self.a.component_id!r}")
        if pair_key(self.a) > pair_key(self.b):
            raise DataError("relation endpoints are not in canonical order")
        if self.n_compatible + self.n_incompatible < 1:
            raise DataError("relation without evidence")
        if self.n_compatible == self.n_incompatible:
            raise DataError("neutral relation must be discarded, not stored")

    @property
    def confidence(self) -> float:
        return confidence_score(self.n_compatible, self.n_incompatible)

    @property
    def label(self) -> str:
        return COMPATIBLE if self.n_compatible > self.n_incompatible else INCOMPATIBLE

    @property
    def key(self) -> tuple[tuple[str, str], tuple[str, str]]:
        return (pair_key(self.a), pair_key(self.b))


@dataclass
class AggregationStats:
    pairs_total: int = 0
    pairs_neutral_discarded: int = 0
    duplicates_collapsed: int = 0


def aggregate_with_stats(verdicts: Iterable[Verdict]) -> tuple[list[Relation], AggregationStats]:
    """Aggregate a verdict stream into relations, reporting discard counts.

    One evidence entry per post per pair (the first occurrence wins);
    evenly split pairs are dropped.  Output is sorted by canonical pair,
    evidence by votes descending then post id, so any ordering of an
    equivalent stream yields an identical result.
    """
    stats = AggregationStats()
    by_pair: dict[tuple[VersionedComponent, VersionedComponent], list[Evidence]] = {}
    seen: set[tuple[tuple[str, str], tuple[str, str], int]] = set()
    for verdict in verdicts:
        if verdict.pair is None:
            raise ValueError("verdict has no component pair attached")
        if verdict.label not in (COMPATIBLE, INCOMPATIBLE):
            raise ValueError(f"cannot aggregate {verdict.label!r} verdicts")
        pair = canonical_pair(*verdict.pair)
        dedupe_key = (pair_key(pair[0]), pair_key(pair[1]), verdict.post_id)
        if dedupe_key in seen:
            stats.duplicates_collapsed += 1
            continue
        seen.add(dedupe_key)
        by_pair.setdefault(pair, []).append(
            Evidence(post_id=verdict.post_id, votes=verdict.votes, label=verdict.label)
        )

    relations: list[Relation] = []
    stats.pairs_total = len(by_pair)
    for (a, b), evidence in by_pair.items():
        n_compat = sum(1 for e in evidence if e.label == COMPATIBLE)
        n_incompat = len(evidence) - n_compat
        if n_compat == n_incompat:
            stats.pairs_neutral_discarded += 1
            continue
        ordered = tuple(sorted(evidence, key=lambda e: (-e.votes, e.post_id)))
        relations.append(
            Relation(a=a, b=b, n_compatible=n_compat, n_incompatible=n_incompat, evidence=ordered)
        )
    relations.sort(key=lambda r: r.key)
    return relations, stats


def aggregate(verdicts: Iterable[Verdict]) -> list[Relation]:
    """Aggregate a verdict stream into canonical relations."""
    return aggregate_with_stats(verdicts)[0]


@dataclass(frozen=True)
class KnowledgeGraph:
    """Immutable node and link sets with lookup indexes.

    Build through :func:`build_graph`; the index mappings are read-only
    views and the node/link collections are tuples, so a built graph can
    be shared freely across threads.
    """

    nodes: tuple[VersionedComponent, ...]
    links: tuple[Relation, ...]
    nodes_by_component: Mapping[str, tuple[VersionedComponent, ...]] = field(repr=False)
    links_by_node: Mapping[VersionedComponent, tuple[Relation, ...]] = field(repr=False)
    link_by_pair: Mapping[
        tuple[tuple[str, str], tuple[str, str]], Relation
    ] = field(repr=False)
    components_by_layer: Mapping[str, tuple[str, ...]] = field(repr=False)

    def node(self, component_id: str, normalized_version: str) -> VersionedComponent | None:
        for n in self.nodes_by_component.get(component_id, ()):
            if n.version.normalized == normalized_version:
                return n
        return None

    def relation_between(
        self, a: VersionedComponent, b: VersionedComponent
    ) -> Relation | None:
        x, y = canonical_pair(a, b)
        return self.link_by_pair.get((pair_key(x), pair_key(y)))


def build_graph(relations: Sequence[Relation]) -> KnowledgeGraph:
    """Assemble the immutable graph; duplicate pairs are a fatal caller bug."""
    link_by_pair: dict[tuple[tuple[str, str], tuple[str, str]], Relation] = {}
    for rel in relations:
        if rel.key in link_by_pair:
            raise DataError(f"duplicate relation for pair {rel.key}")
        link_by_pair[rel.key] = rel

    nodes = sorted({vc for r in relations for vc in (r.a, r.b)}, key=pair_key)
    by_component: dict[str, list[VersionedComponent]] = {}
    for node in nodes:
        by_component.setdefault(node.component_id, []).append(node)
    by_node: dict[VersionedComponent, list[Relation]] = {n: [] for n in nodes}
    for rel in sorted(relations, key=lambda r: r.key):
        by_node[rel.a].append(rel)
        by_node[rel.b].append(rel)
    by_layer: dict[str, list[str]] = {layer: [] for layer in LAYERS}
    seen_components: set[str] = set()
    for node in nodes:
        if node.component_id not in seen_components:
            seen_components.add(node.component_id)
            by_layer[node.layer].append(node.component_id)

    return KnowledgeGraph(
        nodes=tuple(nodes),
        links=tuple(sorted(relations, key=lambda r: r.key)),
        nodes_by_component=MappingProxyType(
            {cid: tuple(ns) for cid, ns in by_component.items()}
        ),
        links_by_node=MappingProxyType({n: tuple(rs) for n, rs in by_node.items()}),
        link_by_pair=MappingProxyType(dict(link_by_pair)),
        components_by_layer=MappingProxyType(
            {layer: tuple(cids) for layer, cids in by_layer.items()}
        ),
    )


# --------------------------------------------------------------------------
# Persistence
# --------------------------------------------------------------------------


def node_to_obj(node: VersionedComponent) -> dict:
    return {
        "component": node.component_id,
        "layer": node.layer,
        "version": node.version.normalized,
    }


def relation_to_obj(rel: Relation) -> dict:
    return {
        "a": {"component": rel.a.component_id, "version": rel.a.version.normalized},
        "b": {"component": rel.b.component_id, "version": rel.b.version.normalized},
        "n_compatible": rel.n_compatible,
        "n_incompatible": rel.n_incompatible,
        "confidence": rel.confidence,
        "evidence": [
            {"post_id": e.post_id, "votes": e.votes, "label": e.label} for e in rel.evidence
        ],
    }


def graph_to_obj(g: KnowledgeGraph) -> dict:
    return {
        "format_version": GRAPH_FORMAT_VERSION,
        "nodes": [node_to_obj(n) for n in g.nodes],
        "links": [relation_to_obj(r) for r in g.links],
    }


def save_graph(g: KnowledgeGraph, path: str | Path) -> None:
    """Write the graph file; identical graphs serialize byte-identically."""
    payload = json.dumps(graph_to_obj(g), indent=2, ensure_ascii=False) + "\n"
    try:
        Path(path).write_text(payload, encoding="utf-8")
    except OSError as exc:
        raise StorageError(f"cannot write graph file {path}: {exc}") from None


def load_graph(path: str | Path) -> KnowledgeGraph:
    """Load a graph file produced by :func:`save_graph`.

    Truncated or corrupt files and unknown format versions are fatal; no
    partial graph is ever returned.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise StorageError(f"cannot read graph file {path}: {exc}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"{path}: corrupt or truncated graph file: {exc}") from None
    if not isinstance(obj, dict) or obj.get("format_version") != GRAPH_FORMAT_VERSION:
        raise GraphFormatError(
            f"{path}: unknown graph format version {obj.get('format_version')!r}; "
            f"expected {GRAPH_FORMAT_VERSION}"
        )
    try:
        layer_of: dict[tuple[str, str], str] = {}
        for n in obj["nodes"]:
            layer_of[(n["component"], n["version"])] = n["layer"]

        def to_node(ref: dict) -> VersionedComponent:
            key = (ref["component"], ref["version"])
            return VersionedComponent(
                component_id=key[0],
                layer=layer_of[key],
                version=normalize_version(key[1]),
            )

        relations = [
            Relation(
                a=to_node(link["a"]),
                b=to_node(link["b"]),
                n_compatible=int(link["n_compatible"]),
                n_incompatible=int(link["n_incompatible"]),
                evidence=tuple(
                    Evidence(post_id=int(e["post_id"]), votes=int(e["votes"]), label=e["label"])
                    for e in link["evidence"]
                ),
            )
            for link in obj["links"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"{path}: malformed graph file: {exc}") from None
    return build_graph(relations)
