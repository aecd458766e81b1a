"""Environment checking against the graph, and detection-quality metrics.

An environment file pins one version per component (requirements-style
lines, optionally layer-annotated).  Every unordered pair of entries is
looked up in the graph by version-prefix subsumption; pairs whose best
match has negative confidence become issues, pairs with positive or no
knowledge stay silent.  When several relations match at different
granularity, the most specific match wins and exact ties merge their
evidence.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

from .errors import DataError, StorageError
from .graph import Evidence, KnowledgeGraph, Relation, canonical_pair, pair_key
from .inference import COMPATIBLE
from .recognizer import ComponentEntry, VersionedComponent, alias_index
from .versions import (
    VersionSyntaxError,
    normalize_version,
    shared_prefix_len,
    versions_match,
)

__all__ = [
    "EnvironmentSpec",
    "EnvParseResult",
    "Issue",
    "Metrics",
    "PairKey",
    "parse_environment",
    "parse_environment_entries",
    "check_environment",
    "evaluate_metrics",
    "f1_score",
    "unchecked_pairs",
]

PairKey = tuple[tuple[str, str], tuple[str, str]]


@dataclass(frozen=True)
class EnvironmentSpec:
    """A project's pinned stack: one versioned component per entry."""

    entries: tuple[VersionedComponent, ...]
    source: str


@dataclass
class EnvParseResult:
    spec: EnvironmentSpec
    diagnostics: list[str]


@dataclass(frozen=True)
class Issue:
    """A known-incompatible pair found in an environment."""

    pair: tuple[VersionedComponent, VersionedComponent]
    confidence: float
    evidence: tuple[Evidence, ...]
    matched_nodes: tuple[VersionedComponent, ...]

    def __post_init__(self) -> None:
        if self.confidence >= 0:
            raise ValueError("an issue needs strictly negative confidence")
        if not self.evidence:
            raise ValueError("an issue needs evidence")


@dataclass(frozen=True)
class Metrics:
    """Set-based detection quality; undefined ratios are None, not zero."""

    true_positives: int
    false_positives: int
    false_negatives: int
    precision: float | None
    recall: float | None
    f1: float | None


def _parse_line(line: str) -> tuple[str, str, str | None] | None:
    """Split one entry line into (name, version, layer annotation)."""
    body = line.split("#", 1)[0].strip()
    if not body:
        return None
    layer = None
    if "@" in body:
        body, _, layer_part = body.partition("@")
        layer = layer_part.strip().lower() or None
        body = body.strip()
    if "==" in body:
        name, _, version = body.partition("==")
    else:
        parts = body.split()
        if len(parts) != 2:
            raise ValueError("expected 'name==version' or 'name version'")
        name, version = parts
    name = name.strip().lower()
    version = version.strip()
    if not name or not version:
        raise ValueError("expected 'name==version' or 'name version'")
    return name, version, layer


def parse_environment_entries(
    lines: Iterable[str], dictionary: Sequence[ComponentEntry], source: str
) -> EnvParseResult:
    """Resolve entry lines through the component dictionary."""
    aliases = alias_index(dictionary)
    entries: list[VersionedComponent] = []
    seen: set[str] = set()
    diagnostics: list[str] = []
    for lineno, line in enumerate(lines, start=1):
        try:
            parsed = _parse_line(line)
        except ValueError as exc:
            diagnostics.append(f"{source}:{lineno}: {exc}")
            continue
        if parsed is None:
            continue
        name, version_text, layer = parsed
        entry = aliases.get(name)
        if entry is None:
            diagnostics.append(f"{source}:{lineno}: unknown component {name!r}, skipped")
            continue
        try:
            version = normalize_version(version_text)
        except VersionSyntaxError:
            diagnostics.append(f"{source}:{lineno}: unparsable version {version_text!r}, skipped")
            continue
        if layer is not None and layer != entry.layer:
            diagnostics.append(
                f"{source}:{lineno}: layer annotation {layer!r} ignored, "
                f"dictionary says {entry.layer!r}"
            )
        if entry.id in seen:
            diagnostics.append(f"{source}:{lineno}: duplicate component {entry.id!r}, skipped")
            continue
        seen.add(entry.id)
        entries.append(VersionedComponent(entry.id, entry.layer, version))
    if not entries:
        raise DataError(f"{source}: no resolvable environment entries")
    return EnvParseResult(
        spec=EnvironmentSpec(entries=tuple(entries), source=source), diagnostics=diagnostics
    )


def parse_environment(path: str | Path, dictionary: Sequence[ComponentEntry]) -> EnvParseResult:
    """Parse an environment file; zero resolvable entries is fatal."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise StorageError(f"cannot read environment file {path}: {exc}") from None
    return parse_environment_entries(lines, dictionary, source=str(path))


def _matching_relations(
    g: KnowledgeGraph, x: VersionedComponent, y: VersionedComponent
) -> list[tuple[tuple, Relation]]:
    """Relations whose endpoints prefix-match the two entries, with rank keys.

    The rank prefers longer shared concrete prefixes with the entry
    versions, then concrete nodes over wildcard ones.
    """
    a, b = canonical_pair(x, y)
    ranked = []
    for rel in g.links:
        if rel.a.component_id != a.component_id or rel.b.component_id != b.component_id:
            continue
        na, nb = rel.a, rel.b
        if versions_match(a.version, na.version) and versions_match(b.version, nb.version):
            shared = shared_prefix_len(a.version, na.version) + shared_prefix_len(
                b.version, nb.version
            )
            wildcards = int(na.version.wildcard) + int(nb.version.wildcard)
            ranked.append(((-shared, wildcards), rel))
    ranked.sort(key=lambda item: (item[0], item[1].key))
    return ranked


def check_environment(g: KnowledgeGraph, env: EnvironmentSpec) -> list[Issue]:
    """Find known-incompatible pairs in an environment.

    Pairs without graph knowledge are silent by design: the graph is
    incomplete, and absence of evidence is not evidence of incompatibility.
    Issues come back sorted most-incompatible first.
    """
    issues: list[Issue] = []
    for x, y in combinations(env.entries, 2):
        if x.component_id == y.component_id:
            continue
        ranked = _matching_relations(g, x, y)
        if not ranked:
            continue
        best_rank = ranked[0][0]
        tied = [rel for rank, rel in ranked if rank == best_rank]
        evidence: list[Evidence] = []
        seen_posts: set[int] = set()
        matched: set[VersionedComponent] = set()
        for rel in tied:
            matched.update((rel.a, rel.b))
            for e in rel.evidence:
                if e.post_id not in seen_posts:
                    seen_posts.add(e.post_id)
                    evidence.append(e)
        n_compat = sum(1 for e in evidence if e.label == COMPATIBLE)
        n_incompat = len(evidence) - n_compat
        if n_compat >= n_incompat:
            continue
        confidence = (n_compat - n_incompat) / (n_compat + n_incompat)
        issues.append(
            Issue(
                pair=canonical_pair(x, y),
                confidence=confidence,
                evidence=tuple(sorted(evidence, key=lambda e: (-e.votes, e.post_id))),
                matched_nodes=tuple(sorted(matched, key=pair_key)),
            )
        )
    issues.sort(key=lambda i: (i.confidence, pair_key(i.pair[0]), pair_key(i.pair[1])))
    return issues


def unchecked_pairs(
    g: KnowledgeGraph, env: EnvironmentSpec
) -> list[tuple[VersionedComponent, VersionedComponent]]:
    """Entry pairs with no graph knowledge at all, for audit reporting."""
    unknown = []
    for x, y in combinations(env.entries, 2):
        if x.component_id == y.component_id:
            continue
        if not _matching_relations(g, x, y):
            unknown.append(canonical_pair(x, y))
    unknown.sort(key=lambda p: (pair_key(p[0]), pair_key(p[1])))
    return unknown


def f1_score(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall."""
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def evaluate_metrics(reported: Iterable[PairKey], ground_truth: Iterable[PairKey]) -> Metrics:
    """Set-intersection counting of detection quality.

    Pair keys must be canonicalized ((component, version) tuples in
    lexicographic order).  Ratios with a zero denominator are reported
    as absent (None) rather than coerced to a number.
    """
    reported_set = set(reported)
    truth_set = set(ground_truth)
    tp = len(reported_set & truth_set)
    fp = len(reported_set - truth_set)
    fn = len(truth_set - reported_set)
    precision = tp / (tp + fp) if (tp + fp) > 0 else None
    recall = tp / (tp + fn) if (tp + fn) > 0 else None
    f1 = (
        f1_score(precision, recall)
        if precision is not None and recall is not None and (precision + recall) > 0
        else None
    )
    return Metrics(
        true_positives=tp,
        false_positives=fp,
        false_negatives=fn,
        precision=precision,
        recall=recall,
        f1=f1,
    )


def issue_pair_key(issue: Issue) -> PairKey:
    return (pair_key(issue.pair[0]), pair_key(issue.pair[1]))


def issue_to_obj(issue: Issue) -> dict:
    return {
        "pair": [
            {
                "component": vc.component_id,
                "layer": vc.layer,
                "version": vc.version.normalized,
            }
            for vc in issue.pair
        ],
        "confidence": issue.confidence,
        "evidence": [
            {"post_id": e.post_id, "votes": e.votes, "label": e.label} for e in issue.evidence
        ],
        "matched_nodes": [
            {
                "component": vc.component_id,
                "layer": vc.layer,
                "version": vc.version.normalized,
            }
            for vc in issue.matched_nodes
        ],
    }


def load_pair_file(path: str | Path) -> list[PairKey]:
    """Load a prediction/truth file: a JSON list of {a, b} pair objects."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise StorageError(f"cannot read pair file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: not valid JSON: {exc}") from None
    if not isinstance(raw, list):
        raise DataError(f"{path}: expected a JSON list of pair objects")
    keys: list[PairKey] = []
    try:
        for obj in raw:
            a = (str(obj["a"]["component"]), str(obj["a"]["version"]))
            b = (str(obj["b"]["component"]), str(obj["b"]["version"]))
            keys.append((a, b) if a <= b else (b, a))
    except (KeyError, TypeError) as exc:
        raise DataError(f"{path}: malformed pair object: {exc}") from None
    return keys
