"""Component and version mention recognition, and component-version binding.

A component dictionary maps canonical ids to stack layers and surface
aliases.  Recognition finds alias occurrences (case-insensitive, word
bounded) and version tokens, including the component-attached grammar
``cuda-8`` / ``python v3`` / ``Windows 64`` which yields a component
mention and a version mention that are pre-bound to each other.

Binding pairs the remaining component and version mentions one-to-one
with a weighted stable matching: the cost of a pair is the token distance
between the mentions plus a large penalty when they sit in different
sentences, both sides prefer cheaper partners, and cost ties go to the
mention with the smaller start offset.  The cost function is replaceable
so a syntax-aware distance can be plugged in.
"""

from __future__ import annotations

import json
import re
from bisect import bisect_right
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

from .errors import DictionaryError
from .matching import stable_match
from .versions import (
    PATTERN_COMPONENT_ATTACHED,
    Version,
    normalize_version,
    resolve_spans,
    scan_version_tokens,
)

__all__ = [
    "LAYERS",
    "ComponentEntry",
    "Mention",
    "VersionedComponent",
    "Binding",
    "CostFunction",
    "CROSS_SENTENCE_PENALTY",
    "load_dictionary",
    "alias_index",
    "recognize_components",
    "recognize_versions",
    "analyze_paragraph",
    "bind_versions",
    "split_sentences",
    "token_distance_cost",
]

LAYERS = ("library", "runtime", "driver", "os_container", "hardware")

CROSS_SENTENCE_PENALTY = 1000

COMPONENT = "component"
VERSION = "version"


@dataclass(frozen=True)
class ComponentEntry:
    """One dictionary component: canonical id, stack layer, surface aliases."""

    id: str
    layer: str
    aliases: frozenset[str]

    def __post_init__(self) -> None:
        if self.layer not in LAYERS:
            raise DictionaryError(f"unknown layer {self.layer!r} for component {self.id!r}")
        if not self.aliases:
            raise DictionaryError(f"component {self.id!r} has no aliases")


@dataclass(frozen=True)
class Mention:
    """A recognized span in one paragraph.

    Component mentions carry ``component_id`` and ``layer``; version
    mentions carry ``version`` and the grammar ``pattern`` that matched.
    A version found by the component-attached grammar also records the
    start offset of its component mention in ``attached_start``.
    """

    kind: str
    text: str
    start: int
    end: int
    sentence_index: int = 0
    token_index: int = 0
    component_id: str | None = None
    layer: str | None = None
    version: Version | None = None
    pattern: int | None = None
    attached_start: int | None = None

    def __post_init__(self) -> None:
        if self.start >= self.end:
            raise ValueError("mention span is empty")
        if self.kind == COMPONENT and self.component_id is None:
            raise ValueError("component mention needs component_id")
        if self.kind == VERSION and self.version is None:
            raise ValueError("version mention needs version")


@dataclass(frozen=True)
class VersionedComponent:
    """A component bound to a version: the node type of the knowledge graph."""

    component_id: str
    layer: str
    version: Version

    @property
    def key(self) -> tuple[str, str]:
        return (self.component_id, self.version.normalized)


@dataclass(frozen=True)
class Binding:
    """A bound pair with the mentions it came from."""

    component: VersionedComponent
    component_mention: Mention
    version_mention: Mention


CostFunction = Callable[[Mention, Mention], float]


def token_distance_cost(component: Mention, version: Mention) -> float:
    """Token distance plus a flat penalty for crossing a sentence boundary."""
    cost = abs(component.token_index - version.token_index)
    if component.sentence_index != version.sentence_index:
        cost += CROSS_SENTENCE_PENALTY
    return cost


def load_dictionary(path: str | Path) -> list[ComponentEntry]:
    """Load a component dictionary file (a JSON list of id/layer/aliases objects)."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DictionaryError(f"{path}: not valid JSON: {exc}") from None
    if not isinstance(raw, list) or not raw:
        raise DictionaryError(f"{path}: expected a non-empty JSON list")
    entries: list[ComponentEntry] = []
    seen: set[str] = set()
    for obj in raw:
        cid = str(obj["id"]).lower()
        if cid in seen:
            raise DictionaryError(f"{path}: duplicate component id {cid!r}")
        seen.add(cid)
        aliases = {str(a).lower() for a in obj.get("aliases", [])}
        aliases.add(cid)
        entries.append(ComponentEntry(id=cid, layer=str(obj["layer"]), aliases=frozenset(aliases)))
    return entries


def alias_index(dictionary: Iterable[ComponentEntry]) -> dict[str, ComponentEntry]:
    """Lowercased alias to entry; alias collisions resolve to the first entry."""
    index: dict[str, ComponentEntry] = {}
    for entry in dictionary:
        for alias in entry.aliases:
            index.setdefault(alias, entry)
    return index


# --------------------------------------------------------------------------
# Sentence and token geometry
# --------------------------------------------------------------------------

# Terminal punctuation followed by whitespace or end of text.  Dots inside
# tokens like "1.13" never qualify because they are not followed by
# whitespace.
_SENTENCE_END_RE = re.compile(r"[.!?]+(?=\s|$)")


def split_sentences(text: str) -> list[tuple[int, int]]:
    """Return (start, end) spans of sentences; always covers the full text."""
    spans: list[tuple[int, int]] = []
    start = 0
    for m in _SENTENCE_END_RE.finditer(text):
        spans.append((start, m.end()))
        start = m.end()
    if start < len(text):
        spans.append((start, len(text)))
    if not spans:
        spans.append((0, len(text)))
    return spans


def _sentence_starts(text: str) -> list[int]:
    return [s for s, _ in split_sentences(text)]


def _token_starts(text: str) -> list[int]:
    return [m.start() for m in re.finditer(r"\S+", text)]


def _locate(starts: list[int], offset: int) -> int:
    return max(bisect_right(starts, offset) - 1, 0)


# --------------------------------------------------------------------------
# Recognition
# --------------------------------------------------------------------------


def _alias_patterns(dictionary: Sequence[ComponentEntry]) -> list[tuple[re.Pattern[str], ComponentEntry]]:
    patterns = []
    for entry in dictionary:
        for alias in entry.aliases:
            rx = re.compile(r"(?<!\w)" + re.escape(alias) + r"(?!\w)", re.IGNORECASE)
            patterns.append((rx, entry))
    return patterns


def recognize_components(paragraph: str, dictionary: Sequence[ComponentEntry]) -> list[Mention]:
    """Find all alias occurrences, longest match first, then leftmost."""
    candidates: list[tuple[int, int, ComponentEntry]] = []
    for rx, entry in _alias_patterns(dictionary):
        for m in rx.finditer(paragraph):
            candidates.append((m.start(), m.end(), entry))
    chosen: list[tuple[int, int, ComponentEntry]] = []
    for cand in sorted(candidates, key=lambda c: (-(c[1] - c[0]), c[0], c[2].id)):
        if all(cand[1] <= k[0] or cand[0] >= k[1] for k in chosen):
            chosen.append(cand)
    chosen.sort(key=lambda c: c[0])

    sentences = _sentence_starts(paragraph)
    tokens = _token_starts(paragraph)
    return [
        Mention(
            kind=COMPONENT,
            text=paragraph[s:e],
            start=s,
            end=e,
            sentence_index=_locate(sentences, s),
            token_index=_locate(tokens, s),
            component_id=entry.id,
            layer=entry.layer,
        )
        for s, e, entry in chosen
    ]


def _attached_version_re(dictionary: Sequence[ComponentEntry]) -> re.Pattern[str]:
    aliases = sorted({a for e in dictionary for a in e.aliases}, key=len, reverse=True)
    alt = "|".join(re.escape(a) for a in aliases)
    return re.compile(
        r"(?<!\w)(?P<comp>" + alt + r")(?P<sep>[-_ ])(?P<ver>[vV]?\d+)(?![\w]|\.\d|\.[xX])",
        re.IGNORECASE,
    )


def recognize_versions(paragraph: str, dictionary: Sequence[ComponentEntry]) -> list[Mention]:
    """Find version tokens under the three grammars.

    The component-attached grammar emits two mentions: the component and
    the bare-integer version, pre-bound to each other.  Spans never
    overlap; conflicts resolve longest-first, then by grammar order.
    """
    by_alias = alias_index(dictionary)
    candidates = [(s, e, raw, p, None) for s, e, raw, p in scan_version_tokens(paragraph)]
    attached: dict[int, tuple[int, int, ComponentEntry]] = {}
    if dictionary:
        for m in _attached_version_re(dictionary).finditer(paragraph):
            entry = by_alias[m.group("comp").lower()]
            vs, ve = m.span("ver")
            candidates.append((vs, ve, m.group("ver"), PATTERN_COMPONENT_ATTACHED, None))
            attached[vs] = (m.start("comp"), m.end("comp"), entry)

    kept = resolve_spans([(s, e, raw, p) for s, e, raw, p, _ in candidates])

    sentences = _sentence_starts(paragraph)
    tokens = _token_starts(paragraph)
    mentions: list[Mention] = []
    for s, e, raw, pattern in kept:
        version = normalize_version(raw)
        if pattern == PATTERN_COMPONENT_ATTACHED:
            cs, ce, entry = attached[s]
            mentions.append(
                Mention(
                    kind=COMPONENT,
                    text=paragraph[cs:ce],
                    start=cs,
                    end=ce,
                    sentence_index=_locate(sentences, cs),
                    token_index=_locate(tokens, cs),
                    component_id=entry.id,
                    layer=entry.layer,
                )
            )
            mentions.append(
                Mention(
                    kind=VERSION,
                    text=raw,
                    start=s,
                    end=e,
                    sentence_index=_locate(sentences, s),
                    token_index=_locate(tokens, s),
                    version=version,
                    pattern=pattern,
                    component_id=entry.id,
                    layer=entry.layer,
                    attached_start=cs,
                )
            )
        else:
            mentions.append(
                Mention(
                    kind=VERSION,
                    text=raw,
                    start=s,
                    end=e,
                    sentence_index=_locate(sentences, s),
                    token_index=_locate(tokens, s),
                    version=version,
                    pattern=pattern,
                )
            )
    mentions.sort(key=lambda m: (m.start, m.kind))
    return mentions


def analyze_paragraph(paragraph: str, dictionary: Sequence[ComponentEntry]) -> list[Mention]:
    """Merged component and version mentions for one paragraph.

    Component mentions found by both passes are deduplicated by span;
    version spans that collide with a component span are dropped.
    """
    components = {(m.start, m.end): m for m in recognize_components(paragraph, dictionary)}
    versions: list[Mention] = []
    for m in recognize_versions(paragraph, dictionary):
        if m.kind == COMPONENT:
            components.setdefault((m.start, m.end), m)
        else:
            versions.append(m)
    comp_spans = sorted(components)
    kept_versions = [
        v
        for v in versions
        if all(v.end <= s or v.start >= e for s, e in comp_spans)
    ]
    merged = list(components.values()) + kept_versions
    merged.sort(key=lambda m: (m.start, m.kind))
    return merged


# --------------------------------------------------------------------------
# Binding
# --------------------------------------------------------------------------


def bind_versions(
    mentions: Sequence[Mention],
    cost_fn: CostFunction = token_distance_cost,
) -> list[Binding]:
    """Bind component mentions to version mentions one-to-one.

    Pre-bound pairs from the component-attached grammar pass through
    unchanged and their mentions are withheld from matching.  Everything
    else goes through a stable matching where both sides prefer cheaper
    partners and ties go to the smaller start offset.  Unmatched mentions
    on either side are dropped.
    """
    bindings: list[Binding] = []
    consumed_component_starts: set[int] = set()
    free_versions: list[Mention] = []

    component_by_start = {m.start: m for m in mentions if m.kind == COMPONENT}
    for m in mentions:
        if m.kind != VERSION:
            continue
        if m.attached_start is not None and m.attached_start in component_by_start:
            comp = component_by_start[m.attached_start]
            consumed_component_starts.add(comp.start)
            bindings.append(
                Binding(
                    component=VersionedComponent(comp.component_id, comp.layer, m.version),
                    component_mention=comp,
                    version_mention=m,
                )
            )
        else:
            free_versions.append(m)

    free_components = [
        m for m in mentions if m.kind == COMPONENT and m.start not in consumed_component_starts
    ]
    if free_components and free_versions:
        costs = [[cost_fn(c, v) for v in free_versions] for c in free_components]
        pairs = stable_match(
            costs,
            left_ties=[c.start for c in free_components],
            right_ties=[v.start for v in free_versions],
        )
        for i, j in pairs:
            comp, ver = free_components[i], free_versions[j]
            bindings.append(
                Binding(
                    component=VersionedComponent(comp.component_id, comp.layer, ver.version),
                    component_mention=comp,
                    version_mention=ver,
                )
            )
    bindings.sort(key=lambda b: b.component_mention.start)
    return bindings
