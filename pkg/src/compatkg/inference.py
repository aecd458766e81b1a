"""Per-paragraph compatibility inference through a yes/no question oracle.

Each candidate paragraph and component pair becomes a question of the
form "Does A <va> work with B <vb>?" answered against the paragraph as
context.  Two oracles are provided: a rule-based cue-lexicon scorer and
a client for a remote question-answering service speaking a small JSON
contract ({context, question} in, {answer} out).  Oracle failures never
abort a pipeline run; they turn into "unknown" verdicts plus an entry in
the oracle's diagnostics.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from itertools import combinations
from typing import Protocol, Sequence

import httpx

from .corpus import Post
from .recognizer import VersionedComponent, split_sentences

__all__ = [
    "COMPATIBLE",
    "INCOMPATIBLE",
    "UNKNOWN",
    "CompatibilityQuestion",
    "Verdict",
    "Oracle",
    "HeuristicOracle",
    "RemoteOracle",
    "build_question",
    "heuristic_infer",
    "remote_infer",
    "infer_paragraph",
]

COMPATIBLE = "compatible"
INCOMPATIBLE = "incompatible"
UNKNOWN = "unknown"

INCOMPATIBILITY_CUES = (
    "doesn't work",
    "not compatible",
    "incompatible",
    "fails",
    "cannot",
    "error",
    "conflict",
    "downgrade",
)
COMPATIBILITY_CUES = (
    "works with",
    "compatible with",
    "supports",
    "solved",
    "fixed by",
)

IN_WINDOW_WEIGHT = 2


@dataclass(frozen=True)
class CompatibilityQuestion:
    """A yes/no question about one component pair, asked against a paragraph."""

    context: str
    question: str
    pair: tuple[VersionedComponent, VersionedComponent]


@dataclass(frozen=True)
class Verdict:
    """One oracle judgment for one component pair in one post."""

    label: str
    source: str
    post_id: int = 0
    votes: int = 0
    pair: tuple[VersionedComponent, VersionedComponent] | None = None


class Oracle(Protocol):
    source: str

    def infer(self, question: CompatibilityQuestion) -> Verdict: ...


def build_question(pair: tuple[VersionedComponent, VersionedComponent]) -> str:
    """Render the question template with canonical ids and normalized versions."""
    a, b = pair
    return (
        f"Does {a.component_id} {a.version.normalized} "
        f"work with {b.component_id} {b.version.normalized}?"
    )


def _cue_occurrences(text: str) -> list[tuple[int, int, str]]:
    """Non-overlapping cue spans, claimed left to right.

    Leftmost-first consumption keeps nested cues from cancelling each
    other: in "is not compatible with", the incompatibility cue starts
    first and claims the span, suppressing the embedded "compatible
    with".  At the same start offset the longer cue wins.
    """
    lowered = text.lower()
    candidates: list[tuple[int, int, str]] = []
    for polarity, cues in ((INCOMPATIBLE, INCOMPATIBILITY_CUES), (COMPATIBLE, COMPATIBILITY_CUES)):
        for cue in cues:
            for m in re.finditer(re.escape(cue), lowered):
                candidates.append((m.start(), m.end(), polarity))
    kept: list[tuple[int, int, str]] = []
    for cand in sorted(candidates, key=lambda c: (c[0], -(c[1] - c[0]))):
        if all(cand[1] <= k[0] or cand[0] >= k[1] for k in kept):
            kept.append(cand)
    return kept


def _mention_window(q: CompatibilityQuestion) -> tuple[int, int] | None:
    """Sentence-index range spanning the first occurrence of each component id."""
    lowered = q.context.lower()
    sentences = split_sentences(q.context)

    def sentence_of(offset: int) -> int:
        for i, (s, e) in enumerate(sentences):
            if s <= offset < e:
                return i
        return len(sentences) - 1

    indexes = []
    for vc in q.pair:
        pos = lowered.find(vc.component_id.lower())
        if pos < 0:
            return None
        indexes.append(sentence_of(pos))
    return (min(indexes), max(indexes))


def heuristic_infer(q: CompatibilityQuestion) -> Verdict:
    """Score compatibility and incompatibility cues in the context.

    Cues inside the sentence window that spans both component mentions
    weigh double.  The sign of (compatibility minus incompatibility)
    picks the label; a zero score is unknown.
    """
    window = _mention_window(q)
    sentences = split_sentences(q.context)
    score = 0
    for start, _end, polarity in _cue_occurrences(q.context):
        weight = 1
        if window is not None:
            sentence = next(
                (i for i, (s, e) in enumerate(sentences) if s <= start < e),
                len(sentences) - 1,
            )
            if window[0] <= sentence <= window[1]:
                weight = IN_WINDOW_WEIGHT
        score += weight if polarity == COMPATIBLE else -weight
    if score > 0:
        label = COMPATIBLE
    elif score < 0:
        label = INCOMPATIBLE
    else:
        label = UNKNOWN
    return Verdict(label=label, source="heuristic", pair=q.pair)


class HeuristicOracle:
    """Rule-based oracle; deterministic and dependency-free."""

    source = "heuristic"

    def infer(self, question: CompatibilityQuestion) -> Verdict:
        return heuristic_infer(question)


def remote_infer(
    q: CompatibilityQuestion,
    endpoint: str,
    timeout_ms: int = 5000,
    client: httpx.Client | None = None,
    diagnostics: list[str] | None = None,
) -> Verdict:
    """Ask a remote QA service; any failure becomes an unknown verdict.

    The wire contract is {"context": ..., "question": ...} in and
    {"answer": ...} out; an answer starting with yes/no (case-insensitive)
    maps to compatible/incompatible.
    """
    own_client = client is None
    if own_client:
        client = httpx.Client(timeout=timeout_ms / 1000.0)
    try:
        response = client.post(
            endpoint,
            json={"context": q.context, "question": q.question},
            timeout=timeout_ms / 1000.0,
        )
        response.raise_for_status()
        answer = str(response.json().get("answer", "")).strip().lower()
    except (httpx.HTTPError, ValueError) as exc:
        if diagnostics is not None:
            diagnostics.append(f"oracle request failed for {q.question!r}: {exc}")
        return Verdict(label=UNKNOWN, source="remote", pair=q.pair)
    finally:
        if own_client:
            client.close()
    if answer.startswith("yes"):
        label = COMPATIBLE
    elif answer.startswith("no"):
        label = INCOMPATIBLE
    else:
        label = UNKNOWN
        if diagnostics is not None:
            diagnostics.append(f"unparsable oracle answer {answer!r} for {q.question!r}")
    return Verdict(label=label, source="remote", pair=q.pair)


class RemoteOracle:
    """Client for a remote yes/no QA service."""

    source = "remote"

    def __init__(self, endpoint: str, timeout_ms: int = 5000, client: httpx.Client | None = None):
        self.endpoint = endpoint
        self.timeout_ms = timeout_ms
        self.client = client
        self.diagnostics: list[str] = []

    def infer(self, question: CompatibilityQuestion) -> Verdict:
        return remote_infer(
            question,
            self.endpoint,
            timeout_ms=self.timeout_ms,
            client=self.client,
            diagnostics=self.diagnostics,
        )


def infer_paragraph(
    post: Post,
    paragraph_index: int,
    bound: Sequence[VersionedComponent],
    oracle: Oracle,
) -> list[Verdict]:
    """One verdict per unordered pair of distinct components in the paragraph."""
    context = post.paragraphs[paragraph_index]
    unique = list(dict.fromkeys(bound))
    verdicts: list[Verdict] = []
    for a, b in combinations(unique, 2):
        if a.component_id == b.component_id:
            continue
        question = CompatibilityQuestion(context=context, question=build_question((a, b)), pair=(a, b))
        verdict = oracle.infer(question)
        verdicts.append(replace(verdict, post_id=post.id, votes=post.votes, pair=(a, b)))
    return verdicts
