"""Post corpus loading and compatibility-cue filtering.

The corpus is a line-oriented JSON file, one post per line.  Questions
carry tags; answers inherit their parent question's tags at load time so
later stages can treat tag context uniformly.  Filtering keeps questions
that are tagged with a deep-learning tag and contain at least one
compatibility cue, and accepted answers whose tag context passes and
where the answer or its parent question carries a cue.
"""

from __future__ import annotations

import json
import re
from collections.abc import Sequence
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import DataError, StorageError
from .recognizer import VersionedComponent

__all__ = [
    "Post",
    "FilterConfig",
    "CorpusLoadResult",
    "load_corpus",
    "load_filter_config",
    "filter_posts",
    "candidate_paragraphs",
]

QUESTION = "question"
ANSWER = "answer"


@dataclass(frozen=True)
class Post:
    """One Q&A unit: a question or an answer."""

    id: int
    title: str
    paragraphs: tuple[str, ...]
    tags: frozenset[str]
    votes: int
    kind: str
    accepted: bool = False
    parent_id: int | None = None


@dataclass(frozen=True)
class FilterConfig:
    """Deep-learning tags plus compiled compatibility cue patterns."""

    dl_tags: frozenset[str]
    cue_patterns: tuple[re.Pattern[str], ...]


@dataclass
class CorpusLoadResult:
    posts: list[Post]
    errors: list[str]


def _split_paragraphs(body: object) -> tuple[str, ...]:
    if isinstance(body, str):
        parts = re.split(r"\n\s*\n", body)
    elif isinstance(body, list):
        parts = [str(p) for p in body]
    else:
        raise ValueError("body must be a string or a list of strings")
    paragraphs = tuple(p.strip() for p in parts if p and p.strip())
    if not paragraphs:
        raise ValueError("post has no non-empty paragraphs")
    return paragraphs


def _parse_post(obj: dict) -> Post:
    post_id = obj["id"]
    if not isinstance(post_id, int) or isinstance(post_id, bool) or post_id <= 0:
        raise ValueError("id must be a positive integer")
    kind = obj["kind"]
    if kind not in (QUESTION, ANSWER):
        raise ValueError(f"kind must be 'question' or 'answer', got {kind!r}")
    accepted = bool(obj.get("accepted", False))
    parent_id = obj.get("parent_id")
    if kind == QUESTION:
        if accepted:
            raise ValueError("a question cannot be an accepted answer")
        if parent_id is not None:
            raise ValueError("a question cannot have a parent post")
    if parent_id is not None and (not isinstance(parent_id, int) or parent_id <= 0):
        raise ValueError("parent_id must be a positive integer")
    votes = obj.get("votes", 0)
    if not isinstance(votes, int) or isinstance(votes, bool):
        raise ValueError("votes must be an integer")
    return Post(
        id=post_id,
        title=str(obj.get("title", "")),
        paragraphs=_split_paragraphs(obj["body"]),
        tags=frozenset(str(t).lower() for t in obj.get("tags", [])),
        votes=votes,
        kind=kind,
        accepted=accepted,
        parent_id=parent_id,
    )


def load_corpus(path: str | Path) -> CorpusLoadResult:
    """Load a line-oriented post corpus.

    Malformed lines are skipped and reported with their line number;
    answers pick up their parent question's tags when the parent is in
    the same corpus.  An unreadable file is fatal.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise StorageError(f"cannot read corpus file {path}: {exc}") from None

    posts: list[Post] = []
    errors: list[str] = []
    seen_ids: set[int] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            if not isinstance(obj, dict):
                raise ValueError("record is not an object")
            post = _parse_post(obj)
            if post.id in seen_ids:
                raise ValueError(f"duplicate post id {post.id}")
        except (ValueError, KeyError) as exc:
            detail = f"missing field {exc}" if isinstance(exc, KeyError) else str(exc)
            errors.append(f"line {lineno}: {detail}")
            continue
        seen_ids.add(post.id)
        posts.append(post)

    questions = {p.id: p for p in posts if p.kind == QUESTION}
    posts = [
        replace(p, tags=p.tags | questions[p.parent_id].tags)
        if p.kind == ANSWER and p.parent_id in questions
        else p
        for p in posts
    ]
    return CorpusLoadResult(posts=posts, errors=errors)


def load_filter_config(path: str | Path) -> FilterConfig:
    """Load a filter config file: {"dl_tags": [...], "cue_patterns": [...]}."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise StorageError(f"cannot read filter config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: not valid JSON: {exc}") from None
    tags = frozenset(str(t).lower() for t in raw.get("dl_tags", []))
    patterns = []
    for pat in raw.get("cue_patterns", []):
        try:
            patterns.append(re.compile(pat, re.IGNORECASE))
        except re.error as exc:
            raise DataError(f"{path}: bad cue pattern {pat!r}: {exc}") from None
    if not tags or not patterns:
        raise DataError(f"{path}: dl_tags and cue_patterns must both be non-empty")
    return FilterConfig(dl_tags=tags, cue_patterns=tuple(patterns))


def _has_cue(paragraphs: Sequence[str], cfg: FilterConfig) -> bool:
    return any(rx.search(p) for p in paragraphs for rx in cfg.cue_patterns)


def filter_posts(posts: Sequence[Post], cfg: FilterConfig) -> list[Post]:
    """Keep posts likely to contain version-compatibility knowledge.

    A question survives when it has a deep-learning tag and a paragraph
    with a cue.  An answer survives when it is accepted, its tag context
    (own tags, already inherited from the parent at load time, or the
    parent present in the input) has a deep-learning tag, and the answer
    or its in-input parent has a cue.  Order is preserved and the filter
    is idempotent.
    """
    questions = {p.id: p for p in posts if p.kind == QUESTION}
    kept: list[Post] = []
    for post in posts:
        if post.kind == QUESTION:
            if post.tags & cfg.dl_tags and _has_cue(post.paragraphs, cfg):
                kept.append(post)
            continue
        if not post.accepted:
            continue
        parent = questions.get(post.parent_id) if post.parent_id is not None else None
        tag_context = post.tags | (parent.tags if parent else frozenset())
        if not tag_context & cfg.dl_tags:
            continue
        if _has_cue(post.paragraphs, cfg) or (parent and _has_cue(parent.paragraphs, cfg)):
            kept.append(post)
    return kept


def candidate_paragraphs(
    post: Post, bound_per_paragraph: Sequence[Sequence[VersionedComponent]]
) -> list[int]:
    """Indexes of paragraphs whose bound mentions span two distinct components."""
    if len(bound_per_paragraph) != len(post.paragraphs):
        raise ValueError("one binding list per paragraph required")
    selected = []
    for i, bound in enumerate(bound_per_paragraph):
        if len({vc.component_id for vc in bound}) >= 2:
            selected.append(i)
    return selected
