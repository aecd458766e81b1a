"""Version token grammar: scanning, normalization, and prefix matching.

Version tokens come in three shapes: dotted release numbers (``2.4.3``,
``v1.13.5``), wildcard forms with a trailing ``.x`` (``3.x``, ``v2.2.x``),
and bare integers attached to a component name (``cuda-8``, ``python v3``).
The first two are handled here; the component-attached form needs a
component dictionary and lives in :mod:`compatkg.recognizer`.

Normalization strips the optional ``v`` prefix, parses segments as
integers (dropping leading zeros), and lowercases a trailing ``X``.  Two
versions are equal when their segments and wildcard flag agree; the raw
token is kept only as provenance.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = [
    "Version",
    "VersionSyntaxError",
    "normalize_version",
    "scan_version_tokens",
    "versions_match",
    "shared_prefix_len",
]

# A version token must not butt up against a word character or a dot on
# the left (rejects "libcublas.so.10.0"), and must not be followed by a
# word character, another ".<digit>" segment, or a ".x" suffix on the
# right (rejects 4-segment strings like "10.1.0.105" outright instead of
# truncating them).
_LEFT_GUARD = r"(?<![\w.])"
_RIGHT_GUARD = r"(?![\w]|\.\d|\.[xX])"

# Dotted releases with two or three numeric segments: 3.7, 2.4.3, v1.13.5.
FULL_VERSION_RE = re.compile(_LEFT_GUARD + r"[vV]?\d+(?:\.\d+){1,2}" + _RIGHT_GUARD)

# Wildcard forms; the ".x" suffix is mandatory so bare integers are not
# swallowed (those are only versions when attached to a component name).
WILDCARD_VERSION_RE = re.compile(_LEFT_GUARD + r"[vV]?\d+(?:\.\d+)?\.[xX]" + _RIGHT_GUARD)

_NORMALIZE_RE = re.compile(r"^[vV]?(\d+(?:\.\d+){0,2})(\.[xX])?$")

PATTERN_FULL = 1
PATTERN_WILDCARD = 2
PATTERN_COMPONENT_ATTACHED = 3


class VersionSyntaxError(ValueError):
    """Raised when a token does not match any version grammar."""


@dataclass(frozen=True, eq=False)
class Version:
    """A parsed version token.

    Identity (equality and hashing) is the normalized form: the integer
    segments plus the wildcard flag.  ``raw`` and ``had_v_prefix`` record
    how the token appeared in text and do not affect identity.
    """

    raw: str
    segments: tuple[int, ...]
    wildcard: bool = False
    had_v_prefix: bool = False

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValueError("version needs at least one segment")
        if len(self.segments) > 3:
            raise ValueError("version has at most three segments")
        if self.wildcard and len(self.segments) > 2:
            raise ValueError("wildcard versions have at most two numeric segments")
        if any(s < 0 for s in self.segments):
            raise ValueError("version segments are non-negative")

    @property
    def normalized(self) -> str:
        base = ".".join(str(s) for s in self.segments)
        return base + ".x" if self.wildcard else base

    @property
    def sort_key(self) -> tuple[tuple[int, ...], bool]:
        return (self.segments, self.wildcard)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Version):
            return NotImplemented
        return self.segments == other.segments and self.wildcard == other.wildcard

    def __hash__(self) -> int:
        return hash((self.segments, self.wildcard))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Version({self.normalized!r})"


def normalize_version(raw: str) -> Version:
    """Parse a raw token into a :class:`Version`.

    Raises :class:`VersionSyntaxError` when the token is outside the
    grammar; callers are expected to hand in tokens produced by the
    scanners, so that is a caller bug.
    """
    m = _NORMALIZE_RE.match(raw.strip())
    if m is None:
        raise VersionSyntaxError(f"not a version token: {raw!r}")
    segments = tuple(int(part) for part in m.group(1).split("."))
    wildcard = m.group(2) is not None
    if wildcard and len(segments) > 2:
        raise VersionSyntaxError(f"wildcard version with too many segments: {raw!r}")
    return Version(
        raw=raw,
        segments=segments,
        wildcard=wildcard,
        had_v_prefix=raw.lstrip()[:1] in ("v", "V"),
    )


def scan_version_tokens(text: str) -> list[tuple[int, int, str, int]]:
    """Find dotted and wildcard version tokens in ``text``.

    Returns ``(start, end, raw, pattern)`` tuples, non-overlapping and
    sorted by start offset.  Overlaps between the two grammars are
    resolved longest-match-first, then by grammar order.
    """
    candidates: list[tuple[int, int, str, int]] = []
    for pattern_no, rx in ((PATTERN_FULL, FULL_VERSION_RE), (PATTERN_WILDCARD, WILDCARD_VERSION_RE)):
        for m in rx.finditer(text):
            candidates.append((m.start(), m.end(), m.group(0), pattern_no))
    return resolve_spans(candidates)


def resolve_spans(candidates: list[tuple[int, int, str, int]]) -> list[tuple[int, int, str, int]]:
    """Drop overlapping candidate spans, preferring longer then earlier ones."""
    chosen: list[tuple[int, int, str, int]] = []
    for cand in sorted(candidates, key=lambda c: (-(c[1] - c[0]), c[0], c[3])):
        if all(cand[1] <= kept[0] or cand[0] >= kept[1] for kept in chosen):
            chosen.append(cand)
    chosen.sort(key=lambda c: c[0])
    return chosen


def versions_match(a: Version, b: Version) -> bool:
    """Prefix subsumption in either direction.

    ``3.x`` matches ``3.7.2`` and ``1.13`` matches ``1.13.1``; ``3.5``
    does not match ``3.7.2``.  The wildcard flag carries no extra meaning
    beyond its (shorter) segment list.
    """
    k = min(len(a.segments), len(b.segments))
    return a.segments[:k] == b.segments[:k]


def shared_prefix_len(a: Version, b: Version) -> int:
    """Number of leading segments the two versions agree on."""
    n = 0
    for x, y in zip(a.segments, b.segments):
        if x != y:
            break
        n += 1
    return n
