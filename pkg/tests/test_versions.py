"""Version grammar: scanning, normalization, prefix matching."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from compatkg.versions import (
    Version,
    VersionSyntaxError,
    normalize_version,
    scan_version_tokens,
    shared_prefix_len,
    versions_match,
)


class TestScan:
    @pytest.mark.parametrize(
        "token,pattern",
        [
            ("3.7", 1),
            ("2.4.3", 1),
            ("v2.3", 1),
            ("v1.13.5", 1),
            ("3.x", 2),
            ("1.3.x", 2),
            ("v1.x", 2),
            ("v2.2.x", 2),
        ],
    )
    def test_dotted_and_wildcard_tokens(self, token, pattern):
        found = scan_version_tokens(f"see {token} here")
        assert [(raw, pat) for _s, _e, raw, pat in found] == [(token, pattern)]

    def test_bare_integer_is_not_a_version(self):
        assert scan_version_tokens("there are 3 options") == []

    def test_shared_object_names_are_skipped(self):
        text = "ImportError: libcublas.so.10.0: cannot open shared object file"
        assert scan_version_tokens(text) == []

    def test_four_segment_strings_are_skipped(self):
        assert scan_version_tokens("cuda provides libcublas.so.10.1.0.105.") == []
        assert scan_version_tokens("address 10.1.0.105 responded") == []

    def test_sentence_final_dot_does_not_block(self):
        found = scan_version_tokens("it broke on 10.1. Then I gave up.")
        assert [raw for _s, _e, raw, _p in found] == ["10.1"]

    def test_no_overlapping_spans(self):
        found = scan_version_tokens("v2.2.x then 1.3.x then 2.4.3")
        spans = [(s, e) for s, e, _raw, _p in found]
        assert spans == sorted(spans)
        for (s1, e1), (s2, e2) in zip(spans, spans[1:]):
            assert e1 <= s2


class TestNormalize:
    def test_v_prefix_stripped(self):
        v = normalize_version("v1.13.5")
        assert v.segments == (1, 13, 5)
        assert v.normalized == "1.13.5"
        assert v.had_v_prefix

    def test_wildcard(self):
        v = normalize_version("3.x")
        assert v.segments == (3,)
        assert v.wildcard
        assert v.normalized == "3.x"

    def test_uppercase_x_lowered(self):
        assert normalize_version("v2.2.X").normalized == "2.2.x"

    def test_leading_zeros_dropped_raw_retained(self):
        v = normalize_version("007.1")
        assert v.segments == (7, 1)
        assert v.normalized == "7.1"
        assert v.raw == "007.1"

    def test_rejects_garbage(self):
        for bad in ("", "x", "1.2.3.4", "v", "3.x.1", "1.2.3.x"):
            with pytest.raises(VersionSyntaxError):
                normalize_version(bad)

    def test_normalization_idempotent_on_normalized_strings(self):
        for raw in ("v1.13.5", "3.X", "007.1", "v2.2.x", "10"):
            once = normalize_version(raw)
            twice = normalize_version(once.normalized)
            assert twice == once
            assert twice.normalized == once.normalized


@st.composite
def versions(draw):
    wildcard = draw(st.booleans())
    n = draw(st.integers(1, 2 if wildcard else 3))
    segments = tuple(draw(st.integers(0, 99)) for _ in range(n))
    text = ".".join(str(s) for s in segments) + (".x" if wildcard else "")
    if draw(st.booleans()):
        text = "v" + text
    return text


@given(versions())
def test_parse_render_round_trip(raw):
    v = normalize_version(raw)
    assert normalize_version(v.normalized) == v


@given(versions(), versions())
def test_match_is_symmetric(raw_a, raw_b):
    a, b = normalize_version(raw_a), normalize_version(raw_b)
    assert versions_match(a, b) == versions_match(b, a)
    assert shared_prefix_len(a, b) == shared_prefix_len(b, a)


class TestMatching:
    def test_wildcard_subsumes(self):
        assert versions_match(normalize_version("3.x"), normalize_version("3.7.2"))

    def test_prefix_subsumes_both_directions(self):
        assert versions_match(normalize_version("1.13"), normalize_version("1.13.1"))
        assert versions_match(normalize_version("1.13.1"), normalize_version("1.13"))

    def test_diverging_versions_do_not_match(self):
        assert not versions_match(normalize_version("3.5"), normalize_version("3.7.2"))

    def test_equality_ignores_provenance(self):
        assert normalize_version("v1.13") == normalize_version("1.13")
        assert normalize_version("1.13") != normalize_version("1.13.x")

    def test_shared_prefix_len(self):
        assert shared_prefix_len(normalize_version("1.13.1"), normalize_version("1.13.5")) == 2
        assert shared_prefix_len(normalize_version("2.0"), normalize_version("1.13")) == 0


def test_version_invariants_enforced():
    with pytest.raises(ValueError):
        Version(raw="", segments=())
    with pytest.raises(ValueError):
        Version(raw="1.2.3.x", segments=(1, 2, 3), wildcard=True)
