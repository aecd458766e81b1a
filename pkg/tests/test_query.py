"""Query parsing, resolution, and per-layer statistics."""

import pytest

from compatkg import fixtures
from compatkg.errors import UnrecognizedQueryError
from compatkg.graph import aggregate, build_graph
from compatkg.inference import COMPATIBLE, INCOMPATIBLE, Verdict
from compatkg.query import (
    COMPONENT_ONLY,
    PAIR,
    VERSIONED_COMPONENT,
    parse_query,
    query_payload,
    resolve,
    top_components,
)
from compatkg.recognizer import LAYERS, VersionedComponent
from compatkg.versions import normalize_version

DICT = fixtures.default_dictionary()

LAYER = {e.id: e.layer for e in DICT}


def vc(comp, ver):
    return VersionedComponent(comp, LAYER[comp], normalize_version(ver))


def verdict(a, b, label, post_id, votes=0):
    return Verdict(label=label, source="heuristic", post_id=post_id, votes=votes, pair=(a, b))


def make_graph():
    return build_graph(
        aggregate(
            [
                verdict(vc("tensorflow", "1.13"), vc("cuda", "10.1"), INCOMPATIBLE, 1, 9),
                verdict(vc("tensorflow", "1.13"), vc("python", "3.5.2"), INCOMPATIBLE, 2, 3),
                verdict(vc("tensorflow", "2.4"), vc("cuda", "11.0"), COMPATIBLE, 3, 1),
                verdict(vc("tensorflow", "1.4"), vc("numpy", "1.19"), COMPATIBLE, 4, 2),
                verdict(vc("python", "3.6.8"), vc("ubuntu", "16.04.6"), COMPATIBLE, 5, 4),
            ]
        )
    )


class TestParse:
    def test_pair_query(self):
        q = parse_query("Does Python 3.6.8 work with Ubuntu 16.04.6?", DICT)
        assert q.kind == PAIR
        assert q.first[0] == "python"
        assert q.first[1].normalized == "3.6.8"
        assert q.second[0] == "ubuntu"
        assert q.second[1].normalized == "16.4.6"

    def test_versioned_component_query(self):
        q = parse_query("Python 3.5", DICT)
        assert q.kind == VERSIONED_COMPONENT
        assert q.first == ("python", normalize_version("3.5"))

    def test_component_query(self):
        q = parse_query("tensorflow", DICT)
        assert q.kind == COMPONENT_ONLY
        assert q.first == ("tensorflow", None)

    def test_unrecognized_query_lists_known_components(self):
        with pytest.raises(UnrecognizedQueryError) as exc:
            parse_query("is leftpad 1.0 fine?", DICT)
        assert "tensorflow" in str(exc.value)

    def test_total_over_weird_inputs(self):
        for text in ("", "???", "42", "v1.2.3", "does x work with y"):
            try:
                parse_query(text, DICT)
            except UnrecognizedQueryError:
                pass

    def test_precedence_versioned_over_component(self):
        q = parse_query("tensorflow 1.13 with some cuda", DICT)
        assert q.kind == VERSIONED_COMPONENT
        assert q.first[0] == "tensorflow"


class TestResolve:
    def test_pair_with_stored_relation(self):
        g = make_graph()
        result = resolve(g, parse_query("does tensorflow 1.13 work with cuda 10.1", DICT))
        assert result.verdict == INCOMPATIBLE
        assert result.confidence == -1.0
        assert len(result.subgraph.nodes) == 2
        assert len(result.subgraph.links) == 1

    def test_pair_symmetry(self):
        g = make_graph()
        lhs = resolve(g, parse_query("does tensorflow 1.13 work with cuda 10.1", DICT))
        rhs = resolve(g, parse_query("does cuda 10.1 work with tensorflow 1.13", DICT))
        assert lhs.verdict == rhs.verdict
        assert lhs.confidence == rhs.confidence
        assert lhs.subgraph == rhs.subgraph

    def test_pair_absent_relation_is_unknown(self):
        g = make_graph()
        result = resolve(g, parse_query("does numpy 1.19 work with cuda 10.1", DICT))
        assert result.verdict == "unknown"
        assert result.confidence is None
        assert result.subgraph.links == ()

    def test_versioned_component_prefix_match(self):
        g = make_graph()
        result = resolve(g, parse_query("Python 3.5", DICT))
        focus = result.subgraph.focus
        assert [n.version.normalized for n in focus] == ["3.5.2"]
        assert {n.component_id for n in result.subgraph.nodes} == {"python", "tensorflow"}
        assert len(result.subgraph.links) == 1

    def test_component_query_returns_all_versions(self):
        g = make_graph()
        result = resolve(g, parse_query("tensorflow", DICT))
        versions = {n.version.normalized for n in result.subgraph.focus}
        assert versions == {"1.13", "2.4", "1.4"}
        assert len(result.subgraph.links) == 4

    def test_absent_component_is_empty_not_error(self):
        g = make_graph()
        result = resolve(g, parse_query("keras", DICT))
        assert result.subgraph.nodes == ()
        assert "no knowledge" in result.message

    def test_closure_invariant(self):
        g = make_graph()
        for text in ("tensorflow", "Python 3.5", "does tensorflow 1.13 work with cuda 10.1",
                     "cuda", "numpy 1.19"):
            sub = resolve(g, parse_query(text, DICT)).subgraph
            nodes = set(sub.nodes)
            for rel in sub.links:
                assert rel.a in nodes and rel.b in nodes
            assert set(sub.focus) <= nodes

    def test_exact_match_preferred_over_prefix(self):
        g = build_graph(
            aggregate(
                [
                    verdict(vc("tensorflow", "1.13"), vc("cuda", "10.1"), INCOMPATIBLE, 1),
                    verdict(vc("tensorflow", "1.13.1"), vc("cuda", "10.1"), COMPATIBLE, 2),
                ]
            )
        )
        result = resolve(g, parse_query("tensorflow 1.13", DICT))
        assert [n.version.normalized for n in result.subgraph.focus] == ["1.13"]


class TestTopComponents:
    def test_single_relation_graph(self):
        g = build_graph(
            aggregate([verdict(vc("tensorflow", "1.13"), vc("cuda", "10.1"), INCOMPATIBLE, 1)])
        )
        stats = {s.layer: s.top for s in top_components(g)}
        assert stats["library"] == (("tensorflow", 1),)
        assert stats["driver"] == (("cuda", 1),)
        assert stats["runtime"] == ()

    def test_empty_graph(self):
        g = build_graph([])
        stats = top_components(g)
        assert [s.layer for s in stats] == list(LAYERS)
        assert all(s.top == () for s in stats)

    def test_relations_counted_once_per_component_across_versions(self):
        g = make_graph()
        stats = {s.layer: dict(s.top) for s in top_components(g)}
        # tensorflow appears with three versions, one relation each
        assert stats["library"]["tensorflow"] == 4
        assert stats["driver"]["cuda"] == 2

    def test_k_limits_and_ordering(self):
        g = make_graph()
        (library,) = [s for s in top_components(g, k=1) if s.layer == "library"]
        assert library.top == (("tensorflow", 4),)


def test_query_payload_shape():
    g = make_graph()
    payload = query_payload(g, "does tensorflow 1.13 work with cuda 10.1", DICT)
    assert payload["schema_version"] == 1
    assert payload["query"]["kind"] == PAIR
    assert payload["verdict"] == INCOMPATIBLE
    assert payload["subgraph"]["links"][0]["evidence"]
    assert {n["component"] for n in payload["subgraph"]["nodes"]} == {"tensorflow", "cuda"}


class TestRemoteQueryParser:
    def make(self, handler):
        import httpx

        from compatkg.query import RemoteQueryParser

        return RemoteQueryParser(
            "http://parser", client=httpx.Client(transport=httpx.MockTransport(handler))
        )

    def test_answer_parsed_locally(self):
        import httpx

        parser = self.make(
            lambda request: httpx.Response(200, json={"answer": "python 3.6.8 and ubuntu 16.04.6"})
        )
        q = parser.parse("hey, will py 3.6.8 run on xenial?", DICT)
        assert q.kind == PAIR
        assert q.raw == "hey, will py 3.6.8 run on xenial?"

    def test_failure_falls_back_to_local_parsing(self):
        import httpx

        def handler(request):
            raise httpx.ConnectError("refused")

        parser = self.make(handler)
        q = parser.parse("Python 3.5", DICT)
        assert q.kind == VERSIONED_COMPONENT
        assert parser.diagnostics

    def test_useless_answer_falls_back(self):
        import httpx

        parser = self.make(lambda request: httpx.Response(200, json={"answer": "gibberish"}))
        q = parser.parse("tensorflow", DICT)
        assert q.kind == COMPONENT_ONLY
        assert parser.diagnostics
