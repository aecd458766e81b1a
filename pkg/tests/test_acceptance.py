"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines alongside the pytest report.
"""

import json
import random
import time
from contextlib import contextmanager
from itertools import permutations

import pytest
from fastapi.testclient import TestClient

from compatkg import fixtures
from compatkg.checker import (
    check_environment,
    evaluate_metrics,
    f1_score,
    issue_pair_key,
    parse_environment,
    unchecked_pairs,
)
from compatkg.cli import main
from compatkg.graph import confidence_score, load_graph, save_graph
from compatkg.inference import (
    COMPATIBLE,
    INCOMPATIBLE,
    CompatibilityQuestion,
    build_question,
    heuristic_infer,
)
from compatkg.pipeline import PipelineConfig, run_pipeline
from compatkg.query import PAIR, VERSIONED_COMPONENT, COMPONENT_ONLY, parse_query, resolve
from compatkg.recognizer import (
    VersionedComponent,
    analyze_paragraph,
    bind_versions,
    recognize_versions,
    token_distance_cost,
)
from compatkg.service import ServiceConfig, create_app, load_component_stats
from compatkg.versions import normalize_version, scan_version_tokens

DICT = fixtures.default_dictionary()


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"[acceptance] {name}: FAIL")
        raise
    print(f"[acceptance] {name}: PASS")


@pytest.fixture(scope="module")
def pipeline_graph(tmp_path_factory):
    """The shipped synthetic corpus run through the full pipeline, once per
    parallelism level."""
    root = tmp_path_factory.mktemp("acceptance")
    outputs = {}
    for parallelism in (1, 8):
        out = root / f"graph_p{parallelism}.json"
        run_pipeline(
            PipelineConfig(
                corpus_path=fixtures.synthetic_corpus_path(),
                filters_path=fixtures.data_path("filters.json"),
                dict_path=fixtures.data_path("components.json"),
                out_graph=out,
                parallelism=parallelism,
            )
        )
        outputs[parallelism] = out
    return outputs


def test_version_grammar_conformance():
    with criterion("version-grammar conformance"):
        start = time.perf_counter()
        for token, pattern in (
            ("3.7", 1), ("2.4.3", 1), ("v2.3", 1), ("v1.13.5", 1),
            ("3.x", 2), ("1.3.x", 2), ("v1.x", 2), ("v2.2.x", 2),
        ):
            found = scan_version_tokens(f"pin {token} today")
            assert [(raw, pat) for _s, _e, raw, pat in found] == [(token, pattern)], token
        for text, comp, digits in (
            ("python v3", "python", "v3"),
            ("cuda-8", "cuda", "8"),
            ("Windows 64", "windows", "64"),
        ):
            mentions = recognize_versions(text, DICT)
            version = next(m for m in mentions if m.kind == "version")
            component = next(m for m in mentions if m.kind == "component")
            assert version.pattern == 3 and version.text == digits, text
            assert component.component_id == comp, text
        assert scan_version_tokens("there are 3 ways") == []
        assert recognize_versions("there are 3 ways", DICT) == []
        elapsed = time.perf_counter() - start
        assert elapsed < 1.0, f"took {elapsed:.3f}s"


def test_confidence_algebra_exhaustive():
    with criterion("confidence algebra (exhaustive 0..50)"):
        start = time.perf_counter()
        for c in range(51):
            for i in range(51):
                if c + i < 1:
                    continue
                value = confidence_score(c, i)
                assert -1.0 <= value <= 1.0
                assert confidence_score(i, c) == -value
                assert (value > 0) == (c > i)
                assert (value < 0) == (c < i)
                assert (value == 0) == (c == i)  # the discard rule
        assert confidence_score(2, 2) == 0.0
        elapsed = time.perf_counter() - start
        assert elapsed < 1.0, f"took {elapsed:.3f}s"


def test_f1_reproduction():
    with criterion("F1 reproduction from published precision/recall"):
        assert f1_score(0.917, 0.647) == pytest.approx(0.759, abs=1e-3)
        m = evaluate_metrics(
            [(("a", "1"), ("b", "2"))], [(("a", "1"), ("b", "2"))]
        )
        assert m.f1 == 1.0


# --------------------------------------------------------------------------
# Stable-matching oracle equivalence
# --------------------------------------------------------------------------

COMPONENT_POOL = ["tensorflow", "pytorch", "numpy", "cuda", "cudnn", "python", "keras", "ubuntu"]
VERSION_POOL = ["1.13", "10.1", "2.4.3", "3.6.8", "9.0", "1.19", "2.2.x", "16.04", "7.6", "11.0"]
FILLER = ["the", "build", "after", "broke", "on", "this", "box", "setup", "wheel", "again", "badly"]


def random_paragraph(rng):
    """SO-flavoured filler with component/version mentions scattered in.

    Dotted versions only, so every binding goes through the matcher (the
    component-attached grammar pre-binds and is exercised elsewhere).
    """
    words, n_comp, n_ver = [], 0, 0
    for _ in range(rng.randint(1, 3)):  # sentences
        for _ in range(rng.randint(1, 3)):  # snippets
            words.extend(rng.choices(FILLER, k=rng.randint(0, 3)))
            roll = rng.random()
            if roll < 0.45 and n_comp < 4 and n_ver < 4:
                words.append(rng.choice(COMPONENT_POOL))
                words.append(rng.choice(VERSION_POOL))
                n_comp, n_ver = n_comp + 1, n_ver + 1
            elif roll < 0.65 and n_comp < 4:
                words.append(rng.choice(COMPONENT_POOL))
                n_comp += 1
            elif roll < 0.85 and n_ver < 4:
                words.append(rng.choice(VERSION_POOL))
                n_ver += 1
            elif n_comp < 4 and n_ver < 4:
                words.append(rng.choice(VERSION_POOL))
                words.extend(rng.choices(FILLER, k=rng.randint(1, 2)))
                words.append(rng.choice(COMPONENT_POOL))
                n_comp, n_ver = n_comp + 1, n_ver + 1
        words.append(rng.choice(FILLER) + ".")
    return " ".join(words)


def enumerate_assignments(n_left, n_right):
    k = min(n_left, n_right)
    seen = set()
    for ls in permutations(range(n_left), k):
        for rs in permutations(range(n_right), k):
            m = frozenset(zip(ls, rs))
            if m not in seen:
                seen.add(m)
                yield m


def is_stable(matching, costs, n_left, n_right):
    partner_left = {i: j for i, j in matching}
    partner_right = {j: i for i, j in matching}
    for i in range(n_left):
        for j in range(n_right):
            if (i, j) in matching:
                continue
            cur_j = partner_left.get(i)
            cur_i = partner_right.get(j)
            if (cur_j is None or costs[i][j] < costs[i][cur_j]) and (
                cur_i is None or costs[i][j] < costs[cur_i][j]
            ):
                return False
    return True


def test_stable_matching_oracle_equivalence():
    with criterion("stable-matching oracle equivalence (>=200 paragraphs)"):
        start = time.perf_counter()
        rng = random.Random(0)
        n_paragraphs = equality_checked = mincost_agree = mincost_total = 0
        while n_paragraphs < 220:
            mentions = analyze_paragraph(random_paragraph(rng), DICT)
            comps = [m for m in mentions if m.kind == "component"]
            vers = [m for m in mentions if m.kind == "version"]
            if not comps or not vers or len(comps) > 4 or len(vers) > 4:
                continue
            n_paragraphs += 1
            costs = [[token_distance_cost(c, v) for v in vers] for c in comps]
            comp_idx = {m.start: i for i, m in enumerate(comps)}
            ver_idx = {m.start: j for j, m in enumerate(vers)}
            got = frozenset(
                (comp_idx[b.component_mention.start], ver_idx[b.version_mention.start])
                for b in bind_versions(mentions)
            )

            # The stability predicate must hold on every instance.
            assert is_stable(got, costs, len(comps), len(vers))

            # Brute-force oracle: the stable assignments among all maximal
            # injective maps; when that optimum is unique, exact equality.
            assignments = list(enumerate_assignments(len(comps), len(vers)))
            stable_set = [m for m in assignments if is_stable(m, costs, len(comps), len(vers))]
            assert got in stable_set
            if len(stable_set) == 1:
                equality_checked += 1
                assert got == stable_set[0]

            # Diagnostic only: agreement with the global minimum-cost
            # assignment (not asserted; greedy-stable and min-total-cost
            # provably diverge on crossing layouts).
            scored = sorted(
                (sum(costs[i][j] for i, j in m), m) for m in assignments
            )
            if len(scored) == 1 or scored[0][0] < scored[1][0]:
                mincost_total += 1
                if got == scored[0][1]:
                    mincost_agree += 1
        elapsed = time.perf_counter() - start
        assert n_paragraphs >= 200
        assert equality_checked >= 100, "uniqueness clause must actually bite"
        print(
            f"[acceptance]   ({n_paragraphs} paragraphs, {equality_checked} unique-optimum "
            f"equality checks, global-min-cost agreement {mincost_agree}/{mincost_total})"
        )
        assert elapsed < 10.0, f"took {elapsed:.3f}s"


def test_end_to_end_determinism_and_recovery(pipeline_graph):
    with criterion("end-to-end determinism and planted-relation recovery"):
        start = time.perf_counter()
        blobs = {p: path.read_bytes() for p, path in pipeline_graph.items()}
        assert blobs[1] == blobs[8], "parallelism must not change the output"

        rerun_truth = {
            ((t["a"][0], t["a"][1]), (t["b"][0], t["b"][1])): (
                t["n_compatible"], t["n_incompatible"]
            )
            for t in fixtures.synthetic_corpus_truth()
        }
        g = load_graph(pipeline_graph[1])
        got = {(r.a.key, r.b.key): (r.n_compatible, r.n_incompatible) for r in g.links}
        assert got == rerun_truth, "planted relation set must be recovered exactly"
        elapsed = time.perf_counter() - start
        assert elapsed < 30.0, f"took {elapsed:.3f}s"


SO_EXCERPT = (
    "tensorflow 1.13 doesn't work with cuda 10.1 because of the following: "
    '"ImportError: libcublas.so.10.0: cannot open shared object file: No such file or '
    'directory". tensorflow is looking for libcublas.so.10.0 whereas cuda provides '
    "libcublas.so.10.1.0.105."
)


def test_known_so_excerpt_case(pipeline_graph):
    with criterion("known SO-excerpt paragraph infers incompatible and lands in the graph"):
        bound = [b.component for b in bind_versions(analyze_paragraph(SO_EXCERPT, DICT))]
        as_keys = {(vc.component_id, vc.version.normalized) for vc in bound}
        assert as_keys == {("tensorflow", "1.13"), ("cuda", "10.1")}

        pair = tuple(sorted(bound, key=lambda vc: vc.component_id != "tensorflow"))
        question = CompatibilityQuestion(
            context=SO_EXCERPT, question=build_question(pair), pair=pair
        )
        assert question.question == "Does tensorflow 1.13 work with cuda 10.1?"
        assert heuristic_infer(question).label == INCOMPATIBLE

        g = load_graph(pipeline_graph[1])
        rel = g.relation_between(
            VersionedComponent("tensorflow", "library", normalize_version("1.13")),
            VersionedComponent("cuda", "driver", normalize_version("10.1")),
        )
        assert rel is not None
        assert rel.confidence < 0


def test_checker_benchmark():
    with criterion("checker benchmark precision = recall = 1.0, unknown never flagged"):
        g = load_graph(fixtures.benchmark_graph_path())
        truth = fixtures.benchmark_truth()
        reported, expected = [], []
        n_same_layer = n_cross_layer = 0
        assert len(fixtures.benchmark_environments()) >= 10
        for env_path in fixtures.benchmark_environments():
            env = parse_environment(env_path, DICT).spec
            issues = check_environment(g, env)
            unknown = {
                (a.key, b.key) for a, b in unchecked_pairs(g, env)
            }
            for issue in issues:
                key = issue_pair_key(issue)
                assert key not in unknown, "unknown pairs must never be flagged"
                assert issue.confidence < 0
                assert issue.evidence
                reported.append((env_path.name, key))
                if issue.pair[0].layer == issue.pair[1].layer:
                    n_same_layer += 1
                else:
                    n_cross_layer += 1
            for pair in truth[env_path.name]:
                expected.append((env_path.name, ((tuple(pair[0])), tuple(pair[1]))))
        metrics = evaluate_metrics(reported, expected)
        assert metrics.precision == 1.0
        assert metrics.recall == 1.0
        assert n_same_layer >= 1 and n_cross_layer >= 1
        print(
            f"[acceptance]   ({len(expected)} planted issues: "
            f"{n_same_layer} same-layer, {n_cross_layer} cross-layer)"
        )


def test_query_routing(pipeline_graph):
    with criterion("query routing across the three search forms"):
        g = load_graph(pipeline_graph[1])
        q1 = parse_query("Does Python 3.6.8 work with Ubuntu 16.04.6?", DICT)
        q2 = parse_query("Python 3.5", DICT)
        q3 = parse_query("tensorflow", DICT)
        assert q1.kind == PAIR
        assert q2.kind == VERSIONED_COMPONENT
        assert q3.kind == COMPONENT_ONLY

        lhs = resolve(g, parse_query("Does Python 3.6.8 work with Ubuntu 16.04.6?", DICT))
        rhs = resolve(g, parse_query("Does Ubuntu 16.04.6 work with Python 3.6.8?", DICT))
        assert lhs.verdict == rhs.verdict == COMPATIBLE
        assert lhs.subgraph == rhs.subgraph
        assert lhs.confidence == rhs.confidence


def test_graph_round_trip_and_api_cli_agreement(pipeline_graph, tmp_path, capsys):
    with criterion("graph round-trip byte-identical; API equals CLI"):
        original = pipeline_graph[1]
        resaved = tmp_path / "resaved.json"
        save_graph(load_graph(original), resaved)
        assert original.read_bytes() == resaved.read_bytes()

        g = load_graph(original)
        app = create_app(
            g, DICT, load_component_stats(fixtures.default_stats_path()), ServiceConfig()
        )
        client = TestClient(app)
        for text in (
            "Does tensorflow 1.13 work with cuda 10.1?",
            "Python 3.5",
            "tensorflow",
        ):
            exit_code = main(["query", "--graph", str(original), "--format", "machine", text])
            assert exit_code == 0
            cli_out = capsys.readouterr().out.strip()
            api_out = client.get("/api/query", params={"q": text}).content.decode()
            assert json.loads(cli_out) == json.loads(api_out)
            assert cli_out == api_out
