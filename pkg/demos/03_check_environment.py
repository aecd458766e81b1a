"""Detect version issues in a declared environment, then score detection.

Uses the bundled benchmark graph and environments; also checks a made-up
requirements list against it.
"""

from compatkg import fixtures
from compatkg.checker import (
    check_environment,
    evaluate_metrics,
    issue_pair_key,
    parse_environment,
    parse_environment_entries,
)
from compatkg.graph import load_graph

REQUIREMENTS = [
    "tensorflow==1.13",
    "numpy==1.19",
    "cuda 10.1 @driver",
    "python==3.8",
    "leftpad==1.0",
]


def main():
    g = load_graph(fixtures.benchmark_graph_path())
    dictionary = fixtures.default_dictionary()

    print("checking a hand-written requirements list:")
    parsed = parse_environment_entries(REQUIREMENTS, dictionary, source="<demo>")
    for note in parsed.diagnostics:
        print(f"  note: {note}")
    for issue in check_environment(g, parsed.spec):
        a, b = issue.pair
        print(
            f"  ISSUE {a.component_id} {a.version.normalized} vs "
            f"{b.component_id} {b.version.normalized} "
            f"(confidence {issue.confidence:+.2f}, {len(issue.evidence)} posts)"
        )
    print()

    print("benchmark sweep (detected vs planted):")
    truth = fixtures.benchmark_truth()
    reported, expected = [], []
    for env_path in fixtures.benchmark_environments():
        env = parse_environment(env_path, dictionary).spec
        issues = check_environment(g, env)
        reported.extend((env_path.name, issue_pair_key(i)) for i in issues)
        expected.extend(
            (env_path.name, (tuple(p[0]), tuple(p[1]))) for p in truth[env_path.name]
        )
        print(f"  {env_path.name}: {len(issues)} issue(s)")
    metrics = evaluate_metrics(reported, expected)
    print()
    print(
        f"precision {metrics.precision:.3f}, recall {metrics.recall:.3f}, "
        f"f1 {metrics.f1:.3f} over {len(expected)} planted issues"
    )


if __name__ == "__main__":
    main()
