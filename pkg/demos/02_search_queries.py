"""The three search-bar query forms against a built graph.

Run demos/01_build_graph.py first (or this script will do it for you).
"""

from pathlib import Path

from compatkg import fixtures
from compatkg.graph import load_graph
from compatkg.query import parse_query, resolve, top_components

OUT = Path(__file__).resolve().parent / "out"

QUERIES = [
    "Does Python 3.6.8 work with Ubuntu 16.04.6?",  # pair
    "Does tensorflow 1.13 work with cuda 10.1?",    # pair, incompatible
    "Python 3.8",                                   # versioned component
    "tensorflow",                                   # bare component
]


def main():
    graph_file = OUT / "graph.json"
    if not graph_file.exists():
        import runpy

        runpy.run_path(str(Path(__file__).with_name("01_build_graph.py")), run_name="__main__")
    g = load_graph(graph_file)
    dictionary = fixtures.default_dictionary()

    for text in QUERIES:
        q = parse_query(text, dictionary)
        result = resolve(g, q)
        print(f"query: {text!r}")
        print(f"  kind: {q.kind}")
        if result.verdict is not None:
            print(f"  verdict: {result.verdict}")
        print(f"  {result.message}")
        print(
            f"  subgraph: {len(result.subgraph.nodes)} nodes, "
            f"{len(result.subgraph.links)} links"
        )
        print()

    print("most-discussed components per layer:")
    for stats in top_components(g, k=3):
        shown = ", ".join(f"{cid} ({n})" for cid, n in stats.top) or "-"
        print(f"  {stats.layer:13s} {shown}")


if __name__ == "__main__":
    main()
