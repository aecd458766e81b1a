"""Build a knowledge graph from the bundled synthetic corpus.

Runs the whole extraction pipeline (filter, recognize, infer, aggregate)
over the ~50-post fixture corpus and prints the stage funnel plus the
strongest relations it found.
"""

from pathlib import Path

from compatkg import fixtures
from compatkg.graph import load_graph
from compatkg.pipeline import PipelineConfig, run_pipeline

OUT = Path(__file__).resolve().parent / "out"


def main():
    OUT.mkdir(exist_ok=True)
    graph_file = OUT / "graph.json"
    report = run_pipeline(
        PipelineConfig(
            corpus_path=fixtures.synthetic_corpus_path(),
            filters_path=fixtures.data_path("filters.json"),
            dict_path=fixtures.data_path("components.json"),
            out_graph=graph_file,
            out_filtered=OUT / "filtered.jsonl",
            out_verdicts=OUT / "verdicts.jsonl",
        )
    )
    print(report.to_text())
    print()

    g = load_graph(graph_file)
    print(f"graph: {len(g.nodes)} nodes, {len(g.links)} links -> {graph_file}")
    print()
    by_strength = sorted(g.links, key=lambda r: (r.confidence, r.key))
    for rel in by_strength[:8]:
        arrow = "<->" if rel.confidence > 0 else "<-/->"
        print(
            f"  {rel.a.component_id} {rel.a.version.normalized} {arrow} "
            f"{rel.b.component_id} {rel.b.version.normalized}  "
            f"confidence {rel.confidence:+.2f} "
            f"({rel.n_compatible} compatible vs {rel.n_incompatible} incompatible posts)"
        )


if __name__ == "__main__":
    main()
