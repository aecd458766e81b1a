"""Command-line entry point.

Each pipeline stage is independently runnable (ingest, infer, build) and
`pipeline` chains them; query, check, eval, and serve work off a saved
graph file.  Diagnostics go to stderr only.  Exit codes: 0 success,
1 usage error, 2 data error, 3 I/O error.  Every option can also be set
through an environment variable prefixed COMPATKG_<COMMAND>_<OPTION>.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import checker as checker_mod
from . import fixtures
from .corpus import filter_posts, load_corpus, load_filter_config
from .errors import DataError, StorageError
from .graph import aggregate_with_stats, build_graph, load_graph, save_graph
from .pipeline import (
    OracleConfig,
    PipelineConfig,
    make_oracle,
    extract_verdicts,
    read_verdicts,
    run_pipeline,
    write_posts,
    write_verdicts,
)
from .query import query_payload
from .recognizer import analyze_paragraph, bind_versions, load_dictionary
from .service import DEFAULT_URL_TEMPLATE
from .service import serve as run_server

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3


def _info(message: str) -> None:
    click.echo(message, err=True)


@click.group()
def cli() -> None:
    """Version-compatibility knowledge graphs from Q&A corpora."""


_dict_option = click.option(
    "--dict",
    "dict_path",
    type=click.Path(),
    default=None,
    help="Component dictionary file (defaults to the bundled one).",
)


def _dictionary(dict_path: str | None):
    return load_dictionary(dict_path) if dict_path else fixtures.default_dictionary()


@cli.command()
@click.option("--corpus", "corpus_path", type=click.Path(), required=True)
@click.option("--filters", "filters_path", type=click.Path(), default=None,
              help="Filter config file (defaults to the bundled one).")
@click.option("--out", "out_path", type=click.Path(), required=True,
              help="Where to write the filtered posts (line format).")
def ingest(corpus_path: str, filters_path: str | None, out_path: str) -> None:
    """Load a corpus and keep posts with compatibility cues."""
    result = load_corpus(corpus_path)
    for err in result.errors:
        _info(f"corpus: {err}")
    cfg = load_filter_config(filters_path) if filters_path else fixtures.default_filter_config()
    kept = filter_posts(result.posts, cfg)
    write_posts(kept, out_path)
    _info(f"{len(result.posts)} posts loaded ({len(result.errors)} malformed), {len(kept)} kept")


@cli.command()
@_dict_option
@click.option("--text", required=True, help="Paragraph to analyze.")
@click.option("--format", "fmt", type=click.Choice(["table", "machine"]), default="table")
def recognize(dict_path: str | None, text: str, fmt: str) -> None:
    """Print recognized mentions and bindings for a paragraph (debugging aid)."""
    dictionary = _dictionary(dict_path)
    mentions = analyze_paragraph(text, dictionary)
    bindings = bind_versions(mentions)
    if fmt == "machine":
        click.echo(
            json.dumps(
                {
                    "mentions": [
                        {
                            "kind": m.kind,
                            "text": m.text,
                            "start": m.start,
                            "end": m.end,
                            "sentence": m.sentence_index,
                            "component": m.component_id,
                            "version": m.version.normalized if m.version else None,
                            "pattern": m.pattern,
                        }
                        for m in mentions
                    ],
                    "bindings": [
                        {
                            "component": b.component.component_id,
                            "layer": b.component.layer,
                            "version": b.component.version.normalized,
                        }
                        for b in bindings
                    ],
                },
                separators=(",", ":"),
            )
        )
        return
    for m in mentions:
        extra = m.component_id if m.kind == "component" else m.version.normalized
        click.echo(f"{m.start:4d}-{m.end:<4d} {m.kind:9s} {m.text!r} -> {extra}")
    for b in bindings:
        click.echo(
            f"bound: {b.component.component_id} {b.component.version.normalized} "
            f"[{b.component.layer}]"
        )


@cli.command()
@click.option("--posts", "posts_path", type=click.Path(), required=True,
              help="Filtered posts file from `ingest`.")
@_dict_option
@click.option("--out", "out_path", type=click.Path(), required=True,
              help="Where to write the verdict stream.")
@click.option("--oracle", "oracle_kind", type=click.Choice(["heuristic", "remote"]),
              default="heuristic")
@click.option("--endpoint", default=None, help="Remote oracle endpoint URL.")
@click.option("--timeout-ms", default=5000, show_default=True)
@click.option("--parallelism", default=1, show_default=True)
def infer(posts_path: str, dict_path: str | None, out_path: str, oracle_kind: str,
          endpoint: str | None, timeout_ms: int, parallelism: int) -> None:
    """Run compatibility inference over filtered posts."""
    result = load_corpus(posts_path)
    dictionary = _dictionary(dict_path)
    oracle = make_oracle(OracleConfig(kind=oracle_kind, endpoint=endpoint, timeout_ms=timeout_ms))
    verdicts = extract_verdicts(result.posts, dictionary, oracle, parallelism)
    decisive = [v for v in verdicts if v.label in ("compatible", "incompatible")]
    write_verdicts(decisive, out_path)
    for note in getattr(oracle, "diagnostics", []):
        _info(f"oracle: {note}")
    _info(f"{len(verdicts)} verdicts, {len(decisive)} decisive")


@cli.command()
@click.option("--verdicts", "verdicts_path", type=click.Path(), required=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
def build(verdicts_path: str, out_path: str) -> None:
    """Aggregate a verdict stream into a graph file."""
    verdicts = read_verdicts(verdicts_path)
    relations, stats = aggregate_with_stats(verdicts)
    graph = build_graph(relations)
    save_graph(graph, out_path)
    _info(
        f"{stats.pairs_total} pairs, {len(relations)} relations kept, "
        f"{stats.pairs_neutral_discarded} neutral discarded"
    )


@cli.command()
@click.option("--corpus", "corpus_path", type=click.Path(), required=True)
@click.option("--filters", "filters_path", type=click.Path(), default=None)
@_dict_option
@click.option("--out", "out_path", type=click.Path(), required=True, help="Graph file to write.")
@click.option("--filtered-out", type=click.Path(), default=None,
              help="Also write the filtered posts stage artifact.")
@click.option("--verdicts-out", type=click.Path(), default=None,
              help="Also write the verdict stage artifact.")
@click.option("--oracle", "oracle_kind", type=click.Choice(["heuristic", "remote"]),
              default="heuristic")
@click.option("--endpoint", default=None)
@click.option("--timeout-ms", default=5000, show_default=True)
@click.option("--parallelism", default=1, show_default=True)
def pipeline(corpus_path: str, filters_path: str | None, dict_path: str | None, out_path: str,
             filtered_out: str | None, verdicts_out: str | None, oracle_kind: str,
             endpoint: str | None, timeout_ms: int, parallelism: int) -> None:
    """Run the whole pipeline: ingest, infer, build, save."""
    config = PipelineConfig(
        corpus_path=corpus_path,
        filters_path=filters_path or fixtures.data_path("filters.json"),
        dict_path=dict_path or fixtures.data_path("components.json"),
        out_graph=out_path,
        oracle=OracleConfig(kind=oracle_kind, endpoint=endpoint, timeout_ms=timeout_ms),
        out_filtered=filtered_out,
        out_verdicts=verdicts_out,
        parallelism=parallelism,
    )
    report = run_pipeline(config)
    _info(report.to_text())


@cli.command()
@click.option("--graph", "graph_path", type=click.Path(), required=True)
@_dict_option
@click.option("--format", "fmt", type=click.Choice(["table", "machine"]), default="table")
@click.option("--subgraph-out", type=click.Path(), default=None,
              help="Also write the resolved subgraph to a file.")
@click.argument("text")
def query(graph_path: str, dict_path: str | None, fmt: str, subgraph_out: str | None,
          text: str) -> None:
    """Answer a search query against a graph file."""
    graph = load_graph(graph_path)
    dictionary = _dictionary(dict_path)
    payload = query_payload(graph, text, dictionary)
    if subgraph_out:
        Path(subgraph_out).write_text(
            json.dumps(payload["subgraph"], indent=2) + "\n", encoding="utf-8"
        )
    if fmt == "machine":
        click.echo(json.dumps(payload, separators=(",", ":")))
        return
    click.echo(f"kind:    {payload['query']['kind']}")
    if payload["verdict"] is not None:
        confidence = payload["confidence"]
        shown = f" (confidence {confidence:+.3f})" if confidence is not None else ""
        click.echo(f"verdict: {payload['verdict']}{shown}")
    click.echo(payload["message"])
    sub = payload["subgraph"]
    if sub["nodes"]:
        click.echo(f"{'node':30s} layer")
        for n in sub["nodes"]:
            click.echo(f"{n['component'] + ' ' + n['version']:30s} {n['layer']}")
    for link in sub["links"]:
        a, b = link["a"], link["b"]
        sign = "<->" if link["confidence"] > 0 else "<-/->"
        click.echo(
            f"{a['component']} {a['version']} {sign} {b['component']} {b['version']} "
            f"(confidence {link['confidence']:+.3f}, "
            f"{link['n_compatible']}+/{link['n_incompatible']}-)"
        )


@cli.command()
@click.option("--graph", "graph_path", type=click.Path(), required=True)
@click.option("--env", "env_path", type=click.Path(), required=True)
@_dict_option
@click.option("--report-unknown", is_flag=True, default=False,
              help="Also list entry pairs the graph knows nothing about.")
@click.option("--format", "fmt", type=click.Choice(["table", "machine"]), default="table")
def check(graph_path: str, env_path: str, dict_path: str | None, report_unknown: bool,
          fmt: str) -> None:
    """Check a declared environment for known incompatibilities."""
    graph = load_graph(graph_path)
    dictionary = _dictionary(dict_path)
    parsed = checker_mod.parse_environment(env_path, dictionary)
    for note in parsed.diagnostics:
        _info(note)
    issues = checker_mod.check_environment(graph, parsed.spec)
    unknown = checker_mod.unchecked_pairs(graph, parsed.spec) if report_unknown else []
    if fmt == "machine":
        payload: dict = {"issues": [checker_mod.issue_to_obj(i) for i in issues]}
        if report_unknown:
            payload["unknown_pairs"] = [
                [
                    {"component": vc.component_id, "version": vc.version.normalized}
                    for vc in pair
                ]
                for pair in unknown
            ]
        click.echo(json.dumps(payload, separators=(",", ":")))
        return
    if not issues:
        click.echo("no known incompatibilities")
    for issue in issues:
        a, b = issue.pair
        click.echo(
            f"ISSUE {a.component_id} {a.version.normalized} vs "
            f"{b.component_id} {b.version.normalized} "
            f"(confidence {issue.confidence:+.3f}, {len(issue.evidence)} posts)"
        )
    for a, b in unknown:
        click.echo(
            f"unknown: {a.component_id} {a.version.normalized} vs "
            f"{b.component_id} {b.version.normalized}"
        )


@cli.command(name="eval")
@click.option("--pred", "pred_path", type=click.Path(), required=True)
@click.option("--truth", "truth_path", type=click.Path(), required=True)
@click.option("--format", "fmt", type=click.Choice(["table", "machine"]), default="table")
def eval_cmd(pred_path: str, truth_path: str, fmt: str) -> None:
    """Score predicted issue pairs against ground truth."""
    reported = checker_mod.load_pair_file(pred_path)
    truth = checker_mod.load_pair_file(truth_path)
    metrics = checker_mod.evaluate_metrics(reported, truth)
    obj = {
        "true_positives": metrics.true_positives,
        "false_positives": metrics.false_positives,
        "false_negatives": metrics.false_negatives,
        "precision": metrics.precision,
        "recall": metrics.recall,
        "f1": metrics.f1,
    }
    if fmt == "machine":
        click.echo(json.dumps(obj, separators=(",", ":")))
        return
    for key, value in obj.items():
        shown = "n/a" if value is None else (f"{value:.3f}" if isinstance(value, float) else value)
        click.echo(f"{key:16s} {shown}")


@cli.command()
@click.option("--graph", "graph_path", type=click.Path(), required=True)
@click.option("--stats", "stats_path", type=click.Path(), default=None,
              help="Component stats file (defaults to the bundled one).")
@_dict_option
@click.option("--port", default=8571, show_default=True)
@click.option("--cors-origin", default="*", show_default=True)
@click.option("--url-template", default=DEFAULT_URL_TEMPLATE, show_default=True)
def serve(graph_path: str, stats_path: str | None, dict_path: str | None, port: int,
          cors_origin: str, url_template: str) -> None:
    """Serve the graph over HTTP for the explorer UI and other clients."""
    run_server(
        graph_file=graph_path,
        stats_file=stats_path or fixtures.default_stats_path(),
        dict_file=dict_path or fixtures.data_path("components.json"),
        port=port,
        cors_origin=cors_origin,
        url_template=url_template,
    )


def main(argv: list[str] | None = None) -> int:
    """Run the CLI with the documented exit-code mapping."""
    try:
        cli.main(args=argv, prog_name="compatkg", standalone_mode=False,
                 auto_envvar_prefix="COMPATKG")
        return EXIT_OK
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return EXIT_USAGE
    except StorageError as exc:
        click.echo(f"i/o error: {exc}", err=True)
        return EXIT_IO
    except DataError as exc:
        click.echo(f"data error: {exc}", err=True)
        return EXIT_DATA
    except OSError as exc:
        click.echo(f"i/o error: {exc}", err=True)
        return EXIT_IO
    except KeyboardInterrupt:
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
