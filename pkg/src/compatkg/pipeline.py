"""End-to-end extraction pipeline: corpus in, graph file out.

Stages run in a fixed order (load, filter, recognize, infer, aggregate,
build, save) and the run report records the post funnel through them.
Per-post work is independent, so recognition and inference can fan out
over a thread pool; results are collected in input order, which makes
the output byte-identical at any parallelism level.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import corpus as corpus_mod
from .corpus import Post, candidate_paragraphs, filter_posts
from .errors import DataError, StorageError
from .graph import aggregate_with_stats, build_graph, save_graph
from .inference import (
    COMPATIBLE,
    INCOMPATIBLE,
    UNKNOWN,
    HeuristicOracle,
    Oracle,
    RemoteOracle,
    Verdict,
    infer_paragraph,
)
from .recognizer import ComponentEntry, analyze_paragraph, bind_versions, load_dictionary

__all__ = ["OracleConfig", "PipelineConfig", "RunReport", "make_oracle", "run_pipeline", "extract_verdicts"]

# Funnel sizes reported for the full-scale corpus study this pipeline
# models; not reproducible at fixture scale, shown for orientation only.
REFERENCE_FUNNEL = "53M posts -> 4.9M tag-filtered -> 549K cue-filtered -> 355K accepted-only"


@dataclass(frozen=True)
class OracleConfig:
    kind: str = "heuristic"
    endpoint: str | None = None
    timeout_ms: int = 5000


@dataclass(frozen=True)
class PipelineConfig:
    corpus_path: str | Path
    filters_path: str | Path
    dict_path: str | Path
    out_graph: str | Path
    oracle: OracleConfig = OracleConfig()
    out_filtered: str | Path | None = None
    out_verdicts: str | Path | None = None
    parallelism: int = 1

    def __post_init__(self) -> None:
        if self.parallelism < 1:
            raise DataError("parallelism must be at least 1")


@dataclass
class RunReport:
    posts_loaded: int = 0
    posts_malformed: int = 0
    posts_after_filter: int = 0
    candidate_paragraphs: int = 0
    verdicts_compatible: int = 0
    verdicts_incompatible: int = 0
    verdicts_unknown: int = 0
    pairs_total: int = 0
    relations_kept: int = 0
    relations_neutral_discarded: int = 0
    duplicates_collapsed: int = 0
    oracle_diagnostics: list[str] = field(default_factory=list)

    def to_text(self) -> str:
        lines = [
            f"posts loaded:                {self.posts_loaded} ({self.posts_malformed} malformed skipped)",
            f"posts after filtering:       {self.posts_after_filter}",
            f"candidate paragraphs:        {self.candidate_paragraphs}",
            f"verdicts compatible:         {self.verdicts_compatible}",
            f"verdicts incompatible:       {self.verdicts_incompatible}",
            f"verdicts unknown (excluded): {self.verdicts_unknown}",
            f"pairs aggregated:            {self.pairs_total}",
            f"relations kept:              {self.relations_kept}",
            f"relations neutral, dropped:  {self.relations_neutral_discarded}",
            f"duplicate post pairs merged: {self.duplicates_collapsed}",
        ]
        if self.oracle_diagnostics:
            lines.append(f"oracle diagnostics:          {len(self.oracle_diagnostics)}")
        lines.append(f"reference funnel (full-scale corpus, not reproducible here): {REFERENCE_FUNNEL}")
        return "\n".join(lines)


def make_oracle(config: OracleConfig) -> Oracle:
    if config.kind == "heuristic":
        return HeuristicOracle()
    if config.kind == "remote":
        if not config.endpoint:
            raise DataError("remote oracle needs an endpoint")
        return RemoteOracle(config.endpoint, timeout_ms=config.timeout_ms)
    raise DataError(f"unknown oracle kind {config.kind!r}")


def _post_verdicts(
    post: Post, dictionary: list[ComponentEntry], oracle: Oracle
) -> tuple[int, list[Verdict]]:
    """Candidate-paragraph count and verdicts for one post."""
    bound_per_paragraph = [
        [b.component for b in bind_versions(analyze_paragraph(p, dictionary))]
        for p in post.paragraphs
    ]
    indexes = candidate_paragraphs(post, bound_per_paragraph)
    verdicts: list[Verdict] = []
    for i in indexes:
        verdicts.extend(infer_paragraph(post, i, bound_per_paragraph[i], oracle))
    return len(indexes), verdicts


def extract_verdicts(
    posts: list[Post],
    dictionary: list[ComponentEntry],
    oracle: Oracle,
    parallelism: int = 1,
    report: RunReport | None = None,
) -> list[Verdict]:
    """Recognition plus inference over posts, in deterministic input order."""
    if parallelism > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            results = list(pool.map(lambda p: _post_verdicts(p, dictionary, oracle), posts))
    else:
        results = [_post_verdicts(p, dictionary, oracle) for p in posts]
    verdicts: list[Verdict] = []
    for n_candidates, post_verdicts in results:
        if report is not None:
            report.candidate_paragraphs += n_candidates
        verdicts.extend(post_verdicts)
    return verdicts


def write_posts(posts: list[Post], path: str | Path) -> None:
    """Persist posts in the corpus line format (diffable stage artifact)."""
    lines = []
    for p in posts:
        obj: dict = {
            "id": p.id,
            "title": p.title,
            "body": list(p.paragraphs),
            "tags": sorted(p.tags),
            "votes": p.votes,
            "kind": p.kind,
        }
        if p.kind == corpus_mod.ANSWER:
            obj["accepted"] = p.accepted
            if p.parent_id is not None:
                obj["parent_id"] = p.parent_id
        lines.append(json.dumps(obj, ensure_ascii=False))
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def verdict_to_obj(v: Verdict) -> dict:
    a, b = v.pair
    return {
        "pair": [
            {"component": vc.component_id, "layer": vc.layer, "version": vc.version.normalized}
            for vc in (a, b)
        ],
        "label": v.label,
        "source": v.source,
        "post_id": v.post_id,
        "votes": v.votes,
    }


def write_verdicts(verdicts: list[Verdict], path: str | Path) -> None:
    lines = [json.dumps(verdict_to_obj(v), ensure_ascii=False) for v in verdicts]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def read_verdicts(path: str | Path) -> list[Verdict]:
    """Load a verdict stage artifact back into memory."""
    from .recognizer import VersionedComponent
    from .versions import normalize_version

    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise StorageError(f"cannot read verdicts file {path}: {exc}") from None
    verdicts = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            pair = tuple(
                VersionedComponent(
                    component_id=vc["component"],
                    layer=vc["layer"],
                    version=normalize_version(vc["version"]),
                )
                for vc in obj["pair"]
            )
            verdicts.append(
                Verdict(
                    label=obj["label"],
                    source=obj.get("source", "unknown"),
                    post_id=int(obj["post_id"]),
                    votes=int(obj.get("votes", 0)),
                    pair=pair,  # type: ignore[arg-type]
                )
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise DataError(f"{path}:{lineno}: malformed verdict record: {exc}") from None
    return verdicts


def run_pipeline(config: PipelineConfig) -> RunReport:
    """Run every stage and write the graph file; returns the run report."""
    report = RunReport()

    loaded = corpus_mod.load_corpus(config.corpus_path)
    report.posts_loaded = len(loaded.posts)
    report.posts_malformed = len(loaded.errors)

    filter_config = corpus_mod.load_filter_config(config.filters_path)
    dictionary = load_dictionary(config.dict_path)

    kept = filter_posts(loaded.posts, filter_config)
    report.posts_after_filter = len(kept)
    if config.out_filtered is not None:
        write_posts(kept, config.out_filtered)

    oracle = make_oracle(config.oracle)
    verdicts = extract_verdicts(kept, dictionary, oracle, config.parallelism, report)
    for v in verdicts:
        if v.label == COMPATIBLE:
            report.verdicts_compatible += 1
        elif v.label == INCOMPATIBLE:
            report.verdicts_incompatible += 1
        else:
            report.verdicts_unknown += 1
    decisive = [v for v in verdicts if v.label in (COMPATIBLE, INCOMPATIBLE)]
    if config.out_verdicts is not None:
        write_verdicts(decisive, config.out_verdicts)
    report.oracle_diagnostics = list(getattr(oracle, "diagnostics", []))

    relations, stats = aggregate_with_stats(decisive)
    report.pairs_total = stats.pairs_total
    report.relations_kept = len(relations)
    report.relations_neutral_discarded = stats.pairs_neutral_discarded
    report.duplicates_collapsed = stats.duplicates_collapsed

    graph = build_graph(relations)
    save_graph(graph, config.out_graph)
    return report
