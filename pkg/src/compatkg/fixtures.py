"""Accessors for the data files shipped with the package.

The component dictionary, filter config, library stats, the small
synthetic corpus with its planted ground truth, and the checker
benchmark all live under ``compatkg/data`` so the library works out of
the box.  Every file is format-compatible with its user-supplied
counterpart; point the loaders at your own files to replace them.
"""

from __future__ import annotations

import json
from importlib.resources import files
from pathlib import Path

from .corpus import FilterConfig, Post, load_corpus, load_filter_config
from .recognizer import ComponentEntry, load_dictionary

__all__ = [
    "data_path",
    "default_dictionary",
    "default_filter_config",
    "default_stats_path",
    "synthetic_corpus",
    "synthetic_corpus_truth",
    "benchmark_graph_path",
    "benchmark_environments",
    "benchmark_truth",
]


def data_path(*parts: str) -> Path:
    return Path(str(files("compatkg").joinpath("data", *parts)))


def default_dictionary() -> list[ComponentEntry]:
    return load_dictionary(data_path("components.json"))


def default_filter_config() -> FilterConfig:
    return load_filter_config(data_path("filters.json"))


def default_stats_path() -> Path:
    return data_path("stats.json")


def synthetic_corpus_path() -> Path:
    return data_path("corpus_small.jsonl")


def synthetic_corpus() -> list[Post]:
    return load_corpus(synthetic_corpus_path()).posts


def synthetic_corpus_truth() -> list[dict]:
    """Planted relations: [{a: [comp, ver], b: [comp, ver], n_compatible, n_incompatible}]."""
    return json.loads(data_path("corpus_truth.json").read_text(encoding="utf-8"))


def benchmark_graph_path() -> Path:
    return data_path("benchmark", "graph.json")


def benchmark_environments() -> list[Path]:
    root = data_path("benchmark")
    return sorted(root.glob("env_*.txt"))


def benchmark_truth() -> dict[str, list]:
    """Expected issues per environment file name."""
    return json.loads(data_path("benchmark", "truth.json").read_text(encoding="utf-8"))
