"""Read-only HTTP API over a knowledge graph file.

One endpoint per UI panel: the full graph, free-text queries, component
details with library stats, relation details with post references,
per-layer top components, and an environment check.  Every response
carries a schema version; nothing mutates the graph, so all endpoints
are safe to cache and retry.
"""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import checker
from .errors import DataError, UnrecognizedQueryError
from .graph import KnowledgeGraph, graph_to_obj, load_graph, relation_to_obj
from .query import SCHEMA_VERSION, query_payload, top_components
from .recognizer import ComponentEntry, load_dictionary
from .versions import VersionSyntaxError, normalize_version

__all__ = ["ServiceConfig", "ComponentStats", "create_app", "serve", "load_component_stats"]

DEFAULT_URL_TEMPLATE = "https://stackoverflow.com/questions/{post_id}"


@dataclass(frozen=True)
class ComponentStats:
    """Offline library statistics (keywords, license, dependencies, homepage)."""

    component_id: str
    keywords: tuple[str, ...] = ()
    license: str = ""
    dependencies: tuple[str, ...] = ()
    homepage: str = ""

    def to_obj(self) -> dict:
        return {
            "component": self.component_id,
            "keywords": list(self.keywords),
            "license": self.license,
            "dependencies": list(self.dependencies),
            "homepage": self.homepage,
        }


@dataclass(frozen=True)
class ServiceConfig:
    port: int = 8571
    cors_origin: str = "*"
    url_template: str = DEFAULT_URL_TEMPLATE


def load_component_stats(path: str | Path) -> dict[str, ComponentStats]:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    stats = {}
    for obj in raw:
        cid = str(obj["component_id"]).lower()
        stats[cid] = ComponentStats(
            component_id=cid,
            keywords=tuple(obj.get("keywords", [])),
            license=str(obj.get("license", "")),
            dependencies=tuple(obj.get("dependencies", [])),
            homepage=str(obj.get("homepage", "")),
        )
    return stats


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def create_app(
    graph: KnowledgeGraph,
    dictionary: Sequence[ComponentEntry],
    stats: dict[str, ComponentStats],
    config: ServiceConfig = ServiceConfig(),
) -> FastAPI:
    """Build the API application around an already-loaded graph."""
    app = FastAPI(title="compatkg", docs_url=None, redoc_url=None)
    if config.cors_origin:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=[config.cors_origin],
            allow_methods=["GET", "POST"],
            allow_headers=["*"],
        )
    entries_by_id = {e.id: e for e in dictionary}

    @app.exception_handler(StarletteHTTPException)
    async def http_error(_request: Request, exc: StarletteHTTPException) -> JSONResponse:
        if isinstance(exc.detail, dict) and "code" in exc.detail:
            return JSONResponse(status_code=exc.status_code, content=exc.detail)
        return _error(exc.status_code, "error", str(exc.detail))

    @app.exception_handler(RequestValidationError)
    async def validation_error(_request: Request, exc: RequestValidationError) -> JSONResponse:
        return _error(400, "bad_request", str(exc.errors()))

    @app.get("/api/graph")
    def api_graph(limit: int | None = None, offset: int = 0) -> JSONResponse:
        obj = graph_to_obj(graph)
        if limit is not None or offset:
            links = obj["links"][offset : (offset + limit) if limit is not None else None]
            wanted = {(n["component"], n["version"]) for l in links for n in (l["a"], l["b"])}
            nodes = [n for n in obj["nodes"] if (n["component"], n["version"]) in wanted]
            obj = {"format_version": obj["format_version"], "nodes": nodes, "links": links}
        return JSONResponse({"schema_version": SCHEMA_VERSION, **obj})

    @app.get("/api/query")
    def api_query(q: str) -> JSONResponse:
        try:
            return JSONResponse(query_payload(graph, q, dictionary))
        except UnrecognizedQueryError as exc:
            return _error(400, "unrecognized_query", str(exc))

    @app.get("/api/component/{component_id}")
    def api_component(component_id: str) -> JSONResponse:
        cid = component_id.lower()
        entry = entries_by_id.get(cid)
        if entry is None:
            return _error(404, "unknown_component", f"component {cid!r} is not in the dictionary")
        nodes = graph.nodes_by_component.get(cid, ())
        component_stats = stats.get(cid)
        return JSONResponse(
            {
                "schema_version": SCHEMA_VERSION,
                "component": cid,
                "layer": entry.layer,
                "aliases": sorted(entry.aliases),
                "stats": component_stats.to_obj() if component_stats else None,
                "versions": [n.version.normalized for n in nodes],
            }
        )

    @app.get("/api/relation")
    def api_relation(a: str, va: str, b: str, vb: str) -> JSONResponse:
        try:
            node_a = graph.node(a.lower(), normalize_version(va).normalized)
            node_b = graph.node(b.lower(), normalize_version(vb).normalized)
        except VersionSyntaxError as exc:
            return _error(400, "bad_version", str(exc))
        if node_a is None or node_b is None:
            return _error(404, "unknown_node", "one or both nodes are not in the graph")
        rel = graph.relation_between(node_a, node_b)
        if rel is None:
            return _error(404, "unknown_relation", "no stored relation between these nodes")
        return JSONResponse(
            {
                "schema_version": SCHEMA_VERSION,
                "relation": relation_to_obj(rel),
                "label": rel.label,
                "posts": [
                    {
                        "post_id": e.post_id,
                        "title": f"Post {e.post_id}",
                        "url": config.url_template.format(post_id=e.post_id),
                        "votes": e.votes,
                    }
                    for e in rel.evidence
                ],
            }
        )

    @app.get("/api/stats/top")
    def api_stats_top(k: int = 5) -> JSONResponse:
        if k < 1:
            return _error(400, "bad_request", "k must be at least 1")
        return JSONResponse(
            {
                "schema_version": SCHEMA_VERSION,
                "layers": [
                    {
                        "layer": s.layer,
                        "top": [{"component": cid, "relations": n} for cid, n in s.top],
                    }
                    for s in top_components(graph, k)
                ],
            }
        )

    @app.post("/api/check")
    async def api_check(request: Request) -> JSONResponse:
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return _error(400, "bad_request", "request body must be JSON")
        entries = body.get("entries") if isinstance(body, dict) else None
        if not isinstance(entries, list) or not entries:
            return _error(400, "bad_request", "body must be {'entries': [{component, version}]}")
        lines = []
        for item in entries:
            if not isinstance(item, dict) or "component" not in item or "version" not in item:
                return _error(400, "bad_request", "each entry needs component and version fields")
            lines.append(f"{item['component']}=={item['version']}")
        try:
            result = checker.parse_environment_entries(lines, dictionary, source="request")
        except DataError as exc:
            return _error(400, "bad_request", str(exc))
        issues = checker.check_environment(graph, result.spec)
        return JSONResponse(
            {
                "schema_version": SCHEMA_VERSION,
                "issues": [checker.issue_to_obj(i) for i in issues],
                "skipped": result.diagnostics,
            }
        )

    return app


def serve(
    graph_file: str | Path,
    stats_file: str | Path,
    dict_file: str | Path,
    port: int,
    cors_origin: str = "*",
    url_template: str = DEFAULT_URL_TEMPLATE,
) -> None:
    """Load everything and run the API server (blocking)."""
    import uvicorn

    graph = load_graph(graph_file)
    dictionary = load_dictionary(dict_file)
    stats = load_component_stats(stats_file)
    config = ServiceConfig(port=port, cors_origin=cors_origin, url_template=url_template)
    app = create_app(graph, dictionary, stats, config)
    uvicorn.run(app, host="127.0.0.1", port=port)
