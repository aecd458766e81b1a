"""Spin up the HTTP API on the benchmark graph and poke every endpoint.

The server runs in a background thread on a local port; the same
endpoints back the browser UI in frontend/.
"""

import threading
import time

import httpx
import uvicorn

from compatkg import fixtures
from compatkg.graph import load_graph
from compatkg.service import ServiceConfig, create_app, load_component_stats

PORT = 8571


def main():
    app = create_app(
        load_graph(fixtures.benchmark_graph_path()),
        fixtures.default_dictionary(),
        load_component_stats(fixtures.default_stats_path()),
        ServiceConfig(port=PORT),
    )
    server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=PORT, log_level="error"))
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    while not server.started:
        time.sleep(0.05)

    base = f"http://127.0.0.1:{PORT}"
    with httpx.Client(base_url=base) as client:
        graph = client.get("/api/graph").json()
        print(f"GET /api/graph -> {len(graph['nodes'])} nodes, {len(graph['links'])} links")

        answer = client.get(
            "/api/query", params={"q": "Does tensorflow 1.13 work with cuda 10.1?"}
        ).json()
        print(f"GET /api/query -> verdict {answer['verdict']} ({answer['message']})")

        component = client.get("/api/component/tensorflow").json()
        print(
            f"GET /api/component/tensorflow -> license {component['stats']['license']}, "
            f"versions {component['versions']}"
        )

        relation = client.get(
            "/api/relation",
            params={"a": "tensorflow", "va": "1.13", "b": "cuda", "vb": "10.1"},
        ).json()
        print(f"GET /api/relation -> {relation['label']}, posts: "
              f"{[p['url'] for p in relation['posts'][:2]]}")

        top = client.get("/api/stats/top", params={"k": 3}).json()
        libraries = top["layers"][0]
        print(f"GET /api/stats/top -> library leaders {libraries['top']}")

        check = client.post(
            "/api/check",
            json={"entries": [
                {"component": "tensorflow", "version": "1.13"},
                {"component": "cuda", "version": "10.1"},
            ]},
        ).json()
        print(f"POST /api/check -> {len(check['issues'])} issue(s)")

    server.should_exit = True
    thread.join(timeout=5)


if __name__ == "__main__":
    main()
