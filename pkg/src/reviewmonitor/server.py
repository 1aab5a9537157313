"""Local HTTP service hosting the report and the theme-merge workflow.

Read-only except POST /api/themes, which validates the merge spec,
persists it with an atomic replace, and re-derives the theme report.
"""

from __future__ import annotations

import json
import threading
from http import HTTPStatus
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional

from .report import atomic_write, serialize_report
from .topics.themes import ThemeSpec, ThemeValidationError, merge_topics

_BUILTIN_INDEX = """<!doctype html>
<html><head><meta charset="utf-8"><title>Review monitor</title></head>
<body><h1>Review monitor</h1>
<p>No workbench build found. The API is live at
<a href="/api/report">/api/report</a>.</p></body></html>
"""

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json; charset=utf-8",
    ".svg": "image/svg+xml",
    ".map": "application/json",
}


class ReportService:
    """Shared state behind the HTTP handler; theme writes are serialized."""

    def __init__(self, report_path: str | Path, themes_path: str | Path,
                 static_dir: Optional[str | Path] = None):
        self.report_path = Path(report_path)
        self.themes_path = Path(themes_path)
        self.static_dir = Path(static_dir) if static_dir else None
        self.report = json.loads(self.report_path.read_text(encoding="utf-8"))
        self._write_lock = threading.Lock()

    def load_theme_spec(self) -> ThemeSpec:
        if self.themes_path.exists():
            data = json.loads(self.themes_path.read_text(encoding="utf-8"))
            return ThemeSpec.from_dict(data)
        return ThemeSpec()

    def derive(self, spec: ThemeSpec) -> dict:
        topics = self.report.get("topics")
        if topics is None:
            if spec.themes:
                raise ThemeValidationError("report has no topics stage")
            return {"themes": [], "unassigned": [], "noise_count": 0}
        derived = merge_topics(topics["topic_sizes"],
                               topics["ctfidf_vectors"], spec,
                               noise_count=topics.get("noise_count", 0))
        return derived.as_dict()

    def themes_payload(self) -> dict:
        spec = self.load_theme_spec()
        return {"spec": spec.as_dict(), "derived": self.derive(spec)}

    def save_theme_spec(self, body: bytes) -> dict:
        try:
            data = json.loads(body.decode("utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise ValueError(f"malformed JSON body: {exc}")
        spec = ThemeSpec.from_dict(data)
        derived = self.derive(spec)  # validates before persisting
        with self._write_lock:
            atomic_write(self.themes_path, serialize_report(spec.as_dict()))
        return {"spec": spec.as_dict(), "derived": derived}


class _Handler(BaseHTTPRequestHandler):
    service: ReportService  # injected by make_server

    def log_message(self, *args):  # quiet by default
        pass

    def _send_json(self, payload: dict, status: int = 200) -> None:
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_static(self, path: str) -> None:
        name = "index.html" if path in ("/", "") else path.lstrip("/")
        if self.service.static_dir is not None:
            target = (self.service.static_dir / name).resolve()
            root = self.service.static_dir.resolve()
            if target.is_file() and root in target.parents:
                body = target.read_bytes()
                ctype = _CONTENT_TYPES.get(target.suffix,
                                           "application/octet-stream")
                self.send_response(200)
                self.send_header("Content-Type", ctype)
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)
                return
        if path in ("/", "", "/index.html"):
            body = _BUILTIN_INDEX.encode("utf-8")
            self.send_response(200)
            self.send_header("Content-Type", "text/html; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
        else:
            self.send_error(HTTPStatus.NOT_FOUND)

    def do_GET(self):
        path = self.path.split("?")[0]
        if path == "/api/report":
            self._send_json(self.service.report)
        elif path == "/api/topics":
            self._send_json({"topics": self.service.report.get("topics")})
        elif path == "/api/themes":
            self._send_json(self.service.themes_payload())
        else:
            self._send_static(path)

    def do_POST(self):
        path = self.path.split("?")[0]
        if path != "/api/themes":
            self.send_error(HTTPStatus.NOT_FOUND)
            return
        length = int(self.headers.get("Content-Length", "0"))
        body = self.rfile.read(length)
        try:
            payload = self.service.save_theme_spec(body)
        except ThemeValidationError as exc:
            self._send_json({"error": str(exc)}, status=422)
            return
        except ValueError as exc:
            self._send_json({"error": str(exc)}, status=400)
            return
        self._send_json(payload)


def make_server(service: ReportService, port: int = 8787,
                host: str = "127.0.0.1") -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {"service": service})
    return ThreadingHTTPServer((host, port), handler)


def serve(report_path, themes_path, port: int = 8787,
          static_dir=None) -> None:
    service = ReportService(report_path, themes_path, static_dir)
    server = make_server(service, port)
    host, bound_port = server.server_address[:2]
    print(f"serving report on http://{host}:{bound_port}/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
