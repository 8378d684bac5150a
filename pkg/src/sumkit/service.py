"""Blind annotation service.

Serves the rating UI's static assets plus a small JSON API. System names
never leave the server: every candidate is identified by an opaque token
derived from the session seed, and POSTed scores are resolved back to the
real system name only when written to the score log. Task order is
shuffled deterministically per annotator so refreshes are stable but no
two annotators see the same sequence.
"""

from __future__ import annotations

import hashlib
import json
import logging
import mimetypes
import os
import random
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from .harness import SCORE_MAX, SCORE_MIN, HumanScore

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SampleItem:
    summary_id: str
    reference: str
    # (system, text) pairs; system stays server-side
    candidates: tuple[tuple[str, str], ...]


def load_sample(path: str) -> list[SampleItem]:
    """Parse a JSONL sample file of summaries to annotate."""
    items: list[SampleItem] = []
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: invalid JSON: {exc}") from None
            summary_id = str(obj.get("summary_id", "")).strip()
            reference = str(obj.get("reference", ""))
            raw_candidates = obj.get("candidates")
            if not summary_id:
                raise ValueError(f"{path}:{lineno}: missing summary_id")
            if summary_id in seen_ids:
                raise ValueError(f"{path}:{lineno}: duplicate summary_id {summary_id!r}")
            if not reference.strip():
                raise ValueError(f"{path}:{lineno}: missing reference")
            if not isinstance(raw_candidates, list) or not raw_candidates:
                raise ValueError(f"{path}:{lineno}: candidates must be a non-empty list")
            candidates = []
            systems_here = set()
            for cand in raw_candidates:
                system = str(cand.get("system", "")).strip()
                text = str(cand.get("text", ""))
                if not system or not text.strip():
                    raise ValueError(f"{path}:{lineno}: candidate needs system and text")
                if system in systems_here:
                    raise ValueError(f"{path}:{lineno}: duplicate system {system!r}")
                systems_here.add(system)
                candidates.append((system, text))
            seen_ids.add(summary_id)
            items.append(SampleItem(summary_id, reference, tuple(candidates)))
    if not items:
        raise ValueError(f"{path}: empty sample")
    return items


def system_token(seed: int | str, summary_id: str, system: str) -> str:
    """Opaque per-session candidate identifier; reveals nothing about system."""
    digest = hashlib.sha256(f"{seed}:{summary_id}:{system}".encode("utf-8")).hexdigest()
    return digest[:16]


@dataclass
class _Task:
    summary_id: str
    reference: str
    candidate: str
    token: str


@dataclass
class AnnotationService:
    """Threaded HTTP server wrapping the sample, the token map, and the log."""

    sample: list[SampleItem]
    scores_path: str
    seed: int = 0
    static_dir: str | None = None
    host: str = "127.0.0.1"
    port: int = 0

    _tasks: list[_Task] = field(default_factory=list, repr=False)
    _token_map: dict[str, tuple[str, str]] = field(default_factory=dict, repr=False)
    _seen: set[tuple[str, str, str]] = field(default_factory=set, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    _server: ThreadingHTTPServer | None = field(default=None, repr=False)
    _thread: threading.Thread | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if not self.sample:
            raise ValueError("empty sample")
        for item in self.sample:
            for system, text in item.candidates:
                token = system_token(self.seed, item.summary_id, system)
                if token in self._token_map:
                    raise ValueError(f"token collision for {item.summary_id!r}")
                self._token_map[token] = (item.summary_id, system)
                self._tasks.append(_Task(item.summary_id, item.reference, text, token))
        self._load_existing_scores()

    def _load_existing_scores(self) -> None:
        if not os.path.exists(self.scores_path):
            return
        with open(self.scores_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                score = HumanScore.from_dict(json.loads(line))
                self._seen.add(score.key())

    # --- API handlers (transport-free, unit-testable) ---

    def tasks_for(self, annotator: str) -> dict:
        order = list(range(len(self._tasks)))
        random.Random(f"{self.seed}:{annotator}").shuffle(order)
        with self._lock:
            done = {
                token
                for token, (summary_id, system) in self._token_map.items()
                if (annotator, summary_id, system) in self._seen
            }
        tasks = [
            {
                "summary_id": self._tasks[i].summary_id,
                "reference": self._tasks[i].reference,
                "candidate": self._tasks[i].candidate,
                "token": self._tasks[i].token,
                "done": self._tasks[i].token in done,
            }
            for i in order
        ]
        return {"annotator": annotator, "total": len(tasks), "tasks": tasks}

    def submit_score(self, body: dict) -> tuple[int, dict]:
        """Validate and append one score. Returns (http_status, response_body)."""
        errors: dict[str, str] = {}
        annotator = body.get("annotator")
        token = body.get("token")
        if not isinstance(annotator, str) or not annotator.strip():
            errors["annotator"] = "required"
        if not isinstance(token, str) or token not in self._token_map:
            errors["token"] = "unknown task token"
        for name in ("accuracy", "coherence"):
            value = body.get(name)
            if not isinstance(value, int) or isinstance(value, bool):
                errors[name] = "must be an integer"
            elif not (SCORE_MIN <= value <= SCORE_MAX):
                errors[name] = f"must be in [{SCORE_MIN}, {SCORE_MAX}]"
        if errors:
            return 400, {"errors": errors}

        summary_id, system = self._token_map[token]
        score = HumanScore(
            annotator=annotator.strip(),
            summary_id=summary_id,
            system=system,
            accuracy=body["accuracy"],
            coherence=body["coherence"],
            timestamp=datetime.now(timezone.utc).isoformat(),
        )
        with self._lock:
            if score.key() in self._seen:
                return 409, {"error": "already scored", "token": token}
            self._seen.add(score.key())
            with open(self.scores_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(score.to_dict(), ensure_ascii=False) + "\n")
        return 200, {"ok": True, "token": token}

    def progress(self) -> dict:
        with self._lock:
            per_annotator: dict[str, int] = {}
            for annotator, _, _ in self._seen:
                per_annotator[annotator] = per_annotator.get(annotator, 0) + 1
            total_scores = len(self._seen)
        return {
            "total_tasks": len(self._tasks),
            "total_scores": total_scores,
            "per_annotator": per_annotator,
        }

    # --- lifecycle ---

    def start(self) -> None:
        service = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, fmt, *args):  # noqa: N802
                log.debug("%s - %s", self.address_string(), fmt % args)

            def _send_json(self, status: int, payload: dict) -> None:
                data = json.dumps(payload, ensure_ascii=False).encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json; charset=utf-8")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def do_GET(self) -> None:  # noqa: N802
                parsed = urlparse(self.path)
                if parsed.path == "/api/tasks":
                    annotator = parse_qs(parsed.query).get("annotator", [""])[0].strip()
                    if not annotator:
                        self._send_json(400, {"errors": {"annotator": "required"}})
                        return
                    self._send_json(200, service.tasks_for(annotator))
                elif parsed.path == "/api/progress":
                    self._send_json(200, service.progress())
                else:
                    self._send_static(parsed.path)

            def do_POST(self) -> None:  # noqa: N802
                parsed = urlparse(self.path)
                if parsed.path != "/api/scores":
                    self._send_json(404, {"error": "not found"})
                    return
                length = int(self.headers.get("Content-Length", 0))
                raw = self.rfile.read(length) if length else b""
                try:
                    body = json.loads(raw.decode("utf-8"))
                    if not isinstance(body, dict):
                        raise ValueError("body must be an object")
                except (ValueError, UnicodeDecodeError):
                    self._send_json(400, {"errors": {"body": "invalid JSON object"}})
                    return
                status, payload = service.submit_score(body)
                self._send_json(status, payload)

            def _send_static(self, url_path: str) -> None:
                if service.static_dir is None:
                    if url_path in ("/", "/index.html"):
                        page = b"<!doctype html><title>annotation API</title><p>API only: no static assets configured.</p>"
                        self.send_response(200)
                        self.send_header("Content-Type", "text/html; charset=utf-8")
                        self.send_header("Content-Length", str(len(page)))
                        self.end_headers()
                        self.wfile.write(page)
                        return
                    self._send_json(404, {"error": "not found"})
                    return
                rel = url_path.lstrip("/") or "index.html"
                root = os.path.realpath(service.static_dir)
                target = os.path.realpath(os.path.join(root, rel))
                # realpath + prefix check stops ../ escapes
                if not (target == root or target.startswith(root + os.sep)) or not os.path.isfile(target):
                    self._send_json(404, {"error": "not found"})
                    return
                ctype = mimetypes.guess_type(target)[0] or "application/octet-stream"
                with open(target, "rb") as fh:
                    data = fh.read()
                self.send_response(200)
                self.send_header("Content-Type", ctype)
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

        self._server = ThreadingHTTPServer((self.host, self.port), Handler)
        self._server.daemon_threads = True
        self.port = self._server.server_address[1]
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()

    def stop(self) -> None:
        if self._server is not None:
            self._server.shutdown()
            self._server.server_close()
            self._server = None
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None

    @property
    def url(self) -> str:
        return f"http://{self.host}:{self.port}"


def serve_annotation(
    sample: list[SampleItem],
    scores_path: str,
    port: int = 0,
    seed: int = 0,
    static_dir: str | None = None,
    host: str = "127.0.0.1",
) -> AnnotationService:
    """Start the annotation service in a background thread and return it."""
    service = AnnotationService(
        sample=sample,
        scores_path=scores_path,
        seed=seed,
        static_dir=static_dir,
        host=host,
        port=port,
    )
    service.start()
    return service
