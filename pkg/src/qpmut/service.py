"""Local JSON-over-HTTP session service.

Sessions are in-memory; each holds one quiver / QP / graded QP /
triangulation plus an undo stack and an operation history.  Concurrent
sessions are independent; operations within one session are serialized
behind a per-session lock.  Every response carries the state hash.
"""

from __future__ import annotations

import json
import mimetypes
import os
import threading
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from . import jsonio
from .errors import PreconditionError, QpmutError
from .graded import left_mutate, right_mutate
from .qp import dwz_mutate, is_rigid, jacobi_finite
from .quiver import fz_mutate, is_acyclic
from .surface import flip, quiver_from_triangulation

_MUTATORS = {
    "quiver": {"fz": fz_mutate},
    "qp": {"dwz": dwz_mutate},
    "graded": {"left": left_mutate, "right": right_mutate},
}


class Session:
    def __init__(self, kind: str, state):
        self.id = uuid.uuid4().hex[:12]
        self.kind = kind
        self.states = [state]
        self.history: list[dict] = []
        self.lock = threading.Lock()

    @property
    def state(self):
        return self.states[-1]

    def state_json(self) -> dict:
        return jsonio.state_to_json(self.kind, self.state)

    def hash(self) -> str:
        return jsonio.state_hash(self.state_json())

    def legal_moves(self) -> list:
        if self.kind == "triangulation":
            legal = []
            for arc in self.state.arcs():
                try:
                    flip(self.state, arc)
                    legal.append(arc)
                except QpmutError:
                    continue
            return legal
        q = self.state if self.kind == "quiver" else (
            self.state.quiver if self.kind == "qp" else self.state.qp.quiver
        )
        if self.kind == "quiver":
            if q.has_loop() or q.has_two_cycle():
                return []
            return sorted(q.vertices)
        if q.has_loop():
            return []
        return sorted(v for v in q.vertices if not q.two_cycle_through(v))

    def view(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "state": self.state_json(),
            "hash": self.hash(),
            "legal": self.legal_moves(),
        }

    def mutate(self, params: dict) -> None:
        kind = params.get("kind")
        prior = self.hash()
        if self.kind == "triangulation":
            if kind not in (None, "flip"):
                raise PreconditionError(f"{kind!r} does not apply to a triangulation")
            arc = params.get("arc", params.get("vertex"))
            new_state = flip(self.state, str(arc))
            applied = {"kind": "flip", "arc": str(arc)}
        else:
            table = _MUTATORS[self.kind]
            if kind not in table:
                raise PreconditionError(
                    f"mutation kind {kind!r} does not apply to a {self.kind} session"
                )
            vertex = params.get("vertex")
            if not isinstance(vertex, int):
                raise PreconditionError("mutate needs an integer 'vertex'")
            new_state = table[kind](self.state, vertex)
            applied = {"kind": kind, "vertex": vertex}
        self.states.append(new_state)
        self.history.append({"op": "mutate", "params": applied, "prior_hash": prior})

    def undo(self) -> None:
        if len(self.states) == 1:
            raise PreconditionError("nothing to undo")
        self.states.pop()
        self.history.pop()

    def analysis(self, bound: int) -> dict:
        if self.kind == "quiver":
            return {"acyclic": is_acyclic(self.state)}
        if self.kind == "triangulation":
            qp = quiver_from_triangulation(self.state)
        else:
            qp = self.state if self.kind == "qp" else self.state.qp
        return {
            "acyclic": is_acyclic(qp.quiver),
            "jacobian": jacobi_finite(qp, bound).to_json(),
            "rigidity": is_rigid(qp, max(bound, 2)).to_json(),
        }


class SessionStore:
    def __init__(self):
        self.sessions: dict[str, Session] = {}
        self.lock = threading.Lock()

    def create(self, body: dict) -> Session:
        kind, state = jsonio.state_from_json(body)
        s = Session(kind, state)
        with self.lock:
            self.sessions[s.id] = s
        return s

    def get(self, sid: str) -> Session | None:
        with self.lock:
            return self.sessions.get(sid)

    def snapshot(self, path: str) -> None:
        with self.lock:
            data = {
                sid: {"kind": s.kind, "state": s.state_json(), "history": s.history}
                for sid, s in self.sessions.items()
            }
        Path(path).write_text(jsonio.canonical_bytes(data).decode())


class Handler(BaseHTTPRequestHandler):
    store: SessionStore
    static_dir: str | None = None

    def log_message(self, *args):  # quiet by default
        pass

    def _send(self, code: int, obj) -> None:
        body = jsonio.canonical_bytes(obj)
        self.send_response(code)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()
        self.wfile.write(body)

    def _fail(self, code: int, err: str, detail: str) -> None:
        self._send(code, {"error": err, "detail": detail})

    def _body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b"{}"
        return json.loads(raw or b"{}")

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    def _serve_static(self, path: str) -> bool:
        if not self.static_dir:
            return False
        rel = path.lstrip("/") or "index.html"
        full = (Path(self.static_dir) / rel).resolve()
        if not str(full).startswith(str(Path(self.static_dir).resolve())) or not full.is_file():
            return False
        body = full.read_bytes()
        ctype = mimetypes.guess_type(str(full))[0] or "application/octet-stream"
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)
        return True

    def do_GET(self):
        url = urlparse(self.path)
        parts = [p for p in url.path.split("/") if p]
        if parts[:1] == ["sessions"] and len(parts) >= 2:
            s = self.store.get(parts[1])
            if s is None:
                return self._fail(404, "unknown_session", parts[1])
            with s.lock:
                if len(parts) == 2:
                    return self._send(200, s.view())
                if parts[2] == "history":
                    return self._send(200, {"id": s.id, "history": s.history, "hash": s.hash()})
                if parts[2] == "analysis":
                    bound = int(parse_qs(url.query).get("bound", ["8"])[0])
                    try:
                        out = s.analysis(bound)
                    except QpmutError as exc:
                        return self._fail(409, exc.code, str(exc))
                    out["hash"] = s.hash()
                    return self._send(200, out)
            return self._fail(404, "unknown_route", url.path)
        if self._serve_static(url.path):
            return
        return self._fail(404, "unknown_route", url.path)

    def do_POST(self):
        url = urlparse(self.path)
        parts = [p for p in url.path.split("/") if p]
        try:
            body = self._body()
        except json.JSONDecodeError as exc:
            return self._fail(400, "malformed_input", str(exc))
        if parts == ["sessions"]:
            try:
                s = self.store.create(body)
            except QpmutError as exc:
                return self._fail(409, exc.code, str(exc))
            return self._send(201, s.view())
        if parts[:1] == ["sessions"] and len(parts) == 3:
            s = self.store.get(parts[1])
            if s is None:
                return self._fail(404, "unknown_session", parts[1])
            with s.lock:
                try:
                    if parts[2] == "mutate":
                        s.mutate(body)
                    elif parts[2] == "undo":
                        s.undo()
                    else:
                        return self._fail(404, "unknown_route", url.path)
                except QpmutError as exc:
                    return self._fail(409, exc.code, str(exc))
                return self._send(200, s.view())
        return self._fail(404, "unknown_route", url.path)


def make_server(port: int = 0, static_dir: str | None = None) -> ThreadingHTTPServer:
    store = SessionStore()
    resolved = str(Path(static_dir).resolve()) if static_dir else None
    handler = type("BoundHandler", (Handler,), {"store": store, "static_dir": resolved})
    server = ThreadingHTTPServer(("127.0.0.1", port), handler)
    server.store = store  # type: ignore[attr-defined]
    return server


def serve(port: int, static_dir: str | None = None, announce=None) -> None:
    server = make_server(port, static_dir)
    host, actual_port = server.server_address
    if announce is not None:
        announce.write(json.dumps({"listening": f"http://{host}:{actual_port}"}) + "\n")
        announce.flush()
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        snap = os.environ.get("QPMUT_SNAPSHOT")
        if snap:
            server.store.snapshot(snap)  # type: ignore[attr-defined]
        server.server_close()
