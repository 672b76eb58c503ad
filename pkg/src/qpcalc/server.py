"""Session-oriented HTTP JSON API powering the interactive explorer.

Sessions are in-memory; snapshot 0 is the loaded QP and every later
snapshot is the mutation of the previous one at a recorded vertex.
Commands on one session are serialized by a per-session lock.  With
QPCALC_PERSIST (or --persist) set, accepted commands are appended as
JSON lines and replayed on startup.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
from dataclasses import dataclass, field as dc_field

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from . import examples as ex
from .errors import QpcalcError
from .fields import QQ, FieldError, field_by_name
from .ginzburg import build_ginzburg, degree0_criterion, truncation_homology
from .dgmod import phi_interval_of_simple
from .mutation import arrow_multiset, involution_report, mutate
from .qp import QP, jacobian_dims, validate_qp
from .qpformat import (
    format_qp_text,
    parse_qp_text,
    qp_from_json_dict,
    qp_to_dot,
    qp_to_json_dict,
)

DISPLAY_TERM_MAX_LEN = 8
DISPLAY_TERM_CAP = 200


@dataclass
class Snapshot:
    qp: QP
    via_vertex: str | None  # None for the initial snapshot
    name_table: dict = dc_field(default_factory=dict)
    trivial_pairs: list = dc_field(default_factory=list)


@dataclass
class Session:
    id: str
    history: list
    lock: threading.Lock = dc_field(default_factory=threading.Lock)

    @property
    def current(self) -> Snapshot:
        return self.history[-1]


class SessionStore:
    def __init__(self, persist_path: str | None = None):
        self.sessions: dict[str, Session] = {}
        self.lock = threading.Lock()
        self.persist_path = persist_path

    def new_id(self) -> str:
        return secrets.token_hex(8)

    def create(self, qp: QP, sid: str | None = None) -> Session:
        with self.lock:
            sid = sid or self.new_id()
            sess = Session(sid, [Snapshot(qp, None)])
            self.sessions[sid] = sess
            return sess

    def get(self, sid: str) -> Session | None:
        with self.lock:
            return self.sessions.get(sid)

    def log(self, record: dict):
        if not self.persist_path:
            return
        with self.lock:
            with open(self.persist_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, sort_keys=True) + "\n")

    def replay(self):
        if not self.persist_path or not os.path.exists(self.persist_path):
            return
        with open(self.persist_path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                try:
                    if rec["op"] == "create":
                        field = field_by_name(rec.get("field", "rational"))
                        qp = qp_from_json_dict(rec["qp"], field)
                        self.create(qp, sid=rec["id"])
                    elif rec["op"] == "mutate":
                        sess = self.sessions.get(rec["id"])
                        if sess:
                            res = mutate(sess.current.qp, rec["vertex"])
                            sess.history.append(Snapshot(
                                res.result, rec["vertex"], res.name_table,
                                res.trivial_pairs or []))
                    elif rec["op"] == "undo":
                        sess = self.sessions.get(rec["id"])
                        if sess and len(sess.history) > 1:
                            sess.history.pop()
                except (QpcalcError, KeyError, ValueError):
                    continue


def _potential_display(qp: QP) -> list[dict]:
    terms = []
    for p, c in qp.potential.canonical_series().sorted_terms():
        if p.length > DISPLAY_TERM_MAX_LEN:
            continue
        terms.append({"coeff": str(c), "word": [x.name for x in p.letters()],
                      "length": p.length})
    terms.sort(key=lambda t: (t["length"], t["word"]))
    return terms[:DISPLAY_TERM_CAP]


def _state(sess: Session) -> dict:
    snap = sess.current
    qp = snap.qp
    rep = validate_qp(qp)
    orders = list(range(1, max(1, qp.accuracy) + 1))
    dims = jacobian_dims(qp, orders)
    return {
        "id": sess.id,
        "vertices": list(qp.quiver.vertices),
        "arrows": [{"name": a.name, "src": a.source, "dst": a.target}
                   for a in qp.quiver.arrows],
        "potential": _potential_display(qp),
        "truncation": qp.trunc,
        "accuracy": qp.accuracy,
        "validation": {
            "in_m2": rep.in_m2,
            "vertices": {
                v: {"loop": r.loop, "two_cycle": r.two_cycle,
                    "mutable": not (r.loop or r.two_cycle)}
                for v, r in rep.vertex.items()
            },
        },
        "jacobian": {"orders": orders, "dims": dims},
        "history_length": len(sess.history),
        "trail": ["initial"] + [s.via_vertex for s in sess.history[1:]],
    }


def _delta(old: QP, new_snap: Snapshot) -> dict:
    old_names = {a.name for a in old.quiver.arrows}
    new_names = {a.name for a in new_snap.qp.quiver.arrows}
    return {
        "added": sorted(new_names - old_names),
        "removed": sorted(old_names - new_names),
        "cancelled_pairs": [list(p) for p in new_snap.trivial_pairs],
    }


def create_app(store: SessionStore | None = None,
               default_trunc: int = 6) -> FastAPI:
    app = FastAPI(title="qpcalc session service")
    store = store or SessionStore(os.environ.get("QPCALC_PERSIST") or None)
    store.replay()
    app.state.store = store

    def error(status: int, message: str, diagnostics=None):
        body = {"error": message}
        if diagnostics:
            body["diagnostics"] = diagnostics
        return JSONResponse(body, status_code=status)

    @app.get("/examples")
    def list_examples():
        out = {}
        for name, maker in ex.NAMED.items():
            out[name] = format_qp_text(maker(default_trunc))
        return out

    @app.post("/sessions")
    async def create_session(request: Request):
        ctype = request.headers.get("content-type", "")
        field = QQ
        try:
            if ctype.startswith("application/json"):
                body = await request.json()
                if "field" in body:
                    field = field_by_name(str(body["field"]))
                if "example" in body:
                    qp = ex.named_qp(str(body["example"]),
                                     int(body.get("truncation", default_trunc)))
                elif "text" in body:
                    qp, diags = parse_qp_text(str(body["text"]), field,
                                              int(body.get("truncation", default_trunc)))
                    if qp is None:
                        return error(400, "parse failed",
                                     [{"line": d.line, "col": d.col,
                                       "message": d.message, "token": d.token}
                                      for d in diags])
                else:
                    qp = qp_from_json_dict(body, field)
            else:
                text = (await request.body()).decode("utf-8")
                qp, diags = parse_qp_text(text, field, default_trunc)
                if qp is None:
                    return error(400, "parse failed",
                                 [{"line": d.line, "col": d.col,
                                   "message": d.message, "token": d.token}
                                  for d in diags])
        except (QpcalcError, FieldError, KeyError, ValueError) as exc:
            return error(400, str(exc))
        if not qp.quiver.vertices:
            return error(400, "quiver must be non-empty")
        sess = store.create(qp)
        store.log({"op": "create", "id": sess.id, "qp": qp_to_json_dict(qp),
                   "field": qp.field.name})
        return JSONResponse({"id": sess.id, "state": _state(sess)}, status_code=201)

    @app.get("/sessions/{sid}")
    def get_state(sid: str, request: Request, vertex: str | None = None):
        sess = store.get(sid)
        if sess is None:
            return error(404, "unknown session")
        with sess.lock:
            state = _state(sess)
            panels = request.query_params.getlist("panel")
            qp = sess.current.qp
            if panels:
                state["panels"] = {}
            for name in panels:
                try:
                    if name == "homology":
                        g = build_ginzburg(qp)
                        hi = min(qp.accuracy, qp.trunc)
                        table = truncation_homology(g, range(1, hi + 1), range(-2, 1))
                        state["panels"]["homology"] = table.to_json()
                    elif name == "phi":
                        i = vertex or _first_mutable(qp)
                        if i is None:
                            state["panels"]["phi"] = {"error": "no mutable vertex"}
                        else:
                            n = min(qp.accuracy, qp.trunc)
                            state["panels"]["phi"] = {
                                "vertex": i,
                                "intervals": {
                                    j: list(phi_interval_of_simple(qp, i, j, n))
                                    for j in qp.quiver.vertices
                                },
                            }
                    elif name == "degree0":
                        i = vertex or _first_mutable(qp)
                        if i is None:
                            state["panels"]["degree0"] = {"error": "no mutable vertex"}
                        else:
                            n = min(qp.accuracy, qp.trunc)
                            r = degree0_criterion(qp, i, n)
                            state["panels"]["degree0"] = {
                                "vertex": i, "order": n,
                                "dims": {str(k): v for k, v in r.dims.items()},
                                "consistent": r.consistent,
                            }
                    elif name == "involution":
                        state["panels"]["involution"] = _involution_panel(sess)
                except QpcalcError as exc:
                    state["panels"][name] = {"error": str(exc)}
            return state

    def _first_mutable(qp: QP):
        for v in qp.quiver.vertices:
            if qp.is_mutable(v)[0]:
                return v
        return None

    def _involution_panel(sess: Session):
        # after mutating the same vertex twice in a row, compare with the
        # state two steps back
        if len(sess.history) < 3:
            return {"available": False}
        a, b = sess.history[-1], sess.history[-2]
        base = sess.history[-3].qp
        if a.via_vertex != b.via_vertex or a.via_vertex is None:
            return {"available": False}
        from .qp import split
        try:
            reduced = split(base).reduced
            orders = list(range(1, min(a.qp.accuracy, reduced.accuracy) + 1))
            ok = (arrow_multiset(reduced) == arrow_multiset(a.qp)
                  and jacobian_dims(reduced, orders) == jacobian_dims(a.qp, orders))
        except QpcalcError as exc:
            return {"available": True, "error": str(exc)}
        return {"available": True, "vertex": a.via_vertex,
                "passed": ok, "orders": orders}

    @app.post("/sessions/{sid}/mutate")
    async def mutate_session(sid: str, request: Request):
        sess = store.get(sid)
        if sess is None:
            return error(404, "unknown session")
        try:
            body = await request.json()
            vertex = str(body["vertex"])
        except (ValueError, KeyError):
            return error(400, "body must be JSON with a 'vertex' key")
        with sess.lock:
            qp = sess.current.qp
            if vertex not in qp.quiver.vertex_index:
                return error(404, f"unknown vertex {vertex}")
            ok, reason = qp.is_mutable(vertex)
            if not ok:
                return error(409, reason)
            if qp.accuracy - 1 < 1:
                return error(422, "accuracy watermark exhausted; "
                                  "reload at a higher truncation order")
            res = mutate(qp, vertex)
            snap = Snapshot(res.result, vertex, res.name_table,
                            res.trivial_pairs or [])
            sess.history.append(snap)
            store.log({"op": "mutate", "id": sid, "vertex": vertex})
            return {"state": _state(sess), "delta": _delta(qp, snap)}

    @app.post("/sessions/{sid}/undo")
    def undo(sid: str):
        sess = store.get(sid)
        if sess is None:
            return error(404, "unknown session")
        with sess.lock:
            if len(sess.history) < 2:
                return error(409, "nothing to undo")
            sess.history.pop()
            store.log({"op": "undo", "id": sid})
            return {"state": _state(sess)}

    @app.get("/sessions/{sid}/export")
    def export(sid: str, format: str = "qp"):
        sess = store.get(sid)
        if sess is None:
            return error(404, "unknown session")
        with sess.lock:
            qp = sess.current.qp
            if format == "qp":
                return PlainTextResponse(format_qp_text(qp))
            if format == "json":
                return JSONResponse(qp_to_json_dict(qp))
            if format == "dot":
                return PlainTextResponse(qp_to_dot(qp))
            return error(400, f"unknown format {format!r}")

    ui_dir = os.environ.get("QPCALC_UI_DIR")
    if not ui_dir:
        guess = os.path.join(os.path.dirname(os.path.dirname(
            os.path.dirname(os.path.abspath(__file__)))), "frontend", "dist")
        if os.path.isdir(guess):
            ui_dir = guess
    if ui_dir and os.path.isdir(ui_dir):
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def main(argv=None):
    import argparse

    import uvicorn

    ap = argparse.ArgumentParser(prog="qpcalc-server")
    ap.add_argument("--host", default="127.0.0.1")
    ap.add_argument("--port", type=int, default=8400)
    ap.add_argument("--persist", default=None, help="append-only JSONL log path")
    args = ap.parse_args(argv)
    store = SessionStore(args.persist or os.environ.get("QPCALC_PERSIST") or None)
    app = create_app(store)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")


if __name__ == "__main__":
    main()
