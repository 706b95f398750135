"""HTTP service: session state, search, mixing, modification, rendering.

All mutable state lives in Session objects; generation 0 is shared
read-only. Mutating requests on one session are serialized by a per-session
lock while requests across sessions run in parallel. When a state directory
is configured, every mutation appends one line to an event log and mixed
generations are written out as bank/embedding files, so a restart rebuilds
every session by replaying the log. Timestamps live only in sidecar meta
files, which keeps the generation bank files byte-stable across replays.
"""

from __future__ import annotations

import datetime as _dt
import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Optional, Union

import numpy as np
from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import modify as modify_mod
from .bank import Generation, dump_bank, generate_bank, load_bank, parse_bank
from .config import AppConfig, load_config
from .embed import embed_generation, load_embeddings, provider_from_spec, save_embeddings
from .errors import (
    DataError,
    PresetLabError,
    ProviderError,
    UnknownPresetError,
    UnknownSessionError,
)
from .mixing import Favorites, GenerationChain, GenerationMeta, mix
from .preset import Preset, diff_presets
from .render import DEFAULT_CONFIG, SynthConfig, preset_sound_hash, render
from .schema import load_reference_schema, load_schema
from .search import audio_search, text_search


def _utcnow() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat()


@dataclass
class Session:
    id: str
    chain: GenerationChain
    favorites: Favorites
    matrix: Optional[modify_mod.ExampleMatrix] = None
    modify_query: Optional[object] = None  # str or ("audio", preset_id)
    working: dict = field(default_factory=dict)  # modified presets by id
    current_preset_id: Optional[str] = None
    created_at: str = field(default_factory=_utcnow)
    updated_at: str = field(default_factory=_utcnow)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def find_preset(self, preset_id: str) -> Preset:
        if preset_id in self.working:
            return self.working[preset_id]
        return self.chain.find_preset(preset_id)


class EventStore:
    """Append-only JSONL mutation log plus generation files on disk."""

    def __init__(self, state_dir: str | Path):
        self.root = Path(state_dir)
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / "generations").mkdir(exist_ok=True)
        self.log_path = self.root / "sessions.log"

    def append(self, event: dict) -> None:
        with self.log_path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")
            fh.flush()

    def events(self):
        if not self.log_path.is_file():
            return
        with self.log_path.open("r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    yield json.loads(line)

    def generation_paths(self, sid: str, index: int) -> tuple[Path, Path, Path]:
        base = self.root / "generations" / f"{sid}_gen{index}"
        return (base.with_suffix(".bank"), base.with_suffix(".emb"),
                base.with_suffix(".meta"))

    def save_generation(self, sid: str, index: int, gen: Generation,
                        meta: GenerationMeta, schema, dimension: int) -> None:
        bank_path, emb_path, meta_path = self.generation_paths(sid, index)
        bank_path.write_text(dump_bank(gen, schema), encoding="utf-8")
        audio = {p.id: gen.embedding_matrix[i] for i, p in enumerate(gen.presets)}
        save_embeddings(emb_path, dimension, audio)
        meta_path.write_text(json.dumps({
            "index": index,
            "parents": list(meta.parents),
            "seed": meta.seed,
            "created_at": meta.created_at,
        }, sort_keys=True) + "\n", encoding="utf-8")

    def load_generation(self, sid: str, index: int, schema) -> tuple[Generation, GenerationMeta]:
        bank_path, emb_path, meta_path = self.generation_paths(sid, index)
        gen = load_bank(bank_path, schema)
        dimension, audio, _ = load_embeddings(emb_path)
        rows = np.empty((len(gen), dimension))
        for i, preset in enumerate(gen.presets):
            rows[i] = audio[preset.id]
        gen.embedding_matrix = rows
        raw = json.loads(meta_path.read_text(encoding="utf-8"))
        meta = GenerationMeta(parents=tuple(raw["parents"]), seed=raw["seed"],
                              created_at=raw["created_at"])
        return gen, meta


class Engine:
    """Owns shared immutable state (schema, bank, provider) and the session
    table; every endpoint delegates here so log replay reuses the same code
    paths with recording switched off."""

    def __init__(self, config: AppConfig):
        self.config = config
        self.synth_config = DEFAULT_CONFIG
        self.schema = (load_schema(config.schema_path) if config.schema_path
                       else load_reference_schema())
        if config.bank_path:
            self.gen0 = load_bank(config.bank_path, self.schema)
        else:
            self.gen0 = generate_bank(self.schema, config.bank_size, config.bank_seed)
        self.provider = provider_from_spec(config.provider, self.synth_config)
        embed_generation(self.gen0, self.provider, self.schema, self.synth_config)
        self.sessions: dict[str, Session] = {}
        self._table_lock = threading.Lock()
        self._render_cache: dict[tuple[str, str], bytes] = {}
        self.store = EventStore(config.state_dir) if config.state_dir else None
        if self.store is not None:
            self._replay()

    # -- session table ----------------------------------------------------

    def session(self, sid: str) -> Session:
        try:
            return self.sessions[sid]
        except KeyError:
            raise UnknownSessionError(f"no session {sid!r}") from None

    def create_session(self, sid: str | None = None, record: bool = True) -> Session:
        with self._table_lock:
            sid = sid or f"s{uuid.uuid4().hex[:12]}"
            if sid in self.sessions:
                raise DataError(f"session {sid!r} already exists")
            sess = Session(id=sid,
                           chain=GenerationChain.from_default_bank(self.gen0),
                           favorites=Favorites())
            self.sessions[sid] = sess
        if record and self.store:
            self.store.append({"e": "create", "sid": sid})
        return sess

    # -- mutations (callers hold the session lock) ------------------------

    def favorite(self, sess: Session, action: str, preset_id: str,
                 record: bool = True) -> list[str]:
        sess.chain.find_preset(preset_id)  # reject unknown ids up front
        if action == "add":
            sess.favorites.add(preset_id)
        elif action == "remove":
            sess.favorites.remove(preset_id)
        else:
            raise DataError(f"unknown favorites action {action!r}")
        sess.updated_at = _utcnow()
        if record and self.store:
            self.store.append({"e": "fav", "sid": sess.id,
                               "action": action, "pid": preset_id})
        return list(sess.favorites.ids)

    def run_mix(self, sess: Session, seed: int | None,
                record: bool = True) -> dict:
        if seed is None:
            seed = int(np.random.SeedSequence().entropy % (2 ** 31))
        index = len(sess.chain.generations)
        gen = mix(sess.favorites, sess.chain, self.schema, self.provider,
                  seed=seed, config=self.synth_config,
                  ops_per_pair=self.config.mix_ops_per_pair)
        meta = sess.chain.metas[-1]
        sess.updated_at = _utcnow()
        if self.store:
            self.store.save_generation(sess.id, index, gen, meta, self.schema,
                                       self.provider.dimension)
            if record:
                self.store.append({"e": "mix", "sid": sess.id,
                                   "index": index, "seed": seed})
        return {"index": index, "size": len(gen), "seed": seed,
                "parents": list(meta.parents),
                "children": [p.id for p in gen.presets]}

    def navigate(self, sess: Session, direction: str, record: bool = True) -> dict:
        sess.chain.navigate(direction)
        sess.updated_at = _utcnow()
        if record and self.store:
            self.store.append({"e": "nav", "sid": sess.id, "dir": direction})
        return {"index": sess.chain.cursor,
                "size": len(sess.chain.current()),
                "count": len(sess.chain.generations)}

    def modify_search(self, sess: Session, base_id: str, query,
                      record: bool = True) -> dict:
        base = sess.find_preset(base_id)
        sess.matrix = modify_mod.search_examples(
            query, sess.chain.current(), self.provider, self.schema, base,
            columns=self.config.example_columns)
        sess.modify_query = query
        sess.current_preset_id = base_id
        sess.updated_at = _utcnow()
        if record and self.store:
            q = list(query) if isinstance(query, tuple) else ["text", query]
            self.store.append({"e": "modify_search", "sid": sess.id,
                               "base": base_id, "query": q})
        return sess.matrix.snapshot()

    def modify_apply(self, sess: Session, group: str, column,
                     record: bool = True) -> dict:
        if sess.matrix is None:
            raise DataError("no example matrix: run a modification search first")
        result = modify_mod.apply_selection(sess.matrix, group, column, self.schema)
        if result is not sess.matrix.base:
            sess.working[result.id] = result
        sess.current_preset_id = result.id
        sess.updated_at = _utcnow()
        if record and self.store:
            self.store.append({"e": "modify_apply", "sid": sess.id,
                               "group": group, "column": column})
        diff = diff_presets(sess.matrix.base, result, self.schema)
        return {
            "preset": preset_record(result),
            "diff": diff_record(diff),
            "selections": dict(sess.matrix.selections),
        }

    # -- reads -------------------------------------------------------------

    def importance(self, sess: Session) -> modify_mod.GroupImportance:
        if sess.modify_query is None:
            raise DataError("no modification query: run a modification search first")
        return modify_mod.group_importance(
            sess.modify_query, sess.chain.current(), self.provider, self.schema,
            corpus_size=self.config.importance_corpus,
            alpha=self.config.smoothing_alpha)

    def wav_for(self, preset: Preset) -> bytes:
        key = (preset_sound_hash(preset, self.schema), self.synth_config.hash())
        cached = self._render_cache.get(key)
        if cached is None:
            cached = render(preset, self.schema, self.synth_config).wav_bytes()
            self._render_cache[key] = cached
        return cached

    def resolve_preset(self, preset_id: str, sid: str | None) -> Preset:
        if sid is not None:
            return self.session(sid).find_preset(preset_id)
        return self.gen0.get(preset_id)

    # -- startup replay ----------------------------------------------------

    def _replay(self) -> None:
        for ev in self.store.events():
            kind = ev.get("e")
            if kind == "create":
                self.create_session(ev["sid"], record=False)
                continue
            sess = self.sessions.get(ev["sid"])
            if sess is None:
                continue  # tolerate a truncated or hand-edited log
            if kind == "fav":
                self.favorite(sess, ev["action"], ev["pid"], record=False)
            elif kind == "mix":
                gen, meta = self.store.load_generation(ev["sid"], ev["index"], self.schema)
                sess.chain.append(gen, meta)
            elif kind == "nav":
                self.navigate(sess, ev["dir"], record=False)
            elif kind == "modify_search":
                q = ev["query"]
                query = tuple(q) if q[0] == "audio" else q[1]
                self.modify_search(sess, ev["base"], query, record=False)
            elif kind == "modify_apply":
                self.modify_apply(sess, ev["group"], ev["column"], record=False)


# -- wire records -----------------------------------------------------------


def preset_record(preset: Preset) -> dict:
    return {"id": preset.id, "name": preset.name,
            "provenance": preset.provenance, "values": dict(preset.values)}


def diff_record(diff) -> dict:
    return {
        "changed_params": [{"id": pid, "old": old, "new": new}
                           for pid, old, new in diff.changed_params],
        "changed_groups": sorted(diff.changed_groups),
    }


def results_record(results, resolve) -> dict:
    rows = []
    for r in results.results:
        preset = resolve(r.preset_id)
        rows.append({"rank": r.rank, "id": r.preset_id, "score": r.score,
                     "name": preset.name, "provenance": preset.provenance})
    return {"kind": results.kind, "results": rows}


def importance_record(imp: modify_mod.GroupImportance) -> dict:
    return {"scores": imp.to_records(), "top_group": imp.top_group,
            "corpus_size": imp.corpus_size, "truncated": imp.truncated}


def session_record(sess: Session) -> dict:
    chain = []
    for i, meta in enumerate(sess.chain.metas):
        entry = {"index": i, "size": len(sess.chain.generations[i])}
        if meta is not None:
            entry["parents"] = list(meta.parents)
            entry["seed"] = meta.seed
        chain.append(entry)
    return {
        "session": sess.id,
        "created_at": sess.created_at,
        "updated_at": sess.updated_at,
        "generation": {"index": sess.chain.cursor,
                       "size": len(sess.chain.current()),
                       "count": len(sess.chain.generations)},
        "chain": chain,
        "favorites": list(sess.favorites.ids),
        "current_preset": sess.current_preset_id,
        "matrix": sess.matrix.snapshot() if sess.matrix else None,
    }


# -- request bodies -----------------------------------------------------------


class TextSearchBody(BaseModel):
    session: str
    query: str
    k: Optional[int] = None


class AudioSearchBody(BaseModel):
    session: str
    preset_id: str
    k: Optional[int] = None


class FavoritesBody(BaseModel):
    session: str
    preset_id: str
    action: Literal["add", "remove"]


class MixBody(BaseModel):
    session: str
    seed: Optional[int] = None


class NavigateBody(BaseModel):
    session: str
    dir: Literal["next", "prev", "clear"]


class ModifySearchBody(BaseModel):
    session: str
    base_id: str
    query: Optional[str] = None
    anchor_id: Optional[str] = None


class ModifyApplyBody(BaseModel):
    session: str
    group: str
    column: Union[int, Literal["old"]]


# -- app ----------------------------------------------------------------------


_STATUS_BY_ERROR = (
    (UnknownSessionError, 404, "not_found"),
    (UnknownPresetError, 404, "not_found"),
    (ProviderError, 422, "provider_error"),
    (DataError, 400, "data_error"),
)


def create_app(config: AppConfig | None = None, engine: Engine | None = None) -> FastAPI:
    config = config or load_config()
    engine = engine or Engine(config)
    app = FastAPI(title="presetlab", docs_url=None, redoc_url=None)
    app.state.engine = engine

    @app.exception_handler(PresetLabError)
    def _engine_error(request: Request, exc: PresetLabError):
        for klass, status, code in _STATUS_BY_ERROR:
            if isinstance(exc, klass):
                return JSONResponse(status_code=status, content={
                    "code": code, "message": str(exc),
                    "detail": type(exc).__name__})
        return JSONResponse(status_code=500, content={
            "code": "internal", "message": str(exc),
            "detail": type(exc).__name__})

    @app.exception_handler(RequestValidationError)
    def _bad_request(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422, content={
            "code": "usage_error", "message": "invalid request body",
            "detail": exc.errors()})

    @app.get("/health")
    def health():
        from .kernels import BACKEND

        return {"status": "ok", "bank_size": len(engine.gen0),
                "provider": engine.provider.name, "kernel_backend": BACKEND,
                "sample_rate": engine.synth_config.sample_rate}

    @app.post("/sessions")
    def create_session():
        sess = engine.create_session()
        return session_record(sess)

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        return session_record(engine.session(sid))

    @app.post("/search/text")
    def search_text(body: TextSearchBody):
        sess = engine.session(body.session)
        k = engine.config.search_k if body.k is None else body.k
        gen = sess.chain.current()
        results = text_search(body.query, gen, engine.provider, k)
        return results_record(results, gen.get)

    @app.post("/search/audio")
    def search_audio(body: AudioSearchBody):
        sess = engine.session(body.session)
        k = engine.config.search_k if body.k is None else body.k
        gen = sess.chain.current()
        results = audio_search(body.preset_id, gen, k)
        return results_record(results, gen.get)

    @app.post("/favorites")
    def favorites(body: FavoritesBody):
        sess = engine.session(body.session)
        with sess.lock:
            ids = engine.favorite(sess, body.action, body.preset_id)
        return {"favorites": ids}

    @app.post("/mix")
    def mix_endpoint(body: MixBody):
        sess = engine.session(body.session)
        with sess.lock:
            return engine.run_mix(sess, body.seed)

    @app.post("/generations/navigate")
    def navigate(body: NavigateBody):
        sess = engine.session(body.session)
        with sess.lock:
            return engine.navigate(sess, body.dir)

    @app.post("/modify/search")
    def modify_search(body: ModifySearchBody):
        sess = engine.session(body.session)
        if (body.query is None) == (body.anchor_id is None):
            raise DataError("provide exactly one of query or anchor_id")
        query = body.query if body.query is not None else ("audio", body.anchor_id)
        with sess.lock:
            return engine.modify_search(sess, body.base_id, query)

    @app.post("/modify/apply")
    def modify_apply(body: ModifyApplyBody):
        sess = engine.session(body.session)
        with sess.lock:
            return engine.modify_apply(sess, body.group, body.column)

    @app.get("/modify/importance")
    def modify_importance(session: str = Query(...)):
        sess = engine.session(session)
        return importance_record(engine.importance(sess))

    @app.get("/render/{preset_id}")
    def render_preset(preset_id: str, session: Optional[str] = Query(default=None)):
        preset = engine.resolve_preset(preset_id, session)
        return Response(content=engine.wav_for(preset), media_type="audio/wav")

    @app.get("/presets/{preset_id}")
    def get_preset(preset_id: str, session: Optional[str] = Query(default=None)):
        return preset_record(engine.resolve_preset(preset_id, session))

    @app.get("/presets/{preset_id}/diff")
    def get_diff(preset_id: str, against: str = Query(...),
                 session: Optional[str] = Query(default=None)):
        target = engine.resolve_preset(preset_id, session)
        base = engine.resolve_preset(against, session)
        return diff_record(diff_presets(base, target, engine.schema))

    static_dir = config.static_dir or (
        "frontend/dist" if Path("frontend/dist").is_dir() else None)
    if static_dir and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="studio")

    return app
