"""HTTP review service.

Exposes the blocking review session over three small endpoints so a
browser client can pull masked tasks and push labels while the protocol
thread waits.  The payloads carry only masked display states: no
plaintext beyond what the disclosure policy already released for the
pair, and never the owners' secret.
"""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Literal

import numpy as np
from fastapi import FastAPI, HTTPException, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .experiment import RunConfig, build_base, write_run_artifacts
from .protocol import run_protocol
from .review import DuplicateLabel, ReviewSession, SessionClosed


class LabelBody(BaseModel):
    label: Literal["match", "nonmatch"]


def create_app(session: ReviewSession, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(docs_url=None, redoc_url=None, openapi_url=None)
    app.state.session = session

    @app.get("/api/session")
    def session_info() -> dict:
        return {
            "run_id": session.run_id,
            "pending_count": session.pending_count,
            "budget_remaining": session.budget_remaining,
        }

    @app.get("/api/tasks/next")
    def next_task() -> Response:
        task = session.next_task()
        if task is None:
            return Response(status_code=204)
        import json

        return Response(
            content=json.dumps(task.to_json()), media_type="application/json"
        )

    @app.post("/api/tasks/{pair_id}/label")
    def submit_label(pair_id: int, body: LabelBody) -> dict:
        try:
            session.submit(pair_id, body.label == "match")
        except (KeyError, DuplicateLabel, SessionClosed) as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return {"ok": True, "pair_id": pair_id}

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


class ServeState:
    """Protocol thread plus its session, for a live review service."""

    def __init__(self, config: RunConfig, out_dir: Path | None) -> None:
        self.config = config
        self.out_dir = out_dir
        self.session = ReviewSession(run_id=f"serve-{config.seed:08d}")
        self.error: BaseException | None = None
        self.thread = threading.Thread(target=self._drive, daemon=True)

    def _drive(self) -> None:
        try:
            base = build_base(self.config)

            def factory(truth_by_pair: dict[int, bool], rng: np.random.Generator):
                return self.session

            result = run_protocol(
                base,
                self.config.protocol,
                seed=self.config.seed,
                oracle_factory=factory,
                run_id=self.session.run_id,
            )
            if self.out_dir is not None:
                write_run_artifacts(result, self.config, self.out_dir)
        except BaseException as exc:  # surfaced via /api/session consumers
            self.error = exc
            self.session.close()

    def start(self) -> None:
        self.thread.start()


def serve_run(
    config: RunConfig,
    *,
    host: str = "127.0.0.1",
    port: int = 8000,
    ui_dir: str | Path | None = None,
    out_dir: Path | None = None,
) -> None:
    """Run the protocol with a live reviewer behind an HTTP service."""
    import uvicorn

    state = ServeState(config, out_dir)
    app = create_app(state.session, ui_dir=ui_dir)
    state.start()
    uvicorn.run(app, host=host, port=port, log_level="warning")
