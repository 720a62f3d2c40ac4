"""Embedded HTTP service exposing the analysis operations.

The service holds exactly one model at a time.  The loaded session is an
immutable snapshot swapped atomically on upload, so concurrent requests
either see the old model or the new one, never a half-loaded state.  Every
computation is delegated to the same functions the CLI uses; endpoints do
no arithmetic of their own.

Endpoints (JSON in, JSON out):

- GET  /api/model        current model summary (404 when nothing loaded)
- POST /api/model        upload a model payload in any supported format
- POST /api/covary       {"vary": {...}, "scheme": ...}
- POST /api/sensitivity  {"vary": [...], "event": ..., "schemes": [...],
                          "grid": n}
- POST /api/divergence   {"vary": {...}, "scheme": ..., "metrics": [...]}
- POST /api/classify     {"vary": {...}, "samples": n, "seed": n}
- POST /api/project      {"vary": {...}, "grid": n}

Domain errors map to 400, scheme-domain errors to 422, and the projection
guard to 413, each carrying the originating error case name.
"""

from __future__ import annotations

import os
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .covariation import covary
from .divergences import divergence_between
from .errors import MmsaError, ModelFormatError
from .modelio import (
    SessionModel,
    parse_event,
    parse_targets,
    parse_variation,
    session_from_dict,
)
from .sensitivity import analyze, i_projection_oracle, sweep
from .serialize import (
    analysis_to_dict,
    covariation_to_dict,
    model_summary,
    projection_to_dict,
    sweep_to_dict,
)

DEFAULT_GRID = int(os.environ.get("MMSA_GRID_DEFAULT", "99"))


def create_app(
    session: SessionModel | None = None, ui_dir: str | Path | None = None
) -> FastAPI:
    app = FastAPI(title="mmsa", docs_url=None, redoc_url=None)
    app.state.session = session
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(MmsaError)
    async def _domain_error(_req: Request, err: MmsaError) -> JSONResponse:
        return JSONResponse(
            status_code=err.http_status,
            content={"error": err.case, "detail": str(err)},
        )

    @app.exception_handler(Exception)
    async def _fallback(_req: Request, err: Exception) -> JSONResponse:
        if isinstance(err, (KeyError, ValueError, TypeError, IndexError)):
            return JSONResponse(
                status_code=400,
                content={"error": "bad_request", "detail": str(err)},
            )
        raise err

    def current() -> SessionModel:
        loaded = app.state.session
        if loaded is None:
            raise _NoModel()
        return loaded

    @app.get("/api/model")
    async def get_model():
        return model_summary(current())

    @app.post("/api/model")
    async def post_model(request: Request):
        payload = await request.json()
        app.state.session = session_from_dict(payload)
        return model_summary(app.state.session)

    @app.post("/api/covary")
    async def post_covary(request: Request):
        loaded = current()
        payload = await request.json()
        spec = parse_variation(payload, loaded.theta)
        result = covary(loaded.model, loaded.theta, spec)
        return covariation_to_dict(result, loaded.theta)

    @app.post("/api/sensitivity")
    async def post_sensitivity(request: Request):
        loaded = current()
        payload = await request.json()
        vary = payload.get("vary")
        if isinstance(vary, (str, int)):
            vary = [vary]
        if not isinstance(vary, list) or not vary:
            raise ModelFormatError(
                '"vary" must list the swept parameter(s)'
            )
        from .modelio import resolve_param

        varied = [resolve_param(tok, loaded.theta) for tok in vary]
        event = parse_event(payload["event"], loaded)
        schemes = payload.get("schemes") or ["proportional"]
        grid = int(payload.get("grid") or DEFAULT_GRID)
        curves = sweep(loaded.model, loaded.theta, varied, schemes, event, grid)
        return sweep_to_dict([loaded.theta.labels[j] for j in varied], curves)

    @app.post("/api/divergence")
    async def post_divergence(request: Request):
        loaded = current()
        payload = await request.json()
        spec = parse_variation(payload, loaded.theta)
        result = covary(loaded.model, loaded.theta, spec)
        metrics = payload.get("metrics") or ["kl", "cd"]
        return {
            metric: divergence_between(
                loaded.model, result.theta_new, loaded.theta, metric
            )
            for metric in metrics
        }

    @app.post("/api/classify")
    async def post_classify(request: Request):
        loaded = current()
        payload = await request.json()
        targets = parse_targets(payload, loaded.theta)
        report = analyze(
            loaded.model,
            loaded.theta,
            targets,
            samples=int(payload.get("samples", 50)),
            seed=int(payload.get("seed", 0)),
            run_oracle=False,
        )
        return analysis_to_dict(report)

    @app.post("/api/project")
    async def post_project(request: Request):
        loaded = current()
        payload = await request.json()
        targets = parse_targets(payload, loaded.theta)
        grid = int(payload.get("grid") or DEFAULT_GRID)
        result = i_projection_oracle(loaded.model, loaded.theta, targets, grid)
        return projection_to_dict(result)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


class _NoModel(MmsaError):
    case = "no_model"
    http_status = 404

    def __init__(self) -> None:
        super().__init__("no model is loaded; POST /api/model first")


def serve(
    port: int,
    session: SessionModel | None = None,
    ui_dir: str | Path | None = None,
    host: str = "127.0.0.1",
) -> None:
    """Run the service until interrupted."""
    import uvicorn

    uvicorn.run(create_app(session, ui_dir), host=host, port=port)
