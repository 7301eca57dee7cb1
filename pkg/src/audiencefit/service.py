"""HTTP facade over the engine for the planner UI and other clients.

Stateless JSON over HTTP: every request carries its full scenario, and an
identical request (including its seed) yields an identical response body.
"""

from __future__ import annotations

import uuid
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import SCHEMA_VERSION, __version__
from .engine import run_correct, run_evaluate
from .model import DEFAULT_PRINCIPLES
from .scenario import ScenarioError, validate_scenario_data

MAX_BODY_BYTES = 1_000_000

# Built planner UI, when the frontend bundle has been produced.
UI_DIST = Path(__file__).resolve().parents[2] / "frontend" / "dist"


class EvaluateResponse(BaseModel):
    report: dict[str, Any]
    errors: list[dict[str, str]] = []


class CatalogResponse(BaseModel):
    principles: list[str]
    schema_version: str
    engine_version: str


def create_app(port: int = 8000, ui_dir: Path | None = None) -> FastAPI:
    app = FastAPI(title="audiencefit", version=__version__)

    app.add_middleware(
        CORSMiddleware,
        allow_origins=[f"http://localhost:{port}", f"http://127.0.0.1:{port}"],
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )

    @app.middleware("http")
    async def limit_body_size(request: Request, call_next):
        length = request.headers.get("content-length")
        if length is not None and int(length) > MAX_BODY_BYTES:
            return JSONResponse(
                status_code=413,
                content={"errors": [{"path": "", "message": "request body exceeds 1 MB"}]},
            )
        return await call_next(request)

    @app.exception_handler(ScenarioError)
    async def scenario_error_handler(request: Request, err: ScenarioError):
        return JSONResponse(status_code=422, content={"errors": err.issues})

    @app.exception_handler(Exception)
    async def internal_error_handler(request: Request, err: Exception):
        return JSONResponse(
            status_code=500,
            content={
                "errors": [
                    {"path": "", "message": f"internal error (id {uuid.uuid4().hex})"}
                ]
            },
        )

    @app.post("/api/evaluate", response_model=EvaluateResponse)
    async def evaluate(request: Request) -> EvaluateResponse:
        scenario = validate_scenario_data(await _json_body(request))
        return EvaluateResponse(report=run_evaluate(scenario))

    @app.post("/api/correct", response_model=EvaluateResponse)
    async def correct(request: Request) -> EvaluateResponse:
        scenario = validate_scenario_data(await _json_body(request))
        return EvaluateResponse(report=run_correct(scenario))

    @app.get("/api/catalog", response_model=CatalogResponse)
    async def catalog() -> CatalogResponse:
        return CatalogResponse(
            principles=list(DEFAULT_PRINCIPLES),
            schema_version=SCHEMA_VERSION,
            engine_version=__version__,
        )

    ui = ui_dir if ui_dir is not None else UI_DIST
    if ui.is_dir():
        app.mount("/", StaticFiles(directory=ui, html=True), name="ui")

    return app


async def _json_body(request: Request) -> Any:
    try:
        return await request.json()
    except Exception:
        raise ScenarioError.single("", "request body is not valid JSON") from None
