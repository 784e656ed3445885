"""HTTP service exposing the translation pipeline.

The lexicon is loaded once at startup and shared read-only across
requests; every endpoint is a thin wrapper over the core operations.
Pipeline failures (unknown token, no parse, missing sign, realization
gap) come back as 422 with a stable error code; malformed semantics or
bad requests come back as 400.
"""

from __future__ import annotations

from typing import Optional, Sequence

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..analysis import Reading, analyze
from ..errors import PipelineError, SemSyntaxError, UnknownLF
from ..generation import Realization, generate
from ..lexicon import Lexicon, has_errors, load_lexicon, require_lexicon, validate
from ..pipeline import translate
from ..semantics import parse_sem, render_sem
from .models import (
    AnalyzeRequest,
    AnalyzeResponse,
    DiagnosticModel,
    ErrorResponse,
    GenerateRequest,
    GenerateResponse,
    HealthResponse,
    ReadingModel,
    RealizationModel,
    TranslateRequest,
    TranslateResponse,
    ValidateRequest,
    ValidateResponse,
)


def _reading_model(reading: Reading) -> ReadingModel:
    return ReadingModel(
        construction=reading.construction,
        lf=reading.lf.render() if reading.lf else None,
        sem=render_sem(reading.sem),
        label=reading.label(),
    )


def _realization_model(realization: Realization) -> RealizationModel:
    return RealizationModel(
        surface=realization.surface,
        strategy=realization.strategy,
        lf=realization.lf_text,
        entry_ids=list(realization.entry_ids),
        record=realization.record(),
    )


def create_app(
    lexicon_paths: Optional[Sequence[str]] = None,
    lexicon: Optional[Lexicon] = None,
) -> FastAPI:
    """Build the service; pass either loaded lexicon or paths to load."""
    if lexicon is None:
        if lexicon_paths is None:
            from ..cli import default_lexicon_paths

            lexicon_paths = default_lexicon_paths()
        lexicon = require_lexicon(list(lexicon_paths))

    app = FastAPI(title="lf-transfer", version="1.0.0")
    app.state.lexicon = lexicon

    @app.exception_handler(PipelineError)
    async def pipeline_error(_request: Request, exc: PipelineError):
        return JSONResponse(
            status_code=422,
            content=ErrorResponse(code=exc.code, message=str(exc)).model_dump(),
        )

    @app.exception_handler(SemSyntaxError)
    async def sem_error(_request: Request, exc: SemSyntaxError):
        return JSONResponse(
            status_code=400,
            content=ErrorResponse(code="SEM_SYNTAX", message=str(exc)).model_dump(),
        )

    @app.exception_handler(UnknownLF)
    async def lf_error(_request: Request, exc: UnknownLF):
        return JSONResponse(
            status_code=400,
            content=ErrorResponse(code="UNKNOWN_LF", message=str(exc)).model_dump(),
        )

    @app.get("/health", response_model=HealthResponse)
    async def health() -> HealthResponse:
        lex: Lexicon = app.state.lexicon
        return HealthResponse(
            status="ok",
            languages=list(lex.languages),
            entries=len(lex.entries),
        )

    @app.post("/translate", response_model=TranslateResponse)
    async def translate_endpoint(request: TranslateRequest) -> TranslateResponse:
        result = translate(
            request.tokens, request.src_lang, request.tgt_lang, app.state.lexicon
        )
        return TranslateResponse(
            stages=list(result.stages),
            surface=result.surface,
            realizations=[_realization_model(r) for r in result.realizations],
            reading=_reading_model(result.reading),
            details=list(result.details) if request.trace else [],
        )

    @app.post("/analyze", response_model=AnalyzeResponse)
    async def analyze_endpoint(request: AnalyzeRequest) -> AnalyzeResponse:
        readings = analyze(request.tokens, request.lang, app.state.lexicon)
        return AnalyzeResponse(readings=[_reading_model(r) for r in readings])

    @app.post("/generate", response_model=GenerateResponse)
    async def generate_endpoint(request: GenerateRequest) -> GenerateResponse:
        lex: Lexicon = app.state.lexicon
        sem = parse_sem(request.sem, lex.registry)
        realizations = generate(sem, request.lang, lex)
        return GenerateResponse(
            realizations=[_realization_model(r) for r in realizations]
        )

    @app.post("/validate", response_model=ValidateResponse)
    async def validate_endpoint(request: ValidateRequest) -> ValidateResponse:
        sources = sorted(request.files.items())
        candidate, diagnostics = load_lexicon(sources)
        if candidate is not None:
            diagnostics = diagnostics + validate(candidate)
        return ValidateResponse(
            ok=candidate is not None and not has_errors(diagnostics),
            diagnostics=[
                DiagnosticModel(
                    level=d.level,
                    code=d.code,
                    file=d.file,
                    line=d.line,
                    col=d.col,
                    message=d.message,
                    formatted=d.format(),
                )
                for d in diagnostics
            ],
        )

    return app
