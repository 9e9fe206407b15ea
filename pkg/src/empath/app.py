"""HTTP face of the pipeline: /api/v1/analyze, /api/v1/audio/{ref}, /api/v1/health."""

from __future__ import annotations

from fastapi import FastAPI, File, Query, UploadFile
from fastapi.responses import JSONResponse, Response

from .errors import DecodeError, InvalidLanguage, PipelineError
from .service import Pipeline, ServiceConfig, load_pipeline


def create_app(pipeline: Pipeline) -> FastAPI:
    app = FastAPI(title="empath", docs_url=None, redoc_url=None)
    app.state.pipeline = pipeline

    @app.post("/api/v1/analyze")
    async def analyze(
        audio: UploadFile = File(...), lang: str = Query(default="en")
    ) -> JSONResponse:
        wav_bytes = await audio.read()
        try:
            response = pipeline.analyze(wav_bytes, language=lang)
        except (DecodeError, InvalidLanguage) as exc:
            stage = exc.stage if isinstance(exc, PipelineError) else "request"
            return JSONResponse(status_code=400, content={"error": str(exc), "stage": stage})
        except PipelineError as exc:
            return JSONResponse(status_code=500, content={"error": str(exc), "stage": exc.stage})
        return JSONResponse(content=response.as_dict())

    @app.get("/api/v1/audio/{ref}")
    async def audio_clip(ref: str) -> Response:
        wav_bytes = pipeline.clips.get(ref)
        if wav_bytes is None:
            return JSONResponse(status_code=404, content={"error": f"no clip {ref}"})
        return Response(content=wav_bytes, media_type="audio/wav")

    @app.get("/api/v1/health")
    async def health() -> dict:
        return {
            "status": "ok",
            "ser_parameters": pipeline.ser_model.parameter_count(),
            "rec_parameters": pipeline.rec_model.parameter_count(),
            "vocabulary": len(pipeline.rec_model.embeddings.vocab),
            "corpus_entries": len(pipeline.corpus),
            "languages": sorted(
                {s.language for s in pipeline.corpus.suggestions}
            ),
            "tts_backend": pipeline.tts.kind,
        }

    return app


def serve(config: ServiceConfig) -> None:
    """Load everything, then block serving HTTP."""
    import uvicorn

    pipeline = load_pipeline(config)
    uvicorn.run(create_app(pipeline), host=config.host, port=config.port, log_level="info")
