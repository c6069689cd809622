"""FastAPI service wrapping the pipeline.

Every endpoint takes the problem-file text in the request body and returns
the verdicts, reports, and any produced artifacts (SDPA file contents, CAD
dumps) in JSON.  Errors surface as HTTP 422 with the failing stage named.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..pipeline import (
    PipelineError,
    run_augment,
    run_check_ik,
    run_check_real,
    run_parse,
    run_relax,
    run_report,
    run_solve,
)
from ..problemfile import ParseError
from .schemas import (
    AugmentResponse,
    CheckRequest,
    HealthResponse,
    OrderRecordModel,
    ParseResponse,
    ProblemRequest,
    RelaxResponse,
    ReportResponse,
    SolveRequest,
    SolveResponse,
    VerdictResponse,
)


def create_app() -> FastAPI:
    app = FastAPI(
        title="realideal",
        version=__version__,
        description=(
            "Vanishing-ideal equality testing, CAD-based ideal repair, and "
            "duality-gap-free SDP relaxations for polynomial optimization."
        ),
    )

    def guard(fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ParseError, PipelineError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", version=__version__)

    @app.post("/parse", response_model=ParseResponse)
    def parse(req: ProblemRequest):
        res = guard(run_parse, req.text)
        return ParseResponse(report=res.report, mode=res.extra["mode"], vars=res.extra["vars"])

    @app.post("/check-real", response_model=VerdictResponse)
    def check_real(req: ProblemRequest):
        res = guard(run_check_real, req.text)
        return VerdictResponse(verdict=res.verdict, report=res.report, exit_code=res.exit_code)

    @app.post("/check-ik", response_model=VerdictResponse)
    def check_ik(req: CheckRequest):
        res = guard(run_check_ik, req.text, req.dump_cad)
        return VerdictResponse(
            verdict=res.verdict,
            report=res.report,
            exit_code=res.exit_code,
            cad_dump=res.extra.get("cad_dump"),
        )

    @app.post("/augment", response_model=AugmentResponse)
    def augment(req: ProblemRequest):
        res = guard(run_augment, req.text)
        return AugmentResponse(
            verdict=res.verdict,
            report=res.report,
            exit_code=res.exit_code,
            generators=res.extra.get("generators", []),
            rounds=res.extra.get("rounds", 0),
        )

    @app.post("/relax", response_model=RelaxResponse)
    def relax(req: SolveRequest):
        res = guard(run_relax, req.text, req.max_order)
        return RelaxResponse(report=res.report, sdpa_files=res.extra["sdpa_files"])

    @app.post("/solve", response_model=SolveResponse)
    def solve(req: SolveRequest):
        res = guard(run_solve, req.text, req.max_order, req.tol)
        return SolveResponse(
            report=res.report,
            records=[OrderRecordModel(**r) for r in res.extra["records"]],
        )

    @app.post("/report", response_model=ReportResponse)
    def report(req: SolveRequest):
        res = guard(run_report, req.text, req.max_order, req.tol)
        return ReportResponse(
            verdict=res.verdict,
            report=res.report,
            exit_code=res.exit_code,
            records=[OrderRecordModel(**r) for r in res.extra["records"]],
            guarantee=res.extra["guarantee"],
            guarantee_source=res.extra["guarantee_source"],
        )

    return app


app = create_app()
