"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field


class ProblemRequest(BaseModel):
    text: str = Field(description="problem file contents")


class CheckRequest(ProblemRequest):
    dump_cad: bool = False


class SolveRequest(ProblemRequest):
    max_order: Optional[int] = None
    tol: float = 1e-8


class VerdictResponse(BaseModel):
    verdict: str
    report: str
    exit_code: int
    cad_dump: Optional[str] = None


class AugmentResponse(BaseModel):
    verdict: str
    report: str
    exit_code: int
    generators: list[str] = []
    rounds: int = 0


class RelaxResponse(BaseModel):
    report: str
    sdpa_files: dict[str, str]


class OrderRecordModel(BaseModel):
    k: int
    primal: Optional[float]
    dual: Optional[float]
    status: str
    iterations: int


class SolveResponse(BaseModel):
    report: str
    records: list[OrderRecordModel]


class ReportResponse(BaseModel):
    verdict: str
    report: str
    exit_code: int
    records: list[OrderRecordModel]
    guarantee: bool
    guarantee_source: str


class ParseResponse(BaseModel):
    report: str
    mode: str
    vars: list[str]


class HealthResponse(BaseModel):
    status: str
    version: str
