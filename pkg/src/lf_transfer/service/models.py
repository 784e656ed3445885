"""Request and response models for the HTTP service."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field


class DiagnosticModel(BaseModel):
    level: str
    code: str
    file: str
    line: int
    col: int
    message: str
    formatted: str


class ReadingModel(BaseModel):
    construction: str
    lf: Optional[str] = None
    sem: str
    label: str


class RealizationModel(BaseModel):
    surface: str
    strategy: str
    lf: str
    entry_ids: list[str]
    record: str


class TranslateRequest(BaseModel):
    tokens: list[str] = Field(min_length=1)
    src_lang: str
    tgt_lang: str
    trace: bool = False


class TranslateResponse(BaseModel):
    stages: list[str]
    surface: str
    realizations: list[RealizationModel]
    reading: ReadingModel
    details: list[str] = []


class AnalyzeRequest(BaseModel):
    tokens: list[str] = Field(min_length=1)
    lang: str


class AnalyzeResponse(BaseModel):
    readings: list[ReadingModel]


class GenerateRequest(BaseModel):
    sem: str
    lang: str


class GenerateResponse(BaseModel):
    realizations: list[RealizationModel]


class ValidateRequest(BaseModel):
    files: dict[str, str] = Field(
        description="file name to file content; validated together",
        min_length=1,
    )


class ValidateResponse(BaseModel):
    ok: bool
    diagnostics: list[DiagnosticModel]


class HealthResponse(BaseModel):
    status: str
    languages: list[str]
    entries: int


class ErrorResponse(BaseModel):
    code: str
    message: str
