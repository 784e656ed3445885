"""The four-stage translation pipeline.

Stage 1 tokenizes (here: accepts tokens), stage 2 analyzes the source
phrase into a semantic index, stage 3 transfers the index into the
target language's predicates, and stage 4 generates target surfaces.
The machine-readable trace mirrors the stages one line each::

    1: heavy smoker
    2: Magn(smoker)
    3: Magn(fumeur)
    4: grand fumeur

Detail lines (licensing structures, transfer output, realization
records) accompany the stages for diagnostic output.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import avm
from .analysis import Reading, analyze
from .generation import Realization, generate
from .lexicon import Lexicon
from .semantics import SemIndex, render_sem_compact
from .transfer import transfer


@dataclass(frozen=True)
class PipelineResult:
    tokens: tuple[str, ...]
    src_lang: str
    tgt_lang: str
    reading: Reading
    transferred: SemIndex
    realizations: tuple[Realization, ...]
    stages: tuple[str, ...]
    details: tuple[str, ...] = field(default=())

    @property
    def surface(self) -> str:
        return self.realizations[0].surface


def translate_reading(
    reading: Reading,
    tokens: list[str],
    src_lang: str,
    tgt_lang: str,
    lexicon: Lexicon,
) -> PipelineResult:
    """Run transfer and generation for one settled analysis."""
    transferred = transfer(reading.sem, src_lang, tgt_lang, lexicon)
    realizations = generate(transferred, tgt_lang, lexicon)
    registry = lexicon.registry
    stages = (
        f"1: {' '.join(tokens)}",
        f"2: {render_sem_compact(reading.sem, registry)}",
        f"3: {render_sem_compact(transferred, registry)}",
        f"4: {realizations[0].surface}",
    )
    details = []
    if reading.license_avm is not None:
        details.append(f"license: {avm.render(reading.license_avm)}")
    details.append(f"transfer: {render_sem_compact(transferred, registry)}")
    details.extend(f"realize: {r.record()}" for r in realizations)
    return PipelineResult(
        tokens=tuple(tokens),
        src_lang=src_lang,
        tgt_lang=tgt_lang,
        reading=reading,
        transferred=transferred,
        realizations=tuple(realizations),
        stages=stages,
        details=tuple(details),
    )


def translate(
    tokens: list[str],
    src_lang: str,
    tgt_lang: str,
    lexicon: Lexicon,
) -> PipelineResult:
    """Translate the best reading of ``tokens``."""
    readings = analyze(tokens, src_lang, lexicon)
    return translate_reading(readings[0], tokens, src_lang, tgt_lang, lexicon)
