"""Collocation translation through lexical functions.

Collocations (*heavy smoker*, *commettre un crime*) translate badly
word by word because the choice of collocate is a fact about the base
word, not about meaning.  This package encodes that choice with lexical
functions: the analysis of *heavy smoker* is ``smoker(x),Magn(x)``,
transfer maps only the base predicate (``Magn(fumeur)``), and the
target lexicon decides how Magn comes out on *fumeur* (*grand fumeur*),
on *Raucher* (*starker Raucher*), or as a single merged word.

Layers: :mod:`~lf_transfer.avm` (typed feature structures and
unification), :mod:`~lf_transfer.semantics` (semantic indices and the
lexical-function inventory), :mod:`~lf_transfer.lexicon` (file format,
entries, collocate resolution, validation), :mod:`~lf_transfer.analysis`,
:mod:`~lf_transfer.transfer`, :mod:`~lf_transfer.generation`,
:mod:`~lf_transfer.pipeline` (the four stages), :mod:`~lf_transfer.cli`,
and :mod:`~lf_transfer.service` (HTTP).
"""

from .analysis import Reading, analyze, compose_sem, license
from .errors import (
    CompositionError,
    LexiconError,
    LfTransferError,
    MissingSign,
    NoBaseEntry,
    NoParse,
    PipelineError,
    RealizationGap,
    SemSyntaxError,
    StructuralError,
    TokenUnknown,
    UnknownLF,
)
from .generation import Realization, generate, realize_surface
from .lexicon import (
    Diagnostic,
    Lexicon,
    default_overwrite,
    load_lexicon,
    load_lexicon_files,
    resolve_collocate,
    serialize,
    validate,
)
from .pipeline import PipelineResult, translate, translate_reading
from .semantics import (
    LexicalFunction,
    LFRegistry,
    Predication,
    SemIndex,
    Variable,
    alpha_equiv,
    parse_sem,
    render_sem,
    render_sem_compact,
    sem_union,
)
from .transfer import MergedRealization, paraphrase_candidates, transfer, unmerge

__version__ = "1.0.0"

__all__ = [
    "CompositionError",
    "Diagnostic",
    "LFRegistry",
    "LexicalFunction",
    "Lexicon",
    "LexiconError",
    "LfTransferError",
    "MergedRealization",
    "MissingSign",
    "NoBaseEntry",
    "NoParse",
    "PipelineError",
    "PipelineResult",
    "Predication",
    "Reading",
    "Realization",
    "RealizationGap",
    "SemIndex",
    "SemSyntaxError",
    "StructuralError",
    "TokenUnknown",
    "UnknownLF",
    "Variable",
    "alpha_equiv",
    "analyze",
    "compose_sem",
    "default_overwrite",
    "generate",
    "license",
    "load_lexicon",
    "load_lexicon_files",
    "paraphrase_candidates",
    "parse_sem",
    "realize_surface",
    "render_sem",
    "render_sem_compact",
    "resolve_collocate",
    "sem_union",
    "serialize",
    "transfer",
    "translate",
    "translate_reading",
    "unmerge",
    "validate",
    "__version__",
]
