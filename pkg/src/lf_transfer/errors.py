"""Error types shared across the package.

Unification failure is deliberately a value (``None``), not an exception;
the classes here cover genuine faults and pipeline-stage failures that the
CLI and the HTTP service map onto exit codes / status codes.
"""


class LfTransferError(Exception):
    """Base class for all package errors."""


class StructuralError(LfTransferError):
    """A feature structure violates a well-formedness constraint.

    Raised for malformed construction (duplicate feature names, a set node
    in a non-set position) and for results that would be cyclic.
    """


class CompositionError(LfTransferError):
    """A semantic index would violate its invariants."""


class UnknownLF(LfTransferError):
    """A lexical-function name is not declared in the registry."""


class SemSyntaxError(LfTransferError):
    """A semantic-index text form could not be parsed."""


class LexiconError(LfTransferError):
    """A lexicon could not be loaded; carries the load diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(d.format() for d in self.diagnostics[:3])
        super().__init__(f"lexicon load failed: {lines}")


class PipelineError(LfTransferError):
    """Base for translation-pipeline failures.

    Each subclass carries a stable machine-readable ``code`` and the CLI
    exit status documented in the README.
    """

    code = "PIPELINE"
    exit_status = 1


class TokenUnknown(PipelineError):
    code = "TOKEN_UNKNOWN"
    exit_status = 1

    def __init__(self, token, lang):
        self.token = token
        self.lang = lang
        super().__init__(f"no {lang} lexicon entry for token {token!r}")


class NoParse(PipelineError):
    code = "NO_PARSE"
    exit_status = 1

    def __init__(self, tokens, lang):
        self.tokens = tuple(tokens)
        self.lang = lang
        super().__init__(f"no rule covers {lang} phrase {' '.join(tokens)!r}")


class MissingSign(PipelineError):
    code = "MISSING_SIGN"
    exit_status = 2

    def __init__(self, pred, src_lang, tgt_lang):
        self.pred = pred
        self.src_lang = src_lang
        self.tgt_lang = tgt_lang
        super().__init__(
            f"no bilingual sign for predicate {pred!r} ({src_lang} -> {tgt_lang})"
        )


class RealizationGap(PipelineError):
    code = "REALIZATION_GAP"
    exit_status = 3

    def __init__(self, message):
        super().__init__(message)


class NoBaseEntry(RealizationGap):
    code = "NO_BASE_ENTRY"
    exit_status = 3

    def __init__(self, pred, lang):
        self.pred = pred
        self.lang = lang
        super().__init__(f"no {lang} entry realizes base predicate {pred!r}")
