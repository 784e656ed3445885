"""Flat semantic indices and the lexical-function inventory.

The semantic content handled by the pipeline is deliberately small: an
index is a single variable plus a set of one-place predications over it.
A predication is either a base predicate contributed by a content word
(``smoker(x)``) or a lexical function applied to the index
(``Magn(x)``).  Lexical functions name standard collocational meanings;
applied to different bases they realize as different collocates, which
is what makes them usable as an interlingual currency: transfer maps the
base predicates and copies the lexical functions unchanged.

A lexical function may carry a qualia subscript narrowing which facet of
the base it bears on (``Bon_Const`` vs ``Bon_Agent``), and a merged flag
(rendered ``//``) marking that function and base are realized by one
word rather than a collocation (``//Mult(sleutel)`` = *sleutelbos*).

The canonical text form, used in traces and accepted by ``parse_sem``::

    smoker(x),Magn(x)

and the compact nested form used in pipeline stage lines::

    Magn(smoker)
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Optional

from .errors import CompositionError, SemSyntaxError, UnknownLF

QUALIA_ROLES = ("Const", "Agent", "Form", "Telic")

_role_rank = {role: i for i, role in enumerate(QUALIA_ROLES)}


def role_rank(subscript: Optional[str]) -> int:
    """Declaration-order rank of a qualia subscript; None sorts last."""
    return _role_rank.get(subscript, len(QUALIA_ROLES))


class Variable:
    """A semantic index variable.  Identity is object identity."""

    __slots__ = ("hint",)
    _counter = itertools.count(1)

    def __init__(self, hint: str = "x"):
        self.hint = hint or "x"

    def __repr__(self):
        return f"Variable({self.hint}@{id(self):x})"


@dataclass(frozen=True)
class LexicalFunction:
    """A lexical function name with optional qualia subscript and merged flag."""

    name: str
    subscript: Optional[str] = None
    merged: bool = False

    def __post_init__(self):
        if self.subscript is not None and self.subscript not in QUALIA_ROLES:
            raise UnknownLF(f"unknown qualia role {self.subscript!r}")

    def render(self) -> str:
        text = self.name
        if self.subscript:
            text += f"_{self.subscript}"
        if self.merged:
            text = "//" + text
        return text

    def plain(self) -> "LexicalFunction":
        """Same function without subscript or merged flag."""
        return LexicalFunction(self.name)

    def matches(self, query: "LexicalFunction") -> bool:
        """Whether this (declared) function satisfies a requested one.

        The name must agree.  A request without a subscript accepts any
        declared subscript; a subscripted request demands that exact
        subscript.  The merged flag is not part of matching.
        """
        if self.name != query.name:
            return False
        if query.subscript is None:
            return True
        return self.subscript == query.subscript


@dataclass(frozen=True)
class Predication:
    """One predication over the index: a base predicate or an LF application."""

    kind: str  # "base" | "lf"
    name: str
    subscript: Optional[str] = None
    merged: bool = False

    def __post_init__(self):
        if self.kind not in ("base", "lf"):
            raise CompositionError(f"bad predication kind {self.kind!r}")
        if self.kind == "base" and (self.subscript or self.merged):
            raise CompositionError("base predications take no subscript or merge flag")
        if self.subscript is not None and self.subscript not in QUALIA_ROLES:
            raise UnknownLF(f"unknown qualia role {self.subscript!r}")

    @classmethod
    def base(cls, name: str) -> "Predication":
        return cls("base", name)

    @classmethod
    def lf(cls, fn: LexicalFunction) -> "Predication":
        return cls("lf", fn.name, fn.subscript, fn.merged)

    def function(self) -> LexicalFunction:
        if self.kind != "lf":
            raise CompositionError(f"{self.name} is not a lexical function")
        return LexicalFunction(self.name, self.subscript, self.merged)

    def render(self, var: str = "x") -> str:
        label = self.name
        if self.kind == "lf":
            label = LexicalFunction(self.name, self.subscript, self.merged).render()
        return f"{label}({var})"


class LFRegistry:
    """The declared lexical-function inventory, in declaration order.

    Declaration order is the stacking and display order for predications
    bearing different functions; parsing rejects undeclared names.
    """

    def __init__(self, names: Iterable[str] = ()):
        self._names: list[str] = []
        for name in names:
            self.declare(name)

    def declare(self, name: str) -> None:
        if not re.fullmatch(r"[A-Z][A-Za-z0-9]*", name):
            raise UnknownLF(f"bad lexical function name {name!r}")
        if name not in self._names:
            self._names.append(name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._names)

    def __contains__(self, name: str) -> bool:
        return name in self._names

    def index(self, name: str) -> int:
        try:
            return self._names.index(name)
        except ValueError:
            raise UnknownLF(f"undeclared lexical function {name!r}") from None

    def parse_lf(self, text: str) -> LexicalFunction:
        """Parse ``[//]Name[_Role]`` against the declared inventory."""
        merged = text.startswith("//")
        if merged:
            text = text[2:]
        name, _, subscript = text.partition("_")
        if name not in self._names:
            raise UnknownLF(f"undeclared lexical function {name!r}")
        if subscript and subscript not in QUALIA_ROLES:
            raise UnknownLF(f"unknown qualia role {subscript!r}")
        return LexicalFunction(name, subscript or None, merged)

    def sort_key(self, pred: Predication) -> tuple:
        return (self.index(pred.name), role_rank(pred.subscript), pred.merged)


#: The functions every lexicon declares; files may extend the list.
STANDARD_LFS = ("Magn", "Oper", "Bon", "Mult")


def standard_registry() -> LFRegistry:
    return LFRegistry(STANDARD_LFS)


@dataclass(frozen=True)
class SemIndex:
    """One variable and the set of predications over it."""

    var: Variable
    preds: FrozenSet[Predication] = field(default_factory=frozenset)

    def __post_init__(self):
        preds = frozenset(self.preds)
        object.__setattr__(self, "preds", preds)
        base_names = [p.name for p in preds if p.kind == "base"]
        if len(set(base_names)) != len(base_names):
            raise CompositionError(f"duplicate base predicate: {sorted(base_names)}")
        lf_keys = [(p.name, p.subscript, p.merged) for p in preds if p.kind == "lf"]
        if len(set(lf_keys)) != len(lf_keys):
            raise CompositionError(f"duplicate lexical function: {sorted(lf_keys)}")

    @property
    def base_preds(self) -> tuple[Predication, ...]:
        return tuple(sorted((p for p in self.preds if p.kind == "base"), key=lambda p: p.name))

    @property
    def lf_preds(self) -> tuple[Predication, ...]:
        return tuple(
            sorted(
                (p for p in self.preds if p.kind == "lf"),
                key=lambda p: (p.name, role_rank(p.subscript), p.merged),
            )
        )

    def with_preds(self, extra: Iterable[Predication]) -> "SemIndex":
        return SemIndex(self.var, self.preds | frozenset(extra))

    def without(self, pred: Predication) -> "SemIndex":
        return SemIndex(self.var, self.preds - {pred})


def sem_union(a: SemIndex, b: SemIndex) -> SemIndex:
    """Union of two indices over a shared variable (``b``'s is renamed)."""
    return SemIndex(a.var, a.preds | b.preds)


def alpha_equiv(a: SemIndex, b: SemIndex) -> bool:
    """Equality up to the choice of variable."""
    return a.preds == b.preds


def ordered_preds(sem: SemIndex, registry: LFRegistry) -> list[Predication]:
    """Bases by name, then lexical functions in registry stacking order."""
    return list(sem.base_preds) + sorted(sem.lf_preds, key=registry.sort_key)


def render_sem(sem: SemIndex, var: str = "x") -> str:
    """Canonical comma form, e.g. ``smoker(x),Magn(x)``."""
    registry = _permissive_registry(sem)
    return ",".join(p.render(var) for p in ordered_preds(sem, registry))


def render_sem_compact(sem: SemIndex, registry: Optional[LFRegistry] = None) -> str:
    """Nested form when there is exactly one base, else the comma form.

    Functions wrap the base outermost-first in registry order:
    ``{smoker(x), Magn(x)}`` renders as ``Magn(smoker)``.
    """
    if registry is None:
        registry = _permissive_registry(sem)
    bases = sem.base_preds
    lfs = sorted(sem.lf_preds, key=registry.sort_key)
    if len(bases) != 1:
        return render_sem(sem)
    text = bases[0].name
    for pred in reversed(lfs):
        text = f"{pred.function().render()}({text})"
    return text


def _permissive_registry(sem: SemIndex) -> LFRegistry:
    registry = standard_registry()
    for p in sem.lf_preds:
        registry.declare(p.name)
    return registry


_PRED_RE = re.compile(r"^(?P<label>//?[A-Za-z][A-Za-z0-9_-]*|[A-Za-z][A-Za-z0-9_-]*)\((?P<var>[a-z][a-z0-9]*)\)$")


def parse_sem(text: str, registry: Optional[LFRegistry] = None) -> SemIndex:
    """Parse the canonical comma form into an index.

    Labels matching a declared lexical function (optionally with ``//``
    or a qualia subscript) become LF predications; anything else is a
    base predicate.  All predications must share one variable.
    """
    if registry is None:
        registry = standard_registry()
    parts = [part.strip() for part in text.split(",")]
    if not any(parts):
        raise SemSyntaxError("empty semantics")
    var_name: Optional[str] = None
    preds: list[Predication] = []
    for part in parts:
        if not part:
            raise SemSyntaxError(f"empty predication in {text!r}")
        m = _PRED_RE.match(part)
        if not m:
            raise SemSyntaxError(f"cannot parse predication {part!r}")
        label, var = m.group("label"), m.group("var")
        if var_name is None:
            var_name = var
        elif var != var_name:
            raise SemSyntaxError(
                f"all predications must share one variable, got {var_name!r} and {var!r}"
            )
        merged = label.startswith("//")
        stem = label[2:] if merged else label
        name, _, subscript = stem.partition("_")
        if name in registry:
            if subscript and subscript not in QUALIA_ROLES:
                raise SemSyntaxError(f"unknown qualia role {subscript!r} in {part!r}")
            preds.append(Predication.lf(LexicalFunction(name, subscript or None, merged)))
        elif merged:
            raise SemSyntaxError(f"merge flag on undeclared function {part!r}")
        else:
            # underscores in undeclared labels are part of the base name
            preds.append(Predication.base(stem))
    try:
        return SemIndex(Variable(var_name or "x"), frozenset(preds))
    except CompositionError as exc:
        raise SemSyntaxError(str(exc)) from exc
