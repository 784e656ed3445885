"""The collocational lexicon: file format, entry model, resolution, validation.

Lexicon files are s-expressions, one form per top level, with ``;``
comments.  A file can hold declarations (sorts, lexical functions, phrase
rules), monolingual entries with their collocate subentries and qualia
facets, and bilingual signs::

    (sorts (sign top) (collocation sign) (collocate sign) (pred top))
    (lfs Magn Oper Bon Mult)
    (rule en head-adjunct head-right (skip))
    (rule en head-complement head-left (skip "of" "a"))

    (entry (id en:smoker) (phon "smoker") (cat N) (sem (pred smoker)))
    (entry (id en:heavy) (phon "heavy") (cat A) (sem (pred heavy)))
    (coll (base en:smoker) (super en:heavy) (lf Magn) (pos pre))

    (entry (id nl:sleutelbos) (phon "sleutelbos") (cat N)
           (sem (pred sleutel)) (merged Mult sleutel))

    (qualia (id en:lecture) (Const content) (Agent delivery))

    (bi (src en smoker) (tgt fr fumeur))
    (bi-lf Magn)

A ``coll`` form is a partial subentry: it lives on its base entry and
points at a full super-entry that carries the phonology, category and
semantics of the collocate word.  Resolution fills the subentry in from
the super-entry by default overwrite (subentry-specific values win, the
super supplies the rest) and coindexes the result with the base's
semantic variable.  ``pos`` places the collocate relative to the base
(``pre``, ``post``, the support-verb pattern ``sv``, or the quantity
pattern ``qty``); ``form`` gives an inflected surface used only at
realization; ``insert`` names a function word required by the pattern.

``bi`` signs identify base predicates across languages and are read in
both directions.  ``bi-lf`` asserts that a lexical function translates
as itself; no other mapping is accepted for lexical functions.

Diagnostics are reported as ``LEVEL CODE file:line:col message`` and are
split into load failures (the lexicon cannot be built) and validation
findings on a built lexicon.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence, Union

from . import avm
from .avm import Atom, FeatureStructure, Node, SetNode, SortHierarchy
from .errors import LexiconError, StructuralError, UnknownLF
from .semantics import (
    LexicalFunction,
    LFRegistry,
    Predication,
    QUALIA_ROLES,
    SemIndex,
    Variable,
    role_rank,
)

ERROR = "ERROR"
WARNING = "WARNING"

CATEGORIES = ("N", "V", "A", "Adv")
POSITIONS = ("pre", "post", "sv", "qty")

#: Collocate categories admitted per position pattern.
POSITION_CATEGORIES = {
    "pre": ("A", "Adv"),
    "post": ("A", "Adv"),
    "sv": ("V",),
    "qty": ("N",),
}

RULE_KINDS = ("head-adjunct", "head-complement")


@dataclass(frozen=True)
class Diagnostic:
    level: str
    code: str
    file: str
    line: int
    col: int
    message: str

    def format(self) -> str:
        return f"{self.level} {self.code} {self.file}:{self.line}:{self.col} {self.message}"


def has_errors(diagnostics: Iterable[Diagnostic]) -> bool:
    return any(d.level == ERROR for d in diagnostics)


# ---------------------------------------------------------------------------
# S-expression reader


@dataclass(frozen=True)
class SxAtom:
    text: str
    quoted: bool
    file: str
    line: int
    col: int


@dataclass(frozen=True)
class SxList:
    items: tuple
    file: str
    line: int
    col: int

    def head(self) -> Optional[str]:
        if self.items and isinstance(self.items[0], SxAtom) and not self.items[0].quoted:
            return self.items[0].text
        return None


Sx = Union[SxAtom, SxList]


class _Reader:
    def __init__(self, text: str, file: str):
        self.text = text
        self.file = file
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str, line: int, col: int) -> Diagnostic:
        return Diagnostic(ERROR, "SYNTAX", self.file, line, col, message)

    def _advance(self, ch: str) -> None:
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1

    def _skip_space(self) -> None:
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == ";":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self._advance(self.text[self.pos])
            elif ch.isspace():
                self._advance(ch)
            else:
                return

    def read_all(self) -> tuple[list[Sx], list[Diagnostic]]:
        forms: list[Sx] = []
        diagnostics: list[Diagnostic] = []
        while True:
            self._skip_space()
            if self.pos >= len(self.text):
                return forms, diagnostics
            form, diag = self._read_form()
            if diag:
                diagnostics.append(diag)
                return forms, diagnostics
            forms.append(form)

    def _read_form(self) -> tuple[Optional[Sx], Optional[Diagnostic]]:
        ch = self.text[self.pos]
        line, col = self.line, self.col
        if ch == ")":
            return None, self.error("unbalanced ')'", line, col)
        if ch == "(":
            self._advance(ch)
            items: list[Sx] = []
            while True:
                self._skip_space()
                if self.pos >= len(self.text):
                    return None, self.error("unterminated '('", line, col)
                if self.text[self.pos] == ")":
                    self._advance(")")
                    return SxList(tuple(items), self.file, line, col), None
                item, diag = self._read_form()
                if diag:
                    return None, diag
                items.append(item)
        if ch == '"':
            self._advance(ch)
            buf = io.StringIO()
            while True:
                if self.pos >= len(self.text):
                    return None, self.error("unterminated string", line, col)
                ch = self.text[self.pos]
                self._advance(ch)
                if ch == '"':
                    return SxAtom(buf.getvalue(), True, self.file, line, col), None
                if ch == "\\":
                    if self.pos >= len(self.text):
                        return None, self.error("bad escape", self.line, self.col)
                    esc = self.text[self.pos]
                    self._advance(esc)
                    buf.write({"n": "\n", "t": "\t"}.get(esc, esc))
                else:
                    buf.write(ch)
        buf = io.StringIO()
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch.isspace() or ch in '();"':
                break
            buf.write(ch)
            self._advance(ch)
        return SxAtom(buf.getvalue(), False, self.file, line, col), None


def read_sexprs(text: str, file: str) -> tuple[list[Sx], list[Diagnostic]]:
    return _Reader(text, file).read_all()


# ---------------------------------------------------------------------------
# Data model


@dataclass(frozen=True)
class CollocateSubentry:
    """A partial subentry on a base entry, pointing at its super-entry."""

    base_id: str
    super_id: str
    lf: LexicalFunction
    position: str
    form: Optional[str] = None
    insert: Optional[str] = None
    file: str = "<none>"
    line: int = 0
    col: int = 0


@dataclass(frozen=True)
class MergedSig:
    """Marker that an entry lexicalizes function and base in one word."""

    lf: LexicalFunction  # carries merged=True
    base: str


@dataclass(frozen=True)
class LexEntry:
    id: str
    lang: str
    phon: str
    cat: str
    sem: SemIndex
    colls: tuple[CollocateSubentry, ...] = ()
    qualia: tuple[tuple[str, str], ...] = ()
    merged_sig: Optional[MergedSig] = None
    file: str = "<none>"
    line: int = 0
    col: int = 0

    @property
    def base_pred_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.sem.base_preds)


@dataclass(frozen=True)
class Sign:
    """A bilingual identification of base predicates; read symmetrically."""

    src_lang: str
    src_pred: str
    tgt_lang: str
    tgt_pred: str
    file: str = "<none>"
    line: int = 0
    col: int = 0


@dataclass(frozen=True)
class LfSign:
    src_name: str
    tgt_name: str
    file: str = "<none>"
    line: int = 0
    col: int = 0


@dataclass(frozen=True)
class PhraseRule:
    """A binary phrase pattern for one language.

    ``head_side`` says which daughter is the syntactic head; ``skip``
    lists function words the pattern tolerates between the daughters.
    Declaration order breaks ties when a language admits both orders.
    """

    lang: str
    kind: str
    head_side: str  # "left" | "right"
    skip: frozenset[str] = frozenset()
    decl_index: int = 0
    file: str = "<none>"
    line: int = 0
    col: int = 0


class Grammar:
    def __init__(self, rules: Iterable[PhraseRule] = ()):
        self.rules = tuple(sorted(rules, key=lambda r: r.decl_index))

    def rules_for(self, lang: str) -> tuple[PhraseRule, ...]:
        return tuple(r for r in self.rules if r.lang == lang)

    def skip_words(self, lang: str) -> frozenset[str]:
        out: set[str] = set()
        for rule in self.rules_for(lang):
            out |= rule.skip
        return frozenset(out)


# ---------------------------------------------------------------------------
# The lexicon


class Lexicon:
    """An immutable, fully indexed lexicon; safe for concurrent reads."""

    def __init__(
        self,
        entries: Sequence[LexEntry],
        signs: Sequence[Sign],
        lf_signs: Sequence[LfSign],
        registry: LFRegistry,
        sorts: SortHierarchy,
        grammar: Grammar,
    ):
        self.entries = tuple(entries)
        self.signs = tuple(signs)
        self.lf_signs = tuple(lf_signs)
        self.registry = registry
        self.sorts = sorts
        self.grammar = grammar

        self.by_id: dict[str, LexEntry] = {e.id: e for e in self.entries}
        self.by_token: dict[tuple[str, str], list[LexEntry]] = {}
        self.by_pred: dict[tuple[str, str], list[LexEntry]] = {}
        self.merged_by_pred: dict[tuple[str, str], list[LexEntry]] = {}
        self.sign_map: dict[tuple[str, str, str], str] = {}
        self._avm_cache: dict[tuple[str, bool], Node] = {}
        self._var_cache: dict[str, Node] = {}

        for entry in self.entries:
            self.by_token.setdefault((entry.lang, entry.phon), []).append(entry)
            for name in entry.base_pred_names:
                self.by_pred.setdefault((entry.lang, name), []).append(entry)
            if entry.merged_sig:
                key = (entry.lang, entry.merged_sig.base)
                self.merged_by_pred.setdefault(key, []).append(entry)
        for entry in self.entries:
            for sub in entry.colls:
                if not sub.form:
                    continue
                # qty forms inflect the base, other positions the collocate
                target = entry if sub.position == "qty" else self.by_id.get(sub.super_id)
                if target is None:
                    continue
                bucket = self.by_token.setdefault((entry.lang, sub.form), [])
                if target not in bucket:
                    bucket.append(target)
        for sign in self.signs:
            self.sign_map[(sign.src_lang, sign.tgt_lang, sign.src_pred)] = sign.tgt_pred
            self.sign_map[(sign.tgt_lang, sign.src_lang, sign.tgt_pred)] = sign.src_pred

    @property
    def languages(self) -> tuple[str, ...]:
        return tuple(sorted({e.lang for e in self.entries}))

    def lookup_token(self, lang: str, token: str) -> list[LexEntry]:
        return list(self.by_token.get((lang, token), ()))

    def base_entries(self, lang: str, pred: str) -> list[LexEntry]:
        """Entries realizing a base predicate as a plain (unmerged) word."""
        return [e for e in self.by_pred.get((lang, pred), ()) if not e.merged_sig]

    def merged_entries(self, lang: str, pred: str) -> list[LexEntry]:
        return list(self.merged_by_pred.get((lang, pred), ()))

    def sign_target(self, src_lang: str, tgt_lang: str, pred: str) -> Optional[str]:
        return self.sign_map.get((src_lang, tgt_lang, pred))

    # -- AVM construction ---------------------------------------------------

    def variable_node(self, entry_id: str) -> Node:
        node = self._var_cache.get(entry_id)
        if node is None:
            node = Node(avm.TOP)
            self._var_cache[entry_id] = node
        return node

    def entry_avm(self, entry_id: str, with_colls: bool = True) -> Node:
        """The entry's feature structure; cached, hence always shareable.

        The structure is ``[sign CAT ID PHON SEM_IND [REST VAR]]`` with
        every predication's INST coindexed with VAR, plus a COLLS set of
        resolved collocate subentries coindexed with the same variable::

            [sign CAT: N ID: en:smoker PHON: smoker
                  SEM_IND: [top REST: {[pred INST: #1=[top] RELN: smoker]}
                            VAR: #1]
                  COLLS: {[collocate BASE: en:smoker LF: Magn POS: pre
                           CAT: A ID: en:heavy PHON: heavy
                           SEM_IND: [top REST: {[pred INST: #1 RELN: heavy]}
                                     VAR: #1]]}]
        """
        key = (entry_id, with_colls)
        cached = self._avm_cache.get(key)
        if cached is not None:
            return cached
        entry = self.by_id[entry_id]
        var = self.variable_node(entry_id)
        rest = []
        for pred in entry.sem.base_preds + entry.sem.lf_preds:
            label = pred.name if pred.kind == "base" else pred.function().render()
            rest.append(Node("pred", {"INST": var, "RELN": Atom(label)}))
        features: dict[str, FeatureStructure] = {
            "ID": Atom(entry.id),
            "PHON": Atom(entry.phon),
            "CAT": Atom(entry.cat),
            "SEM_IND": Node(avm.TOP, {"VAR": var, "REST": SetNode(rest)}),
        }
        if with_colls and entry.colls:
            members = [self.collocate_avm(sub) for sub in entry.colls]
            features["COLLS"] = SetNode(members)
        built = Node("sign", features)
        self._avm_cache[key] = built
        return built

    def collocate_avm(self, sub: CollocateSubentry) -> Node:
        """Resolve a subentry against its super-entry.

        The subentry contributes the collocate-specific values: its sort,
        the licensing function, the position, and a semantics of exactly
        one LF predication.  Overwriting the super-entry with these keeps
        the super's phonology and category but replaces its literal
        predicate; the result is then coindexed with the base entry's
        variable.
        """
        var = Node(avm.TOP)
        override = Node(
            "collocate",
            {
                "BASE": Atom(sub.base_id),
                "LF": Atom(sub.lf.render()),
                "POS": Atom(sub.position),
                "SEM_IND": Node(
                    avm.TOP,
                    {
                        "VAR": var,
                        "REST": SetNode(
                            [Node("pred", {"INST": var, "RELN": Atom(sub.lf.render())})]
                        ),
                    },
                ),
            },
        )
        super_core = self.entry_avm(sub.super_id, with_colls=False)
        resolved = default_overwrite(super_core, override, self.sorts)
        base_var = self.variable_node(sub.base_id)
        stale = {}
        old_var = avm.path_value(resolved, ("SEM_IND", "VAR"))
        if old_var is not None and old_var is not base_var:
            stale[id(old_var)] = base_var
        rest = avm.path_value(resolved, ("SEM_IND", "REST"))
        if isinstance(rest, SetNode):
            for member in rest.members:
                inst = member.get("INST") if isinstance(member, Node) else None
                if inst is not None and inst is not base_var:
                    stale[id(inst)] = base_var
        out = avm.replace_nodes(resolved, stale) if stale else resolved
        assert isinstance(out, Node)
        return out

    # -- Lexical function application ----------------------------------------

    def apply_lf(
        self, fn: LexicalFunction, base: LexEntry
    ) -> list[tuple[CollocateSubentry, LexEntry]]:
        """Collocate subentries on ``base`` realizing ``fn``, best first.

        A request without a subscript accepts any declared subscript; a
        subscripted request demands that exact subscript.  Candidates are
        ordered by subscript specificity, then qualia role declaration
        order, then collocate surface, then super-entry id.
        """
        out = []
        for sub in base.colls:
            if not sub.lf.matches(fn):
                continue
            super_entry = self.by_id.get(sub.super_id)
            if super_entry is None:
                continue
            out.append((sub, super_entry))

        def key(pair):
            sub, super_entry = pair
            exact = 0 if sub.lf.subscript == fn.subscript else 1
            surface = sub.form if (sub.form and sub.position != "qty") else super_entry.phon
            return (exact, role_rank(sub.lf.subscript), surface, super_entry.id)

        out.sort(key=key)
        return out


# ---------------------------------------------------------------------------
# Default overwrite


def default_overwrite(
    base: FeatureStructure,
    override: FeatureStructure,
    sorts: SortHierarchy = avm.TRIVIAL_SORTS,
) -> FeatureStructure:
    """Merge ``override`` into ``base``, letting ``override`` win pathwise.

    Features present in both recurse; features on one side are kept.  On
    a kind or value conflict the override's node replaces the base's
    wholesale, and set values replace rather than merge.  An empty
    override node keeps the base's content, so an entirely empty
    override returns a structure equal to the base.  Node sorts combine
    by meet when compatible, otherwise the override's sort stands.  The
    result shares no nodes with either input.
    """
    copies: dict[int, FeatureStructure] = {}

    def copy(n: FeatureStructure) -> FeatureStructure:
        got = copies.get(id(n))
        if got is not None:
            return got
        if isinstance(n, Atom):
            result: FeatureStructure = Atom(n.value, n.sort)
        elif isinstance(n, SetNode):
            result = SetNode([copy(m) for m in n.members], n.sort)
        else:
            result = Node(n.sort, {name: copy(c) for name, c in n.features})
        copies[id(n)] = result
        return result

    merged: dict[tuple[int, int], FeatureStructure] = {}

    def merge(b: FeatureStructure, o: FeatureStructure) -> FeatureStructure:
        key = (id(b), id(o))
        got = merged.get(key)
        if got is not None:
            return got
        sort = sorts.meet(b.sort, o.sort) or o.sort
        if isinstance(o, Node) and o.is_empty() and not isinstance(b, SetNode):
            result = _resorted(copy(b), sort)
        elif isinstance(b, Node) and isinstance(o, Node):
            children: dict[str, FeatureStructure] = {}
            for name, oc in o.features:
                bc = b.get(name)
                children[name] = copy(oc) if bc is None else merge(bc, oc)
            for name, bc in b.features:
                if o.get(name) is None:
                    children[name] = copy(bc)
            result = Node(sort, children)
        elif isinstance(b, Atom) and isinstance(o, Atom):
            result = Atom(o.value, sort)
        else:
            # kind conflict or set value: the override replaces the base
            result = _resorted(copy(o), sort)
        merged[key] = result
        return result

    return merge(base, override)


def resolve_collocate(lexicon: Lexicon, sub: CollocateSubentry) -> Node:
    """The subentry filled in from its super-entry; see :meth:`Lexicon.collocate_avm`."""
    return lexicon.collocate_avm(sub)


def _resorted(n: FeatureStructure, sort: str) -> FeatureStructure:
    if n.sort == sort:
        return n
    if isinstance(n, Atom):
        return Atom(n.value, sort)
    if isinstance(n, SetNode):
        return SetNode(n.members, sort)
    assert isinstance(n, Node)
    return Node(sort, dict(n.features))


# ---------------------------------------------------------------------------
# Loading


_STANDARD_SORT_EDGES = {
    "sign": ("top",),
    "collocation": ("sign",),
    "collocate": ("sign",),
    "pred": ("top",),
}


class _Loader:
    def __init__(self) -> None:
        self.diagnostics: list[Diagnostic] = []
        self.registry = LFRegistry()
        self.sorts = SortHierarchy()
        self.sort_decls: list[tuple[str, tuple[str, ...]]] = []
        self.rules: list[PhraseRule] = []
        self.raw_entries: list[tuple[LexEntry, Sx]] = []
        self.colls: list[CollocateSubentry] = []
        self.qualia: list[tuple[str, tuple[tuple[str, str], ...], Sx]] = []
        self.signs: list[Sign] = []
        self.lf_signs: list[LfSign] = []

    def error(self, code: str, sx: Sx, message: str) -> None:
        self.diagnostics.append(
            Diagnostic(ERROR, code, sx.file, sx.line, sx.col, message)
        )

    # -- small destructuring helpers -----------------------------------------

    def _clauses(self, form: SxList) -> dict[str, list[SxList]]:
        out: dict[str, list[SxList]] = {}
        for item in form.items[1:]:
            if not isinstance(item, SxList) or item.head() is None:
                self.error("SYNTAX", item, "expected a (key ...) clause")
                continue
            out.setdefault(item.head(), []).append(item)
        return out

    def _atom(self, clause: SxList, what: str) -> Optional[str]:
        if len(clause.items) != 2 or not isinstance(clause.items[1], SxAtom):
            self.error("SYNTAX", clause, f"({clause.head()} ...) takes one {what}")
            return None
        return clause.items[1].text

    def _atoms(self, form: SxList, start: int = 1) -> Optional[list[str]]:
        texts = []
        for item in form.items[start:]:
            if not isinstance(item, SxAtom):
                self.error("SYNTAX", item, "expected an atom")
                return None
            texts.append(item.text)
        return texts

    # -- form handlers -------------------------------------------------------

    def load_form(self, form: Sx) -> None:
        if not isinstance(form, SxList) or form.head() is None:
            self.error("SYNTAX", form, "expected a (form ...) at top level")
            return
        handler = {
            "sorts": self._load_sorts,
            "lfs": self._load_lfs,
            "rule": self._load_rule,
            "entry": self._load_entry,
            "coll": self._load_coll,
            "qualia": self._load_qualia,
            "bi": self._load_bi,
            "bi-lf": self._load_bi_lf,
        }.get(form.head())
        if handler is None:
            self.error("SYNTAX", form, f"unknown form ({form.head()} ...)")
            return
        handler(form)

    def _load_sorts(self, form: SxList) -> None:
        for item in form.items[1:]:
            if not isinstance(item, SxList):
                self.error("SYNTAX", item, "expected (sort parent...)")
                continue
            names = self._atoms(item, start=0)
            if not names:
                continue
            name, parents = names[0], tuple(names[1:]) or ("top",)
            try:
                self.sorts.declare(name, parents)
            except StructuralError as exc:
                self.error("SYNTAX", item, str(exc))
                continue
            self.sort_decls.append((name, parents))

    def _load_lfs(self, form: SxList) -> None:
        names = self._atoms(form)
        if names is None:
            return
        for name in names:
            try:
                self.registry.declare(name)
            except UnknownLF as exc:
                self.error("UNKNOWN_LF", form, str(exc))

    def _load_rule(self, form: SxList) -> None:
        items = form.items[1:]
        if len(items) < 3:
            self.error("SYNTAX", form, "(rule LANG KIND HEAD-SIDE (skip ...))")
            return
        lang, kind, side = (
            item.text if isinstance(item, SxAtom) else None for item in items[:3]
        )
        if not lang or kind not in RULE_KINDS or side not in ("head-left", "head-right"):
            self.error("SYNTAX", form, "(rule LANG KIND HEAD-SIDE (skip ...))")
            return
        skip: set[str] = set()
        for extra in items[3:]:
            if isinstance(extra, SxList) and extra.head() == "skip":
                words = self._atoms(extra)
                if words is not None:
                    skip |= set(words)
            else:
                self.error("SYNTAX", extra, "expected (skip ...)")
        self.rules.append(
            PhraseRule(
                lang=lang,
                kind=kind,
                head_side=side.removeprefix("head-"),
                skip=frozenset(skip),
                decl_index=len(self.rules),
                file=form.file,
                line=form.line,
                col=form.col,
            )
        )

    def _parse_lf_text(self, text: str, sx: Sx) -> Optional[LexicalFunction]:
        try:
            return self.registry.parse_lf(text)
        except UnknownLF as exc:
            self.error("UNKNOWN_LF", sx, str(exc))
            return None

    def _load_entry(self, form: SxList) -> None:
        clauses = self._clauses(form)
        entry_id = self._required_atom(clauses, "id", form)
        phon = self._required_atom(clauses, "phon", form)
        cat = self._required_atom(clauses, "cat", form)
        if entry_id is None or phon is None or cat is None:
            return
        if ":" not in entry_id:
            self.error("SYNTAX", form, f"entry id {entry_id!r} must be LANG:NAME")
            return
        if cat not in CATEGORIES:
            self.error("SYNTAX", form, f"unknown category {cat!r}")
            return
        lang = entry_id.split(":", 1)[0]
        preds: list[Predication] = []
        for sem_clause in clauses.get("sem", ()):
            for item in sem_clause.items[1:]:
                if not isinstance(item, SxList):
                    self.error("SYNTAX", item, "expected (pred NAME) or (lf TEXT)")
                    continue
                if item.head() == "pred":
                    name = self._atom(item, "predicate name")
                    if name:
                        preds.append(Predication.base(name))
                elif item.head() == "lf":
                    text = self._atom(item, "lexical function")
                    if text:
                        fn = self._parse_lf_text(text, item)
                        if fn:
                            preds.append(Predication.lf(fn))
                else:
                    self.error("SYNTAX", item, "expected (pred NAME) or (lf TEXT)")
        merged_sig = None
        for merged_clause in clauses.get("merged", ()):
            names = self._atoms(merged_clause)
            if names is None or len(names) != 2:
                self.error("SYNTAX", merged_clause, "(merged LF BASE-PRED)")
                continue
            fn = self._parse_lf_text(names[0], merged_clause)
            if fn is None:
                continue
            merged_sig = MergedSig(replace(fn, merged=True), names[1])
        if merged_sig:
            # the stored sem carries the merged flag cleared; merged_sig keeps it
            if not any(p.kind == "base" and p.name == merged_sig.base for p in preds):
                preds.append(Predication.base(merged_sig.base))
            lf_pred = Predication.lf(replace(merged_sig.lf, merged=False))
            if lf_pred not in preds:
                preds.append(lf_pred)
        entry = LexEntry(
            id=entry_id,
            lang=lang,
            phon=phon,
            cat=cat,
            sem=SemIndex(Variable("x"), frozenset(preds)),
            merged_sig=merged_sig,
            file=form.file,
            line=form.line,
            col=form.col,
        )
        self.raw_entries.append((entry, form))

    def _required_atom(self, clauses, name: str, form: SxList) -> Optional[str]:
        found = clauses.get(name)
        if not found:
            self.error("SYNTAX", form, f"missing ({name} ...) clause")
            return None
        return self._atom(found[0], name)

    def _load_coll(self, form: SxList) -> None:
        clauses = self._clauses(form)
        base = self._required_atom(clauses, "base", form)
        super_id = self._required_atom(clauses, "super", form)
        lf_text = self._required_atom(clauses, "lf", form)
        position = self._required_atom(clauses, "pos", form)
        if None in (base, super_id, lf_text, position):
            return
        if position not in POSITIONS:
            self.error("SYNTAX", form, f"unknown position {position!r}")
            return
        fn = self._parse_lf_text(lf_text, form)
        if fn is None:
            return
        if fn.merged:
            self.error("SYNTAX", form, "collocate subentries cannot be merged")
            return
        form_word = insert = None
        if clauses.get("form"):
            form_word = self._atom(clauses["form"][0], "surface form")
        if clauses.get("insert"):
            insert = self._atom(clauses["insert"][0], "function word")
        self.colls.append(
            CollocateSubentry(
                base_id=base,
                super_id=super_id,
                lf=fn,
                position=position,
                form=form_word,
                insert=insert,
                file=form.file,
                line=form.line,
                col=form.col,
            )
        )

    def _load_qualia(self, form: SxList) -> None:
        clauses = self._clauses(form)
        entry_id = self._required_atom(clauses, "id", form)
        if entry_id is None:
            return
        facets: list[tuple[str, str]] = []
        for item in form.items[1:]:
            if not isinstance(item, SxList) or item.head() == "id":
                continue
            role = item.head()
            if role not in QUALIA_ROLES:
                self.error("SYNTAX", item, f"unknown qualia role {role!r}")
                continue
            facet = self._atom(item, "facet name")
            if facet:
                facets.append((role, facet))
        self.qualia.append((entry_id, tuple(facets), form))

    def _load_bi(self, form: SxList) -> None:
        clauses = self._clauses(form)
        ends = {}
        for key in ("src", "tgt"):
            found = clauses.get(key)
            if not found:
                self.error("SYNTAX", form, f"missing ({key} LANG PRED)")
                return
            names = self._atoms(found[0])
            if names is None or len(names) != 2:
                self.error("SYNTAX", found[0], f"({key} LANG PRED)")
                return
            ends[key] = names
        self.signs.append(
            Sign(
                src_lang=ends["src"][0],
                src_pred=ends["src"][1],
                tgt_lang=ends["tgt"][0],
                tgt_pred=ends["tgt"][1],
                file=form.file,
                line=form.line,
                col=form.col,
            )
        )

    def _load_bi_lf(self, form: SxList) -> None:
        names = self._atoms(form)
        if names is None or len(names) not in (1, 2):
            self.error("SYNTAX", form, "(bi-lf NAME) or (bi-lf SRC TGT)")
            return
        for name in names:
            if name not in self.registry:
                self.error("UNKNOWN_LF", form, f"undeclared lexical function {name!r}")
                return
        self.lf_signs.append(
            LfSign(
                src_name=names[0],
                tgt_name=names[-1],
                file=form.file,
                line=form.line,
                col=form.col,
            )
        )

    # -- assembly -------------------------------------------------------------

    def build(self) -> Optional[Lexicon]:
        entries: dict[str, LexEntry] = {}
        for entry, form in self.raw_entries:
            if entry.id in entries:
                self.error("DUPLICATE_ID", form, f"duplicate entry id {entry.id!r}")
                continue
            entries[entry.id] = entry
        by_base: dict[str, list[CollocateSubentry]] = {}
        for sub in self.colls:
            dangling = [i for i in (sub.base_id, sub.super_id) if i not in entries]
            if dangling:
                sx = SxAtom("", False, sub.file, sub.line, sub.col)
                self.error(
                    "DANGLING_REF",
                    sx,
                    f"collocation references unknown entries: {', '.join(dangling)}",
                )
                continue
            by_base.setdefault(sub.base_id, []).append(sub)
        qualia_by_id: dict[str, tuple[tuple[str, str], ...]] = {}
        for entry_id, facets, form in self.qualia:
            if entry_id not in entries:
                self.error("DANGLING_REF", form, f"qualia for unknown entry {entry_id!r}")
                continue
            qualia_by_id[entry_id] = qualia_by_id.get(entry_id, ()) + facets
        if has_errors(self.diagnostics):
            return None
        final = [
            replace(
                entry,
                colls=tuple(by_base.get(entry.id, ())),
                qualia=qualia_by_id.get(entry.id, ()),
            )
            for entry in entries.values()
        ]
        return Lexicon(
            final,
            self.signs,
            self.lf_signs,
            self.registry,
            self.sorts,
            Grammar(self.rules),
        )


def load_lexicon(
    sources: Sequence[tuple[str, str]],
) -> tuple[Optional[Lexicon], list[Diagnostic]]:
    """Load one lexicon from (name, text) pairs; later files extend earlier.

    Returns the lexicon and the load diagnostics; the lexicon is None
    when any error-level diagnostic was produced.  Run :func:`validate`
    on the result for content checks beyond loadability.
    """
    loader = _Loader()
    for name, text in sources:
        forms, diagnostics = read_sexprs(text, name)
        loader.diagnostics.extend(diagnostics)
        for form in forms:
            loader.load_form(form)
    lexicon = loader.build()
    return lexicon, loader.diagnostics


def load_lexicon_files(paths: Sequence[str]) -> tuple[Optional[Lexicon], list[Diagnostic]]:
    sources = []
    for path in paths:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                sources.append((path, handle.read()))
        except OSError as exc:
            return None, [Diagnostic(ERROR, "IO", str(path), 0, 0, str(exc))]
    return load_lexicon(sources)


def require_lexicon(paths: Sequence[str]) -> Lexicon:
    lexicon, diagnostics = load_lexicon_files(paths)
    if lexicon is None:
        raise LexiconError(diagnostics)
    return lexicon


# ---------------------------------------------------------------------------
# Validation


def validate(lexicon: Lexicon) -> list[Diagnostic]:
    """Content checks on a loaded lexicon.

    Errors: collocate category inconsistent with its position pattern, a
    merged entry whose base predicate no plain entry realizes, a sign
    endpoint naming a predicate with no entry, a lexical function sign
    that is not an identity, an insert word the language's rules cannot
    skip.  Warnings: a super-entry that itself carries collocations, a
    qualia subscript its base entry does not declare, sort pairs with an
    ambiguous meet.
    """
    out: list[Diagnostic] = []

    def emit(level, code, obj, message):
        out.append(Diagnostic(level, code, obj.file, obj.line, obj.col, message))

    for a, b in lexicon.sorts.check_meets():
        anchor = lexicon.entries[0] if lexicon.entries else None
        file = anchor.file if anchor else "<lexicon>"
        out.append(
            Diagnostic(
                WARNING,
                "AMBIGUOUS_SORT_MEET",
                file,
                0,
                0,
                f"sorts {a!r} and {b!r} have no unique meet",
            )
        )

    for entry in lexicon.entries:
        declared_roles = {role for role, _ in entry.qualia}
        for sub in entry.colls:
            super_entry = lexicon.by_id[sub.super_id]
            allowed = POSITION_CATEGORIES[sub.position]
            if super_entry.cat not in allowed:
                emit(
                    ERROR,
                    "CATEGORY_MISMATCH",
                    sub,
                    f"position {sub.position!r} needs category "
                    f"{' or '.join(allowed)}, but {super_entry.id} is {super_entry.cat}",
                )
            if super_entry.colls:
                emit(
                    WARNING,
                    "NESTED_COLLS",
                    sub,
                    f"super-entry {super_entry.id} carries its own collocations",
                )
            if sub.lf.subscript and sub.lf.subscript not in declared_roles:
                emit(
                    WARNING,
                    "QUALIA_ROLE_UNDECLARED",
                    sub,
                    f"{entry.id} does not declare qualia role {sub.lf.subscript!r}",
                )
            if sub.insert:
                skippable = lexicon.grammar.skip_words(entry.lang)
                if sub.insert not in skippable:
                    emit(
                        ERROR,
                        "INSERT_NOT_SKIPPABLE",
                        sub,
                        f"insert word {sub.insert!r} is not skippable by any "
                        f"{entry.lang} rule",
                    )
        if entry.merged_sig and not lexicon.base_entries(entry.lang, entry.merged_sig.base):
            emit(
                ERROR,
                "MERGED_BASE_MISSING",
                entry,
                f"no plain {entry.lang} entry realizes base predicate "
                f"{entry.merged_sig.base!r}",
            )

    for sign in lexicon.signs:
        for lang, pred in ((sign.src_lang, sign.src_pred), (sign.tgt_lang, sign.tgt_pred)):
            if not lexicon.by_pred.get((lang, pred)):
                emit(
                    ERROR,
                    "SIGN_UNKNOWN_PRED",
                    sign,
                    f"sign endpoint {lang}:{pred} matches no entry",
                )
    for lf_sign in lexicon.lf_signs:
        if lf_sign.src_name != lf_sign.tgt_name:
            emit(
                ERROR,
                "LF_SIGN_NOT_IDENTITY",
                lf_sign,
                f"lexical functions translate as themselves: "
                f"{lf_sign.src_name} vs {lf_sign.tgt_name}",
            )
    return out


# ---------------------------------------------------------------------------
# Serialization


def _quote(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def serialize(lexicon: Lexicon) -> str:
    """Canonical text for a lexicon; loading it back is a fixed point."""
    out = io.StringIO()
    decls = {name: lexicon.sorts.parents(name) for name in lexicon.sorts.declared}
    if decls:
        inner = " ".join(f"({name} {' '.join(parents)})" for name, parents in decls.items())
        out.write(f"(sorts {inner})\n")
    if lexicon.registry.names:
        out.write(f"(lfs {' '.join(lexicon.registry.names)})\n")
    for rule in lexicon.grammar.rules:
        skip = " ".join(_quote(w) for w in sorted(rule.skip))
        skip_clause = f"(skip {skip})" if skip else "(skip)"
        out.write(f"(rule {rule.lang} {rule.kind} head-{rule.head_side} {skip_clause})\n")
    for entry in sorted(lexicon.entries, key=lambda e: e.id):
        parts = [
            f"(id {entry.id})",
            f"(phon {_quote(entry.phon)})",
            f"(cat {entry.cat})",
        ]
        sig = entry.merged_sig
        sem_parts = [
            f"(pred {p.name})"
            for p in entry.sem.base_preds
            if not (sig and p.name == sig.base)
        ]
        sem_parts += [
            f"(lf {p.function().render()})"
            for p in entry.sem.lf_preds
            if not (sig and p.name == sig.lf.name and p.subscript == sig.lf.subscript)
        ]
        if sem_parts:
            parts.append(f"(sem {' '.join(sem_parts)})")
        if entry.merged_sig:
            parts.append(
                f"(merged {entry.merged_sig.lf.plain().render()} {entry.merged_sig.base})"
            )
        out.write(f"(entry {' '.join(parts)})\n")
        if entry.qualia:
            facets = " ".join(f"({role} {facet})" for role, facet in entry.qualia)
            out.write(f"(qualia (id {entry.id}) {facets})\n")
    all_colls = sorted(
        (sub for entry in lexicon.entries for sub in entry.colls),
        key=lambda s: (s.base_id, s.super_id, s.lf.render()),
    )
    for sub in all_colls:
        parts = [
            f"(base {sub.base_id})",
            f"(super {sub.super_id})",
            f"(lf {sub.lf.render()})",
            f"(pos {sub.position})",
        ]
        if sub.form:
            parts.append(f"(form {_quote(sub.form)})")
        if sub.insert:
            parts.append(f"(insert {_quote(sub.insert)})")
        out.write(f"(coll {' '.join(parts)})\n")
    for sign in sorted(
        lexicon.signs, key=lambda s: (s.src_lang, s.src_pred, s.tgt_lang, s.tgt_pred)
    ):
        out.write(
            f"(bi (src {sign.src_lang} {sign.src_pred}) "
            f"(tgt {sign.tgt_lang} {sign.tgt_pred}))\n"
        )
    for lf_sign in sorted(lexicon.lf_signs, key=lambda s: s.src_name):
        out.write(f"(bi-lf {lf_sign.src_name})\n")
    return out.getvalue()
