"""Phrase analysis: from a token sequence to semantic readings.

Analysis covers exactly the constructions the lexicon can license: a
single content word, or a binary phrase built by one of the language's
declared rules (head-adjunct or head-complement), possibly with rule
skippable function words in between.  Each derivation yields up to two
kinds of reading:

  - a collocational reading, when the base daughter's COLLS set holds a
    resolved collocate subentry unifiable with the other daughter.  The
    collocate word then contributes a lexical function applied to the
    base's index rather than a predicate of its own: *heavy smoker*
    analyzes as ``smoker(x),Magn(x)``.
  - a literal reading, where both words keep their own predicates:
    *heavy box* analyzes as ``box(x),heavy(x)``.  Words without a free
    variant (no base predicate of their own) yield none.

In a head-adjunct phrase the base is the head and the collocate the
adjunct; in a head-complement phrase (support verbs, quantity nouns)
the base is the complement and the collocate the head.  A single word
that lexicalizes function and base together (a merged entry) analyzes
as the corresponding collocational semantics.

Readings are deterministic: collocational before literal, then by
canonical semantic text.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from . import avm
from .errors import NoParse, TokenUnknown
from .lexicon import CollocateSubentry, LexEntry, Lexicon, PhraseRule
from .semantics import (
    LexicalFunction,
    Predication,
    SemIndex,
    Variable,
    render_sem,
    sem_union,
)

MAX_TOKENS = 4

#: Position patterns admitted under each rule kind.
_RULE_POSITIONS = {
    "head-adjunct": ("pre", "post"),
    "head-complement": ("sv", "qty"),
}

#: Daughter categories a derivation must satisfy: (head, dependent).
_RULE_CATEGORIES = {
    "head-adjunct": (("N", "V"), ("A", "Adv")),
    "head-complement": (("V", "N"), ("N",)),
}

#: A token-to-entry assignment: (token index, token, entry id or None).
Span = tuple[int, str, Optional[str]]


@dataclass(frozen=True)
class Reading:
    """One analysis of the input: a construction and its semantics."""

    construction: str  # "collocational" | "literal" | "merged"
    sem: SemIndex
    lf: Optional[LexicalFunction] = None
    base_id: Optional[str] = None
    collocate_id: Optional[str] = None
    rule: Optional[PhraseRule] = None
    license_avm: Optional[avm.FeatureStructure] = None
    spans: tuple[Span, ...] = ()

    def label(self) -> str:
        if self.lf is None:
            return f"[{self.construction}]"
        return f"[{self.construction} {self.lf.render()}]"

    def line(self) -> str:
        return f"{self.label()} {render_sem(self.sem)}"


def compose_sem(head_sem: SemIndex, dep_sem: SemIndex) -> SemIndex:
    """Union the daughters' semantics over the head's variable."""
    return sem_union(head_sem, dep_sem)


def license(
    lexicon: Lexicon,
    base: LexEntry,
    other: LexEntry,
    kind: str,
) -> Optional[LexicalFunction]:
    """First lexical function under which ``base`` licenses ``other``.

    ``base`` is the entry whose COLLS set is consulted: the head of a
    head-adjunct phrase, the complement of a head-complement phrase.
    Returns None when no resolved collocate subentry of the right
    position class unifies with ``other``.
    """
    found = _licensed_subentries(lexicon, base, other, kind)
    return found[0][0].lf if found else None


def _licensed_subentries(
    lexicon: Lexicon,
    base: LexEntry,
    other: LexEntry,
    kind: str,
) -> list[tuple[CollocateSubentry, avm.FeatureStructure]]:
    base_avm = lexicon.entry_avm(base.id)
    colls_value = base_avm.get("COLLS")
    members = colls_value.members if isinstance(colls_value, avm.SetNode) else ()
    other_avm = lexicon.entry_avm(other.id)
    out = []
    for sub, member in zip(base.colls, members):
        if sub.position not in _RULE_POSITIONS[kind]:
            continue
        unified = avm.unify(member, other_avm, lexicon.sorts)
        if unified is not None:
            out.append((sub, unified))
    return out


def analyze(tokens: Iterable[str], lang: str, lexicon: Lexicon) -> list[Reading]:
    """All readings of ``tokens`` in ``lang``, best first.

    Raises :class:`TokenUnknown` for a token that is neither in the
    lexicon nor skippable by any rule, and :class:`NoParse` when no
    construction covers the input.
    """
    tokens = list(tokens)
    if not tokens or len(tokens) > MAX_TOKENS:
        raise NoParse(tokens, lang)
    skippable = lexicon.grammar.skip_words(lang)
    for token in tokens:
        if not lexicon.lookup_token(lang, token) and token not in skippable:
            raise TokenUnknown(token, lang)

    readings: list[Reading] = []
    if len(tokens) == 1:
        readings.extend(_lexical_readings(tokens[0], lang, lexicon, tokens))
    else:
        for rule in lexicon.grammar.rules_for(lang):
            content = [(i, t) for i, t in enumerate(tokens) if t not in rule.skip]
            if len(content) == 1:
                readings.extend(
                    _lexical_readings(content[0][1], lang, lexicon, tokens)
                )
            elif len(content) == 2:
                readings.extend(_derive(rule, content, tokens, lang, lexicon))

    readings = _dedup(readings)
    if not readings:
        raise NoParse(tokens, lang)
    readings.sort(key=lambda r: (r.construction == "literal", render_sem(r.sem)))
    return readings


def _spans(tokens: list[str], assigned: dict[int, str]) -> tuple[Span, ...]:
    return tuple(
        (index, token, assigned.get(index)) for index, token in enumerate(tokens)
    )


def _lexical_readings(
    token: str, lang: str, lexicon: Lexicon, tokens: list[str]
) -> list[Reading]:
    index = tokens.index(token)
    out = []
    for entry in lexicon.lookup_token(lang, token):
        if entry.phon != token:
            continue  # inflected collocate forms do not stand alone
        spans = _spans(tokens, {index: entry.id})
        if entry.merged_sig:
            sem = SemIndex(Variable("x"), entry.sem.preds)
            out.append(
                Reading(
                    "merged",
                    sem,
                    lf=entry.merged_sig.lf,
                    base_id=entry.id,
                    collocate_id=entry.id,
                    spans=spans,
                )
            )
        elif entry.sem.base_preds:
            sem = SemIndex(Variable("x"), frozenset(entry.sem.base_preds))
            out.append(Reading("literal", sem, base_id=entry.id, spans=spans))
    return out


def _derive(
    rule: PhraseRule,
    content: list[tuple[int, str]],
    tokens: list[str],
    lang: str,
    lexicon: Lexicon,
) -> list[Reading]:
    (left_idx, left_tok), (right_idx, right_tok) = content
    if rule.head_side == "left":
        head_idx, head_tok, dep_idx, dep_tok = left_idx, left_tok, right_idx, right_tok
    else:
        head_idx, head_tok, dep_idx, dep_tok = right_idx, right_tok, left_idx, left_tok
    head_cats, dep_cats = _RULE_CATEGORIES[rule.kind]

    out = []
    for head in lexicon.lookup_token(lang, head_tok):
        if head.cat not in head_cats:
            continue
        for dep in lexicon.lookup_token(lang, dep_tok):
            if dep.cat not in dep_cats:
                continue
            spans = _spans(tokens, {head_idx: head.id, dep_idx: dep.id})
            if rule.kind == "head-adjunct":
                base, base_idx = head, head_idx
                coll, coll_idx = dep, dep_idx
            else:
                base, base_idx = dep, dep_idx
                coll, coll_idx = head, head_idx
            for sub, unified in _licensed_subentries(lexicon, base, coll, rule.kind):
                if not _position_ok(sub, base_idx, coll_idx):
                    continue
                if sub.insert and not _insert_present(
                    sub, base_idx, coll_idx, tokens, rule
                ):
                    continue
                sem = SemIndex(
                    Variable("x"),
                    frozenset(base.sem.base_preds) | {Predication.lf(sub.lf)},
                )
                out.append(
                    Reading(
                        "collocational",
                        sem,
                        lf=sub.lf,
                        base_id=base.id,
                        collocate_id=coll.id,
                        rule=rule,
                        license_avm=unified,
                        spans=spans,
                    )
                )
            literal = _literal_reading(rule, head, dep, spans)
            if literal:
                out.append(literal)
    return out


def _position_ok(sub: CollocateSubentry, base_idx: int, coll_idx: int) -> bool:
    if sub.position == "post":
        return coll_idx > base_idx
    # pre, sv and qty all place the collocate before the base
    return coll_idx < base_idx


def _insert_present(
    sub: CollocateSubentry,
    base_idx: int,
    coll_idx: int,
    tokens: list[str],
    rule: PhraseRule,
) -> bool:
    lo, hi = sorted((base_idx, coll_idx))
    between = [t for t in tokens[lo + 1 : hi] if t in rule.skip]
    return sub.insert in between


def _literal_reading(
    rule: PhraseRule,
    head: LexEntry,
    dep: LexEntry,
    spans: tuple[Span, ...],
) -> Optional[Reading]:
    head_preds = head.sem.base_preds
    dep_preds = dep.sem.base_preds
    if not head_preds or not dep_preds:
        return None
    if head.merged_sig or dep.merged_sig:
        return None
    sem = compose_sem(
        SemIndex(Variable("x"), frozenset(head_preds)),
        SemIndex(Variable("y"), frozenset(dep_preds)),
    )
    return Reading(
        "literal", sem, base_id=head.id, collocate_id=dep.id, rule=rule, spans=spans
    )


def _dedup(readings: list[Reading]) -> list[Reading]:
    seen = set()
    out = []
    for reading in readings:
        key = (reading.construction, reading.lf, reading.sem.preds)
        if key in seen:
            continue
        seen.add(key)
        out.append(reading)
    return out
