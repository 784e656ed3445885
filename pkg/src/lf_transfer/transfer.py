"""Semantic transfer: mapping analyses between languages.

Base predicates are mapped through the lexicon's bilingual signs; the
lexical-function predications cross untouched, since a lexical function
names the same collocational meaning in every language.  That asymmetry
is the whole point: the lexicon never has to pair *heavy* with *grand*
or *stark* directly, it only has to know that each realizes Magn on its
own base.

The paraphrase rule relating a collocation to a single merged word,
``W + F(W)`` versus ``//F(W)``, also lives here and is read in both
directions: :func:`paraphrase_candidates` finds entries lexicalizing an
(F, W) pair of a semantics in one word, and :func:`unmerge` recovers
the two-predication form from such an entry.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MissingSign
from .lexicon import LexEntry, Lexicon
from .semantics import LexicalFunction, Predication, SemIndex


@dataclass(frozen=True)
class MergedRealization:
    """A one-word lexicalization and the predication pair it consumes."""

    entry: LexEntry
    base_pred: Predication
    lf_pred: Predication


def transfer(sem: SemIndex, src_lang: str, tgt_lang: str, lexicon: Lexicon) -> SemIndex:
    """Map a semantic index from one language's predicates to another's.

    Raises :class:`MissingSign` for a base predicate with no bilingual
    sign; lexical functions need no sign and keep name, subscript and
    merge flag.
    """
    preds: set[Predication] = set()
    for pred in sem.base_preds:
        target = lexicon.sign_target(src_lang, tgt_lang, pred.name)
        if target is None:
            raise MissingSign(pred.name, src_lang, tgt_lang)
        preds.add(Predication.base(target))
    preds.update(sem.lf_preds)
    return SemIndex(sem.var, frozenset(preds))


def paraphrase_candidates(
    sem: SemIndex, lang: str, lexicon: Lexicon
) -> list[MergedRealization]:
    """Entries lexicalizing a (base, function) pair of ``sem`` in one word.

    A subscripted request is honored exactly, an unsubscripted one
    accepts any declared subscript; deterministic order by surface form
    then entry id.
    """
    out = []
    for base in sem.base_preds:
        for lf_pred in sem.lf_preds:
            query = LexicalFunction(lf_pred.name, lf_pred.subscript)
            for entry in lexicon.merged_entries(lang, base.name):
                sig = entry.merged_sig
                if sig and sig.lf.matches(query):
                    out.append(MergedRealization(entry, base, lf_pred))
    out.sort(key=lambda item: (item.entry.phon, item.entry.id))
    return out


def unmerge(entry: LexEntry) -> SemIndex:
    """The two-predication semantics behind a merged entry."""
    sig = entry.merged_sig
    if sig is None:
        raise ValueError(f"{entry.id} is not a merged entry")
    plain = LexicalFunction(sig.lf.name, sig.lf.subscript)
    return SemIndex(
        entry.sem.var,
        frozenset({Predication.base(sig.base), Predication.lf(plain)}),
    )
