"""Generation: from a semantic index to target-language surfaces.

Three realization strategies apply, in a fixed preference order:

  (a) merged: a single word lexicalizes the base and the function
      together (``Mult(sleutel)`` comes out as *sleutelbos*);
  (b) collocational: the base entry's collocate subentries realize each
      lexical function next to the base word (*grand fumeur*, *commit a
      crime*);
  (c) literal: with no lexical functions in play, the base predicates
      are realized word for word (*boite lourde*).

All realizations are returned, best first; candidate collocates are
ordered by subscript specificity, qualia-role declaration order, then
surface form.  A semantics whose lexical functions cannot be realized
at all raises :class:`RealizationGap`; a missing base word raises
:class:`NoBaseEntry`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import NoBaseEntry, RealizationGap
from .lexicon import CollocateSubentry, LexEntry, Lexicon
from .semantics import SemIndex
from .transfer import paraphrase_candidates

_LITERAL_HEAD_CATS = ("N", "V")


@dataclass(frozen=True)
class Realization:
    """One generated surface and the strategy that produced it."""

    surface: str
    strategy: str  # "merged" | "collocational" | "literal"
    lf_text: str  # rendered function(s), "-" for literal
    entry_ids: tuple[str, ...]

    def record(self) -> str:
        return f'"{self.surface}" [{self.strategy} {self.lf_text} {"+".join(self.entry_ids)}]'


def generate(sem: SemIndex, lang: str, lexicon: Lexicon) -> list[Realization]:
    """All realizations of ``sem`` in ``lang``, preferred first."""
    bases = sem.base_preds
    lfs = sorted(sem.lf_preds, key=lexicon.registry.sort_key)
    if not bases:
        raise RealizationGap("nothing to realize: no base predicate")

    results = list(_merged(sem, lang, lexicon))
    merged_only = any(p.merged for p in lfs)
    if merged_only and not results:
        raise RealizationGap(
            f"no entry lexicalizes {lfs[0].function().render()}"
            f"({bases[0].name}) in {lang}"
        )
    if lfs and not merged_only:
        results.extend(_collocational(bases, lfs, lang, lexicon, bool(results)))
    if not lfs:
        results.extend(_literal(bases, lang, lexicon))
    if not results:
        raise RealizationGap(f"no realization of {bases[0].name} in {lang}")
    return results


def _merged(sem, lang, lexicon):
    if len(sem.base_preds) != 1 or len(sem.lf_preds) != 1:
        return
    for candidate in paraphrase_candidates(sem, lang, lexicon):
        entry = candidate.entry
        sig = entry.merged_sig
        yield Realization(entry.phon, "merged", sig.lf.render(), (entry.id,))


def _collocational(bases, lfs, lang, lexicon, have_results):
    if len(bases) != 1:
        if have_results:
            return []
        raise RealizationGap(
            "collocational realization needs exactly one base predicate, "
            f"got {len(bases)}"
        )
    base_pred = bases[0]
    base_entries = lexicon.base_entries(lang, base_pred.name)
    if not base_entries:
        if have_results:
            return []
        raise NoBaseEntry(base_pred.name, lang)

    out = []
    missing = None
    for base_entry in sorted(base_entries, key=lambda e: e.id):
        per_lf = []
        for lf_pred in lfs:
            candidates = lexicon.apply_lf(lf_pred.function(), base_entry)
            if not candidates:
                missing = missing or (lf_pred, base_entry)
                per_lf = None
                break
            per_lf.append(candidates)
        if per_lf is None:
            continue
        for combo in itertools.product(*per_lf):
            surface = base_entry.phon
            # innermost function applies closest to the base word
            for sub, collocate in reversed(combo):
                surface = _attach(surface, sub, collocate)
            lf_text = "+".join(sub.lf.render() for sub, _ in combo)
            ids = (base_entry.id,) + tuple(c.id for _, c in combo)
            out.append(Realization(surface, "collocational", lf_text, ids))
    if not out and not have_results:
        assert missing is not None
        lf_pred, base_entry = missing
        raise RealizationGap(
            f"no collocate realizes {lf_pred.function().render()} "
            f"on {base_entry.id}"
        )
    return out


def realize_surface(base: LexEntry, sub: CollocateSubentry, collocate: LexEntry) -> str:
    """Surface of one collocate applied to its base word.

    Placement follows the subentry's position: pre puts the collocate
    first, post puts it last, sv and qty put it first with the declared
    function word inserted; a subentry ``form`` replaces the collocate's
    surface (the base's, under qty).
    """
    return _attach(base.phon, sub, collocate)


def _attach(surface: str, sub: CollocateSubentry, collocate: LexEntry) -> str:
    coll_surface = collocate.phon
    if sub.form and sub.position != "qty":
        coll_surface = sub.form
    if sub.position == "post":
        return f"{surface} {coll_surface}"
    if sub.position == "qty" and sub.form:
        surface = sub.form
    if sub.insert:
        return f"{coll_surface} {sub.insert} {surface}"
    return f"{coll_surface} {surface}"


def _literal(bases, lang, lexicon):
    if len(bases) == 1:
        entries = lexicon.base_entries(lang, bases[0].name)
        if not entries:
            raise NoBaseEntry(bases[0].name, lang)
        return [
            Realization(e.phon, "literal", "-", (e.id,))
            for e in sorted(entries, key=lambda e: (e.phon, e.id))
        ]
    if len(bases) != 2:
        raise RealizationGap(
            f"literal realization covers at most two base predicates, got {len(bases)}"
        )
    pairs = []
    for head_pred, mod_pred in (bases, tuple(reversed(bases))):
        heads = [
            e
            for e in lexicon.base_entries(lang, head_pred.name)
            if e.cat in _LITERAL_HEAD_CATS
        ]
        mods = [
            e
            for e in lexicon.base_entries(lang, mod_pred.name)
            if e.cat in ("A", "Adv")
        ]
        pairs.extend(itertools.product(heads, mods))
    if not pairs:
        missing = [p.name for p in bases if not lexicon.base_entries(lang, p.name)]
        if missing:
            raise NoBaseEntry(missing[0], lang)
        raise RealizationGap(
            f"no head plus modifier realization of "
            f"{bases[0].name} and {bases[1].name} in {lang}"
        )
    head_rule = next(
        (
            r
            for r in lexicon.grammar.rules_for(lang)
            if r.kind == "head-adjunct"
        ),
        None,
    )
    if head_rule is None:
        raise RealizationGap(f"language {lang} declares no head-adjunct rule")
    out = []
    for head, mod in sorted(pairs, key=lambda p: (p[0].id, p[1].id)):
        if head_rule.head_side == "left":
            surface = f"{head.phon} {mod.phon}"
        else:
            surface = f"{mod.phon} {head.phon}"
        out.append(Realization(surface, "literal", "-", (head.id, mod.id)))
    return out
