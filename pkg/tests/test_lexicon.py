"""Lexicon loading, overwrite, resolution, validation, and serialization."""

import random
import re

import pytest

from lf_transfer.avm import (
    Atom,
    Node,
    SetNode,
    TOP,
    path_value,
    render,
    struct_equal,
    unify,
)
from lf_transfer.errors import LexiconError
from lf_transfer.lexicon import (
    Diagnostic,
    default_overwrite,
    has_errors,
    load_lexicon,
    load_lexicon_files,
    read_sexprs,
    require_lexicon,
    resolve_collocate,
    serialize,
    validate,
)
from lf_transfer.semantics import LexicalFunction

from conftest import data_path
from oracle import SORTS

PREAMBLE = """\
(sorts (sign top) (collocation sign) (collocate sign) (pred top))
(lfs Magn Oper Bon Mult)
(rule xx head-adjunct head-right (skip))
"""

DIAG_RE = re.compile(r"^(ERROR|WARNING) [A-Z_]+ \S+:\d+:\d+ .+$")


def load_text(text, name="inline.lex"):
    return load_lexicon([(name, text)])


def entry_text(eid, phon, cat, pred):
    return f'(entry (id {eid}) (phon "{phon}") (cat {cat}) (sem (pred {pred})))\n'


# ---------------------------------------------------------------------------
# Reader


class TestReader:
    def test_comments_and_atoms(self):
        forms, diags = read_sexprs("; note\n(lfs Magn) ; trailing\n", "f.lex")
        assert not diags
        assert len(forms) == 1 and forms[0].head() == "lfs"

    def test_strings_with_escapes(self):
        forms, diags = read_sexprs('(entry (phon "a\\"b\\n"))', "f.lex")
        assert not diags
        atom = forms[0].items[1].items[1]
        assert atom.quoted and atom.text == 'a"b\n'

    def test_unterminated_list(self):
        _, diags = read_sexprs("(entry (id x)", "f.lex")
        assert has_errors(diags)
        assert diags[0].code == "SYNTAX"

    def test_unterminated_string(self):
        _, diags = read_sexprs('(phon "oops)', "f.lex")
        assert any(d.code == "SYNTAX" for d in diags)

    def test_stray_closer(self):
        _, diags = read_sexprs("(lfs Magn))", "f.lex")
        assert has_errors(diags)

    def test_positions_are_one_based(self):
        forms, _ = read_sexprs("\n  (lfs Magn)", "f.lex")
        assert (forms[0].line, forms[0].col) == (2, 3)


# ---------------------------------------------------------------------------
# Loading


class TestLoading:
    def test_fixture_lexicons_load_clean(self, lexicon):
        assert lexicon.languages == ("de", "en", "fr", "nl")
        assert len(lexicon.entries) == 36

    def test_token_index_includes_inflected_forms(self, lexicon):
        # a collocate form indexes the super-entry
        assert [e.id for e in lexicon.lookup_token("de", "starker")] == ["de:stark"]
        # a qty form inflects the base, so it indexes the base entry
        assert [e.id for e in lexicon.lookup_token("en", "keys")] == ["en:key"]
        assert [e.id for e in lexicon.lookup_token("fr", "acharnée")] == ["fr:acharne"]

    def test_pred_index(self, lexicon):
        assert [e.id for e in lexicon.base_entries("en", "smoker")] == ["en:smoker"]
        assert lexicon.base_entries("nl", "sleutel") == [
            lexicon.by_id["nl:sleutel"]
        ]

    def test_merged_index(self, lexicon):
        merged = lexicon.merged_entries("nl", "sleutel")
        assert [e.id for e in merged] == ["nl:sleutelbos"]
        sig = merged[0].merged_sig
        assert sig.base == "sleutel"
        assert sig.lf == LexicalFunction("Mult", merged=True)

    def test_merged_entry_sem_carries_plain_function(self, lexicon):
        entry = lexicon.by_id["nl:sleutelbos"]
        assert [p.name for p in entry.sem.base_preds] == ["sleutel"]
        (lf_pred,) = entry.sem.lf_preds
        assert lf_pred.function() == LexicalFunction("Mult")

    def test_sign_map_is_symmetric(self, lexicon):
        assert lexicon.sign_target("en", "fr", "smoker") == "fumeur"
        assert lexicon.sign_target("fr", "en", "fumeur") == "smoker"
        assert lexicon.sign_target("en", "nl", "smoker") is None

    def test_empty_source_is_an_empty_lexicon(self):
        lex, diags = load_text("")
        assert lex is not None and not diags
        assert lex.entries == ()

    def test_duplicate_id(self):
        text = PREAMBLE + entry_text("xx:a", "a", "N", "a") * 2
        lex, diags = load_text(text)
        assert lex is None
        assert [d.code for d in diags] == ["DUPLICATE_ID"]

    def test_dangling_super_reference(self):
        text = (
            PREAMBLE
            + entry_text("xx:a", "a", "N", "a")
            + "(coll (base xx:a) (super xx:ghost) (lf Magn) (pos pre))\n"
        )
        lex, diags = load_text(text)
        assert lex is None
        assert [d.code for d in diags] == ["DANGLING_REF"]

    def test_dangling_base_reference(self):
        text = (
            PREAMBLE
            + entry_text("xx:a", "a", "N", "a")
            + "(coll (base xx:ghost) (super xx:a) (lf Magn) (pos pre))\n"
        )
        lex, diags = load_text(text)
        assert lex is None
        assert any(d.code == "DANGLING_REF" for d in diags)

    def test_undeclared_lf(self):
        text = PREAMBLE + entry_text("xx:a", "a", "N", "a") + entry_text(
            "xx:b", "b", "A", "b"
        ) + "(coll (base xx:a) (super xx:b) (lf Intens) (pos pre))\n"
        lex, diags = load_text(text)
        assert lex is None
        assert any(d.code == "UNKNOWN_LF" for d in diags)

    def test_unknown_category(self):
        lex, diags = load_text(PREAMBLE + entry_text("xx:a", "a", "X", "a"))
        assert lex is None
        assert has_errors(diags)

    def test_bad_position(self):
        text = (
            PREAMBLE
            + entry_text("xx:a", "a", "N", "a")
            + entry_text("xx:b", "b", "A", "b")
            + "(coll (base xx:a) (super xx:b) (lf Magn) (pos above))\n"
        )
        lex, diags = load_text(text)
        assert lex is None

    def test_missing_file_reports_io(self):
        lex, diags = load_lexicon_files(["/nonexistent/missing.lex"])
        assert lex is None
        assert [d.code for d in diags] == ["IO"]

    def test_require_lexicon_raises_on_errors(self):
        with pytest.raises(LexiconError) as exc:
            require_lexicon(["/nonexistent/missing.lex"])
        assert exc.value.diagnostics

    def test_diagnostic_format(self):
        _, diags = load_text("(entry (id", "broken.lex")
        assert diags
        for diag in diags:
            assert DIAG_RE.match(diag.format()), diag.format()

    def test_diagnostic_format_example(self):
        diag = Diagnostic("ERROR", "SYNTAX", "f.lex", 3, 7, "unbalanced form")
        assert diag.format() == "ERROR SYNTAX f.lex:3:7 unbalanced form"


# ---------------------------------------------------------------------------
# Default overwrite


def n(sort=TOP, **features):
    return Node(sort, features)


def rand_node(rng, depth=0):
    if depth >= 2 or rng.random() < 0.3:
        return Atom(rng.choice("abcd"))
    feats = {}
    for name in ("F", "G", "H"):
        if rng.random() < 0.5:
            feats[name] = rand_node(rng, depth + 1)
    return Node(rng.choice((TOP, "sign")), feats)


class TestDefaultOverwrite:
    def test_empty_override_is_identity(self):
        base = n("sign", F=Atom("x"), G=n(H=Atom("y")))
        assert struct_equal(default_overwrite(base, n(), SORTS), base)

    def test_override_atom_wins(self):
        base = n(F=Atom("x"))
        result = default_overwrite(base, n(F=Atom("y")), SORTS)
        assert path_value(result, ("F",)).value == "y"

    def test_base_features_survive(self):
        base = n(F=Atom("x"), G=Atom("z"))
        result = default_overwrite(base, n(F=Atom("y")), SORTS)
        assert path_value(result, ("G",)).value == "z"

    def test_nested_merge_is_pathwise(self):
        base = n(F=n(G=Atom("keep"), H=Atom("old")))
        override = n(F=n(H=Atom("new")))
        result = default_overwrite(base, override, SORTS)
        assert path_value(result, ("F", "G")).value == "keep"
        assert path_value(result, ("F", "H")).value == "new"

    def test_kind_conflict_takes_override(self):
        base = n(F=Atom("x"))
        override = n(F=n(G=Atom("y")))
        result = default_overwrite(base, override, SORTS)
        assert path_value(result, ("F", "G")).value == "y"

    def test_sets_replace_rather_than_union(self):
        base = Node(TOP, {"REST": SetNode([n(F=Atom("a")), n(F=Atom("b"))])})
        override = Node(TOP, {"REST": SetNode([n(F=Atom("c"))])})
        result = default_overwrite(base, override, SORTS)
        members = path_value(result, ("REST",)).members
        assert len(members) == 1
        assert path_value(members[0], ("F",)).value == "c"

    def test_sort_is_meet_when_compatible(self):
        result = default_overwrite(n("collocation"), n("collocate"), SORTS)
        assert result.sort == "merged"

    def test_sort_is_override_when_incompatible(self):
        result = default_overwrite(n("sign"), n("pred"), SORTS)
        assert result.sort == "pred"

    def test_right_absorption_on_examples(self):
        base = n("sign", F=Atom("x"), G=n(H=Atom("y")))
        override = n(F=Atom("z"), G=n(H=n(F=Atom("w"))))
        once = default_overwrite(base, override, SORTS)
        twice = default_overwrite(once, override, SORTS)
        assert struct_equal(once, twice)

    def test_random_sweep_identity_and_absorption(self):
        rng = random.Random(77)
        for _ in range(300):
            base, override = rand_node(rng), rand_node(rng)
            if isinstance(base, Atom) or isinstance(override, Atom):
                continue
            assert struct_equal(default_overwrite(base, n(), SORTS), base)
            once = default_overwrite(base, override, SORTS)
            twice = default_overwrite(once, override, SORTS)
            assert struct_equal(once, twice)

    def test_agrees_with_unify_on_disjoint_paths(self):
        # when the two structures constrain disjoint feature sets, priority
        # union and unification coincide
        rng = random.Random(78)
        for _ in range(300):
            base = Node(TOP, {"F": rand_node(rng), "G": rand_node(rng)})
            override = Node(TOP, {"H": rand_node(rng)})
            merged = unify(base, override, SORTS)
            assert merged is not None
            assert struct_equal(default_overwrite(base, override, SORTS), merged)

    def test_preserves_sharing_in_override(self):
        shared = n(F=Atom("x"))
        override = Node(TOP, {"G": shared, "H": shared})
        result = default_overwrite(n(), override, SORTS)
        assert path_value(result, ("G",)) is path_value(result, ("H",))


# ---------------------------------------------------------------------------
# Collocate resolution


class TestResolveCollocate:
    def find_sub(self, lexicon, base_id, super_id):
        for sub in lexicon.by_id[base_id].colls:
            if sub.super_id == super_id:
                return sub
        raise AssertionError(f"no subentry {base_id} <- {super_id}")

    def test_resolution_keeps_super_surface(self, lexicon):
        sub = self.find_sub(lexicon, "en:criticism", "en:strong")
        resolved = resolve_collocate(lexicon, sub)
        assert path_value(resolved, ("PHON",)).value == "strong"
        assert path_value(resolved, ("CAT",)).value == "A"
        assert path_value(resolved, ("ID",)).value == "en:strong"
        assert resolved.sort == "collocate"

    def test_resolution_replaces_literal_semantics(self, lexicon):
        sub = self.find_sub(lexicon, "en:criticism", "en:strong")
        resolved = resolve_collocate(lexicon, sub)
        rest = path_value(resolved, ("SEM_IND", "REST")).members
        assert [path_value(m, ("RELN",)).value for m in rest] == ["Magn"]

    def test_resolution_coindexes_base_variable(self, lexicon):
        sub = self.find_sub(lexicon, "en:criticism", "en:strong")
        resolved = resolve_collocate(lexicon, sub)
        base_var = lexicon.variable_node("en:criticism")
        assert path_value(resolved, ("SEM_IND", "VAR")) is base_var
        (member,) = path_value(resolved, ("SEM_IND", "REST")).members
        assert path_value(member, ("INST",)) is base_var

    def test_resolution_records_licensing_metadata(self, lexicon):
        sub = self.find_sub(lexicon, "en:lecture", "en:informative")
        resolved = resolve_collocate(lexicon, sub)
        assert path_value(resolved, ("LF",)).value == "Bon_Const"
        assert path_value(resolved, ("POS",)).value == "pre"
        assert path_value(resolved, ("BASE",)).value == "en:lecture"

    def test_entry_avm_is_cached_and_coindexed(self, lexicon):
        first = lexicon.entry_avm("en:smoker")
        again = lexicon.entry_avm("en:smoker")
        assert first is again
        var = path_value(first, ("SEM_IND", "VAR"))
        (member,) = path_value(first, ("SEM_IND", "REST")).members
        assert path_value(member, ("INST",)) is var
        (coll,) = path_value(first, ("COLLS",)).members
        assert path_value(coll, ("SEM_IND", "VAR")) is var


# ---------------------------------------------------------------------------
# apply_lf


class TestApplyLf:
    def test_nine_intensifiers_ordered_by_surface(self, lexicon):
        base = lexicon.by_id["en:oppose"]
        pairs = lexicon.apply_lf(LexicalFunction("Magn"), base)
        surfaces = [super_entry.phon for _, super_entry in pairs]
        assert surfaces == sorted(surfaces)
        assert len(surfaces) == 9

    def test_subscript_request_is_exact(self, lexicon):
        base = lexicon.by_id["en:lecture"]
        pairs = lexicon.apply_lf(LexicalFunction("Bon", "Const"), base)
        assert [s.id for _, s in pairs] == ["en:informative"]
        pairs = lexicon.apply_lf(LexicalFunction("Bon", "Agent"), base)
        assert [s.id for _, s in pairs] == ["en:clear"]

    def test_plain_request_ranks_roles_by_declaration(self, lexicon):
        base = lexicon.by_id["en:lecture"]
        pairs = lexicon.apply_lf(LexicalFunction("Bon"), base)
        assert [s.id for _, s in pairs] == ["en:informative", "en:clear"]

    def test_subscripted_results_are_subset_of_plain(self, lexicon):
        for entry in lexicon.entries:
            for name in lexicon.registry.names:
                plain = {
                    id(sub)
                    for sub, _ in lexicon.apply_lf(LexicalFunction(name), entry)
                }
                for role in ("Const", "Agent", "Form", "Telic"):
                    narrowed = lexicon.apply_lf(LexicalFunction(name, role), entry)
                    assert all(id(sub) in plain for sub, _ in narrowed)

    def test_no_candidates_for_unrelated_function(self, lexicon):
        base = lexicon.by_id["en:box"]
        assert lexicon.apply_lf(LexicalFunction("Magn"), base) == []


# ---------------------------------------------------------------------------
# Validation


class TestValidate:
    def test_fixtures_validate_clean(self, lexicon):
        assert validate(lexicon) == []

    def check(self, text, code, level="ERROR"):
        lex, diags = load_text(PREAMBLE + text)
        assert lex is not None, [d.format() for d in diags]
        found = validate(lex)
        assert any(
            d.code == code and d.level == level for d in found
        ), [d.format() for d in found]
        return found

    def test_category_mismatch(self):
        # a pre-position collocate must be adjectival or adverbial
        self.check(
            entry_text("xx:a", "a", "N", "a")
            + entry_text("xx:b", "b", "V", "b")
            + "(coll (base xx:a) (super xx:b) (lf Magn) (pos pre))\n",
            "CATEGORY_MISMATCH",
        )

    def test_merged_base_missing(self):
        self.check(
            '(entry (id xx:ab) (phon "ab") (cat N) (merged Magn missing))\n',
            "MERGED_BASE_MISSING",
        )

    def test_sign_unknown_pred(self):
        self.check(
            entry_text("xx:a", "a", "N", "a") + "(bi (src xx a) (tgt yy ghost))\n",
            "SIGN_UNKNOWN_PRED",
        )

    def test_lf_sign_not_identity(self):
        self.check("(bi-lf Magn Oper)\n", "LF_SIGN_NOT_IDENTITY")

    def test_insert_not_skippable(self):
        self.check(
            entry_text("xx:a", "a", "N", "a")
            + entry_text("xx:b", "b", "A", "b")
            + '(coll (base xx:a) (super xx:b) (lf Magn) (pos pre) (insert "zz"))\n',
            "INSERT_NOT_SKIPPABLE",
        )

    def test_nested_colls_warning(self):
        self.check(
            entry_text("xx:a", "a", "N", "a")
            + entry_text("xx:b", "b", "A", "b")
            + entry_text("xx:c", "c", "A", "c")
            + "(coll (base xx:a) (super xx:b) (lf Magn) (pos pre))\n"
            + "(coll (base xx:b) (super xx:c) (lf Magn) (pos pre))\n",
            "NESTED_COLLS",
            level="WARNING",
        )

    def test_qualia_role_undeclared_warning(self):
        self.check(
            entry_text("xx:a", "a", "N", "a")
            + entry_text("xx:b", "b", "A", "b")
            + "(coll (base xx:a) (super xx:b) (lf Bon_Telic) (pos pre))\n",
            "QUALIA_ROLE_UNDECLARED",
            level="WARNING",
        )

    def test_warnings_do_not_block_loading(self):
        lex, diags = load_text(
            PREAMBLE
            + entry_text("xx:a", "a", "N", "a")
            + entry_text("xx:b", "b", "A", "b")
            + "(coll (base xx:a) (super xx:b) (lf Bon_Telic) (pos pre))\n"
        )
        assert lex is not None
        assert not has_errors(validate(lex))

    def test_corrupted_fixture_dangling_ref(self):
        lex, diags = load_lexicon_files([data_path("bad_dangling_ref.lex")])
        assert lex is None
        assert any(d.code == "DANGLING_REF" for d in diags)

    def test_corrupted_fixture_unknown_lf(self):
        lex, diags = load_lexicon_files([data_path("bad_unknown_lf.lex")])
        assert lex is None
        assert any(d.code == "UNKNOWN_LF" for d in diags)

    def test_corrupted_fixture_merged_base(self):
        lex, diags = load_lexicon_files([data_path("bad_merged_base.lex")])
        assert lex is not None
        found = validate(lex)
        assert any(d.code == "MERGED_BASE_MISSING" for d in found)


# ---------------------------------------------------------------------------
# Serialization


class TestSerialize:
    def test_fixpoint(self, lexicon):
        text = serialize(lexicon)
        reloaded, diags = load_text(text, "canonical.lex")
        assert reloaded is not None and not diags
        assert serialize(reloaded) == text

    def test_canonical_form_validates_clean(self, lexicon):
        reloaded, _ = load_text(serialize(lexicon), "canonical.lex")
        assert validate(reloaded) == []

    def test_round_trip_preserves_semantics(self, lexicon):
        reloaded, _ = load_text(serialize(lexicon), "canonical.lex")
        assert {e.id for e in reloaded.entries} == {e.id for e in lexicon.entries}
        for entry in lexicon.entries:
            other = reloaded.by_id[entry.id]
            assert other.phon == entry.phon
            assert other.cat == entry.cat
            assert other.sem.preds == entry.sem.preds
            assert len(other.colls) == len(entry.colls)

    def test_round_trip_preserves_avms(self, lexicon):
        reloaded, _ = load_text(serialize(lexicon), "canonical.lex")
        for entry in lexicon.entries:
            assert struct_equal(
                lexicon.entry_avm(entry.id), reloaded.entry_avm(entry.id)
            ), entry.id

    def test_strings_are_quoted(self, lexicon):
        text = serialize(lexicon)
        assert '(phon "résistance")' in text
