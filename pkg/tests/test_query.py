import pytest

from lectern.errors import QueryError
from lectern.query import Clause, Phrase, Query, Term, Truncation, parse_query


def clauses(text):
    return [(c.connective, c.atom) for c in parse_query(text).clauses]


class TestGrammar:
    def test_two_terms_default_and(self):
        assert clauses("fish belly") == [
            ("and", Term("fish")), ("and", Term("belly"))]

    def test_lowercase_and_is_connective(self):
        # the connectives are recognized case-insensitively standing alone
        assert clauses("fish and belly") == [
            ("and", Term("fish")), ("and", Term("belly"))]

    def test_uppercase_connectives(self):
        assert clauses("fish AND belly OR raft NOT fog") == [
            ("and", Term("fish")), ("and", Term("belly")),
            ("or", Term("raft")), ("not", Term("fog"))]

    def test_truncation(self):
        assert clauses("slav*") == [("and", Truncation("slav"))]

    def test_phrase(self):
        assert clauses('"my library"') == [("and", Phrase(("my", "library")))]

    def test_field_qualified_term(self):
        assert clauses("author:twain") == [("and", Term("twain", field="author"))]

    def test_field_qualified_phrase(self):
        assert clauses('title:"tom sawyer"') == [
            ("and", Phrase(("tom", "sawyer"), field="title"))]

    def test_field_qualified_truncation(self):
        assert clauses("author:tw*") == [("and", Truncation("tw", field="author"))]

    def test_and_not_collapses(self):
        assert clauses("fish AND NOT belly") == [
            ("and", Term("fish")), ("not", Term("belly"))]

    def test_leading_not(self):
        assert clauses("NOT fog") == [("not", Term("fog"))]

    def test_hyphenated_word_becomes_phrase(self):
        assert clauses("fish-belly") == [("and", Phrase(("fish", "belly")))]

    def test_single_token_quote_becomes_term(self):
        assert clauses('"library"') == [("and", Term("library"))]

    def test_case_preserved_for_flag_handling(self):
        assert clauses("Twain") == [("and", Term("Twain"))]

    def test_field_name_case_insensitive(self):
        assert clauses("AUTHOR:Twain") == [("and", Term("Twain", field="author"))]


class TestErrors:
    @pytest.mark.parametrize("bad,code", [
        ("", "empty-query"),
        ("   ", "empty-query"),
        ('"unbalanced', "unbalanced-quote"),
        ("(fish AND belly)", "unsupported-nesting"),
        ("a*", "short-truncation"),
        ("*", "short-truncation"),
        ("fish AND", "dangling-connective"),
        ("AND fish", "dangling-connective"),
        ("fish AND OR belly", "dangling-connective"),
        ("fish OR NOT belly", "dangling-connective"),
        ("url:thing", "unknown-field"),
        ("author:", "empty-atom"),
        ('""', "empty-atom"),
        ("...", "empty-atom"),
    ])
    def test_rejects(self, bad, code):
        with pytest.raises(QueryError) as err:
            parse_query(bad)
        assert err.value.code == code, f"{bad!r} -> {err.value.code}"

    def test_phrase_invariant_never_below_two_tokens(self):
        for text in ('"one"', '"one two"', '"one two three"'):
            for clause in parse_query(text).clauses:
                if isinstance(clause.atom, Phrase):
                    assert len(clause.atom.tokens) >= 2

    def test_truncation_minimum_prefix(self):
        assert parse_query("ab*").clauses[0].atom == Truncation("ab")


class TestFlags:
    def test_defaults(self):
        q = parse_query("fish")
        assert (q.case_sensitive, q.stemmed, q.sort) == (False, False, "relevance")

    def test_with_flags(self):
        q = parse_query("fish").with_flags(case_sensitive=True, stemmed=True,
                                           sort="position")
        assert (q.case_sensitive, q.stemmed, q.sort) == (True, True, "position")

    def test_bad_sort(self):
        with pytest.raises(QueryError):
            parse_query("fish").with_flags(sort="shuffled")
