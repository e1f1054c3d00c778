import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hmmtagset.corpus import (
    CorpusError,
    TaggedCorpus,
    Token,
    build_lexicon,
    parse_corpus,
    parse_lexicon,
    serialize_corpus,
    serialize_lexicon,
    split_corpus,
)

from conftest import FIXTURES, corpus_of, random_corpus


def test_parse_simple():
    c = parse_corpus("the\tAT\ncat\tNN\n\n")
    assert len(c.sentences) == 1
    assert c.token_count == 2
    assert c.tags == {"AT", "NN"}
    assert c.sentences[0][1] == Token("cat", "NN")


def test_empty_input_is_error():
    with pytest.raises(CorpusError, match="empty input"):
        parse_corpus("")


def test_lenient_skips_and_counts_malformed_line():
    # 10 token lines, one with three fields
    c = parse_corpus((FIXTURES / "malformed10.txt").read_text())
    assert c.token_count == 9
    assert c.skipped == 1
    assert c.skipped_lines == (7,)
    assert [len(s) for s in c.sentences] == [3, 3, 3]


def test_strict_rejects_malformed_line():
    with pytest.raises(CorpusError, match="line 7"):
        parse_corpus((FIXTURES / "malformed10.txt").read_text(), strict=True)


def test_empty_tag_field_is_error_in_both_modes():
    for strict in (False, True):
        with pytest.raises(CorpusError, match="empty tag"):
            parse_corpus("a\tAT\nb\t\n", strict=strict)


def test_comments_and_crlf():
    c = parse_corpus("# header\r\na\tX\r\n\r\nb\tY\r\n")
    assert [len(s) for s in c.sentences] == [1, 1]
    assert serialize_corpus(c) == "a\tX\n\nb\tY\n\n"


def test_untagged_tokens():
    c = parse_corpus("hello\nworld\n")
    assert c.token_count == 2 and not c.is_tagged and c.tags == frozenset()


def test_token_rejects_whitespace():
    with pytest.raises(CorpusError):
        Token("a b", "X")


class TestSplit:
    def _sents(self, n):
        return TaggedCorpus.from_pairs([[(f"w{i}", "X")] for i in range(n)])

    def test_held_out_95(self):
        train, test = split_corpus(self._sents(100), 0.95, "held_out")
        assert (len(train), len(test)) == (95, 5)

    def test_held_out_ceiling(self):
        c = self._sents(20)
        train, test = split_corpus(c, 0.9, "held_out")
        assert train.sentences == c.sentences[:18]
        assert test.sentences == c.sentences[18:]

    def test_held_out_needs_test(self):
        with pytest.raises(CorpusError):
            split_corpus(self._sents(10), 1.0, "held_out")
        with pytest.raises(CorpusError):
            split_corpus(self._sents(10), 0.99, "held_out")

    def test_in_sample(self, rng):
        c = random_corpus(rng, n_sent=40)
        train, test = split_corpus(c, 1.0, "in_sample", sample_size=50)
        assert train.sentences == c.sentences
        assert set(test.sentences) <= set(c.sentences)
        assert test.token_count >= 50

    def test_in_sample_evenly_spaced(self):
        c = self._sents(10)
        _, test = split_corpus(c, 1.0, "in_sample", sample_size=5)
        assert [s[0].surface for s in test.sentences] == ["w0", "w2", "w4", "w6", "w8"]

    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 60), st.floats(0.05, 0.95), st.integers(0, 10_000))
    def test_held_out_partitions(self, n, frac, seed):
        c = random_corpus(random.Random(seed), n_sent=n)
        try:
            train, test = split_corpus(c, frac, "held_out")
        except CorpusError:
            return
        assert train.sentences + test.sentences == c.sentences
        assert len(test) > 0


class TestLexicon:
    def test_counts(self):
        lex = build_lexicon(corpus_of("a/AT a/AT a/NN"))
        assert lex.entries == {"a": {"AT": 2, "NN": 1}}
        assert lex.tags("a") == ("AT", "NN")
        assert lex.tags("zzz") == ()

    def test_empty_after_lenient_parse(self):
        c = parse_corpus("a\tb\tc\n")
        assert c.token_count == 0 and c.skipped == 1
        with pytest.raises(CorpusError):
            build_lexicon(c)

    def test_untagged_is_error(self):
        with pytest.raises(CorpusError):
            build_lexicon(parse_corpus("a\n"))

    def test_mass_1k(self, rng):
        sents, n = [], 0
        while n < 1000:
            k = min(rng.randint(1, 15), 1000 - n)
            sents.append([(f"w{rng.randrange(80)}", rng.choice("ABCDE")) for _ in range(k)])
            n += k
        c = TaggedCorpus.from_pairs(sents)
        assert build_lexicon(c).mass == 1000

    def test_file_format_sorted(self):
        lex = build_lexicon(corpus_of("b/Y a/Z a/X b/Y"))
        text = serialize_lexicon(lex)
        assert text == "a\tX\t1\na\tZ\t1\nb\tY\t2\n"
        assert parse_lexicon(text) == lex


_word = st.text(alphabet="abcxyzÅäé-.", min_size=1, max_size=6)
_tag = st.sampled_from(["NN", "VB", "AT", "JJ-SG", "X"])
_sentences = st.lists(st.lists(st.tuples(_word, _tag), min_size=1, max_size=6), min_size=1, max_size=8)


@settings(max_examples=100, deadline=None)
@given(_sentences)
def test_round_trip(sents):
    c = TaggedCorpus.from_pairs(sents)
    text = serialize_corpus(c)
    again = parse_corpus(text)
    assert again.sentences == c.sentences
    assert serialize_corpus(again) == text
    assert again.token_count == c.token_count


@settings(max_examples=100, deadline=None)
@given(_sentences)
def test_lexicon_mass_conservation(sents):
    c = TaggedCorpus.from_pairs(sents)
    assert build_lexicon(c).mass == c.token_count
