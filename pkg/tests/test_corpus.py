import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_corpus, recount_profile
from reductag.corpus import (
    Corpus,
    CorpusError,
    ParseError,
    Sentence,
    Tagset,
    Token,
    format_percent,
    parse_corpus,
    profile_corpus,
    serialize_corpus,
    split_corpus,
    unknown_rate,
)
from reductag.lexicon import build_lexicon


def corpus_of(*sents, tags=None):
    text = "\n\n".join("\n".join(f"{w}\t{t}" for w, t in (p.split("/") for p in s.split()))
                       for s in sents)
    return parse_corpus(text, Tagset(tags) if tags else None)


def test_parse_two_sentences():
    c = parse_corpus("och\tCONJ\n\nhund\tNOUN\n")
    assert len(c) == 2
    assert c.token_count == 2
    assert c.tagset.names() == ("CONJ", "NOUN")


def test_comments_and_repeated_blank_lines():
    c = parse_corpus("# header\na\tX\n\n\n\nb\tY\nc\tX\n")
    assert [s.forms for s in c] == [["a"], ["b", "c"]]


@pytest.mark.parametrize("text", ["", "\n\n", "# only a comment\n"])
def test_empty_corpus(text):
    with pytest.raises(CorpusError, match="empty corpus"):
        parse_corpus(text)


def test_bad_field_count_reports_line():
    with pytest.raises(ParseError) as e:
        parse_corpus("a\tX\nb X\n")
    assert e.value.line == 2


def test_tag_outside_tagset():
    with pytest.raises(ParseError, match="not in tagset"):
        parse_corpus("a\tZ\n", Tagset(["X"]))


def test_induced_tagset_follows_first_appearance():
    assert parse_corpus("a\tB\nb\tA\nc\tB\n").tagset.names() == ("B", "A")


def test_tagset_read_skips_comments():
    ts = Tagset.read(["# tags", "NN", "", "VB"])
    assert ts.names() == ("NN", "VB")
    assert ts.lookup("VB").id == 1
    with pytest.raises(CorpusError):
        Tagset(["A", "A"])


def test_round_trip_generated_corpus():
    c = random_corpus(random.Random(3), n_tags=7, n_words=300, n_sents=1000, max_len=20)
    text = serialize_corpus(c)
    again = parse_corpus(text, c.tagset)
    assert again == c
    assert serialize_corpus(again) == text


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.tuples(st.text("abcåäö-.", min_size=1, max_size=5),
                                   st.sampled_from(["X", "Y", "Z"])),
                         min_size=1, max_size=6), min_size=1, max_size=8))
def test_round_trip_property(sents):
    ts = Tagset(["X", "Y", "Z"])
    c = Corpus(tuple(Sentence(tuple(Token(w, ts.lookup(t)) for w, t in s)) for s in sents), ts)
    assert parse_corpus(serialize_corpus(c), ts) == c


class TestSplit:
    def corpus(self):
        return random_corpus(random.Random(0), n_sents=2000, max_len=15)

    def test_partition_and_order(self):
        c = self.corpus()
        parts = split_corpus(c, (0.8, 0.1, 0.1), seed=4)
        ids = {id(s): i for i, s in enumerate(c.sentences)}
        got = [ids[id(s)] for p in parts for s in p.sentences]
        assert sorted(got) == list(range(len(c)))
        for p in parts:
            idx = [ids[id(s)] for s in p.sentences]
            assert idx == sorted(idx)

    def test_fractions_within_two_percent(self):
        c = self.corpus()
        for fr in [(0.8, 0.1, 0.1), (0.79, 0.11, 0.10), (1 / 3, 1 / 3, 1 / 3)]:
            parts = split_corpus(c, fr, seed=9)
            for p, f in zip(parts, fr):
                assert abs(p.token_count / c.token_count - f) <= 0.02

    def test_deterministic(self):
        c = self.corpus()
        assert split_corpus(c, (0.6, 0.2, 0.2), 5) == split_corpus(c, (0.6, 0.2, 0.2), 5)
        assert split_corpus(c, (0.6, 0.2, 0.2), 5) != split_corpus(c, (0.6, 0.2, 0.2), 6)

    @pytest.mark.parametrize("fr", [(1, 0, 0), (0.5, 0.5), (0.5, 0.3, 0.3), (-0.1, 0.6, 0.5)])
    def test_bad_fractions(self, fr):
        with pytest.raises(CorpusError):
            split_corpus(self.corpus(), fr, 0)

    def test_too_few_sentences(self):
        with pytest.raises(CorpusError, match="empty part"):
            split_corpus(corpus_of("a/X b/X"), (0.4, 0.3, 0.3), 0)


class TestProfile:
    def test_hand_counts(self):
        p = profile_corpus(corpus_of("a/X b/X a/X"))
        assert (p.token_count, p.type_count, p.hapax_count) == (3, 2, 1)
        assert p.expected_unknown_rate == pytest.approx(1 / 3, abs=1e-15)
        assert p.most_frequent == ("a", 2)

    def test_ambiguity_histogram(self):
        p = profile_corpus(corpus_of("a/X a/Y b/X", "c/Z a/X"))
        assert p.ambiguity_histogram == {1: 2 / 5, 2: 3 / 5}
        assert p.mean_tags_per_token == pytest.approx(8 / 5, abs=1e-15)
        assert p.max_tags_per_word == (2, ("a",))
        assert p.ambiguous_fraction == pytest.approx(0.6)

    def test_external_lexicon(self):
        c = corpus_of("a/X b/X c/Y", tags=["X", "Y"])
        lex = build_lexicon(corpus_of("a/X a/Y", tags=["X", "Y"]))
        p = profile_corpus(c, lex)
        # b and c are not in the lexicon and count as unambiguous
        assert p.ambiguity_histogram == {1: 2 / 3, 2: 1 / 3}

    def test_recount_oracle(self, synth_corpus):
        p = profile_corpus(synth_corpus)
        n, types, hapax, hist = recount_profile(synth_corpus)
        assert (p.token_count, p.type_count, p.hapax_count) == (n, types, hapax)
        assert p.ambiguity_histogram == {k: float(Fraction(v, n)) for k, v in hist.items()}
        assert p.expected_unknown_rate == float(Fraction(hapax, n))

    def test_format_contains_rate(self):
        text = profile_corpus(corpus_of("a/X b/X a/X")).format()
        assert "unknown words       33% expected" in text
        assert "hapax_count: 1" in text

    def test_key_values_round_trip_floats(self, synth_corpus):
        p = profile_corpus(synth_corpus)
        kv = p.key_values()
        assert float(kv["expected_unknown_rate"]) == p.expected_unknown_rate


@pytest.mark.parametrize("x,expected", [(0.928849, "92.88"), (0.92885, "92.89"), (1.0, "100.00"),
                                        (0.000049, "0.00"), (0.12345, "12.35")])
def test_format_percent_half_up(x, expected):
    assert format_percent(x) == expected


class TestUnknownRate:
    def test_subset(self):
        assert unknown_rate(corpus_of("a/X b/Y"), corpus_of("b/Y a/X a/X", tags=["X", "Y"])) == 0.0

    def test_disjoint(self):
        assert unknown_rate(corpus_of("a/X b/Y"), corpus_of("c/X d/Y")) == 1.0

    def test_counts_tokens(self, synth_split):
        train, test = synth_split
        vocab = train.vocabulary()
        toks = [t.form for t in test.tokens()]
        assert unknown_rate(train, test) == sum(w not in vocab for w in toks) / len(toks)

    def test_tagset_mismatch(self):
        with pytest.raises(CorpusError):
            unknown_rate(corpus_of("a/X"), corpus_of("a/Y"))


def test_form_counts_matches_counter(synth_corpus):
    assert synth_corpus.form_counts() == Counter(t.form for s in synth_corpus for t in s)
