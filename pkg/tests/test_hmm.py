import math
import random
from collections import Counter

import numpy as np
import pytest

from oracles import enumerate_best, random_corpus
from reductag.corpus import CorpusError, parse_corpus
from reductag.hmm import (
    HmmConfig,
    HmmModel,
    ModelFormatError,
    TransitionTable,
    lexical_tag,
    model_engine,
    sequence_score,
    train_hmm,
    trigram_counts,
    viterbi_tag,
)


def oracle_case(seed):
    rng = random.Random(seed)
    k = rng.randint(2, 6)
    corpus = random_corpus(rng, n_tags=k, n_words=rng.randint(3, 15),
                           n_sents=rng.randint(2, 30), max_len=6, max_tags=k)
    model = train_hmm(corpus, HmmConfig(suffix_len=rng.choice([1, 2, 4])))
    vocab = sorted(corpus.vocabulary())
    words = [rng.choice(vocab) if rng.random() < 0.85 else f"u{rng.randint(0, 9)}"
             for _ in range(rng.randint(1, 6))]
    return model, words


class TestViterbiOracle:
    def test_matches_enumeration(self, backend):
        for seed in range(500):
            model, words = oracle_case(seed)
            assert all(len(model.candidates(w)[0]) <= 6 for w in words)
            got = viterbi_tag(model, words, backend=backend)
            ids, score = enumerate_best(model, words)
            assert [t.id for t in got.tags] == ids, seed
            assert abs(got.log_score - score) <= 1e-9
            assert sequence_score(model, words, got.tags) == got.log_score

    def test_ties_go_to_lowest_id_at_latest_position(self, backend):
        # every word can be X or Y with equal counts, so all paths tie
        corpus = parse_corpus("a\tX\na\tY\n\na\tY\na\tX\n")
        model = train_hmm(corpus)
        for n in range(1, 6):
            seq = viterbi_tag(model, ["a"] * n, backend=backend)
            ids, _ = enumerate_best(model, ["a"] * n)
            assert [t.id for t in seq.tags] == ids

    def test_unambiguous_sentence_is_forced(self, backend):
        corpus = parse_corpus("a\tX\nb\tY\nc\tZ\n\nc\tX\n")
        model = train_hmm(corpus)
        seq = viterbi_tag(model, ["b", "a", "b", "b"], backend=backend)
        assert [t.name for t in seq.tags] == ["Y", "X", "Y", "Y"]

    def test_empty_sentence(self):
        model = train_hmm(parse_corpus("a\tX\n"))
        with pytest.raises(ValueError):
            viterbi_tag(model, [])


def test_ops_linear_in_length(backend):
    model = train_hmm(parse_corpus("a\tX\na\tY\na\tZ\nb\tX\n"))
    ops = [viterbi_tag(model, ["a"] * n, backend=backend).ops for n in range(3, 12)]
    steps = np.diff(ops)
    assert np.all(steps == steps[0]) and steps[0] == 27


def test_emissions_restricted_to_candidates():
    model = train_hmm(parse_corpus("a\tX\nb\tY\n\nb\tX\na\tX\n"))
    ids, logs, known = model.candidates("a")
    assert ids == [0] and known
    assert model.log_emission("a", 1) == -math.inf
    assert model.log_emission("a", 0) == math.log(2 / 3)


class TestTraining:
    def corpus(self):
        return parse_corpus("a\tX\nb\tY\n")

    def test_start_row_mode(self):
        model = train_hmm(self.corpus())
        B = model.transitions.boundary
        row = model.transitions.row(B, B)
        assert int(np.argmax(row)) == model.tagset.lookup("X").id
        # ELE over 3 outcomes (X, Y, end) from one observation
        assert row[0] == pytest.approx(1.5 / 2.5, abs=1e-15)

    def test_emission_single_observation(self):
        assert train_hmm(self.corpus()).log_emission("a", 0) == 0.0

    def test_rows_sum_to_one_and_counts_recount(self):
        corpus = random_corpus(random.Random(11), n_tags=6, n_words=200, n_sents=800, max_len=20)
        assert corpus.token_count > 8000
        model = train_hmm(corpus)
        S = model.transitions.n_states
        for t1 in range(S):
            for t2 in range(S):
                assert abs(model.transitions.row(t1, t2).sum() - 1) <= 1e-9
        ref = Counter()
        B = len(corpus.tagset)
        for s in corpus.sentences:
            seq = [B, B] + [t.gold.id for t in s.tokens] + [B]
            for i in range(2, len(seq)):
                ref[tuple(seq[i - 2:i + 1])] += 1
        assert trigram_counts(corpus) == ref

    def test_reserved_tag_name(self):
        with pytest.raises(CorpusError):
            train_hmm(parse_corpus("a\t<B>\n"))

    def test_no_hapax_falls_back_to_uniform(self):
        model = train_hmm(parse_corpus("a\tX\na\tX\nb\tY\nb\tY\n"))
        assert list(model.unknown.hapax.probs) == [0.5, 0.5]

    def test_unknown_emissions_at_most_one(self, synth_hmm):
        for w in ("zzzz", "qqqqa", "teo_x", "x", ""):
            ids, logs, known = synth_hmm.candidates(w + "unseen")
            assert not known and ids
            assert max(logs) <= 0.0

    def test_unknown_uses_suffix_then_hapax(self):
        model = train_hmm(parse_corpus("katt\tN\nhatt\tN\nlöper\tV\n"), HmmConfig(suffix_len=3))
        dist, source = model.unknown_distribution("matt")
        assert source == "suffix" and dist.mode().name == "N"
        dist, source = model.unknown_distribution("qqq")
        assert source == "hapax"


class TestLexicalBaseline:
    def test_cases(self):
        corpus = parse_corpus("a\tX\na\tX\na\tY\nb\tX\nb\tY\nc\tZ\n")
        model = train_hmm(corpus)
        assert [t.name for t in lexical_tag(model, ["a", "b", "c"]).tags] == ["X", "X", "Z"]

    def test_unknown_gets_hapax_mode(self):
        corpus = parse_corpus("a\tX\na\tX\nb\tY\nc\tY\n")
        model = train_hmm(corpus)
        assert lexical_tag(model, ["nope"]).tags[0].name == "Y"

    def test_hmm_beats_lexical_on_training_text(self, synth_split):
        train, _ = synth_split
        model = train_hmm(train)
        sents = train.sentences[:300]
        gold = [t.gold for s in sents for t in s]
        hmm = [t for s in sents for t in viterbi_tag(model, s.forms).tags]
        lex = [t for s in sents for t in lexical_tag(model, s.forms).tags]
        acc = lambda p: sum(a == b for a, b in zip(p, gold)) / len(gold)  # noqa: E731
        assert acc(hmm) > acc(lex)


class TestScore:
    def test_single_word_formula(self):
        model = train_hmm(parse_corpus("a\tX\nb\tY\n\nb\tX\n"))
        B = model.transitions.boundary
        t = model.tagset.lookup("X").id
        expected = (model.transitions.lookup(B, B, t) + model.log_emission("b", t)
                    + model.transitions.lookup(B, t, B))
        assert sequence_score(model, ["b"], ["X"]) == expected

    def test_appending_never_raises_score(self, synth_hmm, synth_split):
        tr = synth_hmm.transitions
        B = tr.boundary
        for s in synth_split[1].sentences[:50]:
            words = s.forms
            ids = [t.id for t in viterbi_tag(synth_hmm, words).tags]
            hist = [B, B] + ids
            open_scores = []
            for n in range(1, len(words) + 1):
                closed = sequence_score(synth_hmm, words[:n], ids[:n])
                open_scores.append(closed - tr.lookup(hist[n], hist[n + 1], B))
            assert all(b <= a for a, b in zip(open_scores, open_scores[1:]))


class TestSerialization:
    def test_round_trip_is_bit_faithful(self, synth_hmm, synth_split, tmp_path):
        path = tmp_path / "m.txt"
        synth_hmm.save(path)
        again = HmmModel.load(path)
        assert again.dumps() == synth_hmm.dumps()
        assert np.array_equal(again.transitions.vals, synth_hmm.transitions.vals)
        assert np.array_equal(again.transitions.ctx_default, synth_hmm.transitions.ctx_default)
        for s in synth_split[1].sentences[:100]:
            a, b = viterbi_tag(synth_hmm, s.forms), viterbi_tag(again, s.forms)
            assert a.tags == b.tags and a.log_score == b.log_score

    def test_engine_field(self, synth_hmm):
        assert model_engine(synth_hmm.dumps(engine="lexical")) == "lexical"

    def test_bad_version(self, synth_hmm):
        text = synth_hmm.dumps().replace("version\t1", "version\t9")
        with pytest.raises(ModelFormatError):
            HmmModel.loads(text)

    def test_missing_default(self):
        with pytest.raises(ModelFormatError):
            TransitionTable.read(["X\tX\tX\t-1.0"], ["X", "<B>"])
