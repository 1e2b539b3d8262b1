import random
from fractions import Fraction

import pytest

from reductag.corpus import parse_corpus, profile_corpus
from reductag.evaluation import (
    DASH,
    AccuracyReport,
    EvaluationError,
    SweepReport,
    SweepRow,
    evaluate_lattices,
    evaluate_sequences,
    format_accuracy_table,
    format_sweep_table,
    full_sweep,
    threshold_sweep,
)
from reductag.hmm import TagSequence
from reductag.reductionistic import DEFAULT_GRID, init_lattice, red_tag


def gold():
    return parse_corpus("a\tX\nb\tY\n\nc\tX\n")


class TestSequences:
    def test_all_correct(self):
        g = gold()
        rep = evaluate_sequences(g, [s.tags for s in g], {"a", "b", "c"})
        assert (rep.total_correct, rep.known_correct, rep.unknown_correct) == (1.0, 1.0, None)
        assert rep.cells() == ["100.00%", "100.00%", DASH]

    def test_known_unknown_split(self):
        g = gold()
        X, Y = g.tagset
        preds = [TagSequence([X, X], 0.0), [X]]
        rep = evaluate_sequences(g, preds, {"a", "b"})
        assert (rep.n_known, rep.n_unknown, rep.correct_known, rep.correct_unknown) == (2, 1, 1, 1)
        assert rep.known_correct == 0.5 and rep.unknown_correct == 1.0

    def test_length_mismatch(self):
        g = gold()
        with pytest.raises(EvaluationError):
            evaluate_sequences(g, [g.sentences[0].tags], set())
        with pytest.raises(EvaluationError):
            evaluate_sequences(g, [g.sentences[0].tags, []], set())

    def test_random_predictions_recount(self, synth_split):
        train, test = synth_split
        rng = random.Random(0)
        tags = list(test.tagset)
        preds = [[rng.choice(tags) for _ in s] for s in test]
        vocab = train.vocabulary()
        rep = evaluate_sequences(test, preds, vocab)
        ok = {True: [0, 0], False: [0, 0]}
        for s, p in zip(test, preds):
            for tok, t in zip(s, p):
                k = tok.form in vocab
                ok[k][0] += 1
                ok[k][1] += tok.gold == t
        assert (rep.n_known, rep.correct_known) == tuple(ok[True])
        assert (rep.n_unknown, rep.correct_unknown) == tuple(ok[False])
        # total is the token-weighted mean of the parts, exactly
        weighted = (Fraction(rep.n_known) * Fraction(rep.correct_known, rep.n_known)
                    + Fraction(rep.n_unknown) * Fraction(rep.correct_unknown, rep.n_unknown))
        assert rep.exact_total() == weighted / rep.n_total
        assert abs(rep.total_correct - float(weighted / rep.n_total)) <= 1e-9


class TestLattices:
    def test_disambiguated_correct(self, synth_red, synth_split):
        sents = synth_split[0].sentences[:20]
        lats = []
        for s in sents:
            lat = init_lattice(synth_red, s)
            # keep only the gold tag
            lats.append(type(lat)(lat.tagset, lat.forms, lat.known, range(len(s) + 1),
                                  [t.id for t in s.tags], [1.0] * len(s), [1.0] * len(s)))
        corpus = type(synth_split[0])(tuple(sents), synth_split[0].tagset)
        assert tuple(evaluate_lattices(corpus, lats))[:2] == (1.0, 1.0)

    def test_threshold_zero_training_text(self, synth_red, synth_split):
        train = synth_split[0]
        sents = type(train)(train.sentences[:400], train.tagset)
        score = evaluate_lattices(sents, [red_tag(synth_red, s, 0.0) for s in sents])
        assert score.recall == 1.0
        # untouched lattices: tags/word is the mean ambiguity under the lexicon
        prof = profile_corpus(sents, synth_red.lexicon)
        assert score.tags_per_word == pytest.approx(prof.mean_tags_per_token, abs=1e-12)

    def test_random_prunings_recount(self, synth_red, synth_split):
        test = synth_split[1]
        rng = random.Random(2)
        lats = [red_tag(synth_red, s, rng.choice(DEFAULT_GRID)) for s in test]
        score = evaluate_lattices(test, lats)
        n = hit = c = 0
        for s, lat in zip(test, lats):
            for i, tok in enumerate(s):
                cands = [t for t, _ in lat.candidates(i)]
                n += 1
                hit += tok.gold in cands
                c += len(cands)
        assert (score.recall, score.tags_per_word, score.n_tokens) == (hit / n, c / n, n)

    def test_collapsed_lattices_match_sequence_accuracy(self, synth_red, synth_split):
        test = synth_split[1]
        lats = [red_tag(synth_red, s, 0.5) for s in test]
        score = evaluate_lattices(test, lats)
        assert score.tags_per_word == 1.0
        rep = evaluate_sequences(test, [lat.best() for lat in lats], synth_red.lexicon)
        assert score.recall == rep.total_correct

    def test_mismatch(self, synth_red, synth_split):
        test = synth_split[1]
        with pytest.raises(EvaluationError):
            evaluate_lattices(test, [])


class TestSweep:
    def test_default_grid(self):
        assert DEFAULT_GRID == (0.0, 0.05, 0.075, 0.10, 0.15, 0.20, 0.30, 0.50)

    def test_half_threshold_row(self, synth_red, synth_split):
        rep = threshold_sweep(synth_red, synth_split[1], [0.5])
        assert [r.tags_per_word for r in rep.runs["trigram+lexical"]] == [1.0]

    def test_tags_per_word_monotone(self, synth_red, synth_split):
        rep = full_sweep(synth_red, synth_split[1])
        for rows in rep.runs.values():
            tpw = [r.tags_per_word for r in rows]
            assert all(b <= a for a, b in zip(tpw, tpw[1:]))
            assert min(tpw) >= 1.0

    def test_recall_at_zero_is_highest_on_training_text(self, synth_red, synth_split):
        train = synth_split[0]
        sub = type(train)(train.sentences[:300], train.tagset)
        rep = full_sweep(synth_red, sub, (0.0, 0.1, 0.3))
        for rows in rep.runs.values():
            assert rows[0].recall == 1.0
            assert all(r.recall <= rows[0].recall for r in rows)

    @pytest.mark.parametrize("grid", [[0.2, 0.1], [0.0, 1.0], [-0.1]])
    def test_bad_grid(self, synth_red, synth_split, grid):
        with pytest.raises(EvaluationError):
            threshold_sweep(synth_red, synth_split[1], grid)


class TestTables:
    def test_accuracy_table(self):
        rows = [("Lexical Tagging", "A, B, C", "A, B, C", AccuracyReport(100, 0, 95, 0)),
                ("Lexical Tagging", "A, B", "C", AccuracyReport(80, 20, 75, 11))]
        text = format_accuracy_table(rows)
        lines = text.splitlines()
        assert lines[2] == "Lexical Tagging"
        assert lines[3].split() == ["A,", "B,", "C", "A,", "B,", "C", "95.00%", "95.00%", DASH]
        assert lines[4].split()[-3:] == ["86.00%", "93.75%", "55.00%"]

    def test_sweep_table_and_machine_rows(self):
        rep = SweepReport({"trigram+lexical": [SweepRow(0.0, 1.0, 2.38), SweepRow(0.075, 0.98655, 1.115)],
                           "lexical": [SweepRow(0.0, 1.0, 2.38), SweepRow(0.075, 0.9853, 1.17)]})
        text = format_sweep_table(rep, "A,B,C", "A,B,C")
        assert "0.00   0.075" in text
        assert "Recall (%)      100.00   98.66" in text
        assert "Tags/word         2.38    1.12" in text
        assert "Lexical statistics only" in text
        rows = rep.machine_rows().splitlines()
        assert rows[1] == "trigram+lexical\t0.075\t0.98655\t1.115"
        assert len(rows) == 4
