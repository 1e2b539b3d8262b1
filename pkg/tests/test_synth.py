import numpy as np
import pytest

from reductag.corpus import CorpusError, profile_corpus, serialize_corpus
from reductag.synth import SynthParams, generate


def small(**kw):
    return SynthParams(**({"tokens": 8000, "vocab_size": 800} | kw))


def test_same_seed_same_corpus():
    a, b = generate(small(seed=3)), generate(small(seed=3))
    assert serialize_corpus(a.corpus) == serialize_corpus(b.corpus)
    assert serialize_corpus(generate(small(seed=4)).corpus) != serialize_corpus(a.corpus)


def test_default_corpus_matches_bundled_file(synth_corpus):
    assert serialize_corpus(generate(SynthParams()).corpus) == serialize_corpus(synth_corpus)


@pytest.mark.parametrize("rate", [0.05, 0.10, 0.2])
def test_hapax_rate_calibrated(rate):
    res = generate(small(hapax_rate=rate, seed=1))
    prof = profile_corpus(res.corpus)
    realized = prof.hapax_count / prof.token_count
    assert abs(realized - rate) <= 0.02
    assert res.hapax_rate == realized


def test_size_and_tagset():
    res = generate(small(n_tags=5))
    assert res.corpus.token_count == 8000
    assert len(res.corpus.tagset) == 5
    assert res.transitions.shape[-1] >= 5
    assert np.all(res.transitions >= 0)


def test_ambiguity_increases_tags_per_token():
    lo = profile_corpus(generate(small(ambiguity=0.0)).corpus).mean_tags_per_token
    hi = profile_corpus(generate(small(ambiguity=1.0)).corpus).mean_tags_per_token
    assert lo < hi


@pytest.mark.parametrize("kw", [{"n_tags": 1}, {"hapax_rate": 1.0}, {"ambiguity": 1.5},
                                {"vocab_size": 3}, {"tokens": 0},
                                {"transition_concentration": 0.0}])
def test_invalid_parameters(kw):
    with pytest.raises(CorpusError):
        generate(small(**kw))
