"""Statistical part-of-speech tagging: a trigram HMM tagger and a
reductionistic tagger that prunes candidate lattices with lexical and
symmetric-trigram evidence."""

from ._kernels import BACKEND
from .corpus import (
    Corpus,
    CorpusError,
    ParseError,
    Sentence,
    Tag,
    Tagset,
    Token,
    parse_corpus,
    profile_corpus,
    read_corpus,
    serialize_corpus,
    split_corpus,
)
from .evaluation import evaluate_lattices, evaluate_sequences, threshold_sweep
from .hmm import HmmModel, lexical_tag, train_hmm, viterbi_tag
from .lexicon import Lexicon, build_lexicon, build_suffix_model
from .reductionistic import DEFAULT_GRID, RedModel, red_tag, train_red

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Corpus", "CorpusError", "ParseError", "Sentence", "Tag", "Tagset", "Token",
    "parse_corpus", "profile_corpus", "read_corpus", "serialize_corpus", "split_corpus",
    "evaluate_lattices", "evaluate_sequences", "threshold_sweep",
    "HmmModel", "lexical_tag", "train_hmm", "viterbi_tag",
    "Lexicon", "build_lexicon", "build_suffix_model",
    "DEFAULT_GRID", "RedModel", "red_tag", "train_red",
]
