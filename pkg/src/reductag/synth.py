"""Gold corpora sampled from a random trigram HMM.

Used as a desk-scale stand-in for licensed treebanks. Word forms carry
tag-specific endings so suffix models have something to learn, and the
share of once-only words is calibrated to a requested rate.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .corpus import Corpus, CorpusError, Sentence, Tagset, Token

TAG_NAMES = ("NN", "VB", "JJ", "DT", "PP", "AB", "PN", "KN", "RG", "IE", "HA", "MAD")
ONSETS = ("b", "d", "f", "g", "h", "j", "k", "l", "m", "n", "p", "r", "s", "t", "v", "sk", "st", "tr")
NUCLEI = ("a", "e", "i", "o", "u", "y", "å", "ä", "ö")
ENDING_LETTERS = "adeiklmnorstäöå"


@dataclass
class SynthParams:
    n_tags: int = 12
    vocab_size: int = 3000
    tokens: int = 50_000
    hapax_rate: float = 0.10
    ambiguity: float = 0.7
    max_extra_tags: int = 3
    mean_sentence_length: float = 15.0
    transition_concentration: float = 1.0
    zipf_exponent: float = 1.05
    seed: int = 0

    def validate(self) -> None:
        if self.n_tags < 2:
            raise CorpusError("synthetic tagset needs at least 2 tags")
        if self.vocab_size < self.n_tags:
            raise CorpusError("vocabulary must be at least as large as the tagset")
        if not 0.0 <= self.hapax_rate < 1.0:
            raise CorpusError("hapax_rate must lie in [0, 1)")
        if not 0.0 <= self.ambiguity <= 1.0:
            raise CorpusError("ambiguity must lie in [0, 1]")
        if self.tokens < 1 or self.mean_sentence_length < 1:
            raise CorpusError("tokens and mean_sentence_length must be positive")
        if self.transition_concentration <= 0:
            raise CorpusError("transition_concentration must be positive")


@dataclass
class SynthResult:
    corpus: Corpus
    hapax_rate: float
    transitions: np.ndarray
    endings: dict


class _Forms:
    def __init__(self, rng: np.random.Generator):
        self.rng = rng
        self.used: set[str] = set()

    def stem(self) -> str:
        rng = self.rng
        n = int(rng.integers(1, 4))
        return "".join(ONSETS[rng.integers(len(ONSETS))] + NUCLEI[rng.integers(len(NUCLEI))]
                       for _ in range(n))

    def fresh(self, ending: str) -> str:
        while True:
            form = self.stem() + ending
            if form not in self.used:
                self.used.add(form)
                return form


def generate(params: SynthParams) -> SynthResult:
    params.validate()
    rng = np.random.default_rng(params.seed)
    K = params.n_tags
    names = [TAG_NAMES[i] if i < len(TAG_NAMES) else f"T{i}" for i in range(K)]
    tagset = Tagset(names, name=f"synth{K}")
    S = K + 1
    B = K

    # transitions over the K tags for each (t1, t2) history; the end
    # boundary gets a fixed share so sentence length stays near the mean
    p_end = 1.0 / params.mean_sentence_length
    trans = np.zeros((S, S, S))
    for t1 in range(S):
        for t2 in range(S):
            p = rng.dirichlet(np.full(K, params.transition_concentration))
            if t2 == B:
                trans[t1, t2, :K] = p
            else:
                trans[t1, t2, :K] = (1 - p_end) * p
                trans[t1, t2, B] = p_end

    # two or three endings per tag; some reused by a second tag
    endings: dict[int, list[str]] = {}
    pool_endings: list[str] = []
    for t in range(K):
        own = []
        for _ in range(int(rng.integers(2, 4))):
            if pool_endings and rng.random() < 0.2:
                own.append(pool_endings[rng.integers(len(pool_endings))])
            else:
                length = int(rng.integers(1, 4))
                e = "".join(ENDING_LETTERS[rng.integers(len(ENDING_LETTERS))] for _ in range(length))
                own.append(e)
                pool_endings.append(e)
        endings[t] = own

    forms = _Forms(rng)
    word_tags: dict[str, list[int]] = {}
    tag_words: list[list[str]] = [[] for _ in range(K)]
    primary = rng.integers(K, size=params.vocab_size)
    for i in range(params.vocab_size):
        t = int(primary[i])
        form = forms.fresh(endings[t][rng.integers(len(endings[t]))])
        tags = [t]
        if rng.random() < params.ambiguity:
            extra = int(rng.integers(1, params.max_extra_tags + 1))
            others = [x for x in rng.permutation(K).tolist() if x != t][:extra]
            tags.extend(others)
        word_tags[form] = tags
        for x in tags:
            tag_words[x].append(form)
    for t in range(K):
        if not tag_words[t]:
            form = forms.fresh(endings[t][0])
            word_tags[form] = [t]
            tag_words[t].append(form)
    tag_weights = []
    for t in range(K):
        ranks = np.arange(1, len(tag_words[t]) + 1, dtype=np.float64)
        # primary readings dominate: secondary readings get a tenth of the weight
        w = ranks ** -params.zipf_exponent
        w *= np.array([1.0 if word_tags[f][0] == t else 0.1 for f in tag_words[t]])
        tag_weights.append(w / w.sum())

    tag_seqs: list[list[int]] = []
    n = 0
    while n < params.tokens:
        seq: list[int] = []
        h1, h2 = B, B
        while True:
            nxt = int(rng.choice(S, p=trans[h1, h2]))
            if nxt == B or len(seq) >= 4 * params.mean_sentence_length:
                break
            seq.append(nxt)
            h1, h2 = h2, nxt
            if n + len(seq) >= params.tokens:
                break
        if seq:
            tag_seqs.append(seq)
            n += len(seq)

    words: list[list[str]] = []
    for seq in tag_seqs:
        words.append([tag_words[t][rng.choice(len(tag_words[t]), p=tag_weights[t])] for t in seq])

    _calibrate_hapax(words, tag_seqs, params.hapax_rate, forms, endings, tag_words, tag_weights, rng)

    sentences = tuple(
        Sentence(tuple(Token(w, tagset[t]) for w, t in zip(ws, ts)))
        for ws, ts in zip(words, tag_seqs)
    )
    corpus = Corpus(sentences, tagset)
    counts = corpus.form_counts()
    realized = sum(1 for c in counts.values() if c == 1) / corpus.token_count
    return SynthResult(corpus, realized, trans, endings)


def _calibrate_hapax(words, tag_seqs, target_rate, forms, endings, tag_words, tag_weights, rng):
    """Swap tokens for fresh words (or back) until the hapax share hits the target."""
    counts = Counter(w for ws in words for w in ws)
    n_tokens = sum(counts.values())
    target = int(round(target_rate * n_tokens))
    hapax = sum(1 for c in counts.values() if c == 1)
    positions = [(i, j) for i, ws in enumerate(words) for j in range(len(ws))]
    order = rng.permutation(len(positions))
    if hapax < target:
        for k in order:
            if hapax >= target:
                break
            i, j = positions[k]
            w = words[i][j]
            if counts[w] < 3:
                continue
            t = tag_seqs[i][j]
            new = forms.fresh(endings[t][rng.integers(len(endings[t]))])
            counts[w] -= 1
            counts[new] = 1
            words[i][j] = new
            hapax += 1
    elif hapax > target:
        for k in order:
            if hapax <= target:
                break
            i, j = positions[k]
            w = words[i][j]
            if counts[w] != 1:
                continue
            t = tag_seqs[i][j]
            # replace with the tag's most frequent word, which is never a hapax here
            top = tag_words[t][int(np.argmax(tag_weights[t]))]
            if top == w or counts[top] < 2:
                continue
            del counts[w]
            counts[top] += 1
            words[i][j] = top
            hapax -= 1
    if abs(hapax - target) > max(1, 0.005 * n_tokens):
        raise CorpusError(f"could not reach hapax rate {target_rate}: got {hapax / n_tokens:.3f}")
