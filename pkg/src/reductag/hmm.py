"""Trigram HMM tagger and the most-frequent-tag baseline."""

from __future__ import annotations

import io
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .corpus import Corpus, CorpusError, Tag, Tagset
from .lexicon import (
    Lexicon,
    LexiconSuffixIndex,
    NoHapaxError,
    TagDistribution,
    build_lexicon,
    hapax_distribution,
)
from .smoothing import ele_array

BOUNDARY_NAME = "<B>"
FORMAT_VERSION = 1


class ModelFormatError(CorpusError):
    pass


class TransitionTable:
    """log P(t3 | t1, t2) over tags plus a boundary state.

    Seen trigrams are stored in CSR rows keyed by context ``t1 * S + t2``;
    everything else takes the per-context default (ELE mass of a zero count).
    """

    def __init__(self, n_tags: int, ctx_default, row_ptr, cols, vals):
        self.n_tags = n_tags
        self.n_states = n_tags + 1
        self.boundary = n_tags
        self.ctx_default = np.ascontiguousarray(ctx_default, dtype=np.float64)
        self.row_ptr = np.ascontiguousarray(row_ptr, dtype=np.int64)
        self.cols = np.ascontiguousarray(cols, dtype=np.int64)
        self.vals = np.ascontiguousarray(vals, dtype=np.float64)
        S = self.n_states
        if self.ctx_default.shape != (S * S,) or self.row_ptr.shape != (S * S + 1,):
            raise ValueError("transition table arrays have inconsistent shapes")
        self._default_list = self.ctx_default.tolist()
        self._dict = {}
        cols_l, vals_l, ptr = self.cols.tolist(), self.vals.tolist(), self.row_ptr.tolist()
        for c in range(S * S):
            for j in range(ptr[c], ptr[c + 1]):
                self._dict[c * S + cols_l[j]] = vals_l[j]

    @classmethod
    def from_counts(cls, counts: Counter, n_tags: int) -> "TransitionTable":
        """ELE estimate from trigram counts keyed by ``(t1, t2, t3)`` ids."""
        S = n_tags + 1
        domain = S  # t3 ranges over the tags and the closing boundary
        ctx_total = np.zeros(S * S)
        rows: dict[int, list[tuple[int, int]]] = {}
        for (t1, t2, t3), c in counts.items():
            ctx = t1 * S + t2
            ctx_total[ctx] += c
            rows.setdefault(ctx, []).append((t3, c))
        ctx_default = np.empty(S * S)
        row_ptr = np.zeros(S * S + 1, dtype=np.int64)
        cols, vals = [], []
        for ctx in range(S * S):
            denom = ctx_total[ctx] + 0.5 * domain
            ctx_default[ctx] = math.log(0.5 / denom)
            for t3, c in sorted(rows.get(ctx, ())):
                cols.append(t3)
                vals.append(math.log((c + 0.5) / denom))
            row_ptr[ctx + 1] = len(cols)
        return cls(n_tags, ctx_default, row_ptr, cols, vals)

    def lookup(self, t1: int, t2: int, t3: int) -> float:
        c = t1 * self.n_states + t2
        return self._dict.get(c * self.n_states + t3, self._default_list[c])

    def row(self, t1: int, t2: int) -> np.ndarray:
        """P(. | t1, t2) as a dense probability vector over all states."""
        return np.exp([self.lookup(t1, t2, t3) for t3 in range(self.n_states)])

    def write(self, out: io.TextIOBase, names: Sequence[str]) -> None:
        S = self.n_states
        unseen_ctx = None
        for ctx in range(S * S):
            lo, hi = self.row_ptr[ctx], self.row_ptr[ctx + 1]
            if lo == hi:
                unseen_ctx = self._default_list[ctx]
                continue
            a, b = names[ctx // S], names[ctx % S]
            out.write(f"{a}\t{b}\t*\t{self._default_list[ctx]!r}\n")
            for j in range(lo, hi):
                out.write(f"{a}\t{b}\t{names[self.cols[j]]}\t{float(self.vals[j])!r}\n")
        if unseen_ctx is not None:
            out.write(f"*\t*\t*\t{unseen_ctx!r}\n")

    @classmethod
    def read(cls, lines: Iterable[str], names: Sequence[str]) -> "TransitionTable":
        idx = {n: i for i, n in enumerate(names)}
        S = len(names)
        default = None
        ctx_default = {}
        rows: dict[int, list[tuple[int, float]]] = {}
        for line in lines:
            a, b, c, v = line.split("\t")
            if a == "*":
                default = float(v)
                continue
            ctx = idx[a] * S + idx[b]
            if c == "*":
                ctx_default[ctx] = float(v)
            else:
                rows.setdefault(ctx, []).append((idx[c], float(v)))
        dflt = np.empty(S * S)
        row_ptr = np.zeros(S * S + 1, dtype=np.int64)
        cols, vals = [], []
        for ctx in range(S * S):
            if ctx in ctx_default:
                dflt[ctx] = ctx_default[ctx]
            elif default is not None:
                dflt[ctx] = default
            else:
                raise ModelFormatError("transition table lacks a default for unseen contexts")
            for t3, v in sorted(rows.get(ctx, ())):
                cols.append(t3)
                vals.append(v)
            row_ptr[ctx + 1] = len(cols)
        return cls(S - 1, dflt, row_ptr, cols, vals)


@dataclass
class UnknownPolicy:
    """How the HMM scores words missing from its lexicon.

    The tag distribution comes from lexicon words sharing the last
    ``suffix_len`` letters, else from ``hapax``. It is turned into an
    emission score by dividing by the tag prior and scaling with
    ``unseen_mass``.
    """

    suffix_len: int
    hapax: TagDistribution
    unseen_mass: float


@dataclass(frozen=True)
class TagSequence:
    tags: list[Tag]
    log_score: float
    ops: int = 0

    def __len__(self) -> int:
        return len(self.tags)


@dataclass
class HmmConfig:
    suffix_len: int = 4


class HmmModel:
    def __init__(self, tagset: Tagset, transitions: TransitionTable, lexicon: Lexicon,
                 unknown: UnknownPolicy):
        if transitions.n_tags != len(tagset):
            raise ValueError("transition table does not match tagset")
        self.tagset = tagset
        self.transitions = transitions
        self.lexicon = lexicon
        self.unknown = unknown
        self.tag_prior = ele_array(lexicon.tag_counts)
        self.suffix_index = LexiconSuffixIndex(lexicon, unknown.suffix_len)
        self._tag_totals = lexicon.tag_counts.astype(np.float64)
        self._cache: dict[str, tuple[list[int], list[float], bool]] = {}

    def unknown_distribution(self, word: str) -> tuple[TagDistribution, str]:
        dist = self.suffix_index.distribution(word)
        if dist is not None:
            return dist, "suffix"
        return self.unknown.hapax, "hapax"

    def candidates(self, word: str) -> tuple[list[int], list[float], bool]:
        """Candidate tag ids (ascending), their log emission scores, and known flag."""
        hit = self._cache.get(word)
        if hit is not None:
            return hit
        tc = self.lexicon.entries.get(word)
        if tc is not None:
            ids = list(tc)
            logs = [math.log(tc[t] / self._tag_totals[t]) for t in ids]
            result = (ids, logs, True)
        else:
            q = self.unknown_distribution(word)[0].probs
            ids = [int(t) for t in np.flatnonzero(q > 0)]
            prior = self.tag_prior
            # per-word constant: cancels in the argmax, keeps every emission <= 1
            scale = min([self.unknown.unseen_mass] + [prior[t] / q[t] for t in ids])
            logs = [math.log(q[t] * scale / prior[t]) for t in ids]
            result = (ids, logs, False)
        if len(self._cache) < 200_000:
            self._cache[word] = result
        return result

    def log_emission(self, word: str, tag_id: int) -> float:
        ids, logs, _ = self.candidates(word)
        try:
            return logs[ids.index(tag_id)]
        except ValueError:
            return -math.inf

    # -- serialization -------------------------------------------------

    def save(self, path, engine: str = "hmm") -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(self.dumps(engine))

    def dumps(self, engine: str = "hmm") -> str:
        out = io.StringIO()
        names = list(self.tagset.names()) + [BOUNDARY_NAME]
        out.write("# reductag model\n[FORMAT]\n")
        out.write(f"version\t{FORMAT_VERSION}\nengine\t{engine}\n")
        out.write(f"[TAGSET]\n")
        for name in self.tagset.names():
            out.write(f"{name}\n")
        out.write("[TRANSITIONS]\n")
        self.transitions.write(out, names)
        out.write("[LEXICON]\n")
        out.write(self.lexicon.dump())
        out.write("[UNKNOWN]\n")
        out.write(f"suffix_len\t{self.unknown.suffix_len}\n")
        out.write(f"unseen_mass\t{self.unknown.unseen_mass!r}\n")
        for t in self.tagset:
            out.write(f"hapax\t{t.name}\t{float(self.unknown.hapax.probs[t.id])!r}\n")
        return out.getvalue()

    @classmethod
    def load(cls, path) -> "HmmModel":
        with open(path, encoding="utf-8") as f:
            return cls.loads(f.read())

    @classmethod
    def loads(cls, text: str) -> "HmmModel":
        sections = read_sections(text)
        fmt = dict(line.split("\t", 1) for line in sections.get("FORMAT", []))
        if int(fmt.get("version", -1)) != FORMAT_VERSION:
            raise ModelFormatError(f"unsupported model version {fmt.get('version')!r}")
        tagset = Tagset(sections["TAGSET"])
        names = list(tagset.names()) + [BOUNDARY_NAME]
        transitions = TransitionTable.read(sections["TRANSITIONS"], names)
        lexicon = Lexicon.load(sections["LEXICON"], tagset)
        suffix_len, unseen_mass, hapax = 4, None, np.zeros(len(tagset))
        for line in sections["UNKNOWN"]:
            key, *rest = line.split("\t")
            if key == "suffix_len":
                suffix_len = int(rest[0])
            elif key == "unseen_mass":
                unseen_mass = float(rest[0])
            elif key == "hapax":
                hapax[tagset.lookup(rest[0]).id] = float(rest[1])
        if unseen_mass is None:
            raise ModelFormatError("missing unseen_mass in [UNKNOWN]")
        policy = UnknownPolicy(suffix_len, TagDistribution(tagset, hapax), unseen_mass)
        return cls(tagset, transitions, lexicon, policy)


SECTION_NAMES = ("FORMAT", "TAGSET", "TRANSITIONS", "LEXICON", "UNKNOWN", "CONFIG", "SYMTRIGRAMS")


def read_sections(text: str) -> dict[str, list[str]]:
    """Split a model file into ``[SECTION]`` blocks of non-empty lines."""
    sections: dict[str, list[str]] = {}
    current = None
    for line in text.split("\n"):
        if not line or (line.startswith("#") and current is None):
            continue
        if line.startswith("[") and line.endswith("]") and line[1:-1] in SECTION_NAMES:
            current = sections.setdefault(line[1:-1], [])
            continue
        if current is None:
            raise ModelFormatError(f"content before first section: {line!r}")
        current.append(line)
    return sections


def model_engine(text: str) -> str:
    fmt = dict(line.split("\t", 1) for line in read_sections(text).get("FORMAT", []))
    return fmt.get("engine", "hmm")


def trigram_counts(corpus: Corpus) -> Counter:
    """Tag trigram counts with two boundary states before and one after each sentence."""
    B = len(corpus.tagset)
    counts: Counter = Counter()
    for s in corpus:
        seq = [B, B] + [t.gold.id for t in s] + [B]
        for i in range(2, len(seq)):
            counts[seq[i - 2], seq[i - 1], seq[i]] += 1
    return counts


def train_hmm(corpus: Corpus, config: HmmConfig | None = None) -> HmmModel:
    config = config or HmmConfig()
    if not corpus.sentences:
        raise CorpusError("empty corpus")
    if BOUNDARY_NAME in corpus.tagset:
        raise CorpusError(f"tag name {BOUNDARY_NAME!r} is reserved")
    tagset = corpus.tagset
    transitions = TransitionTable.from_counts(trigram_counts(corpus), len(tagset))
    lexicon = build_lexicon(corpus)
    freq = corpus.form_counts()
    n_hapax = sum(1 for c in freq.values() if c == 1)
    try:
        hapax = hapax_distribution(corpus)
    except NoHapaxError:
        hapax = TagDistribution(tagset, np.full(len(tagset), 1.0 / len(tagset)))
    unseen_mass = (n_hapax or 1) / corpus.token_count
    return HmmModel(tagset, transitions, lexicon,
                    UnknownPolicy(config.suffix_len, hapax, unseen_mass))


def _lattice_arrays(model: HmmModel, words: Sequence[str]):
    offsets = [0]
    tags: list[int] = []
    emit: list[float] = []
    for w in words:
        ids, logs, _ = model.candidates(w)
        tags.extend(ids)
        emit.extend(logs)
        offsets.append(len(tags))
    return offsets, tags, emit


def viterbi_tag(model: HmmModel, sentence: Sequence[str], backend=None) -> TagSequence:
    """Most probable tag sequence under the trigram model.

    Ties go to the sequence with the lowest tag id at the latest position
    where the candidates differ.
    """
    words = list(sentence)
    if not words:
        raise ValueError("cannot tag an empty sentence")
    kernels = backend or _kernels
    offsets, tags, emit = _lattice_arrays(model, words)
    best, score, ops = kernels.viterbi(offsets, tags, emit, model.transitions)
    return TagSequence([model.tagset[tags[k]] for k in best], score, ops)


def lexical_tag(model: HmmModel, sentence: Sequence[str]) -> TagSequence:
    """Each word's most frequent training tag; unknown words get the hapax mode."""
    fallback = model.unknown.hapax.mode()
    out = []
    for w in sentence:
        t = model.lexicon.most_frequent_tag(w)
        out.append(t if t is not None else fallback)
    return TagSequence(out, sequence_score(model, list(sentence), out))


def sequence_score(model: HmmModel, words: Sequence[str], tags: Sequence) -> float:
    """Log of the product of transition and emission probabilities, boundaries included."""
    if len(words) != len(tags):
        raise ValueError("words and tags differ in length")
    ids = [_tag_id(model.tagset, t) for t in tags]
    B = model.transitions.boundary
    lookup = model.transitions.lookup
    prev2, prev1 = B, B
    score = None
    for w, t in zip(words, ids):
        a = lookup(prev2, prev1, t)
        score = a if score is None else score + a
        score = score + model.log_emission(w, t)
        prev2, prev1 = prev1, t
    return score + lookup(prev2, prev1, B)


def _tag_id(tagset: Tagset, t) -> int:
    if isinstance(t, Tag):
        return t.id
    if isinstance(t, str):
        return tagset.lookup(t).id
    return int(t)
