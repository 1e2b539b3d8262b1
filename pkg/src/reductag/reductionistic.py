"""Reductionistic statistical tagger.

Every token starts with all its lexicon tags. Each pass rescores all
candidates at once from their lexical probability and the symmetric
trigram context given by the neighbours' remaining candidates, then
drops candidates below a threshold. Passes repeat until nothing is
removed.
"""

from __future__ import annotations

import io
import math
from collections import Counter
from dataclasses import dataclass, field, fields
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .corpus import Corpus, CorpusError, Sentence, Tag, Tagset
from .hmm import BOUNDARY_NAME, ModelFormatError, read_sections
from .lexicon import Lexicon, SuffixModel, build_lexicon, suffix_model_from_lexicon
from .smoothing import (
    TagDistribution,
    linear_successive_abstraction,
    partial_successive_abstraction,
)

DEFAULT_GRID = (0.0, 0.05, 0.075, 0.10, 0.15, 0.20, 0.30, 0.50)
FORMAT_VERSION = 1


class DegenerateLatticeError(ValueError):
    pass


class IterationLimitError(RuntimeError):
    def __init__(self, lattice: "Lattice", passes: int):
        super().__init__(f"no fixed point after {passes} passes")
        self.lattice = lattice
        self.passes = passes


@dataclass
class RedConfig:
    context_min_obs: int = 10
    context_divergence_min: float = 0.05
    suffix_max_len: int = 4
    suffix_source_max_freq: int = 3
    max_passes: int = 100
    thresholds: tuple = DEFAULT_GRID

    def items(self) -> list[tuple[str, str]]:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            out.append((f.name, ",".join(repr(x) for x in v) if f.name == "thresholds" else repr(v)))
        return out

    @classmethod
    def from_items(cls, items) -> "RedConfig":
        kw = {}
        types = {f.name: f.type for f in fields(cls)}
        for k, v in items:
            if k not in types:
                raise ModelFormatError(f"unknown config key {k!r}")
            if k == "thresholds":
                kw[k] = tuple(float(x) for x in v.split(","))
            elif k in ("context_divergence_min",):
                kw[k] = float(v)
            else:
                kw[k] = int(v)
        return cls(**kw)


class _KernelTables:
    """Dense arrays consumed by the combine kernels."""

    def __init__(self, model: "RedModel"):
        K = len(model.tagset)
        S = K + 1
        self.boundary = K
        self.n_states = S
        # the kernels divide by the prior only for candidate tags, which are
        # always observed in training; guard the rest against 0/0
        self.prior = np.where(model.prior.probs > 0, model.prior.probs, 1.0)
        self.ctx_index = np.full(S * S, -1, dtype=np.int64)
        rows = []
        for (l, r), dist in model.trigram.items():
            self.ctx_index[l * S + r] = len(rows)
            rows.append(dist.probs)
        self.tri_rows = np.ascontiguousarray(np.array(rows).reshape(len(rows), K))
        self.big_left = np.ascontiguousarray(model.bigram_left)
        self.big_right = np.ascontiguousarray(model.bigram_right)
        self._lists = None

    def _materialize(self):
        if self._lists is None:
            self._lists = (
                self.prior.tolist(),
                self.ctx_index.tolist(),
                self.tri_rows.tolist(),
                self.big_left.tolist(),
                self.big_right.tolist(),
            )
        return self._lists

    @property
    def prior_list(self):
        return self._materialize()[0]

    @property
    def ctx_index_list(self):
        return self._materialize()[1]

    @property
    def tri_rows_list(self):
        return self._materialize()[2]

    @property
    def big_left_list(self):
        return self._materialize()[3]

    @property
    def big_right_list(self):
        return self._materialize()[4]


class RedModel:
    """Lexical, symmetric-trigram and unknown-word statistics of one corpus."""

    def __init__(self, lexicon: Lexicon, sym_counts: Counter, config: RedConfig | None = None):
        self.config = config or RedConfig()
        self.lexicon = lexicon
        self.tagset = lexicon.tagset
        self.sym_counts = sym_counts
        K = len(self.tagset)
        S = K + 1
        self.boundary = K
        self.prior = lexicon.tag_prior()
        prior = self.prior.probs

        ctx_counts: dict[tuple[int, int], np.ndarray] = {}
        left = np.zeros((S, K))
        right = np.zeros((S, K))
        for (l, r, t), c in sym_counts.items():
            ctx_counts.setdefault((l, r), np.zeros(K))[t] += c
            left[l, t] += c
            right[r, t] += c
        self.bigram_left = self._smooth_bigram(left, prior)
        self.bigram_right = self._smooth_bigram(right, prior)
        self.context_obs = {ctx: int(v.sum()) for ctx, v in ctx_counts.items()}

        self.trigram: dict[tuple[int, int], TagDistribution] = {}
        cfg = self.config
        for (l, r), counts in sorted(ctx_counts.items()):
            n = counts.sum()
            if n < cfg.context_min_obs:
                continue
            raw = counts / n
            if 0.5 * np.abs(raw - prior).sum() < cfg.context_divergence_min:
                continue
            smoothed = partial_successive_abstraction(
                raw, n, [self.bigram_left[l], self.bigram_right[r]]
            )
            self.trigram[l, r] = TagDistribution(self.tagset, smoothed)

        try:
            self.suffix_model: SuffixModel = suffix_model_from_lexicon(
                lexicon, cfg.suffix_max_len, cfg.suffix_source_max_freq
            )
        except CorpusError:
            # no rare words to learn endings from: use every word instead
            top = max(sum(tc.values()) for tc in lexicon.entries.values())
            self.suffix_model = suffix_model_from_lexicon(lexicon, cfg.suffix_max_len, top)
        self.tables = _KernelTables(self)

    @staticmethod
    def _smooth_bigram(counts: np.ndarray, prior: np.ndarray) -> np.ndarray:
        n = counts.sum(axis=1, keepdims=True)
        raw = np.divide(counts, n, out=np.zeros_like(counts), where=n > 0)
        return linear_successive_abstraction(raw, n, prior[None, :])

    def trigram_row(self, left: int, right: int) -> np.ndarray:
        """P(. | left, right): stored if the context survived the cutoffs, else backed off."""
        stored = self.trigram.get((left, right))
        if stored is not None:
            return stored.probs
        return partial_successive_abstraction(
            0.0, 0, [self.bigram_left[left], self.bigram_right[right]]
        )

    def trigram_distribution(self, left, right) -> TagDistribution:
        return TagDistribution(self.tagset, self.trigram_row(_tid(left, self), _tid(right, self)))

    # -- serialization -------------------------------------------------

    def dumps(self) -> str:
        names = list(self.tagset.names()) + [BOUNDARY_NAME]
        out = io.StringIO()
        out.write("# reductag model\n[FORMAT]\n")
        out.write(f"version\t{FORMAT_VERSION}\nengine\tred\n[TAGSET]\n")
        for name in self.tagset.names():
            out.write(f"{name}\n")
        out.write("[CONFIG]\n")
        for k, v in self.config.items():
            out.write(f"{k}\t{v}\n")
        out.write("[LEXICON]\n")
        out.write(self.lexicon.dump())
        out.write("[SYMTRIGRAMS]\n")
        for (l, r, t), c in sorted(self.sym_counts.items()):
            out.write(f"{names[l]}\t{names[r]}\t{names[t]}\t{c}\n")
        return out.getvalue()

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(self.dumps())

    @classmethod
    def loads(cls, text: str) -> "RedModel":
        sections = read_sections(text)
        fmt = dict(line.split("\t", 1) for line in sections.get("FORMAT", []))
        if int(fmt.get("version", -1)) != FORMAT_VERSION or fmt.get("engine") != "red":
            raise ModelFormatError("not a version-1 reductionistic model")
        tagset = Tagset(sections["TAGSET"])
        idx = {n: i for i, n in enumerate(list(tagset.names()) + [BOUNDARY_NAME])}
        config = RedConfig.from_items(line.split("\t", 1) for line in sections.get("CONFIG", []))
        lexicon = Lexicon.load(sections["LEXICON"], tagset)
        sym: Counter = Counter()
        for line in sections.get("SYMTRIGRAMS", []):
            l, r, t, c = line.split("\t")
            sym[idx[l], idx[r], idx[t]] = int(c)
        return cls(lexicon, sym, config)

    @classmethod
    def load(cls, path) -> "RedModel":
        with open(path, encoding="utf-8") as f:
            return cls.loads(f.read())


def _tid(t, model) -> int:
    if isinstance(t, Tag):
        return t.id
    if isinstance(t, str):
        return model.boundary if t == BOUNDARY_NAME else model.tagset.lookup(t).id
    return int(t)


def symmetric_trigram_counts(corpus: Corpus) -> Counter:
    """(left, right, centre) gold-tag counts with one boundary on each side."""
    B = len(corpus.tagset)
    counts: Counter = Counter()
    for s in corpus:
        seq = [B] + [t.gold.id for t in s] + [B]
        for i in range(1, len(seq) - 1):
            counts[seq[i - 1], seq[i + 1], seq[i]] += 1
    return counts


def train_red(corpus: Corpus, config: RedConfig | None = None) -> RedModel:
    if not corpus.sentences:
        raise CorpusError("empty corpus")
    if BOUNDARY_NAME in corpus.tagset:
        raise CorpusError(f"tag name {BOUNDARY_NAME!r} is reserved")
    return RedModel(build_lexicon(corpus), symmetric_trigram_counts(corpus), config)


class Lattice:
    """Candidate tags with probabilities for every token of a sentence.

    Candidates are stored flat: position ``i`` owns ``tags[offsets[i]:offsets[i+1]]``
    in ascending tag id order. ``lexical`` keeps each candidate's initial
    lexical probability.
    """

    def __init__(self, tagset: Tagset, forms, known, offsets, tags, probs, lexical, gold=None):
        self.tagset = tagset
        self.forms = list(forms)
        self.known = list(known)
        self.offsets = np.asarray(offsets, dtype=np.int64)
        self.tags = np.asarray(tags, dtype=np.int64)
        self.probs = np.asarray(probs, dtype=np.float64)
        self.lexical = np.asarray(lexical, dtype=np.float64)
        self.gold = list(gold) if gold is not None else None

    def __len__(self) -> int:
        return len(self.forms)

    def sizes(self) -> np.ndarray:
        return np.diff(self.offsets)

    @property
    def total_candidates(self) -> int:
        return int(self.offsets[-1])

    def candidates(self, i: int) -> list[tuple[Tag, float]]:
        lo, hi = self.offsets[i], self.offsets[i + 1]
        return [(self.tagset[int(t)], float(p)) for t, p in zip(self.tags[lo:hi], self.probs[lo:hi])]

    def candidate_ids(self, i: int) -> np.ndarray:
        return self.tags[self.offsets[i]:self.offsets[i + 1]]

    def best(self) -> list[Tag]:
        """Most probable remaining tag per position (lowest id on ties)."""
        out = []
        for i in range(len(self)):
            lo, hi = self.offsets[i], self.offsets[i + 1]
            out.append(self.tagset[int(self.tags[lo + int(np.argmax(self.probs[lo:hi]))])])
        return out

    def with_gold(self, gold: Sequence[Tag]) -> "Lattice":
        return Lattice(self.tagset, self.forms, self.known, self.offsets, self.tags,
                       self.probs, self.lexical, gold)

    def format(self) -> str:
        lines = []
        for i, form in enumerate(self.forms):
            cands = sorted(self.candidates(i), key=lambda tp: (-tp[1], tp[0].id))
            lines.append(form + "\t" + ",".join(f"{t.name}:{p:.6g}" for t, p in cands))
        return "\n".join(lines) + "\n"


def init_lattice(model: RedModel, sentence) -> Lattice:
    """All lexicon tags with MLE probabilities; unknown words use the suffix tree."""
    if isinstance(sentence, Sentence):
        forms, gold = sentence.forms, sentence.tags
    else:
        forms, gold = list(sentence), None
    if not forms:
        raise ValueError("cannot tag an empty sentence")
    offsets = [0]
    tags: list[int] = []
    probs: list[float] = []
    known = []
    for w in forms:
        tc = model.lexicon.entries.get(w)
        if tc is not None:
            total = sum(tc.values())
            tags.extend(tc)
            probs.extend(c / total for c in tc.values())
            known.append(True)
        else:
            p = model.suffix_model.lookup(w).smoothed.probs
            ids = np.flatnonzero(p > 0)
            tags.extend(int(t) for t in ids)
            probs.extend(float(x) for x in p[ids])
            known.append(False)
        offsets.append(len(tags))
    return Lattice(model.tagset, forms, known, offsets, tags, probs, probs, gold)


def _neighbour(lattice: Lattice, j: int, boundary: int) -> list[tuple[int, float]]:
    if j < 0 or j >= len(lattice):
        return [(boundary, 1.0)]
    lo, hi = lattice.offsets[j], lattice.offsets[j + 1]
    return [(int(t), float(p)) for t, p in zip(lattice.tags[lo:hi], lattice.probs[lo:hi])]


def contextual_probability(model: RedModel, lattice: Lattice, i: int) -> TagDistribution:
    """Trigram estimate averaged over all (left, right) neighbour candidate pairs.

    Each pair is weighted by the product of the neighbours' current
    probabilities, renormalized over the pairs.
    """
    if not 0 <= i < len(lattice):
        raise IndexError(f"position {i} out of range")
    B = model.boundary
    acc = np.zeros(len(model.tagset))
    wsum = 0.0
    for lt, lp in _neighbour(lattice, i - 1, B):
        for rt, rp in _neighbour(lattice, i + 1, B):
            w = lp * rp
            wsum += w
            acc += w * model.trigram_row(lt, rt)
    return TagDistribution(model.tagset, acc / wsum)


def combine_sources(lexical: TagDistribution, contextual: TagDistribution,
                    prior: TagDistribution) -> TagDistribution:
    """lexical x contextual / prior over the lexical support, renormalized."""
    support = lexical.probs > 0
    if np.any(prior.probs[support] <= 0):
        raise ValueError("prior must be positive on every candidate")
    score = np.zeros(len(lexical))
    score[support] = lexical.probs[support] * contextual.probs[support] / prior.probs[support]
    total = score.sum()
    if not total > 0:
        raise DegenerateLatticeError("all candidate scores are zero")
    return TagDistribution(lexical.tagset, score / total)


def _prune(lattice: Lattice, combined: np.ndarray, threshold: float) -> tuple[Lattice, int]:
    offsets = [0]
    keep_idx: list[int] = []
    probs: list[float] = []
    for i in range(len(lattice)):
        lo, hi = int(lattice.offsets[i]), int(lattice.offsets[i + 1])
        seg = combined[lo:hi]
        kept = [lo + k for k in range(hi - lo) if not seg[k] < threshold]
        if not kept:
            kept = [lo + int(np.argmax(seg))]
        total = math.fsum(combined[k] for k in kept) if len(kept) < hi - lo else None
        for k in kept:
            keep_idx.append(k)
            probs.append(combined[k] / total if total is not None else combined[k])
        offsets.append(len(keep_idx))
    removed = lattice.total_candidates - len(keep_idx)
    idx = np.asarray(keep_idx, dtype=np.int64)
    out = Lattice(lattice.tagset, lattice.forms, lattice.known, offsets, lattice.tags[idx],
                  probs, lattice.lexical[idx], lattice.gold)
    return out, removed


def rescore(model: RedModel, lattice: Lattice, use_context: bool = True, backend=None) -> np.ndarray:
    """Combined and normalized probability of every candidate (one synchronous pass)."""
    kernels = backend or _kernels
    try:
        return np.asarray(kernels.combine_pass(
            lattice.offsets, lattice.tags, lattice.probs, lattice.lexical,
            model.tables, use_context,
        ))
    except ZeroDivisionError as e:
        raise DegenerateLatticeError(str(e)) from None


def prune_step(lattice: Lattice, model: RedModel, threshold: float, use_context: bool = True,
               backend=None) -> tuple[Lattice, int]:
    """One synchronous rescoring pass followed by threshold pruning.

    Candidates below ``threshold`` are removed except each position's best.
    """
    if not 0.0 <= threshold < 1.0:
        raise ValueError("threshold must lie in [0, 1)")
    combined = rescore(model, lattice, use_context, backend)
    return _prune(lattice, combined, threshold)


def red_tag(model: RedModel, sentence, threshold: float, use_context: bool = True,
            max_passes: int | None = None, on_pass: Callable[[int, Lattice, int], None] | None = None,
            backend=None) -> Lattice:
    """Prune until a pass removes nothing; the returned lattice keeps its final probabilities."""
    cap = model.config.max_passes if max_passes is None else max_passes
    lattice = init_lattice(model, sentence)
    for n in range(1, cap + 1):
        lattice, removed = prune_step(lattice, model, threshold, use_context, backend)
        if on_pass is not None:
            on_pass(n, lattice, removed)
        if removed == 0:
            return lattice
    raise IterationLimitError(lattice, cap)


def format_lattices(lattices: Sequence[Lattice]) -> str:
    return "\n".join(lat.format() for lat in lattices)
