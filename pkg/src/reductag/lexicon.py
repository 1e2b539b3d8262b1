"""Word/tag statistics and unknown-word models."""

from __future__ import annotations

from collections import Counter, defaultdict
from typing import Iterable, Iterator

import numpy as np

from .corpus import Corpus, CorpusError, Tag, Tagset
from .smoothing import TagDistribution, ele_array, linear_successive_abstraction

__all__ = [
    "UNKNOWN",
    "Lexicon",
    "TagDistribution",
    "SuffixNode",
    "SuffixModel",
    "LexiconSuffixIndex",
    "NoHapaxError",
    "build_lexicon",
    "candidate_tags",
    "hapax_distribution",
    "build_suffix_model",
    "suffix_model_from_lexicon",
    "suffix_distribution",
]


class _Unknown:
    """Marker returned by :func:`candidate_tags` for out-of-lexicon words."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNKNOWN"

    def __bool__(self) -> bool:
        return False


UNKNOWN = _Unknown()


class NoHapaxError(CorpusError):
    pass


class Lexicon:
    """Word form -> tag id -> count, as observed in a training corpus."""

    def __init__(self, tagset: Tagset, entries: dict[str, dict[int, int]]):
        self.tagset = tagset
        self.entries = {w: dict(sorted(tc.items())) for w, tc in entries.items()}
        self.tag_counts = np.zeros(len(tagset), dtype=np.int64)
        total = 0
        for w, tc in self.entries.items():
            for t, c in tc.items():
                if c < 1:
                    raise CorpusError(f"non-positive count for {w!r}/{tagset[t].name}")
                self.tag_counts[t] += c
                total += c
        self.total_tokens = total

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[str]:
        return iter(self.entries)

    def counts(self, word: str) -> dict[int, int]:
        return self.entries.get(word, {})

    def frequency(self, word: str) -> int:
        return sum(self.entries.get(word, {}).values())

    def ambiguity(self, word: str) -> int:
        """Number of candidate tags; out-of-lexicon words count as 1."""
        return len(self.entries.get(word, ())) or 1

    def most_frequent_tag(self, word: str) -> Tag | None:
        tc = self.entries.get(word)
        if not tc:
            return None
        # entries are sorted by tag id, so max() keeps the lowest id on ties
        return self.tagset[max(tc, key=lambda t: (tc[t], -t))]

    def lexical_distribution(self, word: str) -> TagDistribution | None:
        """MLE P(tag | word), or None for unknown words."""
        tc = self.entries.get(word)
        if tc is None:
            return None
        return TagDistribution.from_counts(self.tagset, tc)

    def tag_prior(self) -> TagDistribution:
        return TagDistribution(self.tagset, self.tag_counts, normalize=True)

    def dump(self) -> str:
        lines = []
        for w, tc in self.entries.items():
            for t, c in tc.items():
                lines.append(f"{w}\t{self.tagset[t].name}\t{c}\n")
        return "".join(lines)

    @classmethod
    def load(cls, lines: Iterable[str], tagset: Tagset) -> "Lexicon":
        entries: dict[str, dict[int, int]] = defaultdict(dict)
        for n, line in enumerate(lines, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                w, tag, c = line.split("\t")
                entries[w][tagset.lookup(tag).id] = int(c)
            except ValueError as e:
                raise CorpusError(f"bad lexicon line {n}: {line!r} ({e})") from None
        return cls(tagset, dict(entries))


def build_lexicon(corpus: Corpus) -> Lexicon:
    if not corpus.sentences:
        raise CorpusError("empty corpus")
    entries: dict[str, dict[int, int]] = {}
    for tok in corpus.tokens():
        tc = entries.setdefault(tok.form, {})
        tc[tok.gold.id] = tc.get(tok.gold.id, 0) + 1
    return Lexicon(corpus.tagset, entries)


def candidate_tags(lexicon: Lexicon, word: str):
    """The set of tags seen with ``word``, or :data:`UNKNOWN`."""
    tc = lexicon.entries.get(word)
    if tc is None:
        return UNKNOWN
    return frozenset(lexicon.tagset[t] for t in tc)


def hapax_distribution(corpus: Corpus) -> TagDistribution:
    """ELE-smoothed tag distribution of words occurring exactly once."""
    freq = corpus.form_counts()
    counts = np.zeros(len(corpus.tagset))
    n = 0
    for tok in corpus.tokens():
        if freq[tok.form] == 1:
            counts[tok.gold.id] += 1
            n += 1
    if n == 0:
        raise NoHapaxError("corpus has no hapax legomena; fall back to a uniform distribution")
    return TagDistribution(corpus.tagset, ele_array(counts))


class SuffixNode:
    """One node of the suffix tree.

    ``raw`` and ``smoothed_compact`` are indexed by the model's root support,
    not the full tagset; use :attr:`smoothed` for a full distribution.
    """

    __slots__ = ("suffix", "count", "tag_counts", "raw", "smoothed_compact", "children", "_model")

    def __init__(self, suffix: str, model: "SuffixModel"):
        self.suffix = suffix
        self.count = 0
        self.tag_counts: Counter = Counter()
        self.raw: np.ndarray | None = None
        self.smoothed_compact: np.ndarray | None = None
        self.children: dict[str, SuffixNode] = {}
        self._model = model

    def __repr__(self) -> str:
        return f"SuffixNode({self.suffix!r}, count={self.count})"

    @property
    def depth(self) -> int:
        return len(self.suffix)

    @property
    def smoothed(self) -> TagDistribution:
        return self._model._expand(self.smoothed_compact)

    @property
    def raw_distribution(self) -> TagDistribution:
        return self._model._expand(self.raw)


class SuffixModel:
    """Decision tree over trailing letters with successively smoothed leaves."""

    def __init__(self, tagset: Tagset, max_len: int, source_max_freq: int):
        self.tagset = tagset
        self.max_len = max_len
        self.source_max_freq = source_max_freq
        self.root = SuffixNode("", self)
        self.support_ids = np.zeros(0, dtype=np.int64)

    def _expand(self, compact: np.ndarray) -> TagDistribution:
        p = np.zeros(len(self.tagset))
        p[self.support_ids] = compact
        return TagDistribution(self.tagset, p)

    def nodes(self) -> Iterator[SuffixNode]:
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(node.children[c] for c in sorted(node.children, reverse=True))

    def __len__(self) -> int:
        return sum(1 for _ in self.nodes())

    def lookup(self, word: str) -> SuffixNode:
        """Deepest node whose suffix ends ``word``."""
        node = self.root
        for ch in reversed(word[-self.max_len:]):
            child = node.children.get(ch)
            if child is None:
                break
            node = child
        return node

    def dump(self, top: int = 5) -> str:
        out = []
        for node in self.nodes():
            dist = node.smoothed.top(top)
            tags = " ".join(f"{t.name}:{p:.3f}" for t, p in dist)
            label = f"-{node.suffix}" if node.suffix else "<root>"
            out.append(f"{'  ' * node.depth}{label}\t{node.count}\t{tags}\n")
        return "".join(out)


def build_suffix_model(corpus: Corpus, max_len: int = 4, source_max_freq: int = 3) -> SuffixModel:
    """Build the suffix tree from tokens of words with frequency <= ``source_max_freq``.

    Every node's distribution is its relative frequency smoothed against its
    parent's smoothed distribution; the root keeps the plain relative
    frequency of all source tokens.
    """
    return suffix_model_from_lexicon(build_lexicon(corpus), max_len, source_max_freq)


def suffix_model_from_lexicon(lexicon: Lexicon, max_len: int = 4,
                              source_max_freq: int = 3) -> SuffixModel:
    if max_len < 1 or source_max_freq < 1:
        raise ValueError("max_len and source_max_freq must be >= 1")
    model = SuffixModel(lexicon.tagset, max_len, source_max_freq)
    root = model.root
    for form, tc in lexicon.entries.items():
        if sum(tc.values()) > source_max_freq:
            continue
        for tag, c in tc.items():
            node = root
            node.count += c
            node.tag_counts[tag] += c
            for k in range(1, min(max_len, len(form)) + 1):
                ch = form[-k]
                child = node.children.get(ch)
                if child is None:
                    child = node.children[ch] = SuffixNode(form[-k:], model)
                child.count += c
                child.tag_counts[tag] += c
                node = child
    if root.count == 0:
        raise CorpusError(f"no words with frequency <= {source_max_freq} to build a suffix model")
    model.support_ids = np.array(sorted(root.tag_counts), dtype=np.int64)
    col = {t: i for i, t in enumerate(model.support_ids)}

    def raw_of(node: SuffixNode) -> np.ndarray:
        r = np.zeros(len(col))
        for t, c in node.tag_counts.items():
            r[col[t]] = c
        return r / node.count

    root.raw = raw_of(root)
    root.smoothed_compact = root.raw
    stack = [root]
    while stack:
        parent = stack.pop()
        for child in parent.children.values():
            child.raw = raw_of(child)
            child.smoothed_compact = linear_successive_abstraction(
                child.raw, child.count, parent.smoothed_compact
            )
            stack.append(child)
    return model


def suffix_distribution(model: SuffixModel, word: str) -> TagDistribution:
    return model.lookup(word).smoothed


class LexiconSuffixIndex:
    """Tag counts of lexicon words grouped by their last 1..``suffix_len`` letters.

    Used for the HMM's unknown words: the distribution for a suffix is the
    plain relative frequency over all lexicon tokens ending with it.
    """

    def __init__(self, lexicon: Lexicon, suffix_len: int):
        if suffix_len < 1:
            raise ValueError("suffix_len must be >= 1")
        self.lexicon = lexicon
        self.suffix_len = suffix_len
        index: dict[str, Counter] = defaultdict(Counter)
        for w, tc in lexicon.entries.items():
            for k in range(1, min(suffix_len, len(w)) + 1):
                index[w[-k:]].update(tc)
        self.index = dict(index)

    def distribution(self, word: str) -> TagDistribution | None:
        counts = self.index.get(word[-self.suffix_len:])
        if not counts:
            return None
        return TagDistribution.from_counts(self.lexicon.tagset, counts)
