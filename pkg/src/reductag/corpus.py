"""Annotated corpora: tagsets, vertical-format I/O, splitting and profiling."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence


class CorpusError(ValueError):
    """Raised for malformed or degenerate corpus data."""


class ParseError(CorpusError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True, order=True)
class Tag:
    id: int
    name: str

    def __str__(self) -> str:
        return self.name


class Tagset:
    """An ordered inventory of tags with dense ids 0..n-1."""

    def __init__(self, names: Iterable[str], name: str = ""):
        self.name = name
        self.tags: tuple[Tag, ...] = tuple(Tag(i, n) for i, n in enumerate(names))
        if not self.tags:
            raise CorpusError("empty tagset")
        self._index = {t.name: t for t in self.tags}
        if len(self._index) != len(self.tags):
            raise CorpusError("duplicate tag names in tagset")

    def __len__(self) -> int:
        return len(self.tags)

    def __iter__(self) -> Iterator[Tag]:
        return iter(self.tags)

    def __getitem__(self, tag_id: int) -> Tag:
        return self.tags[tag_id]

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tagset):
            return NotImplemented
        return self.names() == other.names()

    def __hash__(self) -> int:
        return hash(self.names())

    def __repr__(self) -> str:
        return f"Tagset({self.name!r}, {len(self)} tags)"

    def lookup(self, name: str) -> Tag:
        try:
            return self._index[name]
        except KeyError:
            raise CorpusError(f"tag {name!r} not in tagset") from None

    def names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.tags)

    @classmethod
    def read(cls, stream: Iterable[str], name: str = "") -> "Tagset":
        """Read one tag name per line; blank lines and ``#`` comments are skipped."""
        names = []
        for line in stream:
            line = line.strip()
            if line and not line.startswith("#"):
                names.append(line)
        return cls(names, name)


@dataclass(frozen=True)
class Token:
    form: str
    gold: Tag


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]

    def __post_init__(self):
        if not self.tokens:
            raise CorpusError("empty sentence")

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    @property
    def forms(self) -> list[str]:
        return [t.form for t in self.tokens]

    @property
    def tags(self) -> list[Tag]:
        return [t.gold for t in self.tokens]


@dataclass(frozen=True)
class Corpus:
    sentences: tuple[Sentence, ...]
    tagset: Tagset

    def __post_init__(self):
        for s in self.sentences:
            for tok in s:
                if tok.gold.id >= len(self.tagset) or self.tagset[tok.gold.id] != tok.gold:
                    raise CorpusError(f"tag {tok.gold.name!r} not in tagset")

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self) -> Iterator[Sentence]:
        return iter(self.sentences)

    def tokens(self) -> Iterator[Token]:
        for s in self.sentences:
            yield from s.tokens

    @property
    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)

    def form_counts(self) -> Counter:
        return Counter(tok.form for tok in self.tokens())

    def vocabulary(self) -> set[str]:
        return {tok.form for tok in self.tokens()}

    def concat(self, *others: "Corpus") -> "Corpus":
        sentences = list(self.sentences)
        for other in others:
            if other.tagset != self.tagset:
                raise CorpusError("cannot join corpora with different tagsets")
            sentences.extend(other.sentences)
        return Corpus(tuple(sentences), self.tagset)


def parse_corpus(stream: str | Iterable[str], tagset: Tagset | None = None) -> Corpus:
    """Parse the vertical ``form<TAB>tag`` format.

    Blank lines end sentences and ``#`` lines are comments. Without a
    tagset one is induced in order of first appearance.
    """
    lines = stream.splitlines() if isinstance(stream, str) else stream
    induced: dict[str, int] | None = None if tagset is not None else {}
    raw: list[list[tuple[str, str]]] = []
    current: list[tuple[str, str]] = []
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\r\n")
        if not line.strip():
            if current:
                raw.append(current)
                current = []
            continue
        if line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise ParseError(f"expected 2 tab-separated fields, got {len(fields)}", lineno)
        form, tag = fields
        if not form:
            raise ParseError("empty word form", lineno)
        if tagset is not None:
            if tag not in tagset:
                raise ParseError(f"tag {tag!r} not in tagset", lineno)
        else:
            induced.setdefault(tag, len(induced))
        current.append((form, tag))
    if current:
        raw.append(current)
    if not raw:
        raise CorpusError("empty corpus")
    if tagset is None:
        tagset = Tagset(induced)
    lookup = tagset.lookup
    sentences = tuple(
        Sentence(tuple(Token(form, lookup(tag)) for form, tag in sent)) for sent in raw
    )
    return Corpus(sentences, tagset)


def read_corpus(path, tagset: Tagset | None = None) -> Corpus:
    with open(path, encoding="utf-8") as f:
        return parse_corpus(f, tagset)


def serialize_corpus(corpus: Corpus) -> str:
    """Canonical vertical form: every sentence followed by one blank line."""
    out = []
    for s in corpus:
        for tok in s:
            out.append(f"{tok.form}\t{tok.gold.name}\n")
        out.append("\n")
    return "".join(out)


def split_corpus(
    corpus: Corpus, fractions: Sequence[float], seed: int
) -> tuple[Corpus, Corpus, Corpus]:
    """Partition sentences into three parts with the given token fractions.

    Sentences are shuffled with ``seed`` and dealt out by cumulative token
    count; each part keeps the original sentence order.
    """
    if len(fractions) != 3:
        raise CorpusError("need exactly three fractions")
    if any(f <= 0 for f in fractions):
        raise CorpusError("split fractions must be positive (empty part)")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise CorpusError("split fractions must sum to 1")
    order = list(range(len(corpus)))
    random.Random(seed).shuffle(order)
    total = corpus.token_count
    bounds = [fractions[0] * total, (fractions[0] + fractions[1]) * total]
    parts: list[list[int]] = [[], [], []]
    seen = 0
    for idx in order:
        n = len(corpus.sentences[idx])
        # assign by the sentence midpoint so each part lands near its share
        mid = seen + n / 2
        k = 0 if mid < bounds[0] else 1 if mid < bounds[1] else 2
        parts[k].append(idx)
        seen += n
    if any(not p for p in parts):
        raise CorpusError("split produced an empty part")
    return tuple(
        Corpus(tuple(corpus.sentences[i] for i in sorted(p)), corpus.tagset) for p in parts
    )


@dataclass(frozen=True)
class CorpusProfile:
    token_count: int
    type_count: int
    hapax_count: int
    expected_unknown_rate: float
    ambiguity_histogram: Mapping[int, float]
    mean_tags_per_token: float
    most_frequent: tuple[str, int] = ("", 0)
    max_tags_per_word: tuple[int, tuple[str, ...]] = (0, ())
    tagset_size: int = 0
    extras: Mapping[str, float] = field(default_factory=dict)

    @property
    def ambiguous_fraction(self) -> float:
        return sum(v for k, v in self.ambiguity_histogram.items() if k > 1)

    def format(self) -> str:
        """Plain-text rendering of the corpus statistics and ambiguity table."""
        lines = [
            f"size                {self.token_count:,} words",
            f"word types          {self.type_count:,} words",
            f"most freq. word     {self.most_frequent[1]}x {self.most_frequent[0]!r}",
            f"one occurrence      {self.hapax_count:,} words",
            f"unknown words       {_pct0(self.expected_unknown_rate)} expected",
            f"tagset              {self.tagset_size} tags",
            f"max. tags/word      {self.max_tags_per_word[0]} "
            f"({', '.join(repr(w) for w in self.max_tags_per_word[1][:3])})",
            "",
            "tags/word  tokens",
        ]
        for k in sorted(self.ambiguity_histogram):
            lines.append(f"{k:>9}  {format_percent(self.ambiguity_histogram[k]):>6}%")
        lines.append(f"{'> 1':>9}  {format_percent(self.ambiguous_fraction):>6}%")
        lines.append(f"mean tags/token: {self.mean_tags_per_token:.2f}")
        lines.append("")
        lines.extend(f"{k}: {v}" for k, v in self.key_values().items())
        return "\n".join(lines) + "\n"

    def key_values(self) -> dict[str, object]:
        kv: dict[str, object] = {
            "token_count": self.token_count,
            "type_count": self.type_count,
            "hapax_count": self.hapax_count,
            "expected_unknown_rate": repr(self.expected_unknown_rate),
            "mean_tags_per_token": repr(self.mean_tags_per_token),
            "ambiguous_fraction": repr(self.ambiguous_fraction),
        }
        for k in sorted(self.ambiguity_histogram):
            kv[f"ambiguity.{k}"] = repr(self.ambiguity_histogram[k])
        return kv


def format_percent(x: float, digits: int = 2) -> str:
    """Percent with half-up rounding, e.g. 0.928849 -> '92.88'."""
    from decimal import ROUND_HALF_UP, Decimal

    q = Decimal(1).scaleb(-digits)
    return str((Decimal(repr(x)) * 100).quantize(q, rounding=ROUND_HALF_UP))


def _pct0(x: float) -> str:
    return format_percent(x, 0) + "%"


def profile_corpus(corpus: Corpus, lexicon=None) -> CorpusProfile:
    """Type/token statistics and the per-token ambiguity distribution.

    Without a lexicon, candidate sets come from the corpus itself. Words
    absent from the lexicon count as unambiguous.
    """
    from .lexicon import build_lexicon

    if lexicon is None:
        lexicon = build_lexicon(corpus)
    elif lexicon.tagset != corpus.tagset:
        raise CorpusError("lexicon tagset does not match corpus tagset")
    counts = corpus.form_counts()
    n_tokens = sum(counts.values())
    hapax = sum(1 for c in counts.values() if c == 1)
    amb: Counter = Counter()
    for tok in corpus.tokens():
        amb[lexicon.ambiguity(tok.form)] += 1
    histogram = {k: Fraction(v, n_tokens) for k, v in sorted(amb.items())}
    mean = sum(k * v for k, v in histogram.items())
    form, top = min(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    max_amb = max(lexicon.ambiguity(w) for w in counts)
    max_words = tuple(sorted(w for w in counts if lexicon.ambiguity(w) == max_amb))
    return CorpusProfile(
        token_count=n_tokens,
        type_count=len(counts),
        hapax_count=hapax,
        expected_unknown_rate=float(Fraction(hapax, n_tokens)),
        ambiguity_histogram={k: float(v) for k, v in histogram.items()},
        mean_tags_per_token=float(mean),
        most_frequent=(form, top),
        max_tags_per_word=(max_amb, max_words),
        tagset_size=len(corpus.tagset),
    )


def unknown_rate(train: Corpus, test: Corpus) -> float:
    """Fraction of test tokens whose form never occurs in ``train``."""
    if train.tagset != test.tagset:
        raise CorpusError("train and test tagsets differ")
    vocab = train.vocabulary()
    n = unseen = 0
    for tok in test.tokens():
        n += 1
        unseen += tok.form not in vocab
    return unseen / n
