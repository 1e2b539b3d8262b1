"""Accuracy, recall and ambiguity measurement, and result tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .corpus import Corpus, format_percent
from .reductionistic import DEFAULT_GRID, Lattice, RedModel, red_tag

DASH = "—"


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class AccuracyReport:
    n_known: int
    n_unknown: int
    correct_known: int
    correct_unknown: int

    @property
    def n_total(self) -> int:
        return self.n_known + self.n_unknown

    @property
    def correct_total(self) -> int:
        return self.correct_known + self.correct_unknown

    @property
    def total_correct(self) -> float:
        return self.correct_total / self.n_total

    @property
    def known_correct(self) -> float | None:
        return self.correct_known / self.n_known if self.n_known else None

    @property
    def unknown_correct(self) -> float | None:
        return self.correct_unknown / self.n_unknown if self.n_unknown else None

    def exact_total(self) -> Fraction:
        return Fraction(self.correct_total, self.n_total)

    def cells(self) -> list[str]:
        return [_pct(self.total_correct), _pct(self.known_correct), _pct(self.unknown_correct)]


def _pct(x: float | None) -> str:
    return DASH if x is None else format_percent(x) + "%"


def _tags_of(pred) -> list:
    return list(getattr(pred, "tags", pred))


def evaluate_sequences(gold: Corpus, predicted: Sequence, train_vocab) -> AccuracyReport:
    """Token accuracy, split by whether the form occurs in ``train_vocab``."""
    if len(predicted) != len(gold):
        raise EvaluationError(f"{len(predicted)} predictions for {len(gold)} sentences")
    nk = nu = ck = cu = 0
    for sent, pred in zip(gold, predicted):
        tags = _tags_of(pred)
        if len(tags) != len(sent):
            raise EvaluationError("prediction length differs from sentence length")
        for tok, t in zip(sent, tags):
            ok = getattr(t, "id", t) == tok.gold.id
            if tok.form in train_vocab:
                nk += 1
                ck += ok
            else:
                nu += 1
                cu += ok
    return AccuracyReport(nk, nu, ck, cu)


class LatticeScore(NamedTuple):
    recall: float
    tags_per_word: float
    n_tokens: int


def evaluate_lattices(gold: Corpus, lattices: Sequence[Lattice]) -> LatticeScore:
    """Share of tokens whose gold tag survived, and mean candidates left per token."""
    if len(lattices) != len(gold):
        raise EvaluationError(f"{len(lattices)} lattices for {len(gold)} sentences")
    n = hit = cands = 0
    for sent, lat in zip(gold, lattices):
        if len(lat) != len(sent):
            raise EvaluationError("lattice length differs from sentence length")
        sizes = lat.sizes()
        for i, tok in enumerate(sent):
            n += 1
            hit += tok.gold.id in lat.candidate_ids(i)
            cands += int(sizes[i])
    return LatticeScore(hit / n, cands / n, n)


class SweepRow(NamedTuple):
    threshold: float
    recall: float
    tags_per_word: float


RUN_CONTEXTUAL = "trigram+lexical"
RUN_LEXICAL = "lexical"


@dataclass
class SweepReport:
    runs: dict[str, list[SweepRow]] = field(default_factory=dict)

    def thresholds(self) -> list[float]:
        first = next(iter(self.runs.values()), [])
        return [r.threshold for r in first]

    def machine_rows(self) -> str:
        out = []
        for run, rows in self.runs.items():
            for r in rows:
                out.append(f"{run}\t{r.threshold!r}\t{r.recall!r}\t{r.tags_per_word!r}")
        return "\n".join(out) + "\n"

    def merge(self, other: "SweepReport") -> "SweepReport":
        return SweepReport({**self.runs, **other.runs})


def threshold_sweep(model: RedModel, test: Corpus, thresholds: Iterable[float] = DEFAULT_GRID,
                    contextual: bool = True) -> SweepReport:
    """Tag ``test`` once per threshold and measure recall and tags/word."""
    grid = list(thresholds)
    if any(not 0.0 <= t < 1.0 for t in grid):
        raise EvaluationError("thresholds must lie in [0, 1)")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise EvaluationError("thresholds must be ascending")
    rows = []
    for t in grid:
        lattices = [red_tag(model, s, t, use_context=contextual) for s in test]
        score = evaluate_lattices(test, lattices)
        rows.append(SweepRow(t, score.recall, score.tags_per_word))
    return SweepReport({RUN_CONTEXTUAL if contextual else RUN_LEXICAL: rows})


def full_sweep(model: RedModel, test: Corpus, thresholds: Iterable[float] = DEFAULT_GRID) -> SweepReport:
    grid = list(thresholds)
    return threshold_sweep(model, test, grid, True).merge(threshold_sweep(model, test, grid, False))


def _threshold_label(t: float) -> str:
    """Two decimals, or three when needed: 0.00, 0.075, 0.50."""
    s = f"{t:.3f}"
    return s[:-1] if s.endswith("0") else s


def format_accuracy_table(rows: Sequence[tuple[str, str, str, AccuracyReport]]) -> str:
    """Rows of (method, training, testing, report), one block per method."""
    header = ["Training", "Testing", "total correct", "known correct", "unknown correct"]
    body = []
    current = None
    for method, train, test, rep in rows:
        if method != current:
            body.append([method])
            current = method
        body.append([train, test, *rep.cells()])
    widths = [max(len(header[i]), *(len(r[i]) for r in body if len(r) > 1)) for i in range(5)]
    lines = ["  ".join(h.rjust(w) if i >= 2 else h.ljust(w) for i, (h, w) in enumerate(zip(header, widths)))]
    lines.append("-" * len(lines[0]))
    for r in body:
        if len(r) == 1:
            lines.append(r[0])
        else:
            lines.append("  ".join(c.rjust(w) if i >= 2 else c.ljust(w)
                                   for i, (c, w) in enumerate(zip(r, widths))))
    return "\n".join(lines) + "\n"


def format_sweep_table(report: SweepReport, training: str = "", testing: str = "") -> str:
    labels = {RUN_CONTEXTUAL: "Trigram and lexical statistics", RUN_LEXICAL: "Lexical statistics only"}
    grid = report.thresholds()
    head = "Threshold:    " + "".join(f"{_threshold_label(t):>8}" for t in grid)
    lines = []
    if training or testing:
        lines.append(f"Training: {training}   Testing: {testing}")
    lines.append(head)
    lines.append("-" * len(head))
    for run, rows in report.runs.items():
        lines.append(labels.get(run, run))
        lines.append("Recall (%)    " + "".join(f"{format_percent(r.recall):>8}" for r in rows))
        lines.append("Tags/word     " + "".join(f"{format_percent(r.tags_per_word / 100):>8}" for r in rows))
    return "\n".join(lines) + "\n"
