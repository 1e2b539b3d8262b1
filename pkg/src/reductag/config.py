"""Experiment configuration: one key:value file per train/test arrangement.

Example::

    engine: hmm
    corpus: ../data/synth50k.tsv
    split: A:0.8 B:0.1 C:0.1
    split_seed: 1
    train: A B
    test: C
    unknown_preset: teleman

Parts may instead be given as files (``part.A: a.tsv``). Relative paths are
resolved against the config file's directory.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from .corpus import Corpus, Tagset, parse_corpus, read_corpus, split_corpus
from .hmm import HmmConfig
from .reductionistic import DEFAULT_GRID, RedConfig

ENGINES = ("hmm", "red", "lexical")
# suffix length for HMM unknown words: 4 letters for Swedish, 3 for English
UNKNOWN_PRESETS = {"teleman": 4, "susanne": 3, "default": 4}


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    engine: str = "hmm"
    tagset: Path | None = None
    corpus: Path | None = None
    split: dict[str, float] = field(default_factory=dict)
    split_seed: int = 0
    parts: dict[str, Path] = field(default_factory=dict)
    train: tuple[str, ...] = ()
    test: tuple[str, ...] = ()
    unknown_preset: str = "default"
    suffix_len: int | None = None
    red: RedConfig = field(default_factory=RedConfig)
    thresholds: tuple[float, ...] = DEFAULT_GRID
    model: Path | None = None
    report: Path | None = None
    seed: int = 0

    def validate(self) -> "ExperimentConfig":
        if self.engine not in ENGINES:
            raise ConfigError(f"engine must be one of {', '.join(ENGINES)}, got {self.engine!r}")
        if self.unknown_preset not in UNKNOWN_PRESETS:
            raise ConfigError(f"unknown_preset must be one of {', '.join(UNKNOWN_PRESETS)}")
        if self.corpus is not None and self.parts:
            raise ConfigError("give either corpus+split or part files, not both")
        if self.corpus is not None and not self.split:
            raise ConfigError("corpus given without split")
        if self.split and len(self.split) != 3:
            raise ConfigError("split needs exactly three parts")
        names = set(self.split) | set(self.parts)
        for p in (*self.train, *self.test):
            if p not in names:
                raise ConfigError(f"train/test refer to undefined part {p!r}")
        for p in [self.tagset, self.corpus, *self.parts.values()]:
            if p is not None and not Path(p).is_file():
                raise ConfigError(f"file not found: {p}")
        if any(not 0.0 <= t < 1.0 for t in self.thresholds):
            raise ConfigError("thresholds must lie in [0, 1)")
        if list(self.thresholds) != sorted(self.thresholds):
            raise ConfigError("thresholds must be ascending")
        return self

    def hmm_config(self) -> HmmConfig:
        n = self.suffix_len if self.suffix_len is not None else UNKNOWN_PRESETS[self.unknown_preset]
        return HmmConfig(suffix_len=n)

    def load_tagset(self) -> Tagset | None:
        if self.tagset is None:
            return None
        with open(self.tagset, encoding="utf-8") as fh:
            return Tagset.read(fh, name=Path(self.tagset).stem)

    def load_parts(self) -> dict[str, Corpus]:
        tagset = self.load_tagset()
        if self.parts:
            texts = {n: Path(p).read_text(encoding="utf-8") for n, p in self.parts.items()}
            if tagset is None:
                # induce one tagset over all parts so they can be joined
                tagset = parse_corpus("\n\n".join(texts.values())).tagset
            return {n: parse_corpus(t, tagset) for n, t in texts.items()}
        if self.corpus is None:
            raise ConfigError("config names no corpus")
        whole = read_corpus(self.corpus, tagset)
        names = list(self.split)
        pieces = split_corpus(whole, [self.split[n] for n in names], self.split_seed)
        return dict(zip(names, pieces))

    def _join(self, parts: dict[str, Corpus], names) -> Corpus:
        if not names:
            raise ConfigError("empty train or test selection")
        first, *rest = (parts[n] for n in names)
        return first.concat(*rest) if rest else first

    def train_test(self) -> tuple[Corpus, Corpus]:
        parts = self.load_parts()
        return self._join(parts, self.train), self._join(parts, self.test)

    def with_overrides(self, **kw) -> "ExperimentConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def _floats(v: str) -> tuple[float, ...]:
    return tuple(float(x) for x in v.replace(",", " ").split())


def parse_config(text: str, base: Path | None = None) -> ExperimentConfig:
    base = base or Path(".")
    cfg = ExperimentConfig()
    red_items: list[tuple[str, str]] = []
    red_keys = {k for k, _ in RedConfig().items()}

    def path(v: str) -> Path:
        p = Path(v)
        return p if p.is_absolute() else base / p

    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ConfigError(f"line {n}: expected 'key: value'")
        key, value = key.strip(), value.strip()
        try:
            if key == "engine":
                cfg.engine = value
            elif key == "tagset":
                cfg.tagset = path(value)
            elif key == "corpus":
                cfg.corpus = path(value)
            elif key == "split":
                for item in value.split():
                    name, _, frac = item.partition(":")
                    cfg.split[name] = float(frac)
            elif key == "split_seed":
                cfg.split_seed = int(value)
            elif key.startswith("part."):
                cfg.parts[key[5:]] = path(value)
            elif key in ("train", "test"):
                setattr(cfg, key, tuple(value.replace(",", " ").split()))
            elif key == "unknown_preset":
                cfg.unknown_preset = value
            elif key == "suffix_len":
                cfg.suffix_len = int(value)
            elif key == "thresholds":
                cfg.thresholds = _floats(value)
            elif key in ("model", "report"):
                setattr(cfg, key, path(value))
            elif key == "seed":
                cfg.seed = int(value)
            elif key in red_keys:
                red_items.append((key, value))
            else:
                raise ConfigError(f"line {n}: unknown key {key!r}")
        except ValueError as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(f"line {n}: bad value for {key}: {value!r}") from None
    if red_items:
        cfg.red = RedConfig.from_items((dict(RedConfig().items()) | dict(red_items)).items())
    return cfg


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"file not found: {path}")
    return parse_config(path.read_text(encoding="utf-8"), path.parent)
