"""Command-line front end: ``reductag <command> ...``.

Exit status is 0 on success, 1 on usage errors and 2 on data errors
(unreadable or malformed files, impossible parameters).
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

from .config import ConfigError, ExperimentConfig, load_config
from .corpus import Corpus, CorpusError, Tagset, parse_corpus, profile_corpus, serialize_corpus
from .evaluation import (
    EvaluationError,
    evaluate_lattices,
    evaluate_sequences,
    format_accuracy_table,
    format_sweep_table,
    full_sweep,
)
from .hmm import HmmModel, lexical_tag, model_engine, train_hmm, viterbi_tag
from .lexicon import Lexicon
from .reductionistic import DegenerateLatticeError, IterationLimitError, RedModel, red_tag, train_red
from .synth import SynthParams, generate

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2
DATA_ERRORS = (CorpusError, ConfigError, EvaluationError, DegenerateLatticeError,
               IterationLimitError, OSError, UnicodeDecodeError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _read_text(path) -> str:
    if str(path) == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _tagset(args) -> Tagset | None:
    if not args.tagset:
        return None
    return Tagset.read(_read_text(args.tagset).splitlines(), name=Path(args.tagset).stem)


def _config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    over = {}
    if args.tagset:
        over["tagset"] = Path(args.tagset)
    if args.seed is not None:
        over["seed"] = args.seed
    return cfg.with_overrides(**over)


def _write(text: str, path) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load_model(path):
    text = _read_text(path)
    engine = model_engine(text)
    if engine == "red":
        return engine, RedModel.loads(text)
    return engine, HmmModel.loads(text)


def _read_sentences(text: str) -> list[list[str]]:
    """Plain or gold vertical text; only the first column is used."""
    out: list[list[str]] = []
    cur: list[str] = []
    for line in text.splitlines():
        if not line.strip():
            if cur:
                out.append(cur)
                cur = []
            continue
        if line.startswith("#"):
            continue
        cur.append(line.split("\t", 1)[0])
    if cur:
        out.append(cur)
    return out


def cmd_profile(args) -> int:
    corpus = parse_corpus(_read_text(args.corpus), _tagset(args))
    lexicon = None
    if args.lexicon:
        lexicon = Lexicon.load(_read_text(args.lexicon).splitlines(), corpus.tagset)
    sys.stdout.write(profile_corpus(corpus, lexicon).format())
    return EXIT_OK


def cmd_train(args) -> int:
    cfg = _config(args)
    if args.engine:
        cfg = cfg.with_overrides(engine=args.engine)
    if args.corpus:
        cfg = replace(cfg, corpus=None, split={}, parts={"T": Path(args.corpus)},
                      train=("T",), test=("T",))
    if not cfg.train:
        raise ConfigError("nothing to train on: give a corpus or a config with train parts")
    train, _ = cfg.validate().train_test()
    out = args.out or cfg.model
    if cfg.engine == "red":
        model = train_red(train, cfg.red)
        text = model.dumps()
    else:
        text = train_hmm(train, cfg.hmm_config()).dumps(engine=cfg.engine)
    _write(text, out)
    return EXIT_OK


def cmd_tag(args) -> int:
    engine, model = _load_model(args.model)
    sentences = _read_sentences(_read_text(args.input))
    start = time.perf_counter()
    chunks = []
    for words in sentences:
        if engine == "red":
            lat = red_tag(model, words, args.threshold, use_context=not args.no_context)
            chunks.append(lat.format())
        else:
            seq = viterbi_tag(model, words) if engine == "hmm" else lexical_tag(model, words)
            chunks.append("".join(f"{w}\t{t.name}\n" for w, t in zip(words, seq.tags)))
    elapsed = time.perf_counter() - start
    _write("\n".join(chunks), args.output)
    n = sum(map(len, sentences))
    if elapsed > 0 and not args.quiet:
        print(f"tagged {n} words in {elapsed:.2f}s ({n / elapsed:.0f} words/second)", file=sys.stderr)
    return EXIT_OK


def _gold(args, model) -> Corpus:
    return parse_corpus(_read_text(args.gold), model.tagset)


def cmd_eval(args) -> int:
    engine, model = _load_model(args.model)
    gold = _gold(args, model)
    if engine == "red":
        lats = [red_tag(model, s, args.threshold, use_context=not args.no_context) for s in gold]
        score = evaluate_lattices(gold, lats)
        sys.stdout.write(f"threshold\t{args.threshold!r}\nrecall\t{score.recall!r}\n"
                         f"tags_per_word\t{score.tags_per_word!r}\n")
        return EXIT_OK
    tagger = viterbi_tag if engine == "hmm" else lexical_tag
    preds = [tagger(model, s.forms) for s in gold]
    report = evaluate_sequences(gold, preds, model.lexicon)
    label = "Trigram Tagging" if engine == "hmm" else "Lexical Tagging"
    sys.stdout.write(format_accuracy_table([(label, args.train_label, args.test_label, report)]))
    return EXIT_OK


def cmd_sweep(args) -> int:
    engine, model = _load_model(args.model)
    if engine != "red":
        raise ConfigError("sweep needs a reductionistic (red) model")
    gold = _gold(args, model)
    grid = tuple(args.grid) if args.grid else model.config.thresholds
    report = full_sweep(model, gold, grid)
    if args.machine:
        sys.stdout.write(report.machine_rows())
    else:
        sys.stdout.write(format_sweep_table(report, args.train_label, args.test_label))
    return EXIT_OK


def cmd_synth(args) -> int:
    params = SynthParams(n_tags=args.tags, vocab_size=args.vocab, tokens=args.tokens,
                         hapax_rate=args.hapax_rate, ambiguity=args.ambiguity,
                         seed=args.seed if args.seed is not None else 0)
    result = generate(params)
    _write(serialize_corpus(result.corpus), args.out)
    print(f"realized hapax rate {result.hapax_rate:.4f}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="reductag", description="Statistical part-of-speech tagging toolkit.")
    p.add_argument("--tagset", help="tagset file, one tag name per line")
    p.add_argument("--seed", type=int, help="random seed")
    p.add_argument("--config", help="experiment config file (key: value)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    s = sub.add_parser("profile", help="corpus statistics")
    s.add_argument("corpus")
    s.add_argument("--lexicon", help="lexicon dump supplying candidate sets")
    s.set_defaults(func=cmd_profile)

    s = sub.add_parser("train", help="train a model")
    s.add_argument("corpus", nargs="?", help="training corpus (instead of a config)")
    s.add_argument("--engine", choices=("hmm", "red", "lexical"))
    s.add_argument("--out", "-o", help="model file (default: config 'model' or stdout)")
    s.set_defaults(func=cmd_train)

    for name, func in (("tag", cmd_tag), ("eval", cmd_eval)):
        s = sub.add_parser(name, help="tag text" if name == "tag" else "accuracy against gold")
        s.add_argument("model")
        s.add_argument("input" if name == "tag" else "gold")
        s.add_argument("--threshold", type=float, default=0.5, help="pruning threshold (red)")
        s.add_argument("--no-context", action="store_true", help="lexical pruning only (red)")
        if name == "tag":
            s.add_argument("--output", "-o")
            s.add_argument("--quiet", "-q", action="store_true")
        else:
            s.add_argument("--train-label", default="train")
            s.add_argument("--test-label", default="test")
        s.set_defaults(func=func)

    s = sub.add_parser("sweep", help="recall and tags/word over a threshold grid")
    s.add_argument("model")
    s.add_argument("gold")
    s.add_argument("--grid", type=float, nargs="+")
    s.add_argument("--machine", action="store_true", help="tab-separated rows")
    s.add_argument("--train-label", default="")
    s.add_argument("--test-label", default="")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("synth", help="generate a synthetic gold corpus")
    s.add_argument("--out", "-o")
    s.add_argument("--tags", type=int, default=SynthParams.n_tags)
    s.add_argument("--vocab", type=int, default=SynthParams.vocab_size)
    s.add_argument("--tokens", type=int, default=SynthParams.tokens)
    s.add_argument("--hapax-rate", type=float, default=SynthParams.hapax_rate)
    s.add_argument("--ambiguity", type=float, default=SynthParams.ambiguity)
    s.set_defaults(func=cmd_synth)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return EXIT_OK if not e.code else EXIT_USAGE
    try:
        return args.func(args)
    except DATA_ERRORS as e:
        print(f"reductag: {e}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as e:
        print(f"reductag: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
