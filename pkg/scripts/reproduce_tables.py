"""Rerun the published HMM and reductionistic experiments on licensed corpora.

Usage::

    python scripts/reproduce_tables.py DATA_DIR [--seed N] [--tolerance 1.5]

DATA_DIR holds gold files in the vertical ``form<TAB>tag`` format, named
``teleman-small.tsv``, ``teleman-large.tsv``, ``susanne-small.tsv`` and
``susanne-large.tsv``. Missing files are skipped. The published split
boundaries are not available, so each corpus is split at random into parts
with the published proportions. Every compared entry prints one line; the
exit status is 1 if any entry misses by more than the tolerance.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from reductag.corpus import read_corpus, split_corpus
from reductag.evaluation import RUN_CONTEXTUAL, RUN_LEXICAL, evaluate_sequences, full_sweep
from reductag.hmm import HmmConfig, lexical_tag, train_hmm, viterbi_tag
from reductag.reductionistic import DEFAULT_GRID, train_red

# published part sizes A/B/C; shares are taken relative to their sum
PART_SIZES = {"teleman": (67_402, 9_262, 8_774), "susanne": (127_385, 9_752, 9_684)}
PROPORTIONS = {k: tuple(n / sum(v) for n in v) for k, v in PART_SIZES.items()}
SUFFIX_LEN = {"teleman": 4, "susanne": 3}
ARRANGEMENTS = {"ABC": (("A", "B", "C"), ("A", "B", "C")), "AB-C": (("A", "B"), ("C",)),
                "AC-B": (("A", "C"), ("B",))}

# total correct (%), lexical then trigram, per arrangement
HMM = {
    ("teleman", "small"): {"ABC": (95.13, 96.22), "AB-C": (89.27, 92.88), "AC-B": (90.42, 92.81)},
    ("teleman", "large"): {"ABC": (90.65, 98.35), "AB-C": (78.84, 83.78), "AC-B": (78.05, 81.01)},
    ("susanne", "small"): {"ABC": (95.28, 98.65), "AB-C": (91.48, 95.76), "AC-B": (91.20, 95.18)},
    ("susanne", "large"): {"ABC": (93.98, 99.80), "AB-C": (86.98, 92.61), "AC-B": (88.16, 93.07)},
}

# recall (%) over the threshold grid: (trigram and lexical, lexical only)
RED = {
    ("teleman", "small"): {
        "ABC": ((100.00, 99.02, 98.66, 98.35, 97.78, 97.37, 96.65, 95.55),
                (100.00, 98.96, 98.53, 98.29, 97.69, 97.28, 96.36, 95.10)),
        "AB-C": ((98.98, 97.72, 97.25, 96.81, 96.20, 95.53, 94.67, 93.34),
                 (98.98, 97.61, 97.14, 96.87, 96.15, 95.63, 94.26, 92.55)),
        # the published 0.30 entry reads 98.81, above its 0.20 neighbour; left out
        "AC-B": ((98.99, 97.80, 97.44, 96.94, 96.34, 95.84, None, 93.50),
                 (98.99, 97.67, 97.33, 97.07, 96.45, 95.84, 94.34, 92.52)),
    },
    ("teleman", "large"): {
        "ABC": ((100.00, 98.36, 97.92, 97.54, 97.03, 96.41, 95.31, 93.75),
                (100.00, 98.30, 97.63, 97.20, 96.67, 95.57, 93.65, 90.59)),
        "AB-C": ((97.46, 94.93, 93.94, 93.35, 92.35, 91.15, 88.53, 85.56),
                 (97.46, 95.23, 94.24, 93.69, 92.93, 91.51, 87.92, 83.62)),
        "AC-B": ((96.64, 94.04, 93.00, 92.09, 90.92, 89.46, 86.94, 83.58),
                 (96.64, 94.51, 93.27, 92.50, 91.02, 89.68, 85.86, 81.69)),
    },
    ("susanne", "small"): {
        "ABC": ((100.00, 99.46, 99.35, 99.23, 99.03, 98.82, 98.43, 97.75),
                (100.00, 99.33, 99.20, 98.94, 98.67, 98.10, 97.43, 95.28)),
        "AB-C": ((99.22, 98.43, 98.28, 98.11, 97.78, 97.43, 96.91, 95.99),
                 (99.22, 98.27, 98.03, 97.78, 97.45, 96.80, 96.15, 93.42)),
        "AC-B": ((99.22, 98.46, 98.22, 97.99, 97.58, 97.15, 96.49, 95.54),
                 (99.22, 98.21, 97.88, 97.61, 97.35, 96.47, 95.46, 92.87)),
    },
    ("susanne", "large"): {
        "ABC": ((100.00, 99.25, 99.12, 98.96, 98.74, 98.44, 98.04, 96.87),
                (100.00, 99.05, 98.88, 98.59, 98.20, 97.58, 96.72, 93.98)),
        "AB-C": ((98.31, 96.94, 96.52, 96.19, 95.68, 95.02, 94.21, 92.70),
                 (98.31, 96.91, 96.49, 95.94, 95.50, 94.40, 93.42, 90.26)),
        "AC-B": ((98.49, 97.03, 96.72, 96.41, 95.88, 95.16, 94.29, 92.71),
                 (98.49, 96.95, 96.55, 96.05, 95.57, 94.44, 93.26, 90.31)),
    },
}


def _join(parts, names):
    first, *rest = (parts[n] for n in names)
    return first.concat(*rest) if rest else first


def reproduce(data_dir, seed: int = 0):
    """Yield (label, ours, published) in percent for every entry with data present."""
    data_dir = Path(data_dir)
    for (name, size), hmm_rows in HMM.items():
        path = data_dir / f"{name}-{size}.tsv"
        if not path.is_file():
            continue
        whole = read_corpus(path)
        parts = dict(zip("ABC", split_corpus(whole, PROPORTIONS[name], seed)))
        for arr, (train_names, test_names) in ARRANGEMENTS.items():
            train, test = _join(parts, train_names), _join(parts, test_names)
            hmm = train_hmm(train, HmmConfig(suffix_len=SUFFIX_LEN[name]))
            tag = f"{name}/{size}/{arr}"
            for label, tagger, published in (("lexical", lexical_tag, hmm_rows[arr][0]),
                                             ("trigram", viterbi_tag, hmm_rows[arr][1])):
                report = evaluate_sequences(test, [tagger(hmm, s.forms) for s in test], hmm.lexicon)
                yield f"{tag} {label} total", 100 * report.total_correct, published
            sweep = full_sweep(train_red(train), test, DEFAULT_GRID)
            for run, published_row in zip((RUN_CONTEXTUAL, RUN_LEXICAL), RED[(name, size)][arr]):
                for row, published in zip(sweep.runs[run], published_row):
                    if published is not None:
                        yield f"{tag} {run} recall@{row.threshold}", 100 * row.recall, published


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("data_dir")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=1.5)
    args = p.parse_args(argv)
    failed = seen = 0
    for label, ours, published in reproduce(args.data_dir, args.seed):
        seen += 1
        ok = abs(ours - published) <= args.tolerance
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'} {label}: {ours:.2f} vs {published:.2f}")
    if not seen:
        print("no licensed corpus files found", file=sys.stderr)
        return 2
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
