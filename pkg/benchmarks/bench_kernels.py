"""Time the pure-Python and compiled kernels on the bundled corpus.

    python benchmarks/bench_kernels.py [--repeat N]

Prints words/second for HMM decoding and for a reductionistic sweep pass
with each available backend, and checks that both give identical output.
"""

import argparse
import time
from importlib import resources

from reductag import _kernels
from reductag.corpus import parse_corpus, split_corpus
from reductag.hmm import train_hmm, viterbi_tag
from reductag.reductionistic import red_tag, train_red


def load():
    text = resources.files("reductag").joinpath("data/synth50k.tsv").read_text(encoding="utf-8")
    a, b, c = split_corpus(parse_corpus(text), (0.8, 0.1, 0.1), seed=1)
    return a.concat(b), c


def bench(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threshold", type=float, default=0.1)
    args = ap.parse_args()

    train, test = load()
    hmm, red = train_hmm(train), train_red(train)
    n = test.token_count
    results = {}
    for name in _kernels.available_backends():
        k = _kernels.get_backend(name)
        t_hmm, seqs = bench(lambda: [viterbi_tag(hmm, s.forms, backend=k) for s in test], args.repeat)
        t_red, lats = bench(lambda: [red_tag(red, s, args.threshold, backend=k) for s in test],
                            args.repeat)
        results[name] = (seqs, [lat.format() for lat in lats])
        print(f"{name:>7}  viterbi {n / t_hmm:>10.0f} words/s   "
              f"reductionistic {n / t_red:>10.0f} words/s")
    if len(results) == 2:
        (s1, l1), (s2, l2) = results.values()
        same = [x.tags for x in s1] == [x.tags for x in s2] and \
            [x.log_score for x in s1] == [x.log_score for x in s2] and l1 == l2
        print("backends agree" if same else "BACKENDS DISAGREE")


if __name__ == "__main__":
    main()
