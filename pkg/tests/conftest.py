from importlib import resources

import pytest

from reductag import _kernels
from reductag.corpus import parse_corpus, split_corpus
from reductag.hmm import train_hmm
from reductag.reductionistic import train_red


@pytest.fixture(scope="session")
def synth_corpus():
    text = resources.files("reductag").joinpath("data/synth50k.tsv").read_text(encoding="utf-8")
    return parse_corpus(text)


@pytest.fixture(scope="session")
def synth_split(synth_corpus):
    a, b, c = split_corpus(synth_corpus, (0.8, 0.1, 0.1), seed=1)
    return a.concat(b), c


@pytest.fixture(scope="session")
def synth_hmm(synth_split):
    return train_hmm(synth_split[0])


@pytest.fixture(scope="session")
def synth_red(synth_split):
    return train_red(synth_split[0])


@pytest.fixture(params=_kernels.available_backends())
def backend(request):
    return _kernels.get_backend(request.param)


CRITERIA = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """Record a criterion's PASS/FAIL for the end-of-run summary."""
    results = request.config.stash.setdefault(CRITERIA, {})

    class Recorder:
        def __init__(self):
            self.name = None
            self.detail = ""

        def __call__(self, name):
            self.name = name
            results[name] = ("FAIL", "")
            return self

        def passed(self, detail=""):
            results[self.name] = ("PASS", detail)

        def note(self, detail):
            results[self.name] = (results[self.name][0], detail)

    return Recorder()


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(CRITERIA, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(results):
        status, detail = results[name]
        terminalreporter.write_line(f"{status} {name}" + (f": {detail}" if detail else ""))
