import random
from pathlib import Path

import pytest

from hmmtagset.corpus import TaggedCorpus

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"
RULES = Path(__file__).parent.parent / "rules"


def corpus_of(*sentences):
    """corpus_of("a/X b/Y", "c/Z") -> TaggedCorpus."""
    return TaggedCorpus.from_pairs([tuple(tok.rsplit("/", 1)) for tok in s.split()] for s in sentences)


def random_corpus(rng: random.Random, n_sent=20, max_len=8, n_words=12, tags=("A", "B", "C", "D")):
    words = [f"w{k}" for k in range(n_words)]
    sents = []
    for _ in range(n_sent):
        sents.append([(rng.choice(words), rng.choice(tags)) for _ in range(rng.randint(1, max_len))])
    return TaggedCorpus.from_pairs(sents)


@pytest.fixture
def rng():
    return random.Random(1234)


ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, name, ok, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {num}. {name}: {detail}")
