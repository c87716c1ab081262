import os
import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from akshara_entropy.table_io import reference_table  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"

# Outside corpora for the scale-dependent checks; see README.
CORPUS_ENV = "AKSHARA_ENTROPY_CORPUS"
EDITORIAL_ENV = "AKSHARA_ENTROPY_EDITORIAL"


@pytest.fixture(scope="session")
def table():
    return reference_table()


@pytest.fixture(scope="session")
def t1():
    return (FIXTURES / "t1.txt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def t2():
    return (FIXTURES / "t2.txt").read_text(encoding="utf-8")


def synthetic_articles(n_articles, words_per_article, seed=0):
    """Texts of words drawn from a Zipf-weighted vocabulary over the reference letters.

    Not natural language; only used where the tests need a corpus-shaped input.
    """
    rng = random.Random(seed)
    rows = reference_table().rows
    letters = [row.letter for row in rows]
    weights = [row.probability for row in rows]
    vocab = []
    for _ in range(3000):
        length = rng.choice([1, 2, 2, 3, 3, 3, 3, 4, 4, 5, 6])
        vocab.append("".join(rng.choices(letters, weights, k=length)))
    zipf = [1 / (i + 1) for i in range(len(vocab))]
    texts = []
    for _ in range(n_articles):
        words = rng.choices(vocab, zipf, k=words_per_article)
        texts.append(" ".join(words) + ".\n")
    return texts


def write_manifest(directory, texts, volumes=1):
    """Write one file per text plus a manifest; returns the manifest path."""
    directory = Path(directory)
    lines = []
    per_volume = -(-len(texts) // volumes)
    for i, text in enumerate(texts):
        vol, ordinal = divmod(i, per_volume)
        name = f"v{vol}_a{ordinal}.txt"
        (directory / name).write_text(text, encoding="utf-8")
        lines.append(f"vol{vol}\t{ordinal}\t{name}")
    manifest = directory / "manifest.tsv"
    manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return manifest


_ACCEPTANCE = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        detail = ""
        if report.skipped and isinstance(report.longrepr, tuple):
            detail = f" ({report.longrepr[2]})"
        number, title = marker.args
        _ACCEPTANCE.append((number, item.name, status, title, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, status, title, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number} [{status}] {title} :: {name}{detail}")
