from pathlib import Path

import pytest

ARTICLE_A = """Reproducible Pipelines for Graph Learning

1 Introduction
Graph learning is a popular topic. We study good methods for it.

2 Methodology
We train a model on the data. Code is at https://github.com/a/b and the
data at www.example.org/data.
Table 1: Dataset statistics.
Figure 1. Overview of the system.
Algorithm 1 Training loop
y = W x + b                    (1)
\f
3 Results
The results are great. See Table 1 and Fig. 1 for details.
"""

ARTICLE_B = """A Study of Noise

Introduction
The introduction of noise is bad for models. Terrible results follow.
Table 1: Noise levels.
Table 2: Error rates.
L = sum of errors / n          (1)
\f
Results
We report the errors here.
"""

ARTICLE_C = """Methods
We describe a simple method. It uses three steps and one idea.
See https://doi.org/10.1000/xyz for the proof. Trees grow tall and green.
Figure 1: A tree.
Figure 2: Another tree.
"""


def write_manifest(root: Path, rows, header="id,title,label,source,text_path,n_pages") -> Path:
    path = root / "manifest.csv"
    lines = [header]
    for row in rows:
        lines.append(",".join(str(c) for c in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def fixture_corpus(tmp_path):
    """Three-article manifest (labels 1, 1, 0) with texts on disk."""
    texts = {"a01": ARTICLE_A, "a02": ARTICLE_C, "b01": ARTICLE_B}
    (tmp_path / "texts").mkdir()
    for name, text in texts.items():
        (tmp_path / "texts" / f"{name}.txt").write_text(text, encoding="utf-8")
    rows = [
        ("b01", "A Study of Noise", 0, "retraction_db", "texts/b01.txt", ""),
        ("a01", "Reproducible Pipelines for Graph Learning", 1, "brown", "texts/a01.txt", ""),
        ("a02", "Simple Trees", 1, "acm_badged", "texts/a02.txt", 4),
    ]
    return write_manifest(tmp_path, rows)


# -- acceptance summary ------------------------------------------------------

_ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1][len("test_"):]
        _ACCEPTANCE.append(f"{name}: {report.outcome.upper()}")


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
