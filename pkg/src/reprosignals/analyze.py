"""Corpus-level pipeline: feature matrix, significance battery and report tables."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import ArticleRecord, Corpus, CorpusError, read_text
from .lingfeat import FeatureError, build_linguistic_features
from .stats import StatsError, chi_squared, mann_whitney_u, point_biserial
from .textstruct import build_structural_features, build_text_stats

NUMERIC_FEATURES = (
    "word_count",
    "avg_word_length",
    "n_words_gt_avg_len",
    "syllable_count",
    "n_complex_words",
    "yules_i",
    "mean_readability",
    "n_images",
    "n_tables",
    "n_algorithms",
    "n_pages",
    "n_hyperlinks",
    "n_equations",
)
CATEGORICAL_FEATURES = (
    "has_introduction",
    "has_methodology",
    "has_results",
    "article_sentiment",
    "title_sentiment",
)
FEATURES = NUMERIC_FEATURES + CATEGORICAL_FEATURES
# computed but kept out of the battery; only written when requested
EXTRA_FEATURES = ("avg_sentence_length",)

DISPLAY_NAMES = {
    "has_introduction": "Presence of Introduction Section",
    "has_methodology": "Presence of Methodology Section",
    "has_results": "Presence of Results Section",
    "n_pages": "Number of Pages",
    "n_images": "Number of Images",
    "n_tables": "Number of Tables",
    "n_algorithms": "Number of Algorithms",
    "n_hyperlinks": "Number of Hyperlinks",
    "n_equations": "Number of Equations",
    "word_count": "Word count",
    "avg_word_length": "Average word length",
    "avg_sentence_length": "Average sentence length",
    "n_words_gt_avg_len": "Frequency of words greater than average word length",
    "n_complex_words": "Complex words",
    "syllable_count": "Syllable count",
    "yules_i": "Yule's I measure of lexical diversity",
    "mean_readability": "Mean Readability",
    "article_sentiment": "Article's sentiment",
    "title_sentiment": "Title's sentiment",
}

POINT_BISERIAL = "point_biserial"
MANN_WHITNEY = "mann_whitney_u"
CHI_SQUARED = "chi_squared"

# (file stem, title, test, feature order)
REPORT_TABLES = (
    ("structural_pb", "Point-biserial correlation: structural features", POINT_BISERIAL, (
        "has_introduction", "has_methodology", "has_results", "n_pages", "n_images",
        "n_tables", "n_algorithms", "n_hyperlinks", "n_equations",
    )),
    ("linguistic_pb", "Point-biserial correlation: linguistic features", POINT_BISERIAL, (
        "word_count", "avg_word_length", "n_words_gt_avg_len", "n_complex_words",
        "syllable_count", "yules_i", "mean_readability", "article_sentiment",
        "title_sentiment",
    )),
    ("numeric_mwu", "Mann-Whitney U test: numerical features", MANN_WHITNEY, (
        "yules_i", "word_count", "avg_word_length", "n_words_gt_avg_len",
        "syllable_count", "n_complex_words", "mean_readability", "n_images",
        "n_tables", "n_algorithms", "n_pages", "n_hyperlinks", "n_equations",
    )),
    ("categorical_chi2", "Chi-squared test: categorical features", CHI_SQUARED, (
        "has_introduction", "has_methodology", "has_results", "article_sentiment",
        "title_sentiment",
    )),
)

FORMATS = ("markdown", "csv", "json")


class AnalysisError(ValueError):
    pass


@dataclass
class FeatureMatrix:
    article_ids: list[str]
    labels: list[int]
    columns: dict[str, list]  # None marks a missing cell
    diagnostics: dict[str, list[str]] = field(default_factory=dict)

    @property
    def numeric_features(self) -> dict[str, list]:
        return {k: v for k, v in self.columns.items() if k in NUMERIC_FEATURES}

    @property
    def categorical_features(self) -> dict[str, list]:
        return {k: v for k, v in self.columns.items() if k in CATEGORICAL_FEATURES}

    def missing(self, feature: str) -> list[bool]:
        return [v is None for v in self.columns[feature]]

    def n_missing(self) -> int:
        return sum(v is None for col in self.columns.values() for v in col)

    def __len__(self) -> int:
        return len(self.article_ids)


def extract_article(record: ArticleRecord, extras: bool = False) -> tuple[dict, list[str]]:
    """Feature row for one article; failures become ``None`` cells plus diagnostics."""
    names = FEATURES + (EXTRA_FEATURES if extras else ())
    row = dict.fromkeys(names)
    diags = []
    try:
        text = read_text(record)
    except CorpusError as exc:
        diags.append(str(exc))
        return row, diags

    s = build_structural_features(record, text)
    row.update(
        has_introduction=int(s.has_introduction),
        has_methodology=int(s.has_methodology),
        has_results=int(s.has_results),
        n_pages=s.n_pages,
        n_images=s.n_images,
        n_tables=s.n_tables,
        n_algorithms=s.n_algorithms,
        n_hyperlinks=s.n_hyperlinks,
        n_equations=s.n_equations,
    )

    stats = build_text_stats(text)
    try:
        ling = build_linguistic_features(stats, record.title)
    except FeatureError as exc:
        diags.append(f"{record.id}: linguistic features unavailable: {exc}")
        return row, diags
    for name in row:
        if hasattr(ling, name):
            row[name] = getattr(ling, name)
    if math.isinf(ling.yules_i):
        row["yules_i"] = None
        diags.append(f"{record.id}: yules_i undefined (all tokens unique)")
    return row, diags


def _extract_one(args):
    return extract_article(*args)


def _workers(parallelism) -> int:
    if parallelism in (None, "auto"):
        return os.cpu_count() or 1
    n = int(parallelism)
    if n < 1:
        raise ValueError("parallelism must be >= 1")
    return n


def build_feature_matrix(corpus: Corpus, parallelism=1, extras: bool = False) -> FeatureMatrix:
    """Run both feature pipelines over ``corpus`` in article-id order."""
    jobs = [(rec, extras) for rec in corpus.articles]
    workers = min(_workers(parallelism), max(len(jobs), 1))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_extract_one, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_extract_one(job) for job in jobs]

    names = FEATURES + (EXTRA_FEATURES if extras else ())
    columns = {name: [] for name in names}
    diagnostics = {}
    for rec, (row, diags) in zip(corpus.articles, results):
        for name in names:
            columns[name].append(row[name])
        if diags:
            diagnostics[rec.id] = diags
    return FeatureMatrix(
        article_ids=[rec.id for rec in corpus.articles],
        labels=[int(rec.label) for rec in corpus.articles],
        columns=columns,
        diagnostics=diagnostics,
    )


# -- features.csv ------------------------------------------------------------


def _fmt_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def features_csv(matrix: FeatureMatrix) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    names = list(matrix.columns)
    writer.writerow(["article_id", "label", *names])
    for i, aid in enumerate(matrix.article_ids):
        writer.writerow([aid, matrix.labels[i], *(_fmt_cell(matrix.columns[n][i]) for n in names)])
    return buf.getvalue()


def write_features_csv(matrix: FeatureMatrix, path) -> None:
    Path(path).write_text(features_csv(matrix), encoding="utf-8", newline="")


def _parse_number(cell: str, where: str):
    try:
        return int(cell)
    except ValueError:
        pass
    try:
        value = float(cell)
    except ValueError:
        raise AnalysisError(f"{where}: not a number: {cell!r}") from None
    if not math.isfinite(value):
        raise AnalysisError(f"{where}: non-finite value {cell!r}")
    return value


def read_features_csv(path) -> FeatureMatrix:
    path = Path(path)
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise AnalysisError(f"{path}: empty features file") from None
        if header[:2] != ["article_id", "label"]:
            raise AnalysisError(f"{path}: header must start with article_id,label")
        names = header[2:]
        unknown = [n for n in names if n not in FEATURES + EXTRA_FEATURES]
        if unknown:
            raise AnalysisError(f"{path}: unknown feature columns {unknown}")
        ids, labels, columns = [], [], {n: [] for n in names}
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise AnalysisError(f"{path}: line {lineno} has {len(row)} fields, expected {len(header)}")
            ids.append(row[0])
            if row[1] not in ("0", "1"):
                raise AnalysisError(f"{path}: line {lineno}: label must be 0 or 1")
            labels.append(int(row[1]))
            for name, cell in zip(names, row[2:]):
                if cell == "":
                    columns[name].append(None)
                else:
                    columns[name].append(_parse_number(cell, f"{path}: line {lineno}, {name}"))
    return FeatureMatrix(article_ids=ids, labels=labels, columns=columns)


# -- significance battery ----------------------------------------------------


@dataclass(frozen=True)
class FeatureTestRow:
    feature: str
    test: str
    statistic: float | None
    p_value: float | None
    n_used: int
    df: float | None = None
    note: str = ""

    @property
    def testable(self) -> bool:
        return self.p_value is not None


@dataclass
class SignificanceReport:
    rows: list[FeatureTestRow]
    alpha: float
    yates: bool = True

    def row(self, feature: str, test: str) -> FeatureTestRow:
        for r in self.rows:
            if r.feature == feature and r.test == test:
                return r
        raise KeyError((feature, test))

    def significant(self, test: str | None = None) -> list[str]:
        """Features with p < alpha, for one test or for the primary battery.

        The primary battery is Mann-Whitney U for numeric features and
        chi-squared for categorical ones.
        """
        tests = (test,) if test else (MANN_WHITNEY, CHI_SQUARED)
        return [
            r.feature for r in self.rows
            if r.test in tests and r.testable and r.p_value < self.alpha
        ]

    @property
    def significant_set(self) -> list[str]:
        return self.significant()


def _pairs(values, labels):
    return [(v, l) for v, l in zip(values, labels) if v is not None]


def _run(feature, test, fn, n_used) -> FeatureTestRow:
    try:
        res = fn()
    except StatsError as exc:
        return FeatureTestRow(feature, test, None, None, n_used, note=f"untestable: {exc}")
    return FeatureTestRow(feature, test, res.statistic, res.p_value, n_used, res.df, res.method_note)


def run_significance_suite(matrix: FeatureMatrix, alpha: float = 0.05, yates: bool = True) -> SignificanceReport:
    """Point-biserial on every feature, Mann-Whitney U on numeric, chi-squared on categorical."""
    if not 0 < alpha < 1:
        raise AnalysisError(f"alpha must lie in (0, 1), got {alpha}")
    if len(set(matrix.labels)) < 2:
        raise AnalysisError("both label classes (reproducible and irreproducible) must be present")

    rows = []
    for feature in FEATURES:
        if feature not in matrix.columns:
            continue
        pairs = _pairs(matrix.columns[feature], matrix.labels)
        vals = [v for v, _ in pairs]
        labs = [l for _, l in pairs]
        n_used = len(pairs)
        rows.append(_run(feature, POINT_BISERIAL, lambda: point_biserial(vals, labs), n_used))
        if feature in NUMERIC_FEATURES:
            g1 = [v for v, l in pairs if l == 1]
            g0 = [v for v, l in pairs if l == 0]
            rows.append(_run(feature, MANN_WHITNEY, lambda: mann_whitney_u(g1, g0), n_used))
        else:
            table = [[0, 0], [0, 0]]
            for v, l in pairs:
                if v not in (0, 1):
                    raise AnalysisError(f"{feature}: categorical value {v!r} is not 0/1")
                table[l][int(v)] += 1
            rows.append(_run(feature, CHI_SQUARED, lambda: chi_squared(table, yates=yates), n_used))
    return SignificanceReport(rows=rows, alpha=alpha, yates=yates)


# -- rendering ---------------------------------------------------------------


def _p4(p) -> str:
    return "n/a" if p is None else f"{p:.4f}"


def _markdown_table(report, title, test, features) -> str:
    lines = [f"# {title}", ""]
    if test == POINT_BISERIAL:
        lines += ["Label coding: reproducible = 1, irreproducible = 0.", ""]
    lines += ["| Feature | p-value |", "|---|---|"]
    for f in features:
        lines.append(f"| {DISPLAY_NAMES[f]} | {_p4(report.row(f, test).p_value)} |")
    lines += ["", f"alpha = {report.alpha}; significant: "
              + (", ".join(DISPLAY_NAMES[f] for f in features if f in report.significant(test)) or "none"), ""]
    return "\n".join(lines)


def _csv_table(report, test, features) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["feature", "name", "test", "statistic", "p_value", "n_used", "note"])
    for f in features:
        r = report.row(f, test)
        writer.writerow([
            f, DISPLAY_NAMES[f], test,
            "" if r.statistic is None else f"{r.statistic:.6f}",
            "" if r.p_value is None else f"{r.p_value:.4f}",
            r.n_used, r.note,
        ])
    return buf.getvalue()


def summary_dict(report: SignificanceReport) -> dict:
    return {
        "alpha": report.alpha,
        "yates": report.yates,
        "rows": [
            {"feature": r.feature, "test": r.test, "statistic": r.statistic, "p": r.p_value, "n": r.n_used}
            for r in report.rows
        ],
        "significant": report.significant(),
        "significant_by_test": {
            t: report.significant(t) for t in (POINT_BISERIAL, MANN_WHITNEY, CHI_SQUARED)
        },
    }


def render_report(report: SignificanceReport, out_dir, formats=FORMATS) -> list[Path]:
    """Write the four tables (and summary.json) under ``out_dir``; returns written paths."""
    if not report.rows:
        raise AnalysisError("empty report")
    bad = set(formats) - set(FORMATS)
    if bad:
        raise AnalysisError(f"unknown formats {sorted(bad)}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    def write(name, content):
        path = out_dir / name
        path.write_text(content, encoding="utf-8", newline="")
        written.append(path)

    for stem, title, test, features in REPORT_TABLES:
        if "markdown" in formats:
            write(f"{stem}.md", _markdown_table(report, title, test, features))
        if "csv" in formats:
            write(f"{stem}.csv", _csv_table(report, test, features))
    if "json" in formats:
        write("summary.json", json.dumps(summary_dict(report), indent=2, allow_nan=False) + "\n")
    return written
