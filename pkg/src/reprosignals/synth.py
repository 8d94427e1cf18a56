"""Seeded synthetic corpora with planted structural counts.

Each document is a labeled article whose prose is drawn from the same word
distribution for both labels; structural counts (hyperlinks, tables, ...) are
Poisson draws whose rates may differ by label. The generated text contains
exactly the planted number of each structure as seen by ``textstruct``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import ArticleRecord, Corpus, Label, Source, dump_manifest
from .lingfeat import load_wordlist

# feature -> (rate for label 1, rate for label 0)
PLANTED_RATES = {
    "n_hyperlinks": (5.0, 2.0),
    "n_tables": (3.0, 3.0),
    "n_images": (4.0, 4.0),
    "n_algorithms": (1.0, 1.0),
    "n_equations": (6.0, 6.0),
    "extra_pages": (7.0, 7.0),
}
NULL_RATES = {k: (a, a) for k, (a, _) in PLANTED_RATES.items()}
NULL_RATES["n_hyperlinks"] = (3.5, 3.5)

# upper bound on each planted count (Poisson tails beyond these are clipped)
SLOT_CAPS = {
    "n_hyperlinks": 16,
    "n_tables": 10,
    "n_images": 12,
    "n_algorithms": 6,
    "n_equations": 16,
}

_BLOCKS = {
    "n_tables": lambda k, doc, sent: (f"Table {k}: {sent}", f"(Table {k}: {sent})"),
    "n_images": lambda k, doc, sent: (f"Figure {k}. {sent}", f"(Figure {k}. {sent})"),
    "n_algorithms": lambda k, doc, sent: (f"Algorithm {k} {sent}", f"(Algorithm {k} {sent})"),
    "n_equations": lambda k, doc, sent: (f"y{k} = a{k} x + b{k}                ({k})", f"y{k} = a{k} x + b{k}"),
    "n_hyperlinks": lambda k, doc, sent: (
        f"Code and data are at https://example.org/{doc}/artifact-{k} for reuse.",
        f"Code and data are at https:/ /example.org/{doc}/artifact-{k} for reuse.",
    ),
}

_TECH_WORDS = (
    "algorithm", "evaluation", "parameter", "distribution", "experiment",
    "implementation", "benchmark", "optimization", "regression", "repository",
    "variance", "hypothesis", "probability", "architecture", "computation",
    "configuration", "dataset", "latency", "throughput", "accuracy",
)


@dataclass
class SynthConfig:
    seed: int
    n_docs: int = 300
    words_per_doc: int = 1500
    rates: dict = field(default_factory=lambda: dict(PLANTED_RATES))
    section_prob: float = 0.9


@dataclass(frozen=True)
class SynthDoc:
    id: str
    label: int
    title: str
    text: str
    planted: dict


def _sentence(rng, vocab, n_words: int) -> str:
    words = [vocab[i] for i in rng.integers(0, len(vocab), size=n_words)]
    words[0] = words[0].capitalize()
    return " ".join(words) + "."


def _paragraph(rng, vocab, n_words: int) -> tuple[str, int]:
    sentences = []
    used = 0
    while used < n_words:
        k = int(rng.integers(8, 26))
        sentences.append(_sentence(rng, vocab, k))
        used += k
    return " ".join(sentences), used


def generate_document(rng, vocab, doc_id: str, label: int, cfg: SynthConfig) -> SynthDoc:
    planted = {
        name: int(rng.poisson(rates[0] if label == 1 else rates[1]))
        for name, rates in cfg.rates.items()
    }
    sections = [
        ("Introduction", rng.random() < cfg.section_prob),
        ("Methodology", rng.random() < cfg.section_prob),
        ("Results", rng.random() < cfg.section_prob),
        ("Conclusion", True),
    ]
    # Every document gets the same number of lines per structure kind; unused
    # slots hold a defused copy with identical word tokens, so the planted
    # counts never leak into the linguistic features.
    blocks = []
    for kind, make in _BLOCKS.items():
        cap = SLOT_CAPS[kind]
        planted[kind] = min(planted.get(kind, 0), cap)
        for k in range(1, cap + 1):
            real, defused = make(k, doc_id, _sentence(rng, vocab, 5))
            blocks.append(real if k <= planted[kind] else defused)
    order = rng.permutation(len(blocks))
    blocks = [blocks[i] for i in order]

    n_paragraphs = max(4, cfg.words_per_doc // 120)
    per_par = cfg.words_per_doc // n_paragraphs
    lines = []
    sec_every = max(1, n_paragraphs // len(sections))
    sec_iter = iter(sections)
    sec_no = 0
    for p in range(n_paragraphs):
        if p % sec_every == 0:
            heading = next(sec_iter, None)
            if heading is not None and heading[1]:
                sec_no += 1
                lines.append(f"{sec_no} {heading[0]}")
            elif heading is not None:
                sec_no += 1
                lines.append(f"({sec_no} {heading[0]})")
        text, _ = _paragraph(rng, vocab, per_par)
        lines.append(text)
        if blocks:
            # spread blocks evenly over the paragraphs
            take = -(-len(blocks) // (n_paragraphs - p))
            lines.extend(blocks[:take])
            blocks = blocks[take:]
    lines.extend(blocks)

    # page breaks between lines, never splitting a line
    n_breaks = min(planted.get("extra_pages", 0), len(lines) - 1)
    planted["n_pages"] = n_breaks + 1
    breaks = set(int(i) for i in rng.choice(np.arange(1, len(lines)), size=n_breaks, replace=False))
    out = []
    for i, line in enumerate(lines):
        if i in breaks:
            out.append("\f")
        out.append(line + "\n")
    title = _sentence(rng, vocab, int(rng.integers(5, 12)))[:-1]
    return SynthDoc(id=doc_id, label=label, title=title, text="".join(out), planted=planted)


def _vocabulary() -> list[str]:
    return sorted(load_wordlist("easy_words.txt") | set(_TECH_WORDS))


def generate_corpus(cfg: SynthConfig) -> list[SynthDoc]:
    """Documents for ``cfg``; labels alternate so each class gets half."""
    rng = np.random.default_rng(cfg.seed)
    vocab = [w for w in _vocabulary() if "-" not in w and "'" not in w]
    width = max(4, len(str(cfg.n_docs)))
    return [
        generate_document(rng, vocab, f"syn{i:0{width}d}", 1 - i % 2, cfg)
        for i in range(cfg.n_docs)
    ]


def write_corpus(docs, out_dir) -> Corpus:
    """Write texts under ``out_dir/texts`` plus ``out_dir/manifest.csv``."""
    out_dir = Path(out_dir)
    text_dir = out_dir / "texts"
    text_dir.mkdir(parents=True, exist_ok=True)
    records = []
    for doc in docs:
        path = text_dir / f"{doc.id}.txt"
        path.write_text(doc.text, encoding="utf-8", newline="")
        records.append(ArticleRecord(
            id=doc.id, title=doc.title, label=Label(doc.label), source=Source.OTHER,
            text_path=path,
        ))
    corpus = Corpus.from_records(records)
    dump_manifest(corpus, out_dir / "manifest.csv")
    return corpus
