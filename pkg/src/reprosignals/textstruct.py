"""Text segmentation and structural-feature heuristics for extracted article text.

Everything here works on plain text (no layout information), so each structural
count is a pattern over lines:

* section flags: a short line that *is* a heading, optionally numbered;
* tables/figures/algorithms: distinct caption indices at the start of a line;
* hyperlinks: URL-shaped spans, rejoined across single line wraps;
* equations: distinct trailing ``(N)`` tags on lines carrying an operator;
* pages: form feeds + 1 unless the manifest gives a page count.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

# Abbreviations that end in a period but rarely end a sentence. Compared
# case-insensitively against the word immediately before the period.
ABBREVIATIONS = frozenset({
    "al", "fig", "figs", "eq", "eqs", "sec", "secs", "ref", "refs", "tab",
    "e.g", "i.e", "cf", "vs", "approx", "resp", "no", "nos", "vol", "pp",
    "ch", "dr", "mr", "mrs", "ms", "prof", "st", "def", "thm", "lem", "alg",
    "appx",
})

_BOUNDARY = re.compile(r"[.!?]+[\"')\]]*(?=\s)")
_WORD = re.compile(r"[^\W\d_]+(?:['’-][^\W\d_]+)*")
_VOWEL_RUN = re.compile(r"[aeiouy]+")


@dataclass(frozen=True)
class TextStats:
    sentences: tuple[str, ...]
    tokens: tuple[str, ...]
    syllables_per_token: tuple[int, ...]
    letter_count: int
    char_count: int

    @property
    def word_count(self) -> int:
        return len(self.tokens)

    @property
    def sentence_count(self) -> int:
        return len(self.sentences)

    @property
    def syllable_count(self) -> int:
        return sum(self.syllables_per_token)


@dataclass(frozen=True)
class StructuralFeatures:
    has_introduction: bool
    has_methodology: bool
    has_results: bool
    n_pages: int
    n_images: int
    n_tables: int
    n_algorithms: int
    n_hyperlinks: int
    n_equations: int


def _is_guarded(text: str, dot: int, sentence_start: int) -> bool:
    """True when the period at ``text[dot]`` belongs to an abbreviation."""
    if text[dot] != ".":
        return False
    start = dot
    while start > sentence_start and not text[start - 1].isspace() and text[start - 1] not in "([":
        start -= 1
    word = text[start:dot]
    if word.lower() in ABBREVIATIONS:
        return True
    # single capital initial ("J. Smith") unless it opens the sentence ("A. B.")
    if len(word) == 1 and word.isupper() and text[sentence_start:start].strip():
        return True
    return False


def segment_sentences(text: str) -> list[str]:
    """Split ``text`` into sentences.

    A boundary is one or more of ``.!?`` (plus closing quotes/brackets) followed by
    whitespace that contains a newline or is followed by an uppercase letter.
    Segments without any letter are dropped.
    """
    sentences = []
    start = 0
    for m in _BOUNDARY.finditer(text):
        end = m.end()
        rest = text[end:]
        ws = len(rest) - len(rest.lstrip())
        gap = rest[:ws]
        nxt = rest[ws:ws + 1]
        if "\n" not in gap and "\f" not in gap and nxt and not nxt.isupper():
            continue
        if _is_guarded(text, m.start(), start):
            continue
        sentences.append(text[start:end])
        start = end
    sentences.append(text[start:])
    out = []
    for s in sentences:
        s = " ".join(s.split())
        if any(ch.isalpha() for ch in s):
            out.append(s)
    return out


def tokenize_words(text: str) -> list[str]:
    """Lowercased runs of letters, keeping internal hyphens and apostrophes."""
    return [m.group().lower().replace("’", "'") for m in _WORD.finditer(text)]


def _count_part(part: str) -> int:
    n = len(_VOWEL_RUN.findall(part))
    if len(part) >= 2 and part.endswith("e") and part[-2] not in "aeiouy":
        # keep the final syllable of consonant + "le" ("table", "syllable")
        if not (part.endswith("le") and len(part) >= 3 and part[-3] not in "aeiouy"):
            n -= 1
    return max(n, 1)


def count_syllables(word: str) -> int:
    """Vowel-group syllable estimate; hyphenated words are summed per part.

    An apostrophe suffix ("don't", "author's") adds nothing.
    """
    head = word.lower().split("'")[0] or word.lower()
    parts = [p for p in head.split("-") if p]
    if not parts:
        return 1
    return sum(_count_part(p) for p in parts)


_SECTION_PATTERNS = {
    "introduction": r"introduction",
    "methodology": r"methods?|methodology|materials\s+and\s+methods",
    "results": r"results?|experimental\s+results",
}
# "1", "2.3.", "IV.", "A)" style numbering
_HEADING_PREFIX = r"^\s*(?:(?:\d+(?:\.\d+)*[.):]?|[ivxlc]+[.)]|[a-z][.)])\s+)?"
_SECTION_RES = {
    key: re.compile(_HEADING_PREFIX + r"(?:" + pat + r")\s*[.:]?\s*$", re.IGNORECASE)
    for key, pat in _SECTION_PATTERNS.items()
}


def _lines(text: str) -> list[str]:
    return re.split(r"\r\n|[\n\r\f\v]", text)


def detect_sections(text: str) -> tuple[bool, bool, bool]:
    """(has_introduction, has_methodology, has_results) from heading-like lines."""
    found = dict.fromkeys(_SECTION_RES, False)
    for line in _lines(text):
        if len(line) > 60 or not line.strip():
            continue
        for key, rx in _SECTION_RES.items():
            if not found[key] and rx.match(line):
                found[key] = True
    return found["introduction"], found["methodology"], found["results"]


_CAPTION_RES = {
    # roman numerals only in upper case so prose like "table civil ..." never matches
    "table": re.compile(r"^\s*(?i:table)\s+(\d+|[IVXLC]+)\b"),
    "figure": re.compile(r"^\s*(?i:figs?\.?|figure)\s*(\d+)\b"),
    "algorithm": re.compile(r"^\s*(?i:algorithm)\s+(\d+)\b"),
}


def count_captions(text: str, kind: str) -> int:
    """Number of distinct caption indices for ``kind`` in {table, figure, algorithm}."""
    try:
        rx = _CAPTION_RES[kind]
    except KeyError:
        raise ValueError(f"unknown caption kind {kind!r}") from None
    indices = set()
    for line in _lines(text):
        m = rx.match(line)
        if m:
            indices.add(m.group(1).lower())
    return len(indices)


_URL = r"(?:https?://|www\.[a-z0-9-]+\.|(?<![\w./-])doi\.org/)[^\s<>\"]*"
_URL_RE = re.compile(_URL, re.IGNORECASE)
# a URL running to end of line, followed by a non-blank continuation line
_WRAPPED_URL = re.compile(r"(" + _URL + r")[ \t]*\r?\n[ \t]*(?=[^\s])(?!" + _URL + r")", re.IGNORECASE)


def count_hyperlinks(text: str) -> int:
    joined = _WRAPPED_URL.sub(lambda m: m.group(1), text)
    return sum(1 for _ in _URL_RE.finditer(joined))


_EQ_TAG = re.compile(r"\(\s*(\d+)\s*\)\s*$")
_EQ_OPERATORS = frozenset("=<>+−/∑∫≈≤≥")


def count_equations(text: str) -> int:
    """Distinct trailing ``(N)`` tags on lines that also contain an operator."""
    numbers = set()
    for line in _lines(text):
        m = _EQ_TAG.search(line)
        if m and any(ch in _EQ_OPERATORS for ch in line[:m.start()]):
            numbers.add(int(m.group(1)))
    return len(numbers)


def page_count(record, text: str) -> int:
    if record is not None and record.n_pages is not None:
        return record.n_pages
    if not text:
        return 0
    return 1 + text.count("\f")


def build_text_stats(text: str) -> TextStats:
    sentences = segment_sentences(text)
    tokens = tokenize_words(text)
    return TextStats(
        sentences=tuple(sentences),
        tokens=tuple(tokens),
        syllables_per_token=tuple(count_syllables(t) for t in tokens),
        letter_count=sum(sum(ch.isalpha() for ch in t) for t in tokens),
        char_count=sum(not ch.isspace() for ch in text),
    )


def build_structural_features(record, text: str) -> StructuralFeatures:
    intro, method, results = detect_sections(text)
    return StructuralFeatures(
        has_introduction=intro,
        has_methodology=method,
        has_results=results,
        n_pages=page_count(record, text),
        n_images=count_captions(text, "figure"),
        n_tables=count_captions(text, "table"),
        n_algorithms=count_captions(text, "algorithm"),
        n_hyperlinks=count_hyperlinks(text),
        n_equations=count_equations(text),
    )
