"""Linguistic features: lexical statistics, Yule's I, readability and sentiment."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .textstruct import TextStats, build_text_stats, tokenize_words

# Yule's I is unbounded when every token is unique.
INFINITE_DIVERSITY = math.inf

READABILITY_INDICES = (
    "flesch_reading_ease",
    "smog",
    "coleman_liau",
    "ari",
    "dale_chall",
    "linsear_write",
    "gunning_fog",
)


class FeatureError(ValueError):
    pass


@lru_cache(maxsize=None)
def load_wordlist(name: str) -> frozenset[str]:
    text = resources.files("reprosignals").joinpath("data", name).read_text(encoding="utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


@dataclass(frozen=True)
class ReadabilityScores:
    flesch_reading_ease: float
    smog: float
    coleman_liau: float
    ari: float
    dale_chall: float
    linsear_write: float
    gunning_fog: float

    @property
    def mean_readability(self) -> float:
        return math.fsum(getattr(self, name) for name in READABILITY_INDICES) / 7


@dataclass(frozen=True)
class LinguisticFeatures:
    word_count: int
    avg_word_length: float
    avg_sentence_length: float
    n_words_gt_avg_len: int
    syllable_count: int
    n_complex_words: int
    yules_i: float
    mean_readability: float
    article_sentiment: int
    title_sentiment: int


def _letters(token: str) -> int:
    return sum(ch.isalpha() for ch in token)


def lexical_stats(stats: TextStats):
    """(word_count, avg_word_length, avg_sentence_length, n_words_gt_avg_len, syllable_count)."""
    if not stats.tokens:
        raise FeatureError("no words")
    n = stats.word_count
    avg_len = stats.letter_count / n
    avg_sent = n / stats.sentence_count if stats.sentence_count else float(n)
    longer = sum(1 for t in stats.tokens if _letters(t) > avg_len)
    return n, avg_len, avg_sent, longer, stats.syllable_count


def complex_word_count(stats: TextStats) -> int:
    return sum(1 for s in stats.syllables_per_token if s >= 3)


def yules_i(tokens) -> float:
    """Yule's I = M1**2 / (M2 - M1); ``INFINITE_DIVERSITY`` if all tokens are unique.

    M1 is the vocabulary size and M2 the sum of m**2 * V(m) over frequency classes.
    """
    if not tokens:
        raise FeatureError("yules_i needs at least one token")
    freqs = Counter(tokens)
    spectrum = Counter(freqs.values())
    m1 = len(freqs)
    m2 = sum(m * m * v for m, v in spectrum.items())
    if m2 == m1:
        return INFINITE_DIVERSITY
    return m1 * m1 / (m2 - m1)


def _linsear_write(stats: TextStats) -> float:
    window = stats.syllables_per_token[:100]
    hard = sum(1 for s in window if s >= 3)
    easy = len(window) - hard
    # sentences that start inside the window
    n_sent = 0
    seen = 0
    for sent in stats.sentences:
        if seen >= len(window):
            break
        n_sent += 1
        seen += len(tokenize_words(sent))
    n_sent = max(n_sent, 1)
    raw = (easy + 3 * hard) / n_sent
    return raw / 2 if raw > 20 else raw / 2 - 1


def readability(stats: TextStats) -> ReadabilityScores:
    W = stats.word_count
    S = stats.sentence_count
    if W == 0 or S == 0:
        raise FeatureError("readability needs at least one sentence and one word")
    Y = stats.syllable_count
    C = complex_word_count(stats)
    L = stats.letter_count

    easy_words = load_wordlist("easy_words.txt")
    difficult = sum(1 for t in stats.tokens if t not in easy_words)
    pct_difficult = 100 * difficult / W
    dale_chall = 0.1579 * pct_difficult + 0.0496 * (W / S)
    if pct_difficult > 5:
        dale_chall += 3.6365

    return ReadabilityScores(
        flesch_reading_ease=206.835 - 1.015 * (W / S) - 84.6 * (Y / W),
        smog=1.0430 * math.sqrt(C * 30 / S) + 3.1291,
        coleman_liau=0.0588 * (100 * L / W) - 0.296 * (100 * S / W) - 15.8,
        ari=4.71 * (L / W) + 0.5 * (W / S) - 21.43,
        dale_chall=dale_chall,
        linsear_write=_linsear_write(stats),
        gunning_fog=0.4 * ((W / S) + 100 * (C / W)),
    )


def _polarity(tokens, positive, negative) -> tuple[float, int]:
    p = n = 0
    for tok in tokens:
        if tok in positive:
            p += 1
        elif tok in negative:
            n += 1
    score = (p - n) / (p + n) if p + n else 0.0
    return score, int(score >= 0)


def sentiment(text: str, positive=None, negative=None) -> tuple[float, int]:
    """Lexicon polarity (P - N) / (P + N) and its label (1 iff score >= 0)."""
    if positive is None:
        positive = load_wordlist("sentiment_pos.txt")
    if negative is None:
        negative = load_wordlist("sentiment_neg.txt")
    return _polarity(tokenize_words(text), positive, negative)


def build_linguistic_features(stats: TextStats, title: str) -> LinguisticFeatures:
    word_count, avg_len, avg_sent, longer, syllables = lexical_stats(stats)
    _, article_label = _polarity(
        stats.tokens, load_wordlist("sentiment_pos.txt"), load_wordlist("sentiment_neg.txt")
    )
    _, title_label = sentiment(title)
    return LinguisticFeatures(
        word_count=word_count,
        avg_word_length=avg_len,
        avg_sentence_length=avg_sent,
        n_words_gt_avg_len=longer,
        syllable_count=syllables,
        n_complex_words=complex_word_count(stats),
        yules_i=yules_i(stats.tokens),
        mean_readability=readability(stats).mean_readability,
        article_sentiment=article_label,
        title_sentiment=title_label,
    )


def linguistic_features_from_text(text: str, title: str) -> LinguisticFeatures:
    return build_linguistic_features(build_text_stats(text), title)
