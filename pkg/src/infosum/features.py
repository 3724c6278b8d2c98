"""Sentence feature extraction over fixed layouts.

Three feature families: per-attribute score-interval fractions from scored
lexicons, category histograms from category lexicons, and six general
sentence attributes. A FeatureLayout freezes block order, widths and lexicon
content hashes so that a trained model can detect mismatched lexicons.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .corpus import Corpus, Sentence
from .lexicons import CategoryLexicon, ScoredLexicon, bin_index

GENERAL_WIDTH = 6
GENERAL_FEATURE_NAMES = (
    "token_count",
    "punct_count",
    "has_exclamation",
    "has_question",
    "has_colon",
    "has_double_quote",
)
DOUBLE_QUOTE_MARKS = ('"', "“", "”")
LAYOUT_VERSION = 1

MODE_DICTIONARY = "dictionary"
MODE_DICTIONARY_NO_GENERAL = "dictionary-no-general"
MODE_BOW = "bow"
MODE_RAW = "raw"


class EmptySentenceError(ValueError):
    """Raised when a lexicon feature is requested for a sentence with no words."""


class LayoutMismatchError(ValueError):
    """Feature layout does not match the supplied lexicons or model."""


def interval_fractions(
    sentence: Sentence, lex: ScoredLexicon, attribute: str
) -> np.ndarray:
    """Fraction of sentence words whose score falls in each interval.

    Words absent from the lexicon (or lacking the attribute) contribute to no
    bin, so the vector sums to the in-lexicon word fraction.
    """
    if attribute not in lex.attributes:
        raise ValueError(f"unknown attribute {attribute!r} for lexicon {lex.name!r}")
    words = [t.lower for t in sentence.tokens if t.is_word]
    if not words:
        raise EmptySentenceError("sentence has no word tokens")
    out = np.zeros(lex.bins)
    for word in words:
        entry = lex.entries.get(word)
        if entry is None or attribute not in entry:
            continue
        out[bin_index(entry[attribute], lex.ranges[attribute], lex.bins)] += 1.0
    return out / len(words)


def category_histogram(sentence: Sentence, lex: CategoryLexicon) -> np.ndarray:
    """Per-category fraction of sentence words; multi-category words count in each."""
    words = [t.lower for t in sentence.tokens if t.is_word]
    if not words:
        raise EmptySentenceError("sentence has no word tokens")
    out = np.zeros(len(lex.categories))
    for word in words:
        for cat in lex.lookup(word):
            out[cat] += 1.0
    return out / len(words)


def general_features(sentence: Sentence) -> np.ndarray:
    """Token count, punctuation count, and four contains-mark flags."""
    text = sentence.text
    double_quote = any(m in text for m in DOUBLE_QUOTE_MARKS) or "''" in text
    return np.array(
        [
            float(len(sentence.tokens)),
            float(sum(1 for t in sentence.tokens if t.is_punct)),
            1.0 if "!" in text else 0.0,
            1.0 if "?" in text else 0.0,
            1.0 if ":" in text else 0.0,
            1.0 if double_quote else 0.0,
        ]
    )


@dataclass(frozen=True)
class Block:
    name: str
    offset: int
    width: int


@dataclass(frozen=True)
class ScoredSpec:
    name: str
    attributes: tuple[str, ...]
    bins: int
    content_hash: str


@dataclass(frozen=True)
class CategorySpec:
    name: str
    categories: tuple[str, ...]
    content_hash: str


@dataclass(frozen=True)
class FeatureLayout:
    mode: str
    blocks: tuple[Block, ...]
    total_dim: int
    scored: tuple[ScoredSpec, ...] = ()
    category: tuple[CategorySpec, ...] = ()
    general_width: int = 0
    vocab: tuple[str, ...] | None = None


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    layout_hash: str


def dictionary_layout(
    scored_lexicons: Sequence[ScoredLexicon],
    category_lexicons: Sequence[CategoryLexicon],
    include_general: bool = True,
) -> FeatureLayout:
    """Blocks in order: scored lexicon attributes, category lexicons, general."""
    names = [lex.name for lex in scored_lexicons] + [lex.name for lex in category_lexicons]
    if len(set(names)) != len(names):
        raise ValueError("lexicon names must be unique")
    if "general" in names or "bow" in names:
        raise ValueError("lexicon names 'general' and 'bow' are reserved")
    blocks: list[Block] = []
    offset = 0
    scored_specs = []
    for lex in scored_lexicons:
        for attr in lex.attributes:
            blocks.append(Block(f"{lex.name}:{attr}", offset, lex.bins))
            offset += lex.bins
        scored_specs.append(
            ScoredSpec(lex.name, lex.attributes, lex.bins, lex.content_hash())
        )
    category_specs = []
    for lex in category_lexicons:
        blocks.append(Block(lex.name, offset, len(lex.categories)))
        offset += len(lex.categories)
        category_specs.append(CategorySpec(lex.name, lex.categories, lex.content_hash()))
    general_width = 0
    if include_general:
        blocks.append(Block("general", offset, GENERAL_WIDTH))
        general_width = GENERAL_WIDTH
        offset += GENERAL_WIDTH
    return FeatureLayout(
        mode=MODE_DICTIONARY if include_general else MODE_DICTIONARY_NO_GENERAL,
        blocks=tuple(blocks),
        total_dim=offset,
        scored=tuple(scored_specs),
        category=tuple(category_specs),
        general_width=general_width,
    )


def bow_layout(vocab: Sequence[str]) -> FeatureLayout:
    if len(set(vocab)) != len(vocab):
        raise ValueError("bow vocabulary contains duplicates")
    return FeatureLayout(
        mode=MODE_BOW,
        blocks=(Block("bow", 0, len(vocab)),),
        total_dim=len(vocab),
        vocab=tuple(vocab),
    )


def raw_layout(dim: int, name: str = "raw") -> FeatureLayout:
    """Opaque layout for feature vectors produced outside this module."""
    if dim < 1:
        raise ValueError("raw layout needs dim >= 1")
    return FeatureLayout(mode=MODE_RAW, blocks=(Block(name, 0, dim),), total_dim=dim)


def bow_vocabulary(corpus: Corpus, min_df: int = 2) -> tuple[str, ...]:
    """Alphabetical word types whose document frequency is at least min_df."""
    df: Counter[str] = Counter()
    for doc in corpus.documents:
        types: set[str] = set()
        for sent in doc.sentences:
            types.update(t.lower for t in sent.tokens if t.is_word)
        df.update(types)
    return tuple(sorted(t for t, c in df.items() if c >= min_df))


def layout_to_json(layout: FeatureLayout) -> dict:
    return {
        "version": LAYOUT_VERSION,
        "mode": layout.mode,
        "blocks": [
            {"name": b.name, "offset": b.offset, "width": b.width} for b in layout.blocks
        ],
        "total_dim": layout.total_dim,
        "scored": [
            {
                "name": s.name,
                "attributes": list(s.attributes),
                "bins": s.bins,
                "content_hash": s.content_hash,
            }
            for s in layout.scored
        ],
        "category": [
            {
                "name": c.name,
                "categories": list(c.categories),
                "content_hash": c.content_hash,
            }
            for c in layout.category
        ],
        "general_width": layout.general_width,
        "vocab": list(layout.vocab) if layout.vocab is not None else None,
    }


def layout_from_json(obj: dict) -> FeatureLayout:
    if obj.get("version") != LAYOUT_VERSION:
        raise LayoutMismatchError(f"unsupported layout version {obj.get('version')!r}")
    return FeatureLayout(
        mode=obj["mode"],
        blocks=tuple(Block(b["name"], b["offset"], b["width"]) for b in obj["blocks"]),
        total_dim=obj["total_dim"],
        scored=tuple(
            ScoredSpec(s["name"], tuple(s["attributes"]), s["bins"], s["content_hash"])
            for s in obj["scored"]
        ),
        category=tuple(
            CategorySpec(c["name"], tuple(c["categories"]), c["content_hash"])
            for c in obj["category"]
        ),
        general_width=obj["general_width"],
        vocab=tuple(obj["vocab"]) if obj.get("vocab") is not None else None,
    )


def layout_hash(layout: FeatureLayout) -> str:
    blob = json.dumps(layout_to_json(layout), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


class FeatureExtractor:
    """Maps sentences to fixed-layout vectors, validating lexicons against the layout."""

    def __init__(
        self,
        layout: FeatureLayout,
        scored_lexicons: Sequence[ScoredLexicon] = (),
        category_lexicons: Sequence[CategoryLexicon] = (),
    ):
        if layout.mode == MODE_RAW:
            raise LayoutMismatchError("raw layouts are not extractable from sentences")
        self.layout = layout
        self.layout_hash = layout_hash(layout)
        self._scored: list[ScoredLexicon] = []
        self._category: list[CategoryLexicon] = []
        self._vocab_index: dict[str, int] = {}
        if layout.mode == MODE_BOW:
            assert layout.vocab is not None
            self._vocab_index = {w: i for i, w in enumerate(layout.vocab)}
            return
        by_name_scored = {lex.name: lex for lex in scored_lexicons}
        for spec in layout.scored:
            lex = by_name_scored.get(spec.name)
            if (
                lex is None
                or lex.attributes != spec.attributes
                or lex.bins != spec.bins
                or lex.content_hash() != spec.content_hash
            ):
                raise LayoutMismatchError(
                    f"scored lexicon {spec.name!r} missing or does not match layout"
                )
            self._scored.append(lex)
        by_name_cat = {lex.name: lex for lex in category_lexicons}
        for spec in layout.category:
            lex = by_name_cat.get(spec.name)
            if (
                lex is None
                or lex.categories != spec.categories
                or lex.content_hash() != spec.content_hash
            ):
                raise LayoutMismatchError(
                    f"category lexicon {spec.name!r} missing or does not match layout"
                )
            self._category.append(lex)

    def _values(self, sentence: Sentence, zero_when_wordless: bool) -> np.ndarray:
        layout = self.layout
        out = np.zeros(layout.total_dim)
        if layout.mode == MODE_BOW:
            for t in sentence.tokens:
                if t.is_word:
                    idx = self._vocab_index.get(t.lower)
                    if idx is not None:
                        out[idx] += 1.0
            return out
        wordless = not any(t.is_word for t in sentence.tokens)
        if wordless and not zero_when_wordless:
            raise EmptySentenceError("sentence has no word tokens")
        pos = 0
        for lex in self._scored:
            for attr in lex.attributes:
                if not wordless:
                    out[pos : pos + lex.bins] = interval_fractions(sentence, lex, attr)
                pos += lex.bins
        for lex in self._category:
            width = len(lex.categories)
            if not wordless:
                out[pos : pos + width] = category_histogram(sentence, lex)
            pos += width
        if layout.general_width:
            out[pos : pos + GENERAL_WIDTH] = general_features(sentence)
        return out

    def extract(self, sentence: Sentence) -> FeatureVector:
        return FeatureVector(self._values(sentence, zero_when_wordless=False), self.layout_hash)

    def extract_or_zero(self, sentence: Sentence) -> FeatureVector:
        """Like extract, but a wordless sentence gets zero lexicon blocks.

        The general block is still computed; this keeps batch pipelines total
        over real corpora where punctuation-only sentences occur.
        """
        return FeatureVector(self._values(sentence, zero_when_wordless=True), self.layout_hash)

    def matrix(self, sentences: Iterable[Sentence]) -> np.ndarray:
        rows = [self._values(s, zero_when_wordless=True) for s in sentences]
        if not rows:
            return np.zeros((0, self.layout.total_dim))
        return np.vstack(rows)


def extract_features(
    sentence: Sentence,
    layout: FeatureLayout,
    scored_lexicons: Sequence[ScoredLexicon] = (),
    category_lexicons: Sequence[CategoryLexicon] = (),
) -> FeatureVector:
    """One-shot extraction; prefer a FeatureExtractor for batch work."""
    return FeatureExtractor(layout, scored_lexicons, category_lexicons).extract(sentence)
