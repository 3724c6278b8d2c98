"""Budget-constrained single-document summarizers.

Four systems share one word budget: LeadWords (opening words, truncated
mid-sentence), InfoRank (whole sentences ranked by predicted importance),
InfoFilter (lead order with unimportant sentences dropped), and RandomRank
(seeded random ranking). The classifier argument is any object exposing
prob(sentence) and label(sentence), such as pu.SentenceClassifier.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import Document, Sentence, word_count

WHOLE_SENTENCE = "whole-sentence"
TRUNCATE_WORDS = "truncate-words"

LEADWORDS = "leadwords"
INFORANK = "inforank"
INFOFILTER = "infofilter"
RANDOMRANK = "randomrank"
SYSTEMS = (LEADWORDS, INFORANK, INFOFILTER, RANDOMRANK)


@dataclass(frozen=True)
class SummaryBudget:
    max_words: int = 100
    mode: str = TRUNCATE_WORDS

    def __post_init__(self) -> None:
        if self.max_words < 1:
            raise ValueError("max_words must be >= 1")
        if self.mode not in (WHOLE_SENTENCE, TRUNCATE_WORDS):
            raise ValueError(f"unknown budget mode {self.mode!r}")


@dataclass(frozen=True)
class SummaryResult:
    doc_id: str
    system: str
    selected: tuple[int, ...]
    removed: tuple[int, ...]
    text: str
    word_total: int
    fallback: bool = False


def _sentence_words(doc: Document) -> list[int]:
    return [word_count([s]) for s in doc.sentences]


def _truncate_tokens(sentence: Sentence, n_words: int) -> str:
    kept: list[str] = []
    taken = 0
    for tok in sentence.tokens:
        kept.append(tok.surface)
        if tok.is_word:
            taken += 1
            if taken == n_words:
                break
    return " ".join(kept)


def lead_words(doc: Document, budget: SummaryBudget) -> SummaryResult:
    """Opening words of the document up to the budget.

    In truncate-words mode the boundary sentence is cut mid-sentence; in
    whole-sentence mode selection stops before the first sentence that would
    overflow.
    """
    if not doc.sentences:
        raise ValueError(f"document {doc.doc_id!r} is empty")
    counts = _sentence_words(doc)
    selected: list[int] = []
    pieces: list[str] = []
    total = 0
    for sent, wc in zip(doc.sentences, counts):
        remaining = budget.max_words - total
        if wc <= remaining:
            selected.append(sent.id)
            pieces.append(sent.text)
            total += wc
            if total == budget.max_words and budget.mode == TRUNCATE_WORDS:
                break
            continue
        if budget.mode == TRUNCATE_WORDS and remaining > 0:
            selected.append(sent.id)
            pieces.append(_truncate_tokens(sent, remaining))
            total += remaining
        break
    return SummaryResult(
        doc_id=doc.doc_id,
        system=LEADWORDS,
        selected=tuple(selected),
        removed=(),
        text=" ".join(pieces),
        word_total=total,
    )


def _greedy_fill(order: Sequence[int], counts: Sequence[int], max_words: int) -> tuple[list[int], int]:
    """Take sentences along `order` while they fit; oversized ones are skipped."""
    chosen: list[int] = []
    total = 0
    for i in order:
        if total + counts[i] <= max_words:
            chosen.append(i)
            total += counts[i]
    return sorted(chosen), total


def info_rank(doc: Document, classifier, budget: SummaryBudget) -> SummaryResult:
    """Whole sentences in decreasing probability order, greedily packed.

    Ties rank the earlier sentence first, and the summary is emitted in
    document order. Selection depends only on the probability ordering, so
    any strictly monotone rescaling of the classifier leaves it unchanged.
    """
    probs = [classifier.prob(s) for s in doc.sentences]
    order = sorted(range(len(doc.sentences)), key=lambda i: (-probs[i], i))
    counts = _sentence_words(doc)
    selected, total = _greedy_fill(order, counts, budget.max_words)
    return SummaryResult(
        doc_id=doc.doc_id,
        system=INFORANK,
        selected=tuple(selected),
        removed=(),
        text=" ".join(doc.sentences[i].text for i in selected),
        word_total=total,
    )


def info_filter(doc: Document, classifier, budget: SummaryBudget) -> SummaryResult:
    """Lead-order summary that skips sentences predicted unimportant.

    Kept sentences are appended whole until the next one would overflow the
    budget, then scanning stops. When every sentence is predicted
    unimportant the result falls back to lead_words (all ids recorded as
    removed, fallback flagged).
    """
    labels = [classifier.label(s) for s in doc.sentences]
    removed = [s.id for s, lab in zip(doc.sentences, labels) if lab == 0]
    kept = [s.id for s, lab in zip(doc.sentences, labels) if lab == 1]
    if not kept:
        lead = lead_words(doc, SummaryBudget(budget.max_words, TRUNCATE_WORDS))
        return SummaryResult(
            doc_id=doc.doc_id,
            system=INFOFILTER,
            selected=lead.selected,
            removed=tuple(removed),
            text=lead.text,
            word_total=lead.word_total,
            fallback=True,
        )
    counts = _sentence_words(doc)
    selected: list[int] = []
    total = 0
    for i in kept:
        if total + counts[i] > budget.max_words:
            break
        selected.append(i)
        total += counts[i]
    return SummaryResult(
        doc_id=doc.doc_id,
        system=INFOFILTER,
        selected=tuple(selected),
        removed=tuple(removed),
        text=" ".join(doc.sentences[i].text for i in selected),
        word_total=total,
    )


def random_rank(doc: Document, budget: SummaryBudget, seed) -> SummaryResult:
    """Seeded uniform ranking followed by the same greedy fill as info_rank."""
    rng = np.random.default_rng(seed)
    order = [int(i) for i in rng.permutation(len(doc.sentences))]
    counts = _sentence_words(doc)
    selected, total = _greedy_fill(order, counts, budget.max_words)
    return SummaryResult(
        doc_id=doc.doc_id,
        system=RANDOMRANK,
        selected=tuple(selected),
        removed=(),
        text=" ".join(doc.sentences[i].text for i in selected),
        word_total=total,
    )


def summary_to_dict(result: SummaryResult) -> dict:
    return {
        "doc_id": result.doc_id,
        "system": result.system,
        "selected": list(result.selected),
        "removed": list(result.removed),
        "text": result.text,
        "word_total": result.word_total,
        "fallback": result.fallback,
    }


def summaries_to_jsonl(results: Iterable[SummaryResult]) -> str:
    lines = [
        json.dumps(summary_to_dict(r), ensure_ascii=False, sort_keys=True) for r in results
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def summaries_from_jsonl(text: str) -> list[SummaryResult]:
    out = []
    for line in text.splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        out.append(
            SummaryResult(
                doc_id=rec["doc_id"],
                system=rec["system"],
                selected=tuple(rec["selected"]),
                removed=tuple(rec["removed"]),
                text=rec["text"],
                word_total=rec["word_total"],
                fallback=rec.get("fallback", False),
            )
        )
    return out


def write_summaries(results: Iterable[SummaryResult], path: str | Path) -> None:
    Path(path).write_text(summaries_to_jsonl(results), encoding="utf-8")


def read_summaries(path: str | Path) -> list[SummaryResult]:
    return summaries_from_jsonl(Path(path).read_text(encoding="utf-8"))
