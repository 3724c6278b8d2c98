"""Evaluation machinery: ROUGE-N, classification scores, paired tests,
rank correlation, inter-annotator agreement, and vote aggregation.

ROUGE here is the declared deterministic variant: lowercased word tokens,
punctuation stripped, clipped n-gram counts within sentences, no stemming.
Tail probabilities come from the platform erfc; tests check them against a
numerical integration oracle.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .corpus import Sentence


@dataclass(frozen=True)
class RougeScore:
    n: int
    recall: float
    precision: float
    f1: float
    overlap_count: int
    ref_count: int
    cand_count: int


@dataclass(frozen=True)
class ClassificationReport:
    tp: int
    fp: int
    fn: int
    tn: int
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    method: str


def _ngram_counts(sentences: Sequence[Sentence], n: int) -> tuple[Counter, int]:
    counts: Counter = Counter()
    total = 0
    for sent in sentences:
        words = [t.lower for t in sent.tokens if t.is_word]
        for i in range(len(words) - n + 1):
            counts[tuple(words[i : i + n])] += 1
            total += 1
    return counts, total


def rouge_n(
    reference: Sequence[Sentence], candidate: Sequence[Sentence], n: int
) -> RougeScore:
    """Clipped n-gram overlap; n-grams do not cross sentence boundaries."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ref_counts, ref_total = _ngram_counts(reference, n)
    cand_counts, cand_total = _ngram_counts(candidate, n)
    overlap = sum(min(c, cand_counts[g]) for g, c in ref_counts.items() if g in cand_counts)
    recall = overlap / ref_total if ref_total else 0.0
    precision = overlap / cand_total if cand_total else 0.0
    f1 = 2.0 * precision * recall / (precision + recall) if precision + recall else 0.0
    return RougeScore(
        n=n,
        recall=recall,
        precision=precision,
        f1=f1,
        overlap_count=overlap,
        ref_count=ref_total,
        cand_count=cand_total,
    )


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def prf(tp: int, fp: int, fn: int, tn: int) -> ClassificationReport:
    """Precision/recall/F1 with the 0/0 -> 0 convention."""
    if min(tp, fp, fn, tn) < 0:
        raise ValueError("counts must be non-negative")
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    return ClassificationReport(
        tp=tp, fp=fp, fn=fn, tn=tn, precision=precision, recall=recall,
        f1=f1_score(precision, recall),
    )


def normal_sf(z: float) -> float:
    """Upper tail of the standard normal."""
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def chi2_sf_1df(x: float) -> float:
    """Upper tail of chi-square with one degree of freedom."""
    if x < 0:
        raise ValueError("chi-square statistic must be non-negative")
    return math.erfc(math.sqrt(x / 2.0))


def mcnemar(
    pred_a: Sequence[int],
    pred_b: Sequence[int],
    truth: Sequence[int],
    exact: bool = False,
) -> TestResult:
    """Paired test on discordant correctness counts between two classifiers.

    Default is the continuity-corrected chi-square form
    (|b - c| - 1)^2 / (b + c); `exact` switches to the two-sided binomial
    sign test, preferable when b + c is small.
    """
    if not len(pred_a) == len(pred_b) == len(truth) or len(truth) == 0:
        raise ValueError("predictions and truth must share a positive length")
    b = sum(1 for pa, pb, t in zip(pred_a, pred_b, truth) if pa == t and pb != t)
    c = sum(1 for pa, pb, t in zip(pred_a, pred_b, truth) if pa != t and pb == t)
    if b + c == 0:
        return TestResult(0.0, 1.0, "mcnemar-exact" if exact else "mcnemar-chi2")
    if exact:
        n = b + c
        k = max(b, c)
        tail = sum(math.comb(n, i) for i in range(k, n + 1)) / 2.0**n
        return TestResult(float(min(b, c)), min(1.0, 2.0 * tail), "mcnemar-exact")
    stat = (abs(b - c) - 1.0) ** 2 / (b + c)
    return TestResult(stat, chi2_sf_1df(stat), "mcnemar-chi2")


def _average_ranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=float)
    sorted_vals = values[order]
    i = 0
    n = len(values)
    while i < n:
        j = i
        while j + 1 < n and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _wilcoxon_exact_p(ranks: np.ndarray, w: float) -> float:
    # Ranks are multiples of 1/2; doubling makes the sign-flip distribution
    # an integer-valued subset-sum, counted exactly by dynamic programming.
    doubled = [int(round(2.0 * r)) for r in ranks]
    total = sum(doubled)
    ways = [0] * (total + 1)
    ways[0] = 1
    for r in doubled:
        for s in range(total, r - 1, -1):
            ways[s] += ways[s - r]
    w2 = int(round(2.0 * w))
    cdf = sum(ways[s] for s in range(0, min(w2, total) + 1))
    return min(1.0, 2.0 * cdf / 2 ** len(doubled))


def wilcoxon_signed_rank(
    x: Sequence[float], y: Sequence[float], mode: str = "auto"
) -> TestResult:
    """Two-sided Wilcoxon signed-rank test on paired samples.

    Zero differences are dropped; tied absolute differences get average
    ranks. The null distribution is enumerated exactly for n <= 25 (or when
    mode="exact"), otherwise a tie-corrected normal approximation with a
    0.5 continuity correction is used.
    """
    if mode not in ("auto", "exact", "normal"):
        raise ValueError(f"unknown mode {mode!r}")
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.shape != ya.shape or xa.ndim != 1:
        raise ValueError("x and y must be equal-length 1-d sequences")
    d = xa - ya
    d = d[d != 0]
    n = len(d)
    if n == 0:
        return TestResult(0.0, 1.0, "wilcoxon-exact")
    ranks = _average_ranks(np.abs(d))
    w_pos = float(ranks[d > 0].sum())
    w_neg = float(ranks[d < 0].sum())
    w = min(w_pos, w_neg)
    if mode == "exact" or (mode == "auto" and n <= 25):
        return TestResult(w, _wilcoxon_exact_p(ranks, w), "wilcoxon-exact")
    mu = n * (n + 1) / 4.0
    _, tie_counts = np.unique(np.abs(d), return_counts=True)
    var = n * (n + 1) * (2 * n + 1) / 24.0 - float(
        sum(t**3 - t for t in tie_counts)
    ) / 48.0
    if var <= 0:
        return TestResult(w, 1.0, "wilcoxon-normal")
    z = (w - mu + 0.5) / math.sqrt(var)
    return TestResult(w, min(1.0, 2.0 * normal_sf(-z)), "wilcoxon-normal")


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Tie-aware Spearman correlation: Pearson correlation of average ranks."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.shape != ya.shape or xa.ndim != 1 or len(xa) < 2:
        raise ValueError("x and y must be equal-length 1-d sequences of length >= 2")
    rx = _average_ranks(xa)
    ry = _average_ranks(ya)
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    sx = float(dx @ dx)
    sy = float(dy @ dy)
    if sx == 0.0 or sy == 0.0:
        raise ValueError("zero-variance input")
    return float(dx @ dy) / math.sqrt(sx * sy)


def cohen_kappa(a: Sequence[Hashable], b: Sequence[Hashable]) -> float:
    """Chance-corrected agreement (p_o - p_e) / (1 - p_e)."""
    if len(a) != len(b) or len(a) == 0:
        raise ValueError("annotations must share a positive length")
    n = len(a)
    p_o = sum(1 for x, y in zip(a, b) if x == y) / n
    freq_a = Counter(a)
    freq_b = Counter(b)
    if len(freq_a) == 1 and freq_a.keys() == freq_b.keys():
        # both annotators constant on the same label: chance agreement is 1
        if p_o == 1.0:
            return 1.0
        raise ValueError("degenerate annotations: chance agreement is 1")
    p_e = sum(freq_a[lab] * freq_b.get(lab, 0) for lab in freq_a) / (n * n)
    return (p_o - p_e) / (1.0 - p_e)


def majority_vote(votes: Sequence[Sequence[int]]) -> list[int]:
    """Per item, 1 iff strictly more than half of the (odd) votes are 1."""
    out = []
    for i, item in enumerate(votes):
        if len(item) == 0 or len(item) % 2 == 0:
            raise ValueError(f"item {i}: tie-possible vote set of size {len(item)}")
        if any(v not in (0, 1) for v in item):
            raise ValueError(f"item {i}: votes must be 0 or 1")
        out.append(1 if sum(item) * 2 > len(item) else 0)
    return out
