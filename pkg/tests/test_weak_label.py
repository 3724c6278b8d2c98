import pytest
from hypothesis import given, strategies as st

from infosum.corpus import IdfTable, build_document, make_sentence
from infosum.weak_label import (
    EXCLUDED,
    POSITIVE,
    UNLABELED,
    LabelConfig,
    WeakLabel,
    align_score,
    best_alignment,
    label_by_alignment,
    label_by_extract,
    label_counts,
    labels_from_jsonl,
    labels_to_jsonl,
    sample_unlabeled,
)

FLAT_IDF = IdfTable(n_docs=0, weights={})


def flat_idf(words, value=2.0):
    return IdfTable(n_docs=10, weights={w: value for w in words})


class TestAlignScore:
    def test_disjoint(self):
        idf = flat_idf(["a", "b", "c", "d"])
        a = make_sentence(0, "a b")
        b = make_sentence(0, "c d")
        assert align_score(a, b, idf) == 0.0

    def test_identical_is_sum_of_types(self):
        idf = flat_idf(["iran", "nuclear", "talks"], 2.0)
        s = make_sentence(0, "iran nuclear talks nuclear")
        assert align_score(s, s, idf) == pytest.approx(6.0)

    def test_shared_types_weighted(self):
        idf = flat_idf(["iran", "nuclear", "talks", "resume"], 2.0)
        src = make_sentence(0, "iran nuclear talks")
        tgt = make_sentence(0, "nuclear talks resume")
        assert align_score(src, tgt, idf) == pytest.approx(4.0)

    def test_punctuation_excluded(self):
        idf = flat_idf(["a"], 5.0)
        assert align_score(make_sentence(0, "a !"), make_sentence(0, "a ?"), idf) == 5.0

    @given(st.lists(st.sampled_from("abcdef"), max_size=8), st.lists(st.sampled_from("abcdef"), max_size=8))
    def test_symmetry(self, xs, ys):
        idf = flat_idf("abcdef", 1.5)
        a = make_sentence(0, " ".join(xs))
        b = make_sentence(0, " ".join(ys))
        assert align_score(a, b, idf) == align_score(b, a, idf)

    @given(st.lists(st.sampled_from("abcde"), max_size=6))
    def test_adding_shared_word_never_decreases(self, xs):
        idf = flat_idf("abcdef", 1.5)
        a = make_sentence(0, " ".join(xs))
        b = make_sentence(0, " ".join(xs + ["f"]))
        shared = make_sentence(0, " ".join(xs + ["f"]))
        assert align_score(b, shared, idf) >= align_score(a, shared, idf)


class TestBestAlignment:
    def test_single_sentence_summary(self):
        idf = flat_idf(["a"], 1.0)
        summary = [make_sentence(0, "a")]
        assert best_alignment(make_sentence(0, "a"), summary, idf) == (0, 1.0)

    def test_argmax(self):
        idf = flat_idf(["a", "b", "c"], 1.0)
        src = make_sentence(0, "a b c")
        summary = [
            make_sentence(0, "a x"),
            make_sentence(1, "a b c"),
            make_sentence(2, "z"),
        ]
        sid, score = best_alignment(src, summary, idf)
        assert (sid, score) == (1, 3.0)

    def test_tie_keeps_lowest_id(self):
        idf = flat_idf(["a"], 1.0)
        src = make_sentence(0, "a")
        summary = [make_sentence(0, "a"), make_sentence(1, "a")]
        assert best_alignment(src, summary, idf)[0] == 0

    def test_empty_summary(self):
        with pytest.raises(ValueError):
            best_alignment(make_sentence(0, "a"), [], FLAT_IDF)


class TestLabelByAlignment:
    def doc(self):
        return build_document("d", "", ["w1 w2", "w3", "w4"], ["s1"])

    def test_all_zero_scores_all_unlabeled(self):
        doc = build_document("d", "", ["a b", "c d"], ["z y"])
        labels = label_by_alignment(doc, LabelConfig(), flat_idf("abcdzy"))
        assert [l.flag for l in labels] == [UNLABELED, UNLABELED]

    def test_threshold_bands(self):
        # scores 15, 12, 8 against defaults (t_pos=14, t_unl=10)
        doc = build_document(
            "d",
            "",
            ["p1 p2 p3", "m1 m2 m3", "u1 u2"],
            ["p1 p2 p3 m1 m2 m3 u1 u2"],
        )
        idf = IdfTable(
            n_docs=10,
            weights={"p1": 5.0, "p2": 5.0, "p3": 5.0, "m1": 4.0, "m2": 4.0, "m3": 4.0, "u1": 4.0, "u2": 4.0},
        )
        labels = label_by_alignment(doc, LabelConfig(), idf)
        assert [l.flag for l in labels] == [POSITIVE, EXCLUDED, UNLABELED]
        assert [l.align_score for l in labels] == [15.0, 12.0, 8.0]

    def test_score_exactly_t_pos_not_positive(self):
        doc = build_document("d", "", ["a b"], ["a b"])
        idf = IdfTable(n_docs=10, weights={"a": 7.0, "b": 7.0})
        (label,) = label_by_alignment(doc, LabelConfig(), idf)
        assert label.flag == EXCLUDED

    def test_missing_summary(self):
        doc = build_document("d", "", ["a"])
        with pytest.raises(ValueError, match="summary"):
            label_by_alignment(doc, LabelConfig(), FLAT_IDF)

    def test_partition_covers_all_sentences(self):
        doc = build_document("d", "", ["a", "b", "c d e f g h i"], ["c d e f g h i"])
        labels = label_by_alignment(doc, LabelConfig(), flat_idf("abcdefghi", 2.5))
        counts = label_counts(labels)
        assert sum(counts.values()) == 3

    def test_invalid_config_rejected(self):
        with pytest.raises(ValueError):
            LabelConfig(t_pos=10.0, t_unl=10.0)


class TestLabelByExtract:
    def test_empty_extracts(self):
        doc = build_document("d", "", ["a", "b"])
        labels = label_by_extract(doc, [])
        assert [l.flag for l in labels] == [UNLABELED, UNLABELED]

    def test_membership_in_any_extract(self):
        doc = build_document("d", "", ["a", "b", "c"])
        labels = label_by_extract(doc, [[0], [], [], [0]])
        assert [l.flag for l in labels] == [POSITIVE, UNLABELED, UNLABELED]

    def test_all_extracted(self):
        doc = build_document("d", "", ["a", "b"])
        labels = label_by_extract(doc, [[0, 1]])
        assert [l.flag for l in labels] == [POSITIVE, POSITIVE]

    def test_out_of_range_id(self):
        doc = build_document("d", "", ["a"])
        with pytest.raises(ValueError, match="out of range"):
            label_by_extract(doc, [[3]])

    def test_never_excluded(self):
        doc = build_document("d", "", ["a", "b", "c"])
        labels = label_by_extract(doc, [[1]])
        assert all(l.flag in (POSITIVE, UNLABELED) for l in labels)


def make_labels(n_pos, n_unl, n_exc=0):
    labels = []
    i = 0
    for _ in range(n_pos):
        labels.append(WeakLabel("d", i, POSITIVE))
        i += 1
    for _ in range(n_unl):
        labels.append(WeakLabel("d", i, UNLABELED))
        i += 1
    for _ in range(n_exc):
        labels.append(WeakLabel("d", i, EXCLUDED))
        i += 1
    return labels


class TestSampleUnlabeled:
    def test_paper_proportion(self):
        # 1833 positives at ratio 1.2 keeps 2200 unlabeled
        labels = make_labels(1833, 3000)
        kept = sample_unlabeled(labels, LabelConfig(seed=3))
        counts = label_counts(kept)
        assert counts[POSITIVE] == 1833
        assert counts[UNLABELED] == 2200

    def test_small_pool_kept_entirely(self):
        labels = make_labels(10, 5)
        kept = sample_unlabeled(labels, LabelConfig(seed=0))
        assert label_counts(kept)[UNLABELED] == 5

    def test_deterministic(self):
        labels = make_labels(50, 500)
        a = sample_unlabeled(labels, LabelConfig(seed=11))
        b = sample_unlabeled(labels, LabelConfig(seed=11))
        assert a == b

    def test_different_seeds_differ(self):
        labels = make_labels(50, 500)
        a = sample_unlabeled(labels, LabelConfig(seed=1))
        b = sample_unlabeled(labels, LabelConfig(seed=2))
        assert a != b

    def test_never_drops_positive_and_drops_excluded(self):
        labels = make_labels(20, 100, 30)
        kept = sample_unlabeled(labels, LabelConfig(seed=5))
        counts = label_counts(kept)
        assert counts[POSITIVE] == 20
        assert counts[EXCLUDED] == 0

    def test_preserves_input_order(self):
        labels = make_labels(5, 50)
        kept = sample_unlabeled(labels, LabelConfig(seed=9))
        ids = [l.sentence_id for l in kept]
        assert ids == sorted(ids)


class TestLabelSerialization:
    def test_round_trip(self):
        labels = [
            WeakLabel("d", 0, POSITIVE, 15.5),
            WeakLabel("d", 1, UNLABELED, None),
            WeakLabel("e", 0, EXCLUDED, 12.0),
        ]
        assert labels_from_jsonl(labels_to_jsonl(labels)) == labels
