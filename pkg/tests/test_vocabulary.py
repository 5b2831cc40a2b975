import pytest

from cnloop.metrics.vocabulary import BUCKETS, vocabulary_expansion
from cnloop.records import Status, TargetLabel
from conftest import make_record, make_view


def test_hand_traced_author_and_reviewer_split():
    # history for the target holds {jews, peace}; the new pair generated
    # "hate wrong" and was post-edited to "hate is wrong"
    history = make_view(
        [
            make_record(
                "h1",
                version="V1",
                hs="jews",
                cn="peace",
                status=Status.UNTOUCHED,
                target=TargetLabel.JEWS,
            )
        ],
        name="V1",
    )
    current = make_view(
        [
            make_record(
                "c1",
                hs="hate",
                cn="wrong",
                status=Status.MODIFIED,
                target=TargetLabel.JEWS,
                hs_edited="hate",
                cn_edited="is wrong",
            )
        ]
    )
    result = vocabulary_expansion(current, [history])
    buckets = result.per_target[TargetLabel.JEWS]
    assert buckets["author_novel"] == pytest.approx(66.7, abs=0.05)
    assert buckets["reviewer_novel"] == pytest.approx(33.3, abs=0.05)
    assert buckets["author_same_target"] == 0.0
    assert buckets["author_other_target"] == 0.0
    assert buckets["reviewer_not_novel"] == 0.0


def test_buckets_partition_to_100_per_target():
    history = make_view(
        [
            make_record(
                "h1",
                version="V1",
                hs="old words here",
                cn="known answer text",
                target=TargetLabel.MUSLIMS,
            )
        ],
        name="V1",
    )
    current = make_view(
        [
            make_record(
                "c1",
                hs="old words again",
                cn="fresh reply",
                status=Status.MODIFIED,
                target=TargetLabel.MUSLIMS,
                hs_edited="old words again",
                cn_edited="fresh reply indeed known",
            ),
            make_record(
                "c2",
                hs="another claim",
                cn="another answer",
                target=TargetLabel.WOMEN,
            ),
        ]
    )
    result = vocabulary_expansion(current, [history])
    for target, buckets in result.per_target.items():
        assert sum(buckets.values()) == pytest.approx(100.0, abs=1e-9)
        assert set(buckets) == set(BUCKETS)


def test_cross_fertilization_goes_to_other_target():
    # "peace" has MUSLIMS history; when first generated for JEWS it lands in
    # the author other-target bucket
    history = make_view(
        [
            make_record(
                "h1",
                version="V1",
                hs="claim",
                cn="peace matters",
                target=TargetLabel.MUSLIMS,
            )
        ],
        name="V1",
    )
    current = make_view(
        [
            make_record(
                "c1",
                hs="peace",
                cn="peace",
                status=Status.UNTOUCHED,
                target=TargetLabel.JEWS,
            )
        ]
    )
    result = vocabulary_expansion(current, [history])
    assert result.per_target[TargetLabel.JEWS]["author_other_target"] == 100.0


def test_same_target_words_recognized():
    history = make_view(
        [make_record("h1", version="V1", hs="peace", cn="peace", target=TargetLabel.JEWS)],
        name="V1",
    )
    current = make_view(
        [make_record("c1", hs="peace", cn="peace", target=TargetLabel.JEWS)]
    )
    result = vocabulary_expansion(current, [history])
    assert result.per_target[TargetLabel.JEWS]["author_same_target"] == 100.0


def test_reviewer_not_novel_bucket():
    history = make_view(
        [make_record("h1", version="V1", hs="known", cn="known", target=TargetLabel.POC)],
        name="V1",
    )
    # reviewer inserts "known" (from history) into a pair that generated "fresh"
    current = make_view(
        [
            make_record(
                "c1",
                hs="fresh",
                cn="fresh",
                status=Status.MODIFIED,
                target=TargetLabel.POC,
                hs_edited="fresh",
                cn_edited="fresh known",
            )
        ]
    )
    buckets = vocabulary_expansion(current, [history]).per_target[TargetLabel.POC]
    assert buckets["author_novel"] == pytest.approx(50.0)
    assert buckets["reviewer_not_novel"] == pytest.approx(50.0)


def test_macro_excludes_targets_without_pairs():
    history = make_view(
        [make_record("h1", version="V1", hs="a", cn="b", target=TargetLabel.JEWS)],
        name="V1",
    )
    current = make_view(
        [
            make_record("c1", hs="x y", cn="z", target=TargetLabel.JEWS),
            make_record("c2", hs="q r", cn="s", target=TargetLabel.WOMEN),
        ]
    )
    result = vocabulary_expansion(current, [history])
    assert set(result.per_target) == {TargetLabel.JEWS, TargetLabel.WOMEN}
    # macro over the two present targets only
    expected = (
        result.per_target[TargetLabel.JEWS]["author_novel"]
        + result.per_target[TargetLabel.WOMEN]["author_novel"]
    ) / 2
    assert result.macro_avg["author_novel"] == pytest.approx(expected)


def test_punctuation_excluded_from_words():
    history = make_view(
        [make_record("h1", version="V1", hs="a", cn="b", target=TargetLabel.JEWS)],
        name="V1",
    )
    current = make_view(
        [make_record("c1", hs="word !", cn="word .", target=TargetLabel.JEWS)]
    )
    buckets = vocabulary_expansion(current, [history]).per_target[TargetLabel.JEWS]
    # only "word" counts; "!" and "." are punctuation tokens
    assert buckets["author_novel"] == 100.0
    assert sum(buckets.values()) == pytest.approx(100.0)
