import pytest

from cnloop.metrics.repetition import repetition_rate
from oracles import repetition_rate_oracle


def test_all_distinct_tokens_zero():
    tokens = [f"w{i}" for i in range(50)]
    assert repetition_rate([tokens]) == 0.0


def test_fully_repeated_token_is_hundred():
    assert repetition_rate([["a"] * 200]) == 100.0


def test_200_token_fixture_matches_ngram_oracle():
    phrase_a = "the quick brown fox jumps".split()
    phrase_b = "hate has no home here".split()
    filler = [f"w{i:03d}" for i in range(120)]
    tokens = phrase_a * 8 + filler[0:80] + phrase_b * 8 + filler[80:120]
    assert len(tokens) == 200
    value = repetition_rate([tokens])
    # frozen from the hash-map counting oracle
    assert value == pytest.approx(7.604837613344952, abs=1e-9)
    assert value == pytest.approx(repetition_rate_oracle(tokens), abs=1e-9)


def test_units_are_concatenated_in_order():
    units = [["a", "b"], ["a", "b"], ["c", "d", "c", "d"]]
    stream = [t for u in units for t in u]
    assert repetition_rate(units) == pytest.approx(
        repetition_rate_oracle(stream), abs=1e-12
    )


def test_short_trailing_window_dropped():
    # 1050 tokens: trailing 50 < 100 is dropped, so only the first 1000 count
    tokens = [f"w{i}" for i in range(1000)] + ["w0"] * 50
    assert repetition_rate([tokens]) == repetition_rate([tokens[:1000]])


def test_trailing_window_kept_at_100():
    base = [f"w{i}" for i in range(1000)]
    tail = ["x"] * 100  # fully repeated trailing window
    with_tail = repetition_rate([base + tail])
    without_tail = repetition_rate([base])
    assert with_tail > without_tail
    assert with_tail == pytest.approx(repetition_rate_oracle(base + tail), abs=1e-9)


def test_windowing_matches_oracle_on_multi_window_corpus():
    phrase = "one two three four".split()
    tokens = (phrase * 300 + [f"u{i}" for i in range(950)])[:2150]
    assert repetition_rate([tokens]) == pytest.approx(
        repetition_rate_oracle(tokens), abs=1e-9
    )


def test_bounds():
    tokens = ["a", "b", "a", "b", "c", "c", "d", "e"]
    assert 0.0 <= repetition_rate([tokens]) <= 100.0


def test_too_few_tokens_rejected():
    with pytest.raises(ValueError):
        repetition_rate([["a", "b", "c"]])
