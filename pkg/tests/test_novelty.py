import random

import pytest

from cnloop.metrics.novelty import jaccard, novelty
from oracles import novelty_oracle


def test_corpus_vs_itself_is_zero():
    corpus = [["a", "b"], ["c", "d", "e"]]
    assert novelty(corpus, corpus) == 0.0


def test_disjoint_vocabularies_is_one():
    assert novelty([["a", "b"]], [["x", "y"], ["z"]]) == 1.0


def test_single_candidate_half_overlap():
    # sets {a,b,d} vs {a,b,c}: intersection 2, union 4
    assert novelty([["a", "b", "d"]], [["a", "b", "c"]]) == 0.5


def test_duplicate_tokens_collapse_to_sets():
    assert novelty([["a", "a", "b"]], [["b", "a"]]) == 0.0


def test_matches_brute_force():
    rng = random.Random(13)
    vocab = [chr(ord("a") + i) for i in range(12)]
    for _ in range(50):
        cands = [
            [rng.choice(vocab) for _ in range(rng.randint(1, 6))]
            for _ in range(rng.randint(1, 8))
        ]
        refs = [
            [rng.choice(vocab) for _ in range(rng.randint(1, 6))]
            for _ in range(rng.randint(1, 8))
        ]
        assert novelty(cands, refs) == pytest.approx(novelty_oracle(cands, refs), abs=1e-12)


def test_reference_growth_never_increases_novelty():
    rng = random.Random(14)
    vocab = [chr(ord("a") + i) for i in range(10)]
    for _ in range(60):
        cands = [
            [rng.choice(vocab) for _ in range(rng.randint(1, 5))] for _ in range(5)
        ]
        refs = [
            [rng.choice(vocab) for _ in range(rng.randint(1, 5))] for _ in range(4)
        ]
        extra = [[rng.choice(vocab) for _ in range(rng.randint(1, 5))]]
        assert novelty(cands, refs + extra) <= novelty(cands, refs) + 1e-12


def test_bounds():
    rng = random.Random(15)
    vocab = ["u", "v", "w", "x"]
    for _ in range(40):
        cands = [[rng.choice(vocab) for _ in range(rng.randint(1, 4))] for _ in range(3)]
        refs = [[rng.choice(vocab) for _ in range(rng.randint(1, 4))] for _ in range(3)]
        assert 0.0 <= novelty(cands, refs) <= 1.0


def test_errors_on_empty_corpora():
    with pytest.raises(ValueError):
        novelty([], [["a"]])
    with pytest.raises(ValueError):
        novelty([["a"]], [])


def test_jaccard_of_empty_sets():
    assert jaccard(frozenset(), frozenset()) == 1.0
