import random

from cnloop.parsing import parse_generation
from cnloop.records import TargetLabel
from cnloop.tokens import ExportFormat, format_pair


def test_two_wellformed_pairs():
    raw = (
        "<|startofhs|> h1 <|endofhs|> <|startofcn|> c1 <|endofcn|>"
        "<|startofhs|> h2 <|endofhs|> <|startofcn|> c2 <|endofcn|>"
    )
    result = parse_generation(raw, ExportFormat.PLAIN)
    assert [(c.hs, c.cn) for c in result.candidates] == [("h1", "c1"), ("h2", "c2")]
    assert result.diagnostics == []
    assert result.open_tag_count == 2


def test_missing_endofcn_recovers_at_next_pair():
    raw = (
        "<|startofhs|> h1 <|endofhs|> <|startofcn|> c1 "
        "<|startofhs|> h2 <|endofhs|> <|startofcn|> c2 <|endofcn|>"
    )
    result = parse_generation(raw, ExportFormat.PLAIN)
    assert [(c.hs, c.cn) for c in result.candidates] == [("h2", "c2")]
    assert len(result.diagnostics) == 1
    assert "<|endofcn|>" in result.diagnostics[0].reason


def test_labeled_pair():
    raw = "<|startofhs: MUSLIMS|> h <|endofhs|> <|startofcn|> c <|endofcn|>"
    result = parse_generation(raw, ExportFormat.LABELED)
    assert len(result.candidates) == 1
    cand = result.candidates[0]
    assert (cand.hs, cand.cn, cand.label) == ("h", "c", TargetLabel.MUSLIMS)


def test_unknown_label_rejects_pair():
    raw = "<|startofhs: MARTIANS|> h <|endofhs|> <|startofcn|> c <|endofcn|>"
    result = parse_generation(raw, ExportFormat.LABELED)
    assert result.candidates == []
    assert len(result.diagnostics) == 1
    assert "MARTIANS" in result.diagnostics[0].reason


def test_plain_tag_in_labeled_format_rejected():
    raw = "<|startofhs|> h <|endofhs|> <|startofcn|> c <|endofcn|>"
    result = parse_generation(raw, ExportFormat.LABELED)
    assert result.candidates == []
    assert "label" in result.diagnostics[0].reason


def test_labeled_tag_in_plain_format_rejected():
    raw = "<|startofhs: WOMEN|> h <|endofhs|> <|startofcn|> c <|endofcn|>"
    result = parse_generation(raw, ExportFormat.PLAIN)
    assert result.candidates == []
    assert len(result.diagnostics) == 1


def test_junk_between_tokens_is_malformed():
    raw = "<|startofhs|> h <|endofhs|> junk <|startofcn|> c <|endofcn|>"
    result = parse_generation(raw, ExportFormat.PLAIN)
    assert result.candidates == []
    assert len(result.diagnostics) == 1


def test_truncated_fragment():
    raw = "<|startofhs|> h "
    result = parse_generation(raw, ExportFormat.PLAIN)
    assert result.candidates == []
    assert len(result.diagnostics) == 1


def test_nested_open_tag_aborts_and_resyncs():
    raw = "<|startofhs|> a <|startofhs|> b <|endofhs|> <|startofcn|> c <|endofcn|>"
    result = parse_generation(raw, ExportFormat.PLAIN)
    # first attempt fails; second tag parses a full pair
    assert [(c.hs, c.cn) for c in result.candidates] == [("b", "c")]
    assert len(result.diagnostics) == 1
    assert result.open_tag_count == 2


def test_accounting_covers_every_open_tag():
    rng = random.Random(21)
    pieces = []
    for _ in range(200):
        roll = rng.random()
        if roll < 0.4:
            pieces.append(format_pair(f"h{rng.randrange(99)}", f"c{rng.randrange(99)}",
                                      ExportFormat.PLAIN))
        elif roll < 0.6:
            pieces.append("<|startofhs|> broken ")
        elif roll < 0.8:
            pieces.append("<|startofhs junk <|endofcn|>")
        else:
            pieces.append("noise with no tokens at all")
    raw = " ".join(pieces)
    result = parse_generation(raw, ExportFormat.PLAIN)
    assert result.open_tag_count == raw.count("<|startofhs")
    assert len(result.candidates) + len(result.diagnostics) == result.open_tag_count


def test_round_trip_preserves_exact_texts():
    cases = [
        ("h", "c"),
        ("hate  speech", "counter  narrative"),
        (" leading space", "trailing space "),
        ("line\nbreak", "tab\ttext"),
        ("", "nonempty"),
        ("unicode ñ ü ß", "emoji level ✊"),
    ]
    for fmt in ExportFormat:
        raw = "\n".join(
            format_pair(hs, cn, fmt, TargetLabel.LGBT_PLUS) for hs, cn in cases
        )
        result = parse_generation(raw, fmt)
        assert [(c.hs, c.cn) for c in result.candidates] == cases
        assert result.diagnostics == []


def test_arbitrary_bytes_never_crash():
    rng = random.Random(22)
    alphabet = "<|>startofhscn endf: ABC\n\x00é"
    for _ in range(50):
        raw = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 400)))
        for fmt in ExportFormat:
            result = parse_generation(raw, fmt)
            assert len(result.candidates) + len(result.diagnostics) == result.open_tag_count
