import random

import pytest
from hypothesis import given, settings, strategies as st

from abduce.core import AbductionInstance, InstanceError, with_candidate
from abduce.generate import random_instance
from abduce.io import ParseError, parse_instance, read_instance, serialize_instance
from abduce.reductions import pi, repr_instance

from conftest import DATA, ids


def test_tex_document_parses(tex):
    doc = read_instance(DATA / "tex.abd")
    assert doc == tex


def test_golden_serialization(tex):
    text = serialize_instance(tex)
    assert text == (DATA / "tex_golden.abd").read_text()
    assert len(text.splitlines()) == 8


def test_named_round_trip(prio, pen):
    for inst in (prio, pen, with_candidate(prio, ids(prio, "a"))):
        assert parse_instance(serialize_instance(inst, names=True)) == inst


def test_missing_manifestation_line():
    with pytest.raises(ParseError, match="no manifestation line"):
        parse_instance("p abd 2\nh 1 1 0\n-1 2 0\n")


@pytest.mark.parametrize(
    "text,line",
    [
        ("p abd 2\nh 1 1 0\nm 2 0\n-1 3 0\n", 4),
        ("p abd 2\nh 1 1 0\nm 2 0\n-1 x 0\n", 4),
        ("p abd 2\nh 1 1 0\nm 2 0\n-1 2\n", 4),
        ("p abd 2\nh 0 1 0\nm 2 0\n", 2),
        ("p abd 2\nm 2 0\nm 2 0\n", 3),
        ("h 1 1 0\np abd 2\n", 1),
        ("p cnf 2 1\n", 1),
        ("p abd 2\nw 1\n", 2),
    ],
)
def test_syntax_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as info:
        parse_instance(text)
    assert info.value.line == line


def test_semantic_errors_come_from_validation():
    with pytest.raises(InstanceError):
        parse_instance("p abd 3\nh 1 1 0\nh 2 1 0\nm 3 0\n-1 3 0\n")
    with pytest.raises(InstanceError):
        parse_instance("p abd 3\nh 1 1 0\nm 3 0\nw 1 0\n-1 3 0\n")


def test_candidate_comment():
    inst = parse_instance("p abd 2\nh 1 1 0\nm 2 0\nc candidate 1 0\n-1 2 0\n")
    assert inst.candidate == {1}
    assert "c candidate 1 0" in serialize_instance(inst)


def test_empty_hypothesis_class_line():
    inst = AbductionInstance.from_names([], ["m"], [["m"]])
    assert "h 1 0" in serialize_instance(inst).splitlines()


def test_repr_document_size():
    text = serialize_instance(repr_instance(2))
    clauses = [l for l in text.splitlines() if l[0] not in "phmwcn"]
    assert len(clauses) == len(pi([1, 2, 3, 4])) == 64


def test_comments_and_blank_lines_are_ignored(tex):
    text = "c hello\n\n" + serialize_instance(tex) + "c trailing\n"
    assert parse_instance(text) == parse_instance(serialize_instance(tex))


@pytest.mark.parametrize("seed", range(100))
def test_round_trip_fuzz(seed):
    inst = random_instance(seed)
    if seed % 3 == 0:
        rng = random.Random(seed)
        inst = with_candidate(inst, [h for h in inst.H if rng.random() < 0.5])
    text = serialize_instance(inst)
    assert serialize_instance(parse_instance(text)) == text
    assert parse_instance(serialize_instance(inst, names=True)) == inst


@settings(max_examples=100)
@given(st.lists(st.lists(st.integers(-6, 6).filter(bool), min_size=1, max_size=3), max_size=8))
def test_clause_lines_round_trip(clauses):
    body = "".join(" ".join(map(str, c)) + " 0\n" for c in clauses)
    text = "p abd 7\nh 1 1 0\nm 7 0\n-1 7 0\n" + body
    inst = parse_instance(text)
    again = serialize_instance(inst)
    assert serialize_instance(parse_instance(again)) == again
