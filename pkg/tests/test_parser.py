import json
import random
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from tjk.algebra import AlgebraElement
from tjk.parser import ParseError, Power, Product, Sum, Symbol, format_element, parse, parse_tree
from tjk.scalars import FieldCtx

CORPUS = json.loads((Path(__file__).parent / "fixtures" / "parser_corpus.json").read_text())
Q = FieldCtx.rationals()
F5 = FieldCtx.prime(5)


@pytest.mark.parametrize("case", CORPUS, ids=[repr(c["input"]) for c in CORPUS])
def test_corpus(case):
    ctx = FieldCtx.parse(case["field"])
    if "output" in case:
        assert format_element(parse(case["input"], ctx)) == case["output"]
    else:
        with pytest.raises(ParseError) as info:
            parse(case["input"], ctx)
        assert info.value.offset == case["error_offset"]


def test_corpus_size():
    assert len(CORPUS) == 30
    assert sum("error_offset" in c for c in CORPUS) == 10


def test_tree_shape():
    t = parse_tree("2*x^3 - y")
    assert isinstance(t, Sum)
    (s1, first), (s2, second) = t.terms
    assert (s1, s2) == (1, -1)
    assert isinstance(first, Product) and isinstance(first.factors[1], Power)
    assert first.factors[1].exponent == 3
    assert second == Symbol("y")


def _elements(ctx):
    coeff = (st.integers(0, ctx.characteristic - 1) if ctx.characteristic
             else st.fractions(min_value=-9, max_value=9, max_denominator=7))
    mono = st.tuples(st.integers(0, 5), st.integers(0, 5))
    return st.dictionaries(mono, coeff, max_size=6).map(lambda d: AlgebraElement(ctx, d))


@settings(max_examples=100, deadline=None)
@given(_elements(Q))
def test_round_trip_q(a):
    assert parse(format_element(a), Q) == a


@settings(max_examples=100, deadline=None)
@given(_elements(F5))
def test_round_trip_f5(a):
    assert parse(format_element(a), F5) == a


def test_format_is_canonical():
    # equal elements print identically regardless of how they were written
    a = parse("x*y*y + 2*y*x*y", Q)
    b = parse("3*y", Q)
    assert format_element(a) == format_element(b) == "3*y"


def test_random_round_trip_seeded():
    rng = random.Random(3)
    for ctx in (Q, F5):
        for _ in range(100):
            a = AlgebraElement.random(ctx, rng, max_deg=6, max_terms=6)
            assert parse(str(a), ctx) == a
