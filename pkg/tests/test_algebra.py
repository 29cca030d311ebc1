import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import naive_mul
from vtl import algebra
from vtl.algebra import (
    ClassNonUniformError,
    ClassTable,
    Element,
    NumericElement,
    class_decompose,
    class_expand,
    class_mul,
    element_combine,
    element_eval,
    element_mul,
    markov_trace,
)
from vtl.diagram import DiagramError, enumerate_diagrams, generator, identity
from vtl.exactfield import D, ONE, PoleError, RationalFunction

HALF = Fraction(1, 2)


def f2():
    return element_combine(Element.identity(2), Element.generator(2, "e", 1), HALF, -1 / D) + Element.generator(
        2, "v", 1
    ).scale(HALF)


def random_element(n, size, seed):
    rng = random.Random(seed)
    ds = enumerate_diagrams(n)
    pool = [ONE, D, 1 / D, (D + 1) / (D - 3), RationalFunction(Fraction(-2, 3)), D * D - 2]
    return Element(n, {rng.choice(ds): rng.choice(pool) * rng.randint(-3, 3) for _ in range(size)})


def test_combine_examples():
    x = f2()
    assert x.coeff(identity(2)) == HALF
    assert x.coeff(generator(2, "e", 1)) == -1 / D
    assert x.coeff(generator(2, "v", 1)) == HALF
    a = random_element(3, 6, 1)
    assert element_combine(a, a, 1, -1).is_zero()
    assert element_combine(a, Element.zero(3), D, 5) == a.scale(D)
    with pytest.raises(DiagramError):
        element_combine(a, Element.identity(2), 1, 1)


def test_mul_examples():
    e = Element.generator(2, "e", 1)
    assert element_mul(e, e) == e.scale(D)
    assert element_mul(f2(), f2()) == f2()
    assert element_mul(f2(), e).is_zero()


def test_trace_examples():
    assert markov_trace(Element.identity(2)) == D * D
    assert markov_trace(Element.generator(2, "e", 1)) == D
    # oracle: tr(1)=d^2, tr(e)=d, tr(v)=d
    assert markov_trace(f2()) == HALF * D * D - (1 / D) * D + HALF * D


def test_class_decompose_examples():
    t = class_decompose(f2())
    assert t.coeff == {0: HALF, 1: -1 / D}
    with pytest.raises(ClassNonUniformError) as exc:
        class_decompose(Element.identity(3))
    a, b = exc.value.witness
    assert a.n == b.n == 3 and a != b
    assert class_decompose(Element.identity(1)).coeff == {0: ONE}


def test_decompose_reports_unequal_pair():
    x = f2() + Element.generator(2, "v", 1)
    with pytest.raises(ClassNonUniformError) as exc:
        class_decompose(x)
    assert set(exc.value.witness) == {identity(2), generator(2, "v", 1)}


def test_class_expand_examples():
    assert class_expand(ClassTable(2, {0: HALF, 1: -1 / D})) == f2()
    assert class_expand(ClassTable(4, {0: 0, 1: 0, 2: 0})).is_zero()
    f3 = class_expand(ClassTable(3, {0: Fraction(1, 6), 1: RationalFunction(-2) / (6 * (D + 2))}))
    assert len(f3) == 15
    with pytest.raises(ValueError):
        ClassTable(3, {0: 1})


def test_eval_examples():
    got = element_eval(f2(), 3)
    assert got.terms == {identity(2): HALF, generator(2, "e", 1): Fraction(-1, 3), generator(2, "v", 1): HALF}
    with pytest.raises(PoleError, match="T1 T2"):
        element_eval(f2(), 0)


@pytest.mark.parametrize("n,size,seed", [(2, 3, 0), (3, 8, 1), (3, 15, 2), (4, 20, 3), (4, 60, 4), (5, 40, 5)])
def test_product_matches_naive(n, size, seed):
    a, b = random_element(n, size, seed), random_element(n, size, seed + 50)
    assert a * b == naive_mul(a, b)


def test_sparse_path_matches_dense(monkeypatch):
    a, b = random_element(4, 40, 7), random_element(4, 40, 8)
    dense = a * b
    monkeypatch.setattr(algebra, "DENSE_LIMIT", 0)
    assert Element(4, dict(a.terms)) * Element(4, dict(b.terms)) == dense


def test_numeric_product_matches_naive():
    a = element_eval(random_element(4, 30, 9), Fraction(5, 7))
    b = element_eval(random_element(4, 30, 10), Fraction(5, 7))
    assert a * b == naive_mul(a, b)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.integers(0, 10**6), st.fractions(-9, 9, max_denominator=5))
def test_eval_commutes_with_product(n, seed, v):
    a, b = random_element(n, 10, seed), random_element(n, 10, seed + 1)
    try:
        lhs = element_eval(a * b, v)
        rhs = element_eval(a, v) * element_eval(b, v)
    except PoleError:
        return
    assert lhs == rhs


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.integers(0, 10**6))
def test_distributive_and_associative(n, seed):
    a, b, c = (random_element(n, 6, seed + k) for k in range(3))
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    s = (D + 1) / 3
    assert element_combine(a, b, s, 2) * c == element_combine(a * c, b * c, s, 2)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_trace_cyclic_on_generators(n):
    gens = [Element.identity(n)] + [Element.generator(n, k, i) for k in "ev" for i in range(1, n)]
    for x, y in itertools.product(gens, repeat=2):
        assert markov_trace(x * y) == markov_trace(y * x)


@pytest.mark.parametrize("seed", range(4))
def test_trace_cyclic_random(seed):
    a, b = random_element(5, 25, seed), random_element(5, 25, seed + 9)
    assert markov_trace(a * b) == markov_trace(b * a)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_trace_embedding_and_partial_closure(n):
    x = random_element(n, 12, n)
    up = x.embed(n + 1)
    assert markov_trace(up * Element.identity(n + 1)) == D * markov_trace(x)
    assert markov_trace(up * Element.generator(n + 1, "e", n)) == markov_trace(x)
    assert markov_trace(up * Element.generator(n + 1, "v", n)) == markov_trace(x)


def _random_table(n, seed, point=None):
    rng = random.Random(seed)
    pool = [ONE, D, 1 / (D + 2), RationalFunction(Fraction(-3, 4)), D - 5]
    return ClassTable(n, {l: rng.choice(pool) * rng.randint(-2, 2) for l in range(n // 2 + 1)}, point)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_class_mul_matches_full_product(n):
    for seed in range(3):
        s, t = _random_table(n, seed), _random_table(n, seed + 10)
        assert class_expand(class_mul(s, t)) == class_expand(s) * class_expand(t)


def test_class_mul_numeric():
    s = _random_table(4, 1).evaluate(Fraction(3, 2))
    t = _random_table(4, 2).evaluate(Fraction(3, 2))
    assert class_expand(class_mul(s, t)) == class_expand(s) * class_expand(t)
    with pytest.raises(ValueError):
        class_mul(s, _random_table(4, 2))


def test_element_json_round_trip():
    x = random_element(4, 30, 11)
    doc = x.to_json()
    assert [t["partner"] for t in doc["terms"]] == sorted(t["partner"] for t in doc["terms"])
    assert Element.from_json(doc) == x


def test_class_table_json_and_text():
    t = ClassTable(4, {0: Fraction(1, 24), 1: RationalFunction(-2) / (24 * (D + 4)), 2: ONE / (3 * (D + 2) * (D + 4))})
    assert ClassTable.from_json(t.to_json()) == t
    assert t.render() == "f_4 = (1/24)[4]_4 - (1/(12(d+4)))[2]_4 + (1/(3(d+2)(d+4)))[0]_4"
    assert ClassTable(1, {0: 1}).render() == "f_1 = 1_1"
    assert t.evaluate(1).coeff == {0: Fraction(1, 24), 1: Fraction(-1, 60), 2: Fraction(1, 45)}


def test_mixing_types_is_rejected():
    x = Element.identity(2)
    with pytest.raises(TypeError):
        x + element_eval(x, 1)
    with pytest.raises(ValueError):
        element_eval(x, 1) + element_eval(x, 2)


def test_numeric_element_coerces_rational_functions():
    x = NumericElement(2, 3, {identity(2): 1 / D})
    assert x.coeff(identity(2)) == Fraction(1, 3)
