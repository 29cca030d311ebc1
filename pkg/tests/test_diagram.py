import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import closure_union_find, compose_union_find, crosses, naive_basis
from vtl.diagram import (
    Diagram,
    DiagramError,
    canonical_k_element,
    cap_sites,
    catalan,
    class_size,
    closure_loops,
    compose,
    cup_sites,
    double_factorial,
    embed,
    enumerate_diagrams,
    from_word,
    generator,
    identity,
    is_planar,
    rank,
    through_strands,
    unrank,
)


def test_generator_shapes():
    e1 = generator(2, "e", 1)
    assert e1.pairs() == [(0, 1), (2, 3)]
    assert str(e1) == "(T1 T2)(B1 B2)"
    v1 = generator(2, "v", 1)
    assert v1.partner == (3, 2, 1, 0)
    assert generator(3, "identity") == identity(3)
    assert through_strands(generator(3, "identity")) == 3


@pytest.mark.parametrize("i", [0, 3, None])
def test_generator_index_checked(i):
    with pytest.raises(DiagramError):
        generator(3, "e", i)


def test_invalid_partner_rejected():
    with pytest.raises(DiagramError):
        Diagram(2, (1, 0, 2, 3))
    with pytest.raises(DiagramError):
        Diagram(2, (1, 0, 3))


def test_compose_examples():
    e1, v1 = generator(2, "e", 1), generator(2, "v", 1)
    assert compose(e1, e1) == (e1, 1)
    assert compose(v1, v1) == (identity(2), 0)
    first = compose(generator(3, "e", 1), generator(3, "v", 2)).diagram
    assert compose(first, generator(3, "e", 1)) == (generator(3, "e", 1), 0)
    with pytest.raises(DiagramError):
        compose(e1, identity(3))


def test_through_strands_examples():
    assert through_strands(identity(4)) == 4
    assert through_strands(generator(2, "e", 1)) == 0
    assert through_strands(canonical_k_element(5, 1)) == 1


def test_closure_examples():
    assert closure_loops(identity(2)) == 2
    assert closure_loops(generator(2, "e", 1)) == 1
    assert closure_loops(generator(2, "v", 1)) == 1


def test_enumerate_examples():
    assert len(enumerate_diagrams(3)) == 15
    assert len(enumerate_diagrams(4, 2)) == 72
    assert set(enumerate_diagrams(2, 2)) == {identity(2), generator(2, "v", 1)}
    with pytest.raises(DiagramError):
        enumerate_diagrams(4, 1)


@pytest.mark.parametrize("n", range(1, 7))
def test_enumeration_matches_naive_generator(n):
    got = enumerate_diagrams(n)
    assert got == sorted(naive_basis(n))
    assert len(set(got)) == double_factorial(2 * n - 1)


@pytest.mark.parametrize("n", range(1, 7))
def test_class_sizes(n):
    ts = [through_strands(d) for d in enumerate_diagrams(n)]
    for l in range(n // 2 + 1):
        want = math.comb(n, 2 * l) ** 2 * double_factorial(2 * l - 1) ** 2 * math.factorial(n - 2 * l)
        assert class_size(n, l) == want == ts.count(n - 2 * l)
    assert all((t - n) % 2 == 0 for t in ts)


def test_canonical_elements():
    w = from_word(5, "e2 e4")
    assert w.loops == 0 and canonical_k_element(5, 1) == w.diagram
    assert canonical_k_element(4, 4) == identity(4)
    assert canonical_k_element(6, 0) == from_word(6, "e1 e3 e5").diagram
    with pytest.raises(DiagramError):
        canonical_k_element(5, 2)


def test_planarity_examples():
    assert is_planar(generator(3, "e", 1))
    assert not is_planar(generator(2, "v", 1))
    assert sum(is_planar(d) for d in enumerate_diagrams(4)) == 14


@pytest.mark.parametrize("n", range(1, 7))
def test_planar_matches_crossing_oracle(n):
    ds = enumerate_diagrams(n)
    assert all(is_planar(d) == (not crosses(d)) for d in ds)
    assert sum(map(is_planar, ds)) == catalan(n)


@pytest.mark.parametrize("n", range(1, 6))
def test_compose_matches_union_find(n):
    ds = enumerate_diagrams(n)
    rng = random.Random(n)
    pairs = itertools.product(ds, ds) if n <= 3 else [(rng.choice(ds), rng.choice(ds)) for _ in range(3000)]
    for a, b in pairs:
        assert compose(a, b) == compose_union_find(a, b)


@pytest.mark.parametrize("n", range(1, 6))
def test_closure_matches_union_find(n):
    assert all(closure_loops(d) == closure_union_find(d) for d in enumerate_diagrams(n))


@pytest.mark.parametrize("n", range(2, 5))
def test_associative_on_generator_triples(n):
    gens = [identity(n)] + [generator(n, k, i) for k in "ev" for i in range(1, n)]
    for a, b, c in itertools.product(gens, repeat=3):
        ab, l1 = compose(a, b)
        left, l2 = compose(ab, c)
        bc, r1 = compose(b, c)
        right, r2 = compose(a, bc)
        assert left == right and l1 + l2 == r1 + r2


def diagrams(max_n=6):
    return st.integers(1, max_n).flatmap(
        lambda n: st.tuples(*[st.integers(0, double_factorial(2 * n - 1) - 1)] * 3).map(
            lambda rs: [unrank(n, r) for r in rs]
        )
    )


@settings(max_examples=200, deadline=None)
@given(diagrams())
def test_composition_laws(abc):
    a, b, c = abc
    n = a.n
    ab, l1 = compose(a, b)
    left, l2 = compose(ab, c)
    bc, r1 = compose(b, c)
    right, r2 = compose(a, bc)
    assert left == right and l1 + l2 == r1 + r2
    assert compose(identity(n), a) == (a, 0) == compose(a, identity(n))
    assert through_strands(ab) <= min(through_strands(a), through_strands(b))
    assert l1 <= n


@pytest.mark.parametrize("n", range(2, 6))
def test_permutations_preserve_through_strands(n):
    perms = enumerate_diagrams(n, n)
    for x in enumerate_diagrams(n):
        k = through_strands(x)
        for p in perms[:: max(1, len(perms) // 12)]:
            assert through_strands(compose(x, p).diagram) == k
            assert through_strands(compose(p, x).diagram) == k


def test_closure_of_identity_counts_strands():
    assert all(closure_loops(identity(n)) == n for n in range(1, 9))


@settings(max_examples=100, deadline=None)
@given(diagrams(8))
def test_text_json_rank_round_trips(abc):
    a = abc[0]
    assert Diagram.parse(str(a)) == a
    assert Diagram.from_json(a.to_json()) == a
    assert unrank(a.n, rank(a)) == a


def test_rank_is_enumeration_position():
    ds = enumerate_diagrams(4)
    assert [rank(d) for d in ds] == list(range(len(ds)))


def test_embed_and_sites():
    e1 = generator(2, "e", 1)
    big = embed(e1, 4)
    assert big == generator(4, "e", 1)
    assert cup_sites(big) == [1] and cap_sites(big) == [1]
    x = from_word(4, "e1 e3").diagram
    assert cup_sites(x) == [1, 3] == cap_sites(x)
