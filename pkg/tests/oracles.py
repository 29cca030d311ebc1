"""Deliberately naive reference implementations used only by the tests."""

from __future__ import annotations

from vtl.diagram import Diagram


class _DSU:
    def __init__(self, size):
        self.parent = list(range(size))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)


def compose_union_find(a: Diagram, b: Diagram) -> tuple[Diagram, int]:
    """Glue two diagrams as a graph and read off components."""
    n = a.n
    # nodes 0..2n-1 are a's points, 2n..4n-1 are b's points
    dsu = _DSU(4 * n)
    for x, y in enumerate(a.partner):
        dsu.union(x, y)
    for x, y in enumerate(b.partner):
        dsu.union(2 * n + x, 2 * n + y)
    for m in range(n):
        dsu.union(n + m, 2 * n + m)
    outer = {t: t for t in range(n)}
    outer.update({2 * n + n + j: n + j for j in range(n)})
    ends: dict[int, list[int]] = {}
    for node, label in outer.items():
        ends.setdefault(dsu.find(node), []).append(label)
    partner = [0] * (2 * n)
    for pair in ends.values():
        assert len(pair) == 2
        partner[pair[0]], partner[pair[1]] = pair[1], pair[0]
    roots = {dsu.find(x) for x in range(4 * n)}
    loops = len(roots - set(ends))
    return Diagram(n, tuple(partner)), loops


def closure_union_find(a: Diagram) -> int:
    n = a.n
    dsu = _DSU(2 * n)
    for x, y in enumerate(a.partner):
        dsu.union(x, y)
    for k in range(n):
        dsu.union(k, n + k)
    return len({dsu.find(x) for x in range(2 * n)})


def all_matchings(points: list[int]):
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for idx, other in enumerate(rest):
        for tail in all_matchings(rest[:idx] + rest[idx + 1 :]):
            yield [(first, other)] + tail


def naive_basis(n: int) -> list[Diagram]:
    out = []
    for pairs in all_matchings(list(range(2 * n))):
        p = [0] * (2 * n)
        for x, y in pairs:
            p[x], p[y] = y, x
        out.append(Diagram(n, tuple(p)))
    return out


def crosses(a: Diagram) -> bool:
    """Two arcs interleave in the boundary's cyclic order."""
    n = a.n
    pos = {t: t for t in range(n)}
    pos.update({n + j: 2 * n - 1 - j for j in range(n)})
    arcs = [tuple(sorted((pos[x], pos[y]))) for x, y in a.pairs()]
    for p, q in arcs:
        for r, s in arcs:
            if p < r < q < s:
                return True
    return False


def naive_mul(a, b):
    """Bilinear product by explicit double loop over terms."""
    out = {}
    for x, cx in a.terms.items():
        for y, cy in b.terms.items():
            z, loops = compose_union_find(x, y)
            val = cx * cy * a._loop_value([0] * loops + [1])
            out[z] = out.get(z, 0) + val
    return a._like({z: c for z, c in out.items() if c})
