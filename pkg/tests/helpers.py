"""Random inputs and slow reference implementations shared by the tests."""

from __future__ import annotations

import itertools
from dataclasses import replace

import numpy as np

from sfgkit.graph import Branch, SfgGraph
from sfgkit.loops import LoopRec, SymbolicGain, TouchMatrix
from sfgkit.poly import ONE, Poly, RationalFn


def random_poly(rng, degree: int, lead_min: float = 0.3) -> Poly:
    coeffs = rng.uniform(-3.0, 3.0, size=degree + 1)
    if abs(coeffs[-1]) < lead_min:
        coeffs[-1] = lead_min if coeffs[-1] >= 0 else -lead_min
    return Poly(coeffs.tolist())


def random_rational(rng, max_degree: int = 2) -> RationalFn:
    num = random_poly(rng, int(rng.integers(0, max_degree + 1)))
    den = random_poly(rng, int(rng.integers(0, max_degree + 1)))
    return RationalFn(num, den)


def random_graph(rng, max_nodes: int = 8, max_branches: int = 16,
                 symbols: tuple[str, ...] = (),
                 allow_parallel: bool = True) -> SfgGraph:
    """Random graph with a guaranteed forward path along nodes 1..n.

    Extra branches land anywhere: self loops, branches into the input,
    branches out of the output, and (optionally) parallel branches are all
    allowed, which is exactly what the preprocessing stage must absorb.
    """
    n = int(rng.integers(3, max_nodes + 1))
    branches = []
    for u in range(1, n):
        branches.append(Branch(u - 1, u, u + 1, random_rational(rng), ()))
    extra = int(rng.integers(0, max_branches - (n - 1) + 1))
    for _ in range(extra):
        u = int(rng.integers(1, n + 1))
        v = int(rng.integers(1, n + 1))
        if not allow_parallel and any(b.src == u and b.dst == v for b in branches):
            continue
        branches.append(Branch(len(branches), u, v, random_rational(rng), ()))
    for sym in symbols:
        k = int(rng.integers(0, len(branches)))
        branches[k] = replace(branches[k], symbols=(sym,))
    return SfgGraph(nodes=tuple(range(1, n + 1)), branches=tuple(branches),
                    input=1, output=n)


def random_digraph(rng, max_nodes: int = 8, density: float = 0.3) -> SfgGraph:
    """Simple digraph (unit gains, no parallels) for cycle enumeration."""
    n = int(rng.integers(2, max_nodes + 1))
    edges = set()
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            if rng.random() < density:
                edges.add((u, v))
    branches = tuple(
        Branch(i, u, v, RationalFn(ONE, ONE), ())
        for i, (u, v) in enumerate(sorted(edges))
    )
    return SfgGraph(nodes=tuple(range(1, n + 1)), branches=branches,
                    input=None, output=None)


def brute_circuits(g: SfgGraph) -> set[tuple[int, ...]]:
    """Every elementary cycle by exhaustive path search.

    Each cycle is reported exactly once, rotated so its smallest node leads,
    by only walking nodes >= the chosen start.
    """
    adj: dict[int, list[int]] = {u: [] for u in g.nodes}
    for b in g.branches:
        adj[b.src].append(b.dst)
    out: set[tuple[int, ...]] = set()

    def walk(start: int, node: int, path: list[int], onpath: set[int]):
        for v in adj[node]:
            if v < start:
                continue
            if v == start:
                out.add(tuple(path))
            elif v not in onpath:
                onpath.add(v)
                path.append(v)
                walk(start, v, path, onpath)
                path.pop()
                onpath.remove(v)

    for s in sorted(g.nodes):
        walk(s, s, [s], {s})
    return out


def fake_loops(n: int) -> list[LoopRec]:
    return [LoopRec(i, (i,), (i,), frozenset({i})) for i in range(n)]


def constant_gains(values) -> list[SymbolicGain]:
    return [SymbolicGain((), RationalFn(Poly([float(v)]), ONE)) for v in values]


def random_touch(rng, n: int, density: float = 0.5) -> TouchMatrix:
    mat = rng.random((n, n)) < density
    mat = mat | mat.T
    np.fill_diagonal(mat, True)
    return TouchMatrix(mat)


def brute_combos(touch: TouchMatrix, order: int) -> set[tuple[int, ...]]:
    """All k-subsets of pairwise non-touching loops, by direct filtering."""
    n = len(touch)
    out = set()
    for combo in itertools.combinations(range(n), order):
        if all(not touch.touch(i, j) for i, j in itertools.combinations(combo, 2)):
            out.add(combo)
    return out


def poly_close(p: Poly, coeffs, rel: float = 1e-9, scale: float = 1.0) -> bool:
    want = [c * scale for c in coeffs]
    got = list(p.coeffs) + [0.0] * (len(want) - len(p.coeffs))
    if len(got) > len(want):
        want = want + [0.0] * (len(got) - len(want))
    top = max(max(abs(c) for c in want), 1e-300)
    return all(abs(a - b) <= rel * top for a, b in zip(got, want))
