"""Elementary circuits of the closed graph and their symbolic gains.

Circuit enumeration follows Johnson's algorithm (SIAM J. Comput. 4, 1975):
process strongly connected components from their least vertex with the
blocked-set bookkeeping that makes the search output-linear. Self-branches
are reported directly from the adjacency structure before SCC processing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from sfgkit.errors import LoopLimitError
from sfgkit.graph import INVG, SfgGraph, branch_lookup
from sfgkit.poly import ONE, Poly, RationalFn

DEFAULT_LOOP_CAP = 100_000

Monomial = tuple[str, ...]

PLAIN: Monomial = ()


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(sorted(a + b))


def invg_count(m: Monomial) -> int:
    return sum(1 for s in m if s == INVG)


def strip_invg(m: Monomial) -> Monomial:
    return tuple(s for s in m if s != INVG)


@dataclass(frozen=True)
class SymbolicGain:
    """A rational part times a symbol monomial (multiset of symbol names).

    ``den_factors`` records the branch denominators whose product is
    ``rational.den``; downstream sums clear over these factors instead of
    cross-multiplying term by term.
    """

    monomial: Monomial
    rational: RationalFn
    den_factors: tuple[Poly, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "monomial", tuple(sorted(self.monomial)))
        if invg_count(self.monomial) > 1:
            raise ValueError("monomial carries the 1/G marker more than once")
        if not self.den_factors and self.rational.den != ONE:
            object.__setattr__(self, "den_factors", (self.rational.den,))
        object.__setattr__(
            self, "den_factors", tuple(sorted(self.den_factors, key=lambda p: p.coeffs))
        )

    def __mul__(self, other: "SymbolicGain") -> "SymbolicGain":
        return SymbolicGain(
            mono_mul(self.monomial, other.monomial),
            self.rational * other.rational,
            self.den_factors + other.den_factors,
        )


@dataclass(frozen=True)
class LoopRec:
    """One elementary circuit, canonically rotated (smallest node first)."""

    index: int
    node_seq: tuple[int, ...]
    branch_ids: tuple[int, ...]
    node_set: frozenset[int] = field(hash=False)

    def __len__(self) -> int:
        return len(self.node_seq)


def _tarjan_scc(nodes: list[int], adj: dict[int, list[int]]) -> list[list[int]]:
    """Iterative Tarjan; returns components as lists of nodes."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(adj[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(adj[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(comp)
    return sccs


def _circuits_from(start: int, scc: set[int], adj: dict[int, list[int]],
                   sink: list[tuple[int, ...]], cap: int) -> None:
    """Enumerate circuits through `start` inside `scc` (Johnson's search)."""
    blocked: set[int] = set()
    block_map: dict[int, set[int]] = {v: set() for v in scc}
    path: list[int] = []

    def unblock(v: int) -> None:
        pending = {v}
        while pending:
            u = pending.pop()
            if u in blocked:
                blocked.discard(u)
                pending |= block_map[u]
                block_map[u].clear()

    def circuit(v: int) -> bool:
        found = False
        path.append(v)
        blocked.add(v)
        for w in adj[v]:
            if w not in scc:
                continue
            if w == start:
                sink.append(tuple(path))
                if len(sink) > cap:
                    raise LoopLimitError(
                        f"elementary circuit count exceeded the cap of {cap}"
                    )
                found = True
            elif w not in blocked:
                if circuit(w):
                    found = True
        if found:
            unblock(v)
        else:
            for w in adj[v]:
                if w in scc:
                    block_map[w].add(v)
        path.pop()
        return found

    circuit(start)


def find_loops(g: SfgGraph, cap: int = DEFAULT_LOOP_CAP) -> list[LoopRec]:
    """All elementary circuits, ordered lexicographically by node sequence.

    Requires a simple digraph (no parallel branches); self-branches allowed.
    """
    by_pair = branch_lookup(g)
    adj: dict[int, list[int]] = {n: [] for n in g.nodes}
    cycles: list[tuple[int, ...]] = []
    for (src, dst) in by_pair:
        if src == dst:
            cycles.append((src,))
        else:
            adj[src].append(dst)
    for n in adj:
        adj[n].sort()

    for start in sorted(g.nodes):
        sub_nodes = [n for n in sorted(g.nodes) if n >= start]
        sub_adj = {n: [w for w in adj[n] if w >= start] for n in sub_nodes}
        comp = next((set(c) for c in _tarjan_scc(sub_nodes, sub_adj) if start in c), None)
        if comp is None or len(comp) < 2:
            continue
        _circuits_from(start, comp, sub_adj, cycles, cap)

    cycles.sort()
    loops = []
    for i, seq in enumerate(cycles):
        ring = seq + (seq[0],)
        branch_ids = tuple(by_pair[(ring[k], ring[k + 1])].id for k in range(len(seq)))
        loops.append(LoopRec(i, seq, branch_ids, frozenset(seq)))
    return loops


def loop_gain(loop: LoopRec, g: SfgGraph) -> SymbolicGain:
    """Product of the member branches' rational parts and symbol multisets."""
    by_id = {b.id: b for b in g.branches}
    rational = RationalFn(ONE, ONE)
    monomial: Monomial = ()
    factors: list[Poly] = []
    for bid in loop.branch_ids:
        b = by_id[bid]
        rational = rational * b.gain
        monomial = mono_mul(monomial, b.symbols)
        if b.gain.den != ONE:
            factors.append(b.gain.den)
    return SymbolicGain(monomial, rational, tuple(factors))


@dataclass(frozen=True)
class TouchMatrix:
    """Symmetric boolean matrix: touch(i, j) iff the loops share a node."""

    mat: np.ndarray

    def touch(self, i: int, j: int) -> bool:
        return bool(self.mat[i, j])

    def __len__(self) -> int:
        return self.mat.shape[0]


def touch_matrix(loops: list[LoopRec]) -> TouchMatrix:
    n = len(loops)
    mat = np.zeros((n, n), dtype=bool)
    for i in range(n):
        mat[i, i] = True
        for j in range(i + 1, n):
            if loops[i].node_set & loops[j].node_set:
                mat[i, j] = mat[j, i] = True
    return TouchMatrix(mat)
