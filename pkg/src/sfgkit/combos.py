"""Pairwise non-touching loop combinations, order by order.

Order 1 lists the loops themselves; order 2 is built by a pair scan; every
higher order extends the previous one, so each new row's gain is a single
product on top of its parent row's gain. Candidates for extending a row are
restricted to loops that pair (order-2) with every row member, which makes
the pairwise non-touching check implicit.
"""

from __future__ import annotations

from dataclasses import dataclass

from sfgkit.loops import LoopRec, SymbolicGain, TouchMatrix


@dataclass(frozen=True)
class ComboRow:
    loops: tuple[int, ...]  # strictly ascending loop indices
    gain: SymbolicGain


@dataclass(frozen=True)
class ComboTable:
    order: int
    rows: tuple[ComboRow, ...]

    def __len__(self) -> int:
        return len(self.rows)


def combos_order1(loops: list[LoopRec], gains: list[SymbolicGain]) -> ComboTable:
    rows = tuple(ComboRow((lp.index,), gains[lp.index]) for lp in loops)
    return ComboTable(1, rows)


def combos_order2(loops: list[LoopRec], touch: TouchMatrix,
                  gains: list[SymbolicGain]) -> ComboTable:
    rows = []
    n = len(loops)
    for i in range(n):
        for j in range(i + 1, n):
            if not touch.touch(i, j):
                rows.append(ComboRow((i, j), gains[i] * gains[j]))
    return ComboTable(2, rows=tuple(rows))


def _partners(table2: ComboTable, n: int) -> list[set[int]]:
    partners: list[set[int]] = [set() for _ in range(n)]
    for row in table2.rows:
        i, j = row.loops
        partners[i].add(j)
        partners[j].add(i)
    return partners


def combos_extend(table_i: ComboTable, touch: TouchMatrix,
                  gains: list[SymbolicGain],
                  partners: list[set[int]] | None = None) -> ComboTable:
    """Extend an order-i table (i >= 2) to order i+1.

    `partners` is the order-2 adjacency (loops pairing with each loop); it is
    rebuilt from `touch` when not supplied.
    """
    if table_i.order < 2:
        raise ValueError("extension starts from an order-2 table")
    n = len(touch)
    if partners is None:
        partners = [
            {j for j in range(n) if j != i and not touch.touch(i, j)}
            for i in range(n)
        ]
    rows = []
    for row in table_i.rows:
        cands: set[int] | None = None
        for member in row.loops:
            cands = partners[member] if cands is None else cands & partners[member]
            if not cands:
                break
        if not cands:
            continue
        top = row.loops[-1]
        for cand in sorted(cands):
            if cand > top:
                rows.append(ComboRow(row.loops + (cand,), row.gain * gains[cand]))
    return ComboTable(table_i.order + 1, tuple(rows))


def generate_tables(loops: list[LoopRec], touch: TouchMatrix,
                    gains: list[SymbolicGain]) -> list[ComboTable]:
    """All nonempty orders, stopping at the first empty one."""
    tables: list[ComboTable] = []
    t1 = combos_order1(loops, gains)
    if not t1.rows:
        return tables
    tables.append(t1)
    t2 = combos_order2(loops, touch, gains)
    if not t2.rows:
        return tables
    tables.append(t2)
    partners = _partners(t2, len(loops))
    current = t2
    while True:
        nxt = combos_extend(current, touch, gains, partners)
        if not nxt.rows:
            return tables
        tables.append(nxt)
        current = nxt
