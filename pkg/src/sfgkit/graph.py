"""Signal-flow-graph data model, file ingestion, and preprocessing.

A graph file is JSON with order-insensitive keys::

    {
      "nodes":    [{"id": 1, "label": "in"}, ...],
      "branches": [{"from": 1, "to": 2, "num": [1], "den": [1,1],
                    "symbols": ["V"]}, ...],
      "input":    1,
      "output":   5,
      "symbols":  ["V"]
    }

Coefficient lists are ascending powers of s. Unknown top-level keys (for
example an editor's layout sidecar) are ignored. The reserved symbol name
"1/G" marks the closure branch and is rejected in input files.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, replace
from typing import Iterable, Mapping

from sfgkit.errors import GraphFormatError, GraphStateError
from sfgkit.poly import ONE, Poly, RationalFn

#: Reserved symbol carried by the closing output-to-input branch.
INVG = "1/G"


@dataclass(frozen=True)
class Branch:
    id: int
    src: int
    dst: int
    gain: RationalFn
    symbols: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(sorted(self.symbols)))
        if len(set(self.symbols)) != len(self.symbols):
            raise GraphFormatError(
                f"branch {self.src}->{self.dst}: repeated symbol on one branch "
                "(chain branches to model higher powers)"
            )


@dataclass(frozen=True)
class SfgGraph:
    """Immutable SFG; transforms return new graphs."""

    nodes: tuple[int, ...]
    branches: tuple[Branch, ...]
    input: int
    output: int
    labels: tuple[tuple[int, str], ...] = ()
    symbols: tuple[str, ...] = ()
    closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes)))

    def label_of(self, node: int) -> str | None:
        for nid, lab in self.labels:
            if nid == node:
                return lab
        return None

    def out_branches(self, node: int) -> list[Branch]:
        return [b for b in self.branches if b.src == node]

    def in_branches(self, node: int) -> list[Branch]:
        return [b for b in self.branches if b.dst == node]

    def next_node_id(self) -> int:
        # Fresh ids are allocated above the maximum existing id.
        return max(self.nodes) + 1

    def next_branch_id(self) -> int:
        return max((b.id for b in self.branches), default=-1) + 1


def _require(cond: bool, msg: str):
    if not cond:
        raise GraphFormatError(msg)


def parse_graph_data(data: object) -> SfgGraph:
    """Build a validated, unclosed graph from decoded file content."""
    _require(isinstance(data, dict), "graph file must be a JSON object")
    assert isinstance(data, dict)

    raw_nodes = data.get("nodes")
    _require(isinstance(raw_nodes, list) and raw_nodes, "missing or empty 'nodes' list")
    nodes: list[int] = []
    labels: list[tuple[int, str]] = []
    for entry in raw_nodes:
        _require(isinstance(entry, dict) and "id" in entry, "node entries need an 'id'")
        nid = entry["id"]
        _require(isinstance(nid, int), f"node id {nid!r} is not an integer")
        _require(nid not in nodes, f"duplicate node id {nid}")
        nodes.append(nid)
        if entry.get("label") is not None:
            _require(isinstance(entry["label"], str), f"node {nid}: label must be a string")
            labels.append((nid, entry["label"]))
    node_set = set(nodes)

    declared: list[str] = []
    for sym in data.get("symbols", []) or []:
        _require(isinstance(sym, str) and sym, f"bad symbol name {sym!r}")
        _require(sym != INVG, f"symbol name {INVG!r} is reserved for graph closure")
        _require(sym not in declared, f"duplicate symbol {sym!r}")
        declared.append(sym)

    branches: list[Branch] = []
    for i, entry in enumerate(data.get("branches", []) or []):
        _require(isinstance(entry, dict), f"branch #{i}: entry must be an object")
        where = f"branch #{i}"
        for key in ("from", "to", "num", "den"):
            _require(key in entry, f"{where}: missing '{key}'")
        src, dst = entry["from"], entry["to"]
        _require(src in node_set, f"{where}: unknown node {src}")
        _require(dst in node_set, f"{where}: unknown node {dst}")
        try:
            gain = RationalFn(Poly(entry["num"]), Poly(entry["den"]))
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise GraphFormatError(f"{where}: bad gain coefficients: {exc}") from exc
        syms = entry.get("symbols", []) or []
        _require(isinstance(syms, list), f"{where}: 'symbols' must be a list")
        for sym in syms:
            _require(isinstance(sym, str) and sym, f"{where}: bad symbol {sym!r}")
            _require(sym != INVG, f"{where}: symbol name {INVG!r} is reserved")
            if sym not in declared:
                declared.append(sym)
        branches.append(Branch(i, src, dst, gain, tuple(syms)))

    in_deg: dict[int, int] = defaultdict(int)
    out_deg: dict[int, int] = defaultdict(int)
    for b in branches:
        out_deg[b.src] += 1
        in_deg[b.dst] += 1

    input_node = data.get("input")
    if input_node is None:
        candidates = [n for n in nodes if in_deg[n] == 0]
        _require(
            len(candidates) == 1,
            "no 'input' given and the graph is ambiguous: "
            f"{len(candidates)} nodes have zero in-degree",
        )
        input_node = candidates[0]
    _require(input_node in node_set, f"input node {input_node} is not declared")

    output_node = data.get("output")
    if output_node is None:
        candidates = [n for n in nodes if out_deg[n] == 0]
        _require(
            len(candidates) == 1,
            "no 'output' given and the graph is ambiguous: "
            f"{len(candidates)} nodes have zero out-degree",
        )
        output_node = candidates[0]
    _require(output_node in node_set, f"output node {output_node} is not declared")

    return SfgGraph(
        nodes=tuple(nodes),
        branches=tuple(branches),
        input=input_node,
        output=output_node,
        labels=tuple(labels),
        symbols=tuple(declared),
    )


def parse_graph(text: str) -> SfgGraph:
    """Parse graph file content into an unclosed, unpreprocessed graph."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"malformed graph file: {exc}") from exc
    return parse_graph_data(data)


def graph_to_data(g: SfgGraph) -> dict:
    labels = dict(g.labels)
    data: dict = {
        "nodes": [
            {"id": n, "label": labels[n]} if n in labels else {"id": n}
            for n in g.nodes
        ],
        "branches": [
            {
                "from": b.src,
                "to": b.dst,
                "num": list(b.gain.num.coeffs),
                "den": list(b.gain.den.coeffs),
                **({"symbols": list(b.symbols)} if b.symbols else {}),
            }
            for b in g.branches
            if INVG not in b.symbols
        ],
        "input": g.input,
        "output": g.output,
    }
    if g.symbols:
        data["symbols"] = list(g.symbols)
    return data


def serialize_graph(g: SfgGraph) -> str:
    """Canonical file form; parse_graph(serialize_graph(g)) reproduces g."""
    return json.dumps(graph_to_data(g), indent=2) + "\n"


def insert_parallel_nodes(g: SfgGraph) -> SfgGraph:
    """Split parallel branches by inserting fresh pass-through nodes.

    For each ordered node pair with two or more branches, every branch after
    the first is rerouted through a fresh node: the original gain keeps the
    first hop, the second hop gets unit gain. The transfer is unchanged.
    """
    if g.closed:
        raise GraphStateError("parallel insertion must run before closing")
    seen: set[tuple[int, int]] = set()
    new_nodes = list(g.nodes)
    rerouted: list[Branch] = []
    unit_hops: list[Branch] = []
    next_node = g.next_node_id()
    next_branch = g.next_branch_id()
    for b in g.branches:
        key = (b.src, b.dst)
        if key not in seen:
            seen.add(key)
            rerouted.append(b)
            continue
        fresh = next_node
        next_node += 1
        new_nodes.append(fresh)
        rerouted.append(replace(b, dst=fresh))
        unit_hops.append(Branch(next_branch, fresh, b.dst, RationalFn(ONE, ONE)))
        next_branch += 1
    if not unit_hops:
        return g
    return replace(g, nodes=tuple(new_nodes), branches=tuple(rerouted + unit_hops))


def augment_terminals(g: SfgGraph) -> SfgGraph:
    """Give the graph a proper source and sink.

    If the designated input has incoming branches (or coincides with the
    output), a fresh node with a unit-gain branch into the old input becomes
    the input; symmetrically for the output.
    """
    if g.closed:
        raise GraphStateError("terminal augmentation must run before closing")
    out = g
    both = g.input == g.output
    if both or out.in_branches(out.input):
        fresh = out.next_node_id()
        bid = out.next_branch_id()
        out = replace(
            out,
            nodes=tuple(out.nodes) + (fresh,),
            branches=tuple(out.branches) + (Branch(bid, fresh, out.input, RationalFn(ONE, ONE)),),
            input=fresh,
        )
    if both or out.out_branches(out.output):
        fresh = out.next_node_id()
        bid = out.next_branch_id()
        out = replace(
            out,
            nodes=tuple(out.nodes) + (fresh,),
            branches=tuple(out.branches) + (Branch(bid, out.output, fresh, RationalFn(ONE, ONE)),),
            output=fresh,
        )
    return out


def close_graph(g: SfgGraph) -> SfgGraph:
    """Add the closing branch (output -> input) carrying the 1/G marker."""
    if g.closed:
        raise GraphStateError("graph is already closed")
    closing = Branch(g.next_branch_id(), g.output, g.input, RationalFn(ONE, ONE), (INVG,))
    return replace(g, branches=tuple(g.branches) + (closing,), closed=True)


def preprocess(g: SfgGraph) -> SfgGraph:
    """Parallel-branch insertion followed by terminal augmentation."""
    return augment_terminals(insert_parallel_nodes(g))


def prepare(g: SfgGraph) -> SfgGraph:
    """Full preprocessing plus closure; ready for loop enumeration."""
    return close_graph(preprocess(g))


def check_invariants(g: SfgGraph) -> None:
    """Assert the structural invariants of a preprocessed graph."""
    node_set = set(g.nodes)
    pairs: set[tuple[int, int]] = set()
    invg_branches = []
    for b in g.branches:
        assert b.src in node_set and b.dst in node_set, "dangling branch endpoint"
        assert (b.src, b.dst) not in pairs, f"parallel branches {b.src}->{b.dst}"
        pairs.add((b.src, b.dst))
        if INVG in b.symbols:
            invg_branches.append(b)
    incoming = [b for b in g.in_branches(g.input) if INVG not in b.symbols]
    outgoing = [b for b in g.out_branches(g.output) if INVG not in b.symbols]
    assert not incoming, "input node has incoming branches"
    assert not outgoing, "output node has outgoing branches"
    if g.closed:
        assert len(invg_branches) == 1, "closed graph needs exactly one 1/G branch"
        b = invg_branches[0]
        assert (b.src, b.dst) == (g.output, g.input), "1/G branch must run output->input"
        assert b.gain.num == ONE and b.gain.den == ONE, "1/G branch rational part must be 1"
    else:
        assert not invg_branches, "unclosed graph carries a 1/G branch"


def branch_lookup(g: SfgGraph) -> Mapping[tuple[int, int], Branch]:
    """Ordered-pair index; valid once parallel branches are gone."""
    table: dict[tuple[int, int], Branch] = {}
    for b in g.branches:
        if (b.src, b.dst) in table:
            raise GraphStateError("graph still has parallel branches")
        table[(b.src, b.dst)] = b
    return table


def adjacency(g: SfgGraph) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {n: [] for n in g.nodes}
    for b in g.branches:
        adj[b.src].append(b.dst)
    for n in adj:
        adj[n].sort()
    return adj
