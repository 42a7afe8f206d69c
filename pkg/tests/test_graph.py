import json

import pytest

from sfgkit.errors import GraphFormatError, GraphStateError
from sfgkit.graph import (
    INVG,
    Branch,
    SfgGraph,
    augment_terminals,
    branch_lookup,
    check_invariants,
    close_graph,
    insert_parallel_nodes,
    parse_graph,
    parse_graph_data,
    prepare,
    preprocess,
    serialize_graph,
)
from sfgkit.poly import ONE, Poly, RationalFn


def simple_data(**over):
    data = {
        "nodes": [{"id": 1}, {"id": 2}, {"id": 3}],
        "branches": [
            {"from": 1, "to": 2, "num": [1], "den": [1, 1]},
            {"from": 2, "to": 3, "num": [2], "den": [1]},
        ],
    }
    data.update(over)
    return data


def test_parse_auto_detects_unique_terminals():
    g = parse_graph_data(simple_data())
    assert (g.input, g.output) == (1, 3)
    assert g.branches[0].gain.den.coeffs == (1.0, 1.0)


def test_parse_ambiguous_terminals_rejected():
    data = simple_data()
    data["branches"].append({"from": 3, "to": 1, "num": [1], "den": [1]})
    with pytest.raises(GraphFormatError, match="ambiguous"):
        parse_graph_data(data)
    # explicit terminals resolve it
    data.update(input=1, output=3)
    g = parse_graph_data(data)
    assert (g.input, g.output) == (1, 3)


def test_parse_rejects_duplicate_and_unknown_nodes():
    data = simple_data()
    data["nodes"].append({"id": 1})
    with pytest.raises(GraphFormatError, match="duplicate"):
        parse_graph_data(data)
    data = simple_data()
    data["branches"][0]["to"] = 9
    with pytest.raises(GraphFormatError):
        parse_graph_data(data)


def test_parse_rejects_reserved_marker():
    data = simple_data()
    data["branches"][0]["symbols"] = [INVG]
    with pytest.raises(GraphFormatError):
        parse_graph_data(data)


def test_parse_ignores_unknown_top_level_keys():
    data = simple_data(layout={"1": [10, 20]}, editor={"zoom": 2})
    g = parse_graph_data(data)
    assert len(g.branches) == 2


def test_parse_bad_json_text():
    with pytest.raises(GraphFormatError):
        parse_graph("{not json")


def test_serialize_round_trip():
    data = simple_data(input=1, output=3)
    data["branches"][0]["symbols"] = ["V"]
    g = parse_graph_data(data)
    again = parse_graph(serialize_graph(g))
    assert again == g


def test_serialize_drops_closing_branch():
    g = prepare(parse_graph_data(simple_data()))
    dumped = json.loads(serialize_graph(g))
    assert all(INVG not in (b.get("symbols") or []) for b in dumped["branches"])


def test_insert_parallel_nodes():
    branches = (
        Branch(0, 1, 2, RationalFn(Poly([1]), ONE), ()),
        Branch(1, 1, 2, RationalFn(Poly([5]), Poly([1, 1])), ("V",)),
        Branch(2, 2, 3, RationalFn(ONE, ONE), ()),
    )
    g = SfgGraph(nodes=(1, 2, 3), branches=branches, input=1, output=3)
    split = insert_parallel_nodes(g)
    assert len(split.nodes) == 4
    assert len(split.branches) == 4
    lookup = branch_lookup(split)  # raises if any parallels remain
    fresh = split.nodes[-1]
    assert lookup[(1, fresh)].gain.num.coeffs == (5.0,)
    assert lookup[(1, fresh)].symbols == ("V",)
    assert lookup[(fresh, 2)].gain.num.coeffs == (1.0,)
    # untouched graphs come back identical
    assert insert_parallel_nodes(split) is split


def test_augment_terminals_feedback_into_input():
    branches = (
        Branch(0, 1, 2, RationalFn(ONE, ONE), ()),
        Branch(1, 2, 1, RationalFn(Poly([-0.5]), ONE), ()),
        Branch(2, 2, 3, RationalFn(ONE, ONE), ()),
    )
    g = SfgGraph(nodes=(1, 2, 3), branches=branches, input=1, output=3)
    aug = augment_terminals(g)
    assert aug.input not in (1, 2, 3)
    assert not aug.in_branches(aug.input)
    assert aug.output == 3  # output had no outgoing branches: untouched


def test_augment_terminals_same_node_both_ways():
    g = SfgGraph(
        nodes=(1, 2),
        branches=(
            Branch(0, 1, 2, RationalFn(ONE, ONE), ()),
            Branch(1, 2, 1, RationalFn(ONE, ONE), ()),
        ),
        input=1,
        output=1,
    )
    aug = augment_terminals(g)
    assert aug.input != aug.output
    assert not aug.in_branches(aug.input)
    assert not aug.out_branches(aug.output)


def test_close_graph_once():
    g = preprocess(parse_graph_data(simple_data()))
    closed = close_graph(g)
    assert closed.closed
    closing = [b for b in closed.branches if INVG in b.symbols]
    assert len(closing) == 1
    assert closing[0].src == closed.output and closing[0].dst == closed.input
    with pytest.raises(GraphStateError):
        close_graph(closed)


def test_prepare_passes_invariants(cascade):
    check_invariants(prepare(cascade))


def test_branch_symbols_sorted_and_unique():
    b = Branch(0, 1, 2, RationalFn(ONE, ONE), ("Z", "A"))
    assert b.symbols == ("A", "Z")
    with pytest.raises(GraphFormatError):
        Branch(0, 1, 2, RationalFn(ONE, ONE), ("V", "V"))
