import pytest

from sfgkit.graph import Branch, SfgGraph
from sfgkit.poly import Poly, RationalFn


def cascade_graph() -> SfgGraph:
    """Four stages in series: 1/(s+1), (s+4)/(s+2), a symbolic V, and 2.

    Multiplying the stages out by hand and clearing the two denominators
    gives B = (2s+8)*V against A = (s+1)(s+2) = s^2+3s+2, which is the
    reference the pipeline must reproduce coefficient for coefficient.
    """
    branches = (
        Branch(0, 1, 2, RationalFn(Poly([1]), Poly([1, 1])), ()),
        Branch(1, 2, 3, RationalFn(Poly([4, 1]), Poly([2, 1])), ()),
        Branch(2, 3, 4, RationalFn(Poly([1]), Poly([1])), ("V",)),
        Branch(3, 4, 5, RationalFn(Poly([2]), Poly([1])), ()),
    )
    return SfgGraph(nodes=(1, 2, 3, 4, 5), branches=branches, input=1, output=5)


@pytest.fixture
def cascade() -> SfgGraph:
    return cascade_graph()


CASCADE_FILE = {
    "nodes": [{"id": 1, "label": "in"}, {"id": 2}, {"id": 3}, {"id": 4},
              {"id": 5, "label": "out"}],
    "branches": [
        {"from": 1, "to": 2, "num": [1], "den": [1, 1]},
        {"from": 2, "to": 3, "num": [4, 1], "den": [2, 1]},
        {"from": 3, "to": 4, "num": [1], "den": [1], "symbols": ["V"]},
        {"from": 4, "to": 5, "num": [2], "den": [1]},
    ],
    "input": 1,
    "output": 5,
}


@pytest.fixture
def cascade_file(tmp_path):
    import json

    path = tmp_path / "cascade.json"
    path.write_text(json.dumps(CASCADE_FILE))
    return str(path)
