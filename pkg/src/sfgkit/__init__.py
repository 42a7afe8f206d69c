"""Signal-flow-graph transfer functions via the closed-graph alternating sum.

Build a graph (or load one from JSON), run the pipeline, and get a
normalized transfer function B(s)/A(s) with unresolved branch symbols kept
apart, plus frequency-domain analyses on the numeric result.
"""

from sfgkit.analysis import (
    FrequencyPoint,
    RootSet,
    RouthReport,
    default_grid,
    frequency_response,
    poles_zeros,
    reduce_order_cf,
    routh_stability,
    taylor_coefficients,
)
from sfgkit.combos import ComboRow, ComboTable, generate_tables
from sfgkit.errors import (
    DegenerateDenominator,
    DegreeCapError,
    EvaluationAtPole,
    GraphFormatError,
    GraphStateError,
    LoopLimitError,
    NoForwardPath,
    PolyFormatError,
    SfgError,
    SingularAtSample,
    SingularQuotient,
)
from sfgkit.graph import (
    INVG,
    Branch,
    SfgGraph,
    augment_terminals,
    close_graph,
    insert_parallel_nodes,
    parse_graph,
    parse_graph_data,
    prepare,
    preprocess,
    serialize_graph,
)
from sfgkit.loops import (
    LoopRec,
    SymbolicGain,
    TouchMatrix,
    find_loops,
    loop_gain,
    touch_matrix,
)
from sfgkit.poly import (
    ONE,
    ZERO,
    Poly,
    RationalFn,
    parse_rational_text,
    format_rational_text,
    tidy,
)
from sfgkit.shannon import (
    PipelineResult,
    SymbolicRational,
    TransferFunction,
    compose_response,
    compute_transfer,
    extract_transfer,
    format_transfer_table,
    numeric_oracle,
    run_pipeline,
    scale_to_monic,
    shannon_sum,
    substitute_symbol,
    transfer_from_data,
    transfer_multi_input,
    transfer_to_data,
    transfer_to_json,
)

__version__ = "1.0.0"

__all__ = [name for name in dir() if not name.startswith("_")]
