"""Closed-graph alternating sum and normalized transfer extraction.

For a closed graph the alternating sum over non-touching loop combinations

    f = 1 - (sum of single-loop gains) + (sum of pair products) - ...

vanishes, and f is linear in the distinguished 1/G marker carried by the
closing branch: f = A(s) - B(s) * (1/G). Splitting f on that marker and
clearing denominators yields the normalized transfer function G = B/A,
grouped per residual symbol monomial.

Sums are accumulated over a common denominator assembled from the distinct
branch-denominator factors (each taken at its maximum multiplicity), which
keeps coefficient growth linear in the graph instead of exponential in the
number of terms.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, replace

import numpy as np

from sfgkit.combos import ComboTable, generate_tables
from sfgkit.errors import (
    DegenerateDenominator,
    NoForwardPath,
    SingularAtSample,
)
from sfgkit.graph import INVG, SfgGraph, prepare
from sfgkit.loops import (
    DEFAULT_LOOP_CAP,
    Monomial,
    PLAIN,
    SymbolicGain,
    find_loops,
    invg_count,
    loop_gain,
    strip_invg,
    touch_matrix,
)
from sfgkit.poly import ONE, ZERO, Poly, RationalFn, prune

SUM_REL_TOL = 1e-12

_COND_LIMIT = 1e12


@dataclass(frozen=True)
class SymbolicRational:
    """Multilinear expression: one rational coefficient per symbol monomial."""

    terms: tuple[SymbolicGain, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "terms", tuple(sorted(self.terms, key=lambda t: t.monomial))
        )
        monos = [t.monomial for t in self.terms]
        if len(set(monos)) != len(monos):
            raise ValueError("duplicate monomial in symbolic rational")

    def term_map(self) -> dict[Monomial, RationalFn]:
        return {t.monomial: t.rational for t in self.terms}

    def evaluate(self, s0: complex, symbol_values: dict[str, complex] | None = None) -> complex:
        values = symbol_values or {}
        acc = 0.0 + 0.0j
        for t in self.terms:
            factor = 1.0 + 0.0j
            for sym in t.monomial:
                factor *= values[sym]
            acc += t.rational(s0) * factor
        return acc


def _as_key(p: Poly) -> tuple[float, ...]:
    return p.coeffs


def _sum_over_common_den(parts: list[tuple[float, Poly, tuple[Poly, ...]]],
                         ) -> tuple[Poly, Poly, tuple[Poly, ...]]:
    """Sum sign*num/prod(factors) terms over one shared denominator.

    The shared denominator takes each distinct factor polynomial at its
    maximum multiplicity; every numerator is multiplied by its complement.
    Returns (numerator sum, denominator, denominator factors).
    """
    lookup: dict[tuple[float, ...], Poly] = {}
    union: Counter[tuple[float, ...]] = Counter()
    counts = []
    for _, _, factors in parts:
        c: Counter[tuple[float, ...]] = Counter()
        for f in factors:
            key = _as_key(f)
            lookup[key] = f
            c[key] += 1
        counts.append(c)
        for key, k in c.items():
            union[key] = max(union[key], k)

    total = ZERO
    scale = 0.0
    for (sign, num, _), own in zip(parts, counts):
        cleared = num
        for key, k in (union - own).items():
            for _ in range(k):
                cleared = cleared * lookup[key]
        scale = max(scale, cleared.max_abs_coeff())
        total = total + (cleared if sign > 0 else -cleared)

    # Cancellation noise scales with the largest addend, not the result.
    total = prune(total, SUM_REL_TOL, scale=scale or None)

    den = ONE
    den_factors = []
    for key, k in sorted(union.items()):
        for _ in range(k):
            den = den * lookup[key]
            den_factors.append(lookup[key])
    return total, den, tuple(den_factors)


def shannon_sum(tables: list[ComboTable]) -> SymbolicRational:
    """Alternating sum 1 - G1 + G2 - ... accumulated per symbol monomial."""
    groups: dict[Monomial, list[tuple[float, Poly, tuple[Poly, ...]]]] = {
        PLAIN: [(1.0, ONE, ())]
    }
    for table in tables:
        sign = -1.0 if table.order % 2 else 1.0
        for row in table.rows:
            groups.setdefault(row.gain.monomial, []).append(
                (sign, row.gain.rational.num, row.gain.den_factors)
            )
    terms = []
    for mono in sorted(groups):
        num, den, factors = _sum_over_common_den(groups[mono])
        if num.is_zero:
            continue
        terms.append(SymbolicGain(mono, RationalFn(num, den), factors))
    return SymbolicRational(tuple(terms))


@dataclass(frozen=True)
class TransferFunction:
    """Normalized result: numerator and denominator coefficient maps.

    Each side maps a symbol monomial (1/G excluded) to a polynomial in s;
    both sides share one implicit cleared denominator, so G = B/A directly.
    """

    numerator: tuple[tuple[Monomial, Poly], ...]
    denominator: tuple[tuple[Monomial, Poly], ...]
    variable: str = "s"

    def __post_init__(self):
        object.__setattr__(self, "numerator", tuple(sorted(self.numerator)))
        object.__setattr__(self, "denominator", tuple(sorted(self.denominator)))
        for mono, _ in self.numerator + self.denominator:
            if invg_count(mono):
                raise ValueError("transfer-function monomials must not carry 1/G")
        if not self.denominator:
            raise DegenerateDenominator("transfer function with empty denominator")

    def num_map(self) -> dict[Monomial, Poly]:
        return dict(self.numerator)

    def den_map(self) -> dict[Monomial, Poly]:
        return dict(self.denominator)

    def symbols(self) -> set[str]:
        out: set[str] = set()
        for mono, _ in self.numerator + self.denominator:
            out.update(mono)
        return out

    @property
    def is_numeric(self) -> bool:
        return not self.symbols()

    def plain_parts(self) -> tuple[Poly, Poly]:
        """(B, A) for a fully numeric transfer function."""
        if not self.is_numeric:
            raise ValueError(
                f"transfer function still carries symbols {sorted(self.symbols())}; "
                "substitute them first"
            )
        b = self.num_map().get(PLAIN, ZERO)
        a = self.den_map().get(PLAIN)
        if a is None:
            raise DegenerateDenominator("no denominator polynomial")
        return b, a

    def evaluate(self, s0: complex, symbol_values: dict[str, complex] | None = None) -> complex:
        values = symbol_values or {}

        def side(entries):
            acc = 0.0 + 0.0j
            for mono, poly in entries:
                factor = 1.0 + 0.0j
                for sym in mono:
                    factor *= values[sym]
                acc += poly(s0) * factor
            return acc

        return side(self.numerator) / side(self.denominator)


def _leading_zero_count(p: Poly) -> int:
    n = 0
    for c in p.coeffs:
        if c != 0.0:
            return n
        n += 1
    return n


def _tidy_transfer(num: dict[Monomial, Poly], den: dict[Monomial, Poly],
                   variable: str) -> TransferFunction:
    """Shared cleanup: global pruning, common s^k cancellation, sign fix."""
    polys = list(num.values()) + list(den.values())
    global_max = max((p.max_abs_coeff() for p in polys), default=0.0)
    num = {m: prune(p, SUM_REL_TOL, scale=global_max or None) for m, p in num.items()}
    den = {m: prune(p, SUM_REL_TOL, scale=global_max or None) for m, p in den.items()}
    num = {m: p for m, p in num.items() if not p.is_zero}
    den = {m: p for m, p in den.items() if not p.is_zero}
    if not den:
        raise DegenerateDenominator(
            "the symbol-free part of the closed-graph sum vanished"
        )
    k = min(_leading_zero_count(p) for p in list(num.values()) + list(den.values()))
    if k:
        num = {m: Poly(p.coeffs[k:]) for m, p in num.items()}
        den = {m: Poly(p.coeffs[k:]) for m, p in den.items()}
    anchor = den.get(PLAIN) or den[min(den)]
    if anchor.coeffs[-1] < 0:
        num = {m: -p for m, p in num.items()}
        den = {m: -p for m, p in den.items()}
    return TransferFunction(tuple(num.items()), tuple(den.items()), variable)


def extract_transfer(f: SymbolicRational, variable: str = "s") -> TransferFunction:
    """Split the closed-graph sum on the 1/G marker and clear denominators.

    Terms carrying 1/G form the numerator B (sign flipped); the rest form
    the denominator A. The cleared common denominator cancels from B/A.
    """
    parts = [(1.0, t.rational.num, t.den_factors) for t in f.terms]
    if not parts:
        raise DegenerateDenominator("empty symbolic rational")
    lookup: dict[tuple[float, ...], Poly] = {}
    union: Counter[tuple[float, ...]] = Counter()
    counts = []
    for _, _, factors in parts:
        c: Counter[tuple[float, ...]] = Counter()
        for fac in factors:
            lookup[_as_key(fac)] = fac
            c[_as_key(fac)] += 1
        counts.append(c)
        for key, k in c.items():
            union[key] = max(union[key], k)

    num: dict[Monomial, Poly] = {}
    den: dict[Monomial, Poly] = {}
    for term, own in zip(f.terms, counts):
        cleared = term.rational.num
        for key, k in (union - own).items():
            for _ in range(k):
                cleared = cleared * lookup[key]
        if invg_count(term.monomial):
            mono = strip_invg(term.monomial)
            num[mono] = num.get(mono, ZERO) - cleared
        else:
            den[term.monomial] = den.get(term.monomial, ZERO) + cleared

    tf = _tidy_transfer(num, den, variable)
    if not tf.numerator:
        raise NoForwardPath()
    return tf


def scale_to_monic(tf: TransferFunction) -> TransferFunction:
    """Divide everything by the magnitude of A's plain leading coefficient."""
    den = tf.den_map()
    anchor = den.get(PLAIN) or den[min(den)]
    c = abs(anchor.coeffs[-1])
    if c == 0.0 or c == 1.0:
        return tf
    return TransferFunction(
        tuple((m, p.scale(1.0 / c)) for m, p in tf.numerator),
        tuple((m, p.scale(1.0 / c)) for m, p in tf.denominator),
        tf.variable,
    )


def _poly_pow(p: Poly, k: int) -> Poly:
    out = ONE
    for _ in range(k):
        out = out * p
    return out


def substitute_symbol(tf: TransferFunction, sym: str, value: RationalFn) -> TransferFunction:
    """Replace a symbol by a rational function of s.

    Monomials carrying the symbol pick up the value's numerator; all other
    monomials pick up its denominator (common-denominator clearing), after
    which monomials merge on the reduced symbol sets.
    """
    if sym == INVG:
        raise ValueError("the 1/G marker cannot be substituted")
    exps = [m.count(sym) for m, _ in tf.numerator + tf.denominator]
    top = max(exps, default=0)
    if top == 0:
        return tf

    def convert(entries) -> dict[Monomial, Poly]:
        out: dict[Monomial, Poly] = {}
        for mono, poly in entries:
            e = mono.count(sym)
            reduced = tuple(s for s in mono if s != sym)
            p = poly * _poly_pow(value.num, e) * _poly_pow(value.den, top - e)
            out[reduced] = out.get(reduced, ZERO) + p
        return out

    return _tidy_transfer(convert(tf.numerator), convert(tf.denominator), tf.variable)


def numeric_oracle(g: SfgGraph, s0: complex,
                   symbol_values: dict[str, complex] | None = None,
                   injections: dict[int, complex] | None = None) -> complex:
    """Independent check: solve the node equations directly at one point.

    Every node satisfies x_v = ext_v + sum of gain(u->v)(s0) * x_u, with a
    unit external injection at the input (or the given injection vector).
    Works on any unclosed graph, parallel branches included.
    """
    if g.closed:
        raise ValueError("numeric oracle runs on the unclosed graph")
    if g.output is None:
        raise ValueError("numeric oracle needs an output node")
    values = symbol_values or {}
    order = {n: i for i, n in enumerate(g.nodes)}
    n = len(g.nodes)
    mat = np.eye(n, dtype=complex)
    for b in g.branches:
        if INVG in b.symbols:
            raise ValueError("unclosed graph carries a 1/G branch")
        w = b.gain(s0)
        for sym in b.symbols:
            if sym not in values:
                raise ValueError(f"no numeric value supplied for symbol {sym!r}")
            w *= values[sym]
        mat[order[b.dst], order[b.src]] -= w
    rhs = np.zeros(n, dtype=complex)
    if injections is None:
        if g.input is None:
            raise ValueError("no input node and no explicit injections")
        injections = {g.input: 1.0}
    for node, amount in injections.items():
        rhs[order[node]] += amount

    try:
        x = np.linalg.solve(mat, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularAtSample(f"node equations singular at s0={s0}") from exc
    if not np.all(np.isfinite(x)) or np.linalg.cond(mat) > _COND_LIMIT:
        raise SingularAtSample(f"node equations ill-conditioned at s0={s0}")
    return complex(x[order[g.output]])


@dataclass(frozen=True)
class PipelineResult:
    """Everything the six-step run produced, for inspection and debugging."""

    graph: SfgGraph
    loops: list
    tables: list[ComboTable]
    closed_sum: SymbolicRational
    transfer: TransferFunction


def run_pipeline(g: SfgGraph, variable: str = "s",
                 loop_cap: int = DEFAULT_LOOP_CAP) -> PipelineResult:
    """Preprocess, close, enumerate loops, combine, sum, and extract."""
    closed = g if g.closed else prepare(g)
    loops = find_loops(closed, cap=loop_cap)
    gains = [loop_gain(lp, closed) for lp in loops]
    touch = touch_matrix(loops)
    tables = generate_tables(loops, touch, gains)
    f = shannon_sum(tables)
    tf = extract_transfer(f, variable=variable)
    return PipelineResult(closed, loops, tables, f, tf)


def compute_transfer(g: SfgGraph, variable: str = "s",
                     loop_cap: int = DEFAULT_LOOP_CAP) -> TransferFunction:
    return run_pipeline(g, variable=variable, loop_cap=loop_cap).transfer


def transfer_multi_input(g: SfgGraph, inputs: list[int], output: int,
                         variable: str = "s") -> list[TransferFunction]:
    """One transfer function per input node, against a fixed output."""
    if g.closed:
        raise ValueError("multi-input runs start from the unclosed graph")
    out = []
    for node in inputs:
        if node not in g.nodes:
            raise ValueError(f"input node {node} is not declared")
        if output not in g.nodes:
            raise ValueError(f"output node {output} is not declared")
        out.append(compute_transfer(replace(g, input=node, output=output), variable))
    return out


def compose_response(parts: list[tuple[TransferFunction, RationalFn]]) -> SymbolicRational:
    """Sum of transfer * input products over a common denominator.

    Denominators must be symbol-free (symbolic numerators are fine).
    """
    groups: dict[Monomial, list[tuple[float, Poly, tuple[Poly, ...]]]] = {}
    for tf, forcing in parts:
        den = tf.den_map()
        if set(den) != {PLAIN}:
            raise ValueError("compose_response needs symbol-free denominators")
        a = den[PLAIN]
        for mono, poly in tf.numerator:
            factors = []
            if a != ONE:
                factors.append(a)
            if forcing.den != ONE:
                factors.append(forcing.den)
            groups.setdefault(mono, []).append(
                (1.0, poly * forcing.num, tuple(factors))
            )
    terms = []
    for mono in sorted(groups):
        num, den, factors = _sum_over_common_den(groups[mono])
        if num.is_zero:
            continue
        terms.append(SymbolicGain(mono, RationalFn(num, den), factors))
    return SymbolicRational(tuple(terms))


def mono_label(mono: Monomial) -> str:
    return "*".join(mono) if mono else "1"


def transfer_to_data(tf: TransferFunction) -> dict:
    """Structured output form shared by the CLI and the service."""
    terms = []
    for mono, poly in tf.numerator:
        terms.append({
            "symbols": list(mono),
            "numerator": list(poly.coeffs),
            "denominator_side": "B",
        })
    for mono, poly in tf.denominator:
        terms.append({
            "symbols": list(mono),
            "numerator": list(poly.coeffs),
            "denominator_side": "A",
        })
    return {"variable": tf.variable, "terms": terms}


def transfer_to_json(tf: TransferFunction) -> str:
    return json.dumps(transfer_to_data(tf), sort_keys=True, separators=(",", ":"))


def transfer_from_data(data: object) -> TransferFunction:
    """Inverse of transfer_to_data, for inline/service-supplied functions."""
    if not isinstance(data, dict) or "terms" not in data:
        raise ValueError("transfer data must be an object with a 'terms' list")
    variable = data.get("variable", "s")
    if variable not in ("s", "z"):
        raise ValueError(f"unknown variable {variable!r}")
    num: dict[Monomial, Poly] = {}
    den: dict[Monomial, Poly] = {}
    for i, term in enumerate(data["terms"]):
        where = f"term #{i}"
        if not isinstance(term, dict):
            raise ValueError(f"{where}: must be an object")
        side = term.get("denominator_side")
        if side not in ("B", "A"):
            raise ValueError(f"{where}: denominator_side must be 'B' or 'A'")
        mono = tuple(sorted(term.get("symbols", [])))
        try:
            poly = Poly(term.get("numerator", []))
        except (TypeError, ValueError) as exc:
            raise ValueError(f"{where}: bad coefficients: {exc}") from exc
        target = num if side == "B" else den
        target[mono] = target.get(mono, ZERO) + poly
    return TransferFunction(tuple(num.items()), tuple(den.items()), variable)


def format_transfer_table(tf: TransferFunction) -> str:
    """Human-readable coefficient table: one row per power of s."""
    monos = sorted({m for m, _ in tf.numerator} | {m for m, _ in tf.denominator})
    num, den = tf.num_map(), tf.den_map()
    v = tf.variable
    columns = [(f"B({v}): {mono_label(m)}", num.get(m, ZERO)) for m in monos]
    columns += [(f"A({v}): {mono_label(m)}", den.get(m, ZERO)) for m in monos]
    depth = max(len(p.coeffs) for _, p in columns)
    headers = [f"Power of {v}"] + [name for name, _ in columns]
    rows = []
    for k in range(depth):
        cells = [str(k)]
        for _, poly in columns:
            c = poly.coeffs[k] if k < len(poly.coeffs) else 0.0
            cells.append(f"{c:.6f}")
        rows.append(cells)
    widths = [max(len(headers[i]), max(len(r[i]) for r in rows)) for i in range(len(headers))]
    lines = ["  ".join(h.rjust(w) for h, w in zip(headers, widths))]
    for r in rows:
        lines.append("  ".join(c.rjust(w) for c, w in zip(r, widths)))
    return "\n".join(lines)
