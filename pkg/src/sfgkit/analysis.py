"""Classical analyses over a numeric transfer function B(s)/A(s).

Everything here takes plain coefficient polynomials; symbolic transfer
functions must have their symbols substituted first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from sfgkit.errors import EvaluationAtPole, SingularQuotient
from sfgkit.poly import Poly

DEN_FLOOR = 1e-300


@dataclass(frozen=True)
class FrequencyPoint:
    omega: float
    value: complex
    mag_db: float
    phase_deg: float


def default_grid(wmin: float = 1e-2, wmax: float = 1e2, points: int = 400) -> np.ndarray:
    if not (wmin > 0 and wmax > wmin and points >= 2):
        raise ValueError("frequency grid needs 0 < wmin < wmax and at least 2 points")
    return np.logspace(math.log10(wmin), math.log10(wmax), points)


def frequency_response(b: Poly, a: Poly, omegas=None) -> list[FrequencyPoint]:
    """Evaluate B/A along s = j*omega with unwrapped phase in degrees."""
    grid = default_grid() if omegas is None else np.asarray(list(omegas), dtype=float)
    values = []
    for w in grid:
        s0 = 1j * w
        den = a(s0)
        if abs(den) < DEN_FLOOR:
            raise EvaluationAtPole(f"denominator vanishes at omega={w}")
        values.append(b(s0) / den)
    values = np.asarray(values)
    mags = np.abs(values)
    with np.errstate(divide="ignore"):
        mag_db = 20.0 * np.log10(mags)
    phase_deg = np.degrees(np.unwrap(np.angle(values)))
    return [
        FrequencyPoint(float(w), complex(v), float(m), float(p))
        for w, v, m, p in zip(grid, values, mag_db, phase_deg)
    ]


# Routh array entries are polynomials in a vanishing positive epsilon,
# stored as ascending coefficient tuples. The limit sign as eps -> 0+ is
# the sign of the first nonzero coefficient.
Eps = tuple[float, ...]

_EPS_TOL = 1e-12


def _eps_trim(e: Eps, scale: float) -> Eps:
    tol = _EPS_TOL * scale if scale > 0 else 0.0
    out = tuple(0.0 if abs(c) <= tol else c for c in e)
    while out and out[-1] == 0.0:
        out = out[:-1]
    return out


def _eps_sign(e: Eps) -> int:
    for c in e:
        if c != 0.0:
            return 1 if c > 0 else -1
    return 0


def _eps_limit(e: Eps) -> float:
    return e[0] if e else 0.0


def _eps_mul(a: Eps, b: Eps) -> Eps:
    if not a or not b:
        return ()
    out = [0.0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


def _eps_sub(a: Eps, b: Eps) -> Eps:
    n = max(len(a), len(b))
    return tuple(
        (a[i] if i < len(a) else 0.0) - (b[i] if i < len(b) else 0.0)
        for i in range(n)
    )


def _eps_scale(a: Eps, k: float) -> Eps:
    return tuple(c * k for c in a)


def _row_scale(row: list[Eps]) -> float:
    return max((abs(c) for e in row for c in e), default=0.0)


@dataclass(frozen=True)
class RouthReport:
    verdict: str  # "stable" | "marginal" | "unstable"
    sign_changes: int
    first_column: list[float]
    rows: list[list[float]]
    notes: list[str] = field(default_factory=list)


def routh_stability(a: Poly) -> RouthReport:
    """Routh array with cross-multiplied rows and epsilon bookkeeping.

    Rows are built without division; the accumulated positive/negative row
    factors are tracked separately so first-column signs come out exactly
    as in the classical divided scheme. A zero pivot in a nonzero row is
    replaced by +epsilon; an all-zero row is replaced by the derivative of
    its auxiliary polynomial and caps the verdict at marginal.
    """
    coeffs = list(a.coeffs)
    if not coeffs or all(c == 0.0 for c in coeffs):
        raise ValueError("stability of the zero polynomial is undefined")
    notes: list[str] = []

    origin_roots = 0
    while coeffs[0] == 0.0:
        coeffs.pop(0)
        origin_roots += 1
    if origin_roots:
        notes.append(f"{origin_roots} root(s) at s=0 factored out")

    if coeffs[-1] < 0:
        coeffs = [-c for c in coeffs]
        notes.append("polynomial negated so the leading coefficient is positive")

    n = len(coeffs) - 1
    if n == 0:
        verdict = "marginal" if origin_roots else "stable"
        return RouthReport(verdict, 0, [coeffs[0]], [[coeffs[0]]], notes)

    # Descending powers; row 0 holds s^n, s^(n-2), ..., row 1 the rest.
    desc = coeffs[::-1]
    row0 = [(c,) for c in desc[0::2]]
    row1 = [(c,) for c in desc[1::2]]
    width = len(row0)
    row1 += [()] * (width - len(row1))
    rows: list[list[Eps]] = [row0, row1]

    degenerate = False
    power = n - 1
    while len(rows) < n + 1:
        prev, cur = rows[-2], rows[-1]
        if all(not e for e in cur):
            # Even/odd factor: differentiate the auxiliary polynomial read
            # off the row above (powers power+1, power-1, ...).
            degenerate = True
            m = power + 1
            cur = [_eps_scale(e, float(m - 2 * j)) for j, e in enumerate(prev)]
            cur = [e if _eps_sign(e) else () for e in cur]
            rows[-1] = cur
            notes.append(
                f"zero row at s^{power}; replaced with the derivative of the "
                f"auxiliary polynomial of degree {m}"
            )
        if not cur[0]:
            degenerate = True
            cur[0] = (0.0, 1.0)
            notes.append(f"zero pivot at s^{power} replaced with +epsilon")
        nxt: list[Eps] = []
        scale = _row_scale(prev) * _row_scale(cur)
        for j in range(width - 1):
            e = _eps_sub(_eps_mul(cur[0], prev[j + 1]), _eps_mul(prev[0], cur[j + 1]))
            nxt.append(_eps_trim(e, scale))
        nxt.append(())
        # Normalize magnitudes; any positive factor preserves limit signs.
        top = _row_scale(nxt)
        if top > 0:
            nxt = [_eps_scale(e, 1.0 / top) for e in nxt]
        rows.append(nxt)
        power -= 1

    # Undo the sign of the accumulated cross-multiplication factors: the
    # stored row i equals the classical row times f_i, with
    # f_i = f_(i-1) * f_(i-2) * (classical pivot of row i-1).
    factor_signs = [1, 1]
    true_signs = []
    first_col = []
    for i, row in enumerate(rows):
        if i >= 2:
            pivot_true = true_signs[i - 1]
            factor_signs.append(factor_signs[i - 1] * factor_signs[i - 2] * pivot_true)
        s = _eps_sign(row[0]) * factor_signs[i]
        true_signs.append(s)
        first_col.append(_eps_limit(row[0]) * factor_signs[i])

    sign_changes = 0
    last = 0
    for s in true_signs:
        if s == 0:
            continue
        if last and s != last:
            sign_changes += 1
        last = s

    if sign_changes > 0:
        verdict = "unstable"
    elif degenerate or origin_roots:
        verdict = "marginal"
    else:
        verdict = "stable"
    limit_rows = [[_eps_limit(e) for e in row] for row in rows]
    return RouthReport(verdict, sign_changes, first_col, limit_rows, notes)


@dataclass(frozen=True)
class RootSet:
    zeros: list[complex]
    poles: list[complex]
    zero_residuals: list[float]
    pole_residuals: list[float]


def _roots_of(p: Poly) -> tuple[list[complex], list[float]]:
    if p.degree < 1:
        return [], []
    roots = np.roots(p.coeffs[::-1])
    roots = sorted((complex(r) for r in roots), key=lambda r: (r.real, r.imag))
    top = p.max_abs_coeff()
    residuals = [
        abs(p(r)) / (top * max(1.0, abs(r)) ** p.degree) for r in roots
    ]
    return roots, residuals


def poles_zeros(b: Poly, a: Poly) -> RootSet:
    """Numerator and denominator roots with scaled backward residuals."""
    zeros, zres = _roots_of(b)
    poles, pres = _roots_of(a)
    return RootSet(zeros, poles, zres, pres)


def taylor_coefficients(b: Poly, a: Poly, count: int) -> list[float]:
    """Series of B/A about s=0 by ascending synthetic division."""
    a0 = a.coeffs[0]
    if a0 == 0.0:
        raise SingularQuotient("series about s=0 needs a nonzero A(0)")
    out: list[float] = []
    for k in range(count):
        bk = b.coeffs[k] if k < len(b.coeffs) else 0.0
        acc = bk
        for j in range(1, k + 1):
            aj = a.coeffs[j] if j < len(a.coeffs) else 0.0
            acc -= aj * out[k - j]
        out.append(acc / a0)
    return out


def _shift_down(p: Poly) -> Poly:
    # Constant term is known to cancel; drop any float residue with it.
    return Poly(p.coeffs[1:]) if len(p.coeffs) > 1 else Poly(())


def reduce_order_cf(b: Poly, a: Poly, r: int) -> tuple[Poly, Poly]:
    """Low-frequency model reduction by continued-fraction truncation.

    Expands A/B about s=0 into quotients h1, h2, ... (dividing constant
    terms, removing the cancelled constant, advancing one power of s per
    step), keeps the first 2r, and reconvolves. The reduced function has
    denominator degree r, matches the first 2r series coefficients of B/A
    at s=0, and is returned with its denominator constant term scaled to 1.
    """
    if r < 1:
        raise ValueError("target order must be at least 1")
    if r >= max(a.degree, 1):
        raise ValueError("target order must be below the denominator degree")
    x, y = a, b
    quotients: list[float] = []
    while len(quotients) < 2 * r:
        if y.is_zero:
            break  # terminated early: the function is exactly this order
        y0 = y.coeffs[0]
        if abs(y0) <= 1e-13 * y.max_abs_coeff():
            raise SingularQuotient(
                f"constant term vanishes at quotient {len(quotients) + 1}"
            )
        h = x.coeffs[0] / y0
        quotients.append(h)
        rem = x - y.scale(h)
        x, y = y, _shift_down(rem)

    if not quotients:
        raise SingularQuotient("no quotients available")

    # T = h_k + s / (h_(k+1) + s / (...)) reconvolved bottom-up; B/A = 1/T.
    t_num, t_den = Poly((quotients[-1],)), Poly((1.0,))
    for h in reversed(quotients[:-1]):
        t_num, t_den = t_num.scale(h) + t_den.shift_up(1), t_num
    rb, ra = t_den, t_num
    if ra.coeffs and ra.coeffs[0] != 0.0:
        c = ra.coeffs[0]
        rb, ra = rb.scale(1.0 / c), ra.scale(1.0 / c)
    return rb, ra
