"""Real-coefficient polynomials in s and ratios of them.

Coefficients are stored ascending: ``coeffs[k]`` multiplies ``s**k``.
The zero polynomial is the single-element sequence ``(0.0,)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from sfgkit.errors import DegreeCapError, PolyFormatError

# Desk-scale guard: beyond this degree double precision is no longer
# trustworthy for the cleared coefficient products, so fail loudly.
MAX_DEGREE = 64

DEFAULT_REL_TOL = 1e-12


def _canonical(coeffs) -> tuple[float, ...]:
    out = [float(c) for c in coeffs]
    if not out:
        return (0.0,)
    for c in out:
        if not math.isfinite(c):
            raise ValueError(f"non-finite polynomial coefficient {c!r}")
    while len(out) > 1 and out[-1] == 0.0:
        out.pop()
    if len(out) - 1 > MAX_DEGREE:
        raise DegreeCapError(
            f"polynomial degree {len(out) - 1} exceeds the cap of {MAX_DEGREE}"
        )
    return tuple(out)


@dataclass(frozen=True)
class Poly:
    """Polynomial in s with real coefficients, ascending powers."""

    coeffs: tuple[float, ...]

    def __init__(self, coeffs=(0.0,)):
        object.__setattr__(self, "coeffs", _canonical(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0.0,)

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Poly([
            (a[i] if i < len(a) else 0.0) + (b[i] if i < len(b) else 0.0)
            for i in range(n)
        ])

    def __sub__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Poly([
            (a[i] if i < len(a) else 0.0) - (b[i] if i < len(b) else 0.0)
            for i in range(n)
        ])

    def __mul__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if self.is_zero or other.is_zero:
            return Poly()
        out = [0.0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0.0:
                continue
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def scale(self, k: float) -> "Poly":
        return Poly([k * c for c in self.coeffs])

    def shift_up(self, k: int = 1) -> "Poly":
        """Multiply by s**k."""
        if self.is_zero:
            return self
        return Poly((0.0,) * k + self.coeffs)

    def __call__(self, s0: complex) -> complex:
        # Horner evaluation; exact for degree 0.
        acc = 0.0 + 0.0j
        for c in reversed(self.coeffs):
            acc = acc * s0 + c
        return acc

    def derivative(self) -> "Poly":
        if self.degree == 0:
            return Poly()
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:])

    def max_abs_coeff(self) -> float:
        return max(abs(c) for c in self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)!r})"


ONE = Poly([1.0])
ZERO = Poly([0.0])


def poly_arith(op: str, a: Poly, b: Poly) -> Poly:
    """add/sub/mul dispatch; results are canonical."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown polynomial op {op!r}")


def poly_eval(p: Poly, s0: complex) -> complex:
    return p(s0)


@dataclass(frozen=True)
class RationalFn:
    """Ratio of two real-coefficient polynomials in s."""

    num: Poly
    den: Poly

    def __init__(self, num: Poly | list | tuple = ZERO, den: Poly | list | tuple = ONE):
        if not isinstance(num, Poly):
            num = Poly(num)
        if not isinstance(den, Poly):
            den = Poly(den)
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __mul__(self, other: "RationalFn") -> "RationalFn":
        return RationalFn(self.num * other.num, self.den * other.den)

    def __add__(self, other: "RationalFn") -> "RationalFn":
        # Cross-multiplication over the product denominator; no cancellation.
        return RationalFn(
            self.num * other.den + other.num * self.den,
            self.den * other.den,
        )

    def __neg__(self) -> "RationalFn":
        return RationalFn(-self.num, self.den)

    def __call__(self, s0: complex) -> complex:
        return self.num(s0) / self.den(s0)

    def __repr__(self) -> str:
        return f"RationalFn({list(self.num.coeffs)!r}, {list(self.den.coeffs)!r})"


RAT_ONE = RationalFn(ONE, ONE)


def rat_arith(op: str, a: RationalFn, b: RationalFn) -> RationalFn:
    """add/mul dispatch for rational functions (no GCD cancellation)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown rational op {op!r}")


def prune(p: Poly, rel_tol: float = DEFAULT_REL_TOL, scale: float | None = None) -> Poly:
    """Zero out coefficients at or below rel_tol relative to `scale`.

    `scale` defaults to the largest coefficient magnitude of p itself.
    """
    if rel_tol < 0:
        raise ValueError("rel_tol must be >= 0")
    if scale is None:
        scale = p.max_abs_coeff()
    if scale == 0.0:
        return ZERO
    cut = rel_tol * scale
    return Poly([0.0 if abs(c) <= cut else c for c in p.coeffs])


def _leading_zeros(p: Poly) -> int:
    n = 0
    for c in p.coeffs:
        if c != 0.0:
            break
        n += 1
    return n


def tidy(r: RationalFn, rel_tol: float = DEFAULT_REL_TOL) -> RationalFn:
    """Numerical hygiene: prune tiny coefficients, cancel common s^k factors,
    and normalize signs so the denominator's lowest nonzero coefficient is
    positive. A zero numerator canonicalizes to 0/1.
    """
    num = prune(r.num, rel_tol)
    den = prune(r.den, rel_tol)
    if den.is_zero:
        raise ZeroDivisionError("denominator vanished under pruning")
    if num.is_zero:
        return RationalFn(ZERO, ONE)
    k = min(_leading_zeros(num), _leading_zeros(den))
    if k:
        num = Poly(num.coeffs[k:])
        den = Poly(den.coeffs[k:])
    low = next(c for c in den.coeffs if c != 0.0)
    if low < 0:
        num, den = -num, -den
    return RationalFn(num, den)


_POLY_TEXT = re.compile(
    r"^\s*num\s*=\s*\[(?P<num>[^\]]*)\]\s*den\s*=\s*\[(?P<den>[^\]]*)\]\s*$"
)


def parse_rational_text(text: str) -> RationalFn:
    """Parse the gain text syntax, e.g. ``num=[8,2] den=[2,3,1]``.

    Coefficient lists are ascending powers of s.
    """
    m = _POLY_TEXT.match(text)
    if not m:
        raise PolyFormatError(
            f"cannot parse rational function {text!r}; "
            "expected 'num=[...] den=[...]' with ascending coefficients"
        )

    def _coeffs(body: str, what: str) -> list[float]:
        body = body.strip()
        if not body:
            raise PolyFormatError(f"empty {what} coefficient list in {text!r}")
        try:
            return [float(tok) for tok in body.split(",")]
        except ValueError as exc:
            raise PolyFormatError(f"bad {what} coefficient in {text!r}: {exc}") from exc

    num = Poly(_coeffs(m.group("num"), "num"))
    den = Poly(_coeffs(m.group("den"), "den"))
    if den.is_zero:
        raise PolyFormatError(f"zero denominator in {text!r}")
    return RationalFn(num, den)


def format_rational_text(r: RationalFn) -> str:
    num = ",".join(repr(c) for c in r.num.coeffs)
    den = ",".join(repr(c) for c in r.den.coeffs)
    return f"num=[{num}] den=[{den}]"
