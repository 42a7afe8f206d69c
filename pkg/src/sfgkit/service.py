"""Stateless HTTP wrapper around the compute pipeline.

POST /api/transfer returns byte-for-byte the same payload as
`sfg compute --format structured`: both go through transfer_to_json.

Malformed requests get HTTP 400 with {"error": {"kind", "detail"}}.
Well-formed requests whose computation fails for a domain reason (no
forward path, degenerate denominator, ...) get HTTP 200 with the same
typed error shape, so clients can distinguish bad input from a valid
graph with a degenerate answer.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from sfgkit.analysis import (
    default_grid,
    frequency_response,
    poles_zeros,
    reduce_order_cf,
    routh_stability,
)
from sfgkit.errors import (
    DegenerateDenominator,
    DegreeCapError,
    EvaluationAtPole,
    GraphFormatError,
    LoopLimitError,
    NoForwardPath,
    PolyFormatError,
    SingularQuotient,
)
from sfgkit.graph import parse_graph_data
from sfgkit.poly import Poly, RationalFn
from sfgkit.shannon import (
    compute_transfer,
    scale_to_monic,
    substitute_symbol,
    transfer_to_json,
)

_DOMAIN_ERRORS = (
    NoForwardPath,
    DegenerateDenominator,
    LoopLimitError,
    DegreeCapError,
    EvaluationAtPole,
    SingularQuotient,
)

app = FastAPI(title="sfgkit", docs_url=None, redoc_url=None)

# Browser clients (the graph editor page) are typically served from a
# different local origin than this API, so cross-origin requests must be
# allowed. Responses are unchanged for non-browser clients.
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_methods=["GET", "POST"],
    allow_headers=["content-type"],
)


def _error_body(exc: Exception) -> dict:
    return {"error": {"kind": type(exc).__name__, "detail": str(exc)}}


def _bad_request(exc: Exception) -> JSONResponse:
    return JSONResponse(status_code=400, content=_error_body(exc))


def _rational_from(obj) -> RationalFn:
    if isinstance(obj, str):
        from sfgkit.cli import parse_rational_literal

        return parse_rational_literal(obj)
    if isinstance(obj, dict):
        num = obj.get("num", obj.get("numerator"))
        den = obj.get("den", obj.get("denominator", [1.0]))
        return RationalFn(Poly(num), Poly(den))
    raise ValueError("a rational value must be a string or {num, den} object")


async def _json_body(request: Request) -> dict:
    try:
        data = await request.json()
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ValueError(f"request body is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError("request body must be a JSON object")
    return data


def _transfer_from_request(data: dict):
    if "graph" not in data:
        raise ValueError("missing 'graph'")
    g = parse_graph_data(data["graph"])
    variable = data.get("variable", "s")
    if variable not in ("s", "z"):
        raise ValueError(f"unknown variable {variable!r}")
    tf = compute_transfer(g, variable=variable)
    subs = data.get("substitutions", {})
    if not isinstance(subs, dict):
        raise ValueError("'substitutions' must be an object")
    for name, value in subs.items():
        tf = substitute_symbol(tf, name, _rational_from(value))
    if data.get("monic", False):
        tf = scale_to_monic(tf)
    return tf


@app.get("/health")
async def health():
    from sfgkit import __version__

    return {"status": "ok", "name": "sfgkit", "version": __version__}


@app.post("/api/transfer")
async def api_transfer(request: Request):
    try:
        data = await _json_body(request)
        tf = _transfer_from_request(data)
    except (GraphFormatError, PolyFormatError, ValueError) as exc:
        return _bad_request(exc)
    except _DOMAIN_ERRORS as exc:
        return JSONResponse(status_code=200, content=_error_body(exc))
    return Response(content=transfer_to_json(tf), media_type="application/json")


@app.post("/api/analyze")
async def api_analyze(request: Request):
    try:
        data = await _json_body(request)
        if "tf" in data:
            spec = data["tf"]
            if not isinstance(spec, dict):
                raise ValueError("'tf' must be an object with num and den")
            b = Poly(spec.get("num", []))
            a = Poly(spec.get("den", []))
        else:
            tf = _transfer_from_request(data)
            b, a = tf.plain_parts()
        grid_spec = data.get("grid", {})
        if not isinstance(grid_spec, dict):
            raise ValueError("'grid' must be an object")
        grid = default_grid(
            float(grid_spec.get("wmin", 1e-2)),
            float(grid_spec.get("wmax", 1e2)),
            int(grid_spec.get("points", 400)),
        )
    except (GraphFormatError, PolyFormatError, ValueError, TypeError) as exc:
        return _bad_request(exc)
    except _DOMAIN_ERRORS as exc:
        return JSONResponse(status_code=200, content=_error_body(exc))

    try:
        points = frequency_response(b, a, grid)
        out = {
            "transfer": {"num": list(b.coeffs), "den": list(a.coeffs)},
            "response": [
                {
                    "omega": p.omega,
                    "re": p.value.real,
                    "im": p.value.imag,
                    "mag_db": p.mag_db,
                    "phase_deg": p.phase_deg,
                }
                for p in points
            ],
        }
        if data.get("routh", False):
            rep = routh_stability(a)
            out["routh"] = {
                "verdict": rep.verdict,
                "sign_changes": rep.sign_changes,
                "first_column": rep.first_column,
                "rows": rep.rows,
                "notes": rep.notes,
            }
        if data.get("roots", False):
            rs = poles_zeros(b, a)
            out["roots"] = {
                "zeros": [[z.real, z.imag] for z in rs.zeros],
                "poles": [[p.real, p.imag] for p in rs.poles],
                "zero_residuals": rs.zero_residuals,
                "pole_residuals": rs.pole_residuals,
            }
        if "reduce" in data and data["reduce"] is not None:
            rb, ra = reduce_order_cf(b, a, int(data["reduce"]))
            out["reduced"] = {"num": list(rb.coeffs), "den": list(ra.coeffs)}
    except (ValueError, TypeError) as exc:
        return _bad_request(exc)
    except _DOMAIN_ERRORS as exc:
        return JSONResponse(status_code=200, content=_error_body(exc))
    return out
