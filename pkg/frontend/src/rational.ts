// Rational-gain text handling: the "num=[...] den=[...]" editing syntax the
// CLI also accepts, plus the pretty one-line labels drawn on branches.

import type { RationalGain } from "./model.js";

export type ParseOutcome =
  | { ok: true; gain: RationalGain }
  | { ok: false; message: string };

// Trailing zero coefficients are dropped; the zero polynomial stays [0].
export function canonicalCoeffs(raw: number[]): number[] {
  const out = raw.slice();
  if (out.length === 0) return [0];
  while (out.length > 1 && out[out.length - 1] === 0) out.pop();
  return out;
}

function parseCoeffList(body: string, where: string): number[] | string {
  const inner = body.trim();
  if (inner === "") return [];
  const out: number[] = [];
  for (const tok of inner.split(",")) {
    const t = tok.trim();
    if (t === "") return `${where}: empty coefficient`;
    const v = Number(t);
    if (!Number.isFinite(v)) return `${where}: bad coefficient "${t}"`;
    out.push(v);
  }
  return out;
}

const RATIONAL_RE =
  /^\s*num\s*=\s*\[([^\]]*)\]\s+den\s*=\s*\[([^\]]*)\]\s*$/;

export function parseRationalText(text: string): ParseOutcome {
  const m = RATIONAL_RE.exec(text);
  if (!m) {
    return {
      ok: false,
      message: 'expected "num=[...] den=[...]" with ascending coefficients',
    };
  }
  const num = parseCoeffList(m[1], "num");
  if (typeof num === "string") return { ok: false, message: num };
  const den = parseCoeffList(m[2], "den");
  if (typeof den === "string") return { ok: false, message: den };
  const cden = canonicalCoeffs(den);
  if (cden.length === 1 && cden[0] === 0) {
    return { ok: false, message: "den must have a nonzero coefficient" };
  }
  return { ok: true, gain: { num: canonicalCoeffs(num), den: cden } };
}

export function formatRationalText(gain: RationalGain): string {
  const side = (c: number[]) => `[${c.map((v) => String(v)).join(",")}]`;
  return `num=${side(gain.num)} den=${side(gain.den)}`;
}

const SUPERSCRIPTS = "⁰¹²³⁴⁵⁶⁷⁸⁹";

function power(variable: string, k: number): string {
  if (k === 0) return "";
  if (k === 1) return variable;
  const digits = String(k)
    .split("")
    .map((d) => SUPERSCRIPTS[Number(d)])
    .join("");
  return variable + digits;
}

function coeffText(v: number): string {
  return String(v);
}

// Conventional descending-power rendering: [8, 2] -> "2s+8".
export function polyLabel(coeffs: number[], variable: string): string {
  const c = canonicalCoeffs(coeffs);
  const parts: string[] = [];
  for (let k = c.length - 1; k >= 0; k--) {
    const v = c[k];
    if (v === 0 && !(c.length === 1 && k === 0)) continue;
    const mag = Math.abs(v);
    const pow = power(variable, k);
    let body: string;
    if (pow === "") body = coeffText(mag);
    else if (mag === 1) body = pow;
    else body = coeffText(mag) + pow;
    if (parts.length === 0) parts.push(v < 0 ? "-" + body : body);
    else parts.push((v < 0 ? "-" : "+") + body);
  }
  if (parts.length === 0) return "0";
  return parts.join("");
}

function termCount(label: string): number {
  let n = 1;
  for (let i = 1; i < label.length; i++) {
    if (label[i] === "+" || label[i] === "-") n++;
  }
  return n;
}

function wrapped(label: string): string {
  return termCount(label) > 1 ? `(${label})` : label;
}

export function rationalLabel(gain: RationalGain, variable: string): string {
  const num = polyLabel(gain.num, variable);
  const den = polyLabel(gain.den, variable);
  if (den === "1") return num;
  return `${wrapped(num)}/${wrapped(den)}`;
}

// Branch label: symbols first, then the rational part unless it is plain 1.
export function gainLabel(
  gain: RationalGain,
  symbols: string[],
  variable: string,
): string {
  const rational = rationalLabel(gain, variable);
  if (symbols.length === 0) return rational;
  const head = symbols.join("·");
  if (rational === "1") return head;
  const tail =
    rational.includes("/") || termCount(rational) === 1
      ? rational
      : `(${rational})`;
  return `${head}·${tail}`;
}
