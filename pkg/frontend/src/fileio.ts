// Graph file reading and writing. The graph section is exactly the format
// the command-line tools consume; the editor adds a "layout" sidecar key that
// those tools ignore. Unknown top-level keys in incoming files are ignored.

import {
  BRANCH_KINDS,
  BranchKind,
  BranchLayout,
  DocumentState,
  GraphBranch,
  GraphData,
  GraphNode,
  INVG,
  LayoutData,
  Point,
  autoPositions,
  defaultBranchLayout,
} from "./model.js";
import { canonicalCoeffs } from "./rational.js";

export interface ParseDiagnostic {
  path: string;
  message: string;
}

export type DeserializeOutcome =
  | { ok: true; state: DocumentState; warnings: ParseDiagnostic[] }
  | { ok: false; errors: ParseDiagnostic[] };

function pointPair(p: Point): [number, number] {
  return [p.x, p.y];
}

export function serializeDocument(state: DocumentState): string {
  const graph = state.graph;
  const nodes = graph.nodes.map((n) =>
    n.label === null ? { id: n.id } : { id: n.id, label: n.label },
  );
  const branches = graph.branches.map((b) => ({
    from: b.from,
    to: b.to,
    num: b.gain.num,
    den: b.gain.den,
    ...(b.symbols.length > 0 ? { symbols: b.symbols } : {}),
  }));

  const positions: Record<string, [number, number]> = {};
  for (const n of graph.nodes) {
    const p = state.layout.positions[n.id];
    if (p) positions[String(n.id)] = pointPair(p);
  }
  const branchLayouts: Record<string, object> = {};
  graph.branches.forEach((b, index) => {
    const lay = state.layout.branches[b.id];
    if (!lay) return;
    const entry: Record<string, unknown> = { kind: lay.kind };
    if (lay.via.length > 0) entry.via = lay.via.map(pointPair);
    if (lay.bend !== 0) entry.bend = lay.bend;
    if (lay.labelAnchor) entry.labelAnchor = pointPair(lay.labelAnchor);
    branchLayouts[String(index)] = entry;
  });

  const data: Record<string, unknown> = { nodes, branches };
  if (graph.input !== null) data.input = graph.input;
  if (graph.output !== null) data.output = graph.output;
  if (graph.declaredSymbols.length > 0) data.symbols = graph.declaredSymbols;
  data.layout = { positions, branches: branchLayouts };
  return JSON.stringify(data, null, 2) + "\n";
}

function isRecord(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

function coeffList(v: unknown): number[] | string {
  if (!Array.isArray(v)) return "must be a list of numbers";
  const out: number[] = [];
  for (const item of v) {
    if (typeof item !== "number" || !Number.isFinite(item)) {
      return `bad coefficient ${JSON.stringify(item)}`;
    }
    out.push(item);
  }
  return out;
}

function parsePoint(v: unknown): Point | null {
  if (
    Array.isArray(v) &&
    v.length === 2 &&
    typeof v[0] === "number" &&
    typeof v[1] === "number" &&
    Number.isFinite(v[0]) &&
    Number.isFinite(v[1])
  ) {
    return { x: v[0], y: v[1] };
  }
  return null;
}

export function deserializeDocument(text: string): DeserializeOutcome {
  const errors: ParseDiagnostic[] = [];
  const warnings: ParseDiagnostic[] = [];

  let data: unknown;
  try {
    data = JSON.parse(text);
  } catch (exc) {
    return {
      ok: false,
      errors: [{ path: "", message: `malformed graph file: ${String(exc)}` }],
    };
  }
  if (!isRecord(data)) {
    return {
      ok: false,
      errors: [{ path: "", message: "graph file must be a JSON object" }],
    };
  }

  const nodes: GraphNode[] = [];
  const seenIds = new Set<number>();
  const rawNodes = data.nodes;
  if (!Array.isArray(rawNodes) || rawNodes.length === 0) {
    errors.push({ path: "nodes", message: "missing or empty 'nodes' list" });
  } else {
    rawNodes.forEach((entry, i) => {
      const path = `nodes[${i}]`;
      if (!isRecord(entry) || !("id" in entry)) {
        errors.push({ path, message: "node entries need an 'id'" });
        return;
      }
      const id = entry.id;
      if (typeof id !== "number" || !Number.isInteger(id)) {
        errors.push({ path, message: `node id ${JSON.stringify(id)} is not an integer` });
        return;
      }
      if (seenIds.has(id)) {
        errors.push({ path, message: `duplicate node id ${id}` });
        return;
      }
      seenIds.add(id);
      let label: string | null = null;
      if (entry.label !== undefined && entry.label !== null) {
        if (typeof entry.label !== "string") {
          errors.push({ path: `${path}.label`, message: "label must be a string" });
        } else {
          label = entry.label;
        }
      }
      nodes.push({ id, label });
    });
  }

  const branches: GraphBranch[] = [];
  const layoutByIndex: (BranchLayout | null)[] = [];
  const rawBranches = data.branches ?? [];
  if (!Array.isArray(rawBranches)) {
    errors.push({ path: "branches", message: "'branches' must be a list" });
  } else {
    rawBranches.forEach((entry, i) => {
      const path = `branches[${i}]`;
      if (!isRecord(entry)) {
        errors.push({ path, message: "entry must be an object" });
        return;
      }
      for (const key of ["from", "to", "num", "den"]) {
        if (!(key in entry)) {
          errors.push({ path, message: `missing '${key}'` });
          return;
        }
      }
      const from = entry.from;
      const to = entry.to;
      if (typeof from !== "number" || !seenIds.has(from)) {
        errors.push({ path, message: `unknown node ${JSON.stringify(from)}` });
        return;
      }
      if (typeof to !== "number" || !seenIds.has(to)) {
        errors.push({ path, message: `unknown node ${JSON.stringify(to)}` });
        return;
      }
      const num = coeffList(entry.num);
      if (typeof num === "string") {
        errors.push({ path: `${path}.num`, message: num });
        return;
      }
      const den = coeffList(entry.den);
      if (typeof den === "string") {
        errors.push({ path: `${path}.den`, message: den });
        return;
      }
      const cden = canonicalCoeffs(den);
      if (cden.length === 1 && cden[0] === 0) {
        errors.push({ path: `${path}.den`, message: "den must have a nonzero coefficient" });
        return;
      }
      let symbols: string[] = [];
      if (entry.symbols !== undefined && entry.symbols !== null) {
        if (!Array.isArray(entry.symbols)) {
          errors.push({ path: `${path}.symbols`, message: "'symbols' must be a list" });
          return;
        }
        for (const s of entry.symbols) {
          if (typeof s !== "string" || s === "") {
            errors.push({ path: `${path}.symbols`, message: `bad symbol ${JSON.stringify(s)}` });
            return;
          }
          if (s === INVG) {
            errors.push({
              path: `${path}.symbols`,
              message: `symbol name "${INVG}" is reserved`,
            });
            return;
          }
        }
        symbols = (entry.symbols as string[]).slice().sort();
        if (new Set(symbols).size !== symbols.length) {
          errors.push({ path: `${path}.symbols`, message: "repeated symbol on one branch" });
          return;
        }
      }
      branches.push({
        id: i,
        from,
        to,
        gain: { num: canonicalCoeffs(num), den: cden },
        symbols,
      });
      layoutByIndex[i] = null;
    });
  }

  let input: number | null = null;
  if (data.input !== undefined && data.input !== null) {
    if (typeof data.input !== "number" || !seenIds.has(data.input)) {
      errors.push({
        path: "input",
        message: `input node ${JSON.stringify(data.input)} is not declared`,
      });
    } else {
      input = data.input;
    }
  }
  let output: number | null = null;
  if (data.output !== undefined && data.output !== null) {
    if (typeof data.output !== "number" || !seenIds.has(data.output)) {
      errors.push({
        path: "output",
        message: `output node ${JSON.stringify(data.output)} is not declared`,
      });
    } else {
      output = data.output;
    }
  }

  const declaredSymbols: string[] = [];
  if (data.symbols !== undefined && data.symbols !== null) {
    if (!Array.isArray(data.symbols)) {
      errors.push({ path: "symbols", message: "'symbols' must be a list" });
    } else {
      data.symbols.forEach((s, i) => {
        if (typeof s !== "string" || s === "" || s === INVG) {
          errors.push({ path: `symbols[${i}]`, message: `bad symbol name ${JSON.stringify(s)}` });
        } else if (declaredSymbols.includes(s)) {
          errors.push({ path: `symbols[${i}]`, message: `duplicate symbol ${JSON.stringify(s)}` });
        } else {
          declaredSymbols.push(s);
        }
      });
    }
  }

  if (errors.length > 0) return { ok: false, errors };

  const graph: GraphData = { nodes, branches, input, output, declaredSymbols };

  const layout: LayoutData = { positions: {}, branches: {} };
  const rawLayout = data.layout;
  if (rawLayout !== undefined && !isRecord(rawLayout)) {
    warnings.push({ path: "layout", message: "layout section ignored: not an object" });
  } else if (isRecord(rawLayout)) {
    if (isRecord(rawLayout.positions)) {
      for (const [key, value] of Object.entries(rawLayout.positions)) {
        const id = Number(key);
        if (!Number.isInteger(id) || !seenIds.has(id)) {
          warnings.push({
            path: `layout.positions.${key}`,
            message: "position for a node not in the graph",
          });
          continue;
        }
        const p = parsePoint(value);
        if (!p) {
          warnings.push({ path: `layout.positions.${key}`, message: "expected [x, y]" });
          continue;
        }
        layout.positions[id] = p;
      }
    }
    if (isRecord(rawLayout.branches)) {
      for (const [key, value] of Object.entries(rawLayout.branches)) {
        const index = Number(key);
        if (!Number.isInteger(index) || index < 0 || index >= branches.length) {
          warnings.push({
            path: `layout.branches.${key}`,
            message: "layout for a branch not in the graph",
          });
          continue;
        }
        if (!isRecord(value)) {
          warnings.push({ path: `layout.branches.${key}`, message: "expected an object" });
          continue;
        }
        const branch = branches[index];
        const fallback = defaultBranchLayout(branch.from, branch.to);
        let kind: BranchKind = fallback.kind;
        if (typeof value.kind === "string" && (BRANCH_KINDS as string[]).includes(value.kind)) {
          const wanted = value.kind as BranchKind;
          const selfLoop = branch.from === branch.to;
          if (selfLoop !== (wanted === "self-loop")) {
            warnings.push({
              path: `layout.branches.${key}.kind`,
              message: `'${wanted}' does not fit the branch endpoints`,
            });
          } else {
            kind = wanted;
          }
        } else if (value.kind !== undefined) {
          warnings.push({
            path: `layout.branches.${key}.kind`,
            message: `unknown render kind ${JSON.stringify(value.kind)}`,
          });
        }
        const via: Point[] = [];
        if (Array.isArray(value.via)) {
          for (const raw of value.via) {
            const p = parsePoint(raw);
            if (p) via.push(p);
          }
        }
        const bend =
          typeof value.bend === "number" && Number.isFinite(value.bend) ? value.bend : 0;
        const labelAnchor = parsePoint(value.labelAnchor);
        layout.branches[branch.id] = {
          kind,
          via: kind === "polyline" ? via : [],
          bend: kind === "arc" ? bend : 0,
          labelAnchor,
        };
      }
    }
  }

  layout.positions = autoPositions(graph, layout.positions);
  for (const b of branches) {
    if (!layout.branches[b.id]) {
      layout.branches[b.id] = defaultBranchLayout(b.from, b.to);
    }
  }

  return { ok: true, state: { graph, layout }, warnings };
}

// Layouts compared by content: node positions by id, branch layouts in
// branch order (ids are reassigned on load).
export function layoutsEquivalent(a: DocumentState, b: DocumentState): boolean {
  const aIds = a.graph.nodes.map((n) => n.id);
  const bIds = b.graph.nodes.map((n) => n.id);
  if (aIds.length !== bIds.length) return false;
  for (let i = 0; i < aIds.length; i++) {
    const pa = a.layout.positions[aIds[i]];
    const pb = b.layout.positions[bIds[i]];
    if (!pa || !pb || pa.x !== pb.x || pa.y !== pb.y) return false;
  }
  if (a.graph.branches.length !== b.graph.branches.length) return false;
  for (let i = 0; i < a.graph.branches.length; i++) {
    const la = a.layout.branches[a.graph.branches[i].id];
    const lb = b.layout.branches[b.graph.branches[i].id];
    if (!la || !lb) return false;
    if (la.kind !== lb.kind || la.bend !== lb.bend) return false;
    if (la.via.length !== lb.via.length) return false;
    for (let k = 0; k < la.via.length; k++) {
      if (la.via[k].x !== lb.via[k].x || la.via[k].y !== lb.via[k].y) return false;
    }
    const anchorA = la.labelAnchor;
    const anchorB = lb.labelAnchor;
    if ((anchorA === null) !== (anchorB === null)) return false;
    if (anchorA && anchorB && (anchorA.x !== anchorB.x || anchorA.y !== anchorB.y)) {
      return false;
    }
  }
  return true;
}
