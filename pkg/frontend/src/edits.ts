// Document edits: every action validates its references, then produces a new
// document with the previous state pushed on the undo stack. Invalid actions
// leave the document untouched and carry a user-visible message.

import {
  BranchId,
  BranchKind,
  EditorDocument,
  GraphBranch,
  INVG,
  NodeId,
  Point,
  RationalGain,
  cloneState,
  defaultBranchLayout,
  findBranch,
  findNode,
  freshBranchId,
  freshNodeId,
  unitGain,
} from "./model.js";
import { canonicalCoeffs } from "./rational.js";

export type EditAction =
  | { kind: "add-node"; at: Point; label?: string }
  | { kind: "move-node"; node: NodeId; to: Point }
  | { kind: "relabel-node"; node: NodeId; label: string | null }
  | { kind: "delete-node"; node: NodeId }
  | {
      kind: "add-branch";
      from: NodeId;
      to: NodeId;
      gain?: RationalGain;
      symbols?: string[];
    }
  | {
      kind: "reroute-branch";
      branch: BranchId;
      render: BranchKind;
      via?: Point[];
      bend?: number;
    }
  | { kind: "delete-branch"; branch: BranchId }
  | { kind: "edit-gain"; branch: BranchId; gain: RationalGain }
  | { kind: "set-symbols"; branch: BranchId; symbols: string[] }
  | { kind: "move-label"; branch: BranchId; anchor: Point | null }
  | { kind: "set-input"; node: NodeId | null }
  | { kind: "set-output"; node: NodeId | null }
  // The closing gesture: drawing output -> input designates both terminals.
  | { kind: "designate-terminals"; from: NodeId; to: NodeId };

export type EditResult =
  | { ok: true; doc: EditorDocument }
  | { ok: false; message: string };

const UNDO_LIMIT = 200;

function reject(message: string): EditResult {
  return { ok: false, message };
}

function checkGain(gain: RationalGain): string | null {
  for (const side of [gain.num, gain.den]) {
    if (!Array.isArray(side)) return "gain coefficients must be lists";
    for (const v of side) {
      if (typeof v !== "number" || !Number.isFinite(v)) {
        return `non-finite gain coefficient ${String(v)}`;
      }
    }
  }
  const den = canonicalCoeffs(gain.den);
  if (den.length === 1 && den[0] === 0) {
    return "den must have a nonzero coefficient";
  }
  return null;
}

function checkSymbols(symbols: string[]): string | null {
  for (const s of symbols) {
    if (typeof s !== "string" || s === "") return "symbol names must be nonempty";
    if (s === INVG) return `symbol name "${INVG}" is reserved for graph closure`;
  }
  if (new Set(symbols).size !== symbols.length) {
    return "repeated symbol on one branch (chain branches to model higher powers)";
  }
  return null;
}

function normalGain(gain: RationalGain): RationalGain {
  return { num: canonicalCoeffs(gain.num), den: canonicalCoeffs(gain.den) };
}

export function applyEdit(doc: EditorDocument, action: EditAction): EditResult {
  const state = cloneState(doc.state);
  const graph = state.graph;

  switch (action.kind) {
    case "add-node": {
      const id = freshNodeId(graph);
      graph.nodes.push({ id, label: action.label ?? null });
      state.layout.positions[id] = { x: action.at.x, y: action.at.y };
      break;
    }
    case "move-node": {
      if (!findNode(graph, action.node)) {
        return reject(`no node ${action.node} in the document`);
      }
      state.layout.positions[action.node] = { x: action.to.x, y: action.to.y };
      break;
    }
    case "relabel-node": {
      const node = findNode(graph, action.node);
      if (!node) return reject(`no node ${action.node} in the document`);
      node.label = action.label;
      break;
    }
    case "delete-node": {
      if (!findNode(graph, action.node)) {
        return reject(`no node ${action.node} in the document`);
      }
      graph.nodes = graph.nodes.filter((n) => n.id !== action.node);
      const gone = graph.branches.filter(
        (b) => b.from === action.node || b.to === action.node,
      );
      graph.branches = graph.branches.filter(
        (b) => b.from !== action.node && b.to !== action.node,
      );
      delete state.layout.positions[action.node];
      for (const b of gone) delete state.layout.branches[b.id];
      if (graph.input === action.node) graph.input = null;
      if (graph.output === action.node) graph.output = null;
      break;
    }
    case "add-branch": {
      if (!findNode(graph, action.from)) {
        return reject(`no node ${action.from} in the document`);
      }
      if (!findNode(graph, action.to)) {
        return reject(`no node ${action.to} in the document`);
      }
      const gain = action.gain ?? unitGain();
      const gainProblem = checkGain(gain);
      if (gainProblem) return reject(gainProblem);
      const symbols = (action.symbols ?? []).slice().sort();
      const symbolProblem = checkSymbols(symbols);
      if (symbolProblem) return reject(symbolProblem);
      const id = freshBranchId(graph);
      const branch: GraphBranch = {
        id,
        from: action.from,
        to: action.to,
        gain: normalGain(gain),
        symbols,
      };
      graph.branches.push(branch);
      state.layout.branches[id] = defaultBranchLayout(action.from, action.to);
      break;
    }
    case "reroute-branch": {
      const branch = findBranch(graph, action.branch);
      if (!branch) return reject(`branch ${action.branch} does not exist`);
      if (branch.from === branch.to && action.render !== "self-loop") {
        return reject("a branch from a node to itself renders as a self-loop");
      }
      if (branch.from !== branch.to && action.render === "self-loop") {
        return reject("self-loop rendering needs matching endpoints");
      }
      const layout =
        state.layout.branches[branch.id] ??
        defaultBranchLayout(branch.from, branch.to);
      layout.kind = action.render;
      layout.via =
        action.render === "polyline"
          ? (action.via ?? []).map((p) => ({ x: p.x, y: p.y }))
          : [];
      layout.bend = action.render === "arc" ? (action.bend ?? 40) : 0;
      state.layout.branches[branch.id] = layout;
      break;
    }
    case "delete-branch": {
      if (!findBranch(graph, action.branch)) {
        return reject(`branch ${action.branch} does not exist`);
      }
      graph.branches = graph.branches.filter((b) => b.id !== action.branch);
      delete state.layout.branches[action.branch];
      break;
    }
    case "edit-gain": {
      const branch = findBranch(graph, action.branch);
      if (!branch) return reject(`branch ${action.branch} does not exist`);
      const problem = checkGain(action.gain);
      if (problem) return reject(problem);
      branch.gain = normalGain(action.gain);
      break;
    }
    case "set-symbols": {
      const branch = findBranch(graph, action.branch);
      if (!branch) return reject(`branch ${action.branch} does not exist`);
      const symbols = action.symbols.slice().sort();
      const problem = checkSymbols(symbols);
      if (problem) return reject(problem);
      branch.symbols = symbols;
      break;
    }
    case "move-label": {
      const branch = findBranch(graph, action.branch);
      if (!branch) return reject(`branch ${action.branch} does not exist`);
      const layout =
        state.layout.branches[branch.id] ??
        defaultBranchLayout(branch.from, branch.to);
      layout.labelAnchor = action.anchor
        ? { x: action.anchor.x, y: action.anchor.y }
        : null;
      state.layout.branches[branch.id] = layout;
      break;
    }
    case "set-input": {
      if (action.node !== null && !findNode(graph, action.node)) {
        return reject(`no node ${action.node} in the document`);
      }
      graph.input = action.node;
      break;
    }
    case "set-output": {
      if (action.node !== null && !findNode(graph, action.node)) {
        return reject(`no node ${action.node} in the document`);
      }
      graph.output = action.node;
      break;
    }
    case "designate-terminals": {
      if (!findNode(graph, action.from)) {
        return reject(`no node ${action.from} in the document`);
      }
      if (!findNode(graph, action.to)) {
        return reject(`no node ${action.to} in the document`);
      }
      graph.output = action.from;
      graph.input = action.to;
      break;
    }
    default: {
      const never: never = action;
      return reject(`unknown action ${String((never as EditAction).kind)}`);
    }
  }

  const undoStack = [...doc.undoStack, doc.state];
  if (undoStack.length > UNDO_LIMIT) undoStack.shift();
  return {
    ok: true,
    doc: {
      state,
      undoStack,
      redoStack: [],
      dirty: true,
      results: doc.results,
      resultsStale: true,
    },
  };
}

export function canUndo(doc: EditorDocument): boolean {
  return doc.undoStack.length > 0;
}

export function canRedo(doc: EditorDocument): boolean {
  return doc.redoStack.length > 0;
}

export function undo(doc: EditorDocument): EditorDocument {
  if (doc.undoStack.length === 0) return doc;
  const previous = doc.undoStack[doc.undoStack.length - 1];
  return {
    state: previous,
    undoStack: doc.undoStack.slice(0, -1),
    redoStack: [...doc.redoStack, doc.state],
    dirty: true,
    results: doc.results,
    resultsStale: true,
  };
}

export function redo(doc: EditorDocument): EditorDocument {
  if (doc.redoStack.length === 0) return doc;
  const next = doc.redoStack[doc.redoStack.length - 1];
  return {
    state: next,
    undoStack: [...doc.undoStack, doc.state],
    redoStack: doc.redoStack.slice(0, -1),
    dirty: true,
    results: doc.results,
    resultsStale: true,
  };
}
