// Document model for the signal-flow-graph editor. The graph section mirrors
// the JSON file format the CLI consumes; layout lives beside it and is
// ignored by the command-line tools.

export type NodeId = number;
export type BranchId = number;

export const INVG = "1/G"; // reserved for server-side graph closure

export interface Point {
  x: number;
  y: number;
}

// Coefficient lists are ascending: [2, 3, 1] is 2 + 3s + s^2.
export interface RationalGain {
  num: number[];
  den: number[];
}

export interface GraphNode {
  id: NodeId;
  label: string | null;
}

export interface GraphBranch {
  id: BranchId;
  from: NodeId;
  to: NodeId;
  gain: RationalGain;
  symbols: string[];
}

export interface GraphData {
  nodes: GraphNode[];
  branches: GraphBranch[];
  input: NodeId | null;
  output: NodeId | null;
  declaredSymbols: string[];
}

export type BranchKind = "straight" | "polyline" | "arc" | "self-loop";

export const BRANCH_KINDS: readonly BranchKind[] = [
  "straight",
  "polyline",
  "arc",
  "self-loop",
];

export interface BranchLayout {
  kind: BranchKind;
  via: Point[]; // polyline waypoints
  bend: number; // arc control-point offset, signed
  labelAnchor: Point | null; // offset from the default label position
}

export interface LayoutData {
  positions: Record<NodeId, Point>;
  branches: Record<BranchId, BranchLayout>;
}

export interface DocumentState {
  graph: GraphData;
  layout: LayoutData;
}

export interface TransferTerm {
  symbols: string[];
  numerator: number[];
  denominator_side: "B" | "A";
}

export interface TransferData {
  variable: string;
  terms: TransferTerm[];
}

export interface ResponsePoint {
  omega: number;
  re: number;
  im: number;
  mag_db: number;
  phase_deg: number;
}

export interface RouthData {
  verdict: string;
  sign_changes: number;
  first_column: number[];
  rows: number[][];
  notes: string[];
}

export interface RootsData {
  zeros: [number, number][];
  poles: [number, number][];
  zero_residuals: number[];
  pole_residuals: number[];
}

export interface ReducedData {
  num: number[];
  den: number[];
}

export interface AnalyzeData {
  transfer: { num: number[]; den: number[] };
  response: ResponsePoint[];
  routh?: RouthData;
  roots?: RootsData;
  reduced?: ReducedData;
}

export interface ServiceError {
  kind: string;
  detail: string;
}

export interface ComputedResults {
  transfer: TransferData | null;
  analyze: AnalyzeData | null;
  reducedResponse: ResponsePoint[] | null;
  error: ServiceError | null;
}

export interface EditorDocument {
  state: DocumentState;
  undoStack: DocumentState[];
  redoStack: DocumentState[];
  dirty: boolean;
  results: ComputedResults | null;
  resultsStale: boolean;
}

export function unitGain(): RationalGain {
  return { num: [1], den: [1] };
}

export function emptyState(): DocumentState {
  return {
    graph: {
      nodes: [],
      branches: [],
      input: null,
      output: null,
      declaredSymbols: [],
    },
    layout: { positions: {}, branches: {} },
  };
}

export function newDocument(state?: DocumentState): EditorDocument {
  return {
    state: state ?? emptyState(),
    undoStack: [],
    redoStack: [],
    dirty: false,
    results: null,
    resultsStale: false,
  };
}

export function cloneState(state: DocumentState): DocumentState {
  return structuredClone(state);
}

export function findNode(graph: GraphData, id: NodeId): GraphNode | null {
  return graph.nodes.find((n) => n.id === id) ?? null;
}

export function findBranch(graph: GraphData, id: BranchId): GraphBranch | null {
  return graph.branches.find((b) => b.id === id) ?? null;
}

export function freshNodeId(graph: GraphData): NodeId {
  let top = 0;
  for (const n of graph.nodes) top = Math.max(top, n.id);
  return top + 1;
}

export function freshBranchId(graph: GraphData): BranchId {
  let top = -1;
  for (const b of graph.branches) top = Math.max(top, b.id);
  return top + 1;
}

export function defaultBranchLayout(from: NodeId, to: NodeId): BranchLayout {
  return {
    kind: from === to ? "self-loop" : "straight",
    via: [],
    bend: 0,
    labelAnchor: null,
  };
}

// Positions for nodes the layout does not place yet: a ring, input side left.
export function autoPositions(
  graph: GraphData,
  existing: Record<NodeId, Point> = {},
): Record<NodeId, Point> {
  const out: Record<NodeId, Point> = { ...existing };
  const missing = graph.nodes.filter((n) => !(n.id in out));
  const count = graph.nodes.length;
  const radius = 60 + 28 * count;
  missing.forEach((n, i) => {
    const slot = graph.nodes.findIndex((m) => m.id === n.id);
    const angle = Math.PI - (2 * Math.PI * (slot >= 0 ? slot : i)) / Math.max(count, 1);
    out[n.id] = {
      x: Math.round(radius * (1.4 + Math.cos(angle))),
      y: Math.round(radius * (1.2 - 0.8 * Math.sin(angle))),
    };
  });
  return out;
}

function numbersEqual(a: number[], b: number[]): boolean {
  return a.length === b.length && a.every((v, i) => v === b[i]);
}

export function gainsEqual(a: RationalGain, b: RationalGain): boolean {
  return numbersEqual(a.num, b.num) && numbersEqual(a.den, b.den);
}

export function graphsEqual(a: GraphData, b: GraphData): boolean {
  if (a.nodes.length !== b.nodes.length) return false;
  if (a.branches.length !== b.branches.length) return false;
  if (a.input !== b.input || a.output !== b.output) return false;
  if (!stringsEqual(a.declaredSymbols, b.declaredSymbols)) return false;
  for (let i = 0; i < a.nodes.length; i++) {
    if (a.nodes[i].id !== b.nodes[i].id) return false;
    if (a.nodes[i].label !== b.nodes[i].label) return false;
  }
  for (let i = 0; i < a.branches.length; i++) {
    const x = a.branches[i];
    const y = b.branches[i];
    if (x.from !== y.from || x.to !== y.to) return false;
    if (!gainsEqual(x.gain, y.gain)) return false;
    if (!stringsEqual(x.symbols, y.symbols)) return false;
  }
  return true;
}

function stringsEqual(a: string[], b: string[]): boolean {
  return a.length === b.length && a.every((v, i) => v === b[i]);
}

// Symbols actually present on branches, in sorted order.
export function usedSymbols(graph: GraphData): string[] {
  const seen = new Set<string>();
  for (const b of graph.branches) for (const s of b.symbols) seen.add(s);
  return [...seen].sort();
}
