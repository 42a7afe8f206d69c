// Editor canvas scene: nodes, branches in their four render kinds, value
// labels, and terminal markers, all as plain geometry. The DOM layer maps
// shapes to SVG elements one to one.

import {
  BranchKind,
  DocumentState,
  GraphBranch,
  NodeId,
  Point,
  defaultBranchLayout,
} from "./model.js";
import { gainLabel } from "./rational.js";

export const NODE_RADIUS = 18;
const LOOP_RADIUS = 15;
const LABEL_GAP = 13;

export interface ArrowHead {
  x: number;
  y: number;
  angle: number; // radians, pointing along travel direction
}

export interface NodeShape {
  type: "node";
  id: NodeId;
  cx: number;
  cy: number;
  r: number;
  label: string | null;
  terminal: "input" | "output" | "both" | null;
  selected: boolean;
}

export interface BranchShape {
  type: "branch";
  id: number;
  kind: BranchKind;
  d: string;
  arrow: ArrowHead;
  label: { x: number; y: number; text: string };
  selected: boolean;
}

export type Shape = NodeShape | BranchShape;

export interface Selection {
  type: "node" | "branch";
  id: number;
}

function fmt(v: number): string {
  return String(Math.round(v * 100) / 100);
}

function unit(from: Point, to: Point): Point {
  const dx = to.x - from.x;
  const dy = to.y - from.y;
  const len = Math.hypot(dx, dy) || 1;
  return { x: dx / len, y: dy / len };
}

function offsetFrom(center: Point, toward: Point, dist: number): Point {
  const u = unit(center, toward);
  return { x: center.x + u.x * dist, y: center.y + u.y * dist };
}

export interface BranchGeometry {
  d: string;
  arrow: ArrowHead;
  labelPos: Point;
}

export function branchGeometry(
  state: DocumentState,
  branch: GraphBranch,
): BranchGeometry {
  const layout =
    state.layout.branches[branch.id] ??
    defaultBranchLayout(branch.from, branch.to);
  const src = state.layout.positions[branch.from] ?? { x: 0, y: 0 };
  const dst = state.layout.positions[branch.to] ?? { x: 0, y: 0 };

  if (layout.kind === "self-loop" || branch.from === branch.to) {
    const top = { x: src.x, y: src.y - NODE_RADIUS };
    const start = {
      x: src.x - NODE_RADIUS * 0.707,
      y: src.y - NODE_RADIUS * 0.707,
    };
    const end = {
      x: src.x + NODE_RADIUS * 0.707,
      y: src.y - NODE_RADIUS * 0.707,
    };
    const d =
      `M${fmt(start.x)} ${fmt(start.y)}` +
      `A${LOOP_RADIUS} ${LOOP_RADIUS} 0 1 1 ${fmt(end.x)} ${fmt(end.y)}`;
    return {
      d,
      arrow: { x: end.x, y: end.y, angle: Math.PI * 0.75 },
      labelPos: { x: top.x, y: top.y - 2 * LOOP_RADIUS - LABEL_GAP },
    };
  }

  if (layout.kind === "arc") {
    const bend = layout.bend === 0 ? 40 : layout.bend;
    const mid = { x: (src.x + dst.x) / 2, y: (src.y + dst.y) / 2 };
    const u = unit(src, dst);
    const normal = { x: -u.y, y: u.x };
    const control = { x: mid.x + normal.x * bend, y: mid.y + normal.y * bend };
    const start = offsetFrom(src, control, NODE_RADIUS);
    const end = offsetFrom(dst, control, NODE_RADIUS);
    const d =
      `M${fmt(start.x)} ${fmt(start.y)}` +
      `Q${fmt(control.x)} ${fmt(control.y)} ${fmt(end.x)} ${fmt(end.y)}`;
    const tangent = unit(control, end);
    // On-curve point at t = 1/2 of the quadratic.
    const apex = {
      x: 0.25 * start.x + 0.5 * control.x + 0.25 * end.x,
      y: 0.25 * start.y + 0.5 * control.y + 0.25 * end.y,
    };
    return {
      d,
      arrow: { x: end.x, y: end.y, angle: Math.atan2(tangent.y, tangent.x) },
      labelPos: {
        x: apex.x + normal.x * LABEL_GAP * Math.sign(bend),
        y: apex.y + normal.y * LABEL_GAP * Math.sign(bend),
      },
    };
  }

  if (layout.kind === "polyline" && layout.via.length > 0) {
    const pts = [src, ...layout.via, dst];
    const start = offsetFrom(src, pts[1], NODE_RADIUS);
    const end = offsetFrom(dst, pts[pts.length - 2], NODE_RADIUS);
    const inner = layout.via;
    const all = [start, ...inner, end];
    const d = all
      .map((p, i) => `${i === 0 ? "M" : "L"}${fmt(p.x)} ${fmt(p.y)}`)
      .join("");
    const last = unit(all[all.length - 2], end);
    const midIndex = Math.floor((all.length - 1) / 2);
    const a = all[midIndex];
    const b = all[midIndex + 1];
    const segUnit = unit(a, b);
    const normal = { x: -segUnit.y, y: segUnit.x };
    return {
      d,
      arrow: { x: end.x, y: end.y, angle: Math.atan2(last.y, last.x) },
      labelPos: {
        x: (a.x + b.x) / 2 - normal.x * LABEL_GAP,
        y: (a.y + b.y) / 2 - normal.y * LABEL_GAP,
      },
    };
  }

  const u = unit(src, dst);
  const start = { x: src.x + u.x * NODE_RADIUS, y: src.y + u.y * NODE_RADIUS };
  const end = { x: dst.x - u.x * NODE_RADIUS, y: dst.y - u.y * NODE_RADIUS };
  const normal = { x: -u.y, y: u.x };
  const d = `M${fmt(start.x)} ${fmt(start.y)}L${fmt(end.x)} ${fmt(end.y)}`;
  return {
    d,
    arrow: { x: end.x, y: end.y, angle: Math.atan2(u.y, u.x) },
    labelPos: {
      x: (start.x + end.x) / 2 - normal.x * LABEL_GAP,
      y: (start.y + end.y) / 2 - normal.y * LABEL_GAP,
    },
  };
}

export function arrowPath(arrow: ArrowHead, size = 8): string {
  const { x, y, angle } = arrow;
  const left = angle + Math.PI * 0.85;
  const right = angle - Math.PI * 0.85;
  const p1 = { x: x + size * Math.cos(left), y: y + size * Math.sin(left) };
  const p2 = { x: x + size * Math.cos(right), y: y + size * Math.sin(right) };
  return (
    `M${fmt(x)} ${fmt(y)}L${fmt(p1.x)} ${fmt(p1.y)}` +
    `L${fmt(p2.x)} ${fmt(p2.y)}Z`
  );
}

export function editorScene(
  state: DocumentState,
  selection: Selection | null = null,
): Shape[] {
  const shapes: Shape[] = [];
  for (const b of state.graph.branches) {
    const geom = branchGeometry(state, b);
    const anchor = state.layout.branches[b.id]?.labelAnchor ?? null;
    shapes.push({
      type: "branch",
      id: b.id,
      kind: state.layout.branches[b.id]?.kind ?? (b.from === b.to ? "self-loop" : "straight"),
      d: geom.d,
      arrow: geom.arrow,
      label: {
        x: geom.labelPos.x + (anchor?.x ?? 0),
        y: geom.labelPos.y + (anchor?.y ?? 0),
        text: gainLabel(b.gain, b.symbols, "s"),
      },
      selected: selection?.type === "branch" && selection.id === b.id,
    });
  }
  for (const n of state.graph.nodes) {
    const p = state.layout.positions[n.id] ?? { x: 0, y: 0 };
    const isIn = state.graph.input === n.id;
    const isOut = state.graph.output === n.id;
    shapes.push({
      type: "node",
      id: n.id,
      cx: p.x,
      cy: p.y,
      r: NODE_RADIUS,
      label: n.label,
      terminal: isIn && isOut ? "both" : isIn ? "input" : isOut ? "output" : null,
      selected: selection?.type === "node" && selection.id === n.id,
    });
  }
  return shapes;
}

export function hitNode(state: DocumentState, at: Point): NodeId | null {
  // Last drawn wins, matching visual stacking.
  for (let i = state.graph.nodes.length - 1; i >= 0; i--) {
    const n = state.graph.nodes[i];
    const p = state.layout.positions[n.id];
    if (!p) continue;
    if (Math.hypot(at.x - p.x, at.y - p.y) <= NODE_RADIUS) return n.id;
  }
  return null;
}
