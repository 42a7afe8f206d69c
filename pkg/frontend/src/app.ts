// Browser wiring: editor canvas, properties panel, and results panel. All
// graph logic lives in the pure modules; this file only maps events to edit
// actions and renders scenes, tables, and charts into the DOM.

import {
  ServiceClient,
  LatestWins,
  AnalyzeRequest,
  TransferRequest,
} from "./api.js";
import {
  bodeMagChart,
  bodePhaseChart,
  nyquistChart,
  LineChart,
  NyquistChart,
  Series,
  DEFAULT_VIEWPORT,
} from "./charts.js";
import { applyEdit, canRedo, canUndo, redo, undo, EditAction } from "./edits.js";
import { deserializeDocument, serializeDocument } from "./fileio.js";
import {
  DocumentState,
  EditorDocument,
  NodeId,
  Point,
  ResponsePoint,
  cloneState,
  findBranch,
  findNode,
  newDocument,
} from "./model.js";
import { formatRationalText, parseRationalText, rationalLabel } from "./rational.js";
import { arrowPath, editorScene, hitNode, NODE_RADIUS, Selection } from "./render.js";
import { buildTableModel } from "./table.js";

type Tool = "select" | "node" | "branch" | "close";

const SVG_NS = "http://www.w3.org/2000/svg";

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text !== undefined) node.textContent = text;
  return node;
}

function svg(
  doc: Document,
  tag: string,
  attrs: Record<string, string> = {},
  text?: string,
): SVGElement {
  const node = doc.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text !== undefined) node.textContent = text;
  return node as SVGElement;
}

export function initApp(rootDoc: Document): void {
  const $ = <T extends HTMLElement = HTMLElement>(id: string): T => {
    const found = rootDoc.getElementById(id);
    if (!found) throw new Error(`missing #${id} in the page`);
    return found as T;
  };

  const canvas = $("canvas") as unknown as SVGSVGElement;
  const props = $("props");
  const bannerBox = $("banner");
  const statusBox = $("status");
  const tableBox = $("tbl");
  const tfLine = $("tf-line");
  const routhBox = $("routh-block");
  const rootsBox = $("roots-block");
  const chartsBox = $("charts-box");
  const resultsBox = $("results");
  const subsInput = $("inp-subs") as HTMLInputElement;
  const reduceInput = $("inp-reduce") as HTMLInputElement;
  const monicCheck = $("chk-monic") as HTMLInputElement;
  const routhCheck = $("chk-routh") as HTMLInputElement;
  const rootsCheck = $("chk-roots") as HTMLInputElement;
  const autoCheck = $("chk-auto") as HTMLInputElement;
  const sourceText = $("source-text") as HTMLTextAreaElement;
  const sourceDiag = $("source-diag");
  const fileInput = $("file-input") as HTMLInputElement;

  let doc: EditorDocument = newDocument();
  let tool: Tool = "select";
  let selection: Selection | null = null;
  let pendingSource: NodeId | null = null;
  let drag: { node: NodeId; at: Point; moved: boolean } | null = null;
  let busy = false;

  // The page is served as static files, so the analysis service normally
  // lives on another local origin. Override with ?service=<base-url>.
  const serviceBase =
    new URLSearchParams(rootDoc.defaultView?.location.search ?? "").get("service") ??
    "http://127.0.0.1:8000";
  const client = new ServiceClient(serviceBase);
  const latest = new LatestWins();
  let autoTimer: ReturnType<typeof setTimeout> | undefined;

  function banner(message: string, level: "error" | "info" = "error"): void {
    bannerBox.textContent = message;
    bannerBox.className = message ? `banner ${level}` : "banner hidden";
  }

  function markEdited(next: EditorDocument): void {
    doc = next;
    selection = pruneSelection(selection);
    banner("");
    renderAll();
    scheduleAuto();
  }

  function pruneSelection(sel: Selection | null): Selection | null {
    if (!sel) return null;
    if (sel.type === "node" && !findNode(doc.state.graph, sel.id)) return null;
    if (sel.type === "branch" && !findBranch(doc.state.graph, sel.id)) return null;
    return sel;
  }

  function edit(action: EditAction): boolean {
    const result = applyEdit(doc, action);
    if (!result.ok) {
      banner(result.message);
      return false;
    }
    markEdited(result.doc);
    return true;
  }

  function scheduleAuto(): void {
    if (!autoCheck.checked) return;
    const g = doc.state.graph;
    if (g.input === null || g.output === null || g.branches.length === 0) return;
    clearTimeout(autoTimer);
    autoTimer = setTimeout(() => void compute(), 500);
  }

  function parseSubs(text: string): Record<string, string> | null {
    const out: Record<string, string> = {};
    for (const chunk of text.split(";")) {
      const part = chunk.trim();
      if (!part) continue;
      const eq = part.indexOf("=");
      if (eq <= 0) {
        banner(`substitutions look like NAME=[1]/[3,1]; got "${part}"`);
        return null;
      }
      out[part.slice(0, eq).trim()] = part.slice(eq + 1).trim();
    }
    return out;
  }

  async function compute(): Promise<void> {
    const g = doc.state.graph;
    if (g.nodes.length === 0) return;
    if (g.input === null || g.output === null) {
      banner("designate the terminals first: close tool, output node then input node", "info");
      return;
    }
    const substitutions = parseSubs(subsInput.value);
    if (substitutions === null) return;
    const graphData = JSON.parse(serializeDocument(doc.state)) as unknown;
    const transferReq: TransferRequest = { graph: graphData };
    if (Object.keys(substitutions).length > 0) transferReq.substitutions = substitutions;
    if (monicCheck.checked) transferReq.monic = true;
    const analyzeReq: AnalyzeRequest = { graph: graphData };
    if (Object.keys(substitutions).length > 0) analyzeReq.substitutions = substitutions;
    if (routhCheck.checked) analyzeReq.routh = true;
    if (rootsCheck.checked) analyzeReq.roots = true;
    const reduceTo = reduceInput.value.trim();
    if (reduceTo !== "") analyzeReq.reduce = Number(reduceTo);

    busy = true;
    renderStatus();
    try {
      const outcome = await latest.run(async (signal) => {
        const transfer = await client.transfer(transferReq, signal);
        const analyze = await client.analyze(analyzeReq, signal);
        let reducedResponse: ResponsePoint[] | null = null;
        if (analyze.ok && analyze.value.reduced) {
          const again = await client.analyze(
            { tf: analyze.value.reduced },
            signal,
          );
          if (again.ok) reducedResponse = again.value.response;
        }
        return { transfer, analyze, reducedResponse };
      });
      if (outcome.stale) return;
      const { transfer, analyze, reducedResponse } = outcome.value;
      const error = !transfer.ok
        ? transfer.error
        : !analyze.ok
          ? analyze.error
          : null;
      doc = {
        ...doc,
        results: {
          transfer: transfer.ok ? transfer.value : null,
          analyze: analyze.ok ? analyze.value : null,
          reducedResponse,
          error,
        },
        resultsStale: false,
      };
      if (error) banner(`${error.kind}: ${error.detail}`);
      else banner("");
    } catch (exc) {
      banner(`service unreachable: ${String(exc)}`);
    } finally {
      busy = false;
      renderAll();
    }
  }

  // ---- canvas ----------------------------------------------------------

  function canvasPoint(event: MouseEvent): Point {
    const ctm = canvas.getScreenCTM();
    if (!ctm) return { x: event.offsetX, y: event.offsetY };
    const pt = new DOMPoint(event.clientX, event.clientY).matrixTransform(
      ctm.inverse(),
    );
    return { x: pt.x, y: pt.y };
  }

  function stateForRender(): DocumentState {
    if (!drag) return doc.state;
    const patched = cloneState(doc.state);
    patched.layout.positions[drag.node] = { x: drag.at.x, y: drag.at.y };
    return patched;
  }

  function renderCanvas(): void {
    while (canvas.firstChild) canvas.removeChild(canvas.firstChild);
    const state = stateForRender();
    const shapes = editorScene(state, selection);
    for (const shape of shapes) {
      if (shape.type === "branch") {
        const group = svg(rootDoc, "g", {
          class: `branch${shape.selected ? " selected" : ""}`,
          "data-kind": "branch",
          "data-id": String(shape.id),
        });
        group.appendChild(
          svg(rootDoc, "path", { d: shape.d, class: "branch-line" }),
        );
        group.appendChild(
          svg(rootDoc, "path", { d: shape.d, class: "branch-hit" }),
        );
        group.appendChild(
          svg(rootDoc, "path", { d: arrowPath(shape.arrow), class: "arrow" }),
        );
        group.appendChild(
          svg(
            rootDoc,
            "text",
            {
              x: String(shape.label.x),
              y: String(shape.label.y),
              class: "branch-label",
              "text-anchor": "middle",
            },
            shape.label.text,
          ),
        );
        canvas.appendChild(group);
      } else {
        const classes = ["node"];
        if (shape.selected) classes.push("selected");
        if (shape.id === pendingSource) classes.push("pending");
        const group = svg(rootDoc, "g", {
          class: classes.join(" "),
          "data-kind": "node",
          "data-id": String(shape.id),
        });
        group.appendChild(
          svg(rootDoc, "circle", {
            cx: String(shape.cx),
            cy: String(shape.cy),
            r: String(shape.r),
            class: "node-circle",
          }),
        );
        group.appendChild(
          svg(
            rootDoc,
            "text",
            {
              x: String(shape.cx),
              y: String(shape.cy + 4),
              class: "node-id",
              "text-anchor": "middle",
            },
            shape.label ?? String(shape.id),
          ),
        );
        if (shape.terminal) {
          group.appendChild(
            svg(rootDoc, "circle", {
              cx: String(shape.cx),
              cy: String(shape.cy),
              r: String(shape.r + 4),
              class: `terminal-ring ${shape.terminal}`,
            }),
          );
          group.appendChild(
            svg(
              rootDoc,
              "text",
              {
                x: String(shape.cx),
                y: String(shape.cy - shape.r - 8),
                class: "terminal-tag",
                "text-anchor": "middle",
              },
              shape.terminal === "both" ? "in+out" : shape.terminal,
            ),
          );
        }
        canvas.appendChild(group);
      }
    }
  }

  function shapeIdAt(event: MouseEvent): { kind: string; id: number } | null {
    let target = event.target as Element | null;
    while (target && target !== canvas) {
      const kind = target.getAttribute("data-kind");
      if (kind) return { kind, id: Number(target.getAttribute("data-id")) };
      target = target.parentElement;
    }
    return null;
  }

  canvas.addEventListener("mousedown", (event) => {
    const at = canvasPoint(event);
    const hit = shapeIdAt(event);
    if (tool === "select") {
      if (hit?.kind === "node") {
        selection = { type: "node", id: hit.id };
        drag = { node: hit.id, at, moved: false };
      } else if (hit?.kind === "branch") {
        selection = { type: "branch", id: hit.id };
      } else {
        selection = null;
      }
      renderAll();
      return;
    }
    if (tool === "node") {
      if (!hit) {
        edit({ kind: "add-node", at: { x: Math.round(at.x), y: Math.round(at.y) } });
      }
      return;
    }
    const nodeId = hit?.kind === "node" ? hit.id : hitNode(doc.state, at);
    if (nodeId === null || nodeId === undefined) return;
    if (pendingSource === null) {
      pendingSource = nodeId;
      banner(
        tool === "branch"
          ? `branch from node ${nodeId}: click the target node`
          : `closing gesture from output ${nodeId}: click the input node`,
        "info",
      );
      renderCanvas();
      return;
    }
    const from = pendingSource;
    pendingSource = null;
    if (tool === "branch") {
      edit({ kind: "add-branch", from, to: nodeId });
    } else {
      if (edit({ kind: "designate-terminals", from, to: nodeId })) {
        banner(`terminals set: output ${from}, input ${nodeId}`, "info");
        tool = "select";
      }
    }
  });

  canvas.addEventListener("mousemove", (event) => {
    if (!drag) return;
    const at = canvasPoint(event);
    if (Math.hypot(at.x - drag.at.x, at.y - drag.at.y) > 1) drag.moved = true;
    drag.at = at;
    if (drag.moved) renderCanvas();
  });

  const endDrag = () => {
    if (!drag) return;
    const { node, at, moved } = drag;
    drag = null;
    if (moved) {
      edit({ kind: "move-node", node, to: { x: Math.round(at.x), y: Math.round(at.y) } });
    } else {
      renderCanvas();
    }
  };
  canvas.addEventListener("mouseup", endDrag);
  canvas.addEventListener("mouseleave", endDrag);

  // ---- properties panel ------------------------------------------------

  function renderProps(): void {
    props.textContent = "";
    if (!selection) {
      props.appendChild(
        el(rootDoc, "p", { class: "hint" },
          "select a node or branch; node tool adds nodes; branch tool " +
          "connects two clicks; close tool draws output then input"),
      );
      return;
    }
    if (selection.type === "node") {
      const node = findNode(doc.state.graph, selection.id);
      if (!node) return;
      props.appendChild(el(rootDoc, "h3", {}, `node ${node.id}`));
      const labelInput = el(rootDoc, "input", {
        type: "text",
        placeholder: "label",
        value: node.label ?? "",
      });
      labelInput.addEventListener("change", () => {
        edit({
          kind: "relabel-node",
          node: node.id,
          label: labelInput.value === "" ? null : labelInput.value,
        });
      });
      props.appendChild(labelRow(rootDoc, "label", labelInput));
      const asInput = el(rootDoc, "button", {}, "set as input");
      asInput.addEventListener("click", () => edit({ kind: "set-input", node: node.id }));
      const asOutput = el(rootDoc, "button", {}, "set as output");
      asOutput.addEventListener("click", () => edit({ kind: "set-output", node: node.id }));
      const del = el(rootDoc, "button", { class: "danger" }, "delete node");
      del.addEventListener("click", () => {
        selection = null;
        edit({ kind: "delete-node", node: node.id });
      });
      const row = el(rootDoc, "div", { class: "button-row" });
      row.append(asInput, asOutput, del);
      props.appendChild(row);
      return;
    }
    const branch = findBranch(doc.state.graph, selection.id);
    if (!branch) return;
    props.appendChild(
      el(rootDoc, "h3", {}, `branch ${branch.from} → ${branch.to}`),
    );
    const gainInput = el(rootDoc, "input", {
      type: "text",
      value: formatRationalText(branch.gain),
      spellcheck: "false",
    });
    const gainError = el(rootDoc, "span", { class: "field-error" }, "");
    gainInput.addEventListener("change", () => {
      const parsed = parseRationalText(gainInput.value);
      if (!parsed.ok) {
        gainError.textContent = parsed.message;
        return;
      }
      gainError.textContent = "";
      edit({ kind: "edit-gain", branch: branch.id, gain: parsed.gain });
    });
    props.appendChild(labelRow(rootDoc, "gain", gainInput));
    props.appendChild(gainError);
    props.appendChild(
      el(rootDoc, "p", { class: "gain-preview" },
        `label: ${rationalLabel(branch.gain, "s")}`),
    );

    const symbolsInput = el(rootDoc, "input", {
      type: "text",
      value: branch.symbols.join(", "),
      placeholder: "V, W",
    });
    symbolsInput.addEventListener("change", () => {
      const symbols = symbolsInput.value
        .split(",")
        .map((s) => s.trim())
        .filter((s) => s !== "");
      edit({ kind: "set-symbols", branch: branch.id, symbols });
    });
    props.appendChild(labelRow(rootDoc, "symbols", symbolsInput));

    const layout = doc.state.layout.branches[branch.id];
    const kindSelect = el(rootDoc, "select", {});
    const kinds = branch.from === branch.to ? ["self-loop"] : ["straight", "arc", "polyline"];
    for (const k of kinds) {
      const opt = el(rootDoc, "option", { value: k }, k);
      if (layout?.kind === k) opt.setAttribute("selected", "selected");
      kindSelect.appendChild(opt);
    }
    kindSelect.addEventListener("change", () => {
      const render = kindSelect.value as "straight" | "arc" | "polyline" | "self-loop";
      edit({
        kind: "reroute-branch",
        branch: branch.id,
        render,
        bend: render === "arc" ? (layout?.bend || 40) : undefined,
        via: render === "polyline" ? (layout?.via ?? []) : undefined,
      });
    });
    props.appendChild(labelRow(rootDoc, "render", kindSelect));
    if (layout?.kind === "arc") {
      const bendInput = el(rootDoc, "input", {
        type: "number",
        value: String(layout.bend || 40),
        step: "10",
      });
      bendInput.addEventListener("change", () => {
        edit({
          kind: "reroute-branch",
          branch: branch.id,
          render: "arc",
          bend: Number(bendInput.value) || 40,
        });
      });
      props.appendChild(labelRow(rootDoc, "bend", bendInput));
    }
    const del = el(rootDoc, "button", { class: "danger" }, "delete branch");
    del.addEventListener("click", () => {
      selection = null;
      edit({ kind: "delete-branch", branch: branch.id });
    });
    props.appendChild(del);
  }

  function labelRow(docRef: Document, text: string, control: HTMLElement): HTMLElement {
    const row = el(docRef, "label", { class: "field" });
    row.appendChild(el(docRef, "span", {}, text));
    row.appendChild(control);
    return row;
  }

  // ---- results panel ----------------------------------------------------

  function renderChart(chart: LineChart | NyquistChart, title: string): SVGElement {
    const vp = DEFAULT_VIEWPORT;
    const root = svg(rootDoc, "svg", {
      viewBox: `0 0 ${vp.width} ${vp.height}`,
      class: "chart",
    });
    root.appendChild(
      svg(rootDoc, "text", { x: String(vp.width / 2), y: "12", class: "chart-title", "text-anchor": "middle" }, title),
    );
    root.appendChild(
      svg(rootDoc, "rect", {
        x: String(chart.plot.x),
        y: String(chart.plot.y),
        width: String(chart.plot.width),
        height: String(chart.plot.height),
        class: "plot-frame",
      }),
    );
    for (const t of chart.xTicks) {
      root.appendChild(
        svg(rootDoc, "line", {
          x1: String(t.pos), x2: String(t.pos),
          y1: String(chart.plot.y), y2: String(chart.plot.y + chart.plot.height),
          class: "grid",
        }),
      );
      root.appendChild(
        svg(rootDoc, "text", {
          x: String(t.pos),
          y: String(chart.plot.y + chart.plot.height + 14),
          class: "tick",
          "text-anchor": "middle",
        }, t.label),
      );
    }
    for (const t of chart.yTicks) {
      root.appendChild(
        svg(rootDoc, "line", {
          x1: String(chart.plot.x), x2: String(chart.plot.x + chart.plot.width),
          y1: String(t.pos), y2: String(t.pos),
          class: "grid",
        }),
      );
      root.appendChild(
        svg(rootDoc, "text", {
          x: String(chart.plot.x - 6),
          y: String(t.pos + 3),
          class: "tick",
          "text-anchor": "end",
        }, t.label),
      );
    }
    if ("mirrors" in chart) {
      for (const m of chart.mirrors) {
        root.appendChild(svg(rootDoc, "path", { d: m, class: "series mirror" }));
      }
      if (chart.critical) {
        root.appendChild(
          svg(rootDoc, "text", {
            x: String(chart.critical.x),
            y: String(chart.critical.y + 4),
            class: "critical",
            "text-anchor": "middle",
          }, "+"),
        );
      }
    }
    chart.paths.forEach((p, i) => {
      root.appendChild(
        svg(rootDoc, "path", {
          d: p.d,
          class: `series s${i}${p.dimmed ? " dimmed" : ""}`,
        }),
      );
    });
    root.appendChild(
      svg(rootDoc, "text", {
        x: String(chart.plot.x + chart.plot.width / 2),
        y: String(vp.height - 4),
        class: "axis-label",
        "text-anchor": "middle",
      }, chart.xLabel),
    );
    return root;
  }

  function renderResults(): void {
    resultsBox.classList.toggle("stale", doc.resultsStale);
    tableBox.textContent = "";
    tfLine.textContent = "";
    routhBox.textContent = "";
    rootsBox.textContent = "";
    chartsBox.textContent = "";
    const results = doc.results;
    if (!results) {
      tableBox.appendChild(
        el(rootDoc, "p", { class: "hint" }, "no results yet: draw a graph and compute"),
      );
      return;
    }
    if (results.transfer) {
      const model = buildTableModel(results.transfer);
      const table = el(rootDoc, "table", { class: "coeff" });
      const head = el(rootDoc, "tr");
      for (const h of model.headers) head.appendChild(el(rootDoc, "th", {}, h));
      table.appendChild(head);
      for (const row of model.rows) {
        const tr = el(rootDoc, "tr");
        row.forEach((cellText, i) => {
          tr.appendChild(el(rootDoc, i === 0 ? "th" : "td", {}, cellText));
        });
        table.appendChild(tr);
      }
      tableBox.appendChild(table);
    }
    const analyze = results.analyze;
    if (!analyze) return;
    tfLine.textContent = `G(${results.transfer?.variable ?? "s"}) = ${rationalLabel(
      { num: analyze.transfer.num, den: analyze.transfer.den },
      results.transfer?.variable ?? "s",
    )}`;
    if (analyze.routh) {
      const r = analyze.routh;
      routhBox.appendChild(
        el(rootDoc, "p", { class: `verdict ${r.verdict}` },
          `stability: ${r.verdict} (${r.sign_changes} sign change${r.sign_changes === 1 ? "" : "s"})`),
      );
      for (const note of r.notes) {
        routhBox.appendChild(el(rootDoc, "p", { class: "note" }, note));
      }
    }
    if (analyze.roots) {
      const list = (pairs: [number, number][]) =>
        pairs
          .map(([re, im]) => {
            const imAbs = Math.abs(im);
            const imText = imAbs < 1e-12 ? "" : `${im < 0 ? "-" : "+"}${trim(imAbs)}j`;
            return `${trim(re)}${imText}`;
          })
          .join(",  ") || "none";
      rootsBox.appendChild(el(rootDoc, "p", {}, `zeros: ${list(analyze.roots.zeros)}`));
      rootsBox.appendChild(el(rootDoc, "p", {}, `poles: ${list(analyze.roots.poles)}`));
    }
    if (analyze.reduced) {
      rootsBox.appendChild(
        el(rootDoc, "p", {},
          `reduced: ${rationalLabel({ num: analyze.reduced.num, den: analyze.reduced.den }, "s")}`),
      );
    }
    const main: Series = { label: "G", points: analyze.response };
    const series: Series[] = [main];
    if (results.reducedResponse) {
      series.push({ label: "reduced", points: results.reducedResponse });
    }
    chartsBox.appendChild(renderChart(bodeMagChart(series), "Bode magnitude"));
    chartsBox.appendChild(renderChart(bodePhaseChart(series), "Bode phase"));
    chartsBox.appendChild(renderChart(nyquistChart([main]), "Nyquist"));
  }

  function trim(v: number): string {
    return String(Math.round(v * 1e6) / 1e6);
  }

  // ---- toolbar / status --------------------------------------------------

  function renderToolbar(): void {
    for (const name of ["select", "node", "branch", "close"] as const) {
      $(`tool-${name}`).classList.toggle("active", tool === name);
    }
    ($("btn-undo") as HTMLButtonElement).disabled = !canUndo(doc);
    ($("btn-redo") as HTMLButtonElement).disabled = !canRedo(doc);
  }

  function renderStatus(): void {
    const bits: string[] = [];
    if (busy) bits.push("computing…");
    if (doc.resultsStale && doc.results) bits.push("results are stale");
    if (doc.dirty) bits.push("unsaved changes");
    statusBox.textContent = bits.join(" · ");
  }

  function renderSource(): void {
    sourceText.value = serializeDocument(doc.state);
  }

  function renderAll(): void {
    renderToolbar();
    renderCanvas();
    renderProps();
    renderResults();
    renderStatus();
    renderSource();
  }

  // ---- top-level controls ------------------------------------------------

  for (const name of ["select", "node", "branch", "close"] as const) {
    $(`tool-${name}`).addEventListener("click", () => {
      tool = name;
      pendingSource = null;
      renderToolbar();
      renderCanvas();
    });
  }
  $("btn-undo").addEventListener("click", () => {
    doc = undo(doc);
    selection = pruneSelection(selection);
    renderAll();
    scheduleAuto();
  });
  $("btn-redo").addEventListener("click", () => {
    doc = redo(doc);
    selection = pruneSelection(selection);
    renderAll();
    scheduleAuto();
  });
  $("btn-compute").addEventListener("click", () => void compute());
  $("btn-save").addEventListener("click", () => {
    const blob = new Blob([serializeDocument(doc.state)], {
      type: "application/json",
    });
    const url = URL.createObjectURL(blob);
    const a = el(rootDoc, "a", { href: url, download: "graph.json" });
    rootDoc.body.appendChild(a);
    a.click();
    a.remove();
    URL.revokeObjectURL(url);
    doc = { ...doc, dirty: false };
    renderStatus();
  });
  $("btn-open").addEventListener("click", () => fileInput.click());
  fileInput.addEventListener("change", () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    void file.text().then((text) => {
      loadFromText(text);
      fileInput.value = "";
    });
  });
  $("btn-apply-source").addEventListener("click", () => {
    loadFromText(sourceText.value);
  });

  function loadFromText(text: string): void {
    const outcome = deserializeDocument(text);
    sourceDiag.textContent = "";
    if (!outcome.ok) {
      for (const diag of outcome.errors) {
        sourceDiag.appendChild(
          el(rootDoc, "p", { class: "field-error" },
            diag.path ? `${diag.path}: ${diag.message}` : diag.message),
        );
      }
      return;
    }
    for (const warning of outcome.warnings) {
      sourceDiag.appendChild(
        el(rootDoc, "p", { class: "note" }, `${warning.path}: ${warning.message}`),
      );
    }
    doc = newDocument(outcome.state);
    selection = null;
    pendingSource = null;
    banner("");
    renderAll();
    scheduleAuto();
  }

  rootDoc.addEventListener("keydown", (event) => {
    if (event.target instanceof HTMLInputElement) return;
    if (event.target instanceof HTMLTextAreaElement) return;
    if ((event.ctrlKey || event.metaKey) && event.key.toLowerCase() === "z") {
      event.preventDefault();
      doc = event.shiftKey ? redo(doc) : undo(doc);
      selection = pruneSelection(selection);
      renderAll();
      scheduleAuto();
      return;
    }
    if (event.key === "Escape") {
      pendingSource = null;
      selection = null;
      renderAll();
      return;
    }
    if (event.key === "Delete" || event.key === "Backspace") {
      if (!selection) return;
      const action: EditAction =
        selection.type === "node"
          ? { kind: "delete-node", node: selection.id }
          : { kind: "delete-branch", branch: selection.id };
      selection = null;
      edit(action);
    }
  });

  [monicCheck, routhCheck, rootsCheck].forEach((box) =>
    box.addEventListener("change", () => scheduleAuto()),
  );
  reduceInput.addEventListener("change", () => scheduleAuto());
  subsInput.addEventListener("change", () => scheduleAuto());

  renderAll();
}

if (typeof window !== "undefined" && typeof document !== "undefined") {
  initApp(document);
}
