import { ApiError, getReport, getThemes, postThemes } from "./api.js";
import {
  renderCorpusSummary,
  renderErrorBanner,
  renderHeatmap,
  renderHierarchy,
  renderTermTables,
  renderThemes,
  renderTopicTable,
  renderTrend,
} from "./render.js";
import { WorkbenchState } from "./state.js";
import type { Report, ThemesPayload } from "./types.js";

const SUGGESTED_NAMES = [
  "Racism",
  "Toxicity",
  "Harassment",
  "Crashes",
  "Performance",
  "Moderation",
  "Kids",
  "Community",
];

const state = new WorkbenchState();
let report: Report | null = null;
let themes: ThemesPayload | null = null;

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function setStatus(message: string, isError = false): void {
  const status = el("status");
  status.textContent = message;
  status.className = isError ? "status error" : "status";
}

function redraw(): void {
  if (!report) return;
  el("summary").innerHTML = renderCorpusSummary(report);
  el("trend").innerHTML = renderTrend(report.sentiment.trend);
  el("terms").innerHTML = renderTermTables(report.terms);

  const topics = report.topics;
  if (!topics) {
    el("topics").innerHTML = `<p class="empty">report has no topics stage</p>`;
    return;
  }
  el("topics").innerHTML = renderTopicTable(topics, state.selection, (id) =>
    state.claimedBy(id),
  );
  el("heatmap").innerHTML = renderHeatmap(topics.similarity);
  el("hierarchy").innerHTML = renderHierarchy(topics.hierarchy, topics.n_topics);
  if (themes) {
    el("themes").innerHTML = renderThemes(
      themes.derived.themes,
      themes.derived.unassigned,
    );
  }

  for (const row of document.querySelectorAll<HTMLElement>("[data-topic]")) {
    row.onclick = () => {
      state.toggle(Number(row.dataset.topic));
      redraw();
    };
  }
  for (const button of document.querySelectorAll<HTMLElement>("button.remove")) {
    button.onclick = (event) => {
      event.stopPropagation();
      state.removeTheme(Number(button.dataset.theme));
      void saveThemes();
    };
  }
}

async function saveThemes(): Promise<void> {
  try {
    themes = await postThemes(state.toSpec());
    state.loadSpec(themes.spec);
    setStatus("themes saved");
  } catch (err) {
    // 422 keeps the draft so the user can fix it; the message is the
    // server's own validation text
    const message = err instanceof ApiError ? err.message : String(err);
    setStatus(message, true);
  }
  redraw();
}

function wireMergeForm(): void {
  const input = el("theme-name") as HTMLInputElement;
  const datalist = el("theme-suggestions");
  datalist.innerHTML = SUGGESTED_NAMES.map(
    (name) => `<option value="${name}"></option>`,
  ).join("");
  el("merge").onclick = () => {
    const result = state.addTheme(input.value);
    if (!result.ok) {
      setStatus(result.error, true);
      return;
    }
    input.value = "";
    void saveThemes();
  };
  el("clear").onclick = () => {
    state.clearSelection();
    redraw();
  };
}

async function load(): Promise<void> {
  try {
    report = await getReport();
    themes = await getThemes();
    state.setTopics(
      report.topics ? report.topics.topic_sizes.map((_, i) => i) : [],
    );
    state.loadSpec(themes.spec);
    el("banner").innerHTML = "";
    setStatus("report loaded");
    redraw();
  } catch (err) {
    const message = err instanceof ApiError ? err.message : String(err);
    el("banner").innerHTML = renderErrorBanner(`failed to load: ${message}`);
    const retry = document.getElementById("retry");
    if (retry) retry.onclick = () => void load();
  }
}

wireMergeForm();
void load();
