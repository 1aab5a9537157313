import type {
  DerivedTheme,
  MergeStep,
  NgramEntry,
  Report,
  TfidfEntry,
  TopicsSection,
  TrendBucket,
} from "./types.js";

function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderCorpusSummary(report: Report): string {
  const c = report.corpus;
  return `<div class="summary">
    <span>${c.total} reviews</span>
    <span>${c.spam_removed} spam removed</span>
    <span>${c.analyzed} analyzed (mid-length)</span>
    <span>classifier: ${escapeHtml(report.sentiment.classifier_id)}</span>
  </div>`;
}

export function renderTopicTable(
  topics: TopicsSection,
  selected: Set<number>,
  claimed: (id: number) => string | null,
): string {
  const rows = topics.topic_sizes
    .map((size, id) => {
      const keywords = topics.topic_keywords[id]
        .slice(0, 5)
        .map((k) => escapeHtml(k.term))
        .join(", ");
      const owner = claimed(id);
      const classes = [
        selected.has(id) ? "selected" : "",
        owner ? "claimed" : "",
      ]
        .filter(Boolean)
        .join(" ");
      const badge = owner ? ` <em>(${escapeHtml(owner)})</em>` : "";
      return `<tr class="${classes}" data-topic="${id}">
        <td>${id}</td><td>${size}</td><td>${keywords}${badge}</td></tr>`;
    })
    .join("\n");
  return `<table class="topic-table">
    <thead><tr><th>topic</th><th>size</th><th>top keywords</th></tr></thead>
    <tbody>${rows}</tbody></table>
    <p class="noise">${topics.noise_count} documents unassigned (noise)</p>`;
}

/** Similarity heatmap as a table of shaded cells; exact value on hover. */
export function renderHeatmap(similarity: number[][] | null): string {
  if (!similarity || similarity.length === 0) {
    return `<p class="empty">similarity matrix needs at least two topics</p>`;
  }
  const header = similarity
    .map((_, j) => `<th>${j}</th>`)
    .join("");
  const rows = similarity
    .map((row, i) => {
      const cells = row
        .map((value, j) => {
          const alpha = Math.max(0, Math.min(1, value)).toFixed(3);
          return `<td class="cell" data-row="${i}" data-col="${j}"
            style="background: rgba(178, 34, 52, ${alpha})"
            title="sim(${i}, ${j}) = ${value.toFixed(4)}"></td>`;
        })
        .join("");
      return `<tr><th>${i}</th>${cells}</tr>`;
    })
    .join("\n");
  return `<table class="heatmap"><thead><tr><th></th>${header}</tr></thead>
    <tbody>${rows}</tbody></table>`;
}

/** Hierarchy as nested lists built from the merge steps, never
 * recomputed client-side. */
export function renderHierarchy(steps: MergeStep[], nTopics: number): string {
  if (steps.length === 0) {
    return `<p class="empty">no merges: fewer than two topics</p>`;
  }
  const nodes = new Map<number, string>();
  for (let id = 0; id < nTopics; id += 1) {
    nodes.set(id, `<li class="leaf">topic ${id}</li>`);
  }
  steps.forEach((step, index) => {
    const id = nTopics + index;
    const left = nodes.get(step.left) ?? "";
    const right = nodes.get(step.right) ?? "";
    nodes.delete(step.left);
    nodes.delete(step.right);
    nodes.set(
      id,
      `<li class="merge">d=${step.distance.toFixed(3)}
        <ul>${left}${right}</ul></li>`,
    );
  });
  const roots = [...nodes.values()].join("");
  return `<ul class="dendrogram">${roots}</ul>`;
}

/** Trend as an inline SVG polyline plus a volume bar per period. */
export function renderTrend(trend: TrendBucket[]): string {
  if (trend.length === 0) return `<p class="empty">no trend data</p>`;
  const width = 560;
  const height = 160;
  const step = width / Math.max(1, trend.length - 1);
  const y = (mean: number) => height / 2 - (mean * height) / 2.2;
  const points = trend
    .map((bucket, i) => `${(i * step).toFixed(1)},${y(bucket.mean_sentiment).toFixed(1)}`)
    .join(" ");
  const bars = trend
    .map((bucket, i) => {
      const barHeight = bucket.normalized_count * 40;
      return `<rect x="${(i * step - 4).toFixed(1)}" y="${height - barHeight}"
        width="8" height="${barHeight.toFixed(1)}" class="volume"
        ><title>${bucket.period}: ${bucket.review_count} reviews</title></rect>`;
    })
    .join("");
  const labels = trend
    .map(
      (bucket, i) =>
        `<text x="${(i * step).toFixed(1)}" y="${height + 14}">${bucket.period}</text>`,
    )
    .join("");
  return `<svg class="trend" viewBox="-10 -10 ${width + 20} ${height + 30}">
    <line x1="0" y1="${height / 2}" x2="${width}" y2="${height / 2}" class="axis"/>
    ${bars}
    <polyline points="${points}" fill="none" class="mean-line"/>
    ${labels}
  </svg>`;
}

export function renderTermTables(terms: Report["terms"]): string {
  const ngram = (title: string, entries: NgramEntry[]) => `
    <div class="term-table"><h3>${title}</h3><table>
    ${entries
      .map((e) => `<tr><td>${escapeHtml(e.gram)}</td><td>${e.count}</td></tr>`)
      .join("")}
    </table></div>`;
  const tfidf = (entries: TfidfEntry[]) => `
    <div class="term-table"><h3>tf-idf</h3><table>
    ${entries
      .map(
        (e) =>
          `<tr><td>${escapeHtml(e.term)}</td><td>${e.score.toFixed(2)}</td></tr>`,
      )
      .join("")}
    </table></div>`;
  return `<div class="terms">
    ${ngram("unigrams", terms.unigrams.entries)}
    ${ngram("bigrams", terms.bigrams.entries)}
    ${ngram("trigrams", terms.trigrams.entries)}
    ${tfidf(terms.tfidf.entries)}
  </div>`;
}

/** Theme rows always show the server-derived counts, never a local sum. */
export function renderThemes(derived: DerivedTheme[], unassigned: number[]): string {
  const rows = derived
    .map(
      (theme, index) => `<tr data-theme="${index}">
      <td>${escapeHtml(theme.name)}</td>
      <td>${theme.member_topics.join(", ")}</td>
      <td>${theme.review_count}</td>
      <td>${theme.keywords
        .slice(0, 5)
        .map((k) => escapeHtml(k.term))
        .join(", ")}</td>
      <td><button class="remove" data-theme="${index}">remove</button></td>
    </tr>`,
    )
    .join("\n");
  const leftover = unassigned.length
    ? `<p class="unassigned">unassigned topics: ${unassigned.join(", ")}</p>`
    : "";
  return `<table class="themes">
    <thead><tr><th>theme</th><th>topics</th><th>reviews</th><th>keywords</th><th></th></tr></thead>
    <tbody>${rows}</tbody></table>${leftover}`;
}

export function renderErrorBanner(message: string): string {
  return `<div class="error-banner">${escapeHtml(message)}
    <button id="retry">retry</button></div>`;
}
