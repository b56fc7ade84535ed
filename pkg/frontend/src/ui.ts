/** DOM rendering: field-value selectors, preview pane, download/import. */

import { ApiClient } from "./api.js";
import { BuilderStore, clampRange, toggleValue } from "./state.js";

const CHANT_FIELDS = ["genre", "office", "feast", "db", "mode", "siglum"];
const SOURCE_FIELDS = ["cursus", "provenance", "century", "siglum"];
const VISIBLE_LIMIT = 200; // long lists (feast!) are windowed, search narrows display only

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

async function renderSelector(
  api: ApiClient,
  store: BuilderStore,
  entity: "chant" | "source",
  field: string,
  container: HTMLElement,
): Promise<void> {
  const box = el("details", "facet");
  const title = el("summary", "facet-title", field);
  box.appendChild(title);
  container.appendChild(box);

  let values: [string, number][];
  try {
    values = (await api.fieldValues(entity, field)).values;
  } catch {
    box.appendChild(el("div", "hint", "values unavailable"));
    return;
  }
  if (values.length === 0) {
    box.appendChild(el("div", "hint", "no populated values"));
    return;
  }

  const search = el("input", "facet-search");
  search.placeholder = `search ${values.length} values…`;
  box.appendChild(search);
  const list = el("div", "facet-values");
  box.appendChild(list);

  const mapping = entity === "chant" ? store.state.chantInclude : store.state.sourceInclude;

  const renderValues = () => {
    const needle = search.value.toLowerCase();
    list.textContent = "";
    const shown = values
      .filter(([value]) => value.toLowerCase().includes(needle))
      .slice(0, VISIBLE_LIMIT);
    for (const [value, count] of shown) {
      const label = el("label", "facet-value");
      const checkbox = el("input");
      checkbox.type = "checkbox";
      checkbox.checked = (mapping[field] ?? []).includes(value);
      checkbox.addEventListener("change", () => {
        store.update(() => toggleValue(mapping, field, value));
      });
      label.appendChild(checkbox);
      label.appendChild(el("span", undefined, `${value} (${count})`));
      list.appendChild(label);
    }
  };
  search.addEventListener("input", renderValues);
  renderValues();
}

function renderMelodyControls(store: BuilderStore, container: HTMLElement): void {
  const hasMelody = el("select");
  for (const [value, label] of [["", "any"], ["true", "with melody"], ["false", "without melody"]]) {
    const option = el("option", undefined, label);
    option.value = value;
    hasMelody.appendChild(option);
  }
  hasMelody.addEventListener("change", () => {
    store.update((state) => {
      state.hasMelody = hasMelody.value === "" ? null : hasMelody.value === "true";
    });
  });
  container.appendChild(hasMelody);

  const minNotes = el("input");
  minNotes.type = "number";
  minNotes.min = "0";
  minNotes.placeholder = "min notes";
  minNotes.addEventListener("change", () => {
    store.update((state) => {
      state.minMelodyNotes = minNotes.value === "" ? null : Math.max(0, Number(minNotes.value));
    });
  });
  container.appendChild(minNotes);
}

function renderCenturySlider(store: BuilderStore, container: HTMLElement): void {
  const lo = el("input");
  const hi = el("input");
  for (const input of [lo, hi]) {
    input.type = "range";
    input.min = "1";
    input.max = "21";
    container.appendChild(input);
  }
  lo.value = "1";
  hi.value = "21";
  const apply = () => {
    store.update((state) => {
      // the UI can never emit lo > hi
      state.centuryRange = clampRange(Number(lo.value), Number(hi.value));
    });
  };
  lo.addEventListener("change", apply);
  hi.addEventListener("change", apply);
  const clear = el("button", undefined, "any century");
  clear.addEventListener("click", () => {
    store.update((state) => {
      state.centuryRange = null;
    });
  });
  container.appendChild(clear);
}

function renderPreview(store: BuilderStore, container: HTMLElement): void {
  container.textContent = "";
  if (store.offline) {
    container.appendChild(el("div", "banner error", "service unreachable — retrying on next edit"));
  }
  if (store.error) {
    container.appendChild(el("div", "banner error", store.error));
  }
  const preview = store.lastPreview;
  if (!preview) {
    container.appendChild(el("div", "hint", "no preview yet"));
    return;
  }
  container.appendChild(el(
    "div", "counts",
    `${preview.chant_count} chants, ${preview.source_count} sources` +
      (store.dirty ? " (updating…)" : "")));
  const table = el("table", "sample");
  const head = el("tr");
  for (const column of ["incipit", "cantus_id", "genre", "db"]) {
    head.appendChild(el("th", undefined, column));
  }
  table.appendChild(head);
  for (const chant of preview.sample_chants) {
    const row = el("tr");
    row.appendChild(el("td", undefined, chant.incipit));
    row.appendChild(el("td", undefined, chant.cantus_id));
    row.appendChild(el("td", undefined, chant.genre ?? ""));
    row.appendChild(el("td", undefined, chant.db));
    table.appendChild(row);
  }
  container.appendChild(table);
}

function renderDownload(store: BuilderStore, container: HTMLElement): void {
  const download = el("button", undefined, "download filter file");
  download.addEventListener("click", async () => {
    // ensure the canonical text reflects the latest edits
    await store.refreshPreview();
    const text = store.downloadText();
    if (text === null) return;
    const blob = new Blob([text], { type: "text/yaml" });
    const link = el("a");
    link.href = URL.createObjectURL(blob);
    link.download = "filter.yaml";
    link.click();
    URL.revokeObjectURL(link.href);
  });
  container.appendChild(download);

  const importInput = el("input");
  importInput.type = "file";
  importInput.accept = ".yaml,.yml,.txt";
  importInput.addEventListener("change", async () => {
    const file = importInput.files?.[0];
    if (!file) return;
    try {
      store.importConfig(await file.text());
    } catch (err) {
      store.error = err instanceof Error ? err.message : String(err);
    }
  });
  container.appendChild(importInput);
}

export async function mount(root: HTMLElement, api: ApiClient): Promise<void> {
  const store = new BuilderStore(api);

  const chantPanel = el("section", "panel");
  chantPanel.appendChild(el("h2", undefined, "Chant criteria"));
  const sourcePanel = el("section", "panel");
  sourcePanel.appendChild(el("h2", undefined, "Source criteria"));
  const melodyPanel = el("section", "panel");
  melodyPanel.appendChild(el("h2", undefined, "Melody"));
  const centuryPanel = el("section", "panel");
  centuryPanel.appendChild(el("h2", undefined, "Century"));
  const previewPanel = el("section", "panel preview");
  const actions = el("section", "panel actions");

  root.append(chantPanel, sourcePanel, melodyPanel, centuryPanel, previewPanel, actions);

  renderMelodyControls(store, melodyPanel);
  renderCenturySlider(store, centuryPanel);
  renderDownload(store, actions);
  store.subscribe(() => renderPreview(store, previewPanel));

  for (const field of CHANT_FIELDS) {
    void renderSelector(api, store, "chant", field, chantPanel);
  }
  for (const field of SOURCE_FIELDS) {
    void renderSelector(api, store, "source", field, sourcePanel);
  }

  await store.refreshPreview();
}
