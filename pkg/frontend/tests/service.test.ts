/**
 * Integration against the live service (started by globalSetup): the
 * downloaded config for scripted builder states must be byte-identical to
 * the service's canonical export, and import -> export must be a fixed point.
 */

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { BuilderState, emptyState } from "../src/config.js";
import { BuilderStore } from "../src/state.js";
import { SERVICE_URL } from "./globalSetup.js";

const api = new ApiClient(SERVICE_URL);

function scripted(edit: (state: BuilderState) => void): BuilderState {
  const state = emptyState();
  edit(state);
  return state;
}

const SCRIPTED_STATES: BuilderState[] = [
  scripted(() => {}),
  scripted((s) => { s.chantInclude = { genre: ["A"] }; }),
  scripted((s) => { s.chantInclude = { genre: ["R", "A"], office: ["M"] }; }),
  scripted((s) => { s.chantExclude = { db: ["PEM"] }; }),
  scripted((s) => { s.sourceInclude = { cursus: ["Secular"] }; }),
  scripted((s) => { s.hasMelody = true; s.minMelodyNotes = 20; }),
  scripted((s) => { s.incipitContains = ["incipit", "number"]; }),
  scripted((s) => { s.centuryRange = [12, 13]; }),
  scripted((s) => { s.dropSourcesWithoutChants = false; s.chantInclude = { feast: ["Nativitas Domini"] }; }),
  scripted((s) => {
    s.chantInclude = { genre: ["A", "R", "In"] };
    s.sourceExclude = { provenance: ["Paris"] };
    s.hasMelody = true;
    s.centuryRange = [9, 15];
  }),
];

describe("download round trip", () => {
  it.each(SCRIPTED_STATES.map((state, index) => [index, state] as const))(
    "state %i downloads the service's canonical export byte-for-byte",
    async (_index, state) => {
      const store = new BuilderStore(api, 0);
      store.state = state;
      await store.refreshPreview();
      const downloaded = store.downloadText();
      expect(downloaded).not.toBeNull();

      const canonical = (await api.preview(store.configText())).canonical_config;
      expect(downloaded).toBe(canonical);

      // import -> export is a fixed point
      store.importConfig(downloaded!);
      await store.refreshPreview();
      expect(store.downloadText()).toBe(canonical);
    },
  );
});

describe("preview consistency", () => {
  it("permissive state matches /stats totals", async () => {
    const store = new BuilderStore(api, 0);
    await store.refreshPreview();
    const stats = await api.stats();
    expect(store.lastPreview?.chant_count).toBe(stats.total_chants);
    expect(store.lastPreview?.source_count).toBe(stats.total_sources);
  });

  it("field values feed selectors with counts", async () => {
    const values = await api.fieldValues("source", "cursus");
    for (const [value, count] of values.values) {
      expect(typeof value).toBe("string");
      expect(count).toBeGreaterThan(0);
    }
  });

  it("invalid config surfaces a service error, not a crash", async () => {
    await expect(api.preview("chant_include:\n  colour: [red]\n")).rejects.toThrow(/colour/);
  });

  it("newer edits supersede in-flight previews", async () => {
    const store = new BuilderStore(api, 0);
    const first = store.refreshPreview();
    store.state.chantInclude = { genre: ["A"] };
    const second = store.refreshPreview();
    await Promise.all([first, second]);
    const canonical = (await api.preview(store.configText())).canonical_config;
    expect(store.downloadText()).toBe(canonical);
  });
});
