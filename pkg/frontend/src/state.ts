/**
 * Builder-state store: edits mark the state dirty and schedule a debounced
 * preview; an in-flight preview is aborted when a newer edit supersedes it,
 * so the rendered preview is never staler than the last acknowledged edit.
 */

import { ApiClient, PreviewResult } from "./api.js";
import { BuilderState, buildConfigText, emptyState, parseConfigText } from "./config.js";

export type Listener = (store: BuilderStore) => void;

const DEBOUNCE_MS = 250;

export class BuilderStore {
  state: BuilderState = emptyState();
  lastPreview: PreviewResult | null = null;
  dirty = false;
  offline = false;
  error: string | null = null;

  private listeners: Listener[] = [];
  private timer: ReturnType<typeof setTimeout> | null = null;
  private inflight: AbortController | null = null;

  constructor(readonly api: ApiClient, readonly debounceMs: number = DEBOUNCE_MS) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this);
  }

  /** Apply an edit, mark dirty, and schedule a preview refresh. */
  update(edit: (state: BuilderState) => void): void {
    edit(this.state);
    this.dirty = true;
    this.notify();
    this.schedulePreview();
  }

  importConfig(text: string): void {
    this.state = parseConfigText(text);
    this.dirty = true;
    this.notify();
    this.schedulePreview();
  }

  configText(): string {
    return buildConfigText(this.state);
  }

  /** Canonical text for download, as the service serialized it. */
  downloadText(): string | null {
    return this.lastPreview?.canonical_config ?? null;
  }

  private schedulePreview(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => void this.refreshPreview(), this.debounceMs);
  }

  async refreshPreview(): Promise<void> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    try {
      const preview = await this.api.preview(this.configText(), controller.signal);
      if (controller !== this.inflight) return; // superseded by a newer edit
      this.lastPreview = preview;
      this.dirty = false;
      this.offline = false;
      this.error = null;
    } catch (err) {
      if (controller.signal.aborted) return;
      if (err instanceof TypeError) {
        this.offline = true; // network failure, not a config problem
      } else {
        this.error = err instanceof Error ? err.message : String(err);
      }
    }
    this.notify();
  }
}

/** Toggle a value inside one include/exclude map; empty lists are removed. */
export function toggleValue(
  mapping: Record<string, string[]>,
  field: string,
  value: string,
): void {
  const values = mapping[field] ?? [];
  const index = values.indexOf(value);
  if (index >= 0) {
    values.splice(index, 1);
  } else {
    values.push(value);
  }
  if (values.length === 0) {
    delete mapping[field];
  } else {
    mapping[field] = values;
  }
}

/** Clamp a slider pair so the emitted config can never have lo > hi. */
export function clampRange(lo: number, hi: number): [number, number] {
  return lo <= hi ? [lo, hi] : [hi, lo];
}
