/**
 * Builder state and its translation to/from the filter config text format.
 *
 * The UI never decides filtering semantics itself: the emitted text is sent
 * to the service, and the canonical form the service returns is what gets
 * downloaded. The emitter here only has to produce a document the service
 * parses; the importer reads both hand-written and canonical files.
 */

export interface BuilderState {
  chantInclude: Record<string, string[]>;
  chantExclude: Record<string, string[]>;
  sourceInclude: Record<string, string[]>;
  sourceExclude: Record<string, string[]>;
  hasMelody: boolean | null;
  minMelodyNotes: number | null;
  incipitContains: string[] | null;
  centuryRange: [number, number] | null;
  dropChantsWithoutSource: boolean;
  dropSourcesWithoutChants: boolean;
}

export function emptyState(): BuilderState {
  return {
    chantInclude: {},
    chantExclude: {},
    sourceInclude: {},
    sourceExclude: {},
    hasMelody: null,
    minMelodyNotes: null,
    incipitContains: null,
    centuryRange: null,
    dropChantsWithoutSource: true,
    dropSourcesWithoutChants: true,
  };
}

const FIELD_MAP_KEYS = [
  ["chant_include", "chantInclude"],
  ["chant_exclude", "chantExclude"],
  ["source_include", "sourceInclude"],
  ["source_exclude", "sourceExclude"],
] as const;

function needsQuoting(value: string): boolean {
  return (
    value === "" ||
    /[:#\[\]{}&*!|>'"%@`]/.test(value) ||
    /^\s|\s$/.test(value) ||
    /^[-?]/.test(value) ||
    /^(true|false|null|yes|no|on|off|~)$/i.test(value) ||
    /^[\d.+-]+$/.test(value)
  );
}

function scalar(value: string): string {
  return needsQuoting(value) ? `'${value.replace(/'/g, "''")}'` : value;
}

/** Serialize the builder state as a filter config document. */
export function buildConfigText(state: BuilderState): string {
  const lines: string[] = ["version: 1"];
  for (const [key, prop] of FIELD_MAP_KEYS) {
    const mapping = state[prop];
    const fields = Object.keys(mapping)
      .filter((f) => mapping[f].length > 0)
      .sort();
    if (fields.length === 0) continue;
    lines.push(`${key}:`);
    for (const field of fields) {
      lines.push(`  ${field}:`);
      for (const value of [...mapping[field]].sort()) {
        lines.push(`  - ${scalar(value)}`);
      }
    }
  }
  if (state.hasMelody !== null) lines.push(`has_melody: ${state.hasMelody}`);
  if (state.minMelodyNotes !== null) lines.push(`min_melody_notes: ${state.minMelodyNotes}`);
  if (state.incipitContains !== null && state.incipitContains.length > 0) {
    lines.push("incipit_contains:");
    for (const value of [...state.incipitContains].sort()) {
      lines.push(`- ${scalar(value)}`);
    }
  }
  if (state.centuryRange !== null) {
    const [lo, hi] = state.centuryRange;
    lines.push("century_range:", `- ${lo}`, `- ${hi}`);
  }
  if (!state.dropChantsWithoutSource) lines.push("drop_chants_without_source: false");
  if (!state.dropSourcesWithoutChants) lines.push("drop_sources_without_chants: false");
  return lines.join("\n") + "\n";
}

// --- minimal parser for the config subset (import control) ----------------

interface Line {
  indent: number;
  text: string;
}

function unquote(raw: string): string {
  raw = raw.trim();
  if (raw.startsWith("'") && raw.endsWith("'") && raw.length >= 2) {
    return raw.slice(1, -1).replace(/''/g, "'");
  }
  if (raw.startsWith('"') && raw.endsWith('"') && raw.length >= 2) {
    return raw.slice(1, -1);
  }
  return raw;
}

function splitLines(text: string): Line[] {
  return text
    .split(/\r?\n/)
    .map((line) => line.replace(/\s+$/, ""))
    .filter((line) => line.trim() !== "" && !line.trim().startsWith("#"))
    .map((line) => ({
      indent: line.length - line.trimStart().length,
      text: line.trim(),
    }));
}

/** Collect "- item" entries following position i; returns [items, next index]. */
function readList(lines: Line[], i: number): [string[], number] {
  const items: string[] = [];
  while (i < lines.length && lines[i].text.startsWith("- ")) {
    items.push(unquote(lines[i].text.slice(2)));
    i += 1;
  }
  return [items, i];
}

function readInlineList(raw: string): string[] {
  const inner = raw.trim().replace(/^\[/, "").replace(/\]$/, "");
  if (inner.trim() === "") return [];
  return inner.split(",").map((part) => unquote(part));
}

/**
 * Parse a filter config document back into builder state.
 * Throws on unknown keys so a bad import is surfaced, not silently dropped.
 */
export function parseConfigText(text: string): BuilderState {
  const state = emptyState();
  const lines = splitLines(text);
  let i = 0;
  while (i < lines.length) {
    const { text: line } = lines[i];
    const colon = line.indexOf(":");
    if (colon < 0) throw new Error(`cannot parse line: ${line}`);
    const key = line.slice(0, colon).trim();
    const rest = line.slice(colon + 1).trim();
    i += 1;

    const mapEntry = FIELD_MAP_KEYS.find(([k]) => k === key);
    if (mapEntry) {
      const target = state[mapEntry[1]];
      while (i < lines.length && lines[i].indent > 0 && lines[i].text.includes(":")) {
        const fieldLine = lines[i].text;
        const fieldColon = fieldLine.indexOf(":");
        const field = fieldLine.slice(0, fieldColon).trim();
        const fieldRest = fieldLine.slice(fieldColon + 1).trim();
        i += 1;
        if (fieldRest.startsWith("[")) {
          target[field] = readInlineList(fieldRest);
        } else {
          const [items, next] = readList(lines, i);
          target[field] = items;
          i = next;
        }
      }
      continue;
    }

    switch (key) {
      case "version":
        if (rest !== "1") throw new Error(`unsupported version: ${rest}`);
        break;
      case "has_melody":
        state.hasMelody = rest === "true";
        break;
      case "min_melody_notes":
        state.minMelodyNotes = parseInt(rest, 10);
        break;
      case "incipit_contains": {
        if (rest.startsWith("[")) {
          state.incipitContains = readInlineList(rest);
        } else {
          const [items, next] = readList(lines, i);
          state.incipitContains = items;
          i = next;
        }
        break;
      }
      case "century_range": {
        let pair: string[];
        if (rest.startsWith("[")) {
          pair = readInlineList(rest);
        } else {
          const [items, next] = readList(lines, i);
          pair = items;
          i = next;
        }
        if (pair.length !== 2) throw new Error("century_range needs two values");
        state.centuryRange = [parseInt(pair[0], 10), parseInt(pair[1], 10)];
        break;
      }
      case "drop_chants_without_source":
        state.dropChantsWithoutSource = rest === "true";
        break;
      case "drop_sources_without_chants":
        state.dropSourcesWithoutChants = rest === "true";
        break;
      default:
        throw new Error(`unknown config key: ${key}`);
    }
  }
  return state;
}
