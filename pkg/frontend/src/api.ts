/** Thin client for the corpus filter service. */

export interface FieldValues {
  entity: string;
  field: string;
  values: [string, number][];
}

export interface SampleChant {
  chantlink: string;
  incipit: string;
  cantus_id: string;
  genre: string | null;
  db: string;
}

export interface PreviewResult {
  chant_count: number;
  source_count: number;
  sample_chants: SampleChant[];
  config_digest: string;
  canonical_config: string;
}

export interface StatsResult {
  total_chants: number;
  total_sources: number;
  [metric: string]: unknown;
}

export class ServiceError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private async getJson<T>(path: string, signal?: AbortSignal): Promise<T> {
    const response = await fetch(this.baseUrl + path, { signal });
    const body = await response.json();
    if (!response.ok) {
      throw new ServiceError(body.error ?? response.statusText, response.status);
    }
    return body as T;
  }

  private async postText<T>(path: string, text: string, signal?: AbortSignal): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "text/plain; charset=utf-8" },
      body: text,
      signal,
    });
    const body = await response.json();
    if (!response.ok) {
      throw new ServiceError(body.error ?? response.statusText, response.status);
    }
    return body as T;
  }

  stats(signal?: AbortSignal): Promise<StatsResult> {
    return this.getJson("/stats", signal);
  }

  fieldValues(entity: "chant" | "source", field: string, signal?: AbortSignal): Promise<FieldValues> {
    return this.getJson(`/fields/${entity}/${field}/values`, signal);
  }

  preview(configText: string, signal?: AbortSignal): Promise<PreviewResult> {
    return this.postText("/filter/preview", configText, signal);
  }
}
