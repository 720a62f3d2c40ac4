/** Typed client for the analysis service; the UI's only source of numbers. */

export interface ParamInfo {
  index: number;
  label: string;
  value: number;
  block: number;
  order_preserving_max: number | null;
}

export interface BlockInfo {
  index: number;
  params: number[];
}

export interface ModelSummary {
  source: string;
  n_atoms: number;
  n_params: number;
  n_blocks: number;
  atoms: string[];
  params: ParamInfo[];
  blocks: BlockInfo[];
  variables: { name: string; states: string[] }[] | null;
  valid: boolean;
  violations: string[];
}

export interface CovaryChange {
  index: number;
  label: string;
  old: number;
  new: number;
}

export interface CovaryResponse {
  theta_new: number[];
  labels: string[];
  touched_blocks: number[];
  scale_factors: Record<string, number>;
  changes: CovaryChange[];
}

export interface SweepPoint {
  targets: number[];
  probability: number | null;
  kl: number | null;
  cd: number | null;
}

export interface Curve {
  scheme: string;
  points: SweepPoint[];
}

export interface SensitivityResponse {
  varied: string[];
  curves: Curve[];
}

export interface ClassifyResponse {
  kind: string;
  witness: Record<string, unknown>;
  samples: number;
  max_abs_residual: number;
  mean_abs_residual: number;
  max_identity_gap: number;
  residuals: number[];
  projection: null;
}

export interface ProjectResponse {
  min_kl: number;
  proportional_kl: number;
  matches_proportional: boolean;
  grid_step: number;
  n_candidates: number;
  argmin_theta: number[];
  labels: string[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly errorCase: string,
    readonly detail: string,
  ) {
    super(`${errorCase}: ${detail}`);
  }
}

export type VariationBody = {
  vary: Record<string, number>;
  scheme?: string | Record<string, string>;
};

export class Client {
  constructor(
    readonly baseUrl: string = "",
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiError(
        response.status,
        String(payload.error ?? "error"),
        String(payload.detail ?? response.statusText),
      );
    }
    return payload as T;
  }

  getModel(): Promise<ModelSummary> {
    return this.request("GET", "/api/model");
  }

  uploadModel(payload: unknown): Promise<ModelSummary> {
    return this.request("POST", "/api/model", payload);
  }

  covary(body: VariationBody): Promise<CovaryResponse> {
    return this.request("POST", "/api/covary", body);
  }

  sensitivity(body: {
    vary: string[];
    event: string;
    schemes: string[];
    grid?: number;
  }): Promise<SensitivityResponse> {
    return this.request("POST", "/api/sensitivity", body);
  }

  divergence(body: VariationBody & { metrics?: string[] }): Promise<
    Record<string, number>
  > {
    return this.request("POST", "/api/divergence", body);
  }

  classify(body: VariationBody & { samples?: number }): Promise<
    ClassifyResponse
  > {
    return this.request("POST", "/api/classify", body);
  }

  project(body: VariationBody & { grid?: number }): Promise<ProjectResponse> {
    return this.request("POST", "/api/project", body);
  }
}
