/**
 * Single state store for the explorer session.
 *
 * Every mutation comes from a backend response. Requests of the same topic
 * (covary preview, curves, classification, projection) are keyed by a
 * monotone ticket; a response is applied only when no newer request of
 * that topic has already been applied, so a slow stale response can never
 * overwrite a fresher one regardless of network ordering.
 */

import {
  ApiError,
  Client,
  ClassifyResponse,
  CovaryResponse,
  ModelSummary,
  ProjectResponse,
  SensitivityResponse,
} from "./api.js";

export class LatestGate {
  private issued = 0;
  private applied = 0;

  issue(): number {
    return ++this.issued;
  }

  tryApply(ticket: number): boolean {
    if (ticket <= this.applied) return false;
    this.applied = ticket;
    return true;
  }
}

export interface SessionState {
  model: ModelSummary | null;
  /** selected varied parameters: label -> slider value */
  vary: Record<string, number>;
  scheme: string;
  schemes: string[];
  event: string;
  grid: number;
  covary: CovaryResponse | null;
  curves: SensitivityResponse | null;
  classify: ClassifyResponse | null;
  project: ProjectResponse | null;
  projectBlocked: string | null;
  error: string | null;
}

type Listener = (state: SessionState) => void;

export class Store {
  readonly state: SessionState = {
    model: null,
    vary: {},
    scheme: "proportional",
    schemes: ["proportional", "uniform", "order_preserving"],
    event: "",
    grid: 99,
    covary: null,
    curves: null,
    classify: null,
    project: null,
    projectBlocked: null,
    error: null,
  };

  private listeners: Listener[] = [];
  private gates = {
    covary: new LatestGate(),
    curves: new LatestGate(),
    classify: new LatestGate(),
    project: new LatestGate(),
  };

  constructor(readonly client: Client) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  private fail(err: unknown): void {
    this.state.error =
      err instanceof ApiError ? `${err.errorCase}: ${err.detail}` : String(err);
    this.emit();
  }

  async loadModel(): Promise<void> {
    try {
      this.state.model = await this.client.getModel();
      this.state.error = null;
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        this.state.model = null;
      } else {
        return this.fail(err);
      }
    }
    this.emit();
  }

  async uploadModel(payload: unknown): Promise<void> {
    try {
      this.state.model = await this.client.uploadModel(payload);
      this.state.vary = {};
      this.state.covary = null;
      this.state.curves = null;
      this.state.classify = null;
      this.state.project = null;
      this.state.error = null;
      this.emit();
    } catch (err) {
      this.fail(err);
    }
  }

  setSlider(label: string, value: number): void {
    this.state.vary = { ...this.state.vary, [label]: value };
    this.emit();
  }

  clearSlider(label: string): void {
    const { [label]: _, ...rest } = this.state.vary;
    this.state.vary = rest;
    this.emit();
  }

  /** Fetch the covary preview for the current sliders; stale-safe. */
  async requestCovary(): Promise<void> {
    if (Object.keys(this.state.vary).length === 0) return;
    const ticket = this.gates.covary.issue();
    try {
      const response = await this.client.covary({
        vary: this.state.vary,
        scheme: this.state.scheme,
      });
      if (this.gates.covary.tryApply(ticket)) {
        this.state.covary = response;
        this.state.error = null;
        this.emit();
      }
    } catch (err) {
      if (this.gates.covary.tryApply(ticket)) this.fail(err);
    }
  }

  async requestCurves(): Promise<void> {
    const varied = Object.keys(this.state.vary);
    if (varied.length === 0 || !this.state.event) return;
    const ticket = this.gates.curves.issue();
    try {
      const response = await this.client.sensitivity({
        vary: varied.slice(0, 2),
        event: this.state.event,
        schemes: this.state.schemes,
        grid: this.state.grid,
      });
      if (this.gates.curves.tryApply(ticket)) {
        this.state.curves = response;
        this.state.error = null;
        this.emit();
      }
    } catch (err) {
      if (this.gates.curves.tryApply(ticket)) this.fail(err);
    }
  }

  async requestAnalysis(grid: number): Promise<void> {
    if (Object.keys(this.state.vary).length === 0) return;
    const body = { vary: this.state.vary };
    const classifyTicket = this.gates.classify.issue();
    const projectTicket = this.gates.project.issue();
    const classifyCall = this.client
      .classify({ ...body, samples: 50 })
      .then((response) => {
        if (this.gates.classify.tryApply(classifyTicket)) {
          this.state.classify = response;
          this.emit();
        }
      })
      .catch((err) => {
        if (this.gates.classify.tryApply(classifyTicket)) this.fail(err);
      });
    const projectCall = this.client
      .project({ ...body, grid })
      .then((response) => {
        if (this.gates.project.tryApply(projectTicket)) {
          this.state.project = response;
          this.state.projectBlocked = null;
          this.emit();
        }
      })
      .catch((err) => {
        if (!this.gates.project.tryApply(projectTicket)) return;
        if (err instanceof ApiError && err.status === 413) {
          this.state.project = null;
          this.state.projectBlocked = "search space too large";
          this.emit();
        } else {
          this.fail(err);
        }
      });
    await Promise.all([classifyCall, projectCall]);
  }
}
