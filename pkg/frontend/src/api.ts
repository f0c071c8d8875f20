/**
 * Typed client for the explorer API.
 *
 * Every point request carries a sequence number; a response is applied only
 * if no newer request has been issued since, so out-of-order network
 * completions can never overwrite fresher state.
 */

export interface GradeInfo {
  name: string;
  r0: number;
  provenance_a?: number;
  below?: boolean;
}

export interface R0Response {
  r0: number;
  r_a: number;
  r_i: number;
  prefactor: number;
  grade_comparison: GradeInfo[];
}

export interface SweepResponse {
  a_values: number[];
  b_values: number[];
  a_percent: number[];
  detection_days: number[];
  w_beta: number[];
  w_gamma: number[];
  baseline_r0: number;
  r0: number[][];
}

export interface TableRow {
  index: number;
  label: string;
  w_beta: number[];
  w_gamma: number[];
  min_r0: number;
  cells: boolean[];
  epidemiological_coverage: number;
  loci: Record<string, [number, number, number][]>;
}

export interface TableResponse {
  grades: GradeInfo[];
  rows: TableRow[];
  social_coverage: number[];
  total_coverage: number;
  borderline_cells: [number, number][];
  baseline_r0: number;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private seq = 0;
  private applied = 0;

  constructor(private base = "", private fetcher: FetchLike = fetch.bind(globalThis)) {}

  nextSequence(): number {
    return ++this.seq;
  }

  /** True (and records it) iff `seq` is newer than anything applied so far. */
  shouldApply(seq: number): boolean {
    if (seq < this.applied) return false;
    this.applied = seq;
    return true;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const resp = await this.fetcher(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) throw new Error(`${path} -> ${resp.status}`);
    return resp.json() as Promise<T>;
  }

  private async get<T>(path: string): Promise<T> {
    const resp = await this.fetcher(this.base + path);
    if (!resp.ok) throw new Error(`${path} -> ${resp.status}`);
    return resp.json() as Promise<T>;
  }

  r0(wBeta: number[], wGamma: number[], a: number, b: number): Promise<R0Response> {
    return this.post<R0Response>("/api/r0", { w_beta: wBeta, w_gamma: wGamma, a, b });
  }

  sweep(wBeta: number[], wGamma: number[], res: number): Promise<SweepResponse> {
    return this.post<SweepResponse>("/api/sweep", { w_beta: wBeta, w_gamma: wGamma, res });
  }

  grades(): Promise<GradeInfo[]> {
    return this.get<GradeInfo[]>("/api/grades");
  }

  table(): Promise<TableResponse> {
    return this.get<TableResponse>("/api/table");
  }
}
