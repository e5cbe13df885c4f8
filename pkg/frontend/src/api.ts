/**
 * Typed client for the workbench service. The UI computes nothing itself:
 * members, boundaries, deltas, and table rows all come from these calls.
 */

import type {
  ApplicationsResponse,
  BoundaryResponse,
  ImpactResponse,
  IncrementListResponse,
  IncrementResponse,
  InterfaceFilters,
  InterfacesResponse,
  NodePageResponse,
  RetireResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, init);
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = await resp.json();
      if (body && typeof body.error === "string") detail = body.error;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(detail, resp.status);
  }
  return (await resp.json()) as T;
}

function qs(params: Record<string, string | number | null | undefined>): string {
  const pairs = Object.entries(params).filter(
    ([, v]) => v !== null && v !== undefined && v !== "",
  );
  if (pairs.length === 0) return "";
  const search = new URLSearchParams();
  for (const [k, v] of pairs) search.set(k, String(v));
  return `?${search.toString()}`;
}

export class WorkbenchApi {
  constructor(readonly base: string = "") {}

  applications(): Promise<ApplicationsResponse> {
    return request(`${this.base}/api/applications`);
  }

  searchNodes(opts: {
    q?: string | null;
    kind?: string | null;
    application?: string | null;
    page?: number;
  }): Promise<NodePageResponse> {
    return request(`${this.base}/api/nodes${qs(opts)}`);
  }

  increments(): Promise<IncrementListResponse> {
    return request(`${this.base}/api/increments`);
  }

  increment(id: string): Promise<IncrementResponse> {
    return request(`${this.base}/api/increments/${encodeURIComponent(id)}`);
  }

  createIncrement(name: string, seeds: string[]): Promise<IncrementResponse> {
    return request(`${this.base}/api/increments`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ name, seeds }),
    });
  }

  expand(id: string, expectedVersion: number | null): Promise<IncrementResponse> {
    return request(`${this.base}/api/increments/${encodeURIComponent(id)}/expand`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ expected_graph_version: expectedVersion }),
    });
  }

  editMembers(
    id: string,
    add: string[],
    remove: string[],
    expectedVersion: number | null,
  ): Promise<IncrementResponse> {
    return request(`${this.base}/api/increments/${encodeURIComponent(id)}/members`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ add, remove, expected_graph_version: expectedVersion }),
    });
  }

  impact(id: string, node: string): Promise<ImpactResponse> {
    return request(
      `${this.base}/api/increments/${encodeURIComponent(id)}/impact${qs({ node })}`,
    );
  }

  boundary(id: string): Promise<BoundaryResponse> {
    return request(`${this.base}/api/increments/${encodeURIComponent(id)}/boundary`);
  }

  interfaces(id: string, filters: InterfaceFilters): Promise<InterfacesResponse> {
    return request(
      `${this.base}/api/increments/${encodeURIComponent(id)}/interfaces${qs({
        interface_type: filters.interfaceType,
        application: filters.application,
        q: filters.query,
      })}`,
    );
  }

  retire(id: string): Promise<RetireResponse> {
    return request(`${this.base}/api/increments/${encodeURIComponent(id)}/retire`);
  }
}
