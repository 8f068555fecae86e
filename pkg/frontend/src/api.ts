/** Thin typed client for the routing service.
 *
 * At most one request per action type is in flight; starting a new one
 * while the previous is pending rejects immediately so the UI never
 * interleaves conflicting mutations or renders out-of-order reads.
 */

import type { RouteFeature, RouteRequestBody, StateView, SweepRow } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(resp: Response): Promise<never> {
  let code = "internal";
  let message = `${resp.status} ${resp.statusText}`;
  try {
    const body = await resp.json();
    if (body && typeof body.code === "string") {
      code = body.code;
      message = body.message ?? message;
    }
  } catch {
    // non-JSON error body: keep the status text
  }
  throw new ApiError(resp.status, code, message);
}

export class Client {
  private inFlight = new Set<string>();

  constructor(private readonly base: string = "") {}

  private async guarded<T>(action: string, run: () => Promise<T>): Promise<T> {
    if (this.inFlight.has(action)) {
      throw new ApiError(0, "busy", `a ${action} request is already in flight`);
    }
    this.inFlight.add(action);
    try {
      return await run();
    } finally {
      this.inFlight.delete(action);
    }
  }

  getState(scenarioId: string): Promise<StateView> {
    return this.guarded("state", async () => {
      const resp = await fetch(`${this.base}/scenarios/${scenarioId}/state`);
      if (!resp.ok) await parseError(resp);
      return (await resp.json()) as StateView;
    });
  }

  postRoute(scenarioId: string, body: RouteRequestBody): Promise<RouteFeature> {
    return this.guarded("route", async () => {
      const resp = await fetch(`${this.base}/scenarios/${scenarioId}/route`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      });
      if (!resp.ok) await parseError(resp);
      return (await resp.json()) as RouteFeature;
    });
  }

  postStep(scenarioId: string, nSlots = 1): Promise<{ scenario_id: string; slot: number }> {
    return this.guarded("step", async () => {
      const resp = await fetch(`${this.base}/scenarios/${scenarioId}/step`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ n_slots: nSlots }),
      });
      if (!resp.ok) await parseError(resp);
      return await resp.json();
    });
  }

  getSweep(
    scenarioId: string,
    params: { alphas: number[]; rhos: number[]; origin: string; destination: string; ego: string },
  ): Promise<SweepRow[]> {
    return this.guarded("sweep", async () => {
      const query = new URLSearchParams({
        alphas: params.alphas.join(","),
        rhos: params.rhos.join(","),
        origin: params.origin,
        destination: params.destination,
        ego: params.ego,
      });
      const resp = await fetch(`${this.base}/scenarios/${scenarioId}/sweep?${query}`);
      if (!resp.ok) await parseError(resp);
      return (await resp.json()).rows as SweepRow[];
    });
  }
}
