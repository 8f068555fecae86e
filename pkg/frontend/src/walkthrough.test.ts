/** End-to-end UI walkthrough against a mocked service: load, three-route
 * comparison, and a three-step re-follow with panel/API equality. */

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { App, AppElements } from "./app.js";
import { Client } from "./api.js";
import { fixtureRoute, fixtureState, lonlat } from "./fixtures.js";
import type { RouteFeature } from "./types.js";

function mountDom(): AppElements {
  document.body.innerHTML = `
    <div id="banner"></div>
    <input id="scenario-id" value="fix0" />
    <button id="load"></button>
    <select id="pick-mode"><option value="origin">o</option><option value="destination">d</option></select>
    <select id="ego"></select>
    <span id="alpha-readout"></span>
    <input id="alpha" type="range" value="0.5" />
    <button id="route"></button>
    <button id="compare"></button>
    <button id="step"></button>
    <span id="slot">0</span>
    <div id="metrics"></div>
    <svg id="map"></svg>`;
  return {
    svg: document.querySelector("#map") as unknown as SVGSVGElement,
    metrics: document.querySelector("#metrics") as HTMLElement,
    banner: document.querySelector("#banner") as HTMLElement,
    slotCounter: document.querySelector("#slot") as HTMLElement,
    scenarioInput: document.querySelector("#scenario-id") as HTMLInputElement,
    loadButton: document.querySelector("#load") as HTMLButtonElement,
    alphaSlider: document.querySelector("#alpha") as HTMLInputElement,
    alphaReadout: document.querySelector("#alpha-readout") as HTMLElement,
    egoSelect: document.querySelector("#ego") as HTMLSelectElement,
    routeButton: document.querySelector("#route") as HTMLButtonElement,
    stepButton: document.querySelector("#step") as HTMLButtonElement,
    compareButton: document.querySelector("#compare") as HTMLButtonElement,
    pickModeSelect: document.querySelector("#pick-mode") as HTMLSelectElement,
  };
}

/** fetch stub driven by URL patterns, tracking the world slot. */
function mockService() {
  const world = { slot: 0 };
  const routeResponses: RouteFeature[] = [];
  const fetchMock = vi.fn(async (url: string, init?: RequestInit) => {
    const json = (body: unknown) =>
      new Response(JSON.stringify(body), {
        status: 200,
        headers: { "content-type": "application/json" },
      });
    if (url.endsWith("/state")) {
      return json(fixtureState(world.slot));
    }
    if (url.endsWith("/step")) {
      world.slot += 1;
      return json({ scenario_id: "fix0", slot: world.slot });
    }
    if (url.endsWith("/route")) {
      const body = JSON.parse(String(init?.body));
      const route = fixtureRoute(body.alpha, world.slot, body.alpha > 0);
      routeResponses.push(route);
      return json(route);
    }
    throw new Error(`unexpected url ${url}`);
  });
  return { fetchMock, world, routeResponses };
}

let els: AppElements;

beforeEach(() => {
  els = mountDom();
});

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("walkthrough", () => {
  it("loads a scenario and populates the ego selector", async () => {
    const { fetchMock } = mockService();
    vi.stubGlobal("fetch", fetchMock);
    const app = new App(els, new Client());
    await app.loadScenario("fix0");
    expect(els.egoSelect.options.length).toBe(6);
    expect(app.view.egoDevice).toBe("dev0");
    expect(els.svg.querySelectorAll(".road").length).toBeGreaterThan(0);
  });

  it("overlays three routes in the red/blue/green convention", async () => {
    const { fetchMock } = mockService();
    vi.stubGlobal("fetch", fetchMock);
    const app = new App(els, new Client());
    await app.loadScenario("fix0");
    app.view.origin = lonlat(0, 0);
    app.view.destination = lonlat(200, 0);
    await app.compareRoutes();
    const strokes = new Map(
      [...els.svg.querySelectorAll(".route")].map((n) => [
        n.getAttribute("data-alpha"),
        n.getAttribute("stroke"),
      ]),
    );
    expect(strokes.get("0")).toBe("#d7191c");
    expect(strokes.get("0.5")).toBe("#2b83ba");
    expect(strokes.get("1")).toBe("#1a9641");
  });

  it("keeps the previous overlay and shows a banner on no-route", async () => {
    const { fetchMock } = mockService();
    vi.stubGlobal("fetch", fetchMock);
    const app = new App(els, new Client());
    await app.loadScenario("fix0");
    app.view.origin = lonlat(0, 0);
    app.view.destination = lonlat(200, 0);
    await app.requestRoute(0.5);
    expect(els.svg.querySelectorAll(".route")).toHaveLength(1);
    vi.stubGlobal(
      "fetch",
      vi.fn(async () =>
        new Response(JSON.stringify({ code: "no-route", message: "disconnected" }), {
          status: 409,
          headers: { "content-type": "application/json" },
        }),
      ),
    );
    await app.requestRoute(0.5);
    expect(els.banner.textContent).toContain("no-route");
    expect(els.svg.querySelectorAll(".route")).toHaveLength(1);
  });

  it("performs a three-step re-follow with metrics equal to the API", async () => {
    const { fetchMock, routeResponses } = mockService();
    vi.stubGlobal("fetch", fetchMock);
    const app = new App(els, new Client());
    await app.loadScenario("fix0");
    app.view.origin = lonlat(0, 0);
    app.view.destination = lonlat(200, 0);
    await app.requestRoute(0.5);
    const startPedestrian = app.view.pedestrian!;

    for (let k = 1; k <= 3; k++) {
      await app.stepAndRefollow();
      expect(els.slotCounter.textContent).toBe(String(k));
    }
    // The marker advanced along the previously recommended route.
    expect(app.view.pedestrian).not.toEqual(startPedestrian);

    // Panel metrics are verbatim copies of the latest route response.
    const lastRoute = routeResponses[routeResponses.length - 1];
    const cell = (field: string) =>
      els.metrics.querySelector(`[data-field="${field}"]`)!.textContent;
    expect(cell("travel_distance_m")).toBe(String(lastRoute.properties.travel_distance_m));
    expect(cell("safety_score")).toBe(String(lastRoute.properties.safety_score));
    expect(cell("total_cost")).toBe(String(lastRoute.properties.total_cost));
    expect(cell("snapshot_id")).toContain(lastRoute.properties.snapshot_id);
    // The re-follow re-requested against the stepped snapshot.
    expect(lastRoute.properties.snapshot_id).toBe("fix0:3");
  });

  it("flags overlays as stale after stepping without re-request", async () => {
    const { fetchMock } = mockService();
    vi.stubGlobal("fetch", fetchMock);
    const app = new App(els, new Client());
    await app.loadScenario("fix0");
    app.view.origin = lonlat(0, 0);
    app.view.destination = lonlat(200, 0);
    await app.requestRoute(0.0);  // alpha 0 overlay
    els.alphaSlider.value = "1";
    els.alphaSlider.dispatchEvent(new Event("input"));
    await app.stepAndRefollow();  // re-requests only alpha 1
    const overlays = [...els.svg.querySelectorAll(".route")];
    const stale = overlays.find((n) => n.getAttribute("data-alpha") === "0");
    const fresh = overlays.find((n) => n.getAttribute("data-alpha") === "1");
    expect(stale?.classList.contains("route-stale")).toBe(true);
    expect(fresh?.classList.contains("route-stale")).toBe(false);
  });
});
