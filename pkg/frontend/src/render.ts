/** SVG scene construction: roads, footprints, devices, routes, pedestrian.
 *
 * Pure DOM building from fetched JSON; no risk number is computed here.
 */

import { makeViewport, Viewport } from "./geometry.js";
import {
  DENSITY_COLORS,
  PEDESTRIAN_COLOR,
  ROAD_COLOR,
  STALE_ROUTE_OPACITY,
  routeColor,
  sforMarker,
} from "./theme.js";
import type { LonLat, StateView } from "./types.js";
import type { ViewState } from "./state.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function el(name: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, name);
  for (const [k, v] of Object.entries(attrs)) {
    node.setAttribute(k, v);
  }
  return node;
}

function pathFrom(coords: LonLat[], vp: Viewport): string {
  return coords
    .map((c, i) => {
      const [x, y] = vp.toScreen(vp.toMeters(c));
      return `${i === 0 ? "M" : "L"}${x.toFixed(2)},${y.toFixed(2)}`;
    })
    .join(" ");
}

function deviceMarker(shape: string, x: number, y: number, size: number): SVGElement {
  switch (shape) {
    case "square":
      return el("rect", {
        x: String(x - size), y: String(y - size),
        width: String(2 * size), height: String(2 * size),
        class: "device",
      });
    case "triangle":
      return el("polygon", {
        points: `${x},${y - size} ${x + size},${y + size} ${x - size},${y + size}`,
        class: "device",
      });
    case "diamond":
      return el("polygon", {
        points: `${x},${y - size} ${x + size},${y} ${x},${y + size} ${x - size},${y}`,
        class: "device",
      });
    case "cross":
      return el("path", {
        d: `M${x - size},${y - size} L${x + size},${y + size} M${x - size},${y + size} L${x + size},${y - size}`,
        class: "device device-cross",
      });
    default:
      return el("circle", { cx: String(x), cy: String(y), r: String(size), class: "device" });
  }
}

/** Build the full scene into `svg`; returns the viewport for click picking. */
export function renderScene(svg: SVGSVGElement, state: StateView, view: ViewState): Viewport {
  const vp = makeViewport(state.road_graph.features);
  svg.setAttribute("viewBox", `0 0 ${vp.width} ${vp.height}`);
  svg.replaceChildren();

  const footprints = el("g", { id: "footprints" });
  if (view.showFootprints) {
    for (const fp of state.footprints.features) {
      const ring = fp.geometry.coordinates[0];
      footprints.appendChild(
        el("path", {
          d: pathFrom(ring, vp) + " Z",
          fill: DENSITY_COLORS[fp.properties.density_class] ?? DENSITY_COLORS[1],
          "fill-opacity": "0.45",
          stroke: "none",
          class: "footprint",
          "data-community": String(fp.properties.community_id),
          "data-density-class": String(fp.properties.density_class),
        }),
      );
    }
  }
  svg.appendChild(footprints);

  const roads = el("g", { id: "roads" });
  for (const road of state.road_graph.features) {
    roads.appendChild(
      el("path", {
        d: pathFrom(road.geometry.coordinates, vp),
        stroke: ROAD_COLOR,
        "stroke-width": "1.5",
        fill: "none",
        class: "road",
        "data-edge": road.properties.id,
      }),
    );
  }
  svg.appendChild(roads);

  const devices = el("g", { id: "devices" });
  if (view.showDevices) {
    for (const dev of state.devices) {
      const [x, y] = vp.toScreen(vp.toMeters([dev.lon, dev.lat]));
      const marker = deviceMarker(sforMarker(dev.sfor_community), x, y, 3);
      marker.setAttribute("data-device", dev.id);
      marker.setAttribute("data-sfor", String(dev.sfor_community));
      if (dev.id === view.egoDevice) {
        marker.setAttribute("class", "device device-ego");
      }
      devices.appendChild(marker);
    }
  }
  svg.appendChild(devices);

  const routes = el("g", { id: "routes" });
  if (view.showRoutes) {
    for (const overlay of view.overlays) {
      routes.appendChild(
        el("path", {
          d: pathFrom(overlay.route.geometry.coordinates, vp),
          stroke: routeColor(overlay.alpha),
          "stroke-width": "4",
          "stroke-opacity": overlay.stale ? STALE_ROUTE_OPACITY : "0.9",
          fill: "none",
          class: overlay.stale ? "route route-stale" : "route",
          "data-alpha": String(overlay.alpha),
          "data-snapshot": overlay.snapshotId,
        }),
      );
    }
  }
  svg.appendChild(routes);

  const picks = el("g", { id: "picks" });
  for (const [pick, cls] of [
    [view.origin, "pick-origin"],
    [view.destination, "pick-destination"],
  ] as const) {
    if (!pick) continue;
    const [x, y] = vp.toScreen(vp.toMeters(pick));
    picks.appendChild(
      el("circle", { cx: String(x), cy: String(y), r: "6", class: `pick ${cls}` }),
    );
  }
  if (view.pedestrian) {
    const [x, y] = vp.toScreen(vp.toMeters(view.pedestrian));
    picks.appendChild(
      el("circle", {
        cx: String(x), cy: String(y), r: "5",
        fill: PEDESTRIAN_COLOR, class: "pedestrian",
      }),
    );
  }
  svg.appendChild(picks);
  return vp;
}

/** Metrics panel: every number is copied verbatim from a response field. */
export function renderMetrics(panel: HTMLElement, view: ViewState): void {
  const rows = view.overlays
    .map((o) => {
      const p = o.route.properties;
      return `<tr class="${o.stale ? "stale" : ""}">
        <td><span class="swatch" style="background:${routeColor(o.alpha)}"></span></td>
        <td data-field="alpha">${p.alpha}</td>
        <td data-field="travel_distance_m">${p.travel_distance_m}</td>
        <td data-field="safety_score">${p.safety_score}</td>
        <td data-field="total_cost">${p.total_cost}</td>
        <td data-field="snapshot_id">${p.snapshot_id}${o.stale ? " (stale)" : ""}</td>
      </tr>`;
    })
    .join("");
  panel.innerHTML = `
    <table>
      <thead><tr><th></th><th>alpha</th><th>distance (m)</th><th>safety</th><th>cost</th><th>snapshot</th></tr></thead>
      <tbody>${rows}</tbody>
    </table>`;
}

export function renderBanner(banner: HTMLElement, message: string | null): void {
  if (message === null) {
    banner.textContent = "";
    banner.classList.remove("visible");
  } else {
    banner.textContent = message;
    banner.classList.add("visible");
  }
}
