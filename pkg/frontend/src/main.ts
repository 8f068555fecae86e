import { App, AppElements } from "./app.js";

function grab<T extends Element>(selector: string): T {
  const node = document.querySelector<T>(selector);
  if (!node) throw new Error(`missing element ${selector}`);
  return node;
}

export function mount(): App {
  const els: AppElements = {
    svg: grab<SVGSVGElement>("#map"),
    metrics: grab<HTMLElement>("#metrics"),
    banner: grab<HTMLElement>("#banner"),
    slotCounter: grab<HTMLElement>("#slot"),
    scenarioInput: grab<HTMLInputElement>("#scenario-id"),
    loadButton: grab<HTMLButtonElement>("#load"),
    alphaSlider: grab<HTMLInputElement>("#alpha"),
    alphaReadout: grab<HTMLElement>("#alpha-readout"),
    egoSelect: grab<HTMLSelectElement>("#ego"),
    routeButton: grab<HTMLButtonElement>("#route"),
    stepButton: grab<HTMLButtonElement>("#step"),
    compareButton: grab<HTMLButtonElement>("#compare"),
    pickModeSelect: grab<HTMLSelectElement>("#pick-mode"),
  };
  return new App(els);
}

mount();
