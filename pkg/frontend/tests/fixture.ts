/** Shared access to the recorded session (see tools/record_views.py in the
 * backend package: real server responses, not hand-written mocks). */

import recorded from "./fixtures/session_views.json";

import type {
  ColourToken,
  ScenarioListing,
  StateView,
} from "../src/types.js";

export type Step =
  | { action: "create"; view: StateView }
  | { action: "announce"; colour: ColourToken; view: StateView }
  | { action: "advance"; view: StateView };

export interface Recording {
  scenario: string;
  seed: number;
  scenarios_response: ScenarioListing;
  steps: Step[];
}

export function loadRecording(): Recording {
  return recorded as unknown as Recording;
}

export function deepFreeze<T>(value: T): T {
  if (value !== null && typeof value === "object") {
    for (const key of Object.keys(value as object)) {
      deepFreeze((value as Record<string, unknown>)[key]);
    }
    Object.freeze(value);
  }
  return value;
}
