/** Client-side session state and its pure update functions.
 *
 * Server-owned fields are never touched: every game-state change comes
 * back as a fresh StateView and is stored verbatim. The only local
 * additions are the popup queue, the per-day chart buffers, the busy
 * flag guarding the single in-flight mutation, and the degraded banner.
 */

import type { StateView, TriggeredEvent } from "./types.js";

export interface ClientSessionState {
  sessionId: string;
  view: StateView;
  popupQueue: readonly TriggeredEvent[];
  trustHistory: readonly number[];
  evacuationHistory: readonly number[];
  busy: boolean;
  banner: string | null;
}

export function initialState(sessionId: string, view: StateView): ClientSessionState {
  return {
    sessionId,
    view,
    popupQueue: [],
    trustHistory: [view.population.avg_trust],
    evacuationHistory: [view.population.evacuated_fraction],
    busy: false,
    banner: null,
  };
}

/** Fold a freshly fetched view into the state.
 *
 * A day record we have not seen yet (compared by date) queues its events
 * for the popup sequence, in server order, and extends the chart buffers
 * with that day's post-observation figures.
 */
export function applyView(state: ClientSessionState, view: StateView): ClientSessionState {
  const previous = state.view.last_record;
  const record = view.last_record;
  const isNewRecord = record !== null && (previous === null || previous.date !== record.date);
  return {
    ...state,
    view,
    popupQueue: isNewRecord ? [...state.popupQueue, ...record.events] : state.popupQueue,
    trustHistory: isNewRecord
      ? [...state.trustHistory, record.post_observation_stats.avg_trust]
      : state.trustHistory,
    evacuationHistory: isNewRecord
      ? [...state.evacuationHistory, record.post_observation_stats.evacuated_fraction]
      : state.evacuationHistory,
    banner: null,
  };
}

export function dismissPopup(state: ClientSessionState): ClientSessionState {
  return { ...state, popupQueue: state.popupQueue.slice(1) };
}

export function setBusy(state: ClientSessionState, busy: boolean): ClientSessionState {
  return { ...state, busy };
}

export function setBanner(state: ClientSessionState, banner: string): ClientSessionState {
  return { ...state, banner };
}
