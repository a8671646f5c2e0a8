/**
 * State for the plate-test screen: one plate visible at a time, options
 * in the order the server declares them, fixed plate sequence. The
 * server stores the answers; this mirror exists only to drive the UI.
 */

import type { PlateInfo } from "./api.js";

export interface TestFlowState {
  sessionId: string;
  plates: PlateInfo[];
  answered: Set<string>;
}

export function newTestFlow(sessionId: string, plates: PlateInfo[]): TestFlowState {
  return { sessionId, plates, answered: new Set() };
}

/** Rebuild local progress from a server session (resume by session id). */
export function resumeTestFlow(
  sessionId: string,
  plates: PlateInfo[],
  answeredIds: string[],
): TestFlowState {
  const known = new Set(plates.map((p) => p.id));
  const answered = new Set(answeredIds.filter((id) => known.has(id)));
  return { sessionId, plates, answered };
}

/** First unanswered plate in declared order, or null when done. */
export function currentPlate(state: TestFlowState): PlateInfo | null {
  for (const plate of state.plates) {
    if (!state.answered.has(plate.id)) return plate;
  }
  return null;
}

export function markAnswered(state: TestFlowState, plateId: string): TestFlowState {
  const answered = new Set(state.answered);
  answered.add(plateId);
  return { ...state, answered };
}

export function progress(state: TestFlowState): { answered: number; total: number } {
  return { answered: state.answered.size, total: state.plates.length };
}

export function isComplete(state: TestFlowState): boolean {
  return state.answered.size === state.plates.length;
}
