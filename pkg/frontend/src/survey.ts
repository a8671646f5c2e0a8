/**
 * Survey screen logic: a 90-question wizard that enforces one choice per
 * question and refuses to submit until everything is answered. Option
 * order comes from the server spec verbatim; the client never reshuffles.
 */

import type { SurveyStats } from "./api.js";

export interface SurveyProgress {
  total: number;
  answers: Map<number, string>;
}

export function newSurveyProgress(total: number): SurveyProgress {
  return { total, answers: new Map() };
}

export function recordChoice(p: SurveyProgress, question: number, label: string): SurveyProgress {
  const answers = new Map(p.answers);
  answers.set(question, label);
  return { ...p, answers };
}

/** Lowest-numbered unanswered question, or null when all are done. */
export function firstUnanswered(p: SurveyProgress): number | null {
  for (let q = 1; q <= p.total; q++) {
    if (!p.answers.has(q)) return q;
  }
  return null;
}

export function allAnswered(p: SurveyProgress): boolean {
  return firstUnanswered(p) === null;
}

export function answeredCount(p: SurveyProgress): number {
  return p.answers.size;
}

export function toSubmission(p: SurveyProgress): Record<number, string> {
  const out: Record<number, string> = {};
  for (const [q, label] of p.answers) out[q] = label;
  return out;
}

export interface StatsGroup {
  name: string;
  entries: Array<[string, number]>;
}

/** Flatten the stats payload into displayable percentage groups. */
export function statsGroups(stats: SurveyStats): StatsGroup[] {
  const groups: StatsGroup[] = [
    { name: "All responses", entries: Object.entries(stats.overall) },
    { name: "Positive responses", entries: Object.entries(stats.positive_overall) },
  ];
  for (const [cvdType, shares] of Object.entries(stats.by_type)) {
    groups.push({ name: `${cvdType} questions`, entries: Object.entries(shares) });
  }
  for (const [cvdType, byDegree] of Object.entries(stats.by_type_degree)) {
    for (const [degree, shares] of Object.entries(byDegree)) {
      groups.push({
        name: `${cvdType} at ${Math.round(Number(degree) * 100)}%`,
        entries: Object.entries(shares),
      });
    }
  }
  return groups;
}

export function groupSum(group: StatsGroup): number {
  return group.entries.reduce((acc, [, pct]) => acc + pct, 0);
}
