/** DOM wiring: tabs plus the three screens (plate test, preview, survey). */

import { ApiClient, ApiError, type PlateInfo, type Profile, type SurveyQuestion } from "./api.js";
import { DEFAULT_PREVIEW, PreviewRenderer, withDegree, withParams, type PreviewState } from "./preview.js";
import {
  allAnswered,
  answeredCount,
  firstUnanswered,
  groupSum,
  newSurveyProgress,
  recordChoice,
  statsGroups,
  toSubmission,
  type SurveyProgress,
} from "./survey.js";
import {
  currentPlate,
  isComplete,
  markAnswered,
  newTestFlow,
  progress,
  resumeTestFlow,
  type TestFlowState,
} from "./test-flow.js";
import { debounce, formatDegree, randomId } from "./util.js";

const client = new ApiClient();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function show(message: string, isError = false): void {
  const bar = el<HTMLDivElement>("statusbar");
  bar.textContent = message;
  bar.className = isError ? "status error" : "status";
}

function setBlob(img: HTMLImageElement, blob: Blob): void {
  const old = img.dataset.blobUrl;
  const url = URL.createObjectURL(blob);
  img.src = url;
  img.dataset.blobUrl = url;
  if (old) URL.revokeObjectURL(old);
}

// ---------------------------------------------------------------- tabs

const TABS = ["test", "preview", "survey", "stats"] as const;

function activateTab(name: (typeof TABS)[number]): void {
  for (const tab of TABS) {
    el(`tab-${tab}`).classList.toggle("active", tab === name);
    el(`screen-${tab}`).classList.toggle("hidden", tab !== name);
  }
  if (name === "stats") void loadStats();
}

for (const tab of TABS) {
  el(`tab-${tab}`).addEventListener("click", () => activateTab(tab));
}

// ---------------------------------------------------------- plate test

let testState: TestFlowState | null = null;

function renderPlate(): void {
  const container = el<HTMLDivElement>("test-plate");
  const result = el<HTMLDivElement>("test-result");
  if (!testState) return;

  const { answered, total } = progress(testState);
  el("test-progress").textContent = `${answered} / ${total} plates answered`;

  const plate = currentPlate(testState);
  if (plate === null) {
    container.classList.add("hidden");
    void fetchResult();
    return;
  }
  result.classList.add("hidden");
  container.classList.remove("hidden");
  el<HTMLImageElement>("plate-image").src = plate.image_url;
  el("plate-kind").textContent = plate.kind;

  const optionsBox = el<HTMLDivElement>("plate-options");
  optionsBox.replaceChildren();
  plate.options.forEach((label, index) => {
    const button = document.createElement("button");
    button.textContent = label;
    button.addEventListener("click", () => void answer(plate, index));
    optionsBox.appendChild(button);
  });
}

async function answer(plate: PlateInfo, optionIndex: number): Promise<void> {
  if (!testState) return;
  try {
    await client.postAnswer(testState.sessionId, plate.id, optionIndex);
    testState = markAnswered(testState, plate.id);
    renderPlate();
  } catch (err) {
    show(`Could not record the answer (${String(err)}). The test stays on this plate; try again.`, true);
  }
}

async function fetchResult(): Promise<void> {
  if (!testState || !isComplete(testState)) return;
  const profile = await client.getResult(testState.sessionId);
  const result = el<HTMLDivElement>("test-result");
  result.classList.remove("hidden");
  el("result-beta").textContent = formatDegree(profile.beta);
  el("result-alpha-p").textContent = formatDegree(profile.alpha_p);
  el("result-alpha-d").textContent = formatDegree(profile.alpha_d);
  el("result-alpha-n").textContent = formatDegree(profile.alpha_n);
  el<HTMLButtonElement>("use-profile").onclick = () => {
    adoptProfile(profile);
    activateTab("preview");
  };
}

async function startOrResumeTest(): Promise<void> {
  const field = el<HTMLInputElement>("session-id");
  if (!field.value) field.value = randomId("session");
  const sessionId = field.value;
  localStorage.setItem("cvdkit-session", sessionId);

  const plates = await client.getPlates();
  try {
    const existing = await client.getSession(sessionId);
    testState = resumeTestFlow(sessionId, plates, existing.answered);
    show(`Resumed session ${sessionId}.`);
  } catch (err) {
    if (err instanceof ApiError && err.code === "session_not_found") {
      testState = newTestFlow(sessionId, plates);
      show(`Started session ${sessionId}.`);
    } else {
      throw err;
    }
  }
  renderPlate();
}

el<HTMLButtonElement>("start-test").addEventListener("click", () => {
  void startOrResumeTest().catch((err) => show(String(err), true));
});
el<HTMLInputElement>("session-id").value = localStorage.getItem("cvdkit-session") ?? "";

// ------------------------------------------------------------- preview

let previewState: PreviewState = DEFAULT_PREVIEW;

const renderer = new PreviewRenderer(
  client,
  (pane, blob) => setBlob(el<HTMLImageElement>(`pane-${pane}`), blob),
  (message) => show(`Render failed: ${message}`, true),
);

const queueRender = debounce(() => void renderer.render(previewState), 150);

function adoptProfile(profile: Profile): void {
  previewState = { ...previewState, profile: { ...profile } };
  for (const field of ["beta", "alpha_p", "alpha_d", "alpha_n"] as const) {
    el<HTMLInputElement>(`slider-${field}`).value = String(profile[field]);
    el(`value-${field}`).textContent = formatDegree(profile[field]);
  }
  queueRender();
}

for (const field of ["beta", "alpha_p", "alpha_d", "alpha_n"] as const) {
  const slider = el<HTMLInputElement>(`slider-${field}`);
  slider.addEventListener("input", () => {
    previewState = withDegree(previewState, field, Number(slider.value));
    el(`value-${field}`).textContent = formatDegree(previewState.profile[field]);
    queueRender();
  });
}

el<HTMLSelectElement>("opt-method").addEventListener("change", (e) => {
  previewState = withParams(previewState, {
    method: (e.target as HTMLSelectElement).value as "a" | "b",
  });
  queueRender();
});
el<HTMLSelectElement>("opt-domain").addEventListener("change", (e) => {
  previewState = withParams(previewState, {
    domain: (e.target as HTMLSelectElement).value as "rgb" | "lms",
  });
  queueRender();
});
el<HTMLInputElement>("opt-equalize").addEventListener("change", (e) => {
  previewState = withParams(previewState, {
    equalize: (e.target as HTMLInputElement).checked,
  });
  queueRender();
});

el<HTMLInputElement>("upload").addEventListener("change", (e) => {
  const file = (e.target as HTMLInputElement).files?.[0];
  if (!file) return;
  renderer.setSource(file);
  setBlob(el<HTMLImageElement>("pane-original"), file);
  queueRender();
});

// -------------------------------------------------------------- survey

let surveyProgress: SurveyProgress | null = null;
let surveyQuestion: SurveyQuestion | null = null;

async function showQuestion(index: number): Promise<void> {
  surveyQuestion = await client.getSurveyQuestion(index);
  if (!surveyProgress) surveyProgress = newSurveyProgress(surveyQuestion.total_questions);

  el("survey-progress").textContent =
    `question ${index} of ${surveyQuestion.total_questions} ` +
    `(${answeredCount(surveyProgress)} answered)`;
  el<HTMLImageElement>("survey-presented").src = surveyQuestion.presented_url;

  const box = el<HTMLDivElement>("survey-options");
  box.replaceChildren();
  for (const option of surveyQuestion.options) {
    const figure = document.createElement("figure");
    const img = document.createElement("img");
    img.src = option.image_url;
    img.alt = `option ${option.position}`;
    const caption = document.createElement("figcaption");
    caption.textContent = option.position;
    figure.append(img, caption);
    if (surveyProgress.answers.get(index) === option.label) {
      figure.classList.add("chosen");
    }
    figure.addEventListener("click", () => {
      if (!surveyProgress || !surveyQuestion) return;
      surveyProgress = recordChoice(surveyProgress, index, option.label);
      const next = firstUnanswered(surveyProgress);
      updateSubmitState();
      if (next !== null) {
        void showQuestion(next).catch((err) => show(String(err), true));
      } else {
        void showQuestion(index).catch((err) => show(String(err), true));
      }
    });
    box.appendChild(figure);
  }
  updateSubmitState();
}

function updateSubmitState(): void {
  const button = el<HTMLButtonElement>("survey-submit");
  if (!surveyProgress) {
    button.disabled = true;
    return;
  }
  button.disabled = !allAnswered(surveyProgress);
  const missing = firstUnanswered(surveyProgress);
  button.title =
    missing === null ? "Submit all 90 answers" : `Question ${missing} still unanswered`;
}

el<HTMLButtonElement>("survey-start").addEventListener("click", () => {
  surveyProgress = null;
  void showQuestion(1).catch((err) => show(String(err), true));
});

el<HTMLButtonElement>("survey-submit").addEventListener("click", () => {
  if (!surveyProgress || !allAnswered(surveyProgress)) return;
  client
    .postSurveyResponse(randomId("respondent"), toSubmission(surveyProgress))
    .then((ack) => {
      show(`Response recorded; ${ack.respondents} respondent(s) so far.`);
      activateTab("stats");
    })
    .catch((err) => show(String(err), true));
});

// --------------------------------------------------------------- stats

async function loadStats(): Promise<void> {
  const box = el<HTMLDivElement>("stats-groups");
  try {
    const stats = await client.getSurveyStats();
    el("stats-summary").textContent =
      `${stats.respondents} respondent(s), ${stats.total_answers} answers; ` +
      `control picks ${stats.no_improvement_rate.toFixed(1)}% ` +
      `(expected ${stats.expected_no_improvement_rate.toFixed(1)}%)`;
    box.replaceChildren();
    for (const group of statsGroups(stats)) {
      const section = document.createElement("section");
      const heading = document.createElement("h3");
      heading.textContent = `${group.name} (sum ${groupSum(group).toFixed(1)}%)`;
      section.appendChild(heading);
      const list = document.createElement("ul");
      for (const [label, pct] of group.entries) {
        const item = document.createElement("li");
        item.textContent = `${label}: ${pct.toFixed(1)}%`;
        list.appendChild(item);
      }
      section.appendChild(list);
      box.appendChild(section);
    }
  } catch (err) {
    if (err instanceof ApiError && err.code === "survey_not_found") {
      el("stats-summary").textContent = "No survey bundle generated yet.";
      box.replaceChildren();
    } else {
      show(String(err), true);
    }
  }
}

activateTab("test");
