// Quiz modal: renders the active item for its type, submits the learner's
// answer, then shows the graded result from the answer ack.

import type { ActiveQuizState } from "./state";

export type QuizHandlers = {
  onAnswer?: (answer: string) => void;
  onClose?: () => void;
};

function answerControls(quiz: ActiveQuizState, handlers: QuizHandlers): HTMLElement {
  const holder = document.createElement("div");
  holder.className = "lk-quiz__answers";
  const submit = (answer: string) => handlers.onAnswer?.(answer);

  if (quiz.item.type === "multiple-choice") {
    for (const option of quiz.item.options) {
      const button = document.createElement("button");
      button.type = "button";
      button.className = "lk-quiz__option";
      button.textContent = option;
      button.addEventListener("click", () => submit(option));
      holder.appendChild(button);
    }
  } else if (quiz.item.type === "true-false") {
    for (const option of ["True", "False"]) {
      const button = document.createElement("button");
      button.type = "button";
      button.className = "lk-quiz__option";
      button.textContent = option;
      button.addEventListener("click", () => submit(option));
      holder.appendChild(button);
    }
  } else {
    const input = document.createElement("input");
    input.type = "text";
    input.className = "lk-quiz__blank";
    input.placeholder = "Your answer";
    const button = document.createElement("button");
    button.type = "button";
    button.className = "lk-quiz__submit";
    button.textContent = "Submit";
    button.addEventListener("click", () => submit(input.value));
    holder.append(input, button);
  }
  return holder;
}

function resultPanel(quiz: ActiveQuizState, handlers: QuizHandlers): HTMLElement {
  const answered = quiz.answered!;
  const panel = document.createElement("div");
  panel.className = "lk-quiz__result";

  const verdict = document.createElement("div");
  verdict.className = answered.correct
    ? "lk-quiz__verdict lk-quiz__verdict--correct"
    : "lk-quiz__verdict lk-quiz__verdict--incorrect";
  verdict.textContent = answered.correct ? "Correct" : "Incorrect";
  panel.appendChild(verdict);

  const explanation = document.createElement("p");
  explanation.className = "lk-quiz__explanation";
  explanation.textContent = answered.explanation;
  panel.appendChild(explanation);

  const resume = document.createElement("button");
  resume.type = "button";
  resume.className = "lk-quiz__continue";
  resume.textContent = "Continue";
  resume.addEventListener("click", () => handlers.onClose?.());
  panel.appendChild(resume);
  return panel;
}

export function renderQuizModal(quiz: ActiveQuizState, handlers: QuizHandlers = {}): HTMLElement {
  const backdrop = document.createElement("div");
  backdrop.className = "lk-quiz-backdrop";

  const modal = document.createElement("div");
  modal.className = "lk-quiz";
  modal.dataset.sectionId = quiz.sectionId;
  modal.dataset.level = String(quiz.level);
  modal.dataset.type = quiz.item.type;

  const header = document.createElement("div");
  header.className = "lk-quiz__header";
  header.textContent = quiz.levelFallback
    ? `Quiz (level ${quiz.level}, nearest available)`
    : `Quiz (level ${quiz.level})`;
  modal.appendChild(header);

  const question = document.createElement("p");
  question.className = "lk-quiz__question";
  question.textContent = quiz.item.question;
  modal.appendChild(question);

  modal.appendChild(quiz.answered ? resultPanel(quiz, handlers) : answerControls(quiz, handlers));

  backdrop.appendChild(modal);
  return backdrop;
}
