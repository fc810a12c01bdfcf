/**
 * Questionnaire form model: four 0-100 sliders plus free-form language
 * background fields. Values are clamped to integers in range before they
 * ever reach the wire.
 */

import type { QuestionnaireAnswers } from "./protocol.js";

export const SLIDER_ITEMS = [
  { key: "enjoy", prompt: "How much did you enjoy the task?" },
  { key: "success", prompt: "How successful do you think you were at completing the task?" },
  { key: "difficulty_communication", prompt: "How difficult was it to communicate with your partner?" },
  { key: "difficulty_instructions", prompt: "How difficult was it to understand your partner's instructions?" },
] as const;

export type SliderKey = (typeof SLIDER_ITEMS)[number]["key"];

export function clampSlider(value: number): number {
  if (Number.isNaN(value)) {
    return 0;
  }
  return Math.min(100, Math.max(0, Math.round(value)));
}

export class QuestionnaireForm {
  private sliders: Record<SliderKey, number> = {
    enjoy: 50,
    success: 50,
    difficulty_communication: 50,
    difficulty_instructions: 50,
  };
  private background: Record<string, string> = {
    native_languages: "",
    other_languages: "",
  };

  setSlider(key: SliderKey, value: number): void {
    this.sliders[key] = clampSlider(value);
  }

  getSlider(key: SliderKey): number {
    return this.sliders[key];
  }

  setBackground(field: string, value: string): void {
    this.background[field] = value;
  }

  toAnswers(): QuestionnaireAnswers {
    return {
      enjoy: this.sliders.enjoy,
      success: this.sliders.success,
      difficulty_communication: this.sliders.difficulty_communication,
      difficulty_instructions: this.sliders.difficulty_instructions,
      background: { ...this.background },
    };
  }
}
