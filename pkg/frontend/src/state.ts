/**
 * Scenario state: the inputs bound to the controls, pinned snapshots, and
 * the serializations (request body, exported config, URL hash).
 *
 * The UI does no financial math; this module only moves numbers between
 * representations.  The exported config is byte-identical JSON of the exact
 * request the UI sends, so the CLI reproduces the same valuation.
 */

import type { Mode, ValuationRequestDoc, ValuationResponse } from './types.js';

export interface ScenarioInputs {
  r: number;
  beta: number;
  omega: number;
  T: number;
  income: number;
  subsistence: number;
  growth: number;
  f_min: number;
  f_max: number;
  x: number;
  mode: Mode;
}

export interface PinnedScenario {
  title: string;
  inputs: ScenarioInputs;
  cost_str: string;
  label: string;
}

export const MAX_PINNED = 8;

export interface ScenarioState {
  inputs: ScenarioInputs;
  pinned: PinnedScenario[];
}

export function defaultInputs(): ScenarioInputs {
  return {
    r: 0.03,
    beta: 0.0454,
    omega: 0.4,
    T: 25,
    income: 82,
    subsistence: 32,
    growth: 0.04,
    f_min: 0.1,
    f_max: 0.3,
    x: 100,
    mode: 'compound',
  };
}

export function toValuationRequest(inputs: ScenarioInputs): ValuationRequestDoc {
  return {
    terms: { r: inputs.r, beta: inputs.beta, omega: inputs.omega, T: inputs.T },
    profile: {
      income: inputs.income,
      subsistence: inputs.subsistence,
      growth: inputs.growth,
      f_min: inputs.f_min,
      f_max: inputs.f_max,
    },
    x: inputs.x,
    mode: inputs.mode,
  };
}

/** Exported config document: identical to the request (the CLI schema). */
export function exportConfig(inputs: ScenarioInputs): string {
  return JSON.stringify(toValuationRequest(inputs), null, 2) + '\n';
}

/** Strategy label to display; every token comes from the response. */
export function displayedStrategyLabel(resp: ValuationResponse): string {
  return resp.heuristic ? 'heuristic' : resp.strategy.label;
}

const NUMERIC_KEYS: (keyof ScenarioInputs)[] = [
  'r',
  'beta',
  'omega',
  'T',
  'income',
  'subsistence',
  'growth',
  'f_min',
  'f_max',
  'x',
];

/** Encode the scenario into a URL hash; reload reproduces the view. */
export function encodeScenario(inputs: ScenarioInputs): string {
  const params = new URLSearchParams();
  for (const key of NUMERIC_KEYS) {
    params.set(key, String(inputs[key]));
  }
  params.set('mode', inputs.mode);
  return params.toString();
}

export function decodeScenario(hash: string): ScenarioInputs {
  const inputs = defaultInputs();
  const params = new URLSearchParams(hash.replace(/^#/, ''));
  for (const key of NUMERIC_KEYS) {
    const raw = params.get(key);
    if (raw !== null) {
      const value = Number(raw);
      if (Number.isFinite(value)) {
        (inputs as unknown as Record<string, number>)[key] = value;
      }
    }
  }
  const mode = params.get('mode');
  if (mode === 'compound' || mode === 'simple') {
    inputs.mode = mode;
  }
  return inputs;
}

/** Pin a snapshot; the list is bounded, dropping the oldest. */
export function addPin(state: ScenarioState, pin: PinnedScenario): ScenarioState {
  const pinned = [...state.pinned, pin];
  while (pinned.length > MAX_PINNED) {
    pinned.shift();
  }
  return { ...state, pinned };
}

export interface FieldIssue {
  field: string;
  message: string;
}

/** Client-side range screening (mirrors the documented request ranges). */
export function validateInputs(inputs: ScenarioInputs): FieldIssue[] {
  const issues: FieldIssue[] = [];
  const positive: (keyof ScenarioInputs)[] = ['r', 'beta', 'T', 'x'];
  for (const key of positive) {
    const v = inputs[key] as number;
    if (!Number.isFinite(v) || v <= 0) {
      issues.push({ field: key, message: 'must be a positive number' });
    }
  }
  if (!(inputs.omega > 0 && inputs.omega < 1)) {
    issues.push({ field: 'omega', message: 'must lie strictly between 0 and 1' });
  }
  if (!(inputs.income > inputs.subsistence)) {
    issues.push({ field: 'income', message: 'must exceed subsistence' });
  }
  if (!(inputs.f_min > 0 && inputs.f_min < inputs.f_max)) {
    issues.push({ field: 'f_min', message: 'need 0 < f_min < f_max' });
  }
  return issues;
}
