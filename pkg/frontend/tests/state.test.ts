import { describe, expect, it } from 'vitest';

import {
  addPin,
  decodeScenario,
  defaultInputs,
  displayedStrategyLabel,
  encodeScenario,
  exportConfig,
  MAX_PINNED,
  toValuationRequest,
  validateInputs,
  type ScenarioState,
} from '../src/state.js';
import type { ValuationResponse } from '../src/types.js';

function fakeResponse(label: string, heuristic = false): ValuationResponse {
  return {
    cost: 1,
    cost_str: '1.000000',
    tau: 25,
    paid_off: false,
    forgiven_balance: 0,
    forgiven_balance_str: '0.000000',
    tax_payment: 0,
    tax_payment_str: '0.000000',
    strategy: { label, segments: [{ end: 25, policy: 'max' }] },
    heuristic,
    regime: 'intermediate',
    thresholds: { x_star: 120, t_c: 2.1, t_star: 13, x_lower: 60, x_upper: 180 },
    mode: 'compound',
    x: 100,
  };
}

describe('request serialization', () => {
  it('export config is byte-identical to the request document', () => {
    const inputs = defaultInputs();
    inputs.x = 140;
    inputs.mode = 'simple';
    const exported = exportConfig(inputs);
    expect(JSON.parse(exported)).toEqual(toValuationRequest(inputs));
    // Key order and formatting are fixed, so the export is reproducible.
    expect(exported).toBe(exportConfig({ ...inputs }));
  });

  it('request carries exactly the CLI config fields', () => {
    const request = toValuationRequest(defaultInputs());
    expect(Object.keys(request).sort()).toEqual(['mode', 'profile', 'terms', 'x']);
    expect(Object.keys(request.terms).sort()).toEqual(['T', 'beta', 'omega', 'r']);
    expect(Object.keys(request.profile).sort()).toEqual([
      'f_max',
      'f_min',
      'growth',
      'income',
      'subsistence',
    ]);
  });
});

describe('URL codec', () => {
  it('round-trips every field', () => {
    const inputs = defaultInputs();
    inputs.x = 333.5;
    inputs.beta = 0.051;
    inputs.mode = 'simple';
    const decoded = decodeScenario('#' + encodeScenario(inputs));
    expect(decoded).toEqual(inputs);
  });

  it('falls back to defaults on junk', () => {
    expect(decodeScenario('#x=banana&mode=weird')).toEqual(defaultInputs());
    expect(decodeScenario('')).toEqual(defaultInputs());
  });
});

describe('strategy label', () => {
  it('mirrors the response label', () => {
    expect(displayedStrategyLabel(fakeResponse('max'))).toBe('max');
    expect(displayedStrategyLabel(fakeResponse('max-min'))).toBe('max-min');
    expect(displayedStrategyLabel(fakeResponse('min-only'))).toBe('min-only');
  });

  it('flags heuristic plans', () => {
    expect(displayedStrategyLabel(fakeResponse('min-max-min', true))).toBe('heuristic');
  });
});

describe('pinned scenarios', () => {
  it('is bounded, dropping the oldest', () => {
    let state: ScenarioState = { inputs: defaultInputs(), pinned: [] };
    for (let i = 0; i < MAX_PINNED + 3; i++) {
      state = addPin(state, {
        title: `pin ${i}`,
        inputs: { ...defaultInputs(), x: i },
        cost_str: '0.000000',
        label: 'max',
      });
    }
    expect(state.pinned.length).toBe(MAX_PINNED);
    expect(state.pinned[0].title).toBe('pin 3');
  });
});

describe('validation', () => {
  it('accepts the defaults', () => {
    expect(validateInputs(defaultInputs())).toEqual([]);
  });

  it('reports field-level issues', () => {
    const inputs = defaultInputs();
    inputs.x = -5;
    inputs.omega = 1.2;
    inputs.subsistence = 200;
    const fields = validateInputs(inputs).map((issue) => issue.field);
    expect(fields).toContain('x');
    expect(fields).toContain('omega');
    expect(fields).toContain('income');
  });
});
