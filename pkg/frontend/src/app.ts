/**
 * DOM wiring for the what-if explorer.  All financial numbers shown come
 * from API responses; this file only routes values between controls, the
 * client, and the page.
 */

import { ApiClient, ApiError, debounce } from './api.js';
import { balanceChart, paymentChart } from './charts.js';
import {
  addPin,
  decodeScenario,
  displayedStrategyLabel,
  encodeScenario,
  exportConfig,
  toValuationRequest,
  validateInputs,
  type ScenarioInputs,
  type ScenarioState,
} from './state.js';
import type { StrategyDoc, ValuationResponse } from './types.js';

const api = new ApiClient('');

let state: ScenarioState = {
  inputs: decodeScenario(window.location.hash),
  pinned: [],
};
let lastValuation: ValuationResponse | null = null;

const FIELDS: { key: keyof ScenarioInputs; label: string; step: string }[] = [
  { key: 'x', label: 'Balance (k$)', step: '1' },
  { key: 'income', label: 'Income (k$/y)', step: '1' },
  { key: 'subsistence', label: 'Subsistence (k$/y)', step: '1' },
  { key: 'growth', label: 'Income growth', step: '0.005' },
  { key: 'f_min', label: 'Min fraction', step: '0.01' },
  { key: 'f_max', label: 'Max fraction', step: '0.01' },
  { key: 'r', label: 'Discount rate', step: '0.0025' },
  { key: 'beta', label: 'Rate spread', step: '0.0025' },
  { key: 'omega', label: 'Tax rate', step: '0.01' },
  { key: 'T', label: 'Horizon (y)', step: '1' },
];

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function renderControls(): void {
  const host = el<HTMLDivElement>('controls');
  host.innerHTML = FIELDS.map(
    ({ key, label, step }) => `
    <label class="field" data-field="${key}">
      <span>${label}</span>
      <input id="in-${key}" type="number" step="${step}" value="${state.inputs[key]}">
      <em class="issue" id="issue-${key}"></em>
    </label>`,
  ).join('');
  for (const { key } of FIELDS) {
    el<HTMLInputElement>(`in-${key}`).addEventListener('input', (ev) => {
      const value = Number((ev.target as HTMLInputElement).value);
      if (Number.isFinite(value)) {
        (state.inputs as unknown as Record<string, number>)[key] = value;
        scheduleRefresh();
      }
    });
  }
  el<HTMLSelectElement>('in-mode').addEventListener('change', (ev) => {
    state.inputs.mode = (ev.target as HTMLSelectElement).value as 'compound' | 'simple';
    scheduleRefresh();
  });
}

function showBanner(message: string | null): void {
  const banner = el<HTMLDivElement>('banner');
  if (message === null) {
    banner.hidden = true;
  } else {
    banner.hidden = false;
    banner.textContent = message;
  }
}

function renderValuation(resp: ValuationResponse): void {
  lastValuation = resp;
  el('strategy-label').textContent = displayedStrategyLabel(resp);
  el('regime').textContent = resp.regime.replace('_', ' ');
  el('cost').textContent = resp.cost_str;
  el('forgiven').textContent = resp.forgiven_balance_str;
  el('tax').textContent = resp.tax_payment_str;
  el('tau').textContent = `${resp.tau.toFixed(2)} y ${resp.paid_off ? '(paid off)' : '(forgiven)'}`;
  el('x-star').textContent = resp.thresholds.x_star.toFixed(3);
  el('t-c').textContent = resp.thresholds.t_c.toFixed(3);
  const timeline = resp.strategy.segments
    .map((seg) => {
      const policy = typeof seg.policy === 'string' ? seg.policy : JSON.stringify(seg.policy);
      return `<li>until ${seg.end.toFixed(2)}y: <b>${policy}</b></li>`;
    })
    .join('');
  el('timeline').innerHTML = timeline;
}

function comparisonStrategies(resp: ValuationResponse): StrategyDoc[] {
  // Built solely from API-provided numbers (horizon from inputs, t_c from
  // the response thresholds).
  const horizon = state.inputs.T;
  const tC = resp.thresholds.t_c;
  const list: StrategyDoc[] = [
    { label: 'max', segments: [{ end: horizon, policy: 'max' }] },
    { label: 'min-only', segments: [{ end: horizon, policy: 'min' }] },
  ];
  if (tC > 0 && tC < horizon) {
    list.push({
      label: 'max-min',
      segments: [
        { end: tC, policy: 'max' },
        { end: horizon, policy: 'min' },
      ],
    });
  }
  return list;
}

async function refresh(): Promise<void> {
  for (const { key } of FIELDS) {
    el(`issue-${key}`).textContent = '';
  }
  const issues = validateInputs(state.inputs);
  if (issues.length > 0) {
    for (const issue of issues) {
      const slot = document.getElementById(`issue-${issue.field}`);
      if (slot) slot.textContent = issue.message;
    }
    return;
  }

  const request = toValuationRequest(state.inputs);
  window.location.hash = encodeScenario(state.inputs);
  try {
    const valuation = await api.valuation(request);
    renderValuation(valuation);

    const [trajectory, comparison] = await Promise.all([
      api.trajectory(request),
      api.compare(request, comparisonStrategies(valuation)),
    ]);
    el('balance-chart').innerHTML = balanceChart(
      trajectory.samples,
      valuation.thresholds.t_c,
    );
    el('payment-chart').innerHTML = paymentChart(trajectory.samples);
    el('compare').innerHTML = comparison.results
      .map(
        (row) =>
          `<tr><td>${row.label}</td><td>${row.cost_str}</td>` +
          `<td>${row.tau.toFixed(2)}</td><td>${row.forgiven_balance_str}</td></tr>`,
      )
      .join('');
    showBanner(null);
  } catch (err) {
    if (err instanceof DOMException && err.name === 'AbortError') {
      return; // superseded by newer input
    }
    const message =
      err instanceof ApiError
        ? `service error: ${JSON.stringify(err.detail)}`
        : `service unreachable: ${String(err)}`;
    showBanner(message); // inputs stay as typed
  }
}

const scheduleRefresh = debounce(() => void refresh(), 150);

function renderPinned(): void {
  el('pinned').innerHTML = state.pinned
    .map(
      (pin, i) =>
        `<li><button class="pin-load" data-idx="${i}">${pin.title}</button> ` +
        `cost ${pin.cost_str} · ${pin.label}</li>`,
    )
    .join('');
  document.querySelectorAll<HTMLButtonElement>('.pin-load').forEach((button) => {
    button.addEventListener('click', () => {
      const pin = state.pinned[Number(button.dataset.idx)];
      state = { ...state, inputs: { ...pin.inputs } };
      renderControls();
      void refresh();
    });
  });
}

function wireActions(): void {
  el('pin').addEventListener('click', () => {
    if (!lastValuation) return;
    state = addPin(state, {
      title: `x=${state.inputs.x} ${state.inputs.mode}`,
      inputs: { ...state.inputs },
      cost_str: lastValuation.cost_str,
      label: displayedStrategyLabel(lastValuation),
    });
    renderPinned();
  });

  el('export').addEventListener('click', () => {
    const blob = new Blob([exportConfig(state.inputs)], { type: 'application/json' });
    const url = URL.createObjectURL(blob);
    const anchor = document.createElement('a');
    anchor.href = url;
    anchor.download = 'scenario.json';
    anchor.click();
    URL.revokeObjectURL(url);
  });
}

renderControls();
wireActions();
window.addEventListener('hashchange', () => {
  state = { ...state, inputs: decodeScenario(window.location.hash) };
  renderControls();
  scheduleRefresh();
});
void refresh();
