/** Wire types of the /v1 valuation service. */

export interface LoanTermsDoc {
  r: number;
  beta: number;
  omega: number;
  T: number;
}

export interface ProfileDoc {
  income: number;
  subsistence: number;
  growth: number;
  f_min: number;
  f_max: number;
}

export type PolicyDoc =
  | 'min'
  | 'max'
  | { constant: number }
  | { tabulated: { times: number[]; levels: number[] } };

export interface StrategySegmentDoc {
  end: number;
  policy: PolicyDoc;
}

export interface StrategyDoc {
  label?: string;
  segments: StrategySegmentDoc[];
}

export type Mode = 'compound' | 'simple';

/** Request body for /v1/valuation and /v1/trajectory; also the CLI config schema. */
export interface ValuationRequestDoc {
  terms: LoanTermsDoc;
  profile: ProfileDoc;
  x: number;
  mode: Mode;
  strategy?: StrategyDoc;
}

export interface ThresholdsDoc {
  x_star: number;
  t_c: number;
  t_star: number;
  x_lower: number;
  x_upper: number;
}

export interface ValuationResponse {
  cost: number;
  cost_str: string;
  tau: number;
  paid_off: boolean;
  forgiven_balance: number;
  forgiven_balance_str: string;
  tax_payment: number;
  tax_payment_str: string;
  strategy: StrategyDoc & { label: string };
  heuristic: boolean;
  regime: string;
  thresholds: ThresholdsDoc;
  mode: string;
  x: number;
}

export interface TrajectorySampleDoc {
  t: number;
  balance: number;
  principal: number;
  rate: number;
  discounted_paid: number;
}

export interface TrajectoryResponse {
  samples: TrajectorySampleDoc[];
  tau: number;
  stop_kind: string;
  theta: number;
  final_balance: number;
  strategy: StrategyDoc & { label: string };
}

export interface CompareEntry {
  label: string;
  cost: number;
  cost_str: string;
  tau: number;
  forgiven_balance_str: string;
  tax_payment_str: string;
}

export interface CompareResponse {
  results: CompareEntry[];
}
