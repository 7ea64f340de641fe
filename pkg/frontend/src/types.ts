// Shapes of the JSON the node serves. Token and wei amounts arrive as plain
// JSON numbers in base units (1 token = 1e18); they are display-only here,
// so float rounding in the last few wei is acceptable.

export type ProposalState =
  | 'Pending'
  | 'Active'
  | 'Canceled'
  | 'Defeated'
  | 'Succeeded'
  | 'Queued'
  | 'Expired'
  | 'Executed';

export interface Tallies {
  for: number;
  against: number;
  abstain: number;
}

export interface ProposalView {
  id: string;
  proposer: string;
  description: string;
  details: { text: string; location: string; cids: string[] };
  actions: unknown[];
  vote_start: number;
  vote_end: number;
  state: ProposalState;
  tallies: Tallies;
  quorum_needed: number;
  quorum_progress: number;
  voters: string[];
  eta: number | null;
}

export interface ChainInfo {
  head_number: number;
  timestamp: number;
  dev_mode: boolean;
  deployed: boolean;
}

export interface AccountEntry {
  name: string;
  address: string;
}

export interface TreasuryView {
  eth_wei: number;
  reserve_tokens: number;
  payouts: { kind: string; recipient: string; amount_tokens: number; proposal_id: string }[];
  incentive_params: {
    voting_participation_incentive: number;
    successful_proposal_incentive: number;
    ft_per_nft_exchange_rate: number;
  };
}

export interface BadgeView {
  token_id: number;
  uri: string;
  metadata: { name?: string; description?: string; reason?: string } | null;
}

export interface UserView {
  name: string | null;
  address: string;
  native_wei: number;
  nonce: number;
  tokens: number;
  votes: number;
  nft_badges: BadgeView[];
}

export interface MaintenanceResult {
  cids: string[];
  proposal_id: string;
  receipt: { status: string };
}

export interface ErrorEnvelope {
  error: string;
  detail: string;
}
