import type { ProposalState } from './types.js';

export const ALL_STATES: ProposalState[] = [
  'Pending', 'Active', 'Canceled', 'Defeated',
  'Succeeded', 'Queued', 'Expired', 'Executed',
];

export interface ActionGates {
  vote: boolean;
  queue: boolean;
  execute: boolean;
  cancel: boolean;
}

/**
 * Which buttons are live for a proposal in the given state. Mirrors the
 * server's lifecycle rules exactly: a button is enabled iff the matching
 * API call would not be rejected for being in the wrong state.
 */
export function gatesFor(state: ProposalState): ActionGates {
  return {
    vote: state === 'Active',
    queue: state === 'Succeeded',
    execute: state === 'Queued',
    cancel: state === 'Pending' || state === 'Active' || state === 'Succeeded'
      || state === 'Queued' || state === 'Expired',
  };
}

/** Badge color class per state, for the proposal list. */
export function stateClass(state: ProposalState): string {
  switch (state) {
    case 'Active': return 'badge-active';
    case 'Succeeded':
    case 'Queued': return 'badge-ready';
    case 'Executed': return 'badge-done';
    case 'Pending': return 'badge-pending';
    default: return 'badge-dead';
  }
}
