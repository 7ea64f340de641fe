import { describe, expect, it } from 'vitest';

import { ALL_STATES, gatesFor, stateClass } from '../src/state.js';
import type { ProposalState } from '../src/types.js';

// expected button matrix per state: [vote, queue, execute, cancel]
const EXPECTED: Record<ProposalState, [boolean, boolean, boolean, boolean]> = {
  Pending: [false, false, false, true],
  Active: [true, false, false, true],
  Canceled: [false, false, false, false],
  Defeated: [false, false, false, false],
  Succeeded: [false, true, false, true],
  Queued: [false, false, true, true],
  Expired: [false, false, false, true],
  Executed: [false, false, false, false],
};

describe('action gating', () => {
  it('covers all 8 lifecycle states', () => {
    expect(ALL_STATES).toHaveLength(8);
    expect(new Set(ALL_STATES).size).toBe(8);
  });

  for (const state of ALL_STATES) {
    it(`enables exactly the legal actions in ${state}`, () => {
      const [vote, queue, execute, cancel] = EXPECTED[state];
      expect(gatesFor(state)).toEqual({ vote, queue, execute, cancel });
    });
  }

  it('enables at most one of vote/queue/execute per state', () => {
    for (const state of ALL_STATES) {
      const g = gatesFor(state);
      expect([g.vote, g.queue, g.execute].filter(Boolean).length).toBeLessThanOrEqual(1);
    }
  });

  it('assigns every state a badge class', () => {
    for (const state of ALL_STATES) {
      expect(stateClass(state)).toMatch(/^badge-/);
    }
  });
});
