import { describe, expect, it } from 'vitest';

import { formatEth, formatTokens, quorumPercent, shortAddress } from '../src/format.js';

describe('formatting', () => {
  it('renders token base units as whole tokens', () => {
    expect(formatTokens(10_000e18)).toBe('10,000');
    expect(formatTokens(0)).toBe('0');
    expect(formatTokens(1.5e18)).toBe('1.5');
  });

  it('renders wei as ETH', () => {
    expect(formatEth(1e18)).toBe('1 ETH');
    expect(formatEth(5e17)).toBe('0.5 ETH');
  });

  it('clamps quorum progress to 100%', () => {
    expect(quorumPercent(10_000e18, 20_000e18)).toBe(50);
    expect(quorumPercent(30_000e18, 20_000e18)).toBe(100);
    expect(quorumPercent(0, 20_000e18)).toBe(0);
    expect(quorumPercent(0, 0)).toBe(100);
  });

  it('shortens long addresses only', () => {
    expect(shortAddress('0xdcf7799a6846d0911f98dc81972a17d646d0741e')).toMatch(/^0x.{6}….{4}$/);
    expect(shortAddress('manager')).toBe('manager');
  });
});
