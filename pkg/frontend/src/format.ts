const WAD = 1e18;

/** Base-unit token amount -> human string, e.g. 10000000000000000000000 -> "10,000". */
export function formatTokens(baseUnits: number): string {
  return (baseUnits / WAD).toLocaleString('en-US', { maximumFractionDigits: 2 });
}

export function formatEth(wei: number): string {
  return `${(wei / WAD).toLocaleString('en-US', { maximumFractionDigits: 6 })} ETH`;
}

/** Quorum progress as a 0..100 percentage, clamped. */
export function quorumPercent(progress: number, needed: number): number {
  if (needed <= 0) return 100;
  return Math.min(100, (progress / needed) * 100);
}

export function shortAddress(address: string): string {
  return address.length > 12 ? `${address.slice(0, 8)}…${address.slice(-4)}` : address;
}

export function shortId(id: string): string {
  return id.slice(0, 10);
}
