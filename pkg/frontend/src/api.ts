import type {
  AccountEntry,
  ChainInfo,
  ErrorEnvelope,
  MaintenanceResult,
  ProposalView,
  TreasuryView,
  UserView,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public readonly name: string,
    public readonly detail: string,
    public readonly status: number,
  ) {
    super(`${name}: ${detail}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client over the node's JSON API. Every error becomes an
 * ApiError carrying the server's {error, detail} envelope verbatim. */
export class ApiClient {
  constructor(
    private readonly base: string = '',
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.base + path, init);
    if (!response.ok) {
      let envelope: ErrorEnvelope = { error: 'HttpError', detail: `status ${response.status}` };
      try {
        envelope = await response.json();
      } catch {
        // non-JSON error body; keep the fallback envelope
      }
      throw new ApiError(envelope.error, envelope.detail, response.status);
    }
    return response.json() as Promise<T>;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  chain(): Promise<ChainInfo> {
    return this.request('/api/chain');
  }

  advance(blocks: number): Promise<{ head_number: number }> {
    return this.post('/api/chain/advance', { blocks });
  }

  async accounts(): Promise<AccountEntry[]> {
    const body = await this.request<{ accounts: AccountEntry[] }>('/api/accounts');
    return body.accounts;
  }

  async proposals(): Promise<ProposalView[]> {
    const body = await this.request<{ proposals: ProposalView[] }>('/api/proposals');
    return body.proposals;
  }

  proposal(id: string): Promise<ProposalView> {
    return this.request(`/api/proposals/${id}`);
  }

  vote(id: string, voter: string, support: 0 | 1 | 2): Promise<{ weight: number }> {
    return this.post(`/api/proposals/${id}/vote`, { voter, support });
  }

  queue(id: string, caller: string): Promise<{ eta: number }> {
    return this.post(`/api/proposals/${id}/queue`, { caller });
  }

  execute(id: string, caller: string): Promise<{ payouts: unknown[] }> {
    return this.post(`/api/proposals/${id}/execute`, { caller });
  }

  cancel(id: string, caller: string): Promise<{ receipt: unknown }> {
    return this.post(`/api/proposals/${id}/cancel`, { caller });
  }

  submitMaintenance(
    submitter: string,
    description: string,
    location: string,
    media: { filename: string; data_b64: string }[],
  ): Promise<MaintenanceResult> {
    return this.post('/api/maintenance', { submitter, description, location, media });
  }

  user(nameOrAddress: string): Promise<UserView> {
    return this.request(`/api/users/${encodeURIComponent(nameOrAddress)}`);
  }

  treasury(): Promise<TreasuryView> {
    return this.request('/api/treasury');
  }

  contentUrl(cid: string): string {
    return `${this.base}/api/content/${cid}`;
  }
}
