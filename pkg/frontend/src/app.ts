import { ApiClient, ApiError } from './api.js';
import { formatEth, formatTokens, quorumPercent, shortAddress, shortId } from './format.js';
import { gatesFor, stateClass } from './state.js';
import type { AccountEntry, ProposalView } from './types.js';

const POLL_MS = 2000;
const TABS = ['governance', 'treasury', 'maintenance', 'user'] as const;
type Tab = (typeof TABS)[number];

export class Dashboard {
  private account = '';
  private tab: Tab = 'governance';
  private timer: number | undefined;
  private busy = false;

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
  ) {}

  async start(): Promise<void> {
    this.renderShell();
    const accounts = await this.api.accounts();
    this.renderAccountPicker(accounts);
    if (accounts.length > 0) this.account = accounts[0].name;
    await this.refresh();
    this.timer = window.setInterval(() => void this.refresh(), POLL_MS);
  }

  stop(): void {
    if (this.timer !== undefined) window.clearInterval(this.timer);
  }

  private $(selector: string): HTMLElement {
    const el = this.root.querySelector<HTMLElement>(selector);
    if (!el) throw new Error(`missing element ${selector}`);
    return el;
  }

  private renderShell(): void {
    this.root.innerHTML = `
      <header>
        <h1>Facility governance</h1>
        <span id="chain-info" class="muted"></span>
        <label>Acting as <select id="account-picker"></select></label>
      </header>
      <nav id="tabs"></nav>
      <div id="error-bar" class="error hidden"></div>
      <main id="tab-body"></main>`;
    const nav = this.$('#tabs');
    for (const tab of TABS) {
      const button = document.createElement('button');
      button.textContent = tab;
      button.dataset.tab = tab;
      button.addEventListener('click', () => {
        this.tab = tab;
        void this.refresh();
      });
      nav.appendChild(button);
    }
    this.$('#account-picker').addEventListener('change', (ev) => {
      this.account = (ev.target as HTMLSelectElement).value;
      void this.refresh();
    });
  }

  private renderAccountPicker(accounts: AccountEntry[]): void {
    const picker = this.$('#account-picker') as HTMLSelectElement;
    picker.innerHTML = '';
    for (const entry of accounts) {
      const option = document.createElement('option');
      option.value = entry.name;
      option.textContent = `${entry.name} (${shortAddress(entry.address)})`;
      picker.appendChild(option);
    }
  }

  private showError(err: unknown): void {
    const bar = this.$('#error-bar');
    bar.classList.remove('hidden');
    bar.textContent = err instanceof ApiError
      ? `${err.name}: ${err.detail}`
      : String(err);
  }

  private clearError(): void {
    this.$('#error-bar').classList.add('hidden');
  }

  /** One mutation at a time per session; the poll loop reconciles after. */
  private async act(fn: () => Promise<unknown>): Promise<void> {
    if (this.busy) return;
    this.busy = true;
    try {
      await fn();
      this.clearError();
      await this.refresh();
    } catch (err) {
      this.showError(err);
    } finally {
      this.busy = false;
    }
  }

  async refresh(): Promise<void> {
    try {
      const chain = await this.api.chain();
      this.$('#chain-info').textContent =
        `block ${chain.head_number}${chain.dev_mode ? ' · dev' : ''}`;
      for (const button of this.root.querySelectorAll<HTMLButtonElement>('#tabs button')) {
        button.classList.toggle('current', button.dataset.tab === this.tab);
      }
      switch (this.tab) {
        case 'governance': return await this.renderGovernance();
        case 'treasury': return await this.renderTreasury();
        case 'maintenance': return this.renderMaintenance();
        case 'user': return await this.renderUser();
      }
    } catch (err) {
      this.showError(err);
    }
  }

  // --- governance tab ----------------------------------------------------

  private async renderGovernance(): Promise<void> {
    const proposals = await this.api.proposals();
    const body = this.$('#tab-body');
    body.innerHTML = proposals.length ? '' : '<p class="muted">No proposals yet.</p>';
    for (const p of [...proposals].reverse()) {
      body.appendChild(this.proposalCard(p));
    }
  }

  private proposalCard(p: ProposalView): HTMLElement {
    const gates = gatesFor(p.state);
    const card = document.createElement('section');
    card.className = 'card';
    card.dataset.proposalId = p.id;
    const pct = quorumPercent(p.quorum_progress, p.quorum_needed);
    card.innerHTML = `
      <div class="card-head">
        <span class="badge ${stateClass(p.state)}">${p.state}</span>
        <strong>${escapeHtml(p.details.text)}</strong>
        <span class="muted">#${shortId(p.id)} by ${shortAddress(p.proposer)}</span>
      </div>
      <p class="muted">${escapeHtml(p.details.location)}</p>
      <div class="tallies">
        For ${formatTokens(p.tallies.for)} ·
        Against ${formatTokens(p.tallies.against)} ·
        Abstain ${formatTokens(p.tallies.abstain)}
      </div>
      <div class="quorum-bar"><div class="quorum-fill" style="width:${pct}%"></div></div>
      <div class="muted">quorum ${formatTokens(p.quorum_progress)} / ${formatTokens(p.quorum_needed)}</div>
      <div class="media"></div>
      <div class="actions"></div>`;
    const media = card.querySelector('.media')!;
    for (const cid of p.details.cids) {
      const img = document.createElement('img');
      img.src = this.api.contentUrl(cid);
      img.alt = cid;
      media.appendChild(img);
    }
    const actions = card.querySelector('.actions')!;
    const addButton = (label: string, enabled: boolean, onClick: () => Promise<unknown>) => {
      const button = document.createElement('button');
      button.textContent = label;
      button.disabled = !enabled;
      button.addEventListener('click', () => void this.act(onClick));
      actions.appendChild(button);
    };
    addButton('For', gates.vote, () => this.api.vote(p.id, this.account, 1));
    addButton('Against', gates.vote, () => this.api.vote(p.id, this.account, 0));
    addButton('Abstain', gates.vote, () => this.api.vote(p.id, this.account, 2));
    addButton('Queue', gates.queue, () => this.api.queue(p.id, this.account));
    addButton('Execute', gates.execute, () => this.api.execute(p.id, this.account));
    addButton('Cancel', gates.cancel, () => this.api.cancel(p.id, this.account));
    return card;
  }

  // --- treasury tab ------------------------------------------------------

  private async renderTreasury(): Promise<void> {
    const t = await this.api.treasury();
    const rows = t.payouts
      .map((p) => `<tr><td>${p.kind}</td><td>${shortAddress(p.recipient)}</td>
        <td>${p.amount_tokens}</td><td>#${shortId(p.proposal_id)}</td></tr>`)
      .join('');
    this.$('#tab-body').innerHTML = `
      <section class="card">
        <h2>Treasury</h2>
        <p>Balance: <strong>${formatEth(t.eth_wei)}</strong></p>
        <p>Token reserve: <strong>${formatTokens(t.reserve_tokens)}</strong></p>
        <p class="muted">
          participation reward ${t.incentive_params.voting_participation_incentive} ·
          proposal bounty ${t.incentive_params.successful_proposal_incentive} ·
          badge exchange rate ${t.incentive_params.ft_per_nft_exchange_rate}
        </p>
      </section>
      <section class="card">
        <h2>Payout history</h2>
        ${rows ? `<table><tr><th>kind</th><th>recipient</th><th>tokens</th><th>proposal</th></tr>${rows}</table>`
        : '<p class="muted">No payouts yet.</p>'}
      </section>`;
  }

  // --- maintenance tab ---------------------------------------------------

  private renderMaintenance(): void {
    const body = this.$('#tab-body');
    body.innerHTML = `
      <section class="card">
        <h2>File a maintenance report</h2>
        <form id="maintenance-form">
          <label>Description <textarea name="description" required></textarea></label>
          <label>Location <input name="location"></label>
          <label>Photos <input name="media" type="file" accept="image/*" multiple></label>
          <div id="preview" class="media"></div>
          <button type="submit">Submit</button>
        </form>
        <div id="maintenance-result"></div>
      </section>`;
    const form = this.$('#maintenance-form') as HTMLFormElement;
    const fileInput = form.elements.namedItem('media') as HTMLInputElement;
    fileInput.addEventListener('change', () => {
      const preview = this.$('#preview');
      preview.innerHTML = '';
      for (const file of fileInput.files ?? []) {
        const img = document.createElement('img');
        img.src = URL.createObjectURL(file);
        preview.appendChild(img);
      }
    });
    form.addEventListener('submit', (ev) => {
      ev.preventDefault();
      void this.act(async () => {
        const description = (form.elements.namedItem('description') as HTMLTextAreaElement).value;
        const location = (form.elements.namedItem('location') as HTMLInputElement).value;
        if (!description.trim()) throw new ApiError('EmptyDescription', 'description must be non-empty', 400);
        const media = [];
        for (const file of fileInput.files ?? []) {
          media.push({ filename: file.name, data_b64: await fileToBase64(file) });
        }
        const result = await this.api.submitMaintenance(this.account, description, location, media);
        this.$('#maintenance-result').innerHTML = `
          <p>Filed as proposal <code>#${shortId(result.proposal_id)}</code></p>
          ${result.cids.map((c) => `<img src="${this.api.contentUrl(c)}" alt="${c}">`).join('')}`;
        form.reset();
      });
    });
  }

  // --- user tab ----------------------------------------------------------

  private async renderUser(): Promise<void> {
    const u = await this.api.user(this.account);
    const badges = u.nft_badges
      .map((b) => `<div class="badge-card">
          <strong>${escapeHtml(b.metadata?.name ?? `badge #${b.token_id}`)}</strong>
          <p class="muted">${escapeHtml(b.metadata?.description ?? b.uri)}</p>
        </div>`)
      .join('');
    this.$('#tab-body').innerHTML = `
      <section class="card">
        <h2>${escapeHtml(u.name ?? shortAddress(u.address))}</h2>
        <p class="muted">${u.address}</p>
        <p>Native balance: <strong>${formatEth(u.native_wei)}</strong></p>
        <p>Tokens: <strong>${formatTokens(u.tokens)}</strong></p>
        <p>Voting power: <strong>${formatTokens(u.votes)}</strong></p>
      </section>
      <section class="card">
        <h2>Reputation badges</h2>
        ${badges || '<p class="muted">No badges yet.</p>'}
      </section>`;
  }
}

function escapeHtml(text: string): string {
  return text.replace(/[&<>"']/g, (c) => `&#${c.charCodeAt(0)};`);
}

function fileToBase64(file: File): Promise<string> {
  return new Promise((resolve, reject) => {
    const reader = new FileReader();
    reader.onload = () => resolve((reader.result as string).split(',', 2)[1] ?? '');
    reader.onerror = () => reject(reader.error);
    reader.readAsDataURL(file);
  });
}
