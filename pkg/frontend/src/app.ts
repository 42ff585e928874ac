/** The console controller: owns the client state, talks to the transport,
 * and re-renders into its root element after every change.
 *
 * At most one mutation request is in flight; the busy flag disables the
 * controls while it runs. A conflict answer (someone else moved the
 * session on) triggers a state refetch instead of a local guess.
 */

import { ApiError, type Transport } from "./api.js";
import { bundle, type Lang } from "./locale.js";
import { renderDashboard } from "./render.js";
import {
  applyView,
  dismissPopup,
  initialState,
  setBanner,
  setBusy,
  type ClientSessionState,
} from "./state.js";
import type { ColourToken, ScenarioListing } from "./types.js";
import { COLOUR_TOKENS } from "./types.js";

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function message(error: unknown): string {
  return error instanceof Error ? error.message : String(error);
}

export class App {
  session: ClientSessionState | null = null;
  scenarios: ScenarioListing | null = null;
  lang: Lang;
  private launchError: string | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly transport: Transport,
    lang: Lang = "fr",
  ) {
    this.lang = lang;
    root.addEventListener("click", (event) => this.onClick(event));
  }

  async start(): Promise<void> {
    try {
      this.scenarios = await this.transport.listScenarios();
    } catch (error) {
      this.launchError = message(error);
    }
    this.render();
  }

  async createSession(scenario: string): Promise<void> {
    try {
      const summary = await this.transport.createSession(scenario, null, null);
      const view = await this.transport.getState(summary.session_id);
      this.session = initialState(summary.session_id, view);
      this.launchError = null;
    } catch (error) {
      this.launchError = message(error);
    }
    this.render();
  }

  async announce(colour: ColourToken): Promise<void> {
    await this.mutate((sessionId) => this.transport.announce(sessionId, colour));
  }

  async advance(): Promise<void> {
    await this.mutate((sessionId) => this.transport.advance(sessionId));
  }

  /** Run one mutation with the busy guard and conflict/network recovery. */
  private async mutate(
    send: (sessionId: string) => Promise<import("./types.js").StateView>,
  ): Promise<void> {
    if (this.session === null || this.session.busy) return;
    this.session = setBusy(this.session, true);
    this.render();
    try {
      const view = await send(this.session.sessionId);
      this.session = applyView(this.session, view);
    } catch (error) {
      if (error instanceof ApiError && (error.code === "conflict" || error.code === "complete")) {
        try {
          const view = await this.transport.getState(this.session.sessionId);
          this.session = applyView(this.session, view);
        } catch (refetchError) {
          this.session = setBanner(this.session, message(refetchError));
        }
      } else {
        this.session = setBanner(this.session, message(error));
      }
    }
    this.session = setBusy(this.session, false);
    this.render();
  }

  private onClick(event: Event): void {
    const target = event.target;
    if (!(target instanceof Element)) return;
    const actionable = target.closest("[data-action]");
    if (actionable === null || actionable.hasAttribute("disabled")) return;
    const action = actionable.getAttribute("data-action");
    if (action === "announce") {
      const colour = actionable.getAttribute("data-colour") as ColourToken;
      if ((COLOUR_TOKENS as readonly string[]).includes(colour)) void this.announce(colour);
    } else if (action === "advance") {
      void this.advance();
    } else if (action === "dismiss-popup") {
      if (this.session !== null) {
        this.session = dismissPopup(this.session);
        this.render();
      }
    } else if (action === "create-session") {
      const select = this.root.querySelector<HTMLSelectElement>("#scenario-select");
      if (select !== null) void this.createSession(select.value);
    } else if (action === "toggle-lang") {
      this.lang = this.lang === "fr" ? "en" : "fr";
      this.render();
    }
  }

  private launcher(): string {
    const t = bundle(this.lang);
    const options = (this.scenarios?.scenarios ?? [])
      .map((s) => `<option value="${esc(s.name)}">${esc(s.name)} (${s.days} j)</option>`)
      .join("");
    const error =
      this.launchError !== null
        ? `<div class="banner" role="alert">${esc(t.degraded(this.launchError))}</div>`
        : "";
    return (
      `<header><h1>${t.title}</h1></header>${error}` +
      `<section class="launcher"><label>${t.scenarioLabel} ` +
      `<select id="scenario-select">${options}</select></label> ` +
      `<button data-action="create-session">${t.newSession}</button></section>`
    );
  }

  render(): void {
    const langSwitch = `<button class="lang-switch" data-action="toggle-lang">${
      this.lang === "fr" ? "EN" : "FR"
    }</button>`;
    const body = this.session === null ? this.launcher() : renderDashboard(this.session, this.lang);
    this.root.innerHTML = langSwitch + body;
  }
}
