/** Pure HTML renderers: (client state, language) -> markup string.
 *
 * No game rule lives here. Every figure on screen is a server field,
 * formatted but never recomputed; counts are rendered digit for digit.
 */

import type { ClientSessionState } from "./state.js";
import type { PopulationStats, StateView } from "./types.js";
import { COLOUR_TOKENS } from "./types.js";
import { bundle, type Lang } from "./locale.js";
import { sparkline } from "./sparkline.js";

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function pct(fraction: number): string {
  return `${(fraction * 100).toFixed(1)} %`;
}

function mm(value: number): string {
  return `${value.toFixed(1)} mm`;
}

function trustArrow(delta: number): string {
  if (delta > 0) return `<span class="delta up">&#9650; +${(delta * 100).toFixed(1)}</span>`;
  if (delta < 0) return `<span class="delta down">&#9660; ${(delta * 100).toFixed(1)}</span>`;
  return `<span class="delta flat">&#8594; 0.0</span>`;
}

function weatherPanel(state: ClientSessionState, lang: Lang): string {
  const t = bundle(lang);
  const view = state.view;
  const weather = view.weather;
  const record = view.last_record;
  const announced = view.announced_colour;
  const rows: string[] = [];
  if (weather !== null) {
    rows.push(`<tr><th>${esc(weather.date)}</th><td></td></tr>`);
    rows.push(`<tr><th>${t.forecast}</th><td>${mm(weather.forecast_rain_mm)}</td></tr>`);
    rows.push(`<tr><th>${t.confidence}</th><td>${pct(weather.forecast_confidence)}</td></tr>`);
  }
  if (announced !== null) {
    rows.push(
      `<tr><th>${t.announcePrompt}</th>` +
        `<td><span class="badge badge-${announced}">${t.colour[announced]}</span></td></tr>`,
    );
  }
  if (record !== null) {
    rows.push(
      `<tr><th>${t.observedYesterday}</th><td>${mm(record.observed_rain_mm)} ` +
        `<span class="badge badge-${record.announced_colour}">${t.colour[record.announced_colour]}</span> ` +
        `<span class="classification ${record.classification}">${t.classification[record.classification]}</span></td></tr>`,
    );
  }
  return `<section class="panel" id="weather"><h2>${t.weatherPanel}</h2><table>${rows.join("")}</table></section>`;
}

function subjectiveRows(stats: PopulationStats, lang: Lang): string {
  const t = bundle(lang);
  return COLOUR_TOKENS.map(
    (colour) =>
      `<tr><th><span class="badge badge-${colour}">${t.colour[colour]}</span></th>` +
      `<td>${mm(stats.per_colour_avg_subjective_risk_mm[colour])}</td></tr>`,
  ).join("");
}

function populationPanel(state: ClientSessionState, lang: Lang): string {
  const t = bundle(lang);
  const population = state.view.population;
  const stats = population.last_stats;
  const rows = [
    `<tr><th>${t.populationSize}</th><td>${String(population.size)}</td></tr>`,
    `<tr><th>${t.avgTrust}</th><td>${pct(population.avg_trust)}` +
      (stats !== null ? ` ${trustArrow(stats.trust_delta)}` : "") +
      `</td></tr>`,
    `<tr><th>${t.evacuated}</th><td>${pct(population.evacuated_fraction)}</td></tr>`,
  ];
  if (stats !== null) {
    rows.push(`<tr><th>${t.avgExpectedRain}</th><td>${mm(stats.avg_expected_rain_mm)}</td></tr>`);
    rows.push(`<tr><th>${t.unaware}</th><td>${pct(stats.unaware_fraction)}</td></tr>`);
  }
  const sparks =
    `<div class="spark-row"><span>${t.trustHistory}</span>` +
    sparkline(state.trustHistory, { min: 0, max: 1 }) +
    `</div><div class="spark-row"><span>${t.evacuationHistory}</span>` +
    sparkline(state.evacuationHistory, { min: 0, max: 1 }) +
    `</div>`;
  const subjective =
    stats !== null
      ? `<h3>${t.subjectiveByColour}</h3><table>${subjectiveRows(stats, lang)}</table>`
      : "";
  return (
    `<section class="panel" id="population"><h2>${t.populationPanel}</h2>` +
    `<table>${rows.join("")}</table>${subjective}${sparks}</section>`
  );
}

function communicationPanel(view: StateView, lang: Lang): string {
  const t = bundle(lang);
  const stats = view.communication;
  const rows = COLOUR_TOKENS.map((colour) => {
    const tally = stats.per_colour[colour];
    return (
      `<tr data-colour="${colour}"><th><span class="badge badge-${colour}">${t.colour[colour]}</span></th>` +
      `<td>${String(tally.days_announced)}</td>` +
      `<td class="false-alarms">${String(tally.false_alarms)}</td>` +
      `<td class="missed-alarms">${String(tally.missed_alarms)}</td></tr>`
    );
  });
  return (
    `<section class="panel" id="communication"><h2>${t.communicationPanel}</h2>` +
    `<p>${t.daysPlayed}: <strong>${String(stats.days_played)}</strong></p>` +
    `<table><thead><tr><th></th><th>${t.announcedHeader}</th>` +
    `<th>${t.falseAlarmsHeader}</th><th>${t.missedHeader}</th></tr></thead>` +
    `<tbody>${rows.join("")}</tbody></table></section>`
  );
}

function controls(state: ClientSessionState, lang: Lang): string {
  const t = bundle(lang);
  const view = state.view;
  const canAnnounce = view.phase === "awaiting_colour" && !view.complete && !state.busy;
  const canAdvance = view.phase === "awaiting_advance" && !view.complete && !state.busy;
  const colourButtons = COLOUR_TOKENS.map(
    (colour) =>
      `<button class="colour colour-${colour}" data-action="announce" data-colour="${colour}"` +
      `${canAnnounce ? "" : " disabled"}>${t.colour[colour]}</button>`,
  ).join("");
  const complete = view.complete ? `<p class="complete">${t.sessionComplete}</p>` : "";
  return (
    `<section class="controls"><p>${t.announcePrompt}</p>` +
    `<div class="colour-buttons">${colourButtons}</div>` +
    `<button id="advance" data-action="advance"${canAdvance ? "" : " disabled"}>${t.advanceDay}</button>` +
    `${complete}</section>`
  );
}

function popupOverlay(state: ClientSessionState, lang: Lang): string {
  const t = bundle(lang);
  const event = state.popupQueue[0];
  if (event === undefined) return "";
  return (
    `<div class="popup-backdrop"><div class="popup popup-${event.category}" data-event-id="${esc(event.id)}">` +
    `<p class="popup-category">${t.eventCategory[event.category]}</p>` +
    `<p class="popup-message">${esc(event.message)}</p>` +
    `<button data-action="dismiss-popup">${t.dismiss}</button></div></div>`
  );
}

export function renderDashboard(state: ClientSessionState, lang: Lang): string {
  const t = bundle(lang);
  const view = state.view;
  const banner =
    state.banner !== null
      ? `<div class="banner" role="alert">${esc(t.degraded(state.banner))}</div>`
      : "";
  return (
    `<header><h1>${t.title}</h1>` +
    `<p class="session-line">${esc(view.scenario_name)} &middot; ${t.dayOf(
      Math.min(view.day_index, view.total_days - 1),
      view.total_days,
    )}</p></header>` +
    banner +
    `<main class="panels">${weatherPanel(state, lang)}${populationPanel(state, lang)}` +
    `${communicationPanel(view, lang)}</main>` +
    controls(state, lang) +
    popupOverlay(state, lang)
  );
}
