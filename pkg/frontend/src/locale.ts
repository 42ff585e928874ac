/** UI strings. French first (the game's home locale), English as the alternative. */

import type { AlarmClass, ColourToken, EventCategory } from "./types.js";

export type Lang = "fr" | "en";

interface Bundle {
  title: string;
  scenarioLabel: string;
  newSession: string;
  dayOf: (index: number, total: number) => string;
  weatherPanel: string;
  forecast: string;
  confidence: string;
  observedYesterday: string;
  populationPanel: string;
  populationSize: string;
  avgTrust: string;
  avgExpectedRain: string;
  evacuated: string;
  unaware: string;
  subjectiveByColour: string;
  communicationPanel: string;
  daysPlayed: string;
  announcedHeader: string;
  falseAlarmsHeader: string;
  missedHeader: string;
  announcePrompt: string;
  advanceDay: string;
  sessionComplete: string;
  degraded: (message: string) => string;
  dismiss: string;
  colour: Record<ColourToken, string>;
  classification: Record<AlarmClass, string>;
  eventCategory: Record<EventCategory, string>;
  trustHistory: string;
  evacuationHistory: string;
}

const fr: Bundle = {
  title: "Console de vigilance crues",
  scenarioLabel: "Scénario",
  newSession: "Nouvelle session",
  dayOf: (index, total) => `Jour ${index + 1} / ${total}`,
  weatherPanel: "Météo",
  forecast: "Pluie prévue",
  confidence: "Confiance",
  observedYesterday: "Pluie observée la veille",
  populationPanel: "Population",
  populationSize: "Habitants",
  avgTrust: "Confiance moyenne dans les bulletins",
  avgExpectedRain: "Pluie attendue (moyenne)",
  evacuated: "Évacués",
  unaware: "Sous-estiment la journée",
  subjectiveByColour: "Risque subjectif moyen par couleur",
  communicationPanel: "Communication",
  daysPlayed: "Jours joués",
  announcedHeader: "Annoncés",
  falseAlarmsHeader: "Fausses alertes",
  missedHeader: "Alertes manquées",
  announcePrompt: "Annoncer la vigilance du jour",
  advanceDay: "Passer au jour suivant",
  sessionComplete: "Scénario terminé",
  degraded: (message) => `Service injoignable : ${message}`,
  dismiss: "Fermer",
  colour: { green: "vert", yellow: "jaune", orange: "orange", red: "rouge" },
  classification: {
    correct: "correcte",
    false_alarm: "fausse alerte",
    missed: "alerte manquée",
  },
  eventCategory: { institutional: "mesure", damage: "dégât" },
  trustHistory: "Confiance au fil des jours",
  evacuationHistory: "Évacuation au fil des jours",
};

const en: Bundle = {
  title: "Flood vigilance console",
  scenarioLabel: "Scenario",
  newSession: "New session",
  dayOf: (index, total) => `Day ${index + 1} / ${total}`,
  weatherPanel: "Weather",
  forecast: "Forecast rain",
  confidence: "Confidence",
  observedYesterday: "Rain observed yesterday",
  populationPanel: "Population",
  populationSize: "Residents",
  avgTrust: "Average trust in bulletins",
  avgExpectedRain: "Expected rain (average)",
  evacuated: "Evacuated",
  unaware: "Under-estimating today",
  subjectiveByColour: "Average subjective risk per colour",
  communicationPanel: "Communication",
  daysPlayed: "Days played",
  announcedHeader: "Announced",
  falseAlarmsHeader: "False alarms",
  missedHeader: "Missed alarms",
  announcePrompt: "Announce today's vigilance",
  advanceDay: "Advance to next day",
  sessionComplete: "Scenario complete",
  degraded: (message) => `Service unreachable: ${message}`,
  dismiss: "Dismiss",
  colour: { green: "green", yellow: "yellow", orange: "orange", red: "red" },
  classification: {
    correct: "correct",
    false_alarm: "false alarm",
    missed: "missed alarm",
  },
  eventCategory: { institutional: "measure", damage: "damage" },
  trustHistory: "Trust over the days",
  evacuationHistory: "Evacuation over the days",
};

const bundles: Record<Lang, Bundle> = { fr, en };

export function bundle(lang: Lang): Bundle {
  return bundles[lang];
}
