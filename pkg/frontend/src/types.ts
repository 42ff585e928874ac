/** Wire types for the floodwatch HTTP API (schema floodwatch-view/1).
 *
 * These mirror the server JSON field for field. The client never derives
 * game numbers from them, it only projects them onto the screen.
 */

export type ColourToken = "green" | "yellow" | "orange" | "red";

export const COLOUR_TOKENS: readonly ColourToken[] = [
  "green",
  "yellow",
  "orange",
  "red",
];

export type Phase = "awaiting_colour" | "awaiting_advance";

export interface ColourScale {
  yellow_from_mm: number;
  orange_from_mm: number;
  red_from_mm: number;
  official_risk_mm: Record<ColourToken, number>;
}

export interface Weather {
  date: string;
  forecast_rain_mm: number;
  forecast_confidence: number;
}

export interface PopulationStats {
  avg_trust: number;
  trust_delta: number;
  avg_expected_rain_mm: number;
  unaware_fraction: number;
  evacuated_fraction: number;
  per_colour_avg_subjective_risk_mm: Record<ColourToken, number>;
}

export interface ColourTally {
  days_announced: number;
  false_alarms: number;
  missed_alarms: number;
}

export interface CommunicationStats {
  days_played: number;
  per_colour: Record<ColourToken, ColourTally>;
}

export type EventCategory = "institutional" | "damage";

export interface TriggeredEvent {
  id: string;
  category: EventCategory;
  message: string;
  date: string;
}

export type AlarmClass = "correct" | "false_alarm" | "missed";

export interface DayRecord {
  date: string;
  forecast_rain_mm: number;
  forecast_confidence: number;
  announced_colour: ColourToken;
  observed_rain_mm: number;
  classification: AlarmClass;
  post_alert_stats: PopulationStats;
  post_observation_stats: PopulationStats;
  events: TriggeredEvent[];
}

export interface StateView {
  schema: string;
  scenario_name: string;
  phase: Phase;
  complete: boolean;
  day_index: number;
  total_days: number;
  weather: Weather | null;
  announced_colour: ColourToken | null;
  scale: ColourScale;
  population: {
    size: number;
    avg_trust: number;
    evacuated_fraction: number;
    last_stats: PopulationStats | null;
  };
  communication: CommunicationStats;
  last_record: DayRecord | null;
}

export interface ScenarioInfo {
  name: string;
  days: number;
  start_date: string;
  provenance: "historical" | "generated";
  has_historical_colours: boolean;
}

export interface ScenarioListing {
  scenarios: ScenarioInfo[];
  configs: string[];
}

export interface SessionSummary {
  session_id: string;
  scenario_name: string;
  config: string | null;
  created_at: string;
  day_index: number;
  total_days: number;
  phase: Phase;
  complete: boolean;
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}
