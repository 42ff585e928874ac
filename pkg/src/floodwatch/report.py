"""Reporting: delimited summaries and figures from exported histories.

Everything here works off a SessionHistory document, so reports can be
produced long after the session is gone.  matplotlib is imported lazily
inside the figure functions; the rest of the package never pays for it.
"""

from __future__ import annotations

import csv
from pathlib import Path

from .agents import COLOURS
from .engine import AlarmClass, SessionHistory, fold_communication_stats

COLOUR_HEX = {
    "green": "#2e7d32",
    "yellow": "#f9a825",
    "orange": "#ef6c00",
    "red": "#c62828",
}


def summarize_history(history: SessionHistory) -> dict:
    """Headline numbers for one playthrough."""
    records = history.records
    comm = fold_communication_stats(records)
    per_colour = {
        c.token: {
            "days_announced": comm.days_announced[c],
            "false_alarms": comm.false_alarms[c],
            "missed_alarms": comm.missed_alarms[c],
        }
        for c in COLOURS
    }
    summary = {
        "scenario": history.scenario_name,
        "policy": history.policy,
        "days_played": comm.days_played,
        "correct_days": sum(
            1 for r in records if r.classification is AlarmClass.CORRECT
        ),
        "false_alarms": sum(comm.false_alarms.values()),
        "missed_alarms": sum(comm.missed_alarms.values()),
        "per_colour": per_colour,
        "total_rain_mm": round(sum(r.observed_rain for r in records), 1),
    }
    if records:
        summary["initial_avg_trust"] = round(
            records[0].post_alert_stats.avg_trust - records[0].post_alert_stats.trust_delta, 6
        )
        summary["final_avg_trust"] = round(records[-1].post_observation_stats.avg_trust, 6)
        summary["peak_evacuated_fraction"] = max(
            r.post_observation_stats.evacuated_fraction for r in records
        )
    return summary


def write_day_records_csv(history: SessionHistory, path: Path) -> None:
    """One row per played day with the headline population numbers."""
    fields = [
        "date",
        "forecast_rain_mm",
        "forecast_confidence",
        "announced_colour",
        "observed_rain_mm",
        "classification",
        "avg_trust",
        "trust_delta",
        "avg_expected_rain_mm",
        "unaware_fraction",
        "evacuated_fraction",
        "events",
    ]
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(fields)
        for r in history.records:
            stats = r.post_observation_stats
            writer.writerow(
                [
                    r.date.isoformat(),
                    r.forecast_rain,
                    r.forecast_confidence,
                    r.announced_colour.token,
                    r.observed_rain,
                    r.classification.value,
                    f"{stats.avg_trust:.6f}",
                    f"{stats.trust_delta:.6f}",
                    f"{stats.avg_expected_rain:.3f}",
                    f"{stats.unaware_fraction:.4f}",
                    f"{stats.evacuated_fraction:.4f}",
                    ";".join(event.event_id for event in r.events),
                ]
            )


def write_colour_counts_csv(history: SessionHistory, path: Path) -> None:
    comm = fold_communication_stats(history.records)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["colour", "days_announced", "false_alarms", "missed_alarms"])
        for c in COLOURS:
            writer.writerow(
                [c.token, comm.days_announced[c], comm.false_alarms[c], comm.missed_alarms[c]]
            )


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_figures(history: SessionHistory, out_dir: Path) -> list[Path]:
    """Write the standard set of PNG figures; returns the paths written."""
    plt = _pyplot()
    out_dir = Path(out_dir)
    records = history.records
    dates = [r.date for r in records]
    written = []

    def save(fig, name: str) -> None:
        path = out_dir / name
        fig.savefig(path, dpi=120, bbox_inches="tight")
        plt.close(fig)
        written.append(path)

    fig, (ax_trust, ax_evac) = plt.subplots(2, 1, figsize=(9, 6), sharex=True)
    ax_trust.plot(dates, [r.post_observation_stats.avg_trust for r in records], color="#1565c0")
    ax_trust.set_ylabel("average trust")
    ax_trust.set_ylim(0.0, 1.0)
    ax_trust.grid(alpha=0.3)
    ax_evac.plot(
        dates,
        [r.post_observation_stats.evacuated_fraction for r in records],
        color="#6a1b9a",
    )
    ax_evac.set_ylabel("evacuated fraction")
    ax_evac.set_ylim(-0.02, 1.02)
    ax_evac.grid(alpha=0.3)
    fig.suptitle(f"Population response: {history.scenario_name}")
    save(fig, "population_response.png")

    comm = fold_communication_stats(records)
    fig, ax = plt.subplots(figsize=(7, 4))
    positions = range(len(COLOURS))
    announced = [comm.days_announced[c] for c in COLOURS]
    false_alarms = [comm.false_alarms[c] for c in COLOURS]
    missed = [comm.missed_alarms[c] for c in COLOURS]
    ax.bar(positions, announced, color=[COLOUR_HEX[c.token] for c in COLOURS], alpha=0.4)
    ax.bar(positions, false_alarms, width=0.5, color="#455a64", label="false alarms")
    ax.bar(
        positions,
        missed,
        width=0.5,
        bottom=false_alarms,
        color="#000000",
        label="missed",
    )
    ax.set_xticks(list(positions), [c.token for c in COLOURS])
    ax.set_ylabel("days")
    ax.set_title("Announcements and their accuracy")
    ax.legend()
    save(fig, "announcement_accuracy.png")

    fig, ax = plt.subplots(figsize=(9, 4))
    ax.bar(
        dates,
        [r.observed_rain for r in records],
        color=[COLOUR_HEX[r.announced_colour.token] for r in records],
        width=1.0,
    )
    scale = history.scale
    for level, style in (
        (scale.yellow_from, ":"),
        (scale.orange_from, "--"),
        (scale.red_from, "-"),
    ):
        ax.axhline(level, color="#37474f", linestyle=style, linewidth=0.8)
    ax.set_ylabel("observed rain (mm)")
    ax.set_title("Rainfall, coloured by the announcement made")
    save(fig, "rain_timeline.png")

    return written


def write_report(history: SessionHistory, out_dir: str | Path) -> list[Path]:
    """CSV tables plus figures, side by side in ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    day_csv = out_dir / "day_records.csv"
    colour_csv = out_dir / "colour_counts.csv"
    write_day_records_csv(history, day_csv)
    write_colour_counts_csv(history, colour_csv)
    return [day_csv, colour_csv] + render_figures(history, out_dir)
