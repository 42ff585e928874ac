"""Regenerate the bundled example data under src/floodwatch/data/.

Everything here is synthesized with fixed seeds, in the public-archive CSV
format the ingestion layer expects.  The October 2018 stretch and the 2018
orange-episode days carry curated values from the documented Aude case
study (the 139.8 mm Sunday announced orange, red raised only the next
morning), so replays exercise a real communication failure; every other
day is a plausible seasonal draw.  Run from the repository root:

    python tools/make_fixtures.py
"""

from __future__ import annotations

import datetime as dt
from pathlib import Path

import numpy as np

import floodwatch as fw

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "floodwatch" / "data"

START = dt.date(2010, 1, 1)
END = dt.date(2018, 12, 31)

# Monthly wet-day probability and gamma scale (mm), Mediterranean-ish:
# drier summers, heavy-tailed autumns.
WET_P = [0.30, 0.28, 0.28, 0.30, 0.26, 0.18, 0.12, 0.14, 0.22, 0.30, 0.32, 0.30]
GAMMA_SCALE = [6.0, 6.0, 6.0, 6.0, 5.0, 5.0, 4.0, 5.0, 9.0, 10.0, 9.0, 7.0]
GAMMA_SHAPE = 0.9

# Curated 2018 values: the autumn episode that motivates the whole model,
# plus the year's earlier orange vigilance days.
OCTOBER_2018 = {
    1: 0.0, 2: 0.0, 3: 1.2, 4: 0.0, 5: 0.0, 6: 3.4, 7: 0.0, 8: 12.0,
    9: 38.4, 10: 21.6, 11: 0.6, 12: 0.0, 13: 2.8, 14: 139.8, 15: 48.2,
    16: 6.4, 17: 0.0, 18: 0.8, 19: 0.0, 20: 0.0, 21: 4.6, 22: 0.0,
    23: 0.0, 24: 11.2, 25: 0.4, 26: 0.0, 27: 0.0, 28: 7.8, 29: 0.0,
    30: 2.2, 31: 0.0,
}
CURATED_2018 = {
    dt.date(2018, 1, 7): 62.4,
    dt.date(2018, 1, 8): 27.2,
    dt.date(2018, 2, 28): 54.6,
    dt.date(2018, 3, 1): 31.0,
}
CURATED_2018.update({dt.date(2018, 10, day): value for day, value in OCTOBER_2018.items()})

VIGILANCE_2018 = [
    (dt.date(2018, 1, 7), "orange"),
    (dt.date(2018, 1, 8), "orange"),
    (dt.date(2018, 2, 28), "orange"),
    (dt.date(2018, 3, 1), "orange"),
    (dt.date(2018, 10, 9), "orange"),
    (dt.date(2018, 10, 10), "orange"),
    (dt.date(2018, 10, 14), "orange"),
    (dt.date(2018, 10, 15), "red"),
]


def synthesize_rain(seed: int = 20101231) -> list[tuple[dt.date, float]]:
    rng = np.random.default_rng(seed)
    series = []
    day = START
    while day <= END:
        month = day.month - 1
        if rng.random() < WET_P[month]:
            amount = float(rng.gamma(GAMMA_SHAPE, GAMMA_SCALE[month]))
        else:
            amount = 0.0
        if day.year == 2018:
            # Keep the synthetic background below orange so the curated
            # episode days are the only strong-vigilance material in 2018.
            amount = min(amount, 45.0)
        series.append((day, round(amount, 1)))
        day += dt.timedelta(days=1)

    # A few autumn storm days per earlier year so strong vigilance has
    # something to point at.
    by_date = dict(series)
    for year in range(2010, 2018):
        storm_rng = np.random.default_rng([seed, year])
        count = int(storm_rng.integers(2, 5))
        days_pool = [dt.date(year, 9, 1) + dt.timedelta(days=int(o)) for o in
                     storm_rng.choice(91, size=count, replace=False)]
        for storm_day in days_pool:
            by_date[storm_day] = round(float(storm_rng.uniform(40.0, 130.0)), 1)
    for date, value in CURATED_2018.items():
        by_date[date] = value
    return sorted(by_date.items())


def synthesize_vigilance(rain: list[tuple[dt.date, float]]) -> list[tuple[dt.date, str]]:
    entries: list[tuple[dt.date, str]] = []
    by_year: dict[int, list[tuple[dt.date, float]]] = {}
    for day, amount in rain:
        by_year.setdefault(day.year, []).append((day, amount))
    for year in range(2010, 2018):
        days = by_year[year]
        for day, amount in days:
            if amount >= 100.0:
                entries.append((day, "red"))
        candidates = sorted(
            (pair for pair in days if 40.0 <= pair[1] < 100.0),
            key=lambda pair: -pair[1],
        )
        for day, _ in candidates[:2]:
            entries.append((day, "orange"))
        # One over-cautious bulletin a year: moderate October day, orange.
        for day, amount in days:
            if day.month == 10 and 5.0 <= amount < 25.0:
                entries.append((day, "orange"))
                break
    entries.extend(VIGILANCE_2018)
    return sorted(set(entries))


def main() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    rain = synthesize_rain()
    vigilance = synthesize_vigilance(rain)

    rain_csv = fw.dump_rain_series(rain)
    (DATA_DIR / "aude_rain_2010_2018.csv").write_text(rain_csv, encoding="utf-8")
    vigil_csv = "date,colour\n" + "".join(
        f"{day.isoformat()},{colour}\n" for day, colour in vigilance
    )
    (DATA_DIR / "aude_vigilance_2010_2018.csv").write_text(vigil_csv, encoding="utf-8")

    october = [p for p in rain if p[0].year == 2018 and p[0].month == 10]
    october_vigil = [p for p in vigilance if p[0].year == 2018 and p[0].month == 10]
    (DATA_DIR / "aude_rain_2018_10.csv").write_text(
        fw.dump_rain_series(october), encoding="utf-8"
    )
    (DATA_DIR / "aude_vigilance_2018_10.csv").write_text(
        "date,colour\n"
        + "".join(f"{day.isoformat()},{colour}\n" for day, colour in october_vigil),
        encoding="utf-8",
    )

    full_rain = fw.load_rain_series(DATA_DIR / "aude_rain_2010_2018.csv")
    full_vigil = fw.load_vigilance_series(DATA_DIR / "aude_vigilance_2010_2018.csv")
    scenario = fw.build_historical_scenario(
        full_rain, full_vigil, fw.NoisyForecast(seed=20181014), name="aude-2010-2018"
    )
    scenario.save(DATA_DIR / "aude_2010_2018.scenario.json")

    oct_rain = fw.load_rain_series(DATA_DIR / "aude_rain_2018_10.csv")
    oct_vigil = fw.load_vigilance_series(DATA_DIR / "aude_vigilance_2018_10.csv")
    october_scenario = fw.build_historical_scenario(
        oct_rain, oct_vigil, fw.NoisyForecast(seed=20181014), name="aude-2018-10"
    )
    october_scenario.save(DATA_DIR / "aude_2018_10.scenario.json")

    demo = fw.generate_pedagogical_scenario(
        seed=7,
        config=fw.GeneratorConfig(
            episodes=(
                ("quiet", 4),
                ("showers", 2),
                ("false_alarm_cluster", 3),
                ("quiet", 2),
                ("surprise_flood", 1),
                ("heavy_storm", 1),
                ("quiet", 1),
            ),
            name="teaching-demo",
        ),
    )
    demo.save(DATA_DIR / "teaching_demo.scenario.json")

    (DATA_DIR / "default.config.yaml").write_text(
        """\
schema: floodwatch-config/1
population:
  size: 200
  trust_init: {uniform: [0.4, 0.9]}
  risk_aversion_threshold: {uniform: [25.0, 90.0]}
  memory_depth: {uniform: [2, 6]}
  strategy_weights:
    optimistic: 0.25
    pessimistic: 0.25
    rational: 0.25
    short_memory: 0.25
  seed: 42
trust:
  gain_slight: 0.02
  loss_false_alarm_rate: 0.15
  loss_missed_rate: 0.40
  surprise_tolerance_mm: 10.0
  severity_scale_mm: 100.0
return_after_quiet_days: 2
""",
        encoding="utf-8",
    )

    print(f"rain days: {len(rain)} ({rain[0][0]} .. {rain[-1][0]})")
    print(f"vigilance bulletins: {len(vigilance)}")
    print(f"scenario days: {len(scenario)}; october: {len(october_scenario)}; demo: {len(demo)}")


if __name__ == "__main__":
    main()
