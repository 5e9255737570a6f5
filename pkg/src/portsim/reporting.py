"""Document emitters: KPI tables, berth plan, replication summaries, deltas.

Two formats are produced for each report: a sectioned comma-delimited table
mirroring the four statistics tables (quay cranes, yard cranes, yard blocks,
trucks) plus run-level figures, and a structured JSON tree carrying every KPI
field with the run metadata.  Output is byte-stable: fixed column orders,
fixed float formatting, sorted JSON keys, and no wall-clock timestamps.
"""

from __future__ import annotations

import json
from statistics import mean

from .engine import BerthInterval
from .kernel import TICKS_PER_MINUTE
from .kpi import KpiReport

_DAY_NAMES = ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")
_GRID_METERS_PER_COL = 10.0
_GRID_HOURS_PER_ROW = 4.0
_SHIP_MARKS = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789"


def _fmt(value: float, places: int = 2) -> str:
    return f"{value:.{places}f}"


def emit_report_json(report: KpiReport) -> str:
    return json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"


def emit_report_csv(report: KpiReport) -> str:
    lines: list[str] = []
    lines.append("# run")
    lines.append("scenario,schema_version,seed,horizon_hours")
    lines.append(f"{report.scenario_name},{report.schema_version},"
                 f"{report.seed},{_fmt(report.horizon_hours, 1)}")
    lines.append("")

    lines.append("# quay_cranes")
    lines.append("crane,working_pct,net_moves_per_hour,throughput")
    for crane in report.quay_cranes:
        lines.append(f"{crane.crane_id},{_fmt(crane.working_pct, 1)},"
                     f"{_fmt(crane.net_moves_per_hour, 1)},{crane.throughput}")
    lines.append(f"Total,,,{report.quay_total_throughput}")
    lines.append("")

    lines.append("# quay_crane_waiting")
    lines.append("crane,waiting_total_min,waiting_mean_min,waiting_episodes")
    for crane in report.quay_cranes:
        lines.append(f"{crane.crane_id},{_fmt(crane.waiting_total_min, 1)},"
                     f"{_fmt(crane.waiting_mean_min, 2)},{crane.waiting_episodes}")
    lines.append("")

    lines.append("# yard_cranes")
    lines.append("crane,working_pct,net_moves_per_hour")
    for row in report.yard_cranes:
        lines.append(f"{row.name},{_fmt(row.working_pct, 1)},"
                     f"{_fmt(row.net_moves_per_hour, 1)}")
    lines.append("")

    lines.append("# yard_blocks")
    lines.append("category,average_transactions")
    for category, average in report.category_mean_transactions:
        lines.append(f"{category.capitalize()} containers,{_fmt(average, 1)}")
    lines.append("")
    lines.append("# yard_blocks_detail")
    lines.append("block,category,transactions,final_occupancy")
    for block in report.blocks:
        lines.append(f"{block.block_id},{block.category},"
                     f"{block.transactions},{block.final_occupancy}")
    lines.append("")

    lines.append("# trucks")
    lines.append("trucks,throughput")
    lines.append(f"Terminal Tractors,{report.truck_throughput}")
    lines.append("")

    lines.append("# terminal")
    lines.append("metric,value")
    terminal_rows = [
        ("weekly_teu", _fmt(report.weekly_teu, 1)),
        ("annual_teu", _fmt(report.annual_teu, 1)),
        ("teu_moved", str(report.teu_moved)),
        ("moves_discharge", str(report.moves_discharge)),
        ("moves_load", str(report.moves_load)),
        ("berth_occupancy_pct", _fmt(report.berth_occupancy_pct, 2)),
        ("berth_time_occupancy_pct", _fmt(report.berth_time_occupancy_pct, 2)),
        ("ships_berthed", str(report.ships.ships_berthed)),
        ("ships_departed", str(report.ships.ships_departed)),
        ("mean_service_h", _fmt(report.ships.mean_service_h, 2)),
        ("max_service_h", _fmt(report.ships.max_service_h, 2)),
        ("mean_turnaround_h", _fmt(report.ships.mean_turnaround_h, 2)),
        ("max_turnaround_h", _fmt(report.ships.max_turnaround_h, 2)),
        ("truck_mean_utilization_pct", _fmt(report.truck_mean_utilization_pct, 2)),
        ("truck_queue_requests", str(report.truck_queue.requests)),
        ("truck_queue_mean_wait_min", _fmt(report.truck_queue.mean_wait_min, 3)),
        ("truck_queue_time_avg_len", _fmt(report.truck_queue.time_avg_queue_len, 3)),
        ("overflow_events", str(report.overflow_events)),
    ]
    for key, value in terminal_rows:
        lines.append(f"{key},{value}")
    lines.append("")
    return "\n".join(lines)


def emit_report(report: KpiReport, fmt: str) -> str:
    if fmt == "csv":
        return emit_report_csv(report)
    if fmt == "json":
        return emit_report_json(report)
    raise ValueError(f"unknown report format {fmt!r} (known: csv, json)")


# --- berth plan -------------------------------------------------------------

def emit_berth_plan_json(history: list[BerthInterval], horizon_ticks: int,
                         weekly_teu: float) -> str:
    entries = []
    for entry in sorted(history, key=lambda e: (e.berthed_at, e.ship_id)):
        entries.append({
            "ship_id": entry.ship_id,
            "position_m": entry.position,
            "length_m": entry.length_m,
            "berthed_min": entry.berthed_at / TICKS_PER_MINUTE,
            "departed_min": (entry.departed_at / TICKS_PER_MINUTE
                             if entry.departed_at is not None else None),
        })
    doc = {
        "horizon_min": horizon_ticks / TICKS_PER_MINUTE,
        "weekly_teu": weekly_teu,
        "entries": entries,
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def emit_berth_plan_text(history: list[BerthInterval], quay_length_m: float,
                         horizon_ticks: int, weekly_teu: float) -> str:
    """Text grid: rows are time buckets Monday to Sunday, columns quay metres."""
    columns = max(1, round(quay_length_m / _GRID_METERS_PER_COL))
    row_ticks = round(_GRID_HOURS_PER_ROW * 60 * TICKS_PER_MINUTE)
    rows = max(1, -(-horizon_ticks // row_ticks))

    grid = [["."] * columns for _ in range(rows)]
    ordered = sorted(history, key=lambda e: (e.berthed_at, e.ship_id))
    legend: list[tuple[str, str]] = []
    for index, entry in enumerate(ordered):
        mark = _SHIP_MARKS[index % len(_SHIP_MARKS)]
        legend.append((mark, entry.ship_id))
        end = entry.departed_at if entry.departed_at is not None else horizon_ticks
        end = min(end, horizon_ticks)
        row_start = entry.berthed_at // row_ticks
        row_end = max(row_start, -(-end // row_ticks) - 1)
        col_start = int(entry.position // _GRID_METERS_PER_COL)
        col_end = int((entry.position + entry.length_m - 1e-9) // _GRID_METERS_PER_COL)
        # ships can share a coarse cell sequentially; the later one wins
        for row in range(row_start, min(row_end, rows - 1) + 1):
            for col in range(col_start, min(col_end, columns - 1) + 1):
                grid[row][col] = mark

    lines = [
        f"berth plan: quay 0..{quay_length_m:g} m "
        f"({_GRID_METERS_PER_COL:g} m/col), "
        f"{_GRID_HOURS_PER_ROW:g} h/row, weekly TEU {weekly_teu:.1f}",
        "",
    ]
    header = "          " + "".join(
        str((col * int(_GRID_METERS_PER_COL)) // 100 % 10) for col in range(columns))
    lines.append(header)
    for row in range(rows):
        start_h = row * _GRID_HOURS_PER_ROW
        day = _DAY_NAMES[int(start_h // 24) % 7]
        label = f"{day} {int(start_h % 24):02d}:00"
        lines.append(f"{label:<10}" + "".join(grid[row]))
    if legend:
        lines.append("")
        lines.append("ships: " + ", ".join(f"{mark}={sid}" for mark, sid in legend))
    lines.append("")
    return "\n".join(lines)


# --- replication summary ----------------------------------------------------

def summarize(reports: list[KpiReport]) -> dict:
    """Mean / min / max of each scalar KPI over replications."""
    scalars = [report.scalar_summary() for report in reports]
    keys = list(scalars[0]) if scalars else []
    summary = {
        "replications": len(reports),
        "seeds": [report.seed for report in reports],
        "kpis": {
            key: {
                "mean": mean(s[key] for s in scalars),
                "min": min(s[key] for s in scalars),
                "max": max(s[key] for s in scalars),
            }
            for key in keys
        },
    }
    return summary


def emit_summary_json(summary: dict) -> str:
    return json.dumps(summary, sort_keys=True, indent=2) + "\n"


def emit_summary_csv(summary: dict) -> str:
    lines = ["kpi,mean,min,max"]
    for key in sorted(summary["kpis"]):
        row = summary["kpis"][key]
        lines.append(f"{key},{_fmt(row['mean'], 4)},{_fmt(row['min'], 4)},"
                     f"{_fmt(row['max'], 4)}")
    lines.append("")
    return "\n".join(lines)


# --- paired comparison ------------------------------------------------------

def comparison_to_dict(comparison) -> dict:
    return {
        "seeds": list(comparison.seeds),
        "mean_delta": comparison.mean_delta,
        "per_seed": [
            {"seed": seed, "a": a, "b": b, "delta": d}
            for seed, a, b, d in zip(comparison.seeds, comparison.kpis_a,
                                     comparison.kpis_b, comparison.deltas)
        ],
    }


def emit_comparison_json(comparison) -> str:
    return json.dumps(comparison_to_dict(comparison), sort_keys=True, indent=2) + "\n"


def emit_comparison_csv(comparison) -> str:
    lines = ["kpi,mean_delta"]
    for key in sorted(comparison.mean_delta):
        lines.append(f"{key},{_fmt(comparison.mean_delta[key], 4)}")
    lines.append("")
    lines.append("seed,kpi,a,b,delta")
    for seed, a, b, delta in zip(comparison.seeds, comparison.kpis_a,
                                 comparison.kpis_b, comparison.deltas):
        for key in sorted(delta):
            lines.append(f"{seed},{key},{_fmt(a[key], 4)},{_fmt(b[key], 4)},"
                         f"{_fmt(delta[key], 4)}")
    lines.append("")
    return "\n".join(lines)
