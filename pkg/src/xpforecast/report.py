"""Report, CSV and comparison-table emission."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .project import ProjectPlan, ProjectResult, assess

CURVE_HEADER = ("day", "completed_story_points")
SUMMARY_NODES = ("team_velocity", "workload", "estimated_days", "estimated_kloc",
                 "defected_story_points")

# Table 5 of the source publication: (experiment, real project)
PAPER_TABLE = {
    "repo": {"days": (65.0, 60.0), "defected_story_points": (200.0, 319.0), "kloc": (8.6, 9.8)},
    "abrahamsson": {"days": (11.0, 12.0), "defected_story_points": (11.0, 9.0),
                    "kloc": (1.3, 4.2)},
}
COMPARISON_ROWS = (("days", "Number of days"),
                   ("defected_story_points", "Defected story points"),
                   ("kloc", "Lines of code (KLOC)"))


def report_dict(plan: ProjectPlan, result: ProjectResult, backend: str | None = None) -> dict:
    releases = []
    for k, outcome in enumerate(result.per_release):
        releases.append({
            "release": k + 1,
            "added_story_points": outcome.inputs.added_story_points,
            "project_working_days": outcome.inputs.project_working_days,
            "nodes": {node: outcome.summary(node).as_dict() for node in SUMMARY_NODES},
        })
    out = {
        "project": plan.name,
        "samples": result.n,
        "seed": result.seed,
        "deterministic": result.deterministic,
        "team_size": plan.team.team_size,
        "releases": releases,
        "carried_points": list(result.carried_points),
        "total_days_mean_coupled": result.mean_coupled_days,
        "total_days_sample_summed": result.total_days.as_dict(),
        "total_defected_story_points": result.total_defected_story_points,
        "total_kloc": result.total_kloc,
        "deadline_days": plan.deadline_days,
        "success_probability": result.success_probability,
        "verdict": assess(result, plan).value,
    }
    if backend is not None:
        out["backend"] = backend
    return out


def format_report(data: dict) -> str:
    lines = [f"Project: {data['project']}",
             f"Mode: {'deterministic (means)' if data['deterministic'] else 'Monte Carlo'}"
             f"  samples={data['samples']}  seed={data['seed']}  team={data['team_size']}"]
    for rel in data["releases"]:
        lines.append("")
        lines.append(f"Release {rel['release']}  (carried in {rel['added_story_points']:.3f} SP,"
                     f" working days so far {rel['project_working_days']:.3f})")
        lines.append(f"  {'node':<24}{'mean':>12}{'sd':>12}{'p5':>12}{'p50':>12}{'p95':>12}")
        for node, s in rel["nodes"].items():
            lines.append(f"  {node:<24}{s['mean']:>12.4f}{s['sd']:>12.4f}{s['p5']:>12.4f}"
                         f"{s['p50']:>12.4f}{s['p95']:>12.4f}")
    total = data["total_days_sample_summed"]
    lines += [
        "",
        f"Total days (sum of release means): {data['total_days_mean_coupled']:.4f}",
        f"Total days (per-draw sum): mean {total['mean']:.4f}  p5 {total['p5']:.4f}"
        f"  p50 {total['p50']:.4f}  p95 {total['p95']:.4f}",
        f"Total defected story points: {data['total_defected_story_points']:.4f}",
        f"Total KLOC: {data['total_kloc']:.4f}",
    ]
    if data["deadline_days"] is not None:
        lines.append(f"Deadline {data['deadline_days']:g} days: P(on time) = "
                     f"{data['success_probability']:.4f} -> {data['verdict']}")
    else:
        lines.append("No deadline set")
    return "\n".join(lines) + "\n"


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def samples_rows(outcome):
    columns = outcome.samples.columns()
    return columns, zip(*(outcome.samples[c].tolist() for c in columns))


def curve_csv(result: ProjectResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CURVE_HEADER)
    writer.writerows((p.day, p.completed_story_points) for p in result.curve)
    return buf.getvalue()


def write_curve(result: ProjectResult, path: Path) -> None:
    Path(path).write_text(curve_csv(result), encoding="utf-8")


def write_run(plan: ProjectPlan, result: ProjectResult, out_dir: str | Path,
              backend: str | None = None) -> list[Path]:
    """Write report.txt, report.json, curve.csv and one samples CSV per release."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    data = report_dict(plan, result, backend)
    written = [out / "report.txt", out / "report.json", out / "curve.csv"]
    written[0].write_text(format_report(data), encoding="utf-8")
    written[1].write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    write_curve(result, written[2])
    for k, outcome in enumerate(result.per_release):
        path = out / f"samples_release{k + 1}.csv"
        header, rows = samples_rows(outcome)
        _write_csv(path, header, rows)
        written.append(path)
    return written


def comparison(case: str, result: ProjectResult) -> dict:
    ours = {"days": result.mean_coupled_days,
            "defected_story_points": result.total_defected_story_points,
            "kloc": result.total_kloc}
    paper = PAPER_TABLE[case]
    return {key: {"xpforecast": ours[key], "paper_experiment": paper[key][0],
                  "paper_real": paper[key][1]} for key, _ in COMPARISON_ROWS}


def format_comparison(case: str, table: dict) -> str:
    lines = [f"Case: {case}  (paper columns are published reference values)",
             f"{'quantity':<24}{'xpforecast':>14}{'paper experiment':>18}{'paper real':>12}"]
    for key, label in COMPARISON_ROWS:
        row = table[key]
        lines.append(f"{label:<24}{row['xpforecast']:>14.3f}{row['paper_experiment']:>18g}"
                     f"{row['paper_real']:>12g}")
    return "\n".join(lines) + "\n"
