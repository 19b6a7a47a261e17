"""Report emission: machine JSON, delimited ratio tables, figures."""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .checks import CheckReport

__all__ = ["emit_report", "report_to_dict"]


def report_to_dict(report: CheckReport) -> dict:
    d = asdict(report)
    d["empirical_constant"] = float(d["empirical_constant"])
    return d


def _ratio_figure(report: CheckReport, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    xs = range(len(report.ratios))
    ax.plot(xs, report.ratios, "o", ms=3.5, color="#1f6fb0",
            label="per-case ratio")
    ax.axhline(report.declared_bound, color="#b03030", lw=1.2, ls="--",
               label="declared bound")
    span = max(report.ratios, default=1.0)
    if span > 0 and span / max(min(report.ratios, default=1.0), 1e-12) > 50:
        ax.set_yscale("log")
    ax.set_xlabel("case")
    ax.set_ylabel("ratio")
    status = "pass" if report.passed else "FAIL"
    ax.set_title(f"{report.check_id}: c = {report.empirical_constant:.4g} "
                 f"({status})")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def emit_report(reports: list, out_dir: str, figures: bool = True) -> dict:
    """Write reports.json, ratios.csv and one figure per check.

    The JSON payload is deterministic for a fixed seed/config except for
    the top-level timestamp field.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    payload = {
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
        "all_passed": all(r.passed for r in reports),
        "checks": [report_to_dict(r) for r in reports],
    }
    json_path = out / "reports.json"
    with open(json_path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)

    csv_path = out / "ratios.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["check_id", "case_index", "ratio",
                         "declared_bound", "direction", "passed"])
        for r in reports:
            for i, ratio in enumerate(r.ratios):
                writer.writerow([r.check_id, i, repr(ratio),
                                 repr(r.declared_bound), r.direction,
                                 r.passed])

    files = {"json": str(json_path), "csv": str(csv_path), "figures": []}
    if figures:
        fig_dir = out / "figures"
        fig_dir.mkdir(exist_ok=True)
        for r in reports:
            if not r.ratios:
                continue
            fp = fig_dir / f"{r.check_id}.png"
            _ratio_figure(r, fp)
            files["figures"].append(str(fp))
    return files
