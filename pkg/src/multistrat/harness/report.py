"""CSV output for the suites (17 significant digits, ``\\n`` line ends)."""
from __future__ import annotations

import os
from pathlib import Path


def _g(x: float) -> str:
    return f"{x:.17g}"


def summary_path(out: str) -> str:
    root, ext = os.path.splitext(out)
    return f"{root}_summary{ext or '.csv'}"


def write_convergence_csv(report, out: str, record_timing: bool = False) -> tuple[str, str]:
    """Write per-row and summary files; returns both paths.

    ``runtime_ms`` is written as 0 unless ``record_timing`` is set, so that
    identical configs give byte-identical files.
    """
    lines = ["m,path_index,sup_error,terminal_error,runtime_ms"]
    for r in report.rows:
        ms = r.runtime_ms if record_timing else 0
        lines.append(f"{r.m},{r.path_index},{_g(r.sup_error)},{_g(r.terminal_error)},{ms}")
    lines.append(f"# master_seed={report.master_seed} stream_index=path_index")
    Path(out).write_text("\n".join(lines) + "\n")

    slines = ["m,median_sup_error,mean_sup_error"]
    for m, med, mean in report.summary:
        slines.append(f"{m},{_g(med)},{_g(mean)}")
    rate = "nan" if report.fitted_rate is None else _g(report.fitted_rate)
    slines.append(f"# fitted_rate={rate}")
    spath = summary_path(out)
    Path(spath).write_text("\n".join(slines) + "\n")
    return out, spath


def write_transport_csv(report, out: str, master_seed: int) -> str:
    lines = ["m,t,statistic,empirical,target,standard_error,z_score"]
    for s in report.stats:
        lines.append(",".join([_g(s.m), _g(s.t), s.statistic, _g(s.empirical), _g(s.target), _g(s.standard_error), _g(s.z)]))
    lines.append(f"# master_seed={master_seed} stream_index=m_index*num_paths+path_index")
    lines.append(f"# passed={int(report.passed)}")
    Path(out).write_text("\n".join(lines) + "\n")
    return out
