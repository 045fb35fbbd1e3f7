"""Report files: ``report.json``, ``zeros.csv``, ``bounds.csv`` and ``plot.svg``.

CSV files follow RFC 4180 (comma separated, CRLF line ends, UTF-8) with
reals written to 17 significant digits so that they round-trip.  Nothing
time- or host-dependent is written, so repeated runs give identical bytes.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .hyperbolic import hyperbolic_disc_circle
from .verifiers import _jsonable, zero_critical_bound

SCHEMA_VERSION = 1

ZEROS_COLUMNS = ("index", "re", "im", "multiplicity", "functional")
BOUNDS_COLUMNS = ("kind", "i", "j", "re1", "im1", "re2", "im2", "distance", "bound", "margin")


def fmt(x):
    """17 significant digits; ``nan``/``inf`` spelled as Python does."""
    x = float(x)
    if not math.isfinite(x):
        return repr(x)
    return format(x, ".17g")


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def zeros_csv(result):
    rows = [(k, fmt(z.real), fmt(z.imag), m, fmt(v)) for k, z, m, v in result.zero_rows()]
    return _csv_text(ZEROS_COLUMNS, rows)


def bounds_csv(result):
    rows = [
        (kind, i, j, fmt(z1.real), fmt(z1.imag), fmt(z2.real), fmt(z2.imag), fmt(d), fmt(b), fmt(m))
        for kind, i, j, z1, z2, d, b, m in result.bound_rows()
    ]
    return _csv_text(BOUNDS_COLUMNS, rows)


def _scalar_metadata(meta):
    out = {}
    for k, v in meta.items():
        if isinstance(v, (bool, int, float, complex, str, np.number)):
            out[k] = v
        elif isinstance(v, np.ndarray) and v.ndim == 1 and v.size <= 1000:
            out[k] = v
        elif isinstance(v, (list, tuple)) and all(isinstance(x, (int, float, complex)) for x in v):
            out[k] = list(v)
    return out


def report_dict(result):
    cfg = result.config
    case = result.case
    meta = {}
    if case.bundle is not None:
        meta.update(_scalar_metadata(case.bundle.metadata))
    meta.update(_scalar_metadata(case.extra))
    if case.M is not None:
        meta["M"] = case.M
        meta["K"] = case.K
    g = cfg.grid
    return _jsonable({
        "schema_version": SCHEMA_VERSION,
        "scenario": cfg.scenario,
        "parameters": cfg.parameters,
        "grid": {"k_max": g.k_max, "angle_base": g.angle_base, "angle_cap": g.angle_cap,
                 "substeps": g.substeps, "r_min": g.r_min},
        "checks": list(cfg.checks),
        "summary": {
            "passed": result.passed,
            "failed": result.failed,
            "zeros": int(np.size(case.zeros)),
            "critical_points": int(np.size(case.criticals)),
            "search_radius": case.search_radius,
        },
        "metadata": meta,
        "reports": [r.to_dict() for r in result.reports],
    })


def report_json(result):
    return json.dumps(report_dict(result), indent=2, sort_keys=True, allow_nan=False) + "\n"


def plot_svg(result, size=640):
    """Disc, zeros (dots), critical points (crosses) and their exclusion circles (dashed)."""
    case = result.case
    half = size / 2
    scale = half / 1.08

    def X(z):
        return f"{half + scale * z.real:.3f}"

    def Y(z):
        return f"{half - scale * z.imag:.3f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<circle cx="{half:.3f}" cy="{half:.3f}" r="{scale:.3f}" fill="none" stroke="black" stroke-width="1"/>',
    ]
    if case.psi is not None:
        for a in np.asarray(case.criticals, dtype=complex):
            rad = zero_critical_bound(case.psi, case.M, a, case.K)
            c, r = hyperbolic_disc_circle(a, rad)
            out.append(
                f'<circle cx="{X(c)}" cy="{Y(c)}" r="{scale * r:.3f}" fill="none" stroke="#4a7fb5" '
                f'stroke-width="0.8" stroke-dasharray="4 3"/>'
            )
    for z in np.asarray(case.zeros, dtype=complex):
        out.append(f'<circle cx="{X(z)}" cy="{Y(z)}" r="3" fill="#b5402a"/>')
    for a in np.asarray(case.criticals, dtype=complex):
        x, y = float(X(a)), float(Y(a))
        out.append(
            f'<path d="M{x - 3:.3f},{y - 3:.3f} L{x + 3:.3f},{y + 3:.3f} M{x - 3:.3f},{y + 3:.3f} '
            f'L{x + 3:.3f},{y - 3:.3f}" stroke="#1f3b57" stroke-width="1.2"/>'
        )
    out.append(f'<text x="8" y="18" font-family="monospace" font-size="12">{result.config.scenario}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_outputs(result, output_dir=None):
    """Write all report files; returns the list of paths."""
    d = Path(output_dir or result.config.output_dir)
    d.mkdir(parents=True, exist_ok=True)
    files = {
        "report.json": report_json(result),
        "zeros.csv": zeros_csv(result),
        "bounds.csv": bounds_csv(result),
    }
    if result.config.plot:
        files["plot.svg"] = plot_svg(result)
    paths = []
    for name, text in files.items():
        p = d / name
        with open(p, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        paths.append(p)
    return paths
