"""Figure data series, CSV/JSON emission and the tessellation SVG.

Numbers are rounded to 9 significant digits and then printed with the
shortest representation that round-trips, so files are stable byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .planner import ModelKind, NetworkPlan, SweepPoint
from .simulator import Assignment, Deployment, MomentEstimates, TrialStats

U, E = ModelKind.UEPEM, ModelKind.EPEM


@dataclass
class FigureSeries:
    figure: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)


def round9(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return int(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    if not math.isfinite(v):
        return v
    return float(f"{v:.9g}")


def format_value(v) -> str:
    v = round9(v)
    if isinstance(v, (int, str)):
        return str(v)
    return repr(v)


def series_to_csv(series: FigureSeries) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(series.columns)
    for row in series.rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def series_to_json(series: FigureSeries) -> str:
    def clean(v):
        v = round9(v)
        return None if isinstance(v, float) and not math.isfinite(v) else v

    doc = {
        "figure": series.figure,
        "columns": list(series.columns),
        "rows": [[clean(v) for v in row] for row in series.rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def render_series(series: FigureSeries, fmt: str) -> str:
    if fmt == "csv":
        return series_to_csv(series)
    if fmt == "json":
        return series_to_json(series)
    raise ValueError(f"unknown format {fmt!r}")


def atomic_write(path, text: str) -> Path:
    """Write via a temp file in the target directory, then rename over ``path``."""
    path = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        os.unlink(tmp)
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    return path


def emit_series(series: FigureSeries, fmt: str, path) -> Path:
    return atomic_write(path, render_series(series, fmt))


def _ring_series(plan: NetworkPlan, figure: str, attr: str, name: str, with_ratio: bool) -> FigureSeries:
    cols = ["ring", f"{name}_uepem", f"{name}_epem"] + (["ratio"] if with_ratio else [])
    if name.startswith(("total", "ch", "member")):
        cols[1:3] = [c + "_j" for c in cols[1:3]]
    elif name == "radius":
        cols[1:3] = [c + "_m" for c in cols[1:3]]
    s = FigureSeries(figure, cols)
    for u, e in zip(plan.rings[U], plan.rings[E]):
        a, b = getattr(u, attr), getattr(e, attr)
        s.rows.append([u.ring.label, a, b] + ([a / b] if with_ratio else []))
    return s


def analytic_series(plan: NetworkPlan) -> list[FigureSeries]:
    """Per-ring figure data (everything except the ring sweep)."""
    return [
        _ring_series(plan, "fig4", "e_ring_total_per_round", "total", False),
        _ring_series(plan, "fig5", "e_ring_total_per_round", "total", True),
        _ring_series(plan, "fig5_excl_electronics", "e_ring_excl_electronics", "total_excl_elec", True),
        _ring_series(plan, "fig6", "e_head_per_round", "ch", False),
        _ring_series(plan, "fig7", "e_head_per_round", "ch", True),
        _ring_series(plan, "fig8", "e_member_per_round", "member", False),
        _ring_series(plan, "fig9", "e_member_per_round", "member", True),
        _ring_series(plan, "fig11", "cluster_radius", "radius", True),
        _ring_series(plan, "fig12", "cluster_size", "size", True),
        _ring_series(plan, "fig13", "head_count", "heads", False),
        _ring_series(plan, "fig14", "head_count", "heads", True),
    ]


def sweep_series(points: list[SweepPoint]) -> FigureSeries:
    s = FigureSeries("fig10", ["rings", "uepem_total_j", "epem_total_j", "ratio"])
    for p in points:
        s.rows.append([p.ring_count, p.uepem_total, p.epem_total, p.ratio])
    return s


def plan_series(plan: NetworkPlan) -> FigureSeries:
    s = FigureSeries("plan", [
        "ring", "nodes_expected",
        "k_unclamped_uepem", "k_uepem", "p_uepem", "radius_uepem_m", "size_uepem",
        "k_epem", "p_epem", "radius_epem_m", "size_epem",
    ])
    for u, e in zip(plan.rings[U], plan.rings[E]):
        s.rows.append([
            u.ring.label, u.ring.expected_nodes,
            u.head_count_unclamped, u.head_count, u.election_probability, u.cluster_radius, u.cluster_size,
            e.head_count, e.election_probability, e.cluster_radius, e.cluster_size,
        ])
    return s


def totals_series(plan: NetworkPlan) -> FigureSeries:
    s = FigureSeries("totals", ["model", "total_j"])
    s.rows = [["uepem", plan.total(U)], ["epem", plan.total(E)], ["ratio", plan.total_ratio]]
    return s


def hetero_series(counts: list[tuple[int, int]]) -> FigureSeries:
    return FigureSeries("hetero", ["ring", "category1_nodes"], [list(c) for c in counts])


def moments_series(est: MomentEstimates, z2_closed, y4_closed) -> FigureSeries:
    s = FigureSeries("moments", [
        "ring", "k", "z2_empirical", "z2_se", "z2_closed", "z2_within_3se",
        "y4_empirical", "y4_se", "y4_closed", "y4_within_3se",
    ])
    for i in range(len(est.z2_mean)):
        s.rows.append([
            i + 1, est.head_counts[i],
            est.z2_mean[i], est.z2_se[i], z2_closed[i], abs(est.z2_mean[i] - z2_closed[i]) <= 3 * est.z2_se[i],
            est.y4_mean[i], est.y4_se[i], y4_closed[i], abs(est.y4_mean[i] - y4_closed[i]) <= 3 * est.y4_se[i],
        ])
    return s


def simulation_series(model: ModelKind, stats: TrialStats, plan: NetworkPlan, figure: str) -> FigureSeries:
    s = FigureSeries(figure, [
        "ring", "sim_total_mean_j", "sim_total_se_j", "analytic_total_j", "rel_delta",
        "sim_heads_mean", "sim_heads_se", "expected_heads", "fallback_mean",
    ])
    for i, rp in enumerate(plan.rings[model]):
        sim = stats.mean["total"][i]
        analytic = rp.e_ring_total_per_round
        s.rows.append([
            i + 1, sim, stats.se["total"][i], analytic, (sim - analytic) / analytic,
            stats.mean["heads"][i], stats.se["heads"][i], rp.head_count, stats.mean["fallback"][i],
        ])
    return s


# --- tessellation SVG ------------------------------------------------------

_SVG_SIZE = 800
_SVG_MARGIN = 20


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def tessellation_svg(deployment: Deployment, assignment: Assignment) -> str:
    cfg = deployment.config
    half = _SVG_SIZE / 2
    scale = (half - _SVG_MARGIN) / cfg.radius

    def px(x, y):
        # SVG y grows downward
        return _fmt(half + x * scale), _fmt(half - y * scale)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_SVG_SIZE}" '
        f'height="{_SVG_SIZE}" viewBox="0 0 {_SVG_SIZE} {_SVG_SIZE}">',
        f"<title>Cluster tessellation: {deployment.size} nodes, "
        f"{int(assignment.is_head.sum())} heads, policy {assignment.policy}</title>",
        '<g id="rings" fill="none" stroke="#bbbbbb" stroke-width="0.8">',
    ]
    for ring in cfg.rings()[:-1]:
        out.append(f'<circle class="ring" cx="{_fmt(half)}" cy="{_fmt(half)}" r="{_fmt(ring.outer_radius * scale)}"/>')
    out.append("</g>")
    out.append(f'<circle id="boundary" cx="{_fmt(half)}" cy="{_fmt(half)}" '
               f'r="{_fmt(cfg.radius * scale)}" fill="none" stroke="#000000" stroke-width="1.5"/>')

    out.append('<g id="links" stroke="#6699cc" stroke-width="0.6">')
    for n in np.flatnonzero(assignment.head_id >= 0):
        h = assignment.head_id[n]
        x1, y1 = px(deployment.x[n], deployment.y[n])
        x2, y2 = px(deployment.x[h], deployment.y[h])
        out.append(f'<line class="link" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
    out.append("</g>")

    out.append('<g id="nodes">')
    for n in range(deployment.size):
        cx, cy = px(deployment.x[n], deployment.y[n])
        if assignment.is_head[n]:
            out.append(f'<rect class="node head" x="{_fmt(float(cx) - 4)}" y="{_fmt(float(cy) - 4)}" '
                       f'width="8" height="8" fill="#cc2222"/>')
        else:
            colour = "#999999" if assignment.head_id[n] < 0 else "#224488"
            out.append(f'<circle class="node member" cx="{cx}" cy="{cy}" r="2.5" fill="{colour}"/>')
    out.append("</g>")
    out.append(f'<circle id="base-station" cx="{_fmt(half)}" cy="{_fmt(half)}" r="6" fill="#22aa22"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(deployment: Deployment, assignment: Assignment, path) -> Path:
    return atomic_write(path, tessellation_svg(deployment, assignment))
