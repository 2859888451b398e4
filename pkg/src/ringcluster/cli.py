"""``ringcluster`` command line.

    ringcluster plan|analytic|sweep|simulate|validate-moments|hetero|render [options]

Series go to ``--out DIR`` as ``<figure>.<format>`` files, or to stdout when
``--out`` is omitted.  ``render`` takes ``--out`` as the SVG file path.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import planner, report, simulator
from .planner import ModelKind
from .radio import RadioParams, load_radio_file
from .rings import NetworkConfig, mean_quad_dist_to_bs, mean_sq_dist_to_head

log = logging.getLogger("ringcluster")

COMMANDS = ("plan", "analytic", "sweep", "simulate", "validate-moments", "hetero", "render")
_DEFAULTS = NetworkConfig()


@dataclass(frozen=True)
class RunConfig:
    command: str
    nodes: int = _DEFAULTS.node_count
    area_m2: float = _DEFAULTS.area
    rings: int = _DEFAULTS.ring_count
    epem_p: float = _DEFAULTS.epem_probability
    radio: Path | None = None
    out: Path | None = None
    format: str = "csv"
    seed: int = 1
    trials: int = 200
    samples: int = 1_000_000
    policy: str = simulator.NEAREST_GLOBAL
    branch_mode: str = simulator.PAPER_FAITHFUL
    model: str = "both"
    rings_min: int = 1
    rings_max: int = 20
    workers: int = 1

    def network(self) -> NetworkConfig:
        return NetworkConfig(self.nodes, self.area_m2, self.rings, self.epem_p)

    def radio_params(self) -> RadioParams:
        return load_radio_file(self.radio) if self.radio else RadioParams()

    def models(self) -> tuple[ModelKind, ...]:
        return planner.MODELS if self.model == "both" else (ModelKind(self.model),)


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {value}")
    return value


def _probability(text):
    value = float(text)
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError(f"must be in (0, 1], got {value}")
    return value


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


# argparse reports the function name for ValueError; give them readable ones
_positive_int.__name__ = "positive integer"
_positive_float.__name__ = "positive number"
_probability.__name__ = "probability"
_nonneg_int.__name__ = "non-negative integer"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("network")
    g.add_argument("--nodes", type=_positive_int, default=_DEFAULTS.node_count, help="sensor count N")
    g.add_argument("--area-m2", type=_positive_float, default=_DEFAULTS.area, help="field area in m^2")
    g.add_argument("--rings", type=_positive_int, default=_DEFAULTS.ring_count, help="ring count M")
    g.add_argument("--epem-p", type=_probability, default=_DEFAULTS.epem_probability,
                   help="uniform election probability for EPEM")
    g.add_argument("--radio", type=Path, help="key=value radio parameter file")
    o = common.add_argument_group("output")
    o.add_argument("--out", type=Path, help="output directory (render: SVG file)")
    o.add_argument("--format", choices=("csv", "json"), default="csv")
    s = common.add_argument_group("simulation")
    s.add_argument("--seed", type=_nonneg_int, default=1)
    s.add_argument("--trials", type=_positive_int, default=200)
    s.add_argument("--samples", type=_positive_int, default=1_000_000)
    s.add_argument("--policy", choices=("nearest-global", "nearest-in-ring"), default="nearest-global")
    s.add_argument("--branch", choices=("paper-faithful", "thresholded"), default="paper-faithful")
    s.add_argument("--model", choices=("both", "uepem", "epem"), default="both")
    s.add_argument("--workers", type=_positive_int, default=1, help="parallel trial processes")
    w = common.add_argument_group("sweep")
    w.add_argument("--rings-min", type=_positive_int, default=1)
    w.add_argument("--rings-max", type=_positive_int, default=20)

    parser = argparse.ArgumentParser(
        prog="ringcluster",
        description="Plan and simulate ring-partitioned cluster-head election (UEPEM vs EPEM).",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    helps = {
        "plan": "per-ring head counts, probabilities and cluster geometry",
        "analytic": "figure data for the per-ring energy comparison",
        "sweep": "total energy versus ring count (fig10)",
        "simulate": "Monte Carlo rounds compared with the analytic totals",
        "validate-moments": "sample distance moments against their closed forms",
        "hetero": "category-I node counts for a static heterogeneous deployment",
        "render": "SVG of one realized tessellation",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def parse_args(argv=None) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.rings_min > ns.rings_max:
        parser.error(f"argument --rings-min: {ns.rings_min} exceeds --rings-max {ns.rings_max}")
    return RunConfig(
        command=ns.command,
        nodes=ns.nodes,
        area_m2=ns.area_m2,
        rings=ns.rings,
        epem_p=ns.epem_p,
        radio=ns.radio,
        out=ns.out,
        format=ns.format,
        seed=ns.seed,
        trials=ns.trials,
        samples=ns.samples,
        policy=ns.policy.replace("-", "_"),
        branch_mode=ns.branch.replace("-", "_"),
        model=ns.model,
        rings_min=ns.rings_min,
        rings_max=ns.rings_max,
        workers=ns.workers,
    )


def _emit(run: RunConfig, series_list, stdout) -> None:
    if run.out is None:
        for n, series in enumerate(series_list):
            if n:
                stdout.write("\n")
            if len(series_list) > 1:
                stdout.write(f"# {series.figure}\n")
            stdout.write(report.render_series(series, run.format))
        return
    run.out.mkdir(parents=True, exist_ok=True)
    for series in series_list:
        path = report.emit_series(series, run.format, run.out / f"{series.figure}.{run.format}")
        log.info("wrote %s", path)


def _validate_moments(run: RunConfig, cfg: NetworkConfig, radio: RadioParams):
    ks = [planner.k_opt(cfg, radio, i)[1] for i in range(cfg.ring_count)]
    est = simulator.estimate_moments(cfg, run.samples, run.seed, head_counts=ks)
    rings = cfg.rings()
    z2 = np.array([mean_sq_dist_to_head(r, k) for r, k in zip(rings, ks)])
    y4 = np.array([mean_quad_dist_to_bs(r) for r in rings])
    ok = bool(np.all(np.abs(est.z2_mean - z2) <= 3 * est.z2_se) and np.all(np.abs(est.y4_mean - y4) <= 3 * est.y4_se))
    return report.moments_series(est, z2, y4), ok


def command_dispatch(run: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    cfg, radio = run.network(), run.radio_params()
    status = 0

    if run.command == "render":
        model = run.models()[0]
        dep = simulator.deploy(cfg, run.seed)
        heads = simulator.elect_heads(dep, simulator.ring_probabilities(cfg, radio, model), run.seed)
        assignment = simulator.assign_members(dep, heads, run.policy)
        path = report.render_svg(dep, assignment, run.out or Path("tessellation.svg"))
        log.info("wrote %s", path)
        return 0

    if run.command == "plan":
        plan = planner.network_plan(cfg, radio)
        series = [report.plan_series(plan), report.totals_series(plan)]
    elif run.command == "analytic":
        plan = planner.network_plan(cfg, radio)
        series = report.analytic_series(plan) + [report.totals_series(plan)]
    elif run.command == "sweep":
        series = [report.sweep_series(planner.ring_sweep(cfg, radio, run.rings_max, run.rings_min))]
    elif run.command == "hetero":
        series = [report.hetero_series(planner.hetero_deployment(cfg, radio))]
    elif run.command == "simulate":
        plan = planner.network_plan(cfg, radio)
        series = []
        for model in run.models():
            stats = simulator.run_trials(cfg, radio, model, run.trials, run.seed,
                                         run.policy, run.branch_mode, workers=run.workers)
            series.append(report.simulation_series(model, stats, plan, f"simulate_{model.value}"))
    elif run.command == "validate-moments":
        moments, ok = _validate_moments(run, cfg, radio)
        series = [moments]
        if not ok:
            print("ringcluster: some moment estimates fall outside 3 standard errors", file=sys.stderr)
            status = 1
    else:  # parse_args restricts commands
        raise ValueError(f"unknown command {run.command!r}")

    _emit(run, series, stdout)
    return status


def main(argv=None) -> int:
    run = parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    try:
        return command_dispatch(run)
    except (ValueError, OSError) as exc:
        print(f"ringcluster: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
