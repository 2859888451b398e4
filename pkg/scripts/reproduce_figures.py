"""Write every analytic figure series (plus the ring sweep and hetero table) to a directory."""

import argparse
from pathlib import Path

from ringcluster import report
from ringcluster.planner import hetero_deployment, network_plan, ring_sweep
from ringcluster.radio import RadioParams
from ringcluster.rings import NetworkConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("figures"))
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--rings-max", type=int, default=20)
    args = ap.parse_args()

    cfg, radio = NetworkConfig(), RadioParams()
    plan = network_plan(cfg, radio)
    series = report.analytic_series(plan) + [
        report.sweep_series(ring_sweep(cfg, radio, args.rings_max)),
        report.totals_series(plan),
        report.hetero_series(hetero_deployment(cfg, radio)),
    ]
    args.out.mkdir(parents=True, exist_ok=True)
    for s in series:
        path = report.emit_series(s, args.format, args.out / f"{s.figure}.{args.format}")
        print(path)


if __name__ == "__main__":
    main()
