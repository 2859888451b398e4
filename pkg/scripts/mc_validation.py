"""Monte Carlo checks: distance moments against closed forms, then trial-mean ring energy vs. the planner.

Prints one line per ring; the simulated/analytic ratio column shows how far the
circular-cluster approximation is from a random deployment.
"""

import argparse

from ringcluster import simulator as sim
from ringcluster.planner import ModelKind, k_opt, network_plan
from ringcluster.radio import RadioParams
from ringcluster.rings import NetworkConfig, mean_quad_dist_to_bs, mean_sq_dist_to_head


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=10**6)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--policy", choices=sim.POLICIES, default=sim.NEAREST_IN_RING)
    ap.add_argument("--branch", choices=sim.BRANCH_MODES, default=sim.PAPER_FAITHFUL)
    ap.add_argument("--workers", type=int, default=4)
    args = ap.parse_args()

    cfg, radio = NetworkConfig(), RadioParams()
    ks = [k_opt(cfg, radio, i)[1] for i in range(cfg.ring_count)]
    est = sim.estimate_moments(cfg, args.samples, args.seed, head_counts=ks)
    print("ring  z2_emp/closed  z2_dev_se  y4_emp/closed  y4_dev_se")
    for ring, k in zip(cfg.rings(), ks):
        i = ring.index
        z2, y4 = mean_sq_dist_to_head(ring, k), mean_quad_dist_to_bs(ring)
        print(f"{ring.label:>4}  {est.z2_mean[i] / z2:13.4f}  {(est.z2_mean[i] - z2) / est.z2_se[i]:9.2f}"
              f"  {est.y4_mean[i] / y4:13.4f}  {(est.y4_mean[i] - y4) / est.y4_se[i]:9.2f}")

    plan = network_plan(cfg, radio)
    for model in (ModelKind.UEPEM, ModelKind.EPEM):
        stats = sim.run_trials(cfg, radio, model, args.trials, args.seed, args.policy, args.branch, args.workers)
        print(f"\n{model.name} ({args.trials} trials, {args.policy}, {args.branch})")
        print("ring  sim_total_j   analytic_j   ratio   heads   fallback")
        for i, rp in enumerate(plan.rings[model]):
            m = stats.mean
            print(f"{i + 1:>4}  {m['total'][i]:11.6f}  {rp.e_ring_total_per_round:11.6f}"
                  f"  {m['total'][i] / rp.e_ring_total_per_round:6.3f}  {m['heads'][i]:6.2f}  {m['fallback'][i]:8.2f}")


if __name__ == "__main__":
    main()
