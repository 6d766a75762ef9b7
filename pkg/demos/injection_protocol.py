#!/usr/bin/env python3
"""Walk through the L-level injection protocol at three relaxation regimes.

p_L = 1: the shuttled electron always lands on the target level; the
second attempt is Coulomb blocked and the single-transfer current
signature confirms success.  p_L = 0: six electrons pour into the lower
levels, the multi-electron signature triggers a drain flush and a retry.
p_L = 0.5: the retry count follows a geometric law with mean 1/p - 1.
"""

from lvalley.injection import (
    DotSpec, StochasticParams, monte_carlo, run_protocol,
)


def trace(p_l, seed=11, max_retries=6):
    spec = DotSpec.default()
    rep = run_protocol(spec, StochasticParams(p_l=p_l, rng_seed=seed),
                       max_retries=max_retries)
    print(f"p_L = {p_l}: success={rep.success} retries={rep.retries} "
          f"transfers/pass={list(rep.transfers_per_pass)}")
    for ev in rep.events[:24]:
        arrow = f"{ev.dot_from}->{ev.dot_to}" if ev.dot_to else ev.dot_from
        print(f"    step {ev.time_step:3d}  {ev.kind:22s} {arrow:8s} "
              f"n={ev.n_moved}" + (f"  ({ev.note})" if ev.note else ""))
    if len(rep.events) > 24:
        print(f"    ... {len(rep.events) - 24} more events")
    print()


def main():
    trace(1.0)
    trace(0.0, max_retries=1)

    spec = DotSpec.default()
    stats = monte_carlo(spec, StochasticParams(p_l=0.5, rng_seed=2024),
                        max_retries=20, trials=4000)
    print(f"p_L = 0.5, {stats.trials} independent trials:")
    print(f"  success rate {stats.success_rate:.4f} (budget 21 passes)")
    print(f"  mean retries {stats.mean_retries:.3f}  (geometric law: 1/0.5 - 1 = 1)")


if __name__ == "__main__":
    main()
