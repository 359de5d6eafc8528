"""
How the decision delay changes the path
=======================================

Reruns each condition with delays 0.01, 0.05 and 0.07. The limit corner
never changes. Japan's own settling time grows with the delay, but the joint
time is not monotone: at 0.05 the other countries settle faster than at
0.01. From 0.05 on the delayed loop also overshoots the unit cube before
returning.
"""

from delaygame import GameParams, Scenario, delay_comparison

rows = {
    1: (30, 10, 10, 5, 10, 10, 10, 15, 10, 20),
    2: (30, 10, 10, 5, 10, 10, 40, 15, 10, 20),
    3: (30, 20, 10, 5, 10, 10, 90, 15, 10, 20),
}

for number, row in rows.items():
    result = delay_comparison(Scenario(params=GameParams(*row, tau=0.01)), taus=(0.0, 0.01, 0.05, 0.07))
    print(f"condition {number}: same limit {result.same_limit}")
    print(f"  {'tau':>5} {'limit':>10} {'T(all)':>7} {'T(x)':>7} {'T(y)':>7} {'T(z)':>7} {'overshoot':>9}")
    for r in result.rows:
        tx, ty, tz = r.player_times
        print(
            f"  {r.tau:5.2f} {str(r.limit):>10} {r.converged_at:7.3f} {tx:7.3f} {ty:7.3f} {tz:7.3f}"
            f" {r.trajectory.band_excursion:9.3f}"
        )
