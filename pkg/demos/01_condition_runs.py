"""
Three stable outcomes of the discharge game
===========================================

Integrates the delayed replicator system for the three parameter sets that
each make one corner of the strategy cube the unique ESS, and checks that
the trajectory ends where the stability analysis says it should.
"""

from delaygame import GameParams, Scenario, run_condition

# I_J, C_LC, T_RJ, C_HJ, C_DJ, C_MJ, C_SJ, C_SC, C_MC, C_II
rows = {
    "storage is cheap": (30, 10, 10, 5, 10, 10, 10, 15, 10, 20),
    "storage is dear, litigation weak": (30, 10, 10, 5, 10, 10, 40, 15, 10, 20),
    "storage is very dear, litigation strong": (30, 20, 10, 5, 10, 10, 90, 15, 10, 20),
}

for label, row in rows.items():
    scenario = Scenario(params=GameParams(*row, tau=0.01), init=(0.8, 0.5, 0.5), label=label)
    result = run_condition(scenario)
    final = result.trajectory.final
    print(f"{label}")
    print(f"  predicted ESS {result.predicted}, reached {result.reached} at t = {result.trajectory.converged_at:.3f}")
    print(f"  final state ({final.x:.2e}, {final.y:.2e}, {final.z:.6f})")

# Sample the first run to see the early transient: Japan abandons discharge
# quickly while the other countries relax their sanctions more slowly.
traj = run_condition(Scenario(params=GameParams(*rows["storage is cheap"], tau=0.01))).trajectory
for t in (0.0, 0.1, 0.25, 0.5, 1.0, 2.0):
    k = int(round(t / traj.dt))
    x, y, z = traj.states[k]
    print(f"t = {t:4.2f}  x = {x:.4f}  y = {y:.4f}  z = {z:.4f}")
