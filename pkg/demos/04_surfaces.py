"""
Decision surfaces over two costs
================================

Sweeps pairs of cost parameters on the shipped grids and reports where
Japan ends up discharging. A reduced 10 x 10 version of each grid keeps
the runtime short; pass ``--full`` for the 30 x 30 grids.
"""

import dataclasses
import sys

import numpy as np

from delaygame import Axis, load_scenario, shipped_scenario, slice_extract, surface_sweep

full = "--full" in sys.argv


def grid(name):
    scenario = load_scenario(shipped_scenario(name))
    if not full:
        spec = scenario.sweep
        small = dataclasses.replace(
            spec,
            axis_a=Axis(spec.axis_a.name, spec.axis_a.lo, spec.axis_a.hi, 10),
            axis_b=Axis(spec.axis_b.name, spec.axis_b.lo, spec.axis_b.hi, 10),
        )
        scenario = dataclasses.replace(scenario, sweep=small)
    return surface_sweep(scenario)


def show(surface):
    a, b = surface.spec.axis_a, surface.spec.axis_b
    print(f"rows: {a.name} from {a.lo:g} to {a.hi:g}; columns: {b.name} from {b.lo:g} to {b.hi:g}")
    marks = {1: "D", 0: ".", -1: "?"}
    for i, row in enumerate(surface.decisions()):
        print(f"  {surface.a_values[i]:5.1f}  " + "".join(marks[v] for v in row))


# Discharge cost against storage cost: discharge (D) only when storing
# costs more than discharging plus monitoring.
s4 = grid("condition4")
show(s4)
fixed = s4.a_values[np.argmin(np.abs(s4.a_values - 5))]
c_sj, x = slice_extract(s4, "c_dj", fixed)
print(f"slice c_dj = {fixed:g}:", " ".join(f"{v:.0f}" for v in x), "over c_sj", c_sj[0], "..", c_sj[-1])

# Export-tax loss barely matters; storage cost decides.
show(grid("condition5"))

# Litigation compensation against aid: the other countries' final sanction
# probability y.
s6 = grid("condition6")
y = s6.observable_grid("y")
print("condition 6: converged cells", int(s6.converged.sum()), "of", s6.converged.size)
print("largest final y", float(y.max()))
