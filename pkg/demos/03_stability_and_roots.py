"""
Corner stability with and without delay
=======================================

Each corner linearises to three decoupled scalar delay equations
``u' = a u(t - tau)``. The rightmost root of ``lam = a exp(-lam tau)`` is
``W0(a tau) / tau``, and it crosses into the right half-plane once
``a tau < -pi / 2``. This demo prints the coefficients and roots, then
shows a long delay destroying the storage-is-cheap ESS.
"""

import math

from delaygame import GameParams, IntegrationError, classify, integrate
from delaygame.stability import lambert_w0, rightmost_root

params = GameParams(30, 10, 10, 5, 10, 10, 10, 15, 10, 20, tau=0.01)
report = classify(params)
for e in report.equilibria:
    roots = ", ".join(f"{re:+.3f}{im:+.3f}i" for re, im in e.roots)
    print(f"{e.name} {e.point} a = {e.coeffs} signs {''.join(e.signs)} -> {e.verdict.value}  roots {roots}")
print("interior:", report.interior.status, "-", report.interior.note)

# The principal Lambert branch gives the real root while a tau >= -1/e.
print("W0(1) =", lambert_w0(1.0), " W0(-0.2) =", lambert_w0(-0.2))

# The IAEA coefficient at gamma4 is -C_II = -20, so stability ends at
# tau = pi / 40.
a = -20.0
print(f"critical delay for a = {a}: {math.pi / (2 * -a):.5f}")
for tau in (0.01, 0.05, 0.07, 0.0785, 0.0786, 0.2):
    re, im = rightmost_root(a, tau)
    print(f"  tau = {tau:<7} rightmost root {re:+.4f} {im:+.4f}i")

long_delay = params.replace(tau=0.2)
print("verdict at tau = 0.2:", classify(long_delay).corner(4).verdict.value)
try:
    integrate(long_delay, (0.8, 0.5, 0.5))
except IntegrationError as exc:
    print("integration at tau = 0.2 diverges:", exc)
