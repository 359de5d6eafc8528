"""
Scenario files, exported data and the command line
==================================================

Writes a scenario file, loads it, exports the trajectory and report, and
drives the same steps through the ``delaygame`` command.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

from delaygame import classify, load_scenario, run_condition, write_trajectory_csv
from delaygame.scenario_io import dumps_report, run_report

work = Path(tempfile.mkdtemp(prefix="delaygame-"))
path = work / "litigation.scn"
path.write_text(
    """# strong litigation, expensive storage
i_j = 30
c_lc = 20
t_rj = 10
c_hj = 5
c_dj = 10
c_mj = 10
c_sj = 90
c_sc = 15
c_mc = 10
c_ii = 20
tau = 0.01
init = 0.3, 0.3, 0.3
t_end = 20
"""
)

scenario = load_scenario(path)
print("label taken from the file name:", scenario.label)
result = run_condition(scenario)
write_trajectory_csv(result.trajectory, work / "trajectory.csv")
(work / "report.json").write_text(dumps_report(run_report(scenario, classify(scenario.params), result.trajectory)))
print((work / "trajectory.csv").read_text().splitlines()[:3])
print("limit corner in report:", json.loads((work / "report.json").read_text())["limit_corner"])

# The same through the command line.
cli = [sys.executable, "-m", "delaygame.cli"]
subprocess.run(cli + ["classify", "--scenario", str(path)], check=True)
subprocess.run(cli + ["simulate", "--scenario", str(path), "--out", str(work / "cli")], check=True)

# A malformed file is rejected with its line number and exit status 1.
bad = work / "bad.scn"
bad.write_text("i_j = 30\nc_lc = lots\n")
done = subprocess.run(cli + ["classify", "--scenario", str(bad)], capture_output=True, text=True)
print("exit", done.returncode, done.stderr.strip())
