import pytest

from delaygame import GameParams, StrategyState

# Standard parameter sets: (i_j, c_lc, t_rj, c_hj, c_dj, c_mj, c_sj, c_sc, c_mc, c_ii), tau = 0.01
CONDITION_ROWS = {
    1: (30, 10, 10, 5, 10, 10, 10, 15, 10, 20),
    2: (30, 10, 10, 5, 10, 10, 40, 15, 10, 20),
    3: (30, 20, 10, 5, 10, 10, 90, 15, 10, 20),
}
CONDITION_LIMITS = {1: (0, 0, 1), 2: (1, 0, 1), 3: (1, 1, 1)}
CONDITION_ESS = {1: 4, 2: 6, 3: 8}
STANDARD_INIT = StrategyState(0.8, 0.5, 0.5)


def condition_params(number, tau=0.01):
    return GameParams(*CONDITION_ROWS[number], tau=tau)


@pytest.fixture
def cond1():
    return condition_params(1)


@pytest.fixture
def cond2():
    return condition_params(2)


@pytest.fixture
def cond3():
    return condition_params(3)


_ACCEPTANCE = []


@pytest.fixture
def acceptance_log():
    def log(number, title, passed, detail=""):
        _ACCEPTANCE.append((number, title, passed, detail))

    return log


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        mark = "PASS" if passed else "FAIL"
        line = f"[{mark}] {number}. {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
