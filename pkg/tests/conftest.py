from __future__ import annotations

from collections import defaultdict

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

CRITERIA = {
    1: "Hadamard variance law",
    2: "C_theta law and monotonicity",
    3: "support confinement to t cos(theta)",
    4: "line symmetries under noise",
    5: "coin-variant equivalence",
    6: "cycle breakdown and restoration",
    7: "classical limit",
    8: "recurrence",
    9: "trajectory/density equivalence",
    10: "GAD closed form",
    11: "Klein-Gordon identity and decoupled recursion",
    12: "mixing ordering",
    13: "many-body profiles",
    14: "entanglement",
    15: "reproducibility",
}

_outcomes: dict[int, list[tuple[str, str]]] = defaultdict(list)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item: pytest.Item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        if hasattr(rep, "wasxfail"):
            state = "xfail" if rep.skipped else "xpass"
        else:
            state = rep.outcome
        _outcomes[mark.args[0]].append((item.name, state))


def pytest_terminal_summary(terminalreporter, exitstatus, config) -> None:
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n, title in CRITERIA.items():
        parts = _outcomes.get(n)
        if not parts:
            continue
        states = {s for _, s in parts}
        if states <= {"passed"}:
            verdict = "PASS"
        elif states <= {"passed", "xfail"}:
            bad = ", ".join(name for name, s in parts if s == "xfail")
            verdict = f"FAIL (known, analyzed in the decision ledger: {bad})"
        else:
            bad = ", ".join(f"{name}={s}" for name, s in parts if s not in ("passed", "xfail"))
            verdict = f"FAIL ({bad})"
        tr.write_line(f"criterion {n:2d} {title}: {verdict}")
