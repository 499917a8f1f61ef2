import re
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

CRITERIA = {
    1: "tower over a delayed one reproduces its cone pattern",
    2: "one definability step adds exactly the empty set and the marker",
    3: "zero-added families are definability fixed points",
    4: "the nonzero carve recovers the family up to death artifacts",
    5: "staged branch collections build an internal ordinal containing them",
    6: "internal branch-hood matches maximal-chain externalization",
    7: "the tower over the branch ordinal recovers exactly the branches",
    8: "the two-variable formula pins stage membership over the forest",
    9: "iterated fixed points are extremal among all candidate subsets",
    10: "the fan fixture separates bounding from uniformity",
    11: "monotonicity, classical collapse, and absoluteness battery",
}


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return FIXTURES / "corpus"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    tr = terminalreporter
    outcomes: dict[int, str] = {}
    for status in ("passed", "failed", "error", "skipped"):
        for rep in tr.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", nodeid)
            if not m or getattr(rep, "when", "call") != "call":
                continue
            num = int(m.group(1))
            word = "PASS" if status == "passed" else "FAIL"
            outcomes[num] = word
    if not outcomes:
        return
    tr.write_sep("-", "acceptance criteria")
    for num in sorted(outcomes):
        desc = CRITERIA.get(num, "")
        tr.write_line(f"criterion {num:2d}: {outcomes[num]} - {desc}")
