import numpy as np
import pytest

from hgs_ssp import Instance, parse_instance

# tools x jobs requirement matrix of the 10-job, 10-tool, C=4 worked example
TABLE1 = np.array(
    [
        [0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
        [1, 0, 0, 0, 1, 1, 1, 0, 0, 0],
        [0, 1, 0, 0, 1, 1, 0, 0, 0, 0],
        [0, 0, 1, 1, 0, 0, 1, 0, 1, 0],
        [0, 0, 0, 0, 1, 1, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0, 0, 1, 0, 0],
        [0, 0, 1, 0, 1, 0, 0, 0, 0, 1],
        [0, 0, 0, 1, 0, 0, 0, 1, 0, 1],
        [0, 1, 0, 0, 0, 1, 1, 1, 1, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 1, 0],
    ]
)

# loaded matrix after KTNS on the identity sequence, copied from the printed table
TABLE3 = np.array(
    [
        [0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
        [1, 1, 1, 0, 1, 1, 1, 0, 0, 0],
        [0, 1, 1, 1, 1, 1, 0, 0, 0, 0],
        [0, 0, 1, 1, 0, 0, 1, 1, 1, 0],
        [0, 0, 0, 0, 1, 1, 1, 0, 0, 0],
        [1, 0, 0, 0, 0, 0, 0, 1, 0, 0],
        [0, 0, 1, 1, 1, 0, 0, 0, 0, 1],
        [0, 0, 0, 1, 0, 0, 0, 1, 1, 1],
        [0, 1, 0, 0, 0, 1, 1, 1, 1, 1],
        [0, 0, 0, 0, 0, 0, 0, 0, 1, 1],
    ]
)

# Hand count of 1->0 transitions per row of TABLE3: 1,2,1,2,1,2,1,1,1,0
TABLE3_SWITCHES = 12
# 0-blocks of TABLE3 (row: sizes): 2:[1] 4:[2] 6:[6] 7:[4] 8:[3] 9:[3]
TABLE3_PHI = 1 + 2**0.5 + 6**0.5 + 2 + 2 * 3**0.5
# exhaustive enumeration of all 10! sequences of the example (frozen)
TABLE1_OPTIMUM = 7


@pytest.fixture
def table1() -> Instance:
    return Instance.from_matrix(TABLE1, 4, name="table1")


@pytest.fixture
def table1_text() -> str:
    rows = "\n".join(" ".join(map(str, r)) for r in TABLE1)
    return f"10 10 4\n{rows}\n"


def random_instance(rng, n_max=8, m_max=10, c_max=5, n_min=1):
    from hgs_ssp import generate_instance

    n = int(rng.integers(n_min, n_max + 1))
    m = int(rng.integers(1, m_max + 1))
    c = int(rng.integers(1, min(c_max, m) + 1))
    return generate_instance(n, m, c, seed=int(rng.integers(2**31)))


@pytest.fixture
def one_job() -> Instance:
    return parse_instance("1 1 1\n1\n")


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    rep = yield
    setattr(item, f"rep_{rep.when}", rep)
    return rep


_criteria_lines: list[str] = []


@pytest.fixture
def criterion(request):
    """Collects one PASS/FAIL line per acceptance test, printed at the end of the session."""
    marker = request.node.get_closest_marker("criterion")
    yield
    rep = getattr(request.node, "rep_call", None)
    if rep is None or marker is None:
        return
    status = "PASS" if rep.passed else "SKIP" if rep.skipped else "FAIL"
    num, text = marker.args
    _criteria_lines.append(f"{status}  criterion {num}: {text}")


def pytest_terminal_summary(terminalreporter):
    if _criteria_lines:
        terminalreporter.section("acceptance criteria")
        for line in _criteria_lines:
            terminalreporter.write_line(line)
