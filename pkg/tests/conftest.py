import pytest

from kaplansky import extension
from kaplansky.cyclerep import CycleRep
from kaplansky.exactalg import GF, QQ

extension.CHECK_STEPS = True


def rep_a(F=QQ):
    return CycleRep.from_lists(F, [[[1]], [[0]]])


def rep_b(F=QQ):
    return CycleRep.from_lists(F, [[[0]], [[1]]])


@pytest.fixture
def REP_A():
    return rep_a()


@pytest.fixture
def REP_B():
    return rep_b()


@pytest.fixture(params=[QQ, GF(2), GF(3)], ids=["Q", "F2", "F3"])
def field(request):
    return request.param


# criterion number -> (title, passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    hits = extension.LIMIT_BRANCH_HITS
    if 12 in ACCEPTANCE:
        title, ok, _ = ACCEPTANCE[12]
        ACCEPTANCE[12] = (title, ok and hits == 0, f"limit-ordinal branch entered {hits} times over the session")
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {num:2d} {title}: {detail}")


def pytest_sessionfinish(session, exitstatus):
    if extension.LIMIT_BRANCH_HITS:
        session.exitstatus = 1
        print(f"\nlimit-ordinal branch entered {extension.LIMIT_BRANCH_HITS} times")
