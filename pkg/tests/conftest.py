from pathlib import Path

import pytest

from abduce.core import AbductionInstance

DATA = Path(__file__).parent / "data"

TEX_CLAUSES = [["-a", "f"], ["-p", "f"], ["-t", "f"], ["-v", "f"], ["-p", "-t"]]
PEN_WEIGHTS = {"a": 4, "p": 2, "t": 4, "v": 1}


def tex_instance(**kw) -> AbductionInstance:
    kw.setdefault("hypotheses", ["a", "p", "t", "v"])
    return AbductionInstance.from_names(manifestations=["f"], clauses=TEX_CLAUSES, **kw)


def prio_instance() -> AbductionInstance:
    return tex_instance(classes=[["p", "v"], ["a", "t"]])


def pen_instance() -> AbductionInstance:
    return tex_instance(weights=PEN_WEIGHTS)


def i0_instance() -> AbductionInstance:
    return AbductionInstance.from_names(["h"], ["m"], [["-h", "m"]])


@pytest.fixture
def tex():
    return tex_instance()


@pytest.fixture
def prio():
    return prio_instance()


@pytest.fixture
def pen():
    return pen_instance()


@pytest.fixture
def i0():
    return i0_instance()


def ids(instance, *names):
    return frozenset(instance.lookup(n) for n in names)


ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request, capsys):
    """Record one pass/fail line for an acceptance criterion and echo it."""
    lines = request.config.stash.setdefault(ACCEPTANCE_KEY, [])

    def record(number: int, title: str, passed: bool, detail: str) -> bool:
        line = f"criterion {number} [{'PASS' if passed else 'FAIL'}] {title}: {detail}"
        lines.append(line)
        with capsys.disabled():
            print("\n" + line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
