import pytest

from qperceptron.dataset import example_dataset
from qperceptron.grover import GroverRunner
from qperceptron.oracle import oracle_circuit
from qperceptron.qft_arith import FixedPointSpec

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def spec1():
    return FixedPointSpec(1)


@pytest.fixture(scope="session")
def d4():
    return example_dataset()


@pytest.fixture(scope="session")
def d4_bundle(d4, spec1):
    return oracle_circuit(d4, spec1)


@pytest.fixture(scope="session")
def d4_runner(d4_bundle):
    return GroverRunner(d4_bundle, backend="circuit")


@pytest.fixture(scope="session")
def d4_trace(d4_runner):
    """Full-circuit marked probability after j = 0..5 iterations."""
    _, trace = d4_runner.run(5)
    return trace


@pytest.fixture(scope="session")
def d4_state_j3(d4_runner):
    state, _ = d4_runner.run(3, trace=False)
    return state


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per criterion; printed in the terminal summary."""

    def record(label: str, ok: bool, detail: str) -> bool:
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
        print(ACCEPTANCE_LINES[-1])
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
