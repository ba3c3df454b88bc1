import numpy as np
import pytest

from coupled_otto import _accel
from coupled_otto.cycle import CycleSpec
from coupled_otto.verify import sample_specs

BACKENDS = ["numpy"] + (["numba"] if _accel.numba_available() else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    previous = _accel.set_backend(request.param)
    yield request.param
    _accel.set_backend(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def fig4_spec():
    # Delta1 = 0 cycle with J > 0, hot reservoir first.
    return CycleSpec(omega=1.0, delta1=0.0, delta2=0.6, coupling=0.2, beta1=1.0, beta2=3.0)


@pytest.fixture
def random_specs(rng):
    return sample_specs(rng, 50)


ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line for an acceptance criterion."""
    lines = request.config.stash.setdefault(ACCEPTANCE_KEY, [])

    def record(name, ok, detail=""):
        lines.append(f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail else ""))
        assert ok, f"{name}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
