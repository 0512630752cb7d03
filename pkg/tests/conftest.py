import numpy as np
import pytest

from tracecode.binarycode import BinaryCodecParams, build_binary_codec

_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion; returns the verdict for asserting."""
    lines = request.config.stash[_ACCEPTANCE]

    def record(number, title, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {title}" + (f"  [{detail}]" if detail else "")
        print(line)
        lines.append((number, line))
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines, key=lambda item: item[0]):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def desk_codec():
    """Feasible desk-scale binary codec: q=0.3, m=16, n_R=60, k_inner=5, K=4, n_S=192, RS(31, 19) over GF(32)."""
    return build_binary_codec(BinaryCodecParams(), np.random.default_rng(31))
