import json

import numpy as np
import pytest

from triplet_locc import StateSet

S2 = 1 / np.sqrt(2)

# two entangled states in span{|00>,|11>} plus |01>: only the product member is identifiable
ALPHA = (0.6, 0.8)
BETA = (0.8, -0.6)

_ACCEPTANCE_LINES = []


def ce_amplitudes(alpha=ALPHA, beta=BETA):
    return [
        [alpha[0], 0, 0, alpha[1]],
        [beta[0], 0, 0, beta[1]],
        [0, 1, 0, 0],
    ]


@pytest.fixture
def ce_set():
    return StateSet.from_amplitudes([2, 2], ce_amplitudes())


@pytest.fixture
def bell_triple():
    # Phi+, Phi-, Psi+
    return StateSet.from_amplitudes(
        [2, 2], [[1, 0, 0, 1], [1, 0, 0, -1], [0, 1, 1, 0]], names=("phi_plus", "phi_minus", "psi_plus")
    )


@pytest.fixture
def write_set(tmp_path):
    def _write(doc, name="set.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return path

    return _write


def pairs(amps):
    return [[float(np.real(a)), float(np.imag(a))] for a in amps]


@pytest.fixture
def record_acceptance():
    def _record(number, title, passed, detail=""):
        _ACCEPTANCE_LINES.append((number, title, passed, detail))

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_ACCEPTANCE_LINES):
        mark = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{mark}] {number}. {title}  {detail}")
