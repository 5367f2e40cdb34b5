import numpy as np
import pytest

from mckba import attack, chaos, cipher

PAPER_KEY = cipher.SecretKey(32, 3835288501, 1437224678, 319684607)

_criteria = []


def simulate(key, count, plains=None):
    """Encrypt the four chosen sequences (or ``plains``) under ``key``."""
    codes = chaos.control_sequence(key.x0, count)
    plains = plains or attack.chosen_plain_sequences(key.n, count)
    return plains, [cipher.encrypt_elements(p, key, codes) for p in plains], codes


@pytest.fixture
def rng():
    return np.random.default_rng(20100722)


@pytest.fixture
def criterion():
    def record(label, ok, detail=""):
        _criteria.append((label, bool(ok), detail))
        print(f"[{'PASS' if ok else 'FAIL'}] {label} {detail}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _criteria:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {label} {detail}")
