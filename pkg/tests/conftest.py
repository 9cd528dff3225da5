import numpy as np
import pytest

from nilsoliton import catalog

ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def record_criterion():
    """Record a pass/fail line for the acceptance summary."""

    def record(number: int, ok: bool, detail: str = ""):
        ACCEPTANCE_RESULTS[number] = (bool(ok), detail)

    return record


def random_nilpotent(rng, dim=5, density=0.6):
    """Random brackets [E_i,E_j] in span{E_k : k > j}: strictly upper triangular, hence nilpotent.

    The Jacobi identity is not guaranteed, so only use this where it is not needed.
    """
    a = np.zeros((dim, dim, dim))
    for i in range(dim):
        for j in range(i + 1, dim):
            for k in range(j + 1, dim):
                if rng.random() < density:
                    v = rng.normal()
                    a[i, j, k] = v
                    a[j, i, k] = -v
    return a


def family_instances(rng, per_family):
    for fid, entry in catalog.FAMILIES.items():
        for _ in range(per_family):
            yield fid, entry.build(entry.random_point(rng))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
