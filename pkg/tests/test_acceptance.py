"""Acceptance criteria 1-10; the terminal summary prints one PASS/FAIL line each."""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from nilsoliton import catalog
from nilsoliton.algebra import center, derivation_defect, lower_central_series, scale
from nilsoliton.curvature import ricci_nilpotent_oracle, ricci_operator, ricci_tensor
from nilsoliton.errors import OracleDisagreement
from nilsoliton.soliton import best_c, detect_soliton, eq6_residual, eq7_derivation
from nilsoliton.solver import SolveOptions, solve_family

SOLITON_IDS = [i for i in catalog.FAMILY_IDS if catalog.expected(i).admits_soliton]
CENTERS = {"2.1": 1, "2.2": 2, "2.3": 3}
CLASSES = {"2.1": 2, "2.2": 2, "2.3": 2, "2.4": 4, "2.5": 4, "2.6": 4, "2.7": 4, "2.8": 3, "2.9": 3, "2.10": 3}


@pytest.fixture(scope="module")
def table():
    start = time.perf_counter()
    report = catalog.reproduce_table(SolveOptions())
    return report, time.perf_counter() - start


@pytest.fixture(scope="module")
def certificates(table):
    """detect_soliton on each soliton row found by the table run."""
    report, _ = table
    out = {}
    for row in report.rows:
        if row.found_soliton:
            alg = catalog.family(row.id).build(row.parameters)
            out[row.id] = (alg, detect_soliton(alg))
    return out


def instances(seed, n_total):
    rng = np.random.default_rng(seed)
    ids = catalog.FAMILY_IDS
    for n in range(n_total):
        entry = catalog.family(ids[n % len(ids)])
        yield rng, entry.id, entry.build(entry.random_point(rng))


def test_criterion_01_table(table, record_criterion):
    report, seconds = table
    failed = [r.id for r in report.rows if not r.passed]
    found = sorted((r.id for r in report.rows if r.found_soliton), key=lambda s: float(s[2:]))
    ok = report.passed and found == SOLITON_IDS and seconds < 10
    record_criterion(1, ok, f"{report.n_passed}/10 rows pass in {seconds:.2f} s; solitons {', '.join(found)}")
    assert not failed, failed
    assert found == SOLITON_IDS
    assert seconds < 10


def _spot(fid):
    return solve_family(catalog.family(fid), SolveOptions()).canonical()


def test_criterion_02_spot_values(record_criterion):
    tol = 1e-8
    checks = []
    s = _spot("2.1")
    checks.append(abs(s.c + 2) <= tol and np.abs(s.derivation - np.diag([1.5, 1.5, 1.5, 1.5, 3])).max() <= tol)
    s = _spot("2.4")
    checks.append(abs(s.parameters["v"] - 2 / math.sqrt(3)) <= tol and abs(s.c + 2) <= tol)
    s = _spot("2.6")
    p = s.parameters
    checks.append(
        abs(s.c + 2.75) <= tol
        and abs(abs(p["m"]) - math.sqrt(1.5)) <= tol
        and abs(abs(p["v"]) - math.sqrt(1.5)) <= tol
        and abs(abs(p["y"]) - 1) <= tol
        and p["x"] == 1.0
    )
    s = _spot("2.8")
    checks.append(abs(s.parameters["w"] - math.sqrt(2) / 2) <= tol and abs(s.c + 1.75) <= tol)
    s = _spot("2.10")
    checks.append(abs(s.parameters["v"] - math.sqrt(3) / 2) <= tol and abs(s.c + 1.5) <= tol)
    record_criterion(2, all(checks), f"{sum(checks)}/5 spot values within {tol:g}")
    assert all(checks)


def test_criterion_03_dual_oracle_ricci(record_criterion):
    worst = 0.0
    for _, _, alg in instances(3, 1000):
        worst = max(worst, float(np.abs(ricci_tensor(alg).ric - ricci_nilpotent_oracle(alg).ric).max()))
    record_criterion(3, worst <= 1e-12, f"max |ric - oracle| = {worst:.2e} over 1000 instances")
    assert worst <= 1e-12


def test_criterion_04_eq7_identity(record_criterion):
    worst = 0.0
    for rng, _, alg in instances(4, 1000):
        c = rng.uniform(-5, 5)
        diff = eq7_derivation(alg, c) - (ricci_operator(alg) - c * np.eye(alg.dim))
        worst = max(worst, float(np.abs(diff).max()))
    record_criterion(4, worst <= 1e-10, f"max deviation {worst:.2e} over 1000 (alpha, c) pairs")
    assert worst <= 1e-10


def test_criterion_05_criterion_equivalence(record_criterion):
    threshold = 1e-9
    trials = mismatches = disagreements = positives = 0
    cases = [alg for _, _, alg in instances(5, 1000)]
    # soliton points at random scales, so both verdicts are exercised
    rng = np.random.default_rng(55)
    for fid in SOLITON_IDS:
        e = catalog.expected(fid)
        for _ in range(20):
            cases.append(catalog.family(fid).build(e.solution(rng.uniform(0.3, 3.0))))
    for alg in cases:
        c, defect = best_c(alg)
        _, e6 = eq6_residual(alg, c)
        trials += 1
        positives += defect <= threshold
        mismatches += (e6 <= threshold) != (defect <= threshold)
        try:
            detect_soliton(alg, threshold)
        except OracleDisagreement:
            disagreements += 1
    ok = mismatches == 0 and disagreements == 0
    record_criterion(5, ok, f"{trials} trials ({positives} solitons): {mismatches} verdict mismatches, "
                            f"{disagreements} OracleDisagreement")
    assert ok


def test_criterion_06_derivation_property(certificates, record_criterion):
    worst_defect = worst_diag = 0.0
    for fid, (alg, cert) in certificates.items():
        worst_defect = max(worst_defect, derivation_defect(alg, cert.derivation))
        d = np.diag(cert.derivation)
        for b in alg.entries(atol=1e-12):
            worst_diag = max(worst_diag, abs(d[b.i - 1] + d[b.j - 1] - d[b.k - 1]))
    ok = len(certificates) == 7 and worst_defect <= 1e-10 and worst_diag <= 1e-10
    record_criterion(6, ok, f"{len(certificates)} certificates; max defect {worst_defect:.2e}, "
                            f"max diagonal constraint error {worst_diag:.2e}")
    assert ok


def test_criterion_07_structural_audit(record_criterion):
    rng = np.random.default_rng(7)
    bad = []
    for fid in catalog.FAMILY_IDS:
        entry = catalog.family(fid)
        for _ in range(20):
            alg = entry.build(entry.random_point(rng))
            if lower_central_series(alg).nilpotency_class != CLASSES[fid]:
                bad.append(f"{fid} class")
            if entry.center_dim is not None and center(alg)[0] != entry.center_dim:
                bad.append(f"{fid} center")
    assert all(catalog.family(f).center_dim == d for f, d in CENTERS.items())
    record_criterion(7, not bad, "classes 2/2/2/4/4/4/4/3/3/3, centers 1/2/3" + (f"; failures {bad}" if bad else ""))
    assert not bad


def test_criterion_08_scaling(certificates, record_criterion):
    worst = 0.0
    for fid, (alg, cert) in certificates.items():
        for lam in (0.5, 2.0, 3.0):
            other = detect_soliton(scale(alg, lam))
            assert other.is_soliton == cert.is_soliton
            worst = max(worst, abs(other.c - lam ** 2 * cert.c) / abs(lam ** 2 * cert.c))
            ref = lam ** 2 * cert.derivation
            worst = max(worst, float(np.abs(other.derivation - ref).max() / np.abs(ref).max()))
    ok = len(certificates) == 7 and worst <= 1e-8
    record_criterion(8, ok, f"max relative deviation {worst:.2e} for lambda in 0.5, 2, 3")
    assert ok


def test_criterion_09_sign_and_type(certificates, record_criterion):
    problems = []
    worst_trace = 0.0
    for fid, (alg, cert) in certificates.items():
        if not cert.c < 0 or cert.soliton_type.value != "expanding":
            problems.append(f"{fid}: c={cert.c}")
        if not np.linalg.eigvals(cert.derivation).real.min() > 0:
            problems.append(f"{fid}: D not positive")
        trace_gap = abs(np.trace(ricci_operator(alg)) - (alg.dim * cert.c + np.trace(cert.derivation)))
        worst_trace = max(worst_trace, trace_gap)
    ok = not problems and worst_trace <= 1e-10 and len(certificates) == 7
    record_criterion(9, ok, f"all c < 0 and D > 0; trace identity error {worst_trace:.2e}"
                     if ok else f"{problems}")
    assert ok


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "nilsoliton", *argv], capture_output=True, check=False).stdout


def test_criterion_10_determinism(record_criterion):
    runs = {
        "solve 2.6": [_cli("solve", "2.6", "--seed", "7", "--format", "json") for _ in range(2)],
        "solve 2.4 --compare": [_cli("solve", "2.4", "--compare", "--format", "json") for _ in range(2)],
        "table": [_cli("table", "--format", "json") for _ in range(2)],
    }
    same = {k: v[0] == v[1] and len(v[0]) > 0 for k, v in runs.items()}
    record_criterion(10, all(same.values()), ", ".join(f"{k}: {'identical' if v else 'DIFFERENT'}"
                                                        for k, v in same.items()))
    assert all(same.values())
