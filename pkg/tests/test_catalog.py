import math

import numpy as np
import pytest

from nilsoliton import catalog
from nilsoliton.algebra import center, jacobi_defect, lower_central_series, unimodularity
from nilsoliton.catalog import Constraint, expected, family
from nilsoliton.curvature import ricci_operator
from nilsoliton.errors import UnknownFamily

CLASSES = {"2.1": 2, "2.2": 2, "2.3": 2, "2.4": 4, "2.5": 4, "2.6": 4, "2.7": 4, "2.8": 3, "2.9": 3, "2.10": 3}


def test_family_2_1():
    f = family("2.1")
    assert f.brackets == ((1, 2, 5, "s"), (3, 4, 5, "m"))
    assert f.domain_text() == "s≥m, m>0"
    alg = f.build({"s": 2.0, "m": 1.0})
    assert alg.alpha[0, 1, 4] == 2.0 and alg.alpha[2, 3, 4] == 1.0


def test_family_2_6_has_y_term():
    f = family("2.6")
    assert (2, 3, 5, "y") in f.brackets
    assert f.fixed == {"s": 0.0}
    assert not f.in_domain({"m": 1, "s": 0, "u": 0, "v": 1, "w": 0, "x": 1, "y": 0})
    assert f.in_domain({"m": -1, "s": 0, "u": 0, "v": 1, "w": 0, "x": 1, "y": -2})


def test_family_2_8_uses_corrected_e1_e4_bracket():
    assert (1, 4, 5, "v") in family("2.8").brackets


def test_family_2_9_domain():
    f = family("2.9")
    assert f.domain_text() == "m>0, w>v, v>0, s≥0, u≥0"
    assert f.in_domain({"m": 1, "s": 0, "u": 0, "v": 1, "w": 2})
    assert not f.in_domain({"m": 1, "s": 0, "u": 0, "v": 1, "w": 1})


def test_family_2_10_ties():
    f = family("2.10")
    full = f.complete({"m": 1.0, "v": 0.5, "s": 0.2})
    assert full["w"] == 0.5 and full["u"] == 0.0
    assert f.free_parameters("m") == ("s", "v")


@pytest.mark.parametrize("bad", ["2.11", "3", "", "case 9"])
def test_unknown_family(bad):
    with pytest.raises(UnknownFamily):
        family(bad)
    with pytest.raises(KeyError):
        expected(bad)


def test_id_normalization():
    assert family("case 2.4").id == "2.4"
    assert family(" 2.10 ").id == "2.10"


def test_expected_rows():
    e = expected("2.1")
    assert e.admits_soliton and e.condition == "s=m" and e.lauret_class == "μ4'"
    th = e.solution(2.0)
    assert e.c_formula(th) == pytest.approx(-8.0)
    assert e.derivation_diag(th) == pytest.approx((6.0, 6.0, 6.0, 6.0, 12.0))
    e = expected("2.7")
    assert not e.admits_soliton and e.c_formula is None and e.derivation_diag is None
    e = expected("2.10")
    assert e.lauret_class == "μ5'"
    assert e.c_formula(e.solution(1.0)) == -1.5
    assert e.derivation_diag(e.solution(1.0)) == pytest.approx((5 / 8, 5 / 8, 5 / 4, 15 / 8, 15 / 8))


def test_seven_soliton_rows():
    assert sum(expected(i).admits_soliton for i in catalog.FAMILY_IDS) == 7


def test_lauret_labels_distinct():
    labels = [expected(i).lauret_class for i in catalog.FAMILY_IDS if expected(i).admits_soliton]
    assert len(set(labels)) == 7


@pytest.mark.parametrize("fid", catalog.FAMILY_IDS)
def test_builder_invariants(fid, rng):
    f = family(fid)
    for _ in range(25):
        theta = f.random_point(rng)
        assert f.in_domain(theta, 1e-3)
        alg = f.build(theta)
        assert jacobi_defect(alg) <= 1e-12
        assert np.abs(unimodularity(alg)).max() <= 1e-12
        assert lower_central_series(alg).nilpotency_class == CLASSES[fid]


@pytest.mark.parametrize("fid, dim", [("2.1", 1), ("2.2", 2), ("2.3", 3)])
def test_center_dimensions(fid, dim, rng):
    f = family(fid)
    for _ in range(10):
        assert center(f.build(f.random_point(rng)))[0] == dim


@pytest.mark.parametrize("fid", [i for i in catalog.FAMILY_IDS if expected(i).admits_soliton])
def test_expected_data_consistent_with_curvature(fid):
    f, e = family(fid), expected(fid)
    theta = e.solution(1.0)
    assert f.in_domain(theta, 1e-4)
    ric = ricci_operator(f.build(theta))
    want = e.c_formula(theta) * np.eye(5) + np.diag(e.derivation_diag(theta))
    assert np.abs(ric - want).max() <= 1e-10


@pytest.mark.parametrize("fid", [i for i in catalog.FAMILY_IDS if expected(i).admits_soliton])
def test_expected_diagonals_are_derivations(fid):
    f, e = family(fid), expected(fid)
    theta = e.solution(1.0)
    d = e.derivation_diag(theta)
    for b in f.build(theta).entries():
        assert d[b.i - 1] + d[b.j - 1] == pytest.approx(d[b.k - 1], abs=1e-12)


def test_linear_model_reproduces_build(rng):
    for fid in catalog.FAMILY_IDS:
        f = family(fid)
        theta = f.random_point(rng)
        g = f.default_gauge
        base, tpl, free = f.linear_model(g, theta[g])
        alpha = base + (np.tensordot([theta[p] for p in free], tpl, axes=1) if free else 0)
        assert np.allclose(alpha, f.build(theta).alpha, atol=1e-14)


def test_requires_positive():
    assert family("2.9").requires_positive("w")  # w > v > 0
    assert family("2.8").requires_positive("s")
    assert not family("2.6").requires_positive("m")


@pytest.mark.parametrize(
    "c, theta, margin, ok",
    [
        (Constraint("m", ">"), {"m": 1e-5}, 1e-4, False),
        (Constraint("m", ">"), {"m": 1e-3}, 1e-4, True),
        (Constraint("w", ">="), {"w": -5e-5}, 1e-4, True),
        (Constraint("w", ">="), {"w": -5e-4}, 1e-4, False),
        (Constraint("y", "!="), {"y": -1.0}, 1e-4, True),
        (Constraint("y", "!="), {"y": 5e-5}, 1e-4, False),
        (Constraint("w", ">", "v"), {"w": 2.0, "v": 1.0}, 1e-4, True),
        (Constraint("w", "=", "v"), {"w": 1.0, "v": 1.0}, 0.0, True),
    ],
)
def test_constraint_margins(c, theta, margin, ok):
    assert c.holds(theta, margin) is ok


def test_compare_report_rejects_other_gauge():
    from nilsoliton.solver import SolveOptions, solve_family

    report = solve_family(family("2.4"), SolveOptions(multistarts=4, gauge="x"))
    with pytest.raises(ValueError):
        catalog.compare_report(report)


def test_reproduce_table_subset():
    report = catalog.reproduce_table(ids=("2.2", "2.9"))
    assert [r.id for r in report.rows] == ["2.2", "2.9"]
    assert report.passed
    row = report.rows[0]
    assert row.parameters["s"] == pytest.approx(1.0, abs=1e-8)
    assert row.c == pytest.approx(-2.0, abs=1e-8)
    assert row.derivation_diag == pytest.approx((1.0, 1.5, 1.5, 2.5, 2.5), abs=1e-8)
    assert not report.rows[1].found_soliton
