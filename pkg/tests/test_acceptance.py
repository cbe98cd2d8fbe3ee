"""End-to-end acceptance checks, one per criterion, each printing a single
PASS/FAIL line (run with ``pytest -s tests/test_acceptance.py`` to see them).

Two checks run on the literal symmetric nodal quintic
w^3(x^2+y^2+z^2) + x^5+y^5+z^5.  That surface has six further nodes at
irrational points, so the certificate and the Koszul/evaluation identity
fail on it when only [0:0:0:1] is declared.  Those two checks are kept
verbatim and marked as expected failures; companion checks run the same
assertions on the one-node quintic with an added x^4*y term.
"""

import math
import time

import pytest

from adetorelli import jacobian as jac
from adetorelli.cli import main
from adetorelli.families import fermat
from adetorelli.jacobian import HypersurfaceInstance
from adetorelli.koszul import KoszulSetup, koszul_cohomology, verify_le33
from adetorelli.local import classify_ade
from adetorelli.report import run_command

from conftest import INSTANCES, load
from oracles import smooth_jacobian_hilbert
import test_local
import test_properties

# frozen oracle values (sympy ranks and series expansion, see tests/oracles.py)
QUARTIC_AJ = [1, 4, 10, 16, 19, 16, 10, 4, 1]
QUINTIC_AJ_1, QUINTIC_AJ_6 = 4, 44
SEXTIC_P5_AJ_10 = 1506
NODAL_QUINTIC_AJ = [1, 4, 10, 20, 31, 40, 44, 40, 31, 20, 10, 4, 1, 1, 1]


def report(k, ok, detail=""):
    print(f"\ncriterion {k}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
    assert ok, detail


def test_criterion_1_fermat_quartic():
    t = time.perf_counter()
    H = HypersurfaceInstance.build(fermat(2, 4), 2)
    table = [jac.quotient_dims(H, m)[0] for m in range(9)]
    hodge = jac.hodge_graded(H)
    dt = time.perf_counter() - t
    ok = (table == QUARTIC_AJ == smooth_jacobian_hilbert(4, 4, 8) and H.sigma == 8
          and hodge == (1, 19) and dt < 1)
    report(1, ok, f"table={table} sigma={H.sigma} hodge={hodge} {dt:.2f}s")


def test_criterion_2_fermat_quintic():
    t = time.perf_counter()
    H = HypersurfaceInstance.build(fermat(2, 5), 2)
    a1, a6 = jac.quotient_dims(H, 1)[0], jac.quotient_dims(H, 6)[0]
    dual = jac.duality_report(H)
    tor = jac.torelli_report(H)
    dt = time.perf_counter() - t
    series = smooth_jacobian_hilbert(4, 5, 6)
    ok = ((a1, a6) == (QUINTIC_AJ_1, QUINTIC_AJ_6) == (series[1], series[6])
          and dual.symmetric and len(dual.rows) == 13 and tor.verdict == "injective" and dt < 10)
    report(2, ok, f"(A/J)_1={a1} (A/J)_6={a6} symmetric={dual.symmetric} torelli={tor.verdict} {dt:.2f}s")


def _criterion_3(name):
    t = time.perf_counter()
    H = load(name)
    rec = H.records[0]
    cert = jac.completeness_certificate(H)
    details = [f"type={rec.ade_type} alpha~={rec.alpha_tilde} cert={cert.passed} dims={cert.dims}"]
    ok = rec.ade_type == "A1" and rec.alpha_tilde == 1.5 and cert.passed and cert.tau == 1
    if ok:
        I5 = jac.ideal_piece_I(H, 5).dim
        codim = jac.stratum_codim(H)
        dual = jac.duality_report(H)
        tor = jac.torelli_report(H)
        dt = time.perf_counter() - t
        details.append(f"dim I_5={I5} codim={codim} symmetric={dual.symmetric} torelli={tor.verdict} "
                       f"kernel=J_5:{tor.kernel_equals_j_d} {dt:.1f}s")
        ok = (I5 == 55 and codim == 1 and dual.symmetric and tor.verdict == "injective"
              and tor.kernel_equals_j_d and tor.kernel_lift.dim == tor.j_d.dim and dt < 60)
    report(3, ok, f"[{name}] " + " ".join(details))


@pytest.mark.xfail(strict=True, raises=AssertionError, reason="six undeclared irrational nodes: certificate dims (7, 7)")
def test_criterion_3_literal_symmetric_quintic():
    _criterion_3("nodal_quintic_symmetric")


def test_criterion_3_one_node_quintic():
    _criterion_3("nodal_quintic")


def test_criterion_4_nodal_quartic(capsys):
    code = main(["torelli", str(INSTANCES / "nodal_quartic.json")])
    verdict = run_command("torelli", load("nodal_quartic")).verdicts["torelli"]
    capsys.readouterr()
    report(4, code == 2 and verdict == "hypotheses_not_satisfied", f"verdict={verdict} exit={code}")


def test_criterion_5_ade_battery():
    bad = []
    for name, expr in test_local.NORMAL_FORMS.items():
        k = test_local.ORACLE_MU[name]
        s = classify_ade(test_local.homogenize(expr), test_local.origin(4))
        f = classify_ade(test_local.homogenize(expr, 2), test_local.origin(6))
        if not (s.ade_type == f.ade_type == name and s.milnor == s.tjurina == f.milnor == f.tjurina == k
                and math.floor(s.alpha_tilde) == 1 and math.floor(f.alpha_tilde) > 1):
            bad.append(name)
    report(5, not bad, f"{len(test_local.NORMAL_FORMS)} types, failures={bad}")


def _criterion_6(name):
    H = load(name)
    bad = []
    for m in range(16):
        h = koszul_cohomology(KoszulSetup.from_instance(H, m))
        aj = jac.quotient_dims(H, m)[0]
        cok = jac.evaluation_map(H, H.sigma - m).coker_dim
        if not (h[-1] == aj and all(x == 0 for x in h[: H.n + 1]) and h[-2] == cok):
            bad.append(m)
    if name == "nodal_quintic":
        assert [jac.quotient_dims(H, m)[0] for m in range(15)] == NODAL_QUINTIC_AJ
    rows = verify_le33(H, range(16))
    ok = not bad and all(r["ok"] for r in rows)
    report(6, ok, f"[{name}] m=0..15 failing degrees={bad}")


@pytest.mark.xfail(strict=True, raises=AssertionError, reason="h^3(K_m) sees all seven nodes while ev sees one")
def test_criterion_6_literal_symmetric_quintic():
    _criterion_6("nodal_quintic_symmetric")


def test_criterion_6_one_node_quintic():
    _criterion_6("nodal_quintic")


def test_criterion_7_certificate_sensitivity(capsys):
    one = main(["analyze", str(INSTANCES / "two_node_quintic_one_declared.json")])
    both = main(["analyze", str(INSTANCES / "two_node_quintic.json")])
    capsys.readouterr()
    cert = jac.completeness_certificate(load("two_node_quintic"))
    ok = one == 3 and both == 0 and cert.passed and cert.tau == 2
    report(7, ok, f"one declared exit={one}; both declared exit={both} tau={cert.tau}")


def test_criterion_8_p_values():
    p1 = jac.p_value(load("nodal_quintic"))
    p2 = jac.p_value(load("two_node_quintic"))
    a2 = run_command("pvalue", load("a2_quintic"))
    res = a2.results
    ok = (p1.p == 0 and p2.p == 1 and res["reported_s"] == 2 and res["discrepancy"] == (res["p"] != 2)
          and a2.verdicts["s_k_comparison"] == ("discrepancy" if res["p"] != 2 else "agrees"))
    report(8, ok, f"one node p={p1.p}; two nodes p={p2.p}; A2 p={res['p']} vs s_2=2 "
                  f"flag={a2.verdicts['s_k_comparison']}")


PROPERTIES = [
    test_properties.test_rank_nullity,
    test_properties.test_koszul_d_squared_zero,
    test_properties.test_jacobian_inside_saturated_ideal,
    test_properties.test_ev_surjectivity_is_monotone,
    test_properties.test_ivhs_vanishes_exactly_on_J_d,
    test_properties.test_duality_random_nodal_quartics,
    test_properties.test_duality_random_nodal_quintics,
    test_properties.test_duality_random_nodal_sextics,
]


def test_criterion_9_property_suite():
    cases = sum(p._hypothesis_internal_use_settings.max_examples for p in PROPERTIES)
    failed = []
    for prop in PROPERTIES:
        try:
            prop()
        except Exception as exc:  # report, then fail below
            failed.append(f"{prop.__name__}: {type(exc).__name__}")
    report(9, not failed and cases >= 100, f"{len(PROPERTIES)} properties, {cases} cases, failures={failed}")


def test_criterion_10_sextic_fourfold_piece():
    H = HypersurfaceInstance.build(fermat(4, 6), 4)
    t = time.perf_counter()
    dim = jac.quotient_dims(H, 10)[0]
    dt = time.perf_counter() - t
    ok = dim == SEXTIC_P5_AJ_10 == smooth_jacobian_hilbert(6, 6, 10)[10] and dt < 60
    report(10, ok, f"dim (A/J)_10={dim} over 3003 columns in {dt:.2f}s")
