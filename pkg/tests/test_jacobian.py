import pytest

from adetorelli import jacobian as jac
from adetorelli.errors import BudgetExceeded, DomainError, IncompleteSingularLocusError, UnsupportedParity
from adetorelli.families import fermat
from adetorelli.jacobian import HypersurfaceInstance
from adetorelli.poly import HomogeneousPoly, basis_size

from conftest import load
from oracles import smooth_jacobian_hilbert

# frozen from sympy rank computations (tests/oracles.py::quotient_dim)
NODAL_QUINTIC_AJ = [1, 4, 10, 20, 31, 40, 44, 40, 31, 20, 10, 4, 1, 1, 1]
NODAL_QUARTIC_AJ = [1, 4, 10, 16, 19, 16, 10, 4, 1, 1, 1]
SYMMETRIC_QUINTIC_AJ_13_14 = [7, 7]


@pytest.mark.parametrize("n,d", [(2, 3), (2, 4), (1, 4), (2, 5), (3, 3)])
def test_smooth_hilbert_series(n, d):
    H = HypersurfaceInstance.build(fermat(n, d), n)
    upto = H.sigma + 2
    got = [row[1] for row in jac.hilbert_table(H, range(upto + 1))]
    assert got == smooth_jacobian_hilbert(n + 2, d, upto)


def test_nodal_quintic_hilbert():
    H = load("nodal_quintic")
    assert [jac.quotient_dims(H, m)[0] for m in range(15)] == NODAL_QUINTIC_AJ


def test_nodal_quartic_hilbert():
    H = load("nodal_quartic")
    assert [jac.quotient_dims(H, m)[0] for m in range(11)] == NODAL_QUARTIC_AJ


def test_symmetric_quintic_has_extra_singularities():
    H = load("nodal_quintic_symmetric")
    cert = jac.completeness_certificate(H)
    assert list(cert.dims) == SYMMETRIC_QUINTIC_AJ_13_14
    assert not cert.passed
    with pytest.raises(IncompleteSingularLocusError):
        cert.require()


def test_quotient_dims_split():
    # dim A/J = dim A/I + dim I/J and A/I has dim tau once ev is onto
    H = load("nodal_quintic")
    for m in range(0, 15):
        aj, ij = jac.quotient_dims(H, m)
        ev = jac.evaluation_map(H, m)
        assert aj - ij == ev.rank
    assert jac.quotient_dims(H, 13) == (1, 0)


def test_jacobian_inside_ideal():
    H = load("two_node_quintic")
    for m in range(4, 9):
        J = jac.jacobian_piece(H, m)
        I = jac.ideal_piece_I(H, m)
        assert all(I.contains(g) for g in J.polys())


def test_euler_relation_f_in_J():
    H = load("nodal_quintic")
    assert jac.jacobian_piece(H, 5).contains(H.f)
    assert jac.ideal_piece_I(H, 5).contains(H.f)


def test_ideal_dimension_and_codim():
    H = load("nodal_quintic")
    assert jac.ideal_piece_I(H, 5).dim == 55
    assert jac.stratum_codim(H) == 1
    assert jac.equisingular_tangent(H).dim == 54


def test_duality_fermat_and_nodal():
    for name in ("fermat_quintic", "nodal_quintic", "two_node_quintic", "a1_a2_quintic"):
        rep = jac.duality_report(load(name))
        assert rep.symmetric, name


def test_duality_requires_certificate():
    with pytest.raises(IncompleteSingularLocusError):
        jac.duality_report(load("two_node_quintic_one_declared"))


def test_total_tjurina():
    assert jac.total_tjurina(load("two_node_quintic")) == 2
    assert jac.total_tjurina(load("a1_a2_quintic")) == 3
    assert jac.completeness_certificate(load("a1_a2_quintic")).passed


def test_hodge_numbers():
    assert jac.hodge_graded(load("fermat_quartic")) == (1, 19)
    assert jac.hodge_graded(load("nodal_quintic")) == (4, 43)
    with pytest.raises(UnsupportedParity):
        jac.hodge_graded(load("fermat_cubic_threefold"))


def test_p_values():
    assert jac.p_value(load("nodal_quintic")).p == 0
    pv = jac.p_value(load("two_node_quintic"))
    assert pv.p == 1 and pv.monotone
    a2 = jac.p_value(load("a2_quintic"))
    assert a2.length == 2 and a2.p == 1
    assert a2.reported_s == 2 and a2.discrepancy


def test_torelli_nodal_quintic():
    rep = jac.torelli_report(load("nodal_quintic"))
    assert rep.verdict == "injective"
    assert (rep.domain_dim, rep.source_dim, rep.target_dim) == (39, 4, 43)
    assert rep.kernel_dim == 0 and rep.kernel_equals_j_d
    assert rep.kernel_lift.dim == rep.j_d.dim == 16


def test_torelli_smooth_quintic():
    rep = jac.torelli_report(load("fermat_quintic"))
    assert rep.verdict == "injective"
    assert rep.domain_dim == 40


def test_torelli_quartic_hypotheses_fail():
    rep = jac.torelli_report(load("nodal_quartic"))
    assert rep.verdict == "hypotheses_not_satisfied"
    assert not any(rep.hypotheses.values())


def test_ivhs_differential_kills_J_d():
    H = load("nodal_quintic")
    J = jac.jacobian_piece(H, 5)
    for g in J.polys()[:6]:
        assert jac.ivhs_differential(H, g).is_zero()


def test_ivhs_rejects_outside_ideal():
    H = load("nodal_quintic")
    w5 = HomogeneousPoly.monomial((0, 0, 0, 5))
    with pytest.raises(DomainError):
        jac.ivhs_differential(H, w5)


def test_generation_checks():
    H = load("nodal_quintic")
    assert jac.generation_check(H, "A/J").passed
    assert jac.generation_check(H, "I/J").passed


def test_budget_guard():
    H = HypersurfaceInstance.build(fermat(2, 4), 2, budget=30)
    assert jac.quotient_dims(H, 3)[0] == 16
    with pytest.raises(BudgetExceeded):
        jac.quotient_dims(H, 10)
    assert basis_size(4, 10) > 30
