"""Graded pieces of the Jacobian ideal J and the saturated ideal I.

I_m is never built by saturation: it is the kernel of the jet-evaluation map
from degree-m forms to the direct sum of the local Tjurina algebras at the
declared points.  That is exact on projective space because h^1(O(m)) = 0.

All degree-m data of an instance is memoized on the instance itself, so a
report that asks for the same piece twice pays once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .errors import (
    BudgetExceeded,
    ConsistencyError,
    DomainError,
    DualityViolation,
    IncompleteSingularLocusError,
    InputError,
    NonVersalError,
    UnsupportedParity,
)
from .local import (
    DEFAULT_NMAX,
    AffinePoint,
    NotSingularError,
    SingularityRecord,
    _monomial_jet,
    classify_ade,
    verify_singular,
)
from .matrix import ExactMatrix
from .poly import HomogeneousPoly, basis_size, gradient, monomial_basis, monomial_index

DEFAULT_BUDGET = 200_000

# published s_k bounds, kept for the discrepancy flag in p-value reports
REPORTED_S = {0: 0, 1: 0, 2: 2}


# ---------------------------------------------------------------------------
# instance
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HypersurfaceInstance:
    n: int
    d: int
    f: HomogeneousPoly
    singular_points: tuple = ()
    records: tuple = ()
    nmax: int = DEFAULT_NMAX
    budget: int = DEFAULT_BUDGET
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def build(cls, f: HomogeneousPoly, n: int, points: Iterable = (), *, nmax: int = DEFAULT_NMAX,
              budget: int = DEFAULT_BUDGET) -> "HypersurfaceInstance":
        """Validate the input and classify every declared point."""
        if n < 1:
            raise InputError("n must be at least 1")
        if f.v != n + 2:
            raise InputError(f"f has {f.v} variables, expected n+2 = {n + 2}")
        if f.is_zero():
            raise InputError("f is the zero form")
        pts = []
        for p in points:
            P = p if isinstance(p, AffinePoint) else AffinePoint.from_projective(p)
            if P.v != f.v:
                raise InputError(f"point {P} has the wrong number of coordinates")
            if not verify_singular(f, P):
                raise NotSingularError(f"declared point is not singular: {P}")
            if P in pts:
                raise InputError(f"point {P} declared twice")
            pts.append(P)
        records = tuple(classify_ade(f, P, nmax) for P in pts)
        return cls(n, f.degree, f, tuple(pts), records, nmax, budget)

    @property
    def v(self) -> int:
        return self.n + 2

    @property
    def sigma(self) -> int:
        return (self.n + 2) * (self.d - 2)

    def partials(self) -> list:
        if "partials" not in self._cache:
            self._cache["partials"] = gradient(self.f)
        return self._cache["partials"]

    def memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]


def ambient_basis(H: HypersurfaceInstance, m: int) -> tuple:
    if basis_size(H.v, m) > H.budget:
        raise BudgetExceeded(
            f"degree {m} needs {basis_size(H.v, m)} columns, budget is {H.budget}"
        )
    return monomial_basis(H.v, m)


# ---------------------------------------------------------------------------
# graded pieces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedPiece:
    """A subspace of the degree-m forms, spanned by the rows of ``subspace``."""

    degree: int
    v: int
    subspace: ExactMatrix = field(repr=False)
    dim: int = -1

    def __post_init__(self):
        if self.dim < 0:
            # rank alone is much cheaper than the reduced form when the
            # modular pass finds full rank; the reduced form stays lazy
            object.__setattr__(self, "dim", linalg.rank(self.subspace))

    @property
    def ambient_dim(self) -> int:
        return basis_size(self.v, self.degree)

    def rref(self) -> linalg.Rref:
        cache = self.__dict__.get("_rref")
        if cache is None:
            cache = linalg.rref(self.subspace)
            object.__setattr__(self, "_rref", cache)
        return cache

    def contains(self, poly: HomogeneousPoly) -> bool:
        return self.rref().contains(poly.to_vector())

    def standard_monomials(self) -> list:
        """Column indices complementary to the pivots: a basis of the quotient."""
        return self.rref().free_columns

    def polys(self) -> list:
        return [HomogeneousPoly.from_vector(self.v, self.degree, r) for r in self.subspace.row_dicts()]


def jacobian_piece(H: HypersurfaceInstance, m: int) -> GradedPiece:
    """J_m spanned by g * df/dx_i for monomials g of degree m - (d-1)."""

    def build():
        cols = len(ambient_basis(H, m)) if m >= 0 else 0
        rows = []
        if m >= H.d - 1:
            idx = monomial_index(H.v, m)
            for g in monomial_basis(H.v, m - H.d + 1):
                for p in H.partials():
                    row = {}
                    for mono, c in p.terms.items():
                        row[idx[tuple(a + b for a, b in zip(g, mono))]] = c
                    if row:
                        rows.append(row)
        return GradedPiece(m, H.v, ExactMatrix(len(rows), cols, rows))

    return H.memo(("J", m), build)


@dataclass(frozen=True)
class EvaluationMapPiece:
    degree: int
    matrix: ExactMatrix = field(repr=False)
    rank: int
    coker_dim: int

    @property
    def surjective(self) -> bool:
        return self.coker_dim == 0


def _jet_coordinates(H: HypersurfaceInstance, mono: tuple) -> list:
    out = []
    for rec in H.records:
        alg = rec.algebra
        out.append(alg.coordinates(_monomial_jet(mono, rec.point, alg.order)))
    return out


def evaluation_map(H: HypersurfaceInstance, m: int) -> EvaluationMapPiece:
    """Jets of degree-m monomials written in the local Tjurina algebra bases."""

    def build():
        total = total_tjurina(H)
        if m < 0:
            return EvaluationMapPiece(m, ExactMatrix(total, 0), 0, total)
        basis = ambient_basis(H, m)
        offsets = []
        off = 0
        for rec in H.records:
            offsets.append(off)
            off += rec.tjurina
        data = [{} for _ in range(total)]
        for j, mono in enumerate(basis):
            for off, coords in zip(offsets, _jet_coordinates(H, mono)):
                for k, c in coords.items():
                    data[off + k][j] = c
        M = ExactMatrix(total, len(basis), data)
        r = linalg.rank(M)
        return EvaluationMapPiece(m, M, r, total - r)

    return H.memo(("ev", m), build)


def ideal_piece_I(H: HypersurfaceInstance, m: int) -> GradedPiece:
    """I_m = kernel of the evaluation map."""

    def build():
        ev = evaluation_map(H, m)
        if m < 0:
            return GradedPiece(m, H.v, ExactMatrix(0, 0), 0)
        K = linalg.kernel_basis(ev.matrix)
        return GradedPiece(m, H.v, K, ev.matrix.cols - ev.rank)

    return H.memo(("I", m), build)


def ev_kills(H: HypersurfaceInstance, piece: GradedPiece) -> bool:
    """Does every spanning row of ``piece`` lie in I (ev = 0)?"""
    ev = evaluation_map(H, piece.degree)
    return all(not ev.matrix.apply(r) for r in piece.subspace.row_dicts())


def quotient_dims(H: HypersurfaceInstance, m: int) -> tuple:
    """(dim (A/J)_m, dim (I/J)_m)."""

    def build():
        if m < 0:
            return (0, 0)
        J = jacobian_piece(H, m)
        if not ev_kills(H, J):
            raise ConsistencyError(f"J_{m} is not contained in I_{m}: wrong singular set")
        h0 = basis_size(H.v, m)
        ev = evaluation_map(H, m)
        dim_I = h0 - ev.rank
        return (h0 - J.dim, dim_I - J.dim)

    return H.memo(("qd", m), build)


def hilbert_table(H: HypersurfaceInstance, degrees: Iterable[int]) -> list:
    """Rows (m, dim (A/J)_m, dim (I/J)_m)."""
    return [(m,) + quotient_dims(H, m) for m in degrees]


def total_tjurina(H: HypersurfaceInstance) -> int:
    return sum(r.tjurina for r in H.records)


# ---------------------------------------------------------------------------
# quotient bases
# ---------------------------------------------------------------------------


def quotient_basis_AJ(H: HypersurfaceInstance, m: int) -> list:
    """Ambient indices of the standard monomials spanning (A/J)_m."""
    if m < 0:
        return []
    return jacobian_piece(H, m).standard_monomials()


def normal_form(H: HypersurfaceInstance, poly: HomogeneousPoly) -> dict:
    """Reduce ``poly`` modulo J; the result lives on standard monomials."""
    if poly.degree < 0:
        return {}
    return jacobian_piece(H, poly.degree).rref().reduce(poly.to_vector())


@dataclass(frozen=True)
class IJBasis:
    """Basis of (I/J)_m as normal forms on the standard monomials of (A/J)_m.

    ``rref`` is in reduced form over ambient indices; the coordinates of an
    element of (I/J)_m are its values at the pivot columns.
    """

    degree: int
    rref: linalg.Rref

    @property
    def dim(self) -> int:
        return self.rref.rank

    def coordinates(self, nf: dict) -> dict:
        if self.rref.reduce(nf):
            raise DomainError(f"element is not in (I/J)_{self.degree}")
        return {k: nf[c] for k, c in enumerate(self.rref.pivots) if nf.get(c)}

    def vectors(self) -> list:
        return list(self.rref.rows)


def ij_basis(H: HypersurfaceInstance, m: int) -> IJBasis:
    """(I/J)_m as the kernel of ev restricted to the standard monomials of (A/J)_m.

    A normal form s represents an element of I/J iff ev(s) = 0, since J lies
    in I.  The dimension is checked against dim I_m - dim J_m.
    """

    def build():
        std = quotient_basis_AJ(H, m)
        if not std:
            return IJBasis(m, linalg.Rref(basis_size(H.v, m) if m >= 0 else 0, (), ()))
        ev = evaluation_map(H, m).matrix
        sub = ExactMatrix(ev.rows, len(std), [{k: r[j] for k, j in enumerate(std) if j in r} for r in ev.row_dicts()])
        K = linalg.kernel_basis(sub)
        rows = [{std[k]: c for k, c in r.items()} for r in K.row_dicts()]
        R = linalg.rref(ExactMatrix(len(rows), basis_size(H.v, m), rows))
        if R.rank != quotient_dims(H, m)[1]:
            raise ConsistencyError(f"two computations of dim (I/J)_{m} disagree")
        return IJBasis(m, R)

    return H.memo(("IJ", m), build)


# ---------------------------------------------------------------------------
# certificates and reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    passed: bool
    tau: int
    dims: tuple  # dim (A/J) at sigma+1, sigma+2

    def require(self):
        if not self.passed:
            raise IncompleteSingularLocusError(
                f"undeclared or non-isolated singularities suspected: "
                f"dim (A/J) at sigma+1, sigma+2 = {self.dims}, declared tau = {self.tau}"
            )
        return self


def completeness_certificate(H: HypersurfaceInstance) -> Certificate:
    """Stabilized dim (A/J) beyond sigma must equal the declared total tau."""
    s = H.sigma
    dims = (quotient_dims(H, s + 1)[0], quotient_dims(H, s + 2)[0])
    tau = total_tjurina(H)
    return Certificate(dims == (tau, tau), tau, dims)


@dataclass(frozen=True)
class DualityReport:
    sigma: int
    rows: tuple  # (m, dim (I/J)_m, dim (I/J)_{sigma-m}, equal)
    vanishing_above: bool

    @property
    def symmetric(self) -> bool:
        return all(r[3] for r in self.rows) and self.vanishing_above


def duality_report(H: HypersurfaceInstance, strict: bool = False) -> DualityReport:
    """dim (I/J)_m against dim (I/J)_{sigma-m} for 0 <= m <= sigma."""
    completeness_certificate(H).require()
    for rec in H.records:
        if rec.milnor != rec.tjurina:  # pragma: no cover - rejected by classify_ade
            raise InputError(f"{rec.point} is not quasi-homogeneous")
    s = H.sigma
    ij = {m: quotient_dims(H, m)[1] for m in range(0, s + 2)}
    rows = tuple((m, ij[m], ij[s - m], ij[m] == ij[s - m]) for m in range(0, s + 1))
    rep = DualityReport(s, rows, ij[s + 1] == 0)
    if strict and not rep.symmetric:
        raise DualityViolation(f"(I/J) dimensions are not symmetric about sigma={s}")
    return rep


def h1_ideal(H: HypersurfaceInstance, m: int) -> int:
    """h^1(J_Sigma(m)) = dim coker ev_m."""
    return evaluation_map(H, m).coker_dim


@dataclass(frozen=True)
class PValue:
    p: int
    cokernels: tuple  # (m, coker) for the scanned range
    monotone: bool
    length: int
    reported_s: int | None

    @property
    def discrepancy(self) -> bool:
        """Computed p differs from the reported s_k for this length."""
        return self.reported_s is not None and self.p != self.reported_s


def p_value(H: HypersurfaceInstance, upto: int | None = None) -> PValue:
    """Least m >= 0 with ev_m surjective, plus a monotonicity scan."""
    tau = total_tjurina(H)
    # a length-tau scheme imposes independent conditions from degree tau-1 on
    top = max(tau, 1) if upto is None else upto
    cok = [(m, h1_ideal(H, m)) for m in range(0, top + 2)]
    p = next((m for m, c in cok if c == 0), None)
    if p is None:  # pragma: no cover - excluded by the bound above
        raise ConsistencyError("evaluation map never became surjective")
    monotone = all(c == 0 for m, c in cok if m >= p)
    return PValue(p, tuple(cok), monotone, tau, REPORTED_S.get(tau))


def _require_even(H: HypersurfaceInstance):
    if H.n % 2:
        raise UnsupportedParity(f"n = {H.n} is odd; Hodge/Torelli statements need n even")


def hodge_graded(H: HypersurfaceInstance) -> tuple:
    """(dim Gr_F^{n+1}, dim Gr_F^n) of H^{n+1}(P^{n+1} - X)."""
    _require_even(H)
    top = quotient_dims(H, H.d - H.n - 2)[0]
    m2 = 2 * H.d - H.n - 2
    second = quotient_dims(H, m2)[1] if H.n == 2 else quotient_dims(H, m2)[0]
    return (top, second)


@dataclass(frozen=True)
class EquisingularTangent:
    ideal: GradedPiece
    dim: int  # dim I_d / <f>
    codim: int  # h0(O(d)) - dim I_d


def equisingular_tangent(H: HypersurfaceInstance) -> EquisingularTangent:
    ev = evaluation_map(H, H.d)
    if not ev.surjective:
        raise NonVersalError()
    I = ideal_piece_I(H, H.d)
    if not I.contains(H.f):
        raise ConsistencyError("f does not lie in I_d")
    return EquisingularTangent(I, I.dim - 1, basis_size(H.v, H.d) - I.dim)


def stratum_codim(H: HypersurfaceInstance) -> int:
    return equisingular_tangent(H).codim


# ---------------------------------------------------------------------------
# IVHS differential and Torelli test
# ---------------------------------------------------------------------------


def _target(H: HypersurfaceInstance):
    """Coordinates on Gr_F^n: (A/J) for n >= 4, (I/J) for n = 2."""
    m2 = 2 * H.d - H.n - 2
    if H.n == 2:
        B = ij_basis(H, m2)
        return B.dim, B.coordinates
    std = quotient_basis_AJ(H, m2)
    pos = {j: k for k, j in enumerate(std)}
    return len(std), lambda nf: {pos[j]: c for j, c in nf.items()}


def ivhs_differential(H: HypersurfaceInstance, xi: HomogeneousPoly) -> ExactMatrix:
    """Matrix of g -> -xi*g from (A/J)_{d-n-2} to Gr_F^n (columns = sources)."""
    _require_even(H)
    if xi.v != H.v or xi.degree != H.d:
        raise DomainError("xi must be a form of degree d")
    ev = evaluation_map(H, H.d)
    if ev.matrix.apply(xi.to_vector()):
        raise DomainError("xi is not in I_d")
    m1 = H.d - H.n - 2
    src = quotient_basis_AJ(H, m1)
    tdim, coords = _target(H)
    basis = monomial_basis(H.v, m1) if m1 >= 0 else ()
    data = [{} for _ in range(tdim)]
    for k, j in enumerate(src):
        g = HomogeneousPoly.monomial(basis[j], -1)
        c = coords(normal_form(H, xi * g))
        for i, x in c.items():
            data[i][k] = x
    return ExactMatrix(tdim, len(src), data)


@dataclass(frozen=True)
class GenerationCheck:
    which: str
    m0: int
    passed: bool
    failures: tuple  # degrees m where A_1 * M_m != M_{m+1}


def generation_check(H: HypersurfaceInstance, which: str = "A/J", m0: int | None = None) -> GenerationCheck:
    """A_1 * M_m spans M_{m+1} for m0 <= m <= sigma+2 (M = A/J or I/J)."""
    if m0 is None:
        m0 = H.d - H.n - 2
    if which not in ("A/J", "I/J"):
        raise ValueError(which)
    m0 = max(m0, 0)
    failures = []
    for m in range(m0, H.sigma + 3):
        if which == "A/J":
            target = quotient_dims(H, m + 1)[0]
            basis = monomial_basis(H.v, m)
            gens = [HomogeneousPoly.monomial(basis[j]) for j in quotient_basis_AJ(H, m)]
        else:
            target = quotient_dims(H, m + 1)[1]
            gens = [HomogeneousPoly.from_vector(H.v, m, r) for r in ij_basis(H, m).vectors()]
        if target == 0:
            continue
        images = []
        for g in gens:
            for i in range(H.v):
                x = HomogeneousPoly.monomial(tuple(int(k == i) for k in range(H.v)))
                nf = normal_form(H, x * g)
                if nf:
                    images.append(nf)
        span = linalg.rank(ExactMatrix(len(images), basis_size(H.v, m + 1), images)) if images else 0
        if span != target:
            failures.append(m)
    return GenerationCheck(which, m0, not failures, tuple(failures))


VERDICTS = ("injective", "kernel_equals_J_d", "kernel_exceeds_J_d", "hypotheses_not_satisfied")


@dataclass(frozen=True)
class TorelliReport:
    hypotheses: dict
    domain_dim: int  # dim (I/J)_d
    source_dim: int  # dim (A/J)_{d-n-2}
    target_dim: int
    map_rank: int
    kernel_dim: int
    kernel_lift: GradedPiece = field(repr=False)
    j_d: GradedPiece = field(repr=False)
    kernel_equals_j_d: bool
    verdict: str

    @property
    def hypotheses_ok(self) -> bool:
        return all(self.hypotheses.values())


def torelli_report(H: HypersurfaceInstance) -> TorelliReport:
    """Kernel of (I/J)_d -> Hom((A/J)_{d-n-2}, Gr_F^n) compared with J_d."""
    _require_even(H)
    completeness_certificate(H).require()
    n, d = H.n, H.d
    m0 = d - (n + 2)
    ev_deg = d - (n + 3)
    hyp = {
        "d-(n+2) > 0": m0 > 0,
        "ev surjective at d-(n+3)": ev_deg >= 0 and evaluation_map(H, ev_deg).surjective,
    }
    if m0 > 0:
        hyp["A/J generated in degree d-n-2"] = generation_check(H, "A/J", m0).passed
        hyp["I/J generated in degree d-n-2"] = generation_check(H, "I/J", m0).passed
    else:
        hyp["A/J generated in degree d-n-2"] = False
        hyp["I/J generated in degree d-n-2"] = False

    dom = ij_basis(H, d)
    xis = [HomogeneousPoly.from_vector(H.v, d, r) for r in dom.vectors()]
    cols = []
    src_dim = tgt_dim = 0
    for xi in xis:
        D = ivhs_differential(H, xi)
        tgt_dim, src_dim = D.rows, D.cols
        flat = {}
        for i, r in enumerate(D.row_dicts()):
            for k, c in r.items():
                flat[i * D.cols + k] = c
        cols.append(flat)
    if not xis:
        src_dim = len(quotient_basis_AJ(H, d - n - 2))
        tgt_dim = _target(H)[0]
    # rows of Mt are the images of the domain basis; its left kernel is the kernel
    Mt = ExactMatrix(len(cols), src_dim * tgt_dim, cols)
    K = linalg.kernel_basis(Mt.transpose())
    r = len(xis) - K.rows
    J = jacobian_piece(H, d)
    lifted = []
    for row in K.row_dicts():
        vec: dict = {}
        for k, c in row.items():
            for j, x in dom.vectors()[k].items():
                vec[j] = vec.get(j, 0) + c * x
        lifted.append({j: x for j, x in vec.items() if x})
    lift_mat = J.subspace.vstack(ExactMatrix(len(lifted), J.subspace.cols, lifted))
    lift = GradedPiece(d, H.v, lift_mat)
    equal = linalg.same_row_space(lift_mat, J.subspace)
    if not all(hyp.values()):
        verdict = "hypotheses_not_satisfied"
    elif K.rows == 0 and equal:
        verdict = "injective"
    else:
        verdict = "kernel_exceeds_J_d"
    return TorelliReport(hyp, len(xis), src_dim, tgt_dim, r, K.rows, lift, J, equal, verdict)
