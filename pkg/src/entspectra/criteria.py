"""Reduction and majorization criteria, and a checkable majorization witness.

A state obeying the A-side reduction inequality ``rho_A ⊗ I >= rho_AB`` also
has ``lambda(rho_AB) ≺ lambda(rho_A)``. :func:`build_theorem1_witness` makes
that implication concrete. It produces a contraction ``C`` and a doubly
substochastic matrix ``S`` that maps ``lambda(rho_A)`` onto the top
``dim_a`` eigenvalues of ``rho_AB``. :func:`verify_witness` re-checks every
claimed property independently of the construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, NumericalError, ReductionViolatedError, WitnessInvalidError
from .linalg import (
    PSD_TOL,
    dagger,
    hermitian_eigen,
    kron,
    operator_norm,
    psd_inv_sqrt,
    psd_sqrt,
)
from .majorization import (
    MAJOR_TOL,
    MajorizationVerdict,
    SpectrumVector,
    is_doubly_substochastic,
    majorizes,
    weakly_submajorizes,
)
from .states import BipartiteState, partial_trace_a, partial_trace_b, restrict_to_support

__all__ = [
    "CriterionReport",
    "Theorem1Witness",
    "VerificationReport",
    "build_theorem1_witness",
    "check_majorization_criterion",
    "check_reduction",
    "distillability_verdict",
    "douglas_contraction",
    "spectra",
    "verify_witness",
]

# bounds on witness residuals; NUMERICAL_FAILURE past 10x any of them
CONTRACTION_TOL = 1e-9
ENTRY_TOL = 1e-12
SUM_TOL = 1e-9
LINEAR_TOL = 1e-8
ROW_GROUP_TOL = 1e-8
FAILURE_FACTOR = 10.0


def _scaled_psd(w, tol):
    return bool(w[-1] >= -tol * max(1.0, w[0]))


def spectra(s: BipartiteState) -> tuple[SpectrumVector, SpectrumVector, SpectrumVector]:
    """Decreasing spectra of ``rho_AB``, ``rho_A`` and ``rho_B``."""
    return (
        SpectrumVector(hermitian_eigen(s.rho).eigenvalues),
        SpectrumVector(hermitian_eigen(partial_trace_b(s)).eigenvalues),
        SpectrumVector(hermitian_eigen(partial_trace_a(s)).eigenvalues),
    )


def _reduction_gaps(s: BipartiteState):
    gap_a = kron(partial_trace_b(s), np.eye(s.dim_b)) - s.rho
    gap_b = kron(np.eye(s.dim_a), partial_trace_a(s)) - s.rho
    return gap_a, gap_b


def check_reduction(s: BipartiteState, tol: float = PSD_TOL) -> tuple[bool, bool, float, float]:
    """Test ``rho_A ⊗ I >= rho_AB`` and ``I ⊗ rho_B >= rho_AB``.

    Returns
    -------
    holds_a, holds_b : bool
        PSD verdicts, each with tolerance ``tol * max(1, max_eig)``.
    min_eig_a, min_eig_b : float
        Smallest eigenvalues of the two difference operators.
    """
    wa, wb = (hermitian_eigen(g).eigenvalues for g in _reduction_gaps(s))
    return _scaled_psd(wa, tol), _scaled_psd(wb, tol), float(wa[-1]), float(wb[-1])


def check_majorization_criterion(
    s: BipartiteState, tol: float = MAJOR_TOL
) -> tuple[MajorizationVerdict, MajorizationVerdict]:
    """Verdicts for ``lambda(rho_AB) ≺ lambda(rho_A)`` and ``≺ lambda(rho_B)``."""
    lab, la, lb = spectra(s)
    return majorizes(la, lab, tol), majorizes(lb, lab, tol)


@dataclass(frozen=True)
class CriterionReport:
    reduction_a_holds: bool
    reduction_b_holds: bool
    reduction_a_min_eig: float
    reduction_b_min_eig: float
    majorization_a: MajorizationVerdict
    majorization_b: MajorizationVerdict
    distillable_by_majorization: bool
    tol_psd: float
    tol_major: float

    def to_dict(self):
        return {
            "reduction_a_holds": self.reduction_a_holds,
            "reduction_b_holds": self.reduction_b_holds,
            "reduction_a_min_eig": self.reduction_a_min_eig,
            "reduction_b_min_eig": self.reduction_b_min_eig,
            "majorization_a": self.majorization_a.to_dict(),
            "majorization_b": self.majorization_b.to_dict(),
            "distillable_by_majorization": self.distillable_by_majorization,
            "tolerances": {"psd": self.tol_psd, "major": self.tol_major},
        }


def distillability_verdict(
    s: BipartiteState, tol_psd: float = PSD_TOL, tol_major: float = MAJOR_TOL
) -> CriterionReport:
    """Run both criteria and flag states certified distillable.

    An undistillable state satisfies both majorization relations, so a
    violation of either one certifies distillability. The converse gives
    nothing: ``distillable_by_majorization=False`` does not mean the state
    is undistillable.
    """
    ra, rb, ma, mb = check_reduction(s, tol_psd)
    va, vb = check_majorization_criterion(s, tol_major)
    return CriterionReport(
        ra, rb, ma, mb, va, vb, not (va.holds and vb.holds), tol_psd, tol_major
    )


def douglas_contraction(a, b, tol: float = PSD_TOL) -> np.ndarray:
    """Contraction ``C = b^{-1/2} a^{1/2}`` with ``a^{1/2} = b^{1/2} C``.

    Requires ``0 <= a <= b`` (within ``tol``) and ``b`` invertible. Then
    ``C C^dagger = b^{-1/2} a b^{-1/2} <= I``, so ``||C|| <= 1``.

    Raises
    ------
    InvalidInputError
        ``A_NOT_PSD``, ``ORDER_VIOLATED`` or ``B_SINGULAR``.
    NumericalError
        If the factorization residual exceeds ``1e-8``.
    """
    a = 0.5 * (np.asarray(a, dtype=np.complex128) + dagger(np.asarray(a, dtype=np.complex128)))
    b = 0.5 * (np.asarray(b, dtype=np.complex128) + dagger(np.asarray(b, dtype=np.complex128)))
    wa = hermitian_eigen(a).eigenvalues
    if not _scaled_psd(wa, tol):
        raise InvalidInputError(f"a is not PSD (min eigenvalue {wa[-1]:.3e})", "A_NOT_PSD")
    wd = hermitian_eigen(b - a).eigenvalues
    if not _scaled_psd(wd, tol):
        raise InvalidInputError(f"a <= b fails (min eigenvalue of b - a is {wd[-1]:.3e})", "ORDER_VIOLATED")
    wb = hermitian_eigen(b).eigenvalues
    if wb[-1] <= 1e-12 * max(1.0, wb[0]):
        raise InvalidInputError("b must be invertible; restrict to its support first", "B_SINGULAR")
    a_half = psd_sqrt(a)
    c = psd_inv_sqrt(b) @ a_half
    res = float(np.linalg.norm(psd_sqrt(b) @ c - a_half))
    if res > 1e-8:
        raise NumericalError(f"b^(1/2) C differs from a^(1/2) by {res:.3e}", "NUMERICAL_FAILURE")
    return c


@dataclass(frozen=True)
class Theorem1Witness:
    """Artifacts of the constructive proof that reduction implies majorization.

    All matrices live on the support-restricted system of local dimensions
    ``(rank, dim_b)`` where ``rank = rank(rho_A)``, expressed in the basis
    that diagonalizes ``rho_A`` in decreasing order.

    Attributes
    ----------
    u_a : np.ndarray
        ``rank x rank`` unitary diagonalizing the restricted ``rho_A``.
    v : np.ndarray
        Unitary diagonalizing ``rho_AB^{1/2}`` (decreasing eigenvalues).
    c : np.ndarray
        Contraction ``C = R V`` with ``R = (rho_A^{-1/2} ⊗ I) rho_AB^{1/2}``.
    s : np.ndarray
        ``rank x rank`` matrix ``S[i, j] = sum_k |C[(j, k), i]|^2``.
    """

    u_a: np.ndarray
    v: np.ndarray
    c: np.ndarray
    s: np.ndarray
    isometry: np.ndarray
    lambda_a: np.ndarray
    lambda_ab: np.ndarray
    residual_linear: float
    max_row_sum: float
    max_col_sum: float
    min_entry: float
    contraction_norm: float
    max_column_norm: float
    row_group_residual: float
    diagonalization_residual: float

    @property
    def rank(self) -> int:
        return self.s.shape[0]

    def summary(self):
        return {
            "rank_a": self.rank,
            "contraction_norm": self.contraction_norm,
            "min_entry": self.min_entry,
            "max_row_sum": self.max_row_sum,
            "max_col_sum": self.max_col_sum,
            "residual_linear": self.residual_linear,
            "max_column_norm": self.max_column_norm,
            "row_group_residual": self.row_group_residual,
            "diagonalization_residual": self.diagonalization_residual,
            "s": [[float(x) for x in row] for row in self.s.real],
        }


def _witness_matrix(c, rank, dim_b):
    # S[i, j] = sum_k |C[(j, k), i]|^2 for i, j < rank
    sq = np.abs(c[:, :rank]) ** 2
    return sq.reshape(rank, dim_b, rank).sum(axis=1).T


def build_theorem1_witness(s: BipartiteState, tol: float = PSD_TOL) -> Theorem1Witness:
    """Build the majorization witness for a state obeying A-side reduction.

    Steps: compress onto ``supp(rho_A) ⊗ H_B``; rotate so that ``rho_A`` is
    diagonal with decreasing entries; form the contraction
    ``R = (rho_A^{-1/2} ⊗ I) rho_AB^{1/2}``; diagonalize ``rho_AB^{1/2}`` by
    ``V``; set ``C = R V`` and read off ``S`` from squared moduli of ``C``.

    Raises
    ------
    ReductionViolatedError
        If ``rho_A ⊗ I >= rho_AB`` fails beyond ``tol``.
    NumericalError
        If any residual exceeds ten times its bound.
    """
    sub, iso = restrict_to_support(s)
    r, db = sub.dim_a, sub.dim_b
    lam_a, u_a = hermitian_eigen(partial_trace_b(sub))
    rot = kron(u_a, np.eye(db))
    rho = dagger(rot) @ sub.rho @ rot
    rho = 0.5 * (rho + dagger(rho))
    big_a = kron(np.diag(lam_a), np.eye(db))

    try:
        r_mat = douglas_contraction(rho, big_a, tol)
    except InvalidInputError as exc:
        if exc.code in ("ORDER_VIOLATED", "A_NOT_PSD"):
            raise ReductionViolatedError(str(exc)) from exc
        raise

    sqrt_w, v = hermitian_eigen(psd_sqrt(rho))
    c = r_mat @ v
    sq = np.abs(c) ** 2
    lam_ab = hermitian_eigen(s.rho).eigenvalues

    smat = _witness_matrix(c, r, db)
    # C^dagger (rho_A ⊗ I) C must be diag(lambda(rho_AB))
    diag_err = float(np.abs(dagger(c) @ big_a @ c - np.diag(sqrt_w**2)).max())
    w = Theorem1Witness(
        u_a=u_a,
        v=v,
        c=c,
        s=smat,
        isometry=iso,
        lambda_a=lam_a,
        lambda_ab=lam_ab,
        residual_linear=float(np.abs(smat @ lam_a - lam_ab[:r]).max()),
        max_row_sum=float(smat.sum(axis=1).max()),
        max_col_sum=float(smat.sum(axis=0).max()),
        min_entry=float(smat.min()),
        contraction_norm=operator_norm(c),
        max_column_norm=float(sq.sum(axis=0).max()),
        row_group_residual=float(np.abs(sq.reshape(r, db * r * db).sum(axis=1) - 1.0).max()),
        diagonalization_residual=diag_err,
    )
    _check_bounds(w)
    return w


def _bounds(w: Theorem1Witness):
    return [
        ("contraction_norm", w.contraction_norm - 1.0, CONTRACTION_TOL),
        ("min_entry", -w.min_entry, ENTRY_TOL),
        ("max_column_norm", w.max_column_norm - 1.0, SUM_TOL),
        ("row_group_residual", w.row_group_residual, ROW_GROUP_TOL),
        ("max_row_sum", w.max_row_sum - 1.0, SUM_TOL),
        ("max_col_sum", w.max_col_sum - 1.0, SUM_TOL),
        ("residual_linear", w.residual_linear, LINEAR_TOL),
    ]


def _check_bounds(w):
    for name, excess, bound in _bounds(w):
        if excess > FAILURE_FACTOR * bound:
            raise NumericalError(f"witness {name} exceeds 10x its bound ({excess:.3e} > {bound:g})")


@dataclass(frozen=True)
class VerificationReport:
    checks: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def verify_witness(w: Theorem1Witness, s: BipartiteState, tol: float = MAJOR_TOL) -> VerificationReport:
    """Re-derive every witness property from ``w.c``, ``w.s`` and the state.

    Nothing stored in the witness summary fields is trusted; each quantity
    is recomputed. Checks run in a fixed order and the first failure raises
    :class:`WitnessInvalidError` naming it.
    """
    lam_ab, lam_a, _ = spectra(s)
    r = w.s.shape[0]
    smat = np.asarray(w.s)
    sq = np.abs(np.asarray(w.c)) ** 2
    db = sq.shape[0] // r
    m = smat.real
    residuals = {
        "contraction_norm": operator_norm(w.c),
        "min_entry": float(m.min()),
        "max_row_sum": float(m.sum(axis=1).max()),
        "max_col_sum": float(m.sum(axis=0).max()),
        "max_column_norm": float(sq.sum(axis=0).max()),
        "row_group_residual": float(np.abs(sq.reshape(r, -1).sum(axis=1) - 1.0).max()),
        "residual_linear": float(np.abs(m @ lam_a.values[:r] - lam_ab.values[:r]).max()),
        "total_ab": float(lam_ab.values.sum()),
        "total_a": float(lam_a.values.sum()),
    }
    weak_in = lam_ab.values[:r]
    strong = majorizes(lam_a, lam_ab, tol)
    checks = [
        ("contraction", residuals["contraction_norm"] <= 1 + CONTRACTION_TOL),
        ("entries", residuals["min_entry"] >= -ENTRY_TOL),
        ("row_sum", residuals["max_row_sum"] <= 1 + SUM_TOL),
        ("col_sum", residuals["max_col_sum"] <= 1 + SUM_TOL),
        ("substochastic", is_doubly_substochastic(smat, SUM_TOL)),
        ("column_norms", residuals["max_column_norm"] <= 1 + SUM_TOL),
        ("row_groups", residuals["row_group_residual"] <= ROW_GROUP_TOL and sq.shape[0] == r * db),
        ("linear_relation", residuals["residual_linear"] <= LINEAR_TOL),
        ("weak_majorization", weakly_submajorizes(lam_a.values[:r], weak_in, tol)),
        ("totals", abs(residuals["total_ab"] - 1) <= tol and abs(residuals["total_a"] - 1) <= tol),
        ("partial_sums", strong.holds),
    ]
    for name, ok in checks:
        if not ok:
            raise WitnessInvalidError(name, f"residuals {residuals}")
    return VerificationReport(dict(checks), residuals)
