"""Bipartite density matrices and the state families used throughout.

Product-basis convention: the basis vector ``|i_A, j_B>`` sits at flat index
``i * dim_b + j`` (0-based), so the B index runs fastest. This matches
``numpy.kron`` and :func:`entspectra.linalg.kron`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, NumericalError
from .linalg import (
    HERMITIAN_RTOL,
    PSD_TOL,
    as_matrix,
    dagger,
    hermitian_eigen,
    hermiticity_residual,
    kernel_threshold,
    kron,
)

__all__ = [
    "RNG_ALGORITHM",
    "BipartiteState",
    "bell_state",
    "discarded_block_norm",
    "embed_support",
    "isotropic_state",
    "make_rng",
    "maximally_correlated_state",
    "mems_rank2_state",
    "partial_trace_a",
    "partial_trace_b",
    "product_state",
    "pure_state",
    "random_density_matrix",
    "random_separable_state",
    "random_unitary",
    "restrict_to_support",
    "swap_subsystems",
]

TRACE_TOL = 1e-10
SUPPORT_TOL = 1e-9
RNG_ALGORITHM = f"numpy.random.PCG64 (numpy {np.__version__}), ziggurat standard normals"


def make_rng(seed) -> np.random.Generator:
    """Seeded PCG64 generator; an existing ``Generator`` is passed through."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Density matrix on ``H_A ⊗ H_B`` tagged with its local dimensions.

    Validation happens here and only here: Hermitian (relative ``1e-10``),
    unit trace (``1e-10``) and PSD (minimum eigenvalue ``>= -1e-9``). The
    stored matrix is the symmetrized, read-only copy of the input.
    """

    dim_a: int
    dim_b: int
    rho: np.ndarray

    def __post_init__(self):
        da, db = int(self.dim_a), int(self.dim_b)
        if da < 1 or db < 1:
            raise InvalidInputError(f"local dimensions must be >= 1, got {da}x{db}", "BAD_DIMENSION")
        rho = as_matrix(self.rho, name="rho")
        n = da * db
        if rho.shape != (n, n):
            raise InvalidInputError(
                f"rho has shape {rho.shape}, expected ({n}, {n}) for dims {da}x{db}", "BAD_DIMENSION"
            )
        scale = max(1.0, float(np.linalg.norm(rho)))
        res = hermiticity_residual(rho)
        if res > HERMITIAN_RTOL * scale:
            raise InvalidInputError(f"rho is not Hermitian (residual {res:.3e})", "NOT_HERMITIAN")
        rho = 0.5 * (rho + dagger(rho))
        tr = float(np.trace(rho).real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidInputError(f"rho has trace {tr!r}, expected 1", "BAD_TRACE")
        lmin = float(hermitian_eigen(rho).eigenvalues[-1])
        if lmin < -PSD_TOL:
            raise InvalidInputError(f"rho is not PSD (min eigenvalue {lmin:.3e})", "NOT_PSD")
        rho.setflags(write=False)
        object.__setattr__(self, "dim_a", da)
        object.__setattr__(self, "dim_b", db)
        object.__setattr__(self, "rho", rho)

    @property
    def dims(self) -> tuple[int, int]:
        return self.dim_a, self.dim_b

    def conjugate(self, unitary) -> "BipartiteState":
        """Return ``U rho U^dagger`` with the same local dimensions."""
        u = as_matrix(unitary)
        return BipartiteState(self.dim_a, self.dim_b, u @ self.rho @ dagger(u))


def _blocks(s: BipartiteState) -> np.ndarray:
    # rho[(i, j), (k, l)] -> t[i, j, k, l]
    return s.rho.reshape(s.dim_a, s.dim_b, s.dim_a, s.dim_b)


def partial_trace_b(s: BipartiteState) -> np.ndarray:
    """Reduced state on A: ``[i, k] = sum_j rho[(i, j), (k, j)]``."""
    return np.einsum("ijkj->ik", _blocks(s))


def partial_trace_a(s: BipartiteState) -> np.ndarray:
    """Reduced state on B: ``[j, l] = sum_i rho[(i, j), (i, l)]``."""
    return np.einsum("ijil->jl", _blocks(s))


def swap_subsystems(s: BipartiteState) -> BipartiteState:
    """Relabel A <-> B (a pure index permutation)."""
    t = _blocks(s).transpose(1, 0, 3, 2).reshape(s.rho.shape)
    return BipartiteState(s.dim_b, s.dim_a, t)


def restrict_to_support(s: BipartiteState) -> tuple[BipartiteState, np.ndarray]:
    """Compress the state onto ``supp(rho_A) ⊗ H_B``.

    The state vanishes on ``ker(rho_A) ⊗ H_B``, so nothing is lost by the
    compression. This is verified rather than assumed: the Frobenius norm of
    everything discarded must stay below ``1e-9``.

    Returns
    -------
    restricted : BipartiteState
        State of local dimensions ``(rank(rho_A), dim_b)`` with full-rank
        A-marginal. Returned unchanged when ``rho_A`` is already full rank.
    isometry : np.ndarray
        ``dim_a x rank`` matrix with orthonormal columns spanning the
        support; :func:`embed_support` maps the restricted state back.
    """
    w, u = hermitian_eigen(partial_trace_b(s))
    support = w > kernel_threshold(w)
    rank = int(support.sum())
    if rank == 0:
        raise InvalidInputError("reduced state has no support", "RANK_ZERO")
    if rank == s.dim_a:
        return s, np.eye(s.dim_a, dtype=np.complex128)
    iso = u[:, support]
    k = kron(iso, np.eye(s.dim_b))
    sub = dagger(k) @ s.rho @ k
    lost = discarded_block_norm(s, iso)
    if lost > SUPPORT_TOL:
        raise NumericalError(f"state has weight {lost:.3e} outside the A-support", "NUMERICAL_FAILURE")
    return BipartiteState(rank, s.dim_b, sub), iso


def embed_support(restricted: BipartiteState, isometry) -> BipartiteState:
    """Inverse of :func:`restrict_to_support`: ``(W ⊗ I) rho' (W ⊗ I)^dagger``."""
    k = kron(isometry, np.eye(restricted.dim_b))
    return BipartiteState(k.shape[0] // restricted.dim_b, restricted.dim_b, k @ restricted.rho @ dagger(k))


def discarded_block_norm(s: BipartiteState, isometry) -> float:
    """Frobenius norm of the part of ``rho`` touching ``ker(rho_A) ⊗ H_B``."""
    iso = as_matrix(isometry, square=False)
    p = kron(iso @ dagger(iso), np.eye(s.dim_b))
    return float(np.linalg.norm(s.rho - p @ s.rho @ p))


# --------------------------------------------------------------------------
# state families


def pure_state(amplitudes, d_a: int, d_b: int) -> BipartiteState:
    """Projector ``|psi><psi|`` for a normalized amplitude vector."""
    psi = np.asarray(amplitudes, dtype=np.complex128).ravel()
    if psi.size != d_a * d_b:
        raise InvalidInputError(f"expected {d_a * d_b} amplitudes, got {psi.size}", "BAD_LENGTH")
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > 1e-10:
        raise InvalidInputError(f"amplitude vector has norm {norm!r}", "BAD_NORM")
    return BipartiteState(d_a, d_b, np.outer(psi, psi.conj()))


def _max_entangled(d):
    psi = np.zeros(d * d, dtype=np.complex128)
    psi[np.arange(d) * (d + 1)] = 1.0 / np.sqrt(d)
    return psi


def bell_state() -> BipartiteState:
    """``|Φ+> = (|00> + |11>)/sqrt(2)`` on two qubits."""
    return pure_state(_max_entangled(2), 2, 2)


def product_state(rho_a, rho_b) -> BipartiteState:
    a, b = as_matrix(rho_a), as_matrix(rho_b)
    return BipartiteState(a.shape[0], b.shape[0], kron(a, b))


def isotropic_state(d: int, fidelity: float) -> BipartiteState:
    """``F |Φ+_d><Φ+_d| + (1 - F)(I - |Φ+_d><Φ+_d|)/(d^2 - 1)``.

    Spectrum: ``F`` once and ``(1 - F)/(d^2 - 1)`` with multiplicity
    ``d^2 - 1``. Both marginals equal ``I/d``.
    """
    if int(d) < 2:
        raise InvalidInputError(f"isotropic states need d >= 2, got {d}", "BAD_DIMENSION")
    f = float(fidelity)
    if not 0.0 <= f <= 1.0:
        raise InvalidInputError(f"fidelity must lie in [0, 1], got {fidelity}", "BAD_FIDELITY")
    d = int(d)
    phi = _max_entangled(d)
    proj = np.outer(phi, phi.conj())
    rho = f * proj + (1.0 - f) * (np.eye(d * d) - proj) / (d * d - 1)
    return BipartiteState(d, d, rho)


def maximally_correlated_state(alpha) -> BipartiteState:
    """``sum_ij alpha[i, j] |i><j| ⊗ |i><j|`` for a density matrix ``alpha``."""
    try:
        a = as_matrix(alpha, name="alpha")
    except InvalidInputError as exc:
        raise InvalidInputError(str(exc), "BAD_ALPHA") from exc
    scale = max(1.0, float(np.linalg.norm(a)))
    if hermiticity_residual(a) > HERMITIAN_RTOL * scale:
        raise InvalidInputError("alpha is not Hermitian", "BAD_ALPHA")
    if abs(np.trace(a).real - 1.0) > TRACE_TOL:
        raise InvalidInputError("alpha must have unit trace", "BAD_ALPHA")
    if hermitian_eigen(a).eigenvalues[-1] < -PSD_TOL:
        raise InvalidInputError("alpha is not PSD", "BAD_ALPHA")
    d = a.shape[0]
    diag = np.arange(d) * (d + 1)
    rho = np.zeros((d * d, d * d), dtype=np.complex128)
    rho[np.ix_(diag, diag)] = a
    return BipartiteState(d, d, rho)


def mems_rank2_state(f: float) -> BipartiteState:
    """Rank-2 mixture ``F |Φ+><Φ+| + (1 - F) |01><01|`` on two qubits."""
    f = float(f)
    if not 0.0 < f < 1.0:
        raise InvalidInputError(f"F must lie strictly between 0 and 1, got {f}", "BAD_F")
    phi = _max_entangled(2)
    rho = f * np.outer(phi, phi.conj())
    rho[1, 1] += 1.0 - f
    return BipartiteState(2, 2, rho)


# --------------------------------------------------------------------------
# random ensembles


def _ginibre(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def _random_density(rng, d, rank):
    g = _ginibre(rng, d, rank)
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


def random_density_matrix(d: int, rank: int, seed) -> np.ndarray:
    """``G G^dagger / Tr(G G^dagger)`` with ``G`` a ``d x rank`` complex Gaussian matrix."""
    if not 1 <= rank <= d:
        raise InvalidInputError(f"rank must lie in [1, {d}], got {rank}", "BAD_RANK")
    return _random_density(make_rng(seed), d, rank)


def random_unitary(d: int, seed) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
    q, r = np.linalg.qr(_ginibre(make_rng(seed), d, d))
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_separable_state(d_a: int, d_b: int, n_terms: int, seed, local_rank=None) -> BipartiteState:
    """Convex mixture of ``n_terms`` random product states.

    Mixing weights are independent uniform draws on ``(0, 1]``, normalized.
    Each local factor has rank ``local_rank`` (clipped to the local
    dimension), or a uniformly drawn rank when ``local_rank`` is None, so
    pure and mixed factors both occur.
    """
    if n_terms < 1:
        raise InvalidInputError(f"n_terms must be >= 1, got {n_terms}", "BAD_TERMS")
    rng = make_rng(seed)
    weights = 1.0 - rng.random(n_terms)
    weights /= weights.sum()
    rho = np.zeros((d_a * d_b, d_a * d_b), dtype=np.complex128)
    for p in weights:
        ra = min(local_rank, d_a) if local_rank else int(rng.integers(1, d_a + 1))
        rb = min(local_rank, d_b) if local_rank else int(rng.integers(1, d_b + 1))
        rho += p * np.kron(_random_density(rng, d_a, ra), _random_density(rng, d_b, rb))
    return BipartiteState(d_a, d_b, rho / np.trace(rho).real)
