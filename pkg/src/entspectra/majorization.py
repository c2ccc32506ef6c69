"""Majorization orderings and doubly (sub)stochastic matrix predicates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

__all__ = [
    "MAJOR_TOL",
    "NEGATIVE_CLAMP",
    "MajorizationVerdict",
    "SpectrumVector",
    "is_doubly_stochastic",
    "is_doubly_substochastic",
    "majorizes",
    "pad_spectrum",
    "weakly_submajorizes",
]

MAJOR_TOL = 1e-9
NEGATIVE_CLAMP = 1e-12


@dataclass(frozen=True)
class SpectrumVector:
    """Nonnegative real vector kept in decreasing order.

    Entries in ``[-1e-12, 0)`` are clamped to zero on construction; anything
    more negative is rejected as a genuinely non-PSD spectrum.
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel()
        if not np.all(np.isfinite(v)):
            raise InvalidInputError("spectrum has non-finite entries", "NOT_FINITE")
        if v.size and v.min() < -NEGATIVE_CLAMP:
            raise InvalidInputError(
                f"spectrum entry {v.min():.3e} is below -{NEGATIVE_CLAMP:g}", "NEGATIVE_SPECTRUM"
            )
        v = np.sort(np.maximum(v, 0.0))[::-1].copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def tolist(self):
        return self.values.tolist()


def _spectrum(x) -> SpectrumVector:
    return x if isinstance(x, SpectrumVector) else SpectrumVector(x)


def pad_spectrum(x, n: int) -> SpectrumVector:
    """Append zeros to ``x`` until it has length ``n``."""
    x = _spectrum(x)
    if n < len(x):
        raise InvalidInputError(f"cannot pad length {len(x)} to {n}", "TARGET_TOO_SMALL")
    return SpectrumVector(np.concatenate([x.values, np.zeros(n - len(x))]))


@dataclass(frozen=True)
class MajorizationVerdict:
    """Outcome of ``x ≺ y``.

    Attributes
    ----------
    holds : bool
    margins : np.ndarray
        ``margins[k-1] = sum(y[:k]) - sum(x[:k])`` for ``k = 1..n`` on the
        sorted, padded vectors. Negative entries mark violated partial sums.
    first_failure : int or None
        Smallest 1-based ``k`` at which the relation fails.
    reason : str or None
        ``"PARTIAL_SUM"`` or ``"TOTAL_SUM_MISMATCH"`` when ``holds`` is false.
    """

    holds: bool
    margins: np.ndarray
    first_failure: int | None = None
    reason: str | None = None

    def __bool__(self):
        return self.holds

    @property
    def min_margin(self) -> float:
        return float(self.margins.min()) if self.margins.size else 0.0

    def to_dict(self):
        return {
            "holds": self.holds,
            "first_failure": self.first_failure,
            "reason": self.reason,
            "margins": [float(m) for m in self.margins],
        }


def _partial_sum_margins(y, x):
    y, x = _spectrum(y), _spectrum(x)
    n = max(len(x), len(y))
    yv = pad_spectrum(y, n).values
    xv = pad_spectrum(x, n).values
    return np.cumsum(yv) - np.cumsum(xv)


def majorizes(y, x, tol: float = MAJOR_TOL) -> MajorizationVerdict:
    """Decide whether ``x`` is majorized by ``y``.

    Both vectors are sorted decreasingly and the shorter one is padded with
    zeros. The relation holds when every partial sum of ``x`` up to ``n - 1``
    is at most the matching partial sum of ``y`` (plus ``tol``) and the
    totals agree within ``tol``.
    """
    margins = _partial_sum_margins(y, x)
    n = margins.size
    if n == 0:
        return MajorizationVerdict(True, margins)
    bad = np.flatnonzero(margins[:-1] < -tol)
    if bad.size:
        return MajorizationVerdict(False, margins, int(bad[0]) + 1, "PARTIAL_SUM")
    if abs(margins[-1]) > tol:
        return MajorizationVerdict(False, margins, n, "TOTAL_SUM_MISMATCH")
    return MajorizationVerdict(True, margins)


def weakly_submajorizes(y, x, tol: float = MAJOR_TOL) -> bool:
    """True iff every partial sum of ``x``, the full sum included, is at most that of ``y``."""
    return bool(np.all(_partial_sum_margins(y, x) >= -tol))


def _real_square(s, tol):
    arr = np.asarray(s)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {arr.shape}", "NOT_SQUARE")
    if np.iscomplexobj(arr):
        if np.abs(arr.imag).max(initial=0.0) > tol:
            raise InvalidInputError("matrix has non-negligible imaginary parts", "NOT_REAL")
        arr = arr.real
    return arr.astype(float)


def is_doubly_substochastic(s, tol: float = MAJOR_TOL) -> bool:
    """Nonnegative entries, and all row and column sums at most one."""
    m = _real_square(s, tol)
    return bool(
        np.all(m >= -tol) and np.all(m.sum(axis=1) <= 1 + tol) and np.all(m.sum(axis=0) <= 1 + tol)
    )


def is_doubly_stochastic(s, tol: float = MAJOR_TOL) -> bool:
    m = _real_square(s, tol)
    return bool(
        np.all(m >= -tol)
        and np.all(np.abs(m.sum(axis=1) - 1) <= tol)
        and np.all(np.abs(m.sum(axis=0) - 1) <= tol)
    )
