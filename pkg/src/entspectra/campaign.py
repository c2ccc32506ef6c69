"""Seeded verification campaigns for the reduction => majorization implication.

Trial ``i`` always uses seed ``base_seed + i``, so campaigns are reproducible
and can be split across workers without coordinating generator state.
Aggregation keeps only counts and maxima, which do not depend on trial order.
"""

from __future__ import annotations

import numpy as np

from .criteria import build_theorem1_witness, distillability_verdict, verify_witness
from .errors import InvalidInputError, ReductionViolatedError, WitnessInvalidError
from .linalg import PSD_TOL
from .majorization import MAJOR_TOL
from .states import (
    RNG_ALGORITHM,
    BipartiteState,
    isotropic_state,
    maximally_correlated_state,
    random_density_matrix,
    random_separable_state,
    swap_subsystems,
)

ENSEMBLES = ("separable", "random-filtered", "isotropic-scan", "maxcorr")


def _trial_states(ensemble, dims, trials, seed):
    da, db = dims
    if ensemble == "separable":
        for i in range(trials):
            yield {"seed": seed + i}, random_separable_state(da, db, 1 + i % (da * db), seed + i)
    elif ensemble == "random-filtered":
        n = da * db
        for i in range(trials):
            yield {"seed": seed + i}, BipartiteState(da, db, random_density_matrix(n, n, seed + i))
    elif ensemble == "isotropic-scan":
        grid = sorted(set(np.linspace(0.0, 1.0, trials).tolist()) | {1.0 / da})
        for f in grid:
            yield {"fidelity": f}, isotropic_state(da, f)
    elif ensemble == "maxcorr":
        for i in range(trials):
            yield {"seed": seed + i}, maximally_correlated_state(random_density_matrix(da, da, seed + i))


def _witness_ok(state, tol_psd, tol_major):
    try:
        w = build_theorem1_witness(state, tol_psd)
        verify_witness(w, state, tol_major)
    except (ReductionViolatedError, WitnessInvalidError):
        return False, None
    return True, w


def run_campaign(
    ensemble: str,
    dims: tuple[int, int],
    trials: int,
    seed: int = 0,
    tol_psd: float = PSD_TOL,
    tol_major: float = MAJOR_TOL,
    witness: bool = True,
) -> dict:
    """Check the implication on every trial state and tally the outcome.

    A violation is a side (A or B) where reduction holds but majorization
    fails, or where the witness cannot be built or verified. The isotropic
    scan also counts disagreements with the closed-form threshold
    ``F <= 1/d`` as violations.

    Raises
    ------
    InvalidInputError
        Unknown ensemble, ``trials < 1`` or dimensions the ensemble does not
        support.
    NumericalError
        Propagated from witness construction.
    """
    if ensemble not in ENSEMBLES:
        raise InvalidInputError(f"unknown ensemble {ensemble!r}; choose from {', '.join(ENSEMBLES)}")
    if trials < 1:
        raise InvalidInputError(f"trials must be >= 1, got {trials}", "BAD_TRIALS")
    if ensemble in ("isotropic-scan", "maxcorr") and dims[0] != dims[1]:
        raise InvalidInputError(f"ensemble {ensemble} needs equal local dimensions, got {dims}", "BAD_DIMENSION")
    if ensemble == "isotropic-scan" and dims[0] < 2:
        raise InvalidInputError("isotropic scan needs d >= 2", "BAD_DIMENSION")

    counts = dict.fromkeys(
        [
            "checked",
            "reduction_a_held",
            "reduction_b_held",
            "majorization_a_held",
            "majorization_b_held",
            "witness_verified",
            "distillable_by_majorization",
            "violations",
        ],
        0,
    )
    maxima = {"contraction_norm": 0.0, "residual_linear": 0.0, "row_group_residual": 0.0}
    min_margin = np.inf
    scan = []
    for tag, state in _trial_states(ensemble, dims, trials, seed):
        rep = distillability_verdict(state, tol_psd, tol_major)
        counts["checked"] += 1
        counts["reduction_a_held"] += rep.reduction_a_holds
        counts["reduction_b_held"] += rep.reduction_b_holds
        counts["majorization_a_held"] += rep.majorization_a.holds
        counts["majorization_b_held"] += rep.majorization_b.holds
        counts["distillable_by_majorization"] += rep.distillable_by_majorization
        sides = [
            (rep.reduction_a_holds, rep.majorization_a, state),
            (rep.reduction_b_holds, rep.majorization_b, None),
        ]
        for reduction, verdict, side_state in sides:
            if not reduction:
                continue
            min_margin = min(min_margin, verdict.min_margin)
            if not verdict.holds:
                counts["violations"] += 1
                continue
            if witness:
                ok, w = _witness_ok(side_state or swap_subsystems(state), tol_psd, tol_major)
                if not ok:
                    counts["violations"] += 1
                    continue
                counts["witness_verified"] += 1
                maxima["contraction_norm"] = max(maxima["contraction_norm"], w.contraction_norm)
                maxima["residual_linear"] = max(maxima["residual_linear"], w.residual_linear)
                maxima["row_group_residual"] = max(maxima["row_group_residual"], w.row_group_residual)
        if ensemble == "isotropic-scan":
            scan.append((tag["fidelity"], rep.majorization_a.holds and rep.majorization_b.holds))

    summary = {
        "ensemble": ensemble,
        "dims": f"{dims[0]}x{dims[1]}",
        "trials": trials,
        "seed": seed,
        "rng": RNG_ALGORITHM,
        "tolerances": {"psd": tol_psd, "major": tol_major},
        **counts,
        "max": maxima,
        "min_majorization_margin_given_reduction": None if min_margin == np.inf else float(min_margin),
    }
    if ensemble == "isotropic-scan":
        d = dims[0]
        mismatches = [f for f, holds in scan if holds != (f <= 1.0 / d + 1e-12)]
        held = [f for f, holds in scan if holds]
        failed = [f for f, holds in scan if not holds]
        summary["threshold_closed_form"] = 1.0 / d
        summary["transition"] = {
            "last_holding": max(held) if held else None,
            "first_failing": min(failed) if failed else None,
        }
        summary["closed_form_mismatches"] = len(mismatches)
        summary["violations"] += len(mismatches)
    return summary
