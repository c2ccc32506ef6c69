import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entspectra.criteria import (
    build_theorem1_witness,
    check_majorization_criterion,
    check_reduction,
    distillability_verdict,
    douglas_contraction,
    spectra,
    verify_witness,
)
from entspectra.errors import InvalidInputError, ReductionViolatedError, WitnessInvalidError
from entspectra.linalg import kron, operator_norm
from entspectra.majorization import is_doubly_substochastic, majorizes
from entspectra.states import (
    BipartiteState,
    bell_state,
    isotropic_state,
    maximally_correlated_state,
    mems_rank2_state,
    product_state,
    pure_state,
    random_density_matrix,
    random_separable_state,
    random_unitary,
    swap_subsystems,
)

PRODUCT = product_state(np.diag([0.6, 0.4]), np.diag([0.7, 0.3]))
MIXED = BipartiteState(2, 2, np.eye(4) / 4)


def test_check_reduction_examples():
    assert check_reduction(pure_state([1, 0, 0, 0], 2, 2)) == (True, True, 0.0, 0.0)
    ra, rb, ma, mb = check_reduction(bell_state())
    assert (ra, rb) == (False, False)
    assert ma == pytest.approx(-0.5, abs=1e-12) and mb == pytest.approx(-0.5, abs=1e-12)


@pytest.mark.parametrize("seed", range(20))
def test_separable_states_satisfy_reduction(seed):
    ra, rb, ma, mb = check_reduction(random_separable_state(3, 3, 1 + seed % 5, seed))
    assert ra and rb and ma >= -1e-9 and mb >= -1e-9


def test_majorization_criterion_examples():
    va, vb = check_majorization_criterion(MIXED)
    assert va.holds and vb.holds
    va, vb = check_majorization_criterion(bell_state())
    assert va.first_failure == 1 and vb.first_failure == 1
    # d = 3, F = 0.5: spectrum (0.5, 0.0625 x 8) vs (1/3, 1/3, 1/3, 0, ...)
    va, vb = check_majorization_criterion(isotropic_state(3, 0.5))
    assert not va.holds and va.first_failure == 1
    assert va.margins[0] == pytest.approx(1 / 3 - 0.5, abs=1e-12)


def test_spectra_examples():
    lab, la, lb = spectra(bell_state())
    np.testing.assert_allclose(lab.values, [1, 0, 0, 0], atol=1e-12)
    np.testing.assert_allclose(la.values, [0.5, 0.5], atol=1e-15)
    lab, la, lb = spectra(isotropic_state(2, 0.75))
    np.testing.assert_allclose(lab.values, [0.75, 1 / 12, 1 / 12, 1 / 12], atol=1e-14)
    lab, la, lb = spectra(PRODUCT)
    np.testing.assert_allclose(lab.values, [0.42, 0.28, 0.18, 0.12], atol=1e-15)
    np.testing.assert_allclose(la.values, [0.6, 0.4], atol=1e-15)
    np.testing.assert_allclose(lb.values, [0.7, 0.3], atol=1e-15)


def test_distillability_verdict_examples():
    assert distillability_verdict(bell_state()).distillable_by_majorization
    assert not distillability_verdict(random_separable_state(2, 3, 3, 4)).distillable_by_majorization
    mc = maximally_correlated_state([[0.5, 0.3], [0.3, 0.5]])
    rep = distillability_verdict(mc)
    assert rep.distillable_by_majorization
    assert rep.distillable_by_majorization == (not (rep.majorization_a.holds and rep.majorization_b.holds))


def test_douglas_examples():
    np.testing.assert_allclose(douglas_contraction(np.eye(2), np.eye(2)), np.eye(2), atol=1e-15)
    np.testing.assert_allclose(douglas_contraction(np.zeros((2, 2)), np.eye(2)), 0, atol=1e-15)
    c = douglas_contraction(np.diag([0.5, 0]), np.eye(2))
    np.testing.assert_allclose(c, np.diag([1 / np.sqrt(2), 0]), atol=1e-15)
    assert operator_norm(c) == pytest.approx(0.70710678118654752, abs=1e-15)


def test_douglas_errors():
    with pytest.raises(InvalidInputError, match="ORDER_VIOLATED"):
        douglas_contraction(np.eye(2), 0.5 * np.eye(2))
    with pytest.raises(InvalidInputError, match="A_NOT_PSD"):
        douglas_contraction(np.diag([1, -1]), 2 * np.eye(2))
    with pytest.raises(InvalidInputError, match="B_SINGULAR"):
        douglas_contraction(np.zeros((2, 2)), np.diag([1, 0]))


def test_witness_product_state():
    w = build_theorem1_witness(PRODUCT)
    np.testing.assert_allclose(w.s @ np.array([0.6, 0.4]), [0.42, 0.28], atol=1e-8)
    assert is_doubly_substochastic(w.s)
    assert verify_witness(w, PRODUCT).passed


def test_witness_maximally_mixed():
    w = build_theorem1_witness(MIXED)
    np.testing.assert_allclose(w.s @ np.array([0.5, 0.5]), [0.25, 0.25], atol=1e-12)
    rep = verify_witness(w, MIXED)
    assert rep.passed
    assert rep.residuals["residual_linear"] <= 1e-10
    assert rep.residuals["row_group_residual"] <= 1e-10
    assert rep.residuals["contraction_norm"] <= 1 + 1e-10


def test_witness_rejects_bell():
    with pytest.raises(ReductionViolatedError):
        build_theorem1_witness(bell_state())


def test_witness_rank_deficient_marginal():
    s = pure_state([0, 0, 1, 0, 0, 0], 3, 2)  # |1_A 0_B>
    w = build_theorem1_witness(s)
    assert w.rank == 1
    np.testing.assert_allclose(w.s, [[1.0]], atol=1e-12)
    assert verify_witness(w, s).passed


def test_perturbed_witness_is_rejected():
    s = random_separable_state(2, 2, 3, 1)
    w = build_theorem1_witness(s)
    bad = w.s.copy()
    bad[0, 1] += 0.5
    with pytest.raises(WitnessInvalidError) as info:
        verify_witness(dataclasses.replace(w, s=bad), s)
    assert info.value.check == "row_sum"


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dims=st.sampled_from([(2, 2), (2, 3), (3, 2), (3, 3)]))
def test_witness_soundness_on_separable_states(seed, dims):
    s = random_separable_state(*dims, 1 + seed % 6, seed)
    w = build_theorem1_witness(s)
    rep = verify_witness(w, s)
    assert rep.passed
    lab, la, _ = spectra(s)
    np.testing.assert_allclose(w.s @ la.values[: w.rank], lab.values[: w.rank], atol=1e-8)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dims=st.sampled_from([(2, 2), (2, 3), (3, 2), (3, 3)]))
def test_reduction_implies_majorization_on_random_states(seed, dims):
    n = dims[0] * dims[1]
    s = BipartiteState(*dims, random_density_matrix(n, n, seed))
    ra, rb, _, _ = check_reduction(s)
    va, vb = check_majorization_criterion(s, 1e-8)
    assert not ra or va.holds
    assert not rb or vb.holds


@pytest.mark.parametrize("seed", range(10))
def test_b_side_equals_swapped_a_side(seed):
    s = BipartiteState(2, 3, random_density_matrix(6, 6, seed))
    t = swap_subsystems(s)
    ra, rb, ma, mb = check_reduction(s)
    ta, tb, na, nb = check_reduction(t)
    assert (ra, rb) == (tb, ta)
    assert ma == pytest.approx(nb, abs=1e-12) and mb == pytest.approx(na, abs=1e-12)
    va, vb = check_majorization_criterion(s)
    wa, wb = check_majorization_criterion(t)
    assert va.holds == wb.holds and vb.holds == wa.holds
    np.testing.assert_allclose(vb.margins, wa.margins, atol=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_local_unitary_invariance(seed):
    s = BipartiteState(2, 3, random_density_matrix(6, 4, seed))
    u = kron(random_unitary(2, seed + 100), random_unitary(3, seed + 200))
    t = s.conjugate(u)
    for x, y in zip(spectra(s), spectra(t)):
        np.testing.assert_allclose(x.values, y.values, atol=1e-9)
    r1, r2 = distillability_verdict(s), distillability_verdict(t)
    assert r1.reduction_a_holds == r2.reduction_a_holds
    assert r1.reduction_b_holds == r2.reduction_b_holds
    assert r1.distillable_by_majorization == r2.distillable_by_majorization
    assert r1.reduction_a_min_eig == pytest.approx(r2.reduction_a_min_eig, abs=1e-9)


def test_mems_converse_fails():
    s = mems_rank2_state(0.5)
    ra, rb, ma, mb = check_reduction(s)
    assert not ra and not rb and ma <= -1e-3
    va, vb = check_majorization_criterion(s)
    assert va.holds and vb.holds


@pytest.mark.parametrize("seed", range(10))
def test_maxcorr_diagonal_majorized_by_spectrum(seed):
    alpha = random_density_matrix(3, 3, seed)
    s = maximally_correlated_state(alpha)
    lab, la, _ = spectra(s)
    assert majorizes(lab, la).holds
    assert distillability_verdict(s).distillable_by_majorization
