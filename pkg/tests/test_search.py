"""Ensemble sampling and the derivative-free ascent."""

import numpy as np
import pytest

from schoenberg.errors import InvalidInputError, RejectedStartError
from schoenberg.matrices import is_normal, sds_matrix
from schoenberg.poly import centroid_residual, recenter
from schoenberg.search import (
    ENSEMBLE_KINDS,
    Ensemble,
    SearchSettings,
    maximize,
    sample,
    sample_array,
    sample_one,
    sample_seed,
    verify_candidate,
)
from schoenberg.sendov import SendovInstance


def test_ensemble_validation():
    with pytest.raises(InvalidInputError):
        Ensemble(kind="nope", n=4, count=1)
    with pytest.raises(InvalidInputError):
        Ensemble(kind="gaussian", n=1, count=1)
    with pytest.raises(InvalidInputError):
        Ensemble(kind="gaussian", n=4, count=0)
    with pytest.raises(InvalidInputError):
        Ensemble(kind="sendov-boundary", n=4, count=1, recenter=True)


def test_sample_streams_are_reproducible():
    for kind in ENSEMBLE_KINDS:
        ens = Ensemble(kind=kind, n=5, count=4, seed=901)
        first = list(sample(ens))
        second = list(sample(ens))
        for a, b in zip(first, second):
            if kind == "sendov-boundary":
                assert a.a == b.a
                np.testing.assert_array_equal(a.other_zeros, b.other_zeros)
            else:
                np.testing.assert_array_equal(a, b)


def test_sample_seed_is_index_stable():
    ens = Ensemble(kind="gaussian", n=4, count=10, seed=17)
    np.testing.assert_array_equal(sample_one(ens, 7), list(sample(ens))[7])
    assert sample_seed(17, 7) == sample_seed(17, 7)
    assert sample_seed(17, 7) != sample_seed(17, 8)
    assert sample_seed(18, 7) != sample_seed(17, 7)


def test_uniform_disk_stays_in_disk():
    ens = Ensemble(kind="uniform-disk", n=8, count=50, seed=3)
    zs = sample_array(ens)
    assert np.abs(zs).max() <= 1.0


def test_collinear_samples_are_collinear_and_normal():
    ens = Ensemble(kind="collinear", n=6, count=20, seed=5, recenter=True)
    for z in sample(ens):
        assert abs(z.sum()) <= 1e-12 * max(1, np.abs(z).max())
        assert is_normal(sds_matrix(z), tol=1e-10)


def test_roots_of_unity_zero_perturbation_is_exact():
    ens = Ensemble(kind="roots-of-unity-perturbed", n=6, count=3, seed=9, scale=0.0)
    base = np.exp(2j * np.pi * np.arange(6) / 6)
    for z in sample(ens):
        np.testing.assert_array_equal(z, base)
        assert abs(z.sum()) <= 1e-14


def test_sendov_boundary_samples():
    ens = Ensemble(kind="sendov-boundary", n=5, count=20, seed=11)
    a_vals, others = sample_array(ens)
    assert ((0 <= a_vals) & (a_vals <= 1)).all()
    np.testing.assert_allclose(np.abs(others), 1.0, atol=1e-14)


def test_maximize_st1_sharp_start_cannot_exceed_one():
    start = np.array([0, 0, 0, 1, -1], dtype=complex)
    rec = maximize("ST1", start, SearchSettings(max_iterations=50))
    assert rec.start_value == pytest.approx(1.0, abs=1e-9)
    assert rec.objective_value <= 1.0 + 1e-6
    assert rec.objective_value >= rec.start_value


def test_maximize_kt_collinear_start_stays_at_equality():
    start = recenter(np.array([0.3, -1.2, 0.9, 2.0], dtype=complex))
    rec = maximize("KT", start, SearchSettings(max_iterations=50))
    assert rec.start_value == pytest.approx(1.0, abs=1e-10)
    assert abs(rec.objective_value - 1.0) <= 1e-8


def test_maximize_m_minus2_paper_start():
    inst = SendovInstance(a=1.0, other_zeros=np.array([-1.0, -1.0]))
    rec = maximize("M_MINUS2", inst, SearchSettings(max_iterations=80))
    assert rec.objective_value <= 1.0 + 1e-8
    assert rec.objective_value >= rec.start_value
    assert rec.a is not None and 0 <= rec.a <= 1
    assert np.abs(rec.zeros[1:]).max() <= 1 + 1e-12


def test_maximize_monotone_and_constraints():
    rng = np.random.default_rng(201)
    ens = Ensemble(kind="uniform-disk", n=4, count=3, seed=77, recenter=True)
    for i, start in enumerate(sample(ens)):
        rec = maximize("STAR", start, SearchSettings(max_iterations=40), sample_seed=sample_seed(77, i))
        assert rec.objective_value >= rec.start_value
        assert centroid_residual(rec.zeros) <= 1e-10
        assert rec.objective_value <= 1 + 1e-6
        assert rec.iterations >= 1
        assert rec.reports  # full report set attached


def test_maximize_uncentered_objective():
    rng = np.random.default_rng(203)
    z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    rec = maximize("S", z, SearchSettings(max_iterations=40))
    assert rec.objective_value <= 1 + 1e-6
    assert rec.objective_value >= rec.start_value


def test_maximize_rejects_degenerate_start():
    with pytest.raises(RejectedStartError):
        maximize("KT", np.zeros(4, dtype=complex), SearchSettings(max_iterations=5))


def test_maximize_requires_centered_start_for_centered_ids():
    with pytest.raises(InvalidInputError):
        maximize("KT", np.array([1.0, 2.0, 3.0]), SearchSettings(max_iterations=5))


def test_maximize_unknown_objective():
    with pytest.raises(InvalidInputError):
        maximize("WAT", np.array([1.0, -1.0]), SearchSettings(max_iterations=5))


def test_verify_candidate_reproduces_value():
    inst = SendovInstance(a=0.9, other_zeros=np.exp(1j * np.array([0.5, 2.0, 4.0])))
    rec = maximize("M_MINUS2", inst, SearchSettings(max_iterations=30))
    refined = verify_candidate(rec)
    assert refined == pytest.approx(rec.objective_value, rel=1e-6)
