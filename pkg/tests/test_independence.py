import numpy as np
import pytest

from teichcurrents.errors import DegenerateInputError, TooFewSamplesError
from teichcurrents.holonomy import dehn_twist, precompose
from teichcurrents.independence import (cone_dimension, cone_of_surfaces,
                                        independence_verdict, kernel_certificate,
                                        rank_profile)
from teichcurrents.spectrum import jordan_samples, length_matrix
from teichcurrents.words import enumerate_classes

INV_SQRT2 = 1.0 / np.sqrt(2.0)


@pytest.fixture(scope="module")
def classes4():
    return enumerate_classes(2, 4)


def test_single_surface(base, classes4):
    p = rank_profile(length_matrix([base], classes4))
    assert p.rank == 1 and p.kernel.shape == (0, 1)


def test_conjugate_pair_kernel(base, conj, classes4):
    p = rank_profile(length_matrix([base, conj], classes4[:50]))
    assert p.rank == 1
    assert np.abs(p.kernel[0] - np.array([INV_SQRT2, -INV_SQRT2])).max() < 1e-6


def test_twists_are_independent(base, twists, classes4):
    p = rank_profile(length_matrix([base] + twists[:2], classes4))
    assert p.rank == 3
    assert p.singular_values[2] / p.singular_values[0] > 1e-3


def test_kernel_vectors_orthonormal(base, conj, tau, classes4):
    p = rank_profile(length_matrix([base, conj, tau], classes4))
    assert p.rank == 1
    k = p.kernel
    assert np.abs(k @ k.T - np.eye(2)).max() < 1e-10
    A = length_matrix([base, conj, tau], classes4).values
    A = A / A.mean(axis=0)
    assert np.abs(k @ A).max() <= 1e-8 * p.singular_values[0]


def test_rank_scale_robust(base, twists, classes4):
    lm = length_matrix([base] + twists[:2], classes4)
    scale = np.random.default_rng(1).uniform(0.1, 10.0, lm.shape[1])
    assert rank_profile(lm.values * scale).rank == rank_profile(lm).rank


@pytest.mark.filterwarnings("ignore:only 2 classes")
def test_rank_monotone_in_classes(base, twists, classes4):
    ranks = [rank_profile(length_matrix([base] + twists, classes4[:m])).rank
             for m in (2, 4, 16, 72, 366)]
    assert ranks == sorted(ranks)


def test_too_few_classes_warns(base, twists):
    with pytest.warns(RuntimeWarning):
        rank_profile(length_matrix([base] + twists, enumerate_classes(2, 1)[:2]))


def test_verdicts(base, conj, twists):
    v = independence_verdict([base] + twists, lmax=5)
    assert v.status == "INDEPENDENT"
    v = independence_verdict([base, twists[0], base.with_label("again")], lmax=4)
    assert v.status == "DEPENDENT"
    assert np.abs(v.profile.kernel[0] - np.array([INV_SQRT2, 0.0, -INV_SQRT2])).max() < 1e-6
    assert ("base", "again", "conjugate") in v.witnesses
    assert all(c <= 1e-6 for c in v.certificates)
    with pytest.raises(DegenerateInputError):
        independence_verdict([base], lmax=0)


def test_four_twists_independent(base):
    surfaces = [base] + [precompose(base, dehn_twist(2, 1, k), f"t{k}") for k in (1, 2, 3)]
    v = independence_verdict(surfaces, lmax=5)
    assert v.independent
    assert v.profile.singular_values[-1] / v.profile.singular_values[0] > 1e-3


def test_cone_examples(base, conj, tau, twists):
    assert cone_of_surfaces([base, twists[0]], lmax=3).cone_dimension == 2
    c = cone_of_surfaces([base, conj], lmax=3)
    assert c.cone_dimension == 1 and c.diagonal_defect[(0, 1)] < 1e-9
    c = cone_of_surfaces([base, tau], lmax=3)
    assert c.cone_dimension == 1 and c.diagonal_defect[(0, 1)] < 1e-9
    assert cone_of_surfaces([base] + twists, lmax=3).cone_dimension == 4


def test_cone_too_few_samples(base, twists):
    samples = jordan_samples([base] + twists, enumerate_classes(2, 1)[:3])
    with pytest.raises(TooFewSamplesError):
        cone_dimension(samples)


def test_rank_and_cone_agree(base, conj, twists):
    # same-orientation fixtures: independence iff the cone is full
    for surfaces in ([base, twists[0]], [base, conj], [base] + twists[:2],
                     [base, twists[0], conj]):
        v = independence_verdict(surfaces, lmax=4)
        c = cone_of_surfaces(surfaces, lmax=4)
        assert v.independent == c.full


def test_certificate_scale():
    M = np.array([[1.0, 2.0], [1.0, 2.0]])
    assert kernel_certificate(M, np.array([1.0, -1.0]) / np.sqrt(2)) == 0.0
