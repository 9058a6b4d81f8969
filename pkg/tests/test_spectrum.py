import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from teichcurrents.errors import NonHyperbolicError
from teichcurrents.holonomy import Holonomy, precompose, dehn_twist
from teichcurrents.moebius import MoebiusElement
from teichcurrents.spectrum import (curve_length, jordan_samples, length_matrix,
                                    read_length_csv, relation_kind, spectra_equal,
                                    word_lengths)
from teichcurrents.words import curve, enumerate_classes, inverse, rotations

# lengths on the base surface, computed at 40 digits from an independent
# construction of the octagon group
GOLDEN = {
    "a1": 3.0571418389619963225,
    "b2": 3.0571418389619963225,
    "a1 b1": 3.0571418389619963225,
    "a1 B1": 5.8280707754418066176,
    "a1 a2": 4.89690489535615158,
    "a1 b2": 6.6720057699111594513,
    "a1 b1 a2": 7.2631634751186743346,
    "a1 b1 A1 B1": 7.5956918304113694018,
    "a1 b1 a2 b2": 9.7510997583083088499,
    "a1 B1 a2 B2 b1": 9.8933106877741527793,
}


@pytest.mark.parametrize("text,value", sorted(GOLDEN.items()))
def test_golden_lengths(base, text, value):
    assert curve_length(base, curve(text)) == pytest.approx(value, abs=1e-12)


def test_length_matrix_csv_round_trip(tmp_path, base, twists):
    classes = enumerate_classes(2, 2)
    lm = length_matrix([base, twists[0]], classes)
    assert lm.shape == (2, 16)
    p = tmp_path / "m.csv"
    lm.to_csv(p)
    back = read_length_csv(p)
    assert back.rows == lm.rows and back.cols == lm.cols
    assert np.array_equal(back.values, lm.values)


def test_relation_kinds(base, conj, tau, twists):
    classes = enumerate_classes(2, 3)
    assert spectra_equal(base, conj, classes)
    assert relation_kind(base, conj, classes) == "conjugate"
    assert relation_kind(base, tau, classes) == "tau-related"
    assert relation_kind(base, twists[0], classes) == "distinct"


def test_jordan_samples_are_columns(base, twists):
    classes = enumerate_classes(2, 2)
    js = jordan_samples([base, twists[0]], classes)
    lm = length_matrix([base, twists[0]], classes)
    for j, s in enumerate(js):
        assert np.array_equal(s.vector, lm.values[:, j])


def test_non_hyperbolic_detected():
    e = MoebiusElement(1.0, 0.0, 0.0, 1.0)
    H = Holonomy.from_generators(2, [e] * 4, "trivial")
    with pytest.raises(NonHyperbolicError):
        word_lengths(H, [(1,)])


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(enumerate_classes(2, 4)), st.integers(0, 3), st.booleans())
def test_length_invariant_under_rotation_and_inversion(c, k, inv):
    from teichcurrents.holonomy import regular_polygon_rep

    H = regular_polygon_rep(2)
    w = list(rotations(c.rep))[k % c.length]
    if inv:
        w = inverse(w)
    assert abs(word_lengths(H, [w])[0] - curve_length(H, c)) <= 1e-12
