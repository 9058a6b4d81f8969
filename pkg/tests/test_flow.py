import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from teichcurrents.flow import (Frame, birkhoff_average, flow_values, frame_after,
                                haar_space_average, random_frame, reduce_to_domain,
                                running_average)
from teichcurrents.holonomy import (Holonomy, evaluate_word, polygon_circumradius)
from teichcurrents.moebius import MoebiusElement, distance_from_i, geodesic_step
from teichcurrents.words import alphabet, reduce


def test_reduced_identity_unchanged(base):
    g, path = reduce_to_domain(MoebiusElement.identity(), base)
    assert path == () and g.isclose(MoebiusElement.identity(), 0.0)


def test_generator_translate_reduces_back(base):
    g = geodesic_step(0.4)
    for x in (1, -2, 3, 4):
        h, path = reduce_to_domain(evaluate_word(base, (x,)) @ g, base)
        assert distance_from_i(h) == pytest.approx(distance_from_i(g), abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from(alphabet(2)), min_size=30, max_size=30),
       st.integers(0, 2 ** 32 - 1))
def test_long_words_reduce_into_polygon(letters, seed):
    # a direct 30-letter product has entries near 1e19 and is numerically
    # meaningless, so the word is applied one letter at a time
    from teichcurrents.holonomy import regular_polygon_rep

    H = regular_polygon_rep(2)
    x = random_frame(np.random.default_rng(seed), H)
    g = x.g
    for letter in reversed(letters):
        g, _ = reduce_to_domain(evaluate_word(H, (letter,)) @ g, H)
        assert distance_from_i(g) <= polygon_circumradius(2) + 1e-6
    # same coset as the start
    assert distance_from_i(g) == pytest.approx(x.base_distance, abs=1e-8)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.sampled_from(alphabet(2)), min_size=1, max_size=8))
def test_group_elements_reduce_to_identity(letters):
    from teichcurrents.holonomy import regular_polygon_rep

    H = regular_polygon_rep(2)
    g = evaluate_word(H, reduce(letters))
    h, path = reduce_to_domain(g, H)
    # rounding in g is of order eps |g|^2 = eps 2 cosh d(g i, i)
    tol = 1e-13 * math.cosh(distance_from_i(g)) + 1e-12
    assert distance_from_i(h) < math.sqrt(tol)
    assert (evaluate_word(H, path) @ g).isclose(h, tol * 10)


def test_reduction_idempotent(base):
    rng = np.random.default_rng(2)
    for _ in range(20):
        x = random_frame(rng, base, scale=6.0)
        y, path = reduce_to_domain(x.g, base)
        assert path == () and y.isclose(x.g, 1e-14)


def test_constant_observable_is_exactly_one(base):
    x = random_frame(np.random.default_rng(0), base)
    assert birkhoff_average(base, x, "one", 50.0) == 1.0


def test_time_shift_invariance(base):
    # shifting the start by s changes the average by at most s |f| / T (f >= 0)
    x = random_frame(np.random.default_rng(4), base)
    T = 200.0
    a = birkhoff_average(base, x, "exp", T)
    for s in (0.5, 2.0, 10.0):
        y = frame_after(base, x, s)
        b = birkhoff_average(base, y, "exp", T)
        assert abs(a - b) <= s / T + 1e-12


def test_running_average_endpoint(base):
    x = random_frame(np.random.default_rng(5), base)
    ra = running_average(base, x, "bump", 10.0)
    assert ra[-1, 0] == pytest.approx(10.0)
    assert ra[-1, 1] == pytest.approx(birkhoff_average(base, x, "bump", 10.0), rel=1e-12)


def test_flow_argument_checks(base):
    x = Frame(MoebiusElement.identity())
    with pytest.raises(ValueError):
        flow_values(base, x, "exp", 10.0, dt=0.5)
    with pytest.raises(ValueError):
        flow_values(base, x, "nope", 10.0)
    with pytest.raises(ValueError):
        flow_values(base, x, "exp", -1.0)


def test_space_average_area(base):
    s = haar_space_average(base, "one", 200_000, seed=1)
    assert s.value == 1.0
    # Gauss-Bonnet: the domain has area 4 pi (g - 1)
    assert s.area == pytest.approx(4.0 * math.pi, rel=2e-2)
