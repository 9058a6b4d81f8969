import math

import numpy as np
import pytest

from teichcurrents.errors import InvalidGenusError, ValidationFailed
from teichcurrents.holonomy import (CONDITIONING_MAX, Holonomy, cayley_ball,
                                    conjugate, dehn_twist, domain_moves,
                                    evaluate_word, identity_automorphism,
                                    load_holonomy, orientation_reverse,
                                    orientation_signature, polygon_circumradius,
                                    polygon_inradius, precompose, random_moebius,
                                    regular_polygon_rep, relator, save_holonomy,
                                    validate)
from teichcurrents.spectrum import curve_length
from teichcurrents.words import curve, parse_word

SYSTOLE = 2.0 * math.acosh(1.0 + math.sqrt(2.0))


def test_oracle_constants():
    # regular octagon with angles pi/4: cosh(inradius) = cot(pi/8) = 1 + sqrt 2
    assert math.cosh(polygon_inradius(2)) == pytest.approx(1.0 + math.sqrt(2.0), rel=1e-15)
    assert math.cosh(polygon_circumradius(2)) == pytest.approx((1.0 + math.sqrt(2.0)) ** 2,
                                                               rel=1e-15)
    assert 2 * polygon_inradius(2) == pytest.approx(SYSTOLE, rel=1e-15)


def test_base_validates(base):
    rep = validate(base)
    assert rep.passed, rep.failures()
    assert rep.relator_residual < 1e-12
    assert rep.min_sampled_length == pytest.approx(SYSTOLE, abs=1e-9)


def test_relator_word():
    assert relator(2) == parse_word("a1 b1 A1 B1 a2 b2 A2 B2")


@pytest.mark.parametrize("genus", [3, 4])
def test_higher_genus_validates(genus):
    H = regular_polygon_rep(genus)
    rep = validate(H, sample_length=2)
    assert rep.passed, rep.failures()
    # pairing of sides two apart: |tr| / 2 = cot(pi / 4g) sin(pi / 2g)
    length = 2 * math.acosh(1.0 + math.cos(math.pi / (2 * genus)))
    for x in range(1, 2 * genus + 1):
        assert curve_length(H, curve(f"{'ab'[(x - 1) % 2]}{(x + 1) // 2}")) == pytest.approx(
            length, abs=1e-9)


def test_invalid_genus():
    with pytest.raises(InvalidGenusError):
        regular_polygon_rep(1)


def test_twist_changes_marking_not_metric(base, twists):
    t1 = twists[0]
    # b1 on the twisted surface is b1 a1 on the base one
    assert curve_length(t1, curve("b1")) == pytest.approx(
        curve_length(base, curve("b1 a1")), abs=1e-12)
    assert curve_length(t1, curve("a1")) == pytest.approx(
        curve_length(base, curve("a1")), abs=1e-12)


def test_automorphism_composition(base):
    tw = dehn_twist(2, 1, 1)
    two = precompose(precompose(base, tw), tw)
    assert all(g.isclose(h, 1e-9) for g, h in zip(two.gens, precompose(base, tw * tw).gens))
    assert all(g.isclose(h, 1e-9) for g, h in
               zip(precompose(base, dehn_twist(2, 1, 2)).gens, two.gens))
    ident = precompose(base, identity_automorphism(2))
    assert all(g.isclose(h, 1e-15) for g, h in zip(ident.gens, base.gens))


def test_inverse_twist(base):
    back = precompose(precompose(base, dehn_twist(2, 2, 3)), dehn_twist(2, 2, -3))
    assert all(g.isclose(h, 1e-9) for g, h in zip(back.gens, base.gens))


def test_large_twists_fail_validation(base):
    assert validate(precompose(base, dehn_twist(2, 1, 6), check=False)).passed
    bad = precompose(base, dehn_twist(2, 1, 7), check=False)
    rep = validate(bad)
    assert not rep.passed and rep.conditioning > CONDITIONING_MAX
    with pytest.raises(ValidationFailed):
        precompose(base, dehn_twist(2, 1, 7))


def test_non_discrete_holonomy_fails(base):
    gens = list(base.images())
    gens[0] = gens[1]
    rep = validate(Holonomy.from_generators(2, gens, "broken"))
    assert not rep.passed
    assert rep.relator_residual > 1e-3


def test_conjugation_and_tau(base, conj, tau):
    assert validate(conj).passed and validate(tau).passed
    w = parse_word("a1 b1 A2")
    assert abs(evaluate_word(conj, w).trace) == pytest.approx(
        abs(evaluate_word(base, w).trace), rel=1e-12)
    assert abs(evaluate_word(tau, w).trace) == pytest.approx(
        abs(evaluate_word(base, w).trace), rel=1e-12)
    assert orientation_signature(conj) == orientation_signature(base)
    assert orientation_signature(tau) == -orientation_signature(base)


def test_cayley_ball_sizes():
    # reduced words in the free group of rank 4: 1 + 8 * (7^r - 1) / 6
    for r in range(4):
        assert len(cayley_ball(2, r)) == 1 + 8 * (7 ** r - 1) // 6


def test_domain_moves(base):
    mv = domain_moves(base)
    assert mv.min_displacement == pytest.approx(SYSTOLE, abs=1e-9)
    # the 8 side pairings of the octagon are in the set
    assert len(mv.words) >= 8


def test_save_load_round_trip(tmp_path, twists):
    p = tmp_path / "t.hol"
    save_holonomy(twists[1], p)
    H = load_holonomy(p)
    assert H.genus == 2 and H.label == twists[1].label
    assert all(g.entries == h.entries for g, h in zip(H.gens, twists[1].gens))


def test_load_refuses_invalid(tmp_path, base):
    gens = list(base.images())
    gens[0] = gens[1]
    p = tmp_path / "bad.hol"
    save_holonomy(Holonomy.from_generators(2, gens, "broken"), p)
    with pytest.raises(ValidationFailed):
        load_holonomy(p)
    assert load_holonomy(p, force=True).label == "broken"


def test_random_moebius_seeded():
    a = random_moebius(np.random.default_rng(3))
    b = random_moebius(np.random.default_rng(3))
    assert a == b
