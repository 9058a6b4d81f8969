import itertools

import pytest
from hypothesis import given, settings, strategies as st

from teichcurrents.errors import EmptyWordError, LetterRangeError, ProperPowerError
from teichcurrents.words import (alphabet, canonical_rep, curve, dedup_by_fingerprint,
                                 enumerate_classes, format_word, inverse,
                                 is_proper_power, parse_word, read_curve_file,
                                 reduce, rotations, shard_by_first_letter,
                                 write_curve_file)

# primitive unoriented classes of the free group on 4 generators
FROZEN_COUNTS = {1: 4, 2: 16, 3: 72, 4: 366, 5: 2046}


def brute_force_classes(genus, max_length):
    """All words, cyclically reduced, primitive, modulo rotation and inversion."""
    letters = alphabet(genus)
    seen = set()
    for n in range(1, max_length + 1):
        for w in itertools.product(letters, repeat=n):
            if any(w[i] == -w[(i + 1) % n] for i in range(n)) and n > 1:
                continue
            if n > 1 and w[0] == -w[-1]:
                continue
            if any(w[:d] * (n // d) == w for d in range(1, n) if n % d == 0):
                continue
            orbit = [w[i:] + w[:i] for i in range(n)]
            iw = tuple(-x for x in reversed(w))
            orbit += [iw[i:] + iw[:i] for i in range(n)]
            seen.add(frozenset(orbit))
    return seen


words = st.lists(st.sampled_from(alphabet(2)), min_size=1, max_size=10).map(tuple)


def test_parse_and_format():
    w = parse_word("a1 B2 A1 b1")
    assert w == (1, -4, -1, 2)
    assert format_word(w) == "a1 B2 A1 b1"
    with pytest.raises(ValueError):
        parse_word("c1")


def test_reduce():
    assert reduce((1, -1, 2)) == (2,)
    assert reduce((2, 1, 3, -1, -2), cyclic=True) == (3,)


def test_canonical_errors():
    with pytest.raises(EmptyWordError):
        canonical_rep((1, -1))
    with pytest.raises(ProperPowerError):
        canonical_rep((1, 2, 1, 2))


@pytest.mark.parametrize("lmax", [1, 2, 3, 4])
def test_enumeration_matches_brute_force(lmax):
    classes = enumerate_classes(2, lmax)
    assert len(classes) == len(set(classes))
    mine = set()
    for c in classes:
        n = c.length
        orbit = list(rotations(c.rep)) + list(rotations(inverse(c.rep)))
        mine.add(frozenset(orbit))
    assert mine == brute_force_classes(2, lmax)


def test_frozen_counts():
    for lmax, n in FROZEN_COUNTS.items():
        assert len(enumerate_classes(2, lmax)) == n


def test_enumeration_sorted_and_canonical():
    classes = enumerate_classes(2, 4)
    assert classes == sorted(classes)
    for c in classes:
        assert canonical_rep(c.rep) == c


def test_genus_three_small():
    assert len(enumerate_classes(3, 1)) == 6
    assert len(enumerate_classes(3, 2)) == len(brute_force_classes(3, 2))


@settings(max_examples=200, deadline=None)
@given(words)
def test_canonical_rep_invariant_under_rotation_and_inversion(w):
    r = reduce(w, cyclic=True)
    if not r or is_proper_power(r):
        return
    c = canonical_rep(r)
    for v in list(rotations(r)) + [inverse(r)]:
        assert canonical_rep(v) == c


@settings(max_examples=200, deadline=None)
@given(words)
def test_reduce_is_idempotent(w):
    r = reduce(w)
    assert reduce(r) == r
    assert all(r[i] != -r[i + 1] for i in range(len(r) - 1))


def test_shards_partition():
    classes = enumerate_classes(2, 3)
    shards = shard_by_first_letter(classes)
    assert sum(len(v) for v in shards.values()) == len(classes)
    assert set(shards) <= {1, 2, 3, 4}


def test_curve_file_round_trip(tmp_path):
    classes = enumerate_classes(2, 2)
    p = tmp_path / "c.txt"
    write_curve_file(p, classes, header="test")
    assert read_curve_file(p) == classes


def test_dedup_by_fingerprint_merges_relator_duplicates(base):
    # a1 b1 A1 B1 and (a2 b2 A2 B2)^-1 are the same curve through the relator
    c1 = curve("a1 b1 A1 B1")
    c2 = curve("b2 a2 B2 A2")
    assert c1 != c2
    out = dedup_by_fingerprint([c1, c2, curve("a1")], [base])
    assert out == [c1, curve("a1")]


def test_letter_range(base):
    with pytest.raises(LetterRangeError):
        base.letter_index(7)
