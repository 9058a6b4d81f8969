"""Geodesic currents that can be computed with directly.

* the Liouville measure ``d alpha d beta / |e^{i alpha} - e^{i beta}|^2`` of a
  product of two boundary arcs (a box in the space of geodesics),
* finite nonnegative combinations of closed curves,
* the pairing of a Liouville current with such a combination, which is the
  weighted sum of geodesic lengths,
* geometric intersection numbers of two closed curves, by counting lifts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np

from teichcurrents import kernels
from teichcurrents.errors import (ArcsOverlapError, GapTooSmallError,
                                  StabilizationFailed)
from teichcurrents.holonomy import Holonomy, evaluate_words
from teichcurrents.moebius import (TWO_PI, MoebiusElement, BoundaryPoint,
                                   boundary_action, fixed_vectors,
                                   translation_length)
from teichcurrents.spectrum import curve_length, word_lengths
from teichcurrents.words import ConjClass, canonical_rep, format_word, parse_word

MIN_GAP = 1e-6


@dataclass(frozen=True)
class BoundaryBox:
    """Counterclockwise arcs ``[alpha1, alpha2]`` and ``[beta1, beta2]``.

    The box is the set of geodesics with one endpoint in each arc. The arcs
    must stay at least ``gap`` apart, since the density blows up on the
    diagonal.
    """

    alpha1: float
    alpha2: float
    beta1: float
    beta2: float
    gap: float = MIN_GAP

    def __post_init__(self):
        la = self.len_alpha
        lb = self.len_beta
        delta = self.offset
        if delta < la or delta + lb > TWO_PI:
            raise ArcsOverlapError(f"arcs of {self} overlap")
        if delta - la < self.gap or TWO_PI - (delta + lb) < self.gap:
            raise GapTooSmallError(f"arcs of {self} are closer than {self.gap:g}")

    @property
    def len_alpha(self) -> float:
        return (self.alpha2 - self.alpha1) % TWO_PI

    @property
    def len_beta(self) -> float:
        return (self.beta2 - self.beta1) % TWO_PI

    @property
    def offset(self) -> float:
        """Counterclockwise angle from ``alpha1`` to ``beta1``."""
        return (self.beta1 - self.alpha1) % TWO_PI

    def swapped(self) -> "BoundaryBox":
        return BoundaryBox(self.beta1, self.beta2, self.alpha1, self.alpha2, self.gap)

    def image(self, m: MoebiusElement) -> "BoundaryBox":
        """The box moved by ``m`` (orientation preserving, so arcs stay ccw)."""
        pts = [boundary_action(m, BoundaryPoint(x)).angle
               for x in (self.alpha1, self.alpha2, self.beta1, self.beta2)]
        return BoundaryBox(*pts, gap=self.gap)

    def split_alpha(self, frac: float) -> Tuple["BoundaryBox", "BoundaryBox"]:
        mid = self.alpha1 + frac * self.len_alpha
        return (BoundaryBox(self.alpha1, mid, self.beta1, self.beta2, self.gap),
                BoundaryBox(mid, self.alpha1 + self.len_alpha, self.beta1,
                            self.beta2, self.gap))


def _ordered_mass(box: BoundaryBox) -> float:
    la, lb, d = box.len_alpha, box.len_beta, box.offset
    if la == 0.0 or lb == 0.0:
        return 0.0
    # F(alpha, beta) = log sin((beta - alpha) / 2); mixed difference over the box
    num = math.sin(0.5 * (d + lb - la)) * math.sin(0.5 * d)
    den = math.sin(0.5 * (d + lb)) * math.sin(0.5 * (d - la))
    return math.log(num / den)


def liouville_box_mass(box: BoundaryBox) -> float:
    """Liouville measure of the box, symmetrized over the two arc orders."""
    return 0.5 * (_ordered_mass(box) + _ordered_mass(box.swapped()))


def liouville_density(alpha, beta):
    s = np.sin(0.5 * (np.asarray(alpha) - np.asarray(beta)))
    return 1.0 / (4.0 * s * s)


def liouville_box_mass_quadrature(box: BoundaryBox, epsabs: float = 1e-13,
                                  epsrel: float = 1e-12) -> float:
    """Adaptive two-dimensional quadrature of the density over the box."""
    from scipy.integrate import dblquad

    la, lb, d = box.len_alpha, box.len_beta, box.offset
    if la == 0.0 or lb == 0.0:
        return 0.0
    val, _ = dblquad(lambda beta, alpha: 1.0 / (4.0 * math.sin(0.5 * (beta - alpha)) ** 2),
                     0.0, la, d, d + lb, epsabs=epsabs, epsrel=epsrel)
    return val


@dataclass(frozen=True)
class DiscreteCurrent:
    """Finite nonnegative combination of closed curves."""

    terms: Tuple[Tuple[ConjClass, float], ...] = field(default=())

    @classmethod
    def from_mapping(cls, terms: Mapping[ConjClass, float]) -> "DiscreteCurrent":
        merged: Dict[ConjClass, float] = {}
        for c, w in terms.items():
            merged[c] = merged.get(c, 0.0) + float(w)
        for c, w in merged.items():
            if w < 0.0 or not math.isfinite(w):
                raise ValueError(f"weight of {c} must be finite and >= 0, got {w}")
        return cls(tuple(sorted(merged.items(), key=lambda kv: kv[0].sort_key)))

    @classmethod
    def single(cls, c: ConjClass, weight: float = 1.0) -> "DiscreteCurrent":
        return cls.from_mapping({c: weight})

    def as_dict(self) -> Dict[ConjClass, float]:
        return dict(self.terms)

    def __add__(self, other: "DiscreteCurrent") -> "DiscreteCurrent":
        d = self.as_dict()
        for c, w in other.terms:
            d[c] = d.get(c, 0.0) + w
        return DiscreteCurrent.from_mapping(d)

    def __rmul__(self, s: float) -> "DiscreteCurrent":
        return DiscreteCurrent.from_mapping({c: s * w for c, w in self.terms})


def pair_combination(H: Holonomy, terms: Iterable[Tuple[ConjClass, float]]) -> float:
    """``sum_c w_c length(c)`` for arbitrary real weights."""
    total = 0.0
    for c, w in terms:
        total += w * curve_length(H, c)
    return total


def liouville_pairing(H: Holonomy, nu: DiscreteCurrent) -> float:
    """Intersection of the Liouville current of ``H`` with ``nu``."""
    return pair_combination(H, nu.terms)


def read_current_file(path) -> DiscreteCurrent:
    """Lines ``weight word-tokens``; ``#`` starts a comment."""
    d: Dict[ConjClass, float] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, _, rest = line.partition(" ")
            try:
                w = float(head)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: bad weight {head!r}") from None
            c = canonical_rep(parse_word(rest))
            d[c] = d.get(c, 0.0) + w
    return DiscreteCurrent.from_mapping(d)


def write_current_file(path, nu: DiscreteCurrent) -> None:
    with open(path, "w") as fh:
        for c, w in nu.terms:
            fh.write(f"{w!r} {format_word(c.rep)}\n")


@dataclass(frozen=True)
class IntersectionResult:
    count: int
    radius: int
    counts_by_radius: Dict[int, int]
    crossings: Tuple[float, ...]


def _normalizer(m: MoebiusElement) -> np.ndarray:
    """``S`` with ``S(attracting) = inf`` and ``S(repelling) = 0``."""
    att, rep = fixed_vectors(m)
    a, b, c, d = att[0], rep[0], att[1], rep[1]
    det = a * d - b * c
    if det < 0.0:
        b, d, det = -b, -d, -det
    # inverse of [[a, b], [c, d]]
    return np.array([d / det, -b / det, -c / det, a / det])


_EPS = 2.0 ** -52
# rows whose estimated relative endpoint error exceeds this are ignored; every
# orbit also has short, well conditioned representatives
_TRUST = 1e-6
_MERGE_SAFETY = 1e3


def _distinct_axes(rows: np.ndarray, period: float, tol: float = 1e-9):
    """Group linked translates into orbits of the first curve's cyclic group.

    Translating by ``rho(c1)`` multiplies both endpoints by ``e^period`` and
    shifts the crossing parameter ``t = log sqrt(-u v)`` by ``period``. Each
    row is moved into the fundamental segment ``[t0, t0 + period)``; rows
    that then coincide are one orbit. ``t0`` is a generic fraction of the
    period so that symmetric configurations do not put crossings on the
    segment boundary.

    The same axis reached through two long words differs by rounding error
    of order ``eps |S g|_F^2``, so rows are merged within a tolerance scaled
    by that estimate. Returns ``(crossing, min depth)`` per orbit.
    """
    if rows.size == 0:
        return []
    err = _EPS * rows[:, 3]
    rows = rows[err <= _TRUST]
    err = err[err <= _TRUST]
    if rows.size == 0:
        return []
    u, v, depth = rows[:, 0], rows[:, 1], rows[:, 2]
    t = 0.5 * np.log(-u * v)
    t0 = period / math.pi
    k = np.floor((t - t0) / period)
    tm = t - k * period
    lo = np.log(np.maximum(u, v)) - k * period
    rtol = tol + _MERGE_SAFETY * err
    order = np.lexsort((lo, tm))
    # clusters: [tm, lo, depth, tol]; a row joins any cluster within tolerance
    axes: List[List[float]] = []
    for j in order:
        hit = None
        for ax in reversed(axes):
            w = max(ax[3], rtol[j])
            if tm[j] - ax[0] > 2.0 * _MERGE_SAFETY * _TRUST + tol:
                break
            if abs(tm[j] - ax[0]) <= w and abs(lo[j] - ax[1]) <= w:
                hit = ax
                break
        if hit is not None:
            hit[2] = min(hit[2], depth[j])
            if rtol[j] < hit[3]:
                hit[0], hit[1], hit[3] = tm[j], lo[j], rtol[j]
            continue
        axes.append([tm[j], lo[j], depth[j], rtol[j]])
    # the segment is a circle: merge orbits that wrap onto the first ones
    axes.sort(key=lambda a: a[0])
    while len(axes) > 1:
        tf, lf, df, ef = axes[0]
        tl, ll, dl, el = axes[-1]
        w = max(ef, el)
        if abs(tl - period - tf) <= w and abs(ll - period - lf) <= w:
            axes[0][2] = min(df, dl)
            axes.pop()
        else:
            break
    return [(a[0], int(a[2])) for a in axes]


def geometric_intersection(H: Holonomy, c1: ConjClass, c2: ConjClass,
                           radius: Optional[int] = None,
                           escalation: int = 3) -> IntersectionResult:
    """Intersection number of two closed curves on the surface of ``H``.

    The axis of ``rho(c1)`` is normalized to the imaginary axis. Translates of
    the axis of ``rho(c2)`` by group elements of word length at most ``R``
    are tested for linking; those crossing a fundamental segment of the
    first axis are counted once each. The count must agree for ``R`` and
    ``R + 1``; the radius grows up to ``escalation`` steps before giving up.
    """
    if radius is None:
        radius = 2 + c1.length + c2.length
    if radius < 1:
        raise ValueError("radius must be >= 1")
    m1 = MoebiusElement.from_array(evaluate_words(H, [c1.rep])[0])
    m2 = MoebiusElement.from_array(evaluate_words(H, [c2.rep])[0])
    period = translation_length(m1)
    S = _normalizer(m1)
    p, q = fixed_vectors(m2)
    gens = H.array
    inv = H.inverse_index

    def counts(depth):
        rows = kernels.linked_axes(gens, inv, S, np.array(p), np.array(q), depth)
        axes = _distinct_axes(rows, period)
        by_r = {r: sum(1 for _, dd in axes if dd <= r) for r in range(radius, depth + 1)}
        return by_r, axes

    by_r, axes = counts(radius + 1)
    if by_r[radius] != by_r[radius + 1]:
        by_r, axes = counts(radius + escalation)
        for r in range(radius + 1, radius + escalation):
            if by_r[r] == by_r[r + 1]:
                crossing = tuple(sorted(t for t, dd in axes if dd <= r))
                return IntersectionResult(by_r[r], r, by_r, crossing)
        raise StabilizationFailed(
            f"i({c1}, {c2}) did not stabilize up to radius {radius + escalation}: "
            f"{by_r}")
    crossing = tuple(sorted(t for t, dd in axes if dd <= radius))
    return IntersectionResult(by_r[radius], radius, by_r, crossing)
