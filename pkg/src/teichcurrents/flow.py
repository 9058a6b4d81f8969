"""Geodesic flow on the unit tangent bundle of a closed hyperbolic surface.

A frame is a matrix ``g`` in ``PSL(2, R)``: its base point is ``g . i`` and
its direction is the image of the upward unit vector at ``i``. The surface
group acts on the left, the flow on the right,

    phi_t(g) = g diag(e^{t/2}, e^{-t/2}),

so the flow descends to ``Gamma \\ PSL(2, R)``. Frames are kept inside a
fundamental domain by greedy left multiplication (:func:`reduce_to_domain`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from teichcurrents import kernels
from teichcurrents.errors import IterationLimitError
from teichcurrents.holonomy import (DomainMoves, Holonomy, domain_moves,
                                    polygon_circumradius, random_moebius)
from teichcurrents.moebius import MoebiusElement, distance_from_i, geodesic_step
from teichcurrents.words import Word, reduce

DEFAULT_DT = 0.05
MAX_ITER = 10_000
OBSERVABLES = tuple(kernels.OBSERVABLES)


@dataclass(frozen=True)
class Frame:
    """A point of the unit tangent bundle, as a coset representative."""

    g: MoebiusElement

    @property
    def base_distance(self) -> float:
        """Distance from the base point to ``i``."""
        return distance_from_i(self.g)

    def flowed(self, t: float) -> "Frame":
        return Frame(self.g @ geodesic_step(t))


@lru_cache(maxsize=32)
def moves_for(H: Holonomy) -> DomainMoves:
    return domain_moves(H)


def observe(name: str, distance: float) -> float:
    """Built-in observable as a function of the distance to ``i``.

    ``"one"`` is constant, ``"bump"`` is ``max(0, 1 - d / 2)`` (a tent
    supported in the ball of radius 2) and ``"exp"`` is ``exp(-d)``. On a
    reduced frame ``d`` is the distance from the base point to the orbit of
    ``i``, so each of them is continuous on the quotient.
    """
    if name == "one":
        return 1.0
    if name == "bump":
        return max(0.0, 1.0 - 0.5 * distance)
    if name == "exp":
        return math.exp(-distance)
    raise ValueError(f"unknown observable {name!r}; choose from {OBSERVABLES}")


def _observe_array(name: str, distance: np.ndarray) -> np.ndarray:
    if name == "one":
        return np.ones_like(distance)
    if name == "bump":
        return np.maximum(0.0, 1.0 - 0.5 * distance)
    if name == "exp":
        return np.exp(-distance)
    raise ValueError(f"unknown observable {name!r}; choose from {OBSERVABLES}")


def _run(fn, *args):
    try:
        return fn(*args)
    except RuntimeError as exc:
        raise IterationLimitError(
            f"{exc}; the holonomy is probably not discrete") from None


def reduce_to_domain(g: MoebiusElement, H: Holonomy,
                     moves: Optional[DomainMoves] = None,
                     max_iter: int = MAX_ITER) -> Tuple[MoebiusElement, Word]:
    """Move ``g`` into the fundamental domain by the left action of ``Gamma``.

    Returns the reduced representative ``g' = w g`` and the word ``w``.

    Raises
    ------
    IterationLimitError
        If the descent does not terminate, which means ``H`` is not a
        discrete group.
    """
    mv = moves if moves is not None else moves_for(H)
    out, path = _run(kernels.reduce_point, np.array(g.entries), mv.matrices,
                     mv.skip_s, max_iter)
    word: List[int] = []
    for k in path.tolist():
        word = list(mv.words[k]) + word
    return MoebiusElement.from_array(out), reduce(word)


def reduce_frame(frame: Frame, H: Holonomy) -> Frame:
    return Frame(reduce_to_domain(frame.g, H)[0])


def flow_values(H: Holonomy, start: Frame, observable: str, T: float,
                dt: float = DEFAULT_DT) -> Tuple[np.ndarray, Frame]:
    """Observable at times ``0, dt, 2 dt, ...`` short of ``T``, and the end frame."""
    if not T > 0.0:
        raise ValueError(f"T must be positive, got {T}")
    if not 0.0 < dt <= 0.1:
        raise ValueError(f"dt must lie in (0, 0.1], got {dt}")
    if observable not in kernels.OBSERVABLES:
        raise ValueError(f"unknown observable {observable!r}; choose from {OBSERVABLES}")
    n = int(round(T / dt))
    mv = moves_for(H)
    vals, end = _run(kernels.flow_series, np.array(start.g.entries), mv.matrices,
                     dt, n, kernels.OBSERVABLES[observable], mv.skip_s, MAX_ITER)
    return vals, Frame(MoebiusElement.from_array(end))


def birkhoff_average(H: Holonomy, start: Frame, observable: str, T: float,
                     dt: float = DEFAULT_DT) -> float:
    """Time average ``(1/T) int_0^T f(phi_t x) dt`` as a left Riemann sum.

    The frame is reduced after every step, so the result depends only on the
    coset of ``start``.
    """
    vals, _ = flow_values(H, start, observable, T, dt)
    return float(np.mean(vals))


def running_average(H: Holonomy, start: Frame, observable: str, T: float,
                    dt: float = DEFAULT_DT, every: int = 1) -> np.ndarray:
    """Rows ``(t, average up to t)``; every ``every``-th step is kept."""
    vals, _ = flow_values(H, start, observable, T, dt)
    n = np.arange(1, vals.size + 1)
    avg = np.cumsum(vals) / n
    t = n * dt
    return np.column_stack([t, avg])[every - 1::every]


def random_frame(rng: np.random.Generator, H: Holonomy,
                 scale: float = 1.0) -> Frame:
    """Reduced frame obtained from a random element of ``PSL(2, R)``."""
    g = random_moebius(rng, scale)
    return Frame(reduce_to_domain(g, H)[0])


def frame_after(H: Holonomy, start: Frame, s: float,
                dt: float = DEFAULT_DT) -> Frame:
    """The frame reached by the discretized flow after time ``s``."""
    _, end = flow_values(H, start, "one", s, dt)
    return end


@dataclass(frozen=True)
class SpaceAverage:
    """Monte-Carlo average of a base-point observable over the domain."""

    value: float
    stderr: float
    accepted: int
    drawn: int
    area: float


def haar_space_average(H: Holonomy, observable: str, n: int = 1_000_000,
                       rng: Optional[np.random.Generator] = None,
                       seed: int = 0, chunk: int = 200_000) -> SpaceAverage:
    """Average of the observable for the Liouville (Haar) measure.

    The built-in observables depend only on the base point, so the average
    over the unit tangent bundle is an area average over the Dirichlet
    domain of ``i``. Points are drawn uniformly for hyperbolic area in the
    disc of the polygon circumradius and kept when no domain move brings
    ``i`` closer. ``area`` estimates the domain area and should be close to
    ``4 pi (g - 1)``.
    """
    rng = rng if rng is not None else np.random.default_rng(seed)
    rho = polygon_circumradius(H.genus) + 1e-9
    mv = moves_for(H)
    # gamma . i for every move, in the upper half plane
    m = mv.matrices
    orbit = (m[:, 0] * 1j + m[:, 1]) / (m[:, 2] * 1j + m[:, 3])
    ch = math.cosh(rho)
    total = 0.0
    total2 = 0.0
    kept = 0
    drawn = 0
    while drawn < n:
        k = min(chunk, n - drawn)
        u = rng.random(k)
        theta = rng.random(k) * (2.0 * math.pi)
        s = np.arccosh(1.0 + u * (ch - 1.0))
        # rotate i e^s about i by theta
        c, sn = np.cos(0.5 * theta), np.sin(0.5 * theta)
        w = 1j * np.exp(s)
        z = (c * w - sn) / (sn * w + c)
        y = z.imag
        d_i = np.arccosh(1.0 + np.abs(z - 1j) ** 2 / (2.0 * y))
        ok = np.ones(k, dtype=bool)
        for o in orbit:
            d_o = np.arccosh(1.0 + np.abs(z - o) ** 2 / (2.0 * y * o.imag))
            ok &= d_i <= d_o
        f = _observe_array(observable, d_i[ok])
        total += float(f.sum())
        total2 += float((f * f).sum())
        kept += int(ok.sum())
        drawn += k
    mean = total / kept
    var = max(total2 / kept - mean * mean, 0.0)
    disc_area = 2.0 * math.pi * (ch - 1.0)
    return SpaceAverage(mean, math.sqrt(var / kept), kept, drawn, disc_area * kept / drawn)


def ergodicity_report(H: Holonomy, observable: str = "exp", T: float = 2000.0,
                      dt: float = DEFAULT_DT, seed: int = 0, n_starts: int = 2,
                      mc_points: int = 1_000_000) -> Dict:
    """Time averages from seeded random starts against the space average."""
    rng = np.random.default_rng(seed)
    starts = [random_frame(rng, H) for _ in range(n_starts)]
    one = [birkhoff_average(H, x, "one", T, dt) for x in starts]
    avgs = [birkhoff_average(H, x, observable, T, dt) for x in starts]
    space = haar_space_average(H, observable, mc_points, rng=rng)
    spread = max(avgs) - min(avgs)
    rel = [abs(a - space.value) / abs(space.value) for a in avgs]
    return {
        "observable": observable,
        "T": T,
        "dt": dt,
        "seed": seed,
        "starts": [list(x.g.entries) for x in starts],
        "time_averages": avgs,
        "constant_averages": one,
        "spread": spread,
        "space_average": space.value,
        "space_stderr": space.stderr,
        "mc_points": space.drawn,
        "mc_accepted": space.accepted,
        "domain_area_estimate": space.area,
        "relative_differences": rel,
    }
