"""Elements of PSL(2, R) acting on the upper half-plane and its boundary.

Boundary points are stored as angles on the unit circle. The identification
with the real projective line uses the Cayley transform
``x -> (x - i) / (x + i)``, so ``inf`` sits at angle 0, ``0`` at angle ``pi``
and increasing ``x`` runs counterclockwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from teichcurrents.errors import NonHyperbolicError

TWO_PI = 2.0 * math.pi

TOL_ID = 1e-9
TOL_CLS = 1e-9
DET_TOL = 1e-12


class Kind(str, Enum):
    IDENTITY = "identity"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


def _sign_normalize(a, b, c, d):
    for x in (a, b, c, d):
        if x != 0.0:
            if x < 0.0:
                return -a, -b, -c, -d
            break
    return a, b, c, d


@dataclass(frozen=True)
class MoebiusElement:
    """A unimodular real 2x2 matrix up to sign.

    The constructor divides by the square root of the determinant and flips
    the sign so that the first nonzero entry is positive.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        a, b, c, d = (float(self.a), float(self.b), float(self.c), float(self.d))
        det = a * d - b * c
        if not det > 0.0 or not math.isfinite(det):
            raise ValueError(f"determinant must be positive, got {det!r}")
        if det != 1.0:
            s = math.sqrt(det)
            a, b, c, d = a / s, b / s, c / s, d / s
        a, b, c, d = _sign_normalize(a, b, c, d)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @classmethod
    def from_array(cls, m) -> "MoebiusElement":
        m = np.asarray(m, dtype=float).reshape(-1)
        return cls(m[0], m[1], m[2], m[3])

    @classmethod
    def identity(cls) -> "MoebiusElement":
        return cls(1.0, 0.0, 0.0, 1.0)

    @property
    def entries(self) -> Tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> float:
        return self.a + self.d

    def __matmul__(self, other: "MoebiusElement") -> "MoebiusElement":
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return MoebiusElement(a * e + b * g, a * f + b * h,
                              c * e + d * g, c * f + d * h)

    def inverse(self) -> "MoebiusElement":
        return MoebiusElement(self.d, -self.b, -self.c, self.a)

    def __pow__(self, k: int) -> "MoebiusElement":
        base = self if k >= 0 else self.inverse()
        out = MoebiusElement.identity()
        for _ in range(abs(k)):
            out = out @ base
        return out

    def conjugate_by(self, g: "MoebiusElement") -> "MoebiusElement":
        """Return ``g M g^-1``."""
        return g @ self @ g.inverse()

    def distance(self, other: "MoebiusElement") -> float:
        """Max-entry distance, minimized over the sign ambiguity."""
        x = np.array(self.entries)
        y = np.array(other.entries)
        return float(min(np.abs(x - y).max(), np.abs(x + y).max()))

    def isclose(self, other: "MoebiusElement", tol: float = 1e-12) -> bool:
        return self.distance(other) <= tol

    def act(self, z: complex) -> complex:
        """Action on a point of the upper half-plane."""
        return (self.a * z + self.b) / (self.c * z + self.d)

    def __repr__(self):
        return f"MoebiusElement({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"


@dataclass(frozen=True, order=True)
class BoundaryPoint:
    """A point of the circle at infinity, as an angle in [0, 2 pi)."""

    angle: float

    def __post_init__(self):
        t = math.fmod(float(self.angle), TWO_PI)
        if t < 0.0:
            t += TWO_PI
        if t >= TWO_PI:
            t = 0.0
        object.__setattr__(self, "angle", t)

    @classmethod
    def from_vector(cls, u0: float, u1: float) -> "BoundaryPoint":
        """From homogeneous coordinates ``[u0 : u1]`` of the real line."""
        return cls(-2.0 * math.atan2(u1, u0))

    @classmethod
    def from_halfplane(cls, x: float) -> "BoundaryPoint":
        if math.isinf(x):
            return cls(0.0)
        return cls.from_vector(x, 1.0)

    def to_vector(self) -> Tuple[float, float]:
        h = -0.5 * self.angle
        return (math.cos(h), math.sin(h))

    def to_halfplane(self) -> float:
        u0, u1 = self.to_vector()
        if u1 == 0.0:
            return math.inf
        return u0 / u1


def rotation(theta: float) -> MoebiusElement:
    """Elliptic element fixing ``i`` with rotation angle ``theta``."""
    c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
    return MoebiusElement(c, -s, s, c)


def hyperbolic_translation(length: float) -> MoebiusElement:
    """Translation by ``length`` along the geodesic with endpoints -1 and 1."""
    ch, sh = math.cosh(0.5 * length), math.sinh(0.5 * length)
    return MoebiusElement(ch, sh, sh, ch)


def geodesic_step(t: float) -> MoebiusElement:
    """``diag(e^{t/2}, e^{-t/2})``: unit-speed translation along the imaginary axis."""
    e = math.exp(0.5 * t)
    return MoebiusElement(e, 0.0, 0.0, 1.0 / e)


def distance_from_i(m: MoebiusElement) -> float:
    """Hyperbolic distance between ``m . i`` and ``i``."""
    s = m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d
    return math.acosh(max(0.5 * s, 1.0))


def classify(m: MoebiusElement, tol_id: float = TOL_ID,
             tol_cls: float = TOL_CLS) -> Kind:
    if m.distance(MoebiusElement.identity()) <= tol_id:
        return Kind.IDENTITY
    t = abs(m.trace)
    if t < 2.0 - tol_cls:
        return Kind.ELLIPTIC
    if t <= 2.0 + tol_cls:
        return Kind.PARABOLIC
    return Kind.HYPERBOLIC


def translation_length(m: MoebiusElement) -> float:
    kind = classify(m)
    if kind is not Kind.HYPERBOLIC:
        raise NonHyperbolicError(f"{kind.value} element has no translation length")
    return 2.0 * math.acosh(0.5 * abs(m.trace))


def translation_lengths(traces: np.ndarray) -> np.ndarray:
    """Vectorized ``2 arccosh(|tr| / 2)``; raises if any trace is not hyperbolic."""
    t = np.abs(np.asarray(traces, dtype=float))
    bad = ~(t > 2.0 + TOL_CLS)
    if bad.any():
        j = int(np.flatnonzero(bad)[0])
        raise NonHyperbolicError(f"entry {j} has |trace| = {t[j]!r}")
    return 2.0 * np.arccosh(0.5 * t)


def _eigenvector(m: MoebiusElement, mu: float) -> Tuple[float, float]:
    # (b, mu - a) and (mu - d, c) both solve (M - mu) v = 0; keep the larger
    v1 = (m.b, mu - m.a)
    v2 = (mu - m.d, m.c)
    n1 = math.hypot(*v1)
    n2 = math.hypot(*v2)
    v, n = (v1, n1) if n1 >= n2 else (v2, n2)
    return (v[0] / n, v[1] / n)


def fixed_vectors(m: MoebiusElement) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    """Unit homogeneous vectors of the attracting and repelling fixed points."""
    if classify(m) is not Kind.HYPERBOLIC:
        raise NonHyperbolicError("only hyperbolic elements have two fixed points")
    tr = m.trace
    sgn = 1.0 if tr > 0 else -1.0
    t = abs(tr)
    big = 0.5 * (t + math.sqrt((t - 2.0) * (t + 2.0)))
    mu_att = sgn * big
    mu_rep = sgn / big
    return _eigenvector(m, mu_att), _eigenvector(m, mu_rep)


def fixed_points(m: MoebiusElement) -> Tuple[BoundaryPoint, BoundaryPoint]:
    """Attracting and repelling fixed points of a hyperbolic element."""
    att, rep = fixed_vectors(m)
    return BoundaryPoint.from_vector(*att), BoundaryPoint.from_vector(*rep)


def boundary_action(m: MoebiusElement, p: BoundaryPoint) -> BoundaryPoint:
    u0, u1 = p.to_vector()
    return BoundaryPoint.from_vector(m.a * u0 + m.b * u1, m.c * u0 + m.d * u1)


def in_open_arc(x: float, start: float, end: float) -> bool:
    """Whether angle ``x`` lies strictly inside the counterclockwise arc."""
    span = (end - start) % TWO_PI
    off = (x - start) % TWO_PI
    return 0.0 < off < span


def cyclically_ordered(x: float, y: float, z: float) -> bool:
    """True when ``x, y, z`` occur in counterclockwise order."""
    return in_open_arc(y, x, z)


def links(p: float, q: float, x: float, y: float) -> bool:
    """Whether chord ``{x, y}`` crosses chord ``{p, q}`` (all angles distinct)."""
    return in_open_arc(x, p, q) != in_open_arc(y, p, q)
