"""Marked Fuchsian representations of closed surface groups.

A :class:`Holonomy` stores the images of ``a1, b1, ..., ag, bg`` followed by
the images of their inverses. The surface relator is
``[a1, b1] ... [ag, bg]`` with ``[x, y] = x y x^-1 y^-1``.

Base points come from the regular 4g-gon with vertex angle ``2 pi / 4g``.
New points of Teichmueller space are produced by precomposing with mapping
classes (Dehn twists), which keeps the underlying metric and changes the
marking.

Genus 2 uses the opposite-side pairing of the regular octagon. With side
pairings ``s_k = R(k pi / 4) T R(-k pi / 4)`` (``k = 0..3``, ``T`` a
translation of length ``2 arccosh(1 + sqrt 2)``) they satisfy

    s0 s1^-1 s2 s3^-1 s0^-1 s1 s2^-1 s3 = 1

and the symplectic generators are

    a1 = s1^-1,  b1 = s0,  a2 = s0 s1^-1 s2,  b2 = s2^-1 s3.

Conversely ``s0 = b1``, ``s1 = a1^-1``, ``s2 = A1 B1 a2``,
``s3 = A1 B1 a2 b2``. All four generators are systoles of the Bolza surface.
Genus ``g >= 3`` uses the pairing ``a1 b1 A1 B1 a2 ...`` of the same polygon,
which satisfies the standard relator directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np

from teichcurrents import kernels
from teichcurrents.errors import (InvalidGenusError, LetterRangeError,
                                  ValidationFailed)
from teichcurrents.moebius import (TOL_ID, TOL_CLS, MoebiusElement,
                                   cyclically_ordered, fixed_points,
                                   hyperbolic_translation, rotation, Kind)
from teichcurrents.words import (Word, alphabet, enumerate_classes, format_word,
                                 inverse, letter_key, reduce)

RELATOR_TOL = 1e-9
SYSTOLE_FLOOR = 1e-3
DET_TOL = 1e-12
INVERSE_TOL = 1e-12
# beyond this, rounding (about eps * conditioning) spoils lengths at the 1e-6 level
CONDITIONING_MAX = 1e9


def relator(genus: int) -> Word:
    w: List[int] = []
    for i in range(1, genus + 1):
        a, b = 2 * i - 1, 2 * i
        w += [a, b, -a, -b]
    return tuple(w)


def polygon_inradius(genus: int) -> float:
    return math.acosh(1.0 / math.tan(math.pi / (4 * genus)))


def polygon_circumradius(genus: int) -> float:
    return math.acosh(1.0 / math.tan(math.pi / (4 * genus)) ** 2)


@dataclass(frozen=True)
class Holonomy:
    genus: int
    gens: Tuple[MoebiusElement, ...]
    label: str = ""

    def __post_init__(self):
        if self.genus < 2:
            raise InvalidGenusError(f"genus must be >= 2, got {self.genus}")
        if len(self.gens) != 4 * self.genus:
            raise ValueError(f"expected {4 * self.genus} generator images, "
                             f"got {len(self.gens)}")

    @classmethod
    def from_generators(cls, genus: int, images: Sequence[MoebiusElement],
                        label: str = "") -> "Holonomy":
        """Build from the ``2g`` images of ``a1, b1, ...``; inverses are derived."""
        images = tuple(images)
        return cls(genus, images + tuple(m.inverse() for m in images), label)

    def with_label(self, label: str) -> "Holonomy":
        return Holonomy(self.genus, self.gens, label)

    def letter_index(self, x: int) -> int:
        n = 2 * self.genus
        if x == 0 or abs(x) > n:
            raise LetterRangeError(f"letter {x} outside genus {self.genus} alphabet")
        return x - 1 if x > 0 else n - x - 1

    @cached_property
    def array(self) -> np.ndarray:
        """Generator images as a C-contiguous ``(4g, 4)`` array."""
        return np.ascontiguousarray(np.array([m.entries for m in self.gens]))

    @cached_property
    def inverse_index(self) -> np.ndarray:
        n = 2 * self.genus
        return np.array([(k + n) % (2 * n) for k in range(2 * n)], dtype=np.int64)

    def images(self) -> Tuple[MoebiusElement, ...]:
        return self.gens[: 2 * self.genus]


def evaluate_words(H: Holonomy, words: Sequence[Sequence[int]]) -> np.ndarray:
    """Batched :func:`evaluate_word`; returns raw ``(m, 4)`` entries."""
    flat: List[int] = []
    offs = [0]
    for w in words:
        flat.extend(H.letter_index(x) for x in w)
        offs.append(len(flat))
    return kernels.eval_words(H.array, np.array(flat, dtype=np.int64),
                              np.array(offs, dtype=np.int64))


def evaluate_word(H: Holonomy, w: Sequence[int]) -> MoebiusElement:
    """``rho(w)``: ordered product of generator images; empty word gives I."""
    return MoebiusElement.from_array(evaluate_words(H, [tuple(w)])[0])


def _octagon_side_pairings():
    r = polygon_inradius(2)
    T = hyperbolic_translation(2.0 * r)
    return [rotation(k * math.pi / 4) @ T @ rotation(-k * math.pi / 4)
            for k in range(4)]


def regular_polygon_rep(genus: int) -> Holonomy:
    """Holonomy of the regular 4g-gon surface (Bolza surface for ``g = 2``)."""
    if genus < 2:
        raise InvalidGenusError(f"genus must be >= 2, got {genus}")
    if genus == 2:
        s0, s1, s2, s3 = _octagon_side_pairings()
        S1 = s1.inverse()
        images = [S1, s0, s0 @ S1 @ s2, s2.inverse() @ s3]
    else:
        n = 4 * genus
        T = hyperbolic_translation(2.0 * polygon_inradius(genus))

        def pair(j, k):
            return (rotation(2 * math.pi * k / n) @ T
                    @ rotation(math.pi - 2 * math.pi * j / n))

        images = []
        for i in range(genus):
            base = 4 * i
            images += [pair(base + 2, base), pair(base + 1, base + 3)]
    return Holonomy.from_generators(genus, images, label="base")


@dataclass(frozen=True)
class MarkingAutomorphism:
    """Substitution ``x -> images[x]`` on the ``4g`` letters.

    ``images`` follows the holonomy generator order: ``a1, b1, ..., A1, B1, ...``.
    """

    genus: int
    images: Tuple[Word, ...]
    name: str = ""

    def image(self, x: int) -> Word:
        n = 2 * self.genus
        return self.images[x - 1 if x > 0 else n - x - 1]

    def apply(self, w: Sequence[int]) -> Word:
        out: List[int] = []
        for x in w:
            out.extend(self.image(x))
        return reduce(out)

    def __mul__(self, other: "MarkingAutomorphism") -> "MarkingAutomorphism":
        """Composite acting on holonomies as ``self`` after ``other``.

        ``precompose(H, phi * psi) == precompose(precompose(H, psi), phi)``;
        as substitutions, ``(phi * psi)(x) = psi(phi(x))``.
        """
        if self.genus != other.genus:
            raise ValueError("genus mismatch")
        imgs = tuple(other.apply(w) for w in self.images)
        name = f"{self.name}*{other.name}" if self.name or other.name else ""
        return MarkingAutomorphism(self.genus, imgs, name)

    def __pow__(self, k: int) -> "MarkingAutomorphism":
        if k < 0:
            raise ValueError("use dehn_twist with a negative power for inverses")
        out = identity_automorphism(self.genus)
        for _ in range(k):
            out = out * self
        return MarkingAutomorphism(self.genus, out.images, f"({self.name})^{k}")


def _with_inverses(genus: int, positive: Sequence[Word]) -> Tuple[Word, ...]:
    positive = tuple(tuple(w) for w in positive)
    return positive + tuple(inverse(w) for w in positive)


def identity_automorphism(genus: int) -> MarkingAutomorphism:
    return MarkingAutomorphism(
        genus, _with_inverses(genus, [(x,) for x in range(1, 2 * genus + 1)]), "id")


def dehn_twist(genus: int, curve_index: int, power: int = 1) -> MarkingAutomorphism:
    """Twist about ``a_i``: ``b_i -> b_i a_i^power``, other generators fixed."""
    if not 1 <= curve_index <= genus:
        raise IndexError(f"curve index must be in 1..{genus}, got {curve_index}")
    a, b = 2 * curve_index - 1, 2 * curve_index
    step = (a,) if power >= 0 else (-a,)
    pos = []
    for x in range(1, 2 * genus + 1):
        pos.append((b,) + step * abs(power) if x == b else (x,))
    return MarkingAutomorphism(genus, _with_inverses(genus, pos),
                               f"twist:a{curve_index}:{power}")


@dataclass(frozen=True)
class ValidationReport:
    """Validation figures; thresholds are applied relative to ``conditioning``.

    Rounding errors in products of generator images grow with the size of the
    entries. ``conditioning`` is ``max(1, max_k ||g_k||_F^2 / 2)``, i.e. the
    largest ``cosh d(i, g_k i)``; every residual is compared with its
    tolerance times this factor. Representations with conditioning above
    ``CONDITIONING_MAX`` fail outright.
    """

    relator_residual: float
    min_sampled_length: float
    det_residual: float
    inverse_residual: float
    conditioning: float = 1.0
    non_hyperbolic: Tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        k = self.conditioning
        return (k <= CONDITIONING_MAX
                and self.relator_residual <= RELATOR_TOL * k
                and self.min_sampled_length >= SYSTOLE_FLOOR
                and self.det_residual <= DET_TOL * k
                and self.inverse_residual <= INVERSE_TOL * k
                and not self.non_hyperbolic)

    def failures(self) -> List[str]:
        k = self.conditioning
        out = []
        if k > CONDITIONING_MAX:
            out.append(f"conditioning {k:.3e} > {CONDITIONING_MAX:g}: entries too "
                       "large for double precision")
        if self.relator_residual > RELATOR_TOL * k:
            out.append(f"relator residual {self.relator_residual:.3e} > "
                       f"{RELATOR_TOL:g} x {k:.3g}")
        if self.non_hyperbolic:
            out.append("non-hyperbolic sampled elements: "
                       + ", ".join(self.non_hyperbolic[:5]))
        elif self.min_sampled_length < SYSTOLE_FLOOR:
            out.append(f"sampled length {self.min_sampled_length:.3e} < {SYSTOLE_FLOOR:g}")
        if self.det_residual > DET_TOL * k:
            out.append(f"determinant residual {self.det_residual:.3e}")
        if self.inverse_residual > INVERSE_TOL * k:
            out.append(f"stored inverse residual {self.inverse_residual:.3e}")
        return out

    def as_dict(self) -> dict:
        return {
            "relator_residual": self.relator_residual,
            "min_sampled_length": self.min_sampled_length,
            "det_residual": self.det_residual,
            "inverse_residual": self.inverse_residual,
            "conditioning": self.conditioning,
            "non_hyperbolic": list(self.non_hyperbolic),
            "status": "PASS" if self.passed else "FAIL",
        }


def _residual_to_identity(m: np.ndarray) -> float:
    e = np.array([1.0, 0.0, 0.0, 1.0])
    return float(min(np.abs(m - e).max(), np.abs(m + e).max()))


def validate(H: Holonomy, sample_length: int = 3) -> ValidationReport:
    """Relator, determinant, inverse and systole checks."""
    arr = H.array
    det = arr[:, 0] * arr[:, 3] - arr[:, 1] * arr[:, 2]
    det_res = float(np.abs(det - 1.0).max())
    cond = max(1.0, float((arr ** 2).sum(axis=1).max()) / 2.0)
    n = 2 * H.genus
    inv_res = 0.0
    for k in range(n):
        a, b, c, d = H.gens[k].entries
        e, f, g, h = H.gens[k + n].entries
        m = np.array([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
        inv_res = max(inv_res, _residual_to_identity(m))
    rel = evaluate_words(H, [relator(H.genus)])[0]
    rel_res = _residual_to_identity(rel)
    classes = enumerate_classes(H.genus, sample_length)
    mats = evaluate_words(H, [c.rep for c in classes])
    bad = []
    min_len = math.inf
    for c, m in zip(classes, mats):
        t = abs(m[0] + m[3])
        if not np.isfinite(m).all():
            bad.append(f"{format_word(c.rep)} (overflow)")
            min_len = 0.0
            continue
        if _residual_to_identity(m) <= TOL_ID:
            kind = Kind.IDENTITY
        elif t < 2.0 - TOL_CLS:
            kind = Kind.ELLIPTIC
        elif t <= 2.0 + TOL_CLS:
            kind = Kind.PARABOLIC
        else:
            kind = Kind.HYPERBOLIC
        if kind is not Kind.HYPERBOLIC:
            bad.append(f"{format_word(c.rep)} ({kind.value})")
            min_len = 0.0
            continue
        min_len = min(min_len, 2.0 * math.acosh(0.5 * t))
    return ValidationReport(rel_res, min_len, det_res, inv_res, cond, tuple(bad))


def precompose(H: Holonomy, phi: MarkingAutomorphism,
               label: Optional[str] = None, check: bool = True) -> Holonomy:
    """The holonomy ``rho o phi``; raises :class:`ValidationFailed` if invalid."""
    if phi.genus != H.genus:
        raise ValueError("genus mismatch")
    mats = evaluate_words(H, phi.images[: 2 * H.genus])
    images = [MoebiusElement.from_array(m) for m in mats]
    if label is None:
        label = f"{H.label}|{phi.name}" if H.label else phi.name
    out = Holonomy.from_generators(H.genus, images, label)
    if check:
        rep = validate(out)
        if not rep.passed:
            raise ValidationFailed("precomposition broke the holonomy: "
                                   + "; ".join(rep.failures()), rep)
    return out


def conjugate(H: Holonomy, M: MoebiusElement, label: Optional[str] = None) -> Holonomy:
    """All generators replaced by ``M g M^-1``: the same Teichmueller point."""
    Mi = M.inverse()
    images = [M @ g @ Mi for g in H.images()]
    return Holonomy.from_generators(H.genus, images,
                                    label if label is not None else f"{H.label}|conj")


def _conj_by_reflection(m: MoebiusElement) -> MoebiusElement:
    # diag(1, -1) m diag(1, -1)
    return MoebiusElement(m.a, -m.b, -m.c, m.d)


def orientation_reverse(H: Holonomy, label: Optional[str] = None) -> Holonomy:
    """Apply the outer automorphism: conjugation by ``diag(1, -1)``."""
    images = [_conj_by_reflection(g) for g in H.images()]
    return Holonomy.from_generators(H.genus, images,
                                    label if label is not None else f"{H.label}|tau")


def random_moebius(rng: np.random.Generator, scale: float = 1.0) -> MoebiusElement:
    """Random element ``R(t1) A(s) R(t2)`` with ``|s| <= scale``."""
    t1, t2 = rng.uniform(0.0, 2 * math.pi, size=2)
    s = rng.uniform(-scale, scale)
    return rotation(t1) @ hyperbolic_translation(s) @ rotation(t2)


def orientation_signature(H: Holonomy) -> int:
    """+1 or -1: cyclic order of three generator fixed points on the circle.

    Conjugation by PSL(2, R) keeps the sign; the orientation-reversing outer
    automorphism flips it. Traces cannot see this difference.
    """
    att1, rep1 = fixed_points(H.gens[0])
    att2, _ = fixed_points(H.gens[1])
    return 1 if cyclically_ordered(att1.angle, rep1.angle, att2.angle) else -1


def cayley_ball(genus: int, radius: int) -> List[Word]:
    """All reduced words of length at most ``radius``, shortlex ordered."""
    letters = sorted(alphabet(genus), key=letter_key)
    out: List[Word] = [()]
    layer: List[Word] = [()]
    for _ in range(radius):
        nxt = []
        for w in layer:
            for x in letters:
                if not w or x != -w[-1]:
                    nxt.append(w + (x,))
        out += nxt
        layer = nxt
    return out


@dataclass(frozen=True)
class DomainMoves:
    """Elements used to reduce points of the plane towards ``i``."""

    matrices: np.ndarray = field(repr=False)
    words: Tuple[Word, ...]
    min_displacement: float
    cutoff: float

    @property
    def skip_s(self) -> float:
        """Threshold on ``a^2 + b^2 + c^2 + d^2`` below which no move helps."""
        return 2.0 * math.cosh(0.5 * self.min_displacement)


def domain_moves(H: Holonomy, radius: int = 4,
                 cutoff: Optional[float] = None) -> DomainMoves:
    """Short group elements moving ``i`` at most ``cutoff``.

    The default cutoff is twice the circumradius of the regular 4g-gon, which
    keeps every side pairing of its Dirichlet domain and the elements meeting
    it at a vertex. Greedy descent over this set therefore stops only inside
    that polygon.
    """
    if cutoff is None:
        cutoff = 2.0 * polygon_circumradius(H.genus) + 1e-6
    ball = cayley_ball(H.genus, radius)[1:]
    mats = evaluate_words(H, ball)
    s = (mats ** 2).sum(axis=1)
    disp = np.arccosh(np.maximum(0.5 * s, 1.0))
    seen = {}
    for w, m, dd in zip(ball, mats, disp):
        if dd < 1e-6:
            continue  # trivial in the group (relator consequences)
        if dd > cutoff:
            continue
        mm = m if (m[0] > 0 or (m[0] == 0 and m[1] > 0)) else -m
        key = tuple(np.round(mm, 7))
        if key not in seen:
            seen[key] = (w, m)
    nontrivial = disp[disp >= 1e-6]
    words = tuple(v[0] for v in seen.values())
    arr = np.ascontiguousarray(np.array([v[1] for v in seen.values()]))
    return DomainMoves(arr, words, float(nontrivial.min()), float(cutoff))


def save_holonomy(H: Holonomy, path) -> None:
    with open(path, "w") as fh:
        fh.write("# teichcurrents holonomy: rows a b c d for "
                 + " ".join(format_word((x,)) for x in
                            list(range(1, 2 * H.genus + 1))
                            + [-x for x in range(1, 2 * H.genus + 1)])
                 + "\n")
        fh.write(f"genus {H.genus}\n")
        fh.write(f"label {H.label}\n")
        for g in H.gens:
            fh.write(" ".join(repr(x) for x in g.entries) + "\n")


def load_holonomy(path, force: bool = False) -> Holonomy:
    """Read a representation file; refuses holonomies that fail validation."""
    genus = None
    label = ""
    rows = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, _, rest = line.partition(" ")
            if head == "genus":
                genus = int(rest)
            elif head == "label":
                label = rest.strip()
            else:
                try:
                    vals = [float(t) for t in line.split()]
                except ValueError:
                    raise ValueError(f"{path}:{lineno}: cannot parse {line!r}") from None
                if len(vals) != 4:
                    raise ValueError(f"{path}:{lineno}: expected 4 numbers, got {len(vals)}")
                rows.append(MoebiusElement(*vals))
    if genus is None:
        raise ValueError(f"{path}: missing 'genus' field")
    H = Holonomy(genus, tuple(rows), label)
    rep = validate(H)
    if not rep.passed and not force:
        raise ValidationFailed(f"{path}: " + "; ".join(rep.failures()), rep)
    return H
