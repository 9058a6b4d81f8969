"""Marked length spectra and Jordan projections.

The Jordan projection of ``rho(gamma)`` in ``PSL(2, R)^n`` is the vector of
translation lengths of its components, and the translation length of
``rho_k(gamma)`` is the length of the closed geodesic of ``gamma`` on the
k-th surface. Both are therefore computed by the same routine
(:func:`word_lengths`); :func:`jordan_samples` is the transposed length matrix.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from teichcurrents.errors import NonHyperbolicError
from teichcurrents.holonomy import Holonomy, evaluate_words, orientation_signature
from teichcurrents.moebius import TOL_CLS
from teichcurrents.words import ConjClass, format_word

SPECTRA_TOL = 1e-6


def word_lengths(H: Holonomy, words: Sequence[Sequence[int]]) -> np.ndarray:
    """Translation lengths ``2 arccosh(|tr| / 2)`` of ``rho(w)`` for each word.

    Generator images have unit determinant, so the trace of the raw product
    is used as is. Dividing by the computed ``sqrt(ad - bc)`` would cost
    accuracy on long words, whose determinant suffers heavy cancellation.
    """
    mats = evaluate_words(H, words)
    out = np.empty(len(words))
    for j, m in enumerate(mats):
        t = abs(m[0] + m[3])
        if not t > 2.0 + TOL_CLS:
            raise NonHyperbolicError(
                f"surface {H.label!r}, class {format_word(words[j])!r}: "
                f"|trace| = {t!r} is not hyperbolic")
        out[j] = 2.0 * math.acosh(0.5 * t)
    return out


def curve_length(H: Holonomy, c: ConjClass) -> float:
    """Length of the closed geodesic in the class ``c``."""
    return float(word_lengths(H, [c.rep])[0])


@dataclass(frozen=True)
class LengthMatrix:
    """``values[k, j]`` is the length of class ``j`` on surface ``k``."""

    rows: tuple
    cols: tuple
    values: np.ndarray

    @property
    def shape(self):
        return self.values.shape

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["surface"] + [format_word(c.rep) for c in self.cols])
            for label, row in zip(self.rows, self.values):
                w.writerow([label] + ["%.17g" % x for x in row])


def read_length_csv(path) -> LengthMatrix:
    from teichcurrents.words import canonical_rep, parse_word

    with open(path, newline="") as fh:
        r = list(csv.reader(fh))
    cols = tuple(canonical_rep(parse_word(t)) for t in r[0][1:])
    rows = tuple(line[0] for line in r[1:])
    vals = np.array([[float(x) for x in line[1:]] for line in r[1:]])
    return LengthMatrix(rows, cols, vals)


def length_matrix(surfaces: Sequence[Holonomy],
                  classes: Sequence[ConjClass]) -> LengthMatrix:
    if not surfaces or not classes:
        raise ValueError("need at least one surface and one class")
    words = [c.rep for c in classes]
    vals = np.vstack([word_lengths(H, words) for H in surfaces])
    return LengthMatrix(tuple(H.label for H in surfaces), tuple(classes), vals)


def spectra_equal(H1: Holonomy, H2: Holonomy, classes: Sequence[ConjClass],
                  tol: float = SPECTRA_TOL) -> bool:
    """Whether two marked length spectra agree on ``classes`` within ``tol``."""
    if H1.genus != H2.genus:
        raise ValueError("genus mismatch")
    lm = length_matrix([H1, H2], classes).values
    return bool(np.abs(lm[0] - lm[1]).max() <= tol)


def relation_kind(H1: Holonomy, H2: Holonomy, classes: Sequence[ConjClass],
                  tol: float = SPECTRA_TOL) -> str:
    """``"conjugate"``, ``"tau-related"`` or ``"distinct"``.

    Equal spectra with opposite orientation signatures means the two
    representations differ by the orientation-reversing outer automorphism
    (up to conjugacy): same unmarked lengths, different oriented surface.
    """
    if not spectra_equal(H1, H2, classes, tol):
        return "distinct"
    if orientation_signature(H1) == orientation_signature(H2):
        return "conjugate"
    return "tau-related"


@dataclass(frozen=True)
class JordanSample:
    cls: ConjClass
    vector: np.ndarray


def jordan_samples(surfaces: Sequence[Holonomy],
                   classes: Sequence[ConjClass]) -> List[JordanSample]:
    lm = length_matrix(surfaces, classes)
    return [JordanSample(c, lm.values[:, j].copy()) for j, c in enumerate(lm.cols)]
