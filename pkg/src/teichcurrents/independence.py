"""Rank tests on length matrices and the dimension of the limit cone.

A relation ``sum_k a_k L(S_k) = 0`` between Liouville currents gives, for
every closed curve ``c``, ``sum_k a_k length_k(c) = 0``. Such coefficient
vectors are left null vectors of the length matrix (rows are surfaces), so
the numerical rank bounds the number of independent currents from below.

The Jordan projections of a diagonal representation into ``PSL(2, R)^n``
are the columns of the same matrix. Their directions fill an open subset of
the simplex exactly when the limit cone has nonempty interior.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from teichcurrents.errors import DegenerateInputError, TooFewSamplesError
from teichcurrents.holonomy import Holonomy
from teichcurrents.spectrum import (JordanSample, LengthMatrix, jordan_samples,
                                    length_matrix, relation_kind)
from teichcurrents.words import ConjClass, enumerate_classes

TOL_RANK = 1e-8
TOL_CONE = 1e-6
# centered simplex clouds below this spread are rounding noise around a point
CONE_NOISE = 1e-10
CERT_TOL = 1e-6


@dataclass(frozen=True)
class RankProfile:
    """Singular data of the column-normalized length matrix.

    ``kernel`` holds unit coefficient vectors over the surfaces (rows).
    ``gap_ratio`` is ``sigma[r] / sigma[r - 1]``, or 0 when the matrix has
    full row rank.
    """

    singular_values: np.ndarray
    rank: int
    kernel: np.ndarray
    gap_ratio: float
    tol_rel: float

    def as_dict(self) -> Dict:
        return {
            "singular_values": [float(x) for x in self.singular_values],
            "rank": self.rank,
            "kernel": [[float(x) for x in k] for k in self.kernel],
            "gap_ratio": self.gap_ratio,
            "tol_rel": self.tol_rel,
        }


def _fix_sign(v: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(v) > 1e-12)
    if nz.size and v[nz[0]] < 0:
        return -v
    return v


def normalize_columns(values: np.ndarray) -> np.ndarray:
    """Divide each column by its mean (lengths are positive)."""
    mean = values.mean(axis=0)
    if np.any(mean <= 0.0):
        raise DegenerateInputError("column means must be positive")
    return values / mean


def rank_profile(M, tol_rel: float = TOL_RANK) -> RankProfile:
    """Numerical rank and left kernel of a length matrix.

    Parameters
    ----------
    M : LengthMatrix or ndarray
        ``n`` surfaces by ``m`` classes.
    tol_rel : float
        Singular values ``<= tol_rel * sigma_1`` count as zero.

    Raises
    ------
    DegenerateInputError
        If the matrix is empty. With fewer classes than surfaces a warning is
        issued instead and the profile is still computed.
    """
    values = M.values if isinstance(M, LengthMatrix) else np.asarray(M, dtype=float)
    if values.ndim != 2 or values.shape[0] == 0 or values.shape[1] == 0:
        raise DegenerateInputError(f"length matrix has shape {values.shape}")
    if not tol_rel > 0.0:
        raise ValueError("tol_rel must be positive")
    n, m = values.shape
    if m < n:
        warnings.warn(f"only {m} classes for {n} surfaces; rank is at most {m}",
                      RuntimeWarning, stacklevel=2)
    A = normalize_columns(values)
    # left singular vectors of A are the coefficient directions over surfaces
    U, sigma, _ = np.linalg.svd(A, full_matrices=True)
    full = np.zeros(n)
    full[:sigma.size] = sigma
    s1 = full[0]
    r = int(np.count_nonzero(full > tol_rel * s1)) if s1 > 0 else 0
    kernel = np.array([_fix_sign(U[:, j]) for j in range(r, n)]).reshape(n - r, n)
    gap = float(full[r] / full[r - 1]) if 0 < r < n else 0.0
    return RankProfile(full, r, kernel, gap, tol_rel)


def kernel_certificate(values: np.ndarray, k: np.ndarray) -> float:
    """``|M^T k|_inf / max |M|``; small means ``k`` is a genuine relation."""
    return float(np.abs(values.T @ k).max() / np.abs(values).max())


@dataclass(frozen=True)
class Verdict:
    status: str  # "INDEPENDENT" or "DEPENDENT"
    profile: RankProfile
    n_classes: int
    certificates: Tuple[float, ...] = ()
    witnesses: Tuple[Tuple[str, str, str], ...] = ()

    @property
    def independent(self) -> bool:
        return self.status == "INDEPENDENT"

    def as_dict(self) -> Dict:
        return {
            "verdict": self.status,
            "n_classes": self.n_classes,
            "profile": self.profile.as_dict(),
            "kernel_certificates": list(self.certificates),
            "witness_pairs": [list(w) for w in self.witnesses],
        }


def _pair_support(k: np.ndarray, tol: float = 1e-6) -> Optional[Tuple[int, int]]:
    nz = np.flatnonzero(np.abs(k) > tol)
    if nz.size != 2:
        return None
    i, j = int(nz[0]), int(nz[1])
    if abs(k[i] + k[j]) > tol:
        return None
    return i, j


def independence_verdict(surfaces: Sequence[Holonomy], lmax: int = 6,
                         tol_rel: float = TOL_RANK,
                         classes: Optional[Sequence[ConjClass]] = None) -> Verdict:
    """Decide whether the Liouville currents of ``surfaces`` are independent.

    Witness pairs are reported for every pair of surfaces with equal marked
    spectra on the sampled classes, together with whether the pair is
    conjugate or related by orientation reversal.
    """
    if not surfaces:
        raise DegenerateInputError("need at least one surface")
    genus = surfaces[0].genus
    if classes is None:
        if lmax < 1:
            raise DegenerateInputError(f"no classes of length <= {lmax}")
        classes = enumerate_classes(genus, lmax)
    if not classes:
        raise DegenerateInputError("empty class set")
    lm = length_matrix(surfaces, classes)
    prof = rank_profile(lm, tol_rel)
    if prof.rank == len(surfaces):
        return Verdict("INDEPENDENT", prof, len(classes))
    certs = tuple(kernel_certificate(lm.values, k) for k in prof.kernel)
    wit = []
    for i, j in itertools.combinations(range(len(surfaces)), 2):
        kind = relation_kind(surfaces[i], surfaces[j], classes)
        if kind != "distinct":
            wit.append((surfaces[i].label, surfaces[j].label, kind))
    # a pair-supported kernel vector must come from such a pair
    for k in prof.kernel:
        pair = _pair_support(k)
        if pair is not None:
            labels = (surfaces[pair[0]].label, surfaces[pair[1]].label)
            if not any((w[0], w[1]) == labels for w in wit):
                wit.append(labels + ("kernel-pair",))
    return Verdict("DEPENDENT", prof, len(classes), certs, tuple(wit))


@dataclass(frozen=True)
class ConeEstimate:
    """Affine-hull dimension of the projectivized Jordan projections."""

    n_samples: int
    points: np.ndarray = field(repr=False)
    singular_values: np.ndarray
    dimension: int  # affine dimension d of the point cloud
    diagonal_defect: Dict[Tuple[int, int], float]
    tol_rel: float

    @property
    def cone_dimension(self) -> int:
        return self.dimension + 1

    @property
    def full(self) -> bool:
        return self.dimension == self.points.shape[1] - 1

    def as_dict(self) -> Dict:
        return {
            "n_samples": self.n_samples,
            "singular_values": [float(x) for x in self.singular_values],
            "affine_dimension": self.dimension,
            "cone_dimension": self.cone_dimension,
            "full": self.full,
            "diagonal_defect": {f"{i},{j}": v for (i, j), v in
                                sorted(self.diagonal_defect.items())},
            "tol_rel": self.tol_rel,
        }


def cone_dimension(samples: Sequence, tol_rel: float = TOL_CONE) -> ConeEstimate:
    """Dimension of the cone spanned by Jordan projections.

    Each sample is projected to the simplex by ``lambda / |lambda|_1``; the
    affine dimension of the cloud is the number of centered singular values
    above ``tol_rel * sigma_1``. Singular values below ``1e-10 sqrt(m)`` are
    treated as rounding noise, so a cloud collapsed to one point has
    dimension 0.

    Raises
    ------
    TooFewSamplesError
        With fewer than ``n + 1`` samples in ``R^n``.
    """
    vecs = np.array([s.vector if isinstance(s, JordanSample) else np.asarray(s, float)
                     for s in samples])
    if vecs.ndim != 2 or vecs.shape[0] == 0:
        raise TooFewSamplesError("no samples")
    m, n = vecs.shape
    if m < n + 1:
        raise TooFewSamplesError(f"{m} samples cannot span a cone in R^{n}")
    if not tol_rel > 0.0:
        raise ValueError("tol_rel must be positive")
    pts = vecs / vecs.sum(axis=1, keepdims=True)
    centered = pts - pts.mean(axis=0)
    sigma = np.linalg.svd(centered, compute_uv=False)
    s1 = sigma[0] if sigma.size else 0.0
    scale = CONE_NOISE * math.sqrt(m)
    d = int(np.count_nonzero(sigma > max(tol_rel * s1, scale)))
    d = min(d, n - 1)
    defect = {(i, j): float(np.abs(vecs[:, i] - vecs[:, j]).max())
              for i, j in itertools.combinations(range(n), 2)}
    return ConeEstimate(m, pts, sigma, d, defect, tol_rel)


def cone_of_surfaces(surfaces: Sequence[Holonomy], lmax: int = 4,
                     tol_rel: float = TOL_CONE) -> ConeEstimate:
    classes = enumerate_classes(surfaces[0].genus, lmax)
    return cone_dimension(jordan_samples(surfaces, classes), tol_rel)
