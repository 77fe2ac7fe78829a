"""Multivariate Lagrange interpolation for layerwise Richardson extrapolation.

A degree-d polynomial in l noise scale factors has ``M = C(d+l, d)`` monomial
terms. Sampling it at M scale-factor vectors gives the square sample matrix A,
``a[i, j] = monomial_j(lambda_i)``. The zero-noise value is the constant term,
obtained as ``sum(eta_i * z_i)`` where ``A^T eta = e_1`` (Cramer's rule turns
this into the determinant-ratio form ``eta_i = det(M_i) / det(A)``).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from .circuit import check_scale_factor
from .errors import InvalidScaleFactor, SingularSampleMatrix

# Relative pivot threshold: |u_kk| <= tol * max_i |a_ik| means singular.
PIVOT_TOLERANCE = 1e-12


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Exponent vectors with entry sum `total`, in descending lexicographic order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


class MonomialBasis(BaseModel):
    """Graded lexicographic monomial basis: by total degree, then lex (``x1 > x2 > ...``)."""

    model_config = ConfigDict(frozen=True)

    l: int = Field(ge=1)
    d: int = Field(ge=0)
    exponents: Tuple[Tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.exponents)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Rows of monomial values, shape ``(len(points), M)``."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        exps = np.asarray(self.exponents, dtype=float)
        return np.prod(np.power(pts[:, None, :], exps[None, :, :]), axis=2)

    def labels(self) -> Tuple[str, ...]:
        """Human-readable monomials, e.g. ``("1", "l1", "l2", "l1^2", "l1*l2", "l2^2")``."""
        out = []
        for e in self.exponents:
            terms = [f"l{k + 1}" + (f"^{p}" if p > 1 else "") for k, p in enumerate(e) if p]
            out.append("*".join(terms) if terms else "1")
        return tuple(out)


@lru_cache(maxsize=256)
def monomial_basis(l: int, d: int) -> MonomialBasis:
    if l < 1 or d < 0:
        raise ValueError(f"need l >= 1 and d >= 0, got l={l}, d={d}")
    exponents = tuple(e for degree in range(d + 1) for e in _compositions(degree, l))
    basis = MonomialBasis(l=l, d=d, exponents=exponents)
    assert basis.size == comb(d + l, d)
    return basis


class ScaleFactorConfig(BaseModel):
    """The set of M scale-factor vectors (one odd integer per chunk)."""

    model_config = ConfigDict(frozen=True)

    l: int = Field(ge=1)
    d: int = Field(ge=0)
    delta: Optional[int] = None
    vectors: Tuple[Tuple[int, ...], ...]

    @model_validator(mode="after")
    def _check_vectors(self) -> "ScaleFactorConfig":
        expected = comb(self.d + self.l, self.d)
        if len(self.vectors) != expected:
            raise ValueError(f"need exactly C(d+l, d) = {expected} scale-factor vectors, got {len(self.vectors)}")
        for vec in self.vectors:
            if len(vec) != self.l:
                raise ValueError(f"scale-factor vector {vec} must have length {self.l}")
            for lam in vec:
                check_scale_factor(lam)
        return self

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[int]], d: int) -> "ScaleFactorConfig":
        if not vectors:
            raise ValueError("at least one scale-factor vector is required")
        vectors = tuple(tuple(check_scale_factor(x) for x in v) for v in vectors)
        return cls(l=len(vectors[0]), d=d, vectors=vectors)

    @property
    def size(self) -> int:
        return len(self.vectors)

    @property
    def basis(self) -> MonomialBasis:
        return monomial_basis(self.l, self.d)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.vectors, dtype=float)


def default_scale_factors(l: int, d: int, delta: int = 2) -> ScaleFactorConfig:
    """``lambda_i = 1 + delta * m_i`` for every non-negative integer m_i with ``|m_i|_1 <= d``."""
    if isinstance(delta, bool) or not isinstance(delta, int) or delta < 2 or delta % 2:
        raise InvalidScaleFactor(f"gap delta must be an even integer >= 2, got {delta!r}")
    vectors = tuple(tuple(1 + delta * m for m in e) for e in monomial_basis(l, d).exponents)
    return ScaleFactorConfig(l=l, d=d, delta=delta, vectors=vectors)


@dataclass(frozen=True)
class SampleMatrix:
    """Square sample matrix with its LU factorization (partial pivoting)."""

    entries: np.ndarray
    lu: np.ndarray
    piv: np.ndarray

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def solve_transposed(self, rhs: np.ndarray) -> np.ndarray:
        """Solve ``A^T x = rhs``."""
        return lu_solve((self.lu, self.piv), rhs, trans=1)


class EtaCoefficients(BaseModel):
    model_config = ConfigDict(frozen=True)

    values: Tuple[float, ...]

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def _factor(matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray, Optional[int]]:
    """LU-factor and return the index of the first negligible pivot (or None)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(matrix)
    pivots = np.abs(np.diag(lu))
    threshold = PIVOT_TOLERANCE * np.max(np.abs(matrix), axis=0)
    small = np.flatnonzero((pivots <= threshold) | (pivots == 0.0))
    return lu, piv, (int(small[0]) if small.size else None)


def _square(matrix: np.ndarray) -> np.ndarray:
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def sample_matrix(config: ScaleFactorConfig) -> SampleMatrix:
    entries = config.basis.evaluate(config.as_array())
    lu, piv, bad = _factor(entries)
    if bad is not None:
        raise SingularSampleMatrix(
            f"sample matrix is singular (pivot {bad}); change some scale-factor vectors",
            pivot=bad,
        )
    return SampleMatrix(entries=entries, lu=lu, piv=piv)


def determinant(matrix: np.ndarray) -> float:
    """Determinant via LU with partial pivoting; 0.0 when a pivot is negligible."""
    a = _square(matrix)
    if a.shape[0] == 0:
        return 1.0
    lu, piv, bad = _factor(a)
    if bad is not None:
        return 0.0
    swaps = int(np.count_nonzero(piv != np.arange(a.shape[0])))
    sign = -1.0 if swaps % 2 else 1.0
    return sign * float(np.prod(np.diag(lu)))


def _unit(size: int) -> np.ndarray:
    e1 = np.zeros(size)
    e1[0] = 1.0
    return e1


def eta_coefficients(config: ScaleFactorConfig) -> EtaCoefficients:
    """Zero-noise weights from one LU solve of ``A^T eta = e_1``."""
    a = sample_matrix(config)
    return EtaCoefficients(values=tuple(float(x) for x in a.solve_transposed(_unit(a.size))))


def eta_by_determinants(config: ScaleFactorConfig) -> EtaCoefficients:
    """Zero-noise weights as explicit determinant ratios ``det(M_i) / det(A)``.

    O(M^4); kept as an independent check of `eta_coefficients`.
    """
    a = sample_matrix(config).entries
    det_a = determinant(a)
    if det_a == 0.0:
        raise SingularSampleMatrix("sample matrix has zero determinant")
    e1 = _unit(a.shape[0])
    values = []
    for i in range(a.shape[0]):
        m_i = a.copy()
        m_i[i, :] = e1
        values.append(determinant(m_i) / det_a)
    return EtaCoefficients(values=tuple(values))


def lre_combine(eta: EtaCoefficients, z: Sequence[float]) -> float:
    """Zero-noise estimate ``sum(eta_i * z_i)``."""
    z = np.asarray(z, dtype=float)
    if z.shape != (len(eta),):
        raise ValueError(f"expected {len(eta)} expectation values, got {z.size}")
    return float(np.dot(eta.as_array(), z))


def interpolate_at(config: ScaleFactorConfig, z: Sequence[float], lambda_star: Sequence[float]) -> float:
    """Value at `lambda_star` of the unique degree-d interpolant through ``(lambda_i, z_i)``.

    Uses the Lagrange weights ``w`` solving ``A^T w = monomials(lambda_star)``;
    the polynomial coefficients are never formed.
    """
    z = np.asarray(z, dtype=float)
    point = np.asarray(lambda_star, dtype=float)
    if z.shape != (config.size,):
        raise ValueError(f"expected {config.size} expectation values, got {z.size}")
    if point.shape != (config.l,):
        raise ValueError(f"evaluation point must have length {config.l}")
    a = sample_matrix(config)
    weights = a.solve_transposed(config.basis.evaluate(point)[0])
    return float(np.dot(weights, z))
