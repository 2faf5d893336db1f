"""Certified Perron roots of nonnegative integer matrices.

Bounds come from the Collatz-Wielandt inequalities
    min_i (A v)_i / v_i  <=  rho(A)  <=  max_i (A v)_i / v_i
for any positive vector v of an irreducible block; a floating Perron
vector is only used as a starting guess, every bound is exact rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from sympy import Matrix

from . import polynomials as P
from .algebraic import AlgebraicReal, Enclosure, compare, isolate_roots
from .words import Ordering


@dataclass(frozen=True)
class IntegerMatrix:
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        n = len(rows)
        for r in rows:
            if len(r) != n:
                raise ValueError("matrix must be square")
            if any(x < 0 for x in r):
                raise ValueError("matrix entries must be nonnegative")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    def to_numpy(self) -> np.ndarray:
        return np.array(self.rows, dtype=float).reshape(self.n, self.n)

    def submatrix(self, idx: Sequence[int]) -> "IntegerMatrix":
        return IntegerMatrix(tuple(tuple(self.rows[i][j] for j in idx) for i in idx))


def _as_matrix(A) -> IntegerMatrix:
    return A if isinstance(A, IntegerMatrix) else IntegerMatrix(tuple(map(tuple, A)))


def strong_components(A: IntegerMatrix) -> list[list[int]]:
    if A.n == 0:
        return []
    _, labels = connected_components(csr_matrix(A.to_numpy()), directed=True, connection="strong")
    comps: dict[int, list[int]] = {}
    for i, c in enumerate(labels):
        comps.setdefault(int(c), []).append(i)
    return list(comps.values())


def _is_trivial(B: IntegerMatrix) -> bool:
    return B.n == 1 and B.rows[0][0] == 0


def _cw_bounds(B: IntegerMatrix, v: Sequence[int]) -> tuple[Fraction, Fraction]:
    w = [sum(a * x for a, x in zip(row, v)) for row in B.rows]
    ratios = [Fraction(wi, vi) for wi, vi in zip(w, v)]
    return min(ratios), max(ratios)


def _irreducible_radius(B: IntegerMatrix, eps: Fraction, max_iter: int = 5000) -> Enclosure:
    n = B.n
    ones = [1] * n
    lo, hi = _cw_bounds(B, ones)
    if hi - lo <= eps:
        return Enclosure(lo, hi)
    vals, vecs = np.linalg.eig(B.to_numpy())
    k = int(np.argmax(vals.real))
    guess = np.abs(vecs[:, k].real)
    scale = 2**52 / max(guess.max(), 1e-300)
    v = [max(1, int(round(x * scale))) for x in guess]
    lo, hi = _cw_bounds(B, v)
    it = 0
    # (B + I) is primitive for irreducible B, so the iteration converges
    while hi - lo > eps and it < max_iter:
        v = [vi + sum(a * x for a, x in zip(row, v)) for vi, row in zip(v, B.rows)]
        g = max(v).bit_length() - 200
        if g > 0:
            v = [max(1, x >> g) for x in v]
        nlo, nhi = _cw_bounds(B, v)
        lo, hi = max(lo, nlo), min(hi, nhi)
        it += 1
    return Enclosure(lo, hi)


def spectral_radius(A, eps=Fraction(1, 10**12)) -> Enclosure:
    """Certified enclosure of the spectral radius of a nonnegative matrix."""
    A = _as_matrix(A)
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    best: Enclosure | None = None
    for comp in strong_components(A):
        B = A.submatrix(comp)
        if _is_trivial(B):
            continue
        e = _irreducible_radius(B, eps)
        if best is None or e.lo > best.hi:
            best = e
        elif not (e.hi < best.lo):
            best = Enclosure(max(best.lo, e.lo), max(best.hi, e.hi))
    return best if best is not None else Enclosure(0, 0)


def _charpoly(B: IntegerMatrix) -> tuple:
    coeffs = Matrix(B.rows).charpoly().all_coeffs()
    return P.trim(int(c) for c in reversed(coeffs))


def perron_root(A) -> AlgebraicReal:
    """The spectral radius as an exact algebraic number."""
    A = _as_matrix(A)
    best: AlgebraicReal | None = None
    for comp in strong_components(A):
        B = A.submatrix(comp)
        if _is_trivial(B):
            continue
        bound = max(sum(r) for r in B.rows)
        roots = isolate_roots(_charpoly(B), (Fraction(0), Fraction(bound)))
        r = roots[-1]
        if best is None or compare(r, best) is Ordering.GT:
            best = r
    return best if best is not None else AlgebraicReal.from_rational(0)
