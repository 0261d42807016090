"""Skew-symmetric matrices over real, complex or multicomplex scalars.

Pfaffian evaluation uses Parlett-Reid style skew elimination with partial
pivoting for the field cases.  Multicomplex matrices are handled through the
2**n characters of C_n: each character is a ring homomorphism, the Pfaffian
is a polynomial in the entries, so the Pfaffian of the image is the image of
the Pfaffian and the coefficients are recovered by the inverse transform.
(Direct elimination inside C_n would be unsafe: the algebra has zero
divisors.)
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .multicomplex import (
    MulticomplexValue,
    all_characters,
    value_from_character_images,
)

REAL = "real"
COMPLEX = "complex"
MULTICOMPLEX = "multicomplex"

BRUTEFORCE_MAX_ORDER = 16
PIVOT_RTOL = 1e-12


@dataclass(frozen=True)
class SkewMatrix:
    """Skew-symmetric matrix with a declared scalar ring.

    data layout: (order, order) for real/complex rings, and
    (order, order, 2**n_generators) real coefficients for the multicomplex
    ring (last axis indexed by generator-subset bitmask).
    """

    ring: str
    data: np.ndarray
    n_generators: int = 0
    labels: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.ring not in (REAL, COMPLEX, MULTICOMPLEX):
            raise ValueError(f"unknown ring {self.ring!r}")
        d = np.asarray(self.data)
        if self.ring == REAL:
            d = d.astype(np.float64)
            expected_ndim = 2
        elif self.ring == COMPLEX:
            d = d.astype(np.complex128)
            expected_ndim = 2
        else:
            d = d.astype(np.float64)
            expected_ndim = 3
        if d.ndim != expected_ndim or d.shape[0] != d.shape[1]:
            raise ValueError("bad matrix shape")
        if self.ring == MULTICOMPLEX and d.shape[2] != (1 << self.n_generators):
            raise ValueError("coefficient axis does not match generator count")
        if not np.allclose(d, -np.swapaxes(d, 0, 1), atol=1e-12):
            raise ValueError("matrix is not skew-symmetric")
        object.__setattr__(self, "data", d)

    @property
    def order(self) -> int:
        return self.data.shape[0]

    def entry(self, i: int, j: int):
        if self.ring == MULTICOMPLEX:
            return MulticomplexValue(self.n_generators, self.data[i, j].copy())
        return self.data[i, j]

    def scale_abs(self) -> float:
        return float(np.max(np.abs(self.data))) if self.data.size else 0.0

    def character_image(self, char) -> "SkewMatrix":
        """Complex matrix obtained by applying one character entrywise."""
        if self.ring != MULTICOMPLEX:
            raise ValueError("character images only apply to multicomplex matrices")
        vec = char.vector()
        return SkewMatrix(COMPLEX, self.data @ vec)


def skew_from_upper(order: int, entries: dict, ring: str = REAL, n_generators: int = 0) -> SkewMatrix:
    """Build a SkewMatrix from upper-triangular entries {(i, j): value}, i < j."""
    if ring == MULTICOMPLEX:
        data = np.zeros((order, order, 1 << n_generators))
    elif ring == COMPLEX:
        data = np.zeros((order, order), dtype=np.complex128)
    else:
        data = np.zeros((order, order))
    for (i, j), value in entries.items():
        if not i < j:
            raise ValueError("upper-triangular entries require i < j")
        if ring == MULTICOMPLEX:
            v = value.coeffs if isinstance(value, MulticomplexValue) else value
            data[i, j] = v
            data[j, i] = -np.asarray(v)
        else:
            data[i, j] = value
            data[j, i] = -value
    return SkewMatrix(ring, data, n_generators)


def _pfaffian_field(mat: np.ndarray) -> complex:
    """Parlett-Reid skew tridiagonalization with partial pivoting, O(n^3).

    Repeatedly pivots the largest entry of the working column into position
    (k, k+1), multiplies it into the result and applies the rank-2 Schur
    update  A <- A - (u v^T - v u^T)/a  on the trailing block.
    """
    a = np.array(mat, copy=True)
    n = a.shape[0]
    if n % 2:
        raise ValueError("Pfaffian needs even order")
    if n == 0:
        return 1.0
    scale = max(1.0, float(np.max(np.abs(a))))
    pf = 1.0 + 0.0j if np.iscomplexobj(a) else 1.0
    sign = 1.0
    for k in range(0, n - 2, 2):
        col = np.abs(a[k + 1:, k])
        p = k + 1 + int(np.argmax(col))
        if abs(a[p, k]) <= PIVOT_RTOL * scale:
            return 0.0 * pf
        if p != k + 1:
            a[[k + 1, p], :] = a[[p, k + 1], :]
            a[:, [k + 1, p]] = a[:, [p, k + 1]]
            sign = -sign
        piv = a[k, k + 1]
        pf = pf * piv
        u = a[k, k + 2:]
        v = a[k + 1, k + 2:]
        a[k + 2:, k + 2:] -= (np.outer(u, v) - np.outer(v, u)) / piv
    pf = pf * a[n - 2, n - 1]
    return sign * pf


def pfaffian(a: SkewMatrix):
    """Pfaffian of ``a`` in its scalar ring."""
    if a.order % 2:
        raise ValueError("Pfaffian needs even order")
    if a.ring == REAL:
        return float(np.real(_pfaffian_field(a.data)))
    if a.ring == COMPLEX:
        return complex(_pfaffian_field(a.data))
    images = [_pfaffian_field(a.character_image(h).data) for h in all_characters(a.n_generators)]
    return value_from_character_images(images, a.n_generators)


def matching_sign(pairs, indices) -> int:
    """Sign of a perfect matching of ``indices`` written canonically.

    The canonical representative sorts pairs by their lower element, writes
    each pair (lower, higher) and takes the parity of the permutation sending
    the sorted index sequence to the flattened pair sequence.
    """
    order = {idx: pos for pos, idx in enumerate(sorted(indices))}
    seq = []
    for lo, hi in sorted((min(p), max(p)) for p in pairs):
        seq.append(order[lo])
        seq.append(order[hi])
    inversions = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inversions += 1
    return -1 if inversions % 2 else 1


def _pfaffian_masked(mat: np.ndarray, mask: int, memo: dict):
    if mask == 0:
        return 1.0
    if mask in memo:
        return memo[mask]
    i = (mask & -mask).bit_length() - 1
    rest = mask ^ (1 << i)
    total = 0.0
    sign = 1.0
    r = rest
    while r:
        j = (r & -r).bit_length() - 1
        r ^= 1 << j
        aij = mat[i, j]
        if aij != 0.0:
            total += sign * aij * _pfaffian_masked(mat, rest ^ (1 << j), memo)
        sign = -sign
    memo[mask] = total
    return total


def pfaffian_bruteforce(a: SkewMatrix):
    """Pfaffian as the signed sum over perfect matchings of the index set.

    Independent oracle for :func:`pfaffian`; guarded to order <= 16.
    """
    n = a.order
    if n % 2:
        raise ValueError("Pfaffian needs even order")
    if n > BRUTEFORCE_MAX_ORDER:
        raise ValueError(f"brute-force Pfaffian limited to order {BRUTEFORCE_MAX_ORDER}")
    if a.ring == REAL:
        return float(_pfaffian_masked(a.data, (1 << n) - 1, {}))
    if a.ring == COMPLEX:
        return complex(_pfaffian_masked(a.data, (1 << n) - 1, {}))
    images = []
    for h in all_characters(a.n_generators):
        img = a.character_image(h)
        images.append(_pfaffian_masked(img.data, (1 << n) - 1, {}))
    return value_from_character_images(images, a.n_generators)


def submatrix(a: SkewMatrix, indices) -> SkewMatrix:
    """A_K: keep rows and columns in ``indices``, induced order."""
    idx = sorted(indices)
    if any(not 0 <= i < a.order for i in idx):
        raise ValueError("index out of bounds")
    data = a.data[np.ix_(idx, idx)]
    labels = tuple(a.labels[i] for i in idx) if a.labels is not None else None
    return SkewMatrix(a.ring, data, a.n_generators, labels)


def derived_matrix(a: SkewMatrix, indices) -> SkewMatrix:
    """Matrix on the complementary index set with entries Pf(A_{K + {i, j}}).

    Skew-extended from the upper triangle in the induced order of the
    complement.
    """
    k = sorted(set(indices))
    if len(k) % 2:
        raise ValueError("index block must have even size")
    comp = [i for i in range(a.order) if i not in set(k)]
    m = len(comp)
    if a.ring == MULTICOMPLEX:
        data = np.zeros((m, m, 1 << a.n_generators))
    else:
        data = np.zeros((m, m), dtype=a.data.dtype)
    for p in range(m):
        for q in range(p + 1, m):
            block = sorted(k + [comp[p], comp[q]])
            val = pfaffian(submatrix(a, block))
            if a.ring == MULTICOMPLEX:
                data[p, q] = val.coeffs
                data[q, p] = -val.coeffs
            else:
                data[p, q] = val
                data[q, p] = -val
    labels = tuple(a.labels[i] for i in comp) if a.labels is not None else None
    return SkewMatrix(a.ring, data, a.n_generators, labels)


def reduce(a: SkewMatrix, indices) -> tuple:
    """Pfaffian reduction step: returns (Pf(A_K), A on the complement).

    Guarantees Pf(A) = Pf(A_K)**-(n-p-1) * Pf(A_complement) whenever the pivot
    block is nonsingular (|K| = 2p, order = 2n, 0 < p < n).
    """
    k = sorted(set(indices))
    if len(k) % 2 or not 0 < len(k) < a.order:
        raise ValueError("need an even index block strictly inside the matrix")
    pf_k = pfaffian(submatrix(a, k))
    magnitude = pf_k.max_abs() if a.ring == MULTICOMPLEX else abs(pf_k)
    if magnitude < PIVOT_RTOL * max(1.0, a.scale_abs()):
        raise ValueError("singular pivot block")
    return pf_k, derived_matrix(a, k)
