"""Gaussian binomials, subspace Moebius values, Cauchy products, partitions.

Everything returns exact integers; the iterative Gaussian-binomial product
uses stepwise exact division (each prefix is itself a Gaussian binomial).
"""

from __future__ import annotations

from functools import lru_cache

from .errors import SchemaError


def gaussian_binomial(m: int, d: int, q: int) -> int:
    """Number of d-dimensional subspaces of F_q^m."""
    if q < 2:
        raise SchemaError(f"q must be >= 2, got {q}")
    if m < 0:
        raise SchemaError(f"ambient dimension must be >= 0, got {m}")
    if d < 0 or d > m:
        return 0
    d = min(d, m - d)
    out = 1
    for i in range(d):
        out = out * (q ** (m - i) - 1) // (q ** (i + 1) - 1)
    return out


def subspace_moebius(d: int, q: int) -> int:
    """Moebius value of a d-step interval in the subspace lattice: (-1)^d q^C(d,2)."""
    if d < 0:
        raise SchemaError(f"dimension must be >= 0, got {d}")
    return (-1) ** d * q ** (d * (d - 1) // 2)


def cauchy_poly(m: int, q: int) -> list[int]:
    """Coefficients (low to high) of prod_{j=0}^{m-1} (1 - q^j z).

    By the Cauchy binomial theorem the degree-d coefficient equals
    gaussian_binomial(m, d, q) * subspace_moebius(d, q).
    """
    if m < 0:
        raise SchemaError(f"m must be >= 0, got {m}")
    coeffs = [1]
    for j in range(m):
        scale = q**j
        nxt = [0] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            nxt[k] += c
            nxt[k + 1] -= scale * c
        coeffs = nxt
    return coeffs


@lru_cache(maxsize=None)
def _partitions_max_at_most(n: int, cap: int) -> int:
    """Partitions of n into parts of size <= cap."""
    if n == 0:
        return 1
    if n < 0 or cap == 0:
        return 0
    return _partitions_max_at_most(n - cap, cap) + _partitions_max_at_most(n, cap - 1)


def partition_count(i: int, j: int) -> int:
    """Partitions of i whose greatest part is exactly j."""
    if i < 0 or j < 0:
        raise SchemaError(f"partition arguments must be >= 0, got ({i}, {j})")
    if i == 0 and j == 0:
        return 1
    if j < 1 or j > i:
        return 0
    return _partitions_max_at_most(i - j, j)


def euler_coeffs(max_i: int) -> dict[tuple[int, int], int]:
    """Coefficients of prod_{n>=1} (1 - w z^n)^-1 through z-degree max_i.

    The (i, j) entry counts partitions of i into exactly j parts, i.e. the
    partitions of i with greatest part j after conjugation, so the table
    matches :func:`partition_count` away from (0, 0).
    """
    if max_i < 0:
        raise SchemaError(f"max_i must be >= 0, got {max_i}")
    # table[i][j]; j <= i always since every part is >= 1
    table = [[0] * (max_i + 1) for _ in range(max_i + 1)]
    table[0][0] = 1
    for n in range(1, max_i + 1):
        # multiply by (1 - w z^n)^-1: complete-knapsack update in place
        for i in range(n, max_i + 1):
            for j in range(1, max_i + 1):
                table[i][j] += table[i - n][j - 1]
    return {(i, j): table[i][j] for i in range(max_i + 1) for j in range(max_i + 1) if table[i][j]}
