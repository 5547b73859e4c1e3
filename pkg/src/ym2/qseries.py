"""Truncated q-series: Jacobi theta, Euler product, and Witten zeta for SU(N)."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class TruncatedValue:
    """Value of a truncated series plus a tail estimate.

    tail_bound is rigorous when the omitted terms admit a geometric
    comparison (rigorous=True); otherwise it is a last-block heuristic.
    """

    value: float
    tail_bound: float
    terms_used: int
    rigorous: bool = True

    def __float__(self) -> float:
        return self.value


def theta(q: float, tol: float = 1e-12) -> TruncatedValue:
    """sum_{n in Z} q^{n^2}, truncated so the tail is below tol."""
    if q < 0.0 or q >= 1.0:
        raise ValueError(f"theta requires 0 <= q < 1, got {q}")
    if q == 0.0:
        return TruncatedValue(1.0, 0.0, 1)
    total = 1.0
    n = 0
    while True:
        n += 1
        term = 2.0 * q ** (n * n)
        total += term
        # ratio of consecutive terms is q^{2n+1}, decreasing: geometric tail
        ratio = q ** (2 * n + 1)
        tail = 2.0 * q ** ((n + 1) ** 2) / (1.0 - ratio)
        if tail < tol:
            return TruncatedValue(total, tail, 2 * n + 1)


def theta_qdq(q: float, k: int, tol: float = 1e-12) -> TruncatedValue:
    """(q d/dq)^k of theta: sum_{n in Z} n^{2k} q^{n^2}."""
    if q < 0.0 or q >= 1.0:
        raise ValueError(f"theta_qdq requires 0 <= q < 1, got {q}")
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return theta(q, tol)
    if q == 0.0:
        return TruncatedValue(0.0, 0.0, 1)
    total = 0.0
    n = 0
    while True:
        n += 1
        total += 2.0 * float(n) ** (2 * k) * q ** (n * n)
        if n >= 2 * k:
            # for m >= n the term ratio is ((m+1)/m)^{2k} q^{2m+1} <= e q^{2n+1}
            ratio = math.e * q ** (2 * n + 1)
            if ratio < 1.0:
                next_term = 2.0 * float(n + 1) ** (2 * k) * q ** ((n + 1) ** 2)
                tail = next_term / (1.0 - ratio)
                if tail < tol:
                    return TruncatedValue(total, tail, 2 * n + 1)


def euler_phi(q: float, tol: float = 1e-12) -> TruncatedValue:
    """prod_{m>=1} (1 - q^m), truncated with a rigorous log-tail bound."""
    if q < 0.0 or q >= 1.0:
        raise ValueError(f"euler_phi requires 0 <= q < 1, got {q}")
    if q == 0.0:
        return TruncatedValue(1.0, 0.0, 0)
    prod = 1.0
    m = 0
    while True:
        m += 1
        prod *= 1.0 - q**m
        # |log prod_{j>m}(1-q^j)| <= q^{m+1}/((1-q)(1-q^{m+1}))
        log_tail = q ** (m + 1) / ((1.0 - q) * (1.0 - q ** (m + 1)))
        bound = prod * math.expm1(log_tail)
        if bound < tol:
            return TruncatedValue(prod, bound, m)


def witten_zeta_su(N: int, s: float, size_cap: int = 60) -> TruncatedValue:
    """Partial sum of d^{-s} over irreducible representations of SU(N).

    Representations are indexed by partitions of length <= N-1, enumerated by
    increasing size up to size_cap.  The tail estimate is the last size
    block, a heuristic: no quantitative remainder bound is used.
    """
    from .reps import HighestWeight, weyl_dimension
    from .partitions import enumerate_partitions

    if N < 1:
        raise ValueError("N must be >= 1")
    if s <= 1.0:
        raise ValueError(f"witten zeta requires s > 1, got {s}")
    total = 1.0  # empty partition: trivial representation, dimension 1
    terms = 1
    last_block = 0.0
    for n in range(1, size_cap + 1):
        block = 0.0
        for alpha in enumerate_partitions(n, max_length=N - 1):
            coeffs = alpha.parts + (0,) * (N - alpha.length())
            d = weyl_dimension(HighestWeight(N, coeffs))
            block += float(d) ** (-s)
            terms += 1
        total += block
        last_block = block
    return TruncatedValue(total, last_block, terms, rigorous=False)
