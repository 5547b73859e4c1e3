"""Highest weights of U(N)/SU(N): exact dimensions and Casimirs, the two
partition parametrizations, weight enumeration by Casimir, and numerical
Schur-function evaluation."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

import numpy as np

from .partitions import Partition, _parts_tuples


@dataclass(frozen=True)
class HighestWeight:
    """Nonincreasing integer N-tuple indexing an irreducible U(N) representation."""

    N: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")
        coeffs = tuple(int(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if len(coeffs) != self.N:
            raise ValueError(f"need {self.N} coefficients, got {len(coeffs)}")
        if any(coeffs[i] < coeffs[i + 1] for i in range(self.N - 1)):
            raise ValueError(f"coefficients must be nonincreasing, got {coeffs}")


def mid_index(N: int) -> int:
    """1-based position of the flat level in the two-sided parametrization."""
    return (N + 1) // 2


def length_cutoffs(N: int) -> tuple[int, int]:
    """(A, B): maximal lengths of the upper and lower perturbing partitions."""
    m = mid_index(N)
    return m - 1, N - m


@lru_cache(maxsize=None)
def _pair_denominator(N: int) -> int:
    den = 1
    for i in range(N):
        for j in range(i + 1, N):
            den *= j - i
    return den


def weyl_dimension(w: HighestWeight) -> int:
    """prod_{i<j} (l_i - l_j + j - i)/(j - i) as an exact integer."""
    lam = w.coeffs
    N = w.N
    num = 1
    for i in range(N):
        li = lam[i]
        for j in range(i + 1, N):
            num *= li - lam[j] + j - i
    q, r = divmod(num, _pair_denominator(N))
    if r != 0:  # the product is provably integral
        raise AssertionError(f"non-integral dimension for {lam}")
    return q


def casimir_u(w: HighestWeight) -> Fraction:
    """Casimir of the U(N) irreducible, for the inner product N*Tr(X*Y)."""
    lam = w.coeffs
    N = w.N
    square = sum(c * c for c in lam)
    # sum_{i<j}(l_i - l_j) = sum_i (N + 1 - 2i) l_i with 1-based i
    linear = sum((N + 1 - 2 * i) * c for i, c in enumerate(lam, start=1))
    return Fraction(square + linear, N)


def casimir_su(w: HighestWeight) -> Fraction:
    """U(N) Casimir minus (sum l_i)^2 / N^2."""
    s = sum(w.coeffs)
    return casimir_u(w) - Fraction(s * s, w.N**2)


def partition_to_weight(alpha: Partition, level: int, N: int) -> HighestWeight:
    """Stack alpha on top of the constant weight (level, ..., level)."""
    if alpha.length() > N - 1:
        raise ValueError(f"partition length {alpha.length()} must be <= N-1 = {N - 1}")
    coeffs = tuple(a + level for a in alpha) + (level,) * (N - alpha.length())
    return HighestWeight(N, coeffs)


def weight_to_partition(w: HighestWeight) -> tuple[Partition, int]:
    """Inverse of partition_to_weight; the level is the last coefficient."""
    level = w.coeffs[-1]
    return Partition([c - level for c in w.coeffs if c > level]), level


@dataclass(frozen=True)
class WeightTriple:
    """Two short partitions and a flat level describing a U(N) weight.

    alpha perturbs the top coefficients upward, beta the bottom ones
    downward; length_cutoffs caps their lengths at A and B with A + B = N - 1
    so the perturbations never overlap and the middle coefficient always
    carries the level.
    """

    alpha: Partition
    beta: Partition
    level: int
    N: int

    def __post_init__(self):
        a_max, b_max = length_cutoffs(self.N)
        if self.alpha.length() > a_max:
            raise ValueError(f"alpha length {self.alpha.length()} exceeds cutoff {a_max}")
        if self.beta.length() > b_max:
            raise ValueError(f"beta length {self.beta.length()} exceeds cutoff {b_max}")


def triple_to_weight(t: WeightTriple) -> HighestWeight:
    la, lb = t.alpha.length(), t.beta.length()
    coeffs = (
        tuple(a + t.level for a in t.alpha)
        + (t.level,) * (t.N - la - lb)
        + tuple(t.level - b for b in reversed(t.beta.parts))
    )
    return HighestWeight(t.N, coeffs)


def weight_to_triple(w: HighestWeight) -> WeightTriple:
    """Split a weight at the flat level read off at the middle coefficient."""
    n = w.coeffs[mid_index(w.N) - 1]
    alpha = Partition([c - n for c in w.coeffs if c > n])
    beta = Partition([n - c for c in reversed(w.coeffs) if c < n])
    return WeightTriple(alpha, beta, n, w.N)


def casimir_from_triple(t: WeightTriple) -> Fraction:
    """|alpha| + |beta| + level^2 + (2/N)(K(alpha) + K(beta) + level(|alpha| - |beta|)).

    Exactly equals casimir_u(triple_to_weight(t)).
    """
    a, b, n = t.alpha.size(), t.beta.size(), t.level
    cross = t.alpha.total_content() + t.beta.total_content() + n * (a - b)
    return a + b + n * n + Fraction(2 * cross, t.N)


# --- Enumeration of weights with bounded Casimir -----------------------------
#
# Iterates the (alpha, beta, level) parametrization.  Pruning uses the exact
# minimum of the total content over partitions of a given size with bounded
# length: the greedy column packing (as many full-height columns as possible)
# minimizes the content sum, by a cell-exchange argument.  All comparisons
# are on the integer N*casimir, so no weight is lost to rounding.


def _min_total_content(m: int, max_len: int) -> int:
    if m == 0:
        return 0
    if max_len == 0:
        raise ValueError("no partition of positive size with zero length bound")
    full, rest = divmod(m, max_len)
    k = max_len * full * (full + 1) // 2 - full * max_len * (max_len + 1) // 2
    k += rest * (full + 1) - rest * (rest + 1) // 2
    return k


@lru_cache(maxsize=None)
def _partition_table(n: int, max_len: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """(parts, total content) for all partitions of n with length <= max_len."""
    out = []
    for parts in _parts_tuples(n, min(max_len, n), n):
        k = sum(p * (p + 1) // 2 - i * p for i, p in enumerate(parts, start=1))
        out.append((parts, k))
    return tuple(out)


def _size_ceiling(N: int, own_len: int, cap_scaled: int) -> int:
    # |alpha| <= N*sqrt(cap) + len*sqrt(N*cap), from sum(l_i^2) <= N*cap
    return int(math.sqrt(N * max(cap_scaled, 0)) + own_len * math.sqrt(max(cap_scaled, 0))) + 2


def _best_level_term(N: int, diff: int) -> int:
    """min over integer n of N*n^2 + 2*n*diff (minimum near -diff/N)."""
    n0 = -diff // N
    return min(N * n * n + 2 * n * diff for n in (n0, n0 + 1))


def iter_weight_groups(
    N: int, cap: float
) -> Iterator[tuple[tuple[int, ...], tuple[int, ...], list[tuple[int, int]]]]:
    """Yield (alpha parts, beta parts, [(level, N*casimir), ...]) covering all
    weights with casimir_u <= cap exactly once, deterministically.

    Grouping by the partition pair lets callers compute level-independent
    quantities (the Weyl dimension depends only on coefficient differences)
    once per pair.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if cap < 0:
        return
    a_len, b_len = length_cutoffs(N)
    cap_s = math.floor(cap * N + 1e-9)
    if cap_s < 0:
        return
    a_hard = 0 if a_len == 0 else _size_ceiling(N, a_len, cap_s)
    b_hard = 0 if b_len == 0 else _size_ceiling(N, b_len, cap_s)
    for a in range(a_hard + 1):
        ka_min = 2 * _min_total_content(a, a_len) if a else 0
        for b in range(b_hard + 1):
            kb_min = 2 * _min_total_content(b, b_len) if b else 0
            diff = a - b
            best_n = _best_level_term(N, diff)
            if N * (a + b) + ka_min + kb_min + best_n > cap_s:
                continue
            for alpha_parts, ka in _partition_table(a, a_len):
                if N * (a + b) + 2 * ka + kb_min + best_n > cap_s:
                    continue
                for beta_parts, kb in _partition_table(b, b_len):
                    c0 = N * (a + b) + 2 * (ka + kb)
                    if c0 + best_n > cap_s:
                        continue
                    # levels n with c0 + N n^2 + 2 n diff <= cap_s
                    disc = diff * diff - N * (c0 - cap_s)
                    if disc < 0:
                        continue
                    root = math.sqrt(disc)
                    n_lo = math.ceil((-diff - root) / N - 1e-12)
                    n_hi = math.floor((-diff + root) / N + 1e-12)
                    levels = []
                    for n in range(n_lo, n_hi + 1):
                        c2_s = c0 + N * n * n + 2 * n * diff
                        if c2_s <= cap_s:
                            levels.append((n, c2_s))
                    if levels:
                        yield alpha_parts, beta_parts, levels


def iter_weight_triples(N: int, cap: float) -> Iterator[tuple[tuple[int, ...], tuple[int, ...], int, int]]:
    """Yield (alpha parts, beta parts, level, N*casimir) for all weights with
    casimir_u <= cap, each exactly once."""
    for alpha_parts, beta_parts, levels in iter_weight_groups(N, cap):
        for n, c2_s in levels:
            yield alpha_parts, beta_parts, n, c2_s


def triple_coeffs(alpha_parts: tuple[int, ...], beta_parts: tuple[int, ...], n: int, N: int) -> tuple[int, ...]:
    return (
        tuple(a + n for a in alpha_parts)
        + (n,) * (N - len(alpha_parts) - len(beta_parts))
        + tuple(n - b for b in reversed(beta_parts))
    )


def _weight_unchecked(N: int, coeffs: tuple[int, ...]) -> HighestWeight:
    """Skip validation for coefficients produced by triple_coeffs (hot loops)."""
    w = object.__new__(HighestWeight)
    object.__setattr__(w, "N", N)
    object.__setattr__(w, "coeffs", coeffs)
    return w


def enumerate_highest_weights(N: int, casimir_cap: float) -> Iterator[HighestWeight]:
    """All weights with casimir_u <= casimir_cap, each once."""
    if casimir_cap < 0:
        raise ValueError("casimir cap must be >= 0")
    for alpha_parts, beta_parts, n, _ in iter_weight_triples(N, casimir_cap):
        yield HighestWeight(N, triple_coeffs(alpha_parts, beta_parts, n, N))


# --- Schur functions ----------------------------------------------------------
#
# The eigenvalue-determinant ratio det[x^{l_j+N-j}]/det[x^{N-j}] is singular
# at coinciding eigenvalues, and in double precision it already loses all
# digits well before collision (both determinants scale like gap^(N(N-1)/2)).
# The same function evaluated through complete homogeneous symmetric
# polynomials (an N x N determinant of h's, Jacobi-Trudi form) is a plain
# polynomial in the x_i and stays stable through collisions, so that is the
# evaluation route; results inside the raw ratio's unstable region carry a
# flag.

_ANGLE_GAP = 1e-2


@dataclass(frozen=True)
class SchurValue:
    value: complex
    stabilized: bool = False


def _circle_gap(angles: np.ndarray) -> float:
    n = len(angles)
    if n < 2:
        return math.inf
    gap = math.inf
    for i in range(n):
        for j in range(i + 1, n):
            d = abs(angles[i] - angles[j]) % (2 * math.pi)
            gap = min(gap, min(d, 2 * math.pi - d))
    return gap


def _homogeneous_sums(x: np.ndarray, k_max: int) -> list[complex]:
    """h_0..h_k_max of the given values, by Newton's identities."""
    N = len(x)
    powers = [complex(np.sum(x**j)) for j in range(k_max + 1)]
    h = [1.0 + 0j] * (k_max + 1)
    for k in range(1, k_max + 1):
        h[k] = sum(powers[j] * h[k - j] for j in range(1, k + 1)) / k
    return h


def schur_eval(w: HighestWeight, angles) -> SchurValue:
    """Character of the weight at a unitary with the given eigenvalue angles:
    the ratio of alternants det[x_i^{l_j+N-j}]/det[x_i^{N-j}], x_i = e^{i a_i}.

    At zero angles the modulus equals the Weyl dimension.  The `stabilized`
    flag marks angle sets where the raw alternant ratio would be
    ill-conditioned (minimal eigenvalue gap below 1e-2)."""
    N = w.N
    ang = np.asarray(angles, dtype=float)
    if ang.shape != (N,):
        raise ValueError(f"need {N} angles, got shape {ang.shape}")
    flagged = _circle_gap(ang) < _ANGLE_GAP
    lam = w.coeffs
    if N == 1:
        return SchurValue(cmath.exp(1j * lam[0] * ang[0]), flagged)
    x = np.exp(1j * ang)
    shift = lam[N - 1]
    nu = [c - shift for c in lam]  # nonnegative partition; s_l = (prod x)^shift s_nu
    h = _homogeneous_sums(x, nu[0] + N - 1)
    mat = np.zeros((N, N), dtype=complex)
    for i in range(N):
        for j in range(N):
            k = nu[i] - (i + 1) + (j + 1)
            if k >= 0:
                mat[i, j] = h[k]
    value = complex(np.linalg.det(mat)) * complex(np.prod(x)) ** shift
    return SchurValue(value, flagged)
