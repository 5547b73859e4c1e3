"""Torus-covering counts with simple branch points, their generating series,
and the exhaustive symmetric-group oracle.

The primary route counts through partition sums (total content raised to a
power), which scales to degree ~40; the group-theoretic enumeration is kept
as an exact oracle for small degrees.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

from .partitions import enumerate_partitions
from .qseries import TruncatedValue

ORACLE_MAX_DEGREE = 5
ORACLE_MAX_BRANCH_PAIRS = 2


@lru_cache(maxsize=None)
def content_distribution(n: int) -> tuple[tuple[int, int], ...]:
    """(total content, multiplicity) over all partitions of n."""
    counter: Counter[int] = Counter()
    for p in enumerate_partitions(n):
        counter[p.total_content()] += 1
    return tuple(sorted(counter.items()))


def hurwitz_count(n: int, k: int) -> int:
    """Number of degree-n torus coverings with 2k simple branch points.

    Equals sum over partitions of n of (total content)^(2k), exactly.  For
    k = 0 this counts all unbranched coverings, which is p(n).
    """
    if n < 1:
        raise ValueError("degree must be >= 1")
    if k < 0:
        raise ValueError("branch-pair count must be >= 0")
    return sum(cnt * kv ** (2 * k) for kv, cnt in content_distribution(n))


def partition_count(n: int) -> int:
    """p(n), from the cached content distribution."""
    if n == 0:
        return 1
    return sum(cnt for _, cnt in content_distribution(n))


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    # (p o q)(i) = p[q[i]]
    return tuple(p[qi] for qi in q)


def _invert(p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, pi in enumerate(p):
        out[pi] = i
    return tuple(out)


def count_by_monodromy(n: int, k: int) -> Fraction:
    """Count (x, y, t_1..t_2k) in S_n with transpositions t_i and
    [x,y] t_1 ... t_2k = id, divided by n!.

    Exhaustive over the commutator pairs; the transposition walk is counted
    by exact dynamic programming over the group, so the total is the full
    homomorphism count.
    """
    if n < 1:
        raise ValueError("degree must be >= 1")
    if n > ORACLE_MAX_DEGREE or k > ORACLE_MAX_BRANCH_PAIRS:
        raise ValueError(
            f"oracle limited to degree <= {ORACLE_MAX_DEGREE} and "
            f"branch pairs <= {ORACLE_MAX_BRANCH_PAIRS}"
        )
    elements = list(permutations(range(n)))
    index = {p: i for i, p in enumerate(elements)}
    transpositions = []
    for i, j in combinations(range(n), 2):
        t = list(range(n))
        t[i], t[j] = j, i
        transpositions.append(tuple(t))

    commutator_count = [0] * len(elements)
    for x in elements:
        xinv = _invert(x)
        for y in elements:
            c = _compose(_compose(x, y), _compose(xinv, _invert(y)))
            commutator_count[index[c]] += 1

    # walk[z] = number of length-2k transposition words with product z
    walk = [0] * len(elements)
    walk[index[tuple(range(n))]] = 1
    for _ in range(2 * k):
        new = [0] * len(elements)
        for zi, cnt in enumerate(walk):
            if cnt == 0:
                continue
            z = elements[zi]
            for t in transpositions:
                new[index[_compose(z, t)]] += cnt
        walk = new

    total = 0
    for zi, ccnt in enumerate(commutator_count):
        if ccnt:
            # need [x,y] * w = id, i.e. w = [x,y]^{-1}
            total += ccnt * walk[index[_invert(elements[zi])]]
    return Fraction(total, math.factorial(n))


def hurwitz_series(k: int, q: float, n_max: int = 30) -> TruncatedValue:
    """Partial sum of q^n * hurwitz_count(n, k) for n = 1..n_max."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    total = 0.0
    last = 0.0
    for n in range(1, n_max + 1):
        last = q**n * hurwitz_count(n, k)
        total += last
    return TruncatedValue(total, last, n_max, rigorous=False)


def hurwitz_series_qdq(k: int, q: float, ell: int, n_max: int = 30) -> TruncatedValue:
    """(q d/dq)^ell of the series: sum q^n n^ell H(n, 2k), termwise, ell <= 2."""
    if ell < 0 or ell > 2:
        raise ValueError("termwise derivatives implemented for ell <= 2")
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    total = 0.0
    last = 0.0
    for n in range(1, n_max + 1):
        last = q**n * n**ell * hurwitz_count(n, k)
        total += last
    return TruncatedValue(total, last, n_max, rigorous=False)


def covering_mass(t: float, n_max: int = 20, k_max: int = 3) -> float:
    """Restricted mass sum_{n<=n_max} e^{-tn/2} sum_{k<=k_max} t^{2k}/(2k)! H(n,2k).

    The unrestricted measure over all coverings has infinite mass and cannot
    be normalized; only restricted masses are reported.  k = 0 is included
    with the unbranched-covering convention H(n, 0) = p(n).
    """
    if t <= 0:
        raise ValueError("t must be positive")
    total = 0.0
    for n in range(1, n_max + 1):
        damp = math.exp(-t * n / 2.0)
        for k in range(0, k_max + 1):
            total += damp * t ** (2 * k) / math.factorial(2 * k) * hurwitz_count(n, k)
    return total


def euler_characteristic_of_covering(n: int, k: int) -> int:
    """2 - 2g with g = k + 1; requires a nonempty covering space."""
    if hurwitz_count(n, k) == 0:
        raise ValueError(f"no degree-{n} coverings with {2 * k} simple branch points")
    return -2 * k
