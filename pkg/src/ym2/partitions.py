"""Integer partitions, Young-diagram functionals, and q-uniform random sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np


class Partition:
    """A weakly decreasing sequence of positive integers, as an immutable value.

    The empty sequence is the empty partition.  Equality and hashing are
    structural.
    """

    __slots__ = ("_parts",)

    def __init__(self, parts: Sequence[int] = ()):
        parts = tuple(int(p) for p in parts)
        for i, p in enumerate(parts):
            if p < 1:
                raise ValueError(f"partition parts must be >= 1, got {p}")
            if i > 0 and parts[i - 1] < p:
                raise ValueError(f"parts must be nonincreasing, got {parts}")
        self._parts = parts

    @property
    def parts(self) -> tuple[int, ...]:
        return self._parts

    def size(self) -> int:
        return sum(self._parts)

    def length(self) -> int:
        return len(self._parts)

    def total_content(self) -> int:
        """Sum of (column - row) over all cells, exact.

        Row i of length p contributes p*(p+1)/2 - i*p with 1-based indexing.
        """
        return sum(p * (p + 1) // 2 - i * p for i, p in enumerate(self._parts, start=1))

    def conjugate(self) -> "Partition":
        """Transpose of the Young diagram; an involution."""
        if not self._parts:
            return Partition()
        cols = [0] * self._parts[0]
        for p in self._parts:
            for j in range(p):
                cols[j] += 1
        return Partition(cols)

    def cells(self) -> Iterator[tuple[int, int]]:
        """Yield (row, column) pairs, 1-based."""
        for i, p in enumerate(self._parts, start=1):
            for j in range(1, p + 1):
                yield (i, j)

    def __eq__(self, other) -> bool:
        return isinstance(other, Partition) and self._parts == other._parts

    def __hash__(self) -> int:
        return hash(self._parts)

    def __len__(self) -> int:
        return len(self._parts)

    def __getitem__(self, i: int) -> int:
        return self._parts[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self._parts)

    def __repr__(self) -> str:
        return f"Partition({list(self._parts)})"


def size(p: Partition) -> int:
    return p.size()


def total_content(p: Partition) -> int:
    return p.total_content()


def conjugate(p: Partition) -> Partition:
    return p.conjugate()


def _parts_tuples(n: int, max_len: int, max_part: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    if max_len == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _parts_tuples(n - first, max_len - 1, first):
            yield (first,) + rest


def enumerate_partitions(n: int, max_length: int | None = None) -> Iterator[Partition]:
    """All partitions of n (length <= max_length if given), decreasing lex order."""
    if n < 0:
        raise ValueError("n must be >= 0")
    max_len = n if max_length is None else min(max_length, n)
    for t in _parts_tuples(n, max_len, n):
        yield Partition(t)


def count_partitions(n: int, max_length: int | None = None) -> int:
    return sum(1 for _ in enumerate_partitions(n, max_length))


def required_part_cutoff(q: float, tail_tol: float) -> int:
    """Smallest J with sum_{j>J} q^j/(1-q^j) below tail_tol.

    The tail of the expected-multiplicity series bounds the probability that
    any part larger than J appears.
    """
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    j = 1
    # sum_{j>J} q^j/(1-q^j) <= q^(J+1)/((1-q)(1-q^(J+1)))
    while q ** (j + 1) / ((1.0 - q) * (1.0 - q ** (j + 1))) > tail_tol:
        j += 1
        if j > 100_000:
            raise ValueError("part cutoff did not stabilize; q too close to 1")
    return j


@dataclass
class QUniformSampler:
    """Sampler for the measure on partitions proportional to q^{size}.

    Works through the independent-multiplicity factorization: the
    multiplicity of part j is geometric, P(m_j = m) = (1-q^j) q^{j m},
    truncated to parts j <= part_cutoff.  The ignored tail has probability
    below tail_tol.  Single-owner mutable state: use one sampler per worker.
    """

    q: float
    rng_seed: int = 0
    part_cutoff: int | None = None
    tail_tol: float = 1e-12
    _gen: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"q must lie in (0, 1), got {self.q}")
        min_cutoff = required_part_cutoff(self.q, self.tail_tol)
        if self.part_cutoff is None:
            self.part_cutoff = min_cutoff
        elif self.part_cutoff < min_cutoff:
            raise ValueError(
                f"part_cutoff={self.part_cutoff} leaves tail above {self.tail_tol}; "
                f"need at least {min_cutoff}"
            )
        self._gen = np.random.Generator(np.random.Philox(key=self.rng_seed & (2**64 - 1)))

    def sample(self) -> Partition:
        return self.sample_many(1)[0]

    def sample_many(self, count: int) -> list[Partition]:
        """Draw count independent partitions; deterministic given the seed."""
        j_values = np.arange(1, self.part_cutoff + 1)
        log_q_j = j_values * math.log(self.q)
        u = self._gen.random((count, self.part_cutoff))
        # Geometric by inversion: m_j = floor(log u / (j log q)), so that
        # P(m_j >= m) = P(u <= q^{j m}) = q^{j m}.
        mult = np.floor(np.log(u) / log_q_j).astype(np.int64)
        out = []
        for row in mult:
            parts: list[int] = []
            for j in range(self.part_cutoff, 0, -1):
                parts.extend([j] * int(row[j - 1]))
            out.append(Partition(parts))
        return out


def sample_q_uniform(sampler: QUniformSampler) -> Partition:
    return sampler.sample()
