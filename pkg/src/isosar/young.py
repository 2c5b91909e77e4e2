"""Exact Young-diagram combinatorics.

A diagram is a weakly decreasing integer partition of ``n`` stored padded
with zeros to a fixed number of rows ``d``.  The padding keeps row-index
arithmetic (terms like ``rows[i] - i``) uniform across the package.  All
dimension counts are exact Python integers; a log2 companion is provided
for cost arithmetic on sizes that dwarf 64-bit range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator


@dataclass(frozen=True, order=True)
class YoungDiagram:
    """Partition of ``n`` into at most ``d`` parts, padded to ``d`` rows."""

    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.rows:
            raise ValueError("diagram needs at least one row slot")
        for r in self.rows:
            if not isinstance(r, int) or r < 0:
                raise ValueError(f"row lengths must be non-negative integers, got {self.rows}")
        for a, b in zip(self.rows, self.rows[1:]):
            if a < b:
                raise ValueError(f"rows must be weakly decreasing, got {self.rows}")

    @property
    def d(self) -> int:
        """Row-count bound (length of the padded row vector)."""
        return len(self.rows)

    @property
    def n(self) -> int:
        """Total number of boxes."""
        return sum(self.rows)

    @property
    def nonzero_rows(self) -> int:
        return sum(1 for r in self.rows if r > 0)

    def serialize(self) -> str:
        """Comma-joined row lengths, e.g. ``"6,4"``."""
        return ",".join(str(r) for r in self.rows)

    def __str__(self) -> str:
        return self.serialize()


def diagram(rows: Iterable[int], d: int | None = None) -> YoungDiagram:
    """Build a diagram from row lengths, optionally padding to ``d`` rows."""
    t = tuple(int(r) for r in rows)
    if d is not None:
        if len(t) > d:
            if any(r > 0 for r in t[d:]):
                raise ValueError(f"{t} has more than {d} nonzero rows")
            t = t[:d]
        else:
            t = t + (0,) * (d - len(t))
    return YoungDiagram(t)


@dataclass(frozen=True)
class DiagramSet:
    """Ordered, indexed collection of distinct diagrams with common (d, n).

    The order is descending lexicographic on the padded rows, which makes
    matrix indices and serialized output reproducible byte for byte.
    """

    d: int
    n: int
    diagrams: tuple[YoungDiagram, ...]
    index: dict[YoungDiagram, int] = field(compare=False, repr=False)

    @classmethod
    def from_diagrams(cls, d: int, n: int, diags: Iterable[YoungDiagram]) -> "DiagramSet":
        ordered = tuple(sorted(set(diags), key=lambda a: a.rows, reverse=True))
        for a in ordered:
            if a.d != d or a.n != n:
                raise ValueError(f"diagram {a} does not live in ({d}, {n})")
        return cls(d=d, n=n, diagrams=ordered, index={a: i for i, a in enumerate(ordered)})

    def __len__(self) -> int:
        return len(self.diagrams)

    def __iter__(self) -> Iterator[YoungDiagram]:
        return iter(self.diagrams)

    def __contains__(self, a: YoungDiagram) -> bool:
        return a in self.index

    def serialize(self) -> str:
        """Header line followed by one comma-joined diagram per line."""
        head = f"d={self.d} n={self.n} count={len(self.diagrams)}"
        return "\n".join([head] + [a.serialize() for a in self.diagrams])


def enumerate_diagrams(d: int, n: int) -> DiagramSet:
    """All partitions of ``n`` into at most ``d`` parts, descending lex order."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if n < 0:
        raise ValueError("n must be >= 0")
    out: list[YoungDiagram] = []

    def rec(prefix: list[int], remaining: int, cap: int, slots: int) -> None:
        if slots == 0:
            if remaining == 0:
                out.append(YoungDiagram(tuple(prefix)))
            return
        lo = -(-remaining // slots)  # ceil: rows after this one cannot exceed it
        for r in range(min(cap, remaining), lo - 1, -1):
            prefix.append(r)
            rec(prefix, remaining - r, r, slots - 1)
            prefix.pop()

    rec([], n, n, d)
    return DiagramSet(d=d, n=n, diagrams=tuple(out), index={a: i for i, a in enumerate(out)})


def add_box(alpha: YoungDiagram) -> tuple[YoungDiagram, ...]:
    """Diagrams obtained by adding one box to a row, kept within d rows."""
    res = []
    for i in range(alpha.d):
        if i == 0 or alpha.rows[i] < alpha.rows[i - 1]:
            rows = list(alpha.rows)
            rows[i] += 1
            res.append(YoungDiagram(tuple(rows)))
    return tuple(sorted(res, key=lambda a: a.rows, reverse=True))


def remove_box(alpha: YoungDiagram) -> tuple[YoungDiagram, ...]:
    """Diagrams obtained by removing one box from a row end."""
    res = []
    for i in range(alpha.d):
        nxt = alpha.rows[i + 1] if i + 1 < alpha.d else 0
        if alpha.rows[i] > nxt:
            rows = list(alpha.rows)
            rows[i] -= 1
            res.append(YoungDiagram(tuple(rows)))
    return tuple(sorted(res, key=lambda a: a.rows, reverse=True))


def dim_unitary(alpha: YoungDiagram, m: int) -> int:
    """Dimension of the unitary-group irrep of ``alpha`` for group size ``m``.

    Weyl product formula over row pairs; rows beyond the diagram's length
    are treated as zero.  Exact integer result.

    Raises:
        ValueError: if the diagram has more than ``m`` nonzero rows (the
        representation is absent; its dimension would formally be zero).
    """
    if m < 1:
        raise ValueError("group dimension m must be >= 1")
    if alpha.nonzero_rows > m:
        raise ValueError(f"{alpha} has more than {m} nonzero rows")
    rows = alpha.rows[:m] + (0,) * (m - len(alpha.rows))
    num = 1
    for i in range(m):
        for j in range(i + 1, m):
            num *= rows[i] - rows[j] - i + j
    den = 1
    for k in range(1, m):
        den *= math.factorial(k)
    assert num % den == 0
    return num // den


def log2_dim_unitary(alpha: YoungDiagram, m: int) -> float:
    """log2 of the Weyl dimension, computed from the exact integer."""
    return math.log2(dim_unitary(alpha, m))


@lru_cache(maxsize=None)
def _stab_recursive(rows: tuple[int, ...]) -> int:
    if sum(rows) <= 1:
        return 1
    return sum(_stab_recursive(b.rows) for b in remove_box(YoungDiagram(rows)))


def _stab_hook(rows: tuple[int, ...]) -> int:
    parts = [r for r in rows if r > 0]
    n = sum(parts)
    if n == 0:
        return 1
    hook_prod = 1
    for i, r in enumerate(parts):
        for j in range(r):
            arm = r - j - 1
            leg = sum(1 for p in parts[i + 1:] if p > j)
            hook_prod *= arm + leg + 1
    total = math.factorial(n)
    assert total % hook_prod == 0
    return total // hook_prod


def count_stab(alpha: YoungDiagram) -> int:
    """Number of standard tableaux with frame ``alpha``.

    Computed two independent ways (box-removal recursion and the
    hook-length formula) which must agree exactly.
    """
    rec = _stab_recursive(alpha.rows)
    hook = _stab_hook(alpha.rows)
    if rec != hook:
        raise AssertionError(
            f"tableau counts disagree for {alpha}: recursion {rec}, hook {hook}"
        )
    return rec


@dataclass(frozen=True)
class DimensionRecord:
    """Exact and log-space dimension data for one diagram at group size m."""

    diagram: YoungDiagram
    m: int
    dim_unitary: int
    log2_dim: float
    stab_count: int


def dimension_record(alpha: YoungDiagram, m: int) -> DimensionRecord:
    dim = dim_unitary(alpha, m)
    return DimensionRecord(
        diagram=alpha,
        m=m,
        dim_unitary=dim,
        log2_dim=math.log2(dim),
        stab_count=count_stab(alpha),
    )
