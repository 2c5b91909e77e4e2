"""Symmetric-group machinery on small tensor powers.

Everything here is desk-scale (n at most a handful): permutation operators
on (C^d)^n, exact irreducible characters, the orthogonal (Young-Yamanouchi)
representation built from adjacent transpositions, and the group-algebra
matrix units that carve (C^d)^n into unitary-times-multiplicity blocks with
a consistent basis across multiplicity slices.  The consistency matters:
maximally entangled block states are only well formed when the same
unitary-side labeling is used in every slice.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .young import YoungDiagram, count_stab, dim_unitary, enumerate_diagrams

MAX_TENSOR_N = 3  # default desk-scale cap for full operators on (C^d)^n


def _check_budget(d: int, n: int, max_n: int) -> None:
    if n > max_n:
        raise ValueError(f"n={n} exceeds the configured tensor budget (max_n={max_n})")
    if d**n > 4096:
        raise ValueError(f"operator dimension {d**n} exceeds the desk-scale budget")


def compose(sigma: tuple[int, ...], tau: tuple[int, ...]) -> tuple[int, ...]:
    """(sigma tau)(x) = sigma(tau(x)), permutations as 0-indexed image tuples."""
    return tuple(sigma[t] for t in tau)


def inverse(sigma: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma):
        inv[s] = i
    return tuple(inv)


def cycle_type(sigma: tuple[int, ...]) -> tuple[int, ...]:
    """Cycle lengths in decreasing order (a partition of n)."""
    seen = [False] * len(sigma)
    lengths = []
    for start in range(len(sigma)):
        if seen[start]:
            continue
        length, x = 0, start
        while not seen[x]:
            seen[x] = True
            x = sigma[x]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def permutation_matrix(sigma: tuple[int, ...], d: int) -> np.ndarray:
    """Operator permuting tensor factors on (C^d)^n.

    Site k of the output carries the input digit from site sigma^{-1}(k),
    so the operator represents the group: P(sigma) P(tau) = P(sigma tau).
    """
    n = len(sigma)
    dim = d**n
    inv = inverse(sigma)
    digits = np.array(list(itertools.product(range(d), repeat=n)))  # (dim, n)
    permuted = digits[:, inv]
    weights = d ** np.arange(n - 1, -1, -1)
    rows = permuted @ weights
    mat = np.zeros((dim, dim))
    mat[rows, np.arange(dim)] = 1.0
    return mat


@lru_cache(maxsize=None)
def character(lam: tuple[int, ...], mu: tuple[int, ...]) -> int:
    """Exact symmetric-group character via Murnaghan-Nakayama recursion.

    ``lam`` is the irrep partition, ``mu`` the cycle type.  Border strips
    are removed through first-column hook lengths (beta numbers): strip
    removal of size k maps beta b to b-k when b-k is unoccupied, with sign
    (-1)^(number of betas jumped over).
    """
    lam = tuple(r for r in lam if r > 0)
    mu = tuple(c for c in mu if c > 0)
    if sum(lam) != sum(mu):
        raise ValueError(f"size mismatch: {lam} vs {mu}")
    if not lam:
        return 1
    k = mu[0]
    rest = mu[1:]
    r = len(lam)
    beta = [lam[i] + (r - 1 - i) for i in range(r)]
    occupied = set(beta)
    total = 0
    for idx, b in enumerate(beta):
        nb = b - k
        if nb < 0 or nb in occupied:
            continue
        height = sum(1 for x in beta if nb < x < b)
        new_beta = sorted((x for j, x in enumerate(beta) if j != idx), reverse=True)
        new_beta.append(nb)
        new_beta.sort(reverse=True)
        new_lam = tuple(new_beta[i] - (r - 1 - i) for i in range(r))
        total += (-1) ** height * character(new_lam, rest)
    return total


@dataclass(frozen=True)
class StandardTableau:
    """Filling recorded as the row index (0-based) of each entry 1..n."""

    shape: tuple[int, ...]
    row_of: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.row_of)

    def contents(self) -> tuple[int, ...]:
        """Content (column - row, 0-indexed) of each entry in insertion order."""
        fill = [0] * len(self.shape)
        cs = []
        for r in self.row_of:
            cs.append(fill[r] - r)
            fill[r] += 1
        return tuple(cs)

    def is_standard(self) -> bool:
        fill = [0] * len(self.shape)
        for r in self.row_of:
            if r >= len(self.shape) or fill[r] >= self.shape[r]:
                return False
            if r > 0 and fill[r] >= fill[r - 1]:
                return False
            fill[r] += 1
        return True

    def swap_adjacent(self, k: int) -> "StandardTableau | None":
        """Exchange entries k and k+1 (1-indexed); None unless still standard."""
        if self.row_of[k - 1] == self.row_of[k]:
            return None
        rows = list(self.row_of)
        rows[k - 1], rows[k] = rows[k], rows[k - 1]
        cand = StandardTableau(self.shape, tuple(rows))
        return cand if cand.is_standard() else None


def standard_tableaux(alpha: YoungDiagram) -> tuple[StandardTableau, ...]:
    """All standard fillings of ``alpha`` in a fixed (row-word) order."""
    shape = alpha.rows
    results: list[tuple[int, ...]] = []

    def grow(fill: list[int], rows: list[int], k: int) -> None:
        if k == alpha.n:
            results.append(tuple(rows))
            return
        for r in range(len(shape)):
            if fill[r] < shape[r] and (r == 0 or fill[r] < fill[r - 1]):
                fill[r] += 1
                rows.append(r)
                grow(fill, rows, k + 1)
                rows.pop()
                fill[r] -= 1

    grow([0] * len(shape), [], 0)
    results.sort()
    return tuple(StandardTableau(shape, rw) for rw in results)


def yy_generator(alpha: YoungDiagram, k: int) -> np.ndarray:
    """Orthogonal-representation matrix of the adjacent transposition (k, k+1)."""
    tabs = standard_tableaux(alpha)
    index = {t.row_of: i for i, t in enumerate(tabs)}
    mat = np.zeros((len(tabs), len(tabs)))
    for i, t in enumerate(tabs):
        cs = t.contents()
        r = cs[k] - cs[k - 1]  # axial distance between entries k+1 and k
        mat[i, i] = 1.0 / r
        swapped = t.swap_adjacent(k)
        if swapped is not None:
            mat[index[swapped.row_of], i] = math.sqrt(1.0 - 1.0 / (r * r))
    return mat


def all_permutations(n: int) -> dict[tuple[int, ...], tuple[int, ...]]:
    """BFS words over adjacent transpositions: permutation -> generator word.

    A word (k1, ..., km) means the permutation equals s_{k1} applied after
    the permutation encoded by (k2, ..., km).
    """
    ident = tuple(range(n))
    words: dict[tuple[int, ...], tuple[int, ...]] = {ident: ()}
    frontier = [ident]
    gens = []
    for k in range(1, n):
        g = list(range(n))
        g[k - 1], g[k] = g[k], g[k - 1]
        gens.append((k, tuple(g)))
    while frontier:
        nxt = []
        for sigma in frontier:
            for k, g in gens:
                tau = compose(g, sigma)
                if tau not in words:
                    words[tau] = (k,) + words[sigma]
                    nxt.append(tau)
        frontier = nxt
    return words


def yy_representation(alpha: YoungDiagram) -> dict[tuple[int, ...], np.ndarray]:
    """Orthogonal irrep matrices for every element of S_n."""
    n = alpha.n
    gens = {k: yy_generator(alpha, k) for k in range(1, n)}
    m = count_stab(alpha)
    rep = {}
    for sigma, word in all_permutations(n).items():
        mat = np.eye(m)
        for k in reversed(word):
            mat = gens[k] @ mat
        rep[sigma] = mat
    return rep


def isotypic_projector(alpha: YoungDiagram, d: int, n: int, max_n: int = MAX_TENSOR_N) -> np.ndarray:
    """Orthogonal projector onto the alpha block of (C^d)^n.

    Character projection (m_alpha / n!) sum_sigma chi_alpha(sigma) P_sigma
    with exact integer characters.
    """
    _check_budget(d, n, max_n)
    if alpha.n != n:
        raise ValueError(f"diagram {alpha} does not have {n} boxes")
    m_alpha = count_stab(alpha)
    dim = d**n
    proj = np.zeros((dim, dim))
    for sigma in itertools.permutations(range(n)):
        chi = character(alpha.rows, cycle_type(sigma))
        if chi != 0:
            proj += chi * permutation_matrix(sigma, d)
    return proj * (m_alpha / math.factorial(n))


@dataclass(frozen=True)
class SchurBasis:
    """Orthonormal product bases for the blocks of (C^d)^n.

    ``blocks[alpha]`` has shape (m_alpha, dim_alpha, d^n); axis 0 indexes
    the multiplicity slice, axis 1 the unitary-side label.  The labeling is
    slice-consistent: permutations mix axis 0 only and the diagonal group
    action mixes axis 1 only.  The designated multiplicity vector is
    slice 0.
    """

    d: int
    n: int
    diagrams: tuple[YoungDiagram, ...]
    blocks: dict[YoungDiagram, np.ndarray]

    def dim_block(self, alpha: YoungDiagram) -> tuple[int, int]:
        b = self.blocks[alpha]
        return b.shape[1], b.shape[0]  # (unitary dim, multiplicity)


def schur_block_basis(d: int, n: int, max_n: int = MAX_TENSOR_N) -> SchurBasis:
    """Build slice-consistent block bases via group-algebra matrix units.

    For each diagram the rank-d_alpha unit E_11 is diagonalized to get the
    slice-0 basis; the partial isometries E_m1 transport it to every other
    multiplicity slice, which keeps the unitary-side labels aligned across
    slices (plain per-slice orthonormalization would not).
    """
    _check_budget(d, n, max_n)
    diag_set = enumerate_diagrams(d, n)
    perms = list(itertools.permutations(range(n)))
    pmats = {sigma: permutation_matrix(sigma, d) for sigma in perms}
    blocks: dict[YoungDiagram, np.ndarray] = {}
    for alpha in diag_set:
        m_alpha = count_stab(alpha)
        d_alpha = dim_unitary(alpha, d)
        rep = yy_representation(alpha)
        scale = m_alpha / math.factorial(n)
        units_col0 = []  # E_{m,0} = scale * sum_sigma rep(sigma)[m, 0] P_sigma
        for m in range(m_alpha):
            e = np.zeros((d**n, d**n))
            for sigma in perms:
                e += rep[sigma][m, 0] * pmats[sigma]
            units_col0.append(scale * e)
        evals, evecs = np.linalg.eigh(units_col0[0])
        keep = evals > 0.5
        if int(np.sum(keep)) != d_alpha:
            raise AssertionError(
                f"slice projector for {alpha} has rank {int(np.sum(keep))}, expected {d_alpha}"
            )
        slice0 = evecs[:, keep].T  # (d_alpha, d^n)
        block = np.empty((m_alpha, d_alpha, d**n))
        for m in range(m_alpha):
            block[m] = slice0 @ units_col0[m].T
        blocks[alpha] = block
    return SchurBasis(d=d, n=n, diagrams=diag_set.diagrams, blocks=blocks)
