"""Optimal isometry-estimation fidelity as a Perron eigenvalue problem.

The fidelity of the best covariant parallel protocol with ``n`` queries to
an unknown isometry (input dimension ``d``, output dimension ``D``) is the
largest eigenvalue of a sparse nonnegative symmetric matrix indexed by the
Young diagrams of ``n`` boxes in at most ``d`` rows.  Matrix entries couple
diagrams that share a one-box extension, weighted by a dimension-ratio
factor per move.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .young import DiagramSet, add_box, enumerate_diagrams, remove_box


class PowerIterationError(RuntimeError):
    """Raised when the eigensolver fails to reach the residual tolerance."""

    def __init__(self, iterations: int, residual: float, tol: float):
        self.iterations = iterations
        self.residual = residual
        self.tol = tol
        super().__init__(
            f"power iteration did not converge in {iterations} iterations "
            f"(last residual {residual:.3e}, tolerance {tol:.3e})"
        )


def box_weight(x: float, d: int, D: int) -> float:
    """Weight of a one-box move at content offset ``x``: sqrt((x+d+1)/(x+D+1)).

    The argument is ``rows[i] - i`` (1-indexed row), which never drops below
    ``-d`` for a valid diagram.  Requires ``D >= d`` (an isometry cannot
    shrink the space).
    """
    if D < d:
        raise ValueError(f"output dimension D={D} must be >= input dimension d={d}")
    if x < -d:
        raise ValueError(f"content offset {x} below -d={-d}")
    return math.sqrt((x + d + 1) / (x + D + 1))


@dataclass(frozen=True)
class SparseSymMatrix:
    """Symmetric nonnegative matrix stored as upper-triangle COO arrays."""

    size: int
    rows: np.ndarray  # int indices, rows[k] <= cols[k]
    cols: np.ndarray
    vals: np.ndarray  # all >= 0
    diagram_set: DiagramSet

    def matvec(self, v: np.ndarray) -> np.ndarray:
        upper = self.vals * v[self.cols]
        out = np.bincount(self.rows, weights=upper, minlength=self.size)
        off = self.rows != self.cols
        lower = self.vals[off] * v[self.rows[off]]
        out += np.bincount(self.cols[off], weights=lower, minlength=self.size)
        return out

    def row_sums(self) -> np.ndarray:
        return self.matvec(np.ones(self.size))

    def dense(self) -> np.ndarray:
        m = np.zeros((self.size, self.size))
        m[self.rows, self.cols] = self.vals
        off = self.rows != self.cols
        m[self.cols[off], self.rows[off]] = self.vals[off]
        return m

    def quadratic_form(self, v: np.ndarray) -> float:
        off = self.rows != self.cols
        diag = ~off
        s = float(np.sum(self.vals[diag] * v[self.rows[diag]] * v[self.cols[diag]]))
        s += 2.0 * float(np.sum(self.vals[off] * v[self.rows[off]] * v[self.cols[off]]))
        return s

    def dumps(self, D: int) -> str:
        """Dump format: header ``n d D size`` then row-major ``i j value`` triples."""
        ds = self.diagram_set
        lines = [f"{ds.n} {ds.d} {D} {self.size}"]
        order = np.lexsort((self.cols, self.rows))
        for k in order:
            lines.append(f"{self.rows[k]} {self.cols[k]} {self.vals[k]:.17g}")
        return "\n".join(lines)


@dataclass(frozen=True)
class FidelityReport:
    """Perron eigenpair of the fidelity matrix plus the analytic upper bounds."""

    n: int
    d: int
    D: int
    fidelity: float
    eigvector: np.ndarray
    iterations: int
    residual: float
    rowsum_bound: float
    jensen_bound: float


def fidelity_matrix(n: int, d: int, D: int) -> SparseSymMatrix:
    """Build the estimation-fidelity matrix over the diagrams of (d, n).

    Entry (alpha, beta) sums (1/d^2) * w(add move on alpha) * w(add move on
    beta) over every shared one-box extension mu of alpha and beta.
    """
    if n < 1:
        raise ValueError("n must be >= 1 (at least one query)")
    if D < d:
        raise ValueError(f"output dimension D={D} must be >= input dimension d={d}")
    ds = enumerate_diagrams(d, n)
    entries: dict[tuple[int, int], float] = {}
    inv_d2 = 1.0 / (d * d)
    for a in ds:
        ia = ds.index[a]
        for mu in add_box(a):
            i = next(k for k in range(d) if mu.rows[k] != a.rows[k])
            wa = box_weight(a.rows[i] - (i + 1), d, D)
            for b in remove_box(mu):
                ib = ds.index[b]
                if ia > ib:
                    continue  # symmetric partner handled from the other side
                j = next(k for k in range(d) if mu.rows[k] != b.rows[k])
                wb = box_weight(b.rows[j] - (j + 1), d, D)
                key = (ia, ib)
                entries[key] = entries.get(key, 0.0) + inv_d2 * wa * wb
    keys = sorted(entries)
    rows = np.array([k[0] for k in keys], dtype=np.int64)
    cols = np.array([k[1] for k in keys], dtype=np.int64)
    vals = np.array([entries[k] for k in keys])
    return SparseSymMatrix(size=len(ds), rows=rows, cols=cols, vals=vals, diagram_set=ds)


def _components(size: int, rows: np.ndarray, cols: np.ndarray) -> list[np.ndarray]:
    """Connected components of the sparsity graph (union-find)."""
    parent = list(range(size))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for r, c in zip(rows.tolist(), cols.tolist()):
        rr, rc = find(r), find(c)
        if rr != rc:
            parent[rr] = rc
    groups: dict[int, list[int]] = {}
    for i in range(size):
        groups.setdefault(find(i), []).append(i)
    return [np.array(g, dtype=np.int64) for g in groups.values()]


def dominant_eigenpair(
    M: SparseSymMatrix, tol: float = 1e-12, max_iter: int = 10**6
) -> tuple[float, np.ndarray, int, float]:
    """Perron eigenpair of a nonnegative symmetric sparse matrix.

    Power iteration from the all-positive uniform vector, run per connected
    component of the sparsity graph; the component with the largest
    eigenvalue wins.  A diagonal shift by the max row sum makes the
    iteration monotone (kills sign oscillation from negative eigenvalues)
    without changing the eigenvector; the reported eigenvalue and residual
    refer to the unshifted matrix.

    Returns:
        (eigenvalue, unit nonnegative eigenvector, iterations, residual)
        with residual = max-norm of (M v - lam v) / lam.
    """
    if M.size == 0:
        raise ValueError("empty matrix")
    shift = float(np.max(M.row_sums()))
    best: tuple[float, np.ndarray, int, float] | None = None
    for comp in _components(M.size, M.rows, M.cols):
        v = np.zeros(M.size)
        v[comp] = 1.0 / math.sqrt(len(comp))
        lam = 0.0
        res = math.inf
        iterations = 0
        for iterations in range(1, max_iter + 1):
            w = M.matvec(v) + shift * v
            nw = float(np.linalg.norm(w))
            if nw == 0.0:  # component with zero matrix block
                lam, res = 0.0, 0.0
                break
            v = w / nw
            mv = M.matvec(v)
            lam = float(v @ mv)
            res = float(np.max(np.abs(mv - lam * v))) / max(abs(lam), 1e-300)
            if res <= tol:
                break
        else:
            raise PowerIterationError(max_iter, res, tol)
        if best is None or lam > best[0]:
            best = (lam, v, iterations, res)
    assert best is not None
    lam, v, iterations, res = best
    if res > tol:
        raise PowerIterationError(iterations, res, tol)
    v = np.abs(v)  # clip away -0.0 artifacts; Perron vector is nonnegative
    v /= np.linalg.norm(v)
    return lam, v, iterations, res


def jensen_upper_bound(n: int, d: int, D: int) -> float:
    """Closed-form fidelity bound from the row-sum/concavity argument.

    Equals ``w(n/d - (d+1)/2)^2`` where ``w`` is the move weight; reduces to
    1 when D = d.
    """
    if D < d:
        raise ValueError(f"output dimension D={D} must be >= input dimension d={d}")
    x = n / d - (d + 1) / 2
    return (x + d + 1) / (x + D + 1)


def fidelity_of_vector(M: SparseSymMatrix, v: np.ndarray) -> float:
    """Quadratic form v^T M v for a normalized nonnegative weight vector."""
    v = np.asarray(v, dtype=float)
    if v.shape != (M.size,):
        raise ValueError(f"vector length {v.shape} does not match matrix size {M.size}")
    if np.any(v < -1e-12):
        raise ValueError("weight vector must be nonnegative")
    nrm = float(np.linalg.norm(v))
    if abs(nrm - 1.0) > 1e-9:
        raise ValueError(f"weight vector must be normalized, got norm {nrm}")
    return M.quadratic_form(v)


def optimal_fidelity(
    n: int, d: int, D: int, tol: float = 1e-12, max_iter: int = 10**6
) -> FidelityReport:
    """Optimal estimation fidelity with diagnostics and analytic bounds."""
    M = fidelity_matrix(n, d, D)
    lam, v, iterations, res = dominant_eigenpair(M, tol=tol, max_iter=max_iter)
    return FidelityReport(
        n=n,
        d=d,
        D=D,
        fidelity=lam,
        eigvector=v,
        iterations=iterations,
        residual=res,
        rowsum_bound=float(np.max(M.row_sums())),
        jensen_bound=jensen_upper_bound(n, d, D),
    )
