"""Brute-force verification oracles in the full tensor space.

These routines recompute the estimation fidelity with no reference to the
diagram-indexed matrix: the covariant resource state and optimized
measurement are materialized over the block bases of (C^d)^n and the
fidelity is Monte-Carlo integrated over independent Haar pairs.  Sampling
uses counter-based (Philox) substreams in fixed chunk order so a seed
pins the result bit for bit regardless of how the work would be split.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import protocol
from .schur import MAX_TENSOR_N, SchurBasis, isotypic_projector, schur_block_basis
from .young import YoungDiagram, dim_unitary, enumerate_diagrams

MC_CHUNK = 4096  # fixed substream granularity; part of the reproducibility contract
MC_MAX_DIM = 10**4  # full-space budget (d*D)^n for the Monte-Carlo oracle


@dataclass(frozen=True)
class DenseState:
    """Normalized vector on a product of factor spaces."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class DenseOperator:
    """Matrix with factor-dimension metadata on both legs."""

    in_dims: tuple[int, ...]
    out_dims: tuple[int, ...]
    matrix: np.ndarray

    def isometry_defect(self) -> float:
        m = self.matrix
        gram = m.conj().T @ m
        return float(np.max(np.abs(gram - np.eye(gram.shape[0]))))


@dataclass(frozen=True)
class OracleEstimate:
    """Monte-Carlo mean with its standard error and replay seed."""

    mean: float
    std_error: float
    samples: int
    seed: int

    def as_dict(self) -> dict:
        return {
            "mean": self.mean,
            "std_error": self.std_error,
            "samples": self.samples,
            "seed": self.seed,
        }


def _substream(seed: int, chunk: int) -> np.random.Generator:
    """Counter-based substream: worker `chunk` of master `seed`."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=(chunk,))))


def _haar_batch(d: int, D: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Stack of Haar isometries (count, D, d): Ginibre, QR, phase-fixed R."""
    z = rng.standard_normal((count, D, d)) + 1j * rng.standard_normal((count, D, d))
    q, r = np.linalg.qr(z)
    diag = np.einsum("bii->bi", r)
    phases = diag / np.abs(diag)
    return q * phases[:, None, :]


def haar_isometry(d: int, D: int, rng: np.random.Generator) -> DenseOperator:
    """One Haar-random isometry from C^d into C^D (unitary when D = d)."""
    if not 1 <= d <= D:
        raise ValueError(f"need 1 <= d <= D, got d={d}, D={D}")
    v = _haar_batch(d, D, 1, rng)[0]
    return DenseOperator(in_dims=(d,), out_dims=(D,), matrix=v)


def channel_fidelity(V: DenseOperator, W: DenseOperator) -> float:
    """Channel fidelity |tr(V^dagger W)|^2 / d^2 between isometry channels."""
    if V.matrix.shape != W.matrix.shape:
        raise ValueError(f"shape mismatch: {V.matrix.shape} vs {W.matrix.shape}")
    d = V.matrix.shape[1]
    return float(abs(np.trace(V.matrix.conj().T @ W.matrix)) ** 2) / d**2


def _weight_vector(v, d: int, n: int) -> np.ndarray:
    """Accept a ProtocolWeights or a raw vector over the (d, n) diagrams."""
    full = enumerate_diagrams(d, n)
    if isinstance(v, protocol.ProtocolWeights):
        return protocol.embed_weights(v, full)
    arr = np.asarray(v, dtype=float)
    if arr.shape != (len(full),):
        raise ValueError(f"weight vector has length {arr.shape}, expected {len(full)}")
    if np.any(arr < -1e-12):
        raise ValueError("weights must be nonnegative")
    if abs(np.linalg.norm(arr) - 1.0) > 1e-9:
        raise ValueError("weights must be normalized")
    return arr


def _arb_matrices(basis: SchurBasis, arb: dict | None) -> dict:
    """Multiplicity-pair coefficient matrix per diagram (default slice 0 x 0)."""
    out = {}
    for alpha in basis.diagrams:
        m = basis.blocks[alpha].shape[0]
        if arb is not None and alpha in arb:
            c = np.asarray(arb[alpha], dtype=complex)
            if c.shape != (m, m):
                raise ValueError(f"arb coefficients for {alpha} must have shape {(m, m)}")
            nrm = np.linalg.norm(c)
            if abs(nrm - 1.0) > 1e-9:
                raise ValueError(f"arb coefficients for {alpha} must be normalized")
        else:
            c = np.zeros((m, m), dtype=complex)
            c[0, 0] = 1.0
        out[alpha] = c
    return out


def resource_state(v, basis: SchurBasis, arb: dict | None = None) -> DenseState:
    """Covariant resource state on (C^d)^n x (C^d)^n.

    Block alpha carries weight v_alpha / sqrt(dim_alpha) on the maximally
    entangled unitary-side pair, tensored with the multiplicity-pair vector
    given by ``arb`` (defaults to the designated slice-0 pair).  The
    fidelity is provably independent of the ``arb`` choice.
    """
    d, n = basis.d, basis.n
    w = _weight_vector(v, d, n)
    full = enumerate_diagrams(d, n)
    dim = d**n
    amps = np.zeros(dim * dim, dtype=complex)
    arbs = _arb_matrices(basis, arb)
    for alpha in basis.diagrams:
        coeff = w[full.index[alpha]]
        if coeff == 0.0:
            continue
        block = basis.blocks[alpha]  # (m, d_alpha, dim)
        d_alpha = block.shape[1]
        c = arbs[alpha]
        pair = np.einsum("mui,luj,ml->ij", block, block, c, optimize=True)
        amps += coeff / math.sqrt(d_alpha) * pair.reshape(-1)
    return DenseState(dims=(dim, dim), amplitudes=amps)


def mc_fidelity(
    v,
    n: int,
    d: int,
    D: int,
    samples: int,
    seed: int,
    fixed_isometry: "DenseOperator | np.ndarray | None" = None,
    arb: dict | None = None,
    max_dim: int = MC_MAX_DIM,
) -> OracleEstimate:
    """Monte-Carlo estimation fidelity over independent Haar pairs.

    Integrand per sample (target V, candidate W): measurement probability
    density of W given the resource state carried through V, times the
    channel fidelity of (V, W).  Everything reduces to the d^n-space
    through the single small matrix K = W^dagger V, so the cost per sample
    is tiny even though the construction lives on (d D)^n.

    ``fixed_isometry`` freezes the target V (covariance checks); the
    default draws V fresh each sample.
    """
    if (d * D) ** n > max_dim:
        raise ValueError(f"full space dimension {(d * D) ** n} exceeds the oracle budget {max_dim}")
    if samples < 100:
        raise ValueError("need at least 100 samples for a meaningful standard error")
    if isinstance(fixed_isometry, DenseOperator):
        fixed_isometry = fixed_isometry.matrix
    basis = schur_block_basis(d, n, max_n=max(n, MAX_TENSOR_N))
    full = enumerate_diagrams(d, n)
    w = _weight_vector(v, d, n)
    arbs = _arb_matrices(basis, arb)
    active = [a for a in basis.diagrams if w[full.index[a]] != 0.0]
    prefactors = {a: w[full.index[a]] / math.sqrt(dim_unitary(a, d)) for a in active}
    dims_D = {a: dim_unitary(a, D) for a in active}

    values = np.empty(samples)
    done = 0
    chunk_idx = 0
    while done < samples:
        count = min(MC_CHUNK, samples - done)
        rng = _substream(seed, chunk_idx)
        targets = (
            np.broadcast_to(fixed_isometry, (count,) + fixed_isometry.shape)
            if fixed_isometry is not None
            else _haar_batch(d, D, count, rng)
        )
        candidates = _haar_batch(d, D, count, rng)
        K = np.einsum("bji,bjk->bik", candidates.conj(), targets)  # W^dagger V
        Kn = K
        for _ in range(n - 1):
            m_old = Kn.shape[1]
            Kn = np.einsum("bij,bkl->bikjl", Kn, K).reshape(count, m_old * d, m_old * d)
        # rank-one measurement element: coherent sum over diagram blocks
        amp = np.zeros(count, dtype=complex)
        for a in active:
            block = basis.blocks[a]
            c = arbs[a]
            G = np.einsum("lui,bij,muj->blm", block, Kn, block, optimize=True)
            overlap = np.einsum("lp,bpq,lq->b", c.conj(), G, c, optimize=True)
            amp += math.sqrt(dims_D[a]) * prefactors[a] * overlap
        fch = np.abs(np.einsum("bii->b", K)) ** 2 / d**2
        values[done : done + count] = np.abs(amp) ** 2 * fch
        done += count
        chunk_idx += 1

    mean = float(np.mean(values))
    std_error = float(np.std(values, ddof=1) / math.sqrt(samples))
    return OracleEstimate(mean=mean, std_error=std_error, samples=samples, seed=seed)


def _slice_embedding(basis: SchurBasis, alpha: YoungDiagram) -> np.ndarray:
    """Isometry from (unitary block of alpha) x C^d into (C^d)^(n+1).

    Columns are |alpha, u, slice 0> tensor |i>; the image is invariant
    under the diagonal group action and decomposes multiplicity-free into
    the one-box extensions of alpha.
    """
    block = basis.blocks[alpha][0]  # (d_alpha, d^n)
    d = basis.d
    cols = np.einsum("ua,ij->uiaj", block, np.eye(d)).reshape(block.shape[0] * d, -1)
    return cols.T  # (d^(n+1), d_alpha * d), column (u, i) = |alpha,u,0> x |i>


def verify_block_decomposition(
    V: DenseOperator, alpha: YoungDiagram, d: int, D: int, n: int, max_n: int = MAX_TENSOR_N
) -> float:
    """Cross-block residual of (block image of V) tensor V.

    Embeds the alpha block of V^(tensor n) tensored with one more V into
    (C^D)^(n+1), then projects between every pair of one-box-extension
    isotypic blocks on the input and output sides.  The residual is the
    largest matrix element landing in a mismatched block pair; the block
    structure predicts zero.
    """
    if V.matrix.shape != (D, d):
        raise ValueError(f"isometry must map C^{d} to C^{D}")
    if V.isometry_defect() > 1e-12:
        raise ValueError("operator is not an isometry to 1e-12")
    basis_d = schur_block_basis(d, n, max_n=max_n)
    basis_D = schur_block_basis(D, n, max_n=max_n)
    if alpha not in basis_d.blocks:
        raise ValueError(f"{alpha} is not a diagram of ({d}, {n})")

    # V^(n+1) applied to the embedded subspace, re-expressed on the D side
    vn1 = V.matrix
    for _ in range(n):
        vn1 = np.kron(vn1, V.matrix)
    E_in = _slice_embedding(basis_d, alpha)
    alpha_D = YoungDiagram(alpha.rows + (0,) * (D - d))
    E_out = _slice_embedding(basis_D, alpha_D)
    A = E_out.conj().T @ vn1 @ E_in  # acts U_alpha(d) x C^d -> U_alpha(D) x C^D

    in_exts = enumerate_diagrams(d, n + 1)
    out_exts = enumerate_diagrams(D, n + 1)
    proj_in = {}
    for mu in in_exts:
        P = isotypic_projector(mu, d, n + 1, max_n=max_n + 1)
        R = E_in.conj().T @ P @ E_in
        if np.max(np.abs(R)) > 1e-12:
            proj_in[mu] = R
    proj_out = {}
    for nu in out_exts:
        P = isotypic_projector(nu, D, n + 1, max_n=max_n + 1)
        R = E_out.conj().T @ P @ E_out
        if np.max(np.abs(R)) > 1e-12:
            proj_out[nu] = R

    residual = 0.0
    for mu, Rin in proj_in.items():
        for nu, Rout in proj_out.items():
            if nu.rows[:d] == mu.rows and all(r == 0 for r in nu.rows[d:]):
                continue  # matched block, expected nonzero
            residual = max(residual, float(np.max(np.abs(Rout @ A @ Rin))))
    return residual


def rotation_isometry(theta: float, d: int) -> DenseOperator:
    """Isometry C^d -> C^(d+1): identity rows, last column rotated by theta."""
    if d < 2:
        raise ValueError("d must be >= 2")
    m = np.zeros((d + 1, d), dtype=complex)
    for i in range(d - 1):
        m[i, i] = 1.0
    m[d - 1, d - 1] = math.cos(theta)
    m[d, d - 1] = math.sin(theta)
    return DenseOperator(in_dims=(d,), out_dims=(d + 1,), matrix=m)


def rotation_unitary(theta: float, d: int) -> DenseOperator:
    """The (d+1)-dimensional unitary extending rotation_isometry(theta, d)."""
    if d < 2:
        raise ValueError("d must be >= 2")
    m = np.eye(d + 1, dtype=complex)
    c, s = math.cos(theta), math.sin(theta)
    m[d - 1, d - 1] = c
    m[d - 1, d] = -s
    m[d, d - 1] = s
    m[d, d] = c
    return DenseOperator(in_dims=(d + 1,), out_dims=(d + 1,), matrix=m)


def _rotation_isometry_dot(theta: float, d: int) -> np.ndarray:
    m = np.zeros((d + 1, d), dtype=complex)
    m[d - 1, d - 1] = -math.sin(theta)
    m[d, d - 1] = math.cos(theta)
    return m


def _rotation_unitary_dot(theta: float, d: int) -> np.ndarray:
    m = np.zeros((d + 1, d + 1), dtype=complex)
    c, s = math.cos(theta), math.sin(theta)
    m[d - 1, d - 1] = -s
    m[d - 1, d] = -c
    m[d, d - 1] = c
    m[d, d] = -s
    return m


def hnks_hamiltonian(theta: float, d: int, which: str) -> DenseOperator:
    """Generator i V^dagger (dV/dtheta) for the rotation families.

    Analytic derivative (closed-form sine and cosine), not a finite
    difference: the isometry family gives the zero matrix exactly, which a
    finite difference would blur to O(h^2); the unitary family gives the
    theta-independent antisymmetric generator on the last two levels.
    """
    if which == "isometry":
        V = rotation_isometry(theta, d).matrix
        Vdot = _rotation_isometry_dot(theta, d)
    elif which == "unitary":
        V = rotation_unitary(theta, d).matrix
        Vdot = _rotation_unitary_dot(theta, d)
    else:
        raise ValueError(f"unknown family {which!r} (use 'isometry' or 'unitary')")
    H = 1j * V.conj().T @ Vdot
    k = H.shape[0]
    return DenseOperator(in_dims=(k,), out_dims=(k,), matrix=H)
