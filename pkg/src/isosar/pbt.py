"""Port-based-teleportation costs, error bounds, and query complexities.

The resource state for teleporting the stored channel lives on the one-box
extensions of the protocol window; its weights are the normalized sums of
parent weights.  Teleportation error is bounded by the estimation
infidelity of the same construction at matched input and output dimensions,
which drops as 1/n^2 and beats the 1/n estimation route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import estimation, protocol
from .young import DiagramSet, add_box, dim_unitary


@dataclass(frozen=True)
class PbtWeights:
    """Resource-state weights over the one-box extensions of the window."""

    base: protocol.ProtocolWeights
    support_plus: DiagramSet
    values: np.ndarray


def pbt_weights(v: protocol.ProtocolWeights) -> PbtWeights:
    """Normalized successor weights: w(mu) proportional to sum of parent v."""
    d, n = v.support.d, v.support.n
    acc: dict = {}
    for a, val in zip(v.support, v.values):
        for mu in add_box(a):
            acc[mu] = acc.get(mu, 0.0) + val
    support_plus = DiagramSet.from_diagrams(d, n + 1, acc.keys())
    raw = np.array([acc[mu] for mu in support_plus])
    return PbtWeights(base=v, support_plus=support_plus, values=raw / np.linalg.norm(raw))


def pbt_program_cost(n: int, d: int, D: int, N: int) -> protocol.CostReport:
    """Program bits for the teleportation resource state route.

    Exact integer sum of dim(mu, d) * dim(mu, D) over the window's one-box
    extensions, then log2.  The epsilon proxy is the matched-dimension
    teleportation error bound (independent of D).
    """
    w = pbt_weights(protocol.build_weights(n, d, N))
    total = sum(dim_unitary(mu, d) * dim_unitary(mu, D) for mu in w.support_plus)
    return protocol.CostReport(
        strategy=protocol.STRATEGY_PBT,
        n=n,
        d=d,
        D=D,
        N=N,
        cost_bits=math.log2(total),
        epsilon_proxy=pbt_error_bound(n, d),
    )


@lru_cache(maxsize=4096)
def pbt_error_bound(n: int, d: int) -> float:
    """Teleportation-error bound: the optimal matched-dimension infidelity.

    Cached: query-complexity searches probe overlapping n values.
    """
    if d == 1:
        return 0.0  # a one-dimensional identity teleports exactly
    return 1.0 - estimation.optimal_fidelity(n, d, d).fidelity


def cptp_cost_bound(d: int, D: int, n: int, N: int) -> protocol.CostReport:
    """General-channel cost: dilate to an isometry with output D*d, then PBT."""
    inner = pbt_program_cost(n, d, D * d, N)
    return protocol.CostReport(
        strategy=protocol.STRATEGY_CPTP,
        n=n,
        d=d,
        D=D,
        N=N,
        cost_bits=inner.cost_bits,
        epsilon_proxy=pbt_error_bound(n, d),
    )


def _snap(x: float, rel: float = 1e-9) -> float:
    """Round away float dust before a ceiling (0.01 is not exact in binary)."""
    r = round(x)
    return float(r) if abs(x - r) <= rel * max(1.0, abs(x)) else x


def query_complexity(d: int, D: int, eps: float, strategy: str) -> int:
    """Queries needed to reach retrieval error eps.

    classical: ceil(d (D-d) / eps), the leading-order estimation route
    (rejected for D = d, where the formula degenerates).
    quantum: smallest n with pbt_error_bound(n, d) <= eps, located by
    doubling then binary search (monotone in n).
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must be in (0, 1), got {eps}")
    if strategy == "classical":
        if D <= d:
            raise ValueError("classical query formula needs D > d (matched dimensions reach the quadratic regime)")
        return int(math.ceil(_snap(d * (D - d) / eps)))
    if strategy == "quantum":
        hi = 1
        while pbt_error_bound(hi, d) > eps:
            hi *= 2
            if hi > 1 << 22:
                raise RuntimeError(f"query search exceeded budget at eps={eps}")
        lo = hi // 2 + 1 if hi > 1 else 1
        while lo < hi:
            mid = (lo + hi) // 2
            if pbt_error_bound(mid, d) <= eps:
                hi = mid
            else:
                lo = mid + 1
        return lo
    raise ValueError(f"unknown strategy {strategy!r} (use 'classical' or 'quantum')")


TABLE_COLUMNS = ("strategy", "d", "D", "eps", "n", "cost_bits")


def table_row(strategy: str, d: int, D: int, eps: float, t: float | None = None) -> dict:
    """One comparison-table row: queries and cost at target error eps."""
    if strategy == "classical":
        n = query_complexity(d, D, eps, "classical")
        N = protocol.schedule_window(n, d, t if t is not None else 0.5)
        cost = protocol.estimation_program_cost(n, d, D, N).cost_bits
    elif strategy == "quantum":
        n = query_complexity(d, D, eps, "quantum")
        N = protocol.schedule_window(n, d, t if t is not None else 1.0)
        cost = pbt_program_cost(n, d, D, N).cost_bits
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return {"strategy": strategy, "d": d, "D": D, "eps": eps, "n": n, "cost_bits": cost}
