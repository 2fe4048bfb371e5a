"""Statistical strength: relative entropy from a behavior to the local polytope."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from ..core import Behavior
from ..polytopes import local_vertex_matrix


@dataclass
class StrengthResult:
    value: float          # bits
    gap: float            # Frank-Wolfe duality gap, bits
    iterations: int
    q: np.ndarray         # closest local table
    weights: np.ndarray   # convex weights over local vertices


def _kl(p, q, w):
    mask = p > 0
    return float(np.sum(w[mask] * p[mask] * np.log2(p[mask] / q[mask])))


def statistical_strength(b: Behavior, input_weights=None, gap_tol: float = 1e-6,
                         max_iter: int = 100000, max_vertices: int = 100000) -> StrengthResult:
    """min over local q of sum_x pi(x) sum_a p log2(p/q), by pairwise Frank-Wolfe over local vertices."""
    sc = b.scenario
    V, _ = local_vertex_matrix(sc)
    if V.shape[0] > max_vertices:
        raise ValueError(f"{V.shape[0]} local vertices exceed the cap {max_vertices}")
    n = sc.parties
    n_inputs = int(np.prod(sc.inputs))
    if input_weights is None:
        pi = np.full(sc.inputs, 1.0 / n_inputs)
    else:
        pi = np.asarray(input_weights, dtype=float).reshape(sc.inputs)
        if abs(pi.sum() - 1) > 1e-12 or np.any(pi < 0):
            raise ValueError("input weights must be a probability distribution")
    w = np.broadcast_to(pi.reshape(pi.shape + (1,) * n), sc.shape).reshape(-1)
    p = np.clip(np.asarray(b.table, float), 0, None)
    mask = p > 0
    lam = np.full(V.shape[0], 1.0 / V.shape[0])
    q = lam @ V
    f = _kl(p, q, w)
    gap = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        grad = np.zeros_like(q)
        grad[mask] = -w[mask] * p[mask] / (q[mask] * np.log(2))
        scores = V @ grad
        s = int(np.argmin(scores))
        gap = float(grad @ q - scores[s])
        if gap <= gap_tol:
            break
        active = np.flatnonzero(lam > 0)
        a = active[np.argmax(scores[active])]
        d = V[s] - V[a]
        gmax = lam[a]

        def phi(g):
            qq = q + g * d
            if np.any(qq[mask] <= 0):
                return np.inf
            return _kl(p, qq, w)

        r = minimize_scalar(phi, bounds=(0.0, gmax), method="bounded", options={"xatol": 1e-14 * max(gmax, 1e-300) + 1e-16})
        g = float(r.x) if phi(r.x) <= phi(gmax) else gmax
        lam[s] += g
        lam[a] -= g
        if lam[a] < 1e-15:
            lam[a] = 0.0
        q = lam @ V
        f = _kl(p, q, w)
    else:
        raise RuntimeError(f"Frank-Wolfe did not reach gap {gap_tol} (gap {gap:.3g})")
    return StrengthResult(max(f, 0.0), gap, it, q, lam)
