"""Dense two-phase revised simplex with Bland's anti-cycling rule."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .. import config


@dataclass
class LpProblem:
    """Optimize c.x subject to A x (senses) b, x >= 0 except where ``free``.

    senses: one of "<=", "=", ">=" per row.
    """

    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    senses: list[str] | None = None
    free: np.ndarray | None = None
    maximize: bool = True

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).reshape(-1)
        self.A = np.asarray(self.A, dtype=float).reshape(-1, self.c.size)
        self.b = np.asarray(self.b, dtype=float).reshape(-1)
        m = self.A.shape[0]
        if self.b.size != m:
            raise ValueError(f"A has {m} rows but b has {self.b.size} entries")
        if self.senses is None:
            self.senses = ["<="] * m
        self.senses = [s.replace("==", "=") for s in self.senses]
        if len(self.senses) != m or any(s not in ("<=", "=", ">=") for s in self.senses):
            raise ValueError("need one sense in {'<=', '=', '>='} per row")
        if self.free is None:
            self.free = np.zeros(self.c.size, dtype=bool)
        self.free = np.asarray(self.free, dtype=bool).reshape(-1)
        if self.free.size != self.c.size:
            raise ValueError("free mask must match the number of variables")


@dataclass
class LpSolution:
    status: str                # optimal | infeasible | unbounded | stalled
    x: np.ndarray | None = None
    y: np.ndarray | None = None  # duals, objective = b.y at optimum
    objective: float = float("nan")
    pivots: int = 0
    residual: float = float("nan")  # primal feasibility
    gap: float = float("nan")       # |c.x - b.y| / (1 + |c.x|)
    info: dict = field(default_factory=dict)


class _Stalled(Exception):
    pass


class _Simplex:
    def __init__(self, A, b, tol: config.Tolerances):
        self.A = A
        self.b = b
        self.tol = tol
        self.pivots = 0
        self.degenerate = 0

    def factor(self, basis):
        self.basis = list(basis)
        B = self.A[:, self.basis]
        try:
            self.Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError:
            raise _Stalled() from None
        self.since_refactor = 0

    def xB(self):
        return self.Binv @ self.b

    def run(self, c, allowed):
        """Minimize c.z over columns in ``allowed`` starting from the current basis."""
        A = self.A
        piv = self.tol.lp_pivot
        scale = max(1.0, float(np.abs(c).max(initial=0)))
        rc_tol = 1e-9 * scale
        while True:
            if self.pivots >= self.tol.lp_max_pivots:
                raise _Stalled()
            y = c[self.basis] @ self.Binv
            d = c - y @ A
            d[self.basis] = 0.0
            cand = np.flatnonzero((d < -rc_tol) & allowed)
            if cand.size == 0:
                return "optimal"
            j = int(cand[0])  # Bland: smallest index
            u = self.Binv @ A[:, j]
            xB = self.xB()
            rows = np.flatnonzero(u > max(piv, 1e-9 * float(np.abs(u).max())))
            if rows.size == 0:
                return "unbounded"
            ratios = np.maximum(xB[rows], 0.0) / u[rows]
            rmin = ratios.min()
            ties = rows[ratios <= rmin + 1e-12 * max(1.0, rmin)]
            if self.degenerate < 50:
                r = int(ties[np.argmax(u[ties])])  # largest pivot among ties, for stability
            else:
                r = int(min(ties, key=lambda i: self.basis[i]))  # strict Bland against cycling
            self.degenerate = self.degenerate + 1 if rmin <= 1e-12 else 0
            self.pivot(r, j, u)

    def pivot(self, r, j, u=None):
        if u is None:
            u = self.Binv @ self.A[:, j]
        ur = u[r]
        row = self.Binv[r] / ur
        self.Binv -= np.outer(u, row)
        self.Binv[r] = row
        self.basis[r] = j
        self.pivots += 1
        self.since_refactor += 1
        if self.since_refactor >= 64:
            self.factor(self.basis)


def _dependent_rows(p: LpProblem, tol: config.Tolerances):
    """Indices of equality rows that are linear combinations of other equality rows.

    Returns (drop, consistent). Inconsistent dependent rows mean the LP is infeasible.
    """
    eq = np.array([i for i, s in enumerate(p.senses) if s == "="], dtype=int)
    if eq.size < 2:
        return np.zeros(0, dtype=int), True
    Aeq = p.A[eq]
    _, R, P = sla.qr(Aeq.T, mode="economic", pivoting=True)
    d = np.abs(np.diag(R))
    if d.size == 0 or d[0] == 0:
        rank = 0
    else:
        rank = int(np.sum(d > 1e-10 * d[0]))
    if rank == eq.size:
        return np.zeros(0, dtype=int), True
    keep, drop = P[:rank], P[rank:]
    if rank:
        coef, *_ = np.linalg.lstsq(Aeq[keep].T, Aeq[drop].T, rcond=None)
        pred = coef.T @ p.b[eq[keep]]
    else:
        pred = np.zeros(drop.size)
    scale = max(1.0, float(np.abs(p.b).max(initial=0)))
    consistent = bool(np.all(np.abs(pred - p.b[eq[drop]]) <= tol.lp_feas * scale))
    return eq[drop], consistent


def lp_solve(p: LpProblem, tol: config.Tolerances | None = None) -> LpSolution:
    tol = tol or config.resolve()
    drop, consistent = _dependent_rows(p, tol)
    if not consistent:
        return LpSolution("infeasible", info={"dependent_rows": "inconsistent"})
    if drop.size:
        keep = np.setdiff1d(np.arange(p.A.shape[0]), drop)
        sub = LpProblem(p.c, p.A[keep], p.b[keep], [p.senses[i] for i in keep], p.free, p.maximize)
        sol = lp_solve(sub, tol)
        if sol.y is not None:
            y = np.zeros(p.A.shape[0])
            y[keep] = sol.y
            sol.y = y
        if sol.x is not None:
            Ax = p.A @ sol.x
            sol.residual = max(sol.residual, float(np.abs(Ax[drop] - p.b[drop]).max()))
        sol.info["dropped_rows"] = int(drop.size)
        return sol
    m, n = p.A.shape
    # columns: original (free split into +/-), slacks, artificials
    cols = [p.A]
    cost = [-p.c if p.maximize else p.c]
    free_idx = np.flatnonzero(p.free)
    if free_idx.size:
        cols.append(-p.A[:, free_idx])
        cost.append(-cost[0][free_idx])
    n_struct = n + free_idx.size
    slack_rows = [i for i, s in enumerate(p.senses) if s != "="]
    S = np.zeros((m, len(slack_rows)))
    for k, i in enumerate(slack_rows):
        S[i, k] = 1.0 if p.senses[i] == "<=" else -1.0
    cols.append(S)
    cost.append(np.zeros(len(slack_rows)))
    A = np.hstack(cols)
    c = np.concatenate(cost)
    b = p.b.copy()
    flip = np.where(b < 0, -1.0, 1.0)
    A = A * flip[:, None]
    b = b * flip

    # starting basis: a +1 slack where available, artificial otherwise
    n_real = A.shape[1]
    basis = [-1] * m
    for k, i in enumerate(slack_rows):
        if A[i, n_struct + k] > 0:
            basis[i] = n_struct + k
    art_rows = [i for i in range(m) if basis[i] < 0]
    Art = np.zeros((m, len(art_rows)))
    for k, i in enumerate(art_rows):
        Art[i, k] = 1.0
        basis[i] = n_real + k
    A_full = np.hstack([A, Art])
    total = A_full.shape[1]
    is_art = np.zeros(total, dtype=bool)
    is_art[n_real:] = True

    sx = _Simplex(A_full, b, tol)
    sx.factor(basis)
    rows_alive = np.arange(m)
    try:
        if art_rows:
            c1 = is_art.astype(float)
            sx.run(c1, np.ones(total, dtype=bool))
            infeas = float(c1[sx.basis] @ sx.xB())
            if infeas > tol.lp_feas * max(1.0, float(np.abs(b).max(initial=0))):
                return LpSolution("infeasible", pivots=sx.pivots, info={"phase1": infeas})
            # drive artificials out of the basis, dropping redundant rows
            r = 0
            while r < len(sx.basis):
                if is_art[sx.basis[r]]:
                    row = sx.Binv[r] @ sx.A
                    mag = np.where(is_art, 0.0, np.abs(row))
                    j = int(np.argmax(mag))
                    if mag[j] > 1e-9:
                        sx.pivot(r, j)
                    else:
                        keep = [i for i in range(len(sx.basis)) if i != r]
                        rows_alive = rows_alive[keep]
                        sx.A = sx.A[keep]
                        sx.b = sx.b[keep]
                        sx.factor([sx.basis[i] for i in keep])
                        continue
                r += 1
        c2 = np.concatenate([c, np.zeros(total - n_real)])
        status = sx.run(c2, ~is_art)
    except _Stalled:
        return LpSolution("stalled", pivots=sx.pivots)
    if status == "unbounded":
        return LpSolution("unbounded", pivots=sx.pivots)

    z = np.zeros(total)
    z[sx.basis] = np.maximum(sx.xB(), 0.0)
    x = z[:n].copy()
    if free_idx.size:
        x[free_idx] -= z[n:n_struct]
    y_std = np.zeros(m)
    y_std[rows_alive] = c2[sx.basis] @ sx.Binv
    y = y_std * flip
    if p.maximize:
        y = -y
    obj = float(p.c @ x)
    Ax = p.A @ x
    res = 0.0
    for i, s in enumerate(p.senses):
        v = Ax[i] - p.b[i]
        res = max(res, abs(v) if s == "=" else max(v, 0.0) if s == "<=" else max(-v, 0.0))
    gap = abs(obj - float(p.b @ y)) / (1 + abs(obj))
    return LpSolution("optimal", x=x, y=y, objective=obj, pivots=sx.pivots, residual=res, gap=gap)
