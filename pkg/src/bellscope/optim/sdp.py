"""Primal-dual interior point for small dense SDPs (HKM direction, Mehrotra predictor-corrector)."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .. import config


@dataclass
class SdpProblem:
    """maximize <C, X> subject to <A_i, X> = b_i and X PSD."""

    C: np.ndarray
    A: list
    b: np.ndarray

    def __post_init__(self):
        self.C = _sym(np.asarray(self.C, dtype=float))
        n = self.C.shape[0]
        if self.C.shape != (n, n):
            raise ValueError("C must be square")
        self.A = [_sym(np.asarray(a, dtype=float)) for a in self.A]
        if any(a.shape != (n, n) for a in self.A):
            raise ValueError("all constraint matrices must match the dimension of C")
        self.b = np.asarray(self.b, dtype=float).reshape(-1)
        if self.b.size != len(self.A):
            raise ValueError("one right-hand side per constraint matrix")


@dataclass
class SdpSolution:
    status: str               # optimal | infeasible | stalled
    X: np.ndarray | None = None
    y: np.ndarray | None = None   # Z = sum y_i A_i - C is PSD, dual objective b.y
    Z: np.ndarray | None = None
    objective: float = float("nan")
    dual_objective: float = float("nan")
    iterations: int = 0
    residuals: dict = field(default_factory=dict)


def _sym(M):
    return (M + M.T) / 2


def _svec(M):
    n = M.shape[0]
    iu = np.triu_indices(n)
    w = np.where(iu[0] == iu[1], 1.0, np.sqrt(2.0))
    return M[iu] * w


def _independent_rows(V, b, tol=1e-10):
    """Indices of a maximal independent subset of rows of V; None if b is inconsistent."""
    if V.shape[0] == 0:
        return np.arange(0)
    Q, R, P = sla.qr(V.T, mode="economic", pivoting=True)
    d = np.abs(np.diag(R))
    r = int(np.sum(d > tol * max(1.0, d[0]))) if d.size else 0
    keep = np.sort(P[:r])
    drop = np.setdiff1d(np.arange(V.shape[0]), keep)
    if drop.size:
        W, *_ = np.linalg.lstsq(V[keep].T, V[drop].T, rcond=None)
        if np.abs(W.T @ b[keep] - b[drop]).max() > 1e-8 * (1 + np.abs(b).max()):
            return None
    return keep


def _max_step(X, dX):
    L = np.linalg.cholesky(X)
    Li = sla.solve_triangular(L, np.eye(X.shape[0]), lower=True)
    lam = np.linalg.eigvalsh(_sym(Li @ dX @ Li.T)).min()
    return np.inf if lam >= 0 else -1.0 / lam




def sdp_solve(p: SdpProblem, tol: config.Tolerances | None = None) -> SdpSolution:
    tol = tol or config.resolve()
    n = p.C.shape[0]
    k_all = len(p.A)
    V = np.array([_svec(a) for a in p.A]) if k_all else np.zeros((0, n * (n + 1) // 2))
    keep = _independent_rows(V, p.b)
    if keep is None:
        return SdpSolution("infeasible", residuals={"reason": "inconsistent equality constraints"})
    A = np.array([p.A[i] for i in keep]).reshape(-1, n, n)
    b = p.b[keep]
    k = len(keep)
    C = -p.C  # internal minimization form
    Aflat = A.reshape(k, -1)

    def Aop(M):
        return Aflat @ M.reshape(-1)

    def Aadj(y):
        return (y @ Aflat).reshape(n, n)

    normA = np.sqrt((Aflat ** 2).sum(axis=1)) if k else np.zeros(0)
    # A A^t is well conditioned; used to restore A(dX) = Rp lost to Schur-complement roundoff
    AAt = sla.cho_factor(Aflat @ Aflat.T) if k else None
    normb = np.linalg.norm(b)
    normC = np.linalg.norm(C)
    xi = max(10.0, np.sqrt(n), n * max(((1 + np.abs(b)) / (1 + normA)).max(initial=0), 0))
    eta = max(10.0, np.sqrt(n), normA.max(initial=0), normC)
    X = xi * np.eye(n)
    Z = eta * np.eye(n)
    y = np.zeros(k)
    gamma = tol.sdp_step
    status = "stalled"
    it = 0
    res = {}
    for it in range(tol.sdp_max_iter + 1):
        Rp = b - Aop(X)
        Rd = C - Z - Aadj(y)
        pobj = float(np.sum(C * X))
        dobj = float(b @ y)
        mu = float(np.sum(X * Z)) / n
        res = {
            "primal": float(np.linalg.norm(Rp) / (1 + normb)),
            "dual": float(np.linalg.norm(Rd) / (1 + normC)),
            "gap": abs(pobj - dobj) / (1 + abs(pobj) + abs(dobj)),
            "complementarity": float(np.sum(X * Z)) / (1 + abs(pobj) + abs(dobj)),
        }
        if (res["gap"] < tol.sdp_gap and res["complementarity"] < tol.sdp_gap
                and res["primal"] < tol.sdp_feas and res["dual"] < tol.sdp_feas):
            status = "optimal"
            break
        if it == tol.sdp_max_iter or not np.isfinite(mu):
            break
        if max(np.abs(X).max(), np.abs(y).max(initial=0)) > 1e12:
            break
        try:
            Lz = np.linalg.cholesky(Z)
        except np.linalg.LinAlgError:
            break
        Zinv = sla.cho_solve((Lz, True), np.eye(n))
        XA = np.einsum("ij,kjl->kil", X, A)
        G = np.einsum("kij,jl->kil", XA, Zinv)
        M = Aflat @ G.reshape(k, -1).T
        M = _sym(M)
        try:
            cf = sla.cho_factor(M)
            solve = lambda r: sla.cho_solve(cf, r)
        except np.linalg.LinAlgError:
            solve = lambda r: np.linalg.lstsq(M, r, rcond=None)[0]
        XRdZ = X @ Rd @ Zinv
        base = Rp + Aop(X) + Aop(XRdZ)

        def direction(sigma_mu, corr):
            rhs = base - sigma_mu * Aop(Zinv)
            if corr is not None:
                rhs = rhs + Aop(corr)
            dy = solve(rhs)
            dZ = Rd - Aadj(dy)
            dX = sigma_mu * Zinv - X - X @ dZ @ Zinv
            if corr is not None:
                dX = dX - corr
            dX = _sym(dX)
            if k:
                dX = dX + _sym(Aadj(sla.cho_solve(AAt, Rp - Aop(dX))))
            return dX, dy, _sym(dZ)

        dXa, dya, dZa = direction(0.0, None)
        try:
            ap = min(1.0, gamma * _max_step(X, dXa))
            ad = min(1.0, gamma * _max_step(Z, dZa))
        except np.linalg.LinAlgError:
            break
        mu_aff = float(np.sum((X + ap * dXa) * (Z + ad * dZa))) / n
        sigma = min(1.0, max(0.0, (mu_aff / mu) ** 3))
        corr = dXa @ dZa @ Zinv
        dX, dy, dZ = direction(sigma * mu, corr)
        try:
            ap = min(1.0, gamma * _max_step(X, dX))
            ad = min(1.0, gamma * _max_step(Z, dZ))
        except np.linalg.LinAlgError:
            break
        X = _sym(X + ap * dX)
        y = y + ad * dy
        Z = _sym(Z + ad * dZ)

    y_full = np.zeros(k_all)
    y_full[keep] = -y
    ex, ez = np.linalg.eigvalsh(X).min(), np.linalg.eigvalsh(Z).min()
    res.update({"min_eig_X": float(ex), "min_eig_Z": float(ez), "kept_constraints": int(k)})
    if status == "optimal" and min(ex, ez) < -tol.sdp_psd:
        status = "stalled"
    return SdpSolution(status, X=X, y=y_full, Z=Z, objective=-float(np.sum(C * X)),
                       dual_objective=-float(b @ y), iterations=it, residuals=res)


def lmi_maximize(F0, Fs, c, tol: config.Tolerances | None = None):
    """maximize c.y subject to F0 + sum_k y_k F_k PSD.

    Returns (value, y, solution), solved through the dual side of sdp_solve.
    """
    c = np.asarray(c, dtype=float)
    sol = sdp_solve(SdpProblem(-np.asarray(F0), list(Fs), -c), tol)
    value = -sol.dual_objective if sol.status == "optimal" else float("nan")
    return value, sol.y, sol
