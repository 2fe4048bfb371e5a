"""Moment-matrix relaxations of the bipartite quantum set (levels 1 and 1+AB)."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from . import config
from .core import BellExpression, Behavior, Scenario, cg_labels, cg_matrices, correlators_of, no_signaling_residual
from .optim import lmi_maximize

LEVELS = ("1", "1+AB")


def _level(level) -> str:
    lv = str(level).upper().replace(" ", "")
    if lv not in LEVELS:
        raise ValueError(f"unsupported level {level!r}; choose 1 or 1+AB")
    return lv


def _reduce(word: tuple) -> tuple | None:
    """Projector algebra on one party's word of letters (x, a); None if the product vanishes."""
    out: list = []
    for letter in word:
        if out and out[-1][0] == letter[0]:
            if out[-1][1] != letter[1]:
                return None
            continue
        out.append(letter)
    return tuple(out)


def _canonical(A: tuple, B: tuple) -> tuple:
    # real relaxation: a moment and its adjoint share one variable
    return min((A, B), (A[::-1], B[::-1]))


@dataclass
class MomentMatrix:
    """Gamma(y) = F0 + sum_k y_k F_k over the monomial list."""
    scenario: Scenario
    level: str
    monomials: list
    variables: list          # canonical moment words, one per y_k
    F0: np.ndarray
    Fs: list
    observable: dict = field(default_factory=dict)   # CG coordinate index -> variable index

    def gamma(self, y) -> np.ndarray:
        return self.F0 + sum(v * F for v, F in zip(y, self.Fs))

    def labels(self) -> list[str]:
        def show(w, name):
            return "".join(f"{name}{a}|{x}" for x, a in w)
        return [(show(A, "A") + show(B, "B")) or "1" for A, B in self.monomials]


def moment_matrix(sc: Scenario, level="1") -> MomentMatrix:
    if sc.parties != 2:
        raise ValueError("moment matrices are implemented for bipartite scenarios")
    lv = _level(level)
    (mA, mB), (dA, dB) = sc.inputs, sc.outputs
    lettersA = [((x, a),) for x in range(mA) for a in range(dA - 1)]
    lettersB = [((y, b),) for y in range(mB) for b in range(dB - 1)]
    mons = [((), ())] + [(w, ()) for w in lettersA] + [((), w) for w in lettersB]
    if lv == "1+AB":
        mons += [(a, b) for a in lettersA for b in lettersB]
    k = len(mons)
    index: dict = {}
    entries = {}
    F0 = np.zeros((k, k))
    for i, (Ai, Bi) in enumerate(mons):
        for j in range(i, k):
            Aj, Bj = mons[j]
            A = _reduce(Ai[::-1] + Aj)
            B = _reduce(Bi[::-1] + Bj)
            if A is None or B is None:
                continue
            key = _canonical(A, B)
            if key == ((), ()):
                F0[i, j] = F0[j, i] = 1.0
                continue
            v = index.setdefault(key, len(index))
            entries.setdefault(v, []).append((i, j))
    Fs = []
    for v in range(len(index)):
        F = np.zeros((k, k))
        for i, j in entries[v]:
            F[i, j] = F[j, i] = 1.0
        Fs.append(F)
    variables = sorted(index, key=index.get)
    # map observable moments onto Collins-Gisin coordinates
    labels = cg_labels(sc)
    observable = {}
    for c, (la, lb) in enumerate(labels):
        A = () if la == 0 else (divmod(la - 1, dA - 1),)
        B = () if lb == 0 else (divmod(lb - 1, dB - 1),)
        observable[c] = index[_canonical(A, B)]
    return MomentMatrix(sc, lv, mons, variables, F0, Fs, observable)


@dataclass
class NpaResult:
    status: str
    value: float            # bound (upper_bound) or phase-1 slack t* (membership)
    feasible: bool | None
    gamma: np.ndarray | None
    labels: list
    residuals: dict

    def to_json(self) -> dict:
        return {"status": self.status, "value": self.value, "feasible": self.feasible,
                "labels": self.labels,
                "gamma": None if self.gamma is None else self.gamma.tolist(),
                "residuals": self.residuals}


def _stall(sol) -> RuntimeError:
    return RuntimeError(f"SDP solver stalled ({sol.status}, {sol.iterations} iterations)")


def _with_positivity(mm: MomentMatrix, M: np.ndarray):
    """Append p(ab..|xy..) >= 0 as a diagonal block (level 1 only).

    At level 1 the moment matrix alone does not force the behavior's entries to
    be nonnegative. At 1+AB each entry is <v v> for a projector v in the span of
    the monomials, so the block is implied (and its redundancy slows the solver).
    """
    if mm.level != "1":
        return mm.F0, mm.Fs
    k, r = mm.F0.shape[0], M.shape[0]
    F0 = np.zeros((k + r, k + r))
    F0[:k, :k] = mm.F0
    F0[k:, k:] = np.diag(M[:, 0])
    lin = np.zeros((len(mm.Fs), r))
    for ci, v in mm.observable.items():
        lin[v] += M[:, ci + 1]
    Fs = []
    for v, F in enumerate(mm.Fs):
        G = np.zeros((k + r, k + r))
        G[:k, :k] = F
        G[k:, k:] = np.diag(lin[v])
        Fs.append(G)
    return F0, Fs


def npa_upper_bound(expr: BellExpression, level="1", tol=None, verbose: bool = False):
    """Upper bound on the quantum value of expr from the moment-matrix relaxation."""
    tol = tol or config.resolve()
    mm = moment_matrix(expr.scenario, level)
    _, M = cg_matrices(expr.scenario)
    g = M.T @ expr.coefficients
    c = np.zeros(len(mm.Fs))
    for ci, v in mm.observable.items():
        c[v] += g[ci + 1]
    F0, Fs = _with_positivity(mm, M)
    val, y, sol = lmi_maximize(F0, Fs, c, tol)
    if sol.status != "optimal":
        raise _stall(sol)
    val += g[0]
    if not verbose:
        return float(val)
    G = mm.gamma(y)
    return NpaResult(sol.status, float(val), None, G, mm.labels(),
                     {"min_eig": float(np.linalg.eigvalsh(G).min()), **sol.residuals})


def _phase1(F0, Fs, tol):
    """max t s.t. F0 + sum y F - t I PSD and t >= -L; returns (t*, y, sol)."""
    k = F0.shape[0]
    L = float(k + 1)
    n = k + 1
    G0 = np.zeros((n, n))
    G0[:k, :k] = F0
    G0[k, k] = L
    Gt = np.zeros((n, n))
    Gt[:k, :k] = -np.eye(k)
    Gt[k, k] = 1.0
    Gs = []
    for F in Fs:
        E = np.zeros((n, n))
        E[:k, :k] = F
        Gs.append(E)
    c = np.zeros(len(Fs) + 1)
    c[-1] = 1.0
    val, y, sol = lmi_maximize(G0, Gs + [Gt], c, tol)
    return val, y, sol


def npa_membership(b: Behavior, level="1", tol=None, verbose: bool = False):
    """Phase-1 feasibility of a moment matrix matching the behavior; True iff t* >= -tol.membership."""
    tol = tol or config.resolve()
    sc = b.scenario
    mm = moment_matrix(sc, level)
    if no_signaling_residual(b) > tol.ns or b.table.min() < -tol.ns:
        res = NpaResult("signaling", -np.inf, False, None, mm.labels(), {})
        return res if verbose else False
    E, _ = cg_matrices(sc)
    cg = E[1:] @ b.table
    fixed = {v: cg[ci] for ci, v in mm.observable.items()}
    F0 = mm.F0 + sum(val * mm.Fs[v] for v, val in fixed.items())
    free = [v for v in range(len(mm.Fs)) if v not in fixed]
    t, y, sol = _phase1(F0, [mm.Fs[v] for v in free], tol)
    if sol.status != "optimal":
        raise _stall(sol)
    ok = bool(t >= -tol.membership)
    if not verbose:
        return ok
    yfull = np.zeros(len(mm.Fs))
    for v, val in fixed.items():
        yfull[v] = val
    yfull[free] = y[:-1]
    G = mm.gamma(yfull)
    return NpaResult(sol.status, float(t), ok, G, mm.labels(),
                     {"min_eig": float(np.linalg.eigvalsh(G).min()), **sol.residuals})


def q1_analytic_222(b: Behavior, tol: float = 1e-12) -> bool:
    """Closed-form Q1 test for two binary inputs and outputs per party."""
    sc = b.scenario
    if sc.parties != 2 or sc.inputs != (2, 2) or sc.outputs != (2, 2):
        raise ValueError("q1_analytic_222 needs the (2,2,2) scenario")
    c = correlators_of(b)
    if np.any(c.A ** 2 >= 1 - tol) or np.any(c.B ** 2 >= 1 - tol):
        return True
    den = np.sqrt(np.outer(1 - c.A ** 2, 1 - c.B ** 2))
    D = (c.AB - np.outer(c.A, c.B)) / den
    if np.any(np.abs(D) > 1 + tol):
        return False
    s = np.arcsin(np.clip(D, -1, 1)).ravel()
    total = s.sum()
    return bool(all(abs(total - 2 * s[k]) <= np.pi + 1e-12 for k in range(4)))


def asin_test(corr) -> bool:
    """Zero-marginal version: |sum asin <AxBy> - 2 asin <AxBy>| <= pi for each choice of the minus sign."""
    C = np.asarray(corr, dtype=float)
    if C.shape != (2, 2) or np.any(np.abs(C) > 1 + 1e-12):
        return False
    s = np.arcsin(np.clip(C, -1, 1)).ravel()
    return bool(all(abs(s.sum() - 2 * s[k]) <= np.pi + 1e-12 for k in range(4)))


def tsirelson_correlation_membership(corr, m: int | None = None, tol=None) -> bool:
    """Is there a PSD unit-diagonal Gram matrix of order 2m with off-diagonal block corr?"""
    tol = tol or config.resolve()
    C = np.asarray(corr, dtype=float)
    m = m or C.shape[0]
    if C.shape != (m, m):
        raise ValueError("correlator table must be m x m")
    if np.any(np.abs(C) > 1 + 1e-12):
        return False
    n = 2 * m
    F0 = np.eye(n)
    F0[:m, m:] = C
    F0[m:, :m] = C.T
    Fs = []
    for blk in (0, m):
        for i in range(m):
            for j in range(i + 1, m):
                F = np.zeros((n, n))
                F[blk + i, blk + j] = F[blk + j, blk + i] = 1.0
                Fs.append(F)
    t, _, sol = _phase1(F0, Fs, tol)
    if sol.status != "optimal":
        raise _stall(sol)
    return bool(t >= -tol.membership)


def correlators_for_chsh(S: float) -> np.ndarray:
    """Isotropic correlator table with CHSH value S (E00 + E01 + E10 - E11)."""
    e = S / 4
    return np.array([[e, e], [e, -e]])
