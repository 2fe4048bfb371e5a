"""See-saw lower bounds on the quantum value of a Bell expression."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..core import BellExpression
from ..optim import SdpProblem, sdp_solve
from .measurements import QuantumModel, bell_operator, born_tensor
from .states import DensityMatrix

_L = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class SeesawConfig:
    restarts: int = 20
    max_sweeps: int = 500
    tol: float = 1e-10
    seed: int = 0
    jobs: int = 1


@dataclass
class SeesawResult:
    value: float
    model: QuantumModel
    history: list = field(default_factory=list)  # best value per sweep of the winning restart
    converged: bool = True
    values: list = field(default_factory=list)   # final value of every restart
    raw_measurements: list | None = None        # before the efficiency map, for warm starts


def restart_seeds(seed: int, restarts: int) -> list[np.random.SeedSequence]:
    """Child i is SeedSequence(seed).spawn(...)[i], i.e. entropy=seed, spawn_key=(i,)."""
    return np.random.SeedSequence(seed).spawn(restarts)


def _random_projective(d: int, n_out: int, rng) -> np.ndarray:
    H = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    H = H + H.conj().T
    w, U = np.linalg.eigh(H)
    if n_out == 2:
        # sign of a random Hermitian matrix
        pos = U[:, w > 0]
        P = pos @ pos.conj().T
        return np.array([P, np.eye(d) - P])
    labels = rng.integers(0, n_out, size=d)
    out = np.zeros((n_out, d, d), dtype=complex)
    for col, a in enumerate(labels):
        out[a] += np.outer(U[:, col], U[:, col].conj())
    return out


def _conditioned(expr_t, R, meas, k, n):
    """W[x_k, a_k] with value = sum tr(W[x_k,a_k] M_k[x_k,a_k])."""
    i = _L[:n]
    j = _L[n:2 * n]
    x = _L[2 * n:3 * n].upper()
    a = _L[3 * n:4 * n].upper()
    ops = [f"{x[l]}{a[l]}{j[l]}{i[l]}" for l in range(n) if l != k]
    sub = f"{x}{a},{i}{j}," + ",".join(ops) + f"->{x[k]}{a[k]}{i[k]}{j[k]}"
    others = [meas[l] for l in range(n) if l != k]
    return np.einsum(sub, expr_t, R, *others, optimize="greedy")


def _best_measurement(W: np.ndarray) -> np.ndarray:
    """argmax over measurements {M_a} of sum_a tr(W_a^T-ordered M_a) for one input."""
    n_out, d, _ = W.shape
    # value = sum_{ij} W[i,j] M[j,i] = tr(W M), with W Hermitian up to rounding
    W = (W + W.conj().transpose(0, 2, 1)) / 2
    if n_out == 2:
        w, U = np.linalg.eigh(W[0] - W[1])
        pos = U[:, w > 0]
        P = pos @ pos.conj().T
        return np.array([P, np.eye(d) - P])
    return _povm_sdp(W)


def _embed(H):
    return np.block([[H.real, -H.imag], [H.imag, H.real]])


def _povm_sdp(W: np.ndarray) -> np.ndarray:
    """max sum_a tr(W_a M_a) s.t. M_a PSD, sum_a M_a = I, via the real embedding."""
    n_out, d, _ = W.shape
    e = 2 * d
    N = n_out * e
    C = np.zeros((N, N))
    for a in range(n_out):
        C[a * e:(a + 1) * e, a * e:(a + 1) * e] = _embed(W[a]) / 2
    A, b = [], []
    for r in range(e):
        for c in range(r, e):
            Ak = np.zeros((N, N))
            for a in range(n_out):
                Ak[a * e + r, a * e + c] += 0.5
                Ak[a * e + c, a * e + r] += 0.5
            A.append(Ak)
            b.append(1.0 if r == c else 0.0)
    sol = sdp_solve(SdpProblem(C, A, b))
    Xs = sol.X
    J = np.block([[np.zeros((d, d)), -np.eye(d)], [np.eye(d), np.zeros((d, d))]])
    out = np.zeros((n_out, d, d), dtype=complex)
    for a in range(n_out):
        B = Xs[a * e:(a + 1) * e, a * e:(a + 1) * e]
        B = (B + J @ B @ J.T) / 2
        M = B[:d, :d] + 1j * B[d:, :d]
        w, U = np.linalg.eigh((M + M.conj().T) / 2)
        out[a] = (U * np.clip(w, 0, None)) @ U.conj().T
    # restore completeness exactly
    S = out.sum(axis=0)
    w, U = np.linalg.eigh(S)
    Sm = (U / np.sqrt(w)) @ U.conj().T
    return np.array([Sm @ M @ Sm for M in out])


def _effective(M, eff):
    """eta * M + (1 - eta) * I on the assigned outcome."""
    if eff is None:
        return M
    eta, assign = eff
    out = eta * M
    out[:, assign] += (1 - eta) * np.eye(M.shape[-1])
    return out


def _one_run(expr, dims, rng, cfg, state, efficiency, initial=None):
    sc = expr.scenario
    n = sc.parties
    eff = efficiency or [None] * n
    if initial is not None:
        meas = [np.array(m, dtype=complex) for m in initial]
    else:
        meas = [np.array([_random_projective(dims[k], sc.outputs[k], rng) for _ in range(sc.inputs[k])])
                for k in range(n)]
    T = expr.tensor

    def eff_meas():
        return [_effective(meas[k], eff[k]) for k in range(n)]

    def top_state():
        S = bell_operator(expr, eff_meas())
        w, U = np.linalg.eigh(S)
        psi = U[:, -1]
        return np.outer(psi, psi.conj())

    rho = state.rho if state is not None else top_state()
    value = float(np.sum(T * born_tensor(rho, dims, eff_meas())))
    history = [value]
    converged = False
    for _ in range(cfg.max_sweeps):
        R = rho.reshape(tuple(dims) * 2)
        for k in range(n):
            em = eff_meas()
            W = _conditioned(T, R, em, k, n)
            meas[k] = np.array([_best_measurement(W[x]) for x in range(sc.inputs[k])])
        if state is None:
            rho = top_state()
        new = float(np.sum(T * born_tensor(rho, dims, eff_meas())))
        history.append(new)
        improved = new - value
        value = max(value, new)
        if improved < cfg.tol:
            converged = True
            break
    return value, rho, eff_meas(), history, converged, meas


def seesaw_lower_bound(expr: BellExpression, dims, restarts: int | None = None, seed: int = 0,
                       state: DensityMatrix | None = None, efficiency=None,
                       config: SeesawConfig | None = None, jobs: int | None = None,
                       initial=None) -> SeesawResult:
    """Alternating optimization of measurements (and state, unless ``state`` is fixed).

    ``efficiency`` optionally gives (eta, assigned outcome) per party: each
    party's measurement is then eta * M + (1 - eta) * (no-click mapped to the
    assigned outcome), and the optimal M is unchanged by that affine map.
    ``initial`` (measurements per party) replaces the random start of restart 0.
    """
    cfg = config or SeesawConfig()
    if restarts is not None:
        cfg = SeesawConfig(restarts, cfg.max_sweeps, cfg.tol, seed, cfg.jobs if jobs is None else jobs)
    else:
        cfg = SeesawConfig(cfg.restarts, cfg.max_sweeps, cfg.tol, seed, cfg.jobs if jobs is None else jobs)
    dims = tuple(int(d) for d in dims)
    if len(dims) != expr.scenario.parties or min(dims) < 2:
        raise ValueError("need one local dimension >= 2 per party")
    if cfg.restarts < 1:
        raise ValueError("restarts >= 1")
    if state is not None and state.dims != dims:
        raise ValueError("fixed state dimensions do not match dims")
    seeds = restart_seeds(seed, cfg.restarts)

    def job(i):
        start = initial if i == 0 else None
        return _one_run(expr, dims, np.random.default_rng(seeds[i]), cfg, state, efficiency, start)

    if cfg.jobs > 1:
        with ThreadPoolExecutor(cfg.jobs) as ex:
            runs = list(ex.map(job, range(len(seeds))))
    else:
        runs = [job(i) for i in range(len(seeds))]
    best = max(range(len(runs)), key=lambda i: runs[i][0])
    value, rho, meas, history, conv, raw = runs[best]
    rho = (rho + rho.conj().T) / 2
    rho = rho / np.trace(rho).real
    model = QuantumModel(DensityMatrix(dims, rho), tuple(meas))
    return SeesawResult(value, model, history, conv, [r[0] for r in runs], raw)
