"""Measurement sets, quantum models, Born-rule behaviors and Bell operators."""
from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from ..core import BellExpression, Behavior, Scenario, evaluate
from ..core.io import matrix_from_json, matrix_to_json
from .states import DensityMatrix

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (X, Y, Z)


def _as_povms(ops) -> np.ndarray:
    """Array of shape (m, d_out, D, D) from nested [input][outcome] matrices."""
    arr = np.array([[np.asarray(M, dtype=complex) for M in inp] for inp in ops])
    if arr.ndim != 4 or arr.shape[2] != arr.shape[3]:
        raise ValueError("measurements must be [input][outcome] square matrices")
    return arr


def check_measurements(M: np.ndarray, tol: float = 1e-9) -> None:
    D = M.shape[-1]
    for x in range(M.shape[0]):
        if np.abs(M[x].sum(axis=0) - np.eye(D)).max() > tol:
            raise ValueError(f"POVM for input {x} does not sum to identity")
        for a in range(M.shape[1]):
            H = M[x, a]
            if np.abs(H - H.conj().T).max() > tol:
                raise ValueError("measurement operators must be Hermitian")
            if np.linalg.eigvalsh((H + H.conj().T) / 2).min() < -tol:
                raise ValueError("measurement operators must be positive")


@dataclass(frozen=True, eq=False)
class QuantumModel:
    state: DensityMatrix
    measurements: tuple  # per party: array (m, Δ, d, d)

    def __post_init__(self):
        meas = tuple(_as_povms(M) for M in self.measurements)
        if len(meas) != len(self.state.dims):
            raise ValueError("one measurement set per party")
        for k, (M, d) in enumerate(zip(meas, self.state.dims)):
            if M.shape[-1] != d:
                raise ValueError(f"party {k}: operators are {M.shape[-1]}-dimensional, state has {d}")
            check_measurements(M)
        object.__setattr__(self, "measurements", meas)

    @property
    def scenario(self) -> Scenario:
        return Scenario(len(self.measurements), tuple(M.shape[0] for M in self.measurements),
                        tuple(M.shape[1] for M in self.measurements))


_L = "abcdefghijklmnopqrstuvwxyz"


def _born_subscripts(n: int) -> str:
    i = _L[:n]
    j = _L[n:2 * n]
    x = _L[2 * n:3 * n].upper()
    a = _L[3 * n:4 * n].upper()
    ops = ",".join(f"{x[k]}{a[k]}{j[k]}{i[k]}" for k in range(n))
    return f"{i}{j},{ops}->{x}{a}"


def born_tensor(rho: np.ndarray, dims, meas) -> np.ndarray:
    n = len(dims)
    R = rho.reshape(tuple(dims) * 2)
    t = np.einsum(_born_subscripts(n), R, *meas, optimize="greedy")
    return t.real


def born_behavior(m: QuantumModel) -> Behavior:
    t = born_tensor(m.state.rho, m.state.dims, m.measurements)
    return Behavior.from_tensor(m.scenario, t)


def bell_operator(expr: BellExpression, measurements) -> np.ndarray:
    """S = sum_{x,a} s(a|x) (tensor over parties) M_{a_k|x_k}."""
    meas = [_as_povms(M) for M in measurements]
    n = len(meas)
    sc = expr.scenario
    if tuple(M.shape[0] for M in meas) != sc.inputs or tuple(M.shape[1] for M in meas) != sc.outputs:
        raise ValueError("measurements do not match the expression's scenario")
    x = _L[:n].upper()
    a = _L[n:2 * n].upper()
    i = _L[:n]
    j = _L[n:2 * n]
    ops = ",".join(f"{x[k]}{a[k]}{i[k]}{j[k]}" for k in range(n))
    S = np.einsum(f"{x}{a},{ops}->{i}{j}", expr.tensor, *meas, optimize="greedy")
    D = prod(M.shape[-1] for M in meas)
    S = S.reshape(D, D)
    return (S + S.conj().T) / 2


def model_value(expr: BellExpression, m: QuantumModel) -> float:
    return evaluate(expr, born_behavior(m))


def operator_norm_bound(expr: BellExpression, measurements) -> float:
    return float(np.linalg.eigvalsh(bell_operator(expr, measurements)).max())


# ----------------------------------------------------------------------------
# qubit helpers

def observable_projectors(O) -> np.ndarray:
    """[P(+1), P(-1)] of a Hermitian observable; outcome 0 is the +1 eigenspace."""
    O = np.asarray(O, dtype=complex)
    w, U = np.linalg.eigh((O + O.conj().T) / 2)
    Pp = (U[:, w > 0] @ U[:, w > 0].conj().T)
    return np.array([Pp, np.eye(O.shape[0]) - Pp])


def bloch_observable(n) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    return n[0] * X + n[1] * Y + n[2] * Z


def qubit_measurement(n) -> np.ndarray:
    """Projectors (I +/- n.sigma)/2 for a unit Bloch vector n."""
    n = np.asarray(n, dtype=float)
    n = n / np.linalg.norm(n)
    O = bloch_observable(n)
    return np.array([(I2 + O) / 2, (I2 - O) / 2])


def observables_of(m: QuantumModel, party: int) -> np.ndarray:
    M = m.measurements[party]
    if M.shape[1] != 2:
        raise ValueError("observables need binary outcomes")
    return M[:, 0] - M[:, 1]


def singlet_chsh_model() -> QuantumModel:
    """Singlet with x0 = e1, x1 = e2, y0 = -(e1+e2)/sqrt2, y1 = (-e1+e2)/sqrt2 (e1 -> X, e2 -> Y)."""
    from .states import singlet
    e1, e2 = np.array([1.0, 0, 0]), np.array([0, 1.0, 0])
    A = [qubit_measurement(e1), qubit_measurement(e2)]
    B = [qubit_measurement(-(e1 + e2) / np.sqrt(2)), qubit_measurement((-e1 + e2) / np.sqrt(2))]
    return QuantumModel(singlet(), (A, B))


# ----------------------------------------------------------------------------
# JSON

def model_to_json(m: QuantumModel) -> dict:
    return {
        "dims": list(m.state.dims),
        "rho": matrix_to_json(m.state.rho),
        "measurements": [[[matrix_to_json(E) for E in inp] for inp in M] for M in m.measurements],
    }


def model_from_json(obj: dict) -> QuantumModel:
    try:
        dims = [int(d) for d in obj["dims"]]
        D = prod(dims)
        rho = matrix_from_json(obj["rho"], D)
        meas = [[[matrix_from_json(E, dims[k]) for E in inp] for inp in party]
                for k, party in enumerate(obj["measurements"])]
    except KeyError as e:
        raise ValueError(f"model file lacks field {e}") from None
    herm = np.abs(rho - rho.conj().T).max()
    rho = (rho + rho.conj().T) / 2
    meas = [[[(E + E.conj().T) / 2 for E in inp] for inp in party] for party in meas]
    model = QuantumModel(DensityMatrix(tuple(dims), rho, {"hermiticity_residual": float(herm)}), tuple(meas))
    return model
