"""GHZ and Hardy arguments, CHSH monogamy."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from ..core import evaluate, mermin
from .measurements import X, Y, QuantumModel, born_behavior, observable_projectors, qubit_measurement
from .states import DensityMatrix, ghz, hardy_amplitudes, hardy_state, maximally_mixed, pure

# (settings, expected product) with input 0 = sigma_x, input 1 = sigma_y
GHZ_RELATIONS = (((0, 0, 0), 1.0), ((0, 1, 1), -1.0), ((1, 0, 1), -1.0), ((1, 1, 0), -1.0))


def ghz_model(visibility: float = 1.0) -> QuantumModel:
    rho = ghz(3).mix(maximally_mixed((2, 2, 2)), visibility)
    xy = [observable_projectors(X), observable_projectors(Y)]
    return QuantumModel(rho, (xy, xy, xy))


@dataclass
class GhzReport:
    expectations: np.ndarray   # <A B C> for the four relations
    residuals: np.ndarray      # expectation - predicted value
    mermin: float              # oriented to match the relation signs (Charlie's outcomes flipped)


def ghz_paradox_check(m: QuantumModel) -> GhzReport:
    sc = m.scenario
    if sc.parties != 3 or sc.inputs != (2, 2, 2) or sc.outputs != (2, 2, 2) or m.state.dims != (2, 2, 2):
        raise ValueError("GHZ check needs three qubits with two binary settings each")
    b = born_behavior(m)
    t = b.tensor
    sgn = np.array([1.0, -1.0])
    E = np.einsum("xyzabc,a,b,c->xyz", t, sgn, sgn, sgn)
    ex = np.array([E[s] for s, _ in GHZ_RELATIONS])
    pred = np.array([v for _, v in GHZ_RELATIONS])
    return GhzReport(ex, ex - pred, -evaluate(mermin(), b))


# ----------------------------------------------------------------------------
# Hardy

def hardy_model(theta: float) -> QuantumModel:
    """Both parties: input 0 measures {|1>, |0>}, input 1 measures {|phi_perp>, |phi>}.

    Outcome 0 is the one called "+1" in the three zero relations; with this
    labeling the printed state and relations are mutually consistent.
    """
    c, s = np.cos(theta), np.sin(theta)
    one = np.array([[0, 0], [0, 1]], dtype=complex)
    perp = np.outer([-s, c], [-s, c]).astype(complex)
    meas = [np.array([one, np.eye(2) - one]), np.array([perp, np.eye(2) - perp])]
    return QuantumModel(hardy_state(theta), (meas, meas))


@dataclass
class HardyReport:
    residuals: np.ndarray   # p(0,0|0,0), p(0,1|1,0), p(1,0|0,1)
    p_hardy: float          # Born-rule p(0,0|1,1)
    p_closed_form: float    # beta^2 sin^4 theta
    p_printed: float        # 2 beta sin^2 theta, kept for the record


def hardy_check(theta: float) -> HardyReport:
    if not 0 < theta < np.pi / 2:
        raise ValueError("degenerate theta: need 0 < theta < pi/2")
    alpha, beta = hardy_amplitudes(theta)
    t = born_behavior(hardy_model(theta)).tensor
    res = np.array([t[0, 0, 0, 0], t[1, 0, 0, 1], t[0, 1, 1, 0]])
    s2 = np.sin(theta) ** 2
    return HardyReport(res, float(t[1, 1, 0, 0]), float(beta ** 2 * s2 ** 2), float(2 * beta * s2))


def hardy_optimum(tol: float = 1e-10) -> tuple[float, float]:
    """Golden-section search over theta of the Born-rule Hardy probability."""
    r = minimize_scalar(lambda th: -hardy_check(th).p_hardy, bracket=(0.3, 0.8, 1.3), method="golden",
                        tol=tol)
    return float(r.x), float(-r.fun)


# ----------------------------------------------------------------------------
# monogamy

def _chsh_value(rho: np.ndarray, A, B, C_slot: int) -> float:
    """CHSH between Alice and party C_slot (1 = Bob, 2 = Charlie) on a 3-qubit state."""
    I = np.eye(2)
    val = 0.0
    for x in range(2):
        for y in range(2):
            sgn = -1.0 if x == y == 1 else 1.0
            op = np.kron(np.kron(A[x], B[y]), I) if C_slot == 1 else np.kron(np.kron(A[x], I), B[y])
            val += sgn * np.trace(rho @ op).real
    return float(val)


def monogamy_chsh(rho: DensityMatrix, A, B, C) -> tuple[float, float, float]:
    """(<B_AB>, <B_AC>, <B_AB>^2 + <B_AC>^2) for +/-1 observables A[x], B[y], C[z]."""
    if rho.dims != (2, 2, 2):
        raise ValueError("three qubits required")
    for O in list(A) + list(B) + list(C):
        O = np.asarray(O)
        if O.shape != (2, 2) or np.abs(O @ O - np.eye(2)).max() > 1e-9 or np.abs(O - O.conj().T).max() > 1e-9:
            raise ValueError("observables must be 2x2 Hermitian with eigenvalues +/-1")
    ab = _chsh_value(rho.rho, A, B, 1)
    ac = _chsh_value(rho.rho, A, C, 2)
    return ab, ac, ab ** 2 + ac ** 2


def random_observable(rng) -> np.ndarray:
    n = rng.normal(size=3)
    n /= np.linalg.norm(n)
    P = qubit_measurement(n)
    return P[0] - P[1]
