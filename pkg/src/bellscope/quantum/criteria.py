from __future__ import annotations

import numpy as np

from .measurements import PAULI
from .states import DensityMatrix


def correlation_tensor(rho: DensityMatrix) -> np.ndarray:
    """T_ij = tr[rho (sigma_i x sigma_j)]."""
    if rho.dims != (2, 2):
        raise ValueError("two-qubit state required")
    return np.array([[np.trace(rho.rho @ np.kron(si, sj)).real for sj in PAULI] for si in PAULI])


def chsh_horodecki(rho: DensityMatrix) -> float:
    """Maximal CHSH value 2 sqrt(m11 + m22), the two largest eigenvalues of T T^t."""
    T = correlation_tensor(rho)
    ev = np.sort(np.linalg.eigvalsh(T @ T.T))[::-1]
    return float(2 * np.sqrt(max(ev[0] + ev[1], 0.0)))


def local_filter(rho: DensityMatrix, FA, FB) -> tuple[DensityMatrix, float]:
    """Post-selected state (FA x FB) rho (FA x FB)^dag / p and its success probability p."""
    FA = np.asarray(FA, dtype=complex)
    FB = np.asarray(FB, dtype=complex)
    for F in (FA, FB):
        if np.linalg.norm(F, 2) > 1 + 1e-12:
            raise ValueError("filters must have operator norm at most 1")
    F = np.kron(FA, FB)
    out = F @ rho.rho @ F.conj().T
    p = float(np.trace(out).real)
    if p <= 1e-15:
        raise ValueError("filter has zero success probability")
    return DensityMatrix(rho.dims, out / p), p


def schmidt_filter(theta: float) -> tuple[np.ndarray, np.ndarray]:
    """Alice's filter turning cos|00> + sin|11> (theta < pi/4) into the maximally entangled state."""
    c, s = np.cos(theta), np.sin(theta)
    if not 0 < theta <= np.pi / 4:
        raise ValueError("theta must lie in (0, pi/4]")
    return np.diag([s / c, 1.0]), np.eye(2)
