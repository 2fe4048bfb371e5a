"""Density matrices and the standard families used throughout."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Mapping

import numpy as np


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    dims: tuple[int, ...]
    rho: np.ndarray
    meta: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        D = prod(dims)
        rho = np.array(self.rho, dtype=complex)
        if rho.shape != (D, D):
            raise ValueError(f"rho has shape {rho.shape}, dims {dims} need {(D, D)}")
        herm = np.abs(rho - rho.conj().T).max()
        if herm > 1e-10:
            raise ValueError(f"rho is not Hermitian (residual {herm:.2e})")
        rho = (rho + rho.conj().T) / 2
        tr = np.trace(rho).real
        if abs(tr - 1) > 1e-10:
            raise ValueError(f"trace is {tr}")
        lam = np.linalg.eigvalsh(rho).min()
        if lam < -1e-9:
            raise ValueError(f"rho has negative eigenvalue {lam:.2e}")
        rho.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "rho", rho)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    def mix(self, other: "DensityMatrix", w: float) -> "DensityMatrix":
        return DensityMatrix(self.dims, w * self.rho + (1 - w) * other.rho)


def pure(psi, dims) -> DensityMatrix:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(dims, np.outer(psi, psi.conj()))


def maximally_mixed(dims) -> DensityMatrix:
    D = prod(dims)
    return DensityMatrix(dims, np.eye(D) / D)


def _check_p(p):
    if not 0 <= p <= 1:
        raise ValueError("mixing parameter p must lie in [0, 1]")


def max_entangled(d: int = 2) -> np.ndarray:
    """|Phi+> = sum_j |jj> / sqrt(d)."""
    v = np.zeros(d * d, dtype=complex)
    v[np.arange(d) * (d + 1)] = 1 / np.sqrt(d)
    return v


def singlet() -> DensityMatrix:
    psi = np.array([0, 1, -1, 0]) / np.sqrt(2)
    return pure(psi, (2, 2))


def werner_2q(p: float) -> DensityMatrix:
    """p |phi+><phi+| + (1 - p) I/4."""
    _check_p(p)
    phi = max_entangled(2)
    rho = p * np.outer(phi, phi.conj()) + (1 - p) * np.eye(4) / 4
    return DensityMatrix((2, 2), rho, {
        "chsh_violation_above": 1 / np.sqrt(2),
        "local_projective_below": 0.5,
        "separable_below": 1 / 3,
    })


def antisymmetric_projector(d: int) -> np.ndarray:
    swap = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            swap[i * d + j, j * d + i] = 1.0
    return (np.eye(d * d) - swap) / 2


def werner_d(p: float, d: int) -> DensityMatrix:
    """p * 2 P_anti / (d(d-1)) + (1 - p) I/d^2."""
    _check_p(p)
    if d < 2:
        raise ValueError("d >= 2")
    rho = p * 2 * antisymmetric_projector(d) / (d * (d - 1)) + (1 - p) * np.eye(d * d) / d ** 2
    return DensityMatrix((d, d), rho, werner_table(d))


def isotropic(p: float, d: int) -> DensityMatrix:
    """p |Phi+><Phi+| + (1 - p) I/d^2."""
    _check_p(p)
    if d < 2:
        raise ValueError("d >= 2")
    phi = max_entangled(d)
    rho = p * np.outer(phi, phi.conj()) + (1 - p) * np.eye(d * d) / d ** 2
    return DensityMatrix((d, d), rho, isotropic_table(d))


def _general_local(d: int) -> float:
    return (d - 1) ** (d - 1) * (3 * d - 1) / ((d + 1) * d ** d)


def werner_table(d: int) -> dict:
    """Separability / locality thresholds in p for Werner states.

    The separability threshold is 1/(d+1): the partial transpose of the
    antisymmetric Werner family turns negative exactly there (1/3 for qubits).
    """
    return {
        "separable_below": 1 / (d + 1),
        "local_general_below": _general_local(d),
        "local_projective_below": (d - 1) / d,
    }


def isotropic_table(d: int) -> dict:
    return {
        "separable_below": 1 / (d + 1),
        "local_general_below": _general_local(d),
        "local_projective_below": (-1 + sum(1 / k for k in range(1, d + 1))) / (d - 1),
    }


def ghz(n: int = 3, d: int = 2) -> DensityMatrix:
    psi = np.zeros(d ** n, dtype=complex)
    step = sum(d ** k for k in range(n))
    psi[np.arange(d) * step] = 1 / np.sqrt(d)
    return pure(psi, (d,) * n)


def partially_entangled(theta: float) -> DensityMatrix:
    """cos(theta)|00> + sin(theta)|11>."""
    return pure([np.cos(theta), 0, 0, np.sin(theta)], (2, 2))


def hardy_amplitudes(theta: float) -> tuple[float, float]:
    """(alpha, beta) with alpha = beta tan(theta) and 2 alpha^2 + beta^2 = 1."""
    if not 0 < theta < np.pi / 2:
        raise ValueError("theta must lie in (0, pi/2)")
    beta = 1 / np.sqrt(1 + 2 * np.tan(theta) ** 2)
    return beta * np.tan(theta), beta


def hardy_state(theta: float) -> DensityMatrix:
    """alpha(|01> + |10>) + beta|00>."""
    a, b = hardy_amplitudes(theta)
    return pure([b, a, a, 0], (2, 2))


def random_density(dims, rng, rank: int | None = None) -> DensityMatrix:
    """Induced-measure random state: G G^dagger / tr with a complex Gaussian G."""
    D = prod(dims)
    k = D if rank is None else rank
    G = rng.normal(size=(D, k)) + 1j * rng.normal(size=(D, k))
    rho = G @ G.conj().T
    return DensityMatrix(dims, rho / np.trace(rho).real)


def random_pure(dims, rng) -> DensityMatrix:
    return random_density(dims, rng, rank=1)


def partial_transpose(rho: DensityMatrix, party: int = 1) -> np.ndarray:
    dims = rho.dims
    n = len(dims)
    t = rho.rho.reshape(dims + dims)
    axes = list(range(2 * n))
    axes[party], axes[n + party] = axes[n + party], axes[party]
    return t.transpose(axes).reshape(rho.dim, rho.dim)


def reduced(rho: DensityMatrix, keep) -> np.ndarray:
    dims = rho.dims
    n = len(dims)
    keep = sorted(keep)
    t = rho.rho.reshape(dims + dims)
    letters = "abcdefghijklmnop"
    row = [letters[k] for k in range(n)]
    col = [letters[k] if k not in keep else letters[k].upper() for k in range(n)]
    out = "".join(letters[k] for k in keep) + "".join(letters[k].upper() for k in keep)
    r = np.einsum("".join(row) + "".join(col) + "->" + out, t)
    D = prod(dims[k] for k in keep)
    return r.reshape(D, D)
