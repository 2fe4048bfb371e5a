from __future__ import annotations

from typing import Callable

import numpy as np


def psd_project(M) -> np.ndarray:
    """Nearest PSD matrix in Frobenius norm (Hermitian input allowed)."""
    M = np.asarray(M)
    H = (M + M.conj().T) / 2
    try:
        w, U = np.linalg.eigh(H)
    except np.linalg.LinAlgError as e:
        raise RuntimeError(f"eigendecomposition failed: {e}") from e
    out = (U * np.clip(w, 0, None)) @ U.conj().T
    return (out + out.conj().T) / 2


def bisect(pred: Callable[[float], bool], lo: float, hi: float, tol: float = 1e-6) -> tuple[float, float]:
    """Bracket [a, b] with b - a <= tol such that pred(a) == pred(lo) != pred(b)."""
    p_lo, p_hi = bool(pred(lo)), bool(pred(hi))
    if p_lo == p_hi:
        raise ValueError("predicate takes the same value at both ends")
    a, b = float(lo), float(hi)
    while b - a > tol:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        if bool(pred(mid)) == p_lo:
            a = mid
        else:
            b = mid
    return a, b
