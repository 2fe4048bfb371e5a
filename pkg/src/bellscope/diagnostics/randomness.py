"""Device-independent guessing-probability bounds and a few closed-form figures of merit."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TSIRELSON = 2 * np.sqrt(2)


@dataclass(frozen=True)
class RandomnessBound:
    S: float
    p_guess: float
    h_min: float
    model: str   # "quantum" | "no-signaling" | "chained"

    def to_json(self) -> dict:
        return {"S": self.S, "p_guess": self.p_guess, "h_min": self.h_min, "model": self.model}


def guessing_bound_quantum(S: float) -> float:
    """1/2 (1 + sqrt(2 - S^2/4)); 1 for S <= 2."""
    if S > TSIRELSON + 1e-9:
        raise ValueError(f"S = {S} exceeds the Tsirelson bound")
    if S <= 2:
        return 1.0
    return 0.5 * (1 + np.sqrt(max(2 - S * S / 4, 0.0)))


def guessing_bound_ns(S: float) -> float:
    if S > 4 + 1e-12:
        raise ValueError(f"S = {S} exceeds the algebraic maximum 4")
    return float(min(1.0, 1.5 - S / 4))


def guessing_bound_chained(d: int, m: int, s_chained: float) -> float:
    """1/d + (d/4) S for the d-output m-input chained expression in its bracket form."""
    if s_chained < 0:
        raise ValueError("chained value must be nonnegative")
    if d < 2 or m < 2:
        raise ValueError("need d >= 2 and m >= 2")
    return 1 / d + d / 4 * s_chained


def min_entropy(p_guess: float) -> float:
    if p_guess <= 0:
        raise ValueError("guessing probability must be positive")
    return float(max(-np.log2(p_guess), 0.0))


def chsh_global_minentropy_max() -> RandomnessBound:
    """Two-party outcome randomness at the Tsirelson point: p_guess = 1/4 + sqrt(2)/8."""
    p = 0.25 + np.sqrt(2) / 8
    return RandomnessBound(TSIRELSON, p, min_entropy(p), "quantum")


def randomness_bound(S: float, model: str = "quantum") -> RandomnessBound:
    if model == "quantum":
        p = guessing_bound_quantum(S)
    elif model in ("ns", "no-signaling"):
        p, model = guessing_bound_ns(S), "no-signaling"
    else:
        raise ValueError(f"unknown adversary model {model!r}")
    return RandomnessBound(float(S), float(p), min_entropy(p), model)


def gill_bound(N: int, eps: float) -> float:
    """Probability that N rounds of a local model show a CHSH excess eps: 8 exp(-4N (eps/16)^2)."""
    if N < 1:
        raise ValueError("N must be positive")
    return float(8 * np.exp(-4 * N * (eps / 16) ** 2))


def teleport_fidelity_bound(S: float) -> float:
    if not 0 <= S <= TSIRELSON + 1e-9:
        raise ValueError("S must lie in [0, 2 sqrt 2]")
    return 0.5 * (1 + S * S / 12)
