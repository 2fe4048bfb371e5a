"""Classical and PR-box models: Werner's local model, detection faking, PR-box protocols, EPR2 local content."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import config
from .core import BellExpression, Behavior, Scenario, evaluate, no_signaling_residual
from .optim import LpProblem, lp_solve
from .polytopes import local_vertex_matrix


def _unit(v, name="direction") -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (3,) or abs(np.linalg.norm(v) - 1) > 1e-12:
        raise ValueError(f"{name} must be a unit 3-vector")
    return v


@dataclass
class SimulationReport:
    N: int
    frequencies: np.ndarray
    target: np.ndarray
    max_deviation: float
    stderr: np.ndarray
    seed: int | None
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        dev = np.abs(self.frequencies - self.target)
        return bool(np.all(dev <= 5 * self.stderr + 1e-15))

    def to_json(self) -> dict:
        return {"N": self.N, "seed": self.seed, "passed": self.passed,
                "max_deviation": self.max_deviation,
                "frequencies": np.asarray(self.frequencies).tolist(),
                "target": np.asarray(self.target).tolist(),
                "stderr": np.asarray(self.stderr).tolist(), **self.extra}


def _report(N, freq, target, seed, **extra) -> SimulationReport:
    freq = np.asarray(freq, dtype=float)
    target = np.asarray(target, dtype=float)
    N_arr = np.broadcast_to(np.asarray(N, dtype=float), target.shape)
    se = np.sqrt(target * (1 - target) / np.maximum(N_arr, 1))
    return SimulationReport(int(np.sum(N) if np.ndim(N) else N), freq, target,
                            float(np.abs(freq - target).max()), se, seed, extra)


# ----------------------------------------------------------------------------
# Werner's local model for the p = 1/2 two-qubit Werner state

@dataclass(frozen=True)
class LhvSample:
    lam: np.ndarray
    a: int
    b: int

    def __post_init__(self):
        if abs(np.linalg.norm(self.lam) - 1) > 1e-12:
            raise ValueError("hidden variable must be a unit vector")


def sphere_points(rng, n: int) -> np.ndarray:
    g = rng.normal(size=(n, 3))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _outputs(nA, nB, lam, u):
    # Alice: 0 with probability cos^2(angle/2) = (1 + nA.lam)/2; Bob: 0 iff nB.lam < 0 (tie -> 1)
    a = (u >= (1 + lam @ nA) / 2).astype(int)
    b = (lam @ nB >= 0).astype(int)
    return a, b


def werner_lhv_sample(nA, nB, rng) -> LhvSample:
    nA, nB = _unit(nA, "nA"), _unit(nB, "nB")
    lam = sphere_points(rng, 1)
    a, b = _outputs(nA, nB, lam, rng.random(1))
    return LhvSample(lam[0], int(a[0]), int(b[0]))


def werner_half_table(nA, nB) -> np.ndarray:
    """Singlet-based Werner state at p = 1/2: p(ab) = (1 - (-1)^(a+b) cos(alpha)/2)/4."""
    c = float(np.dot(nA, nB))
    same = 0.25 * (1 - 0.5 * c)
    diff = 0.25 * (1 + 0.5 * c)
    return np.array([same, diff, diff, same])


def werner_lhv_estimate(directions, N: int, seed: int = 0) -> SimulationReport:
    """Empirical (a,b) tables for each direction pair, against the p = 1/2 Werner prediction."""
    pairs = [(_unit(a, "nA"), _unit(b, "nB")) for a, b in directions]
    rng = np.random.default_rng(seed)
    freq, target = [], []
    for nA, nB in pairs:
        lam = sphere_points(rng, N)
        a, b = _outputs(nA, nB, lam, rng.random(N))
        freq.append(np.bincount(2 * a + b, minlength=4) / N)
        target.append(werner_half_table(nA, nB))
    return _report(N, np.array(freq), np.array(target), seed)


def direction_grid(k: int = 12) -> list:
    """k direction pairs spread over relative angles in [0, pi]."""
    out = []
    for i in range(k):
        alpha = np.pi * i / (k - 1)
        phi = 2 * np.pi * i / k
        nA = np.array([0.0, 0.0, 1.0])
        nB = np.array([np.sin(alpha) * np.cos(phi), np.sin(alpha) * np.sin(phi), np.cos(alpha)])
        R = _rotation(0.3 * i)
        out.append((R @ nA, R @ nB))
    return out


def _rotation(t: float) -> np.ndarray:
    c, s = np.cos(t), np.sin(t)
    Rz = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])
    Rx = np.array([[1, 0, 0], [0, c, -s], [0, s, c]])
    return Rz @ Rx


# ----------------------------------------------------------------------------
# PR boxes

class PrBox:
    """Stateless PR-box oracle with a usage transcript; a is uniform, b = a xor xy."""

    def __init__(self, rng=None):
        self.rng = rng if rng is not None else np.random.default_rng()
        self.transcript: list[tuple[int, int, int, int]] = []

    def use(self, x: int, y: int, a: int | None = None) -> tuple[int, int]:
        if a is None:
            a = int(self.rng.integers(2))
        b = a ^ (x & y)
        assert (a ^ b) == (x & y)
        self.transcript.append((x, y, a, b))
        return a, b


def _bits(v) -> list[int]:
    out = [int(t) for t in v]
    if any(t not in (0, 1) for t in out):
        raise ValueError("inputs must be bits")
    return out


def vandam_inner_product(x, y, rng=None, box_bits=None) -> tuple[int, dict]:
    """Bob computes x.y mod 2 from n PR boxes and one bit from Alice."""
    x, y = _bits(x), _bits(y)
    if len(x) != len(y):
        raise ValueError("x and y must have equal length")
    box = PrBox(rng)
    a_bits, b_bits = [], []
    for i, (xi, yi) in enumerate(zip(x, y)):
        a, b = box.use(xi, yi, None if box_bits is None else int(box_bits[i]))
        a_bits.append(a)
        b_bits.append(b)
    c = int(np.bitwise_xor.reduce(a_bits)) if a_bits else 0
    out = c ^ (int(np.bitwise_xor.reduce(b_bits)) if b_bits else 0)
    return out, {"message": [c], "boxes": box.transcript}


def info_causality_retrieval(x0: int, x1: int, k: int, rng=None, box_bit=None) -> tuple[int, dict]:
    x0, x1, k = _bits((x0, x1, k))
    box = PrBox(rng)
    a, b = box.use(x0 ^ x1, k, box_bit)
    m = a ^ x0
    return b ^ m, {"message": [m], "boxes": box.transcript}


# ----------------------------------------------------------------------------
# detection-loophole faking; outcome 2 denotes "no click"

def detection_faking_run(N: int, seed: int = 0, symmetrized: bool = False) -> dict:
    rng = np.random.default_rng(seed)
    x = rng.integers(2, size=N)
    y = rng.integers(2, size=N)
    a = np.full(N, 2)
    b = np.full(N, 2)
    if symmetrized:
        mode = rng.choice(3, size=N, p=[4 / 9, 4 / 9, 1 / 9])   # Alice guesses, Bob guesses, neither clicks
    else:
        mode = np.zeros(N, dtype=int)
    guess = rng.integers(2, size=N)
    bit = rng.integers(2, size=N)
    m0 = mode == 0
    # source predicted Alice's input: Bob answers consistently with a PR box, Alice clicks only if right
    a0, b0 = bit, bit ^ (guess & y)
    a[m0] = np.where(x == guess, a0, 2)[m0]
    b[m0] = b0[m0]
    m1 = mode == 1
    b1, a1 = bit, bit ^ (x & guess)
    b[m1] = np.where(y == guess, b1, 2)[m1]
    a[m1] = a1[m1]
    both = (a < 2) & (b < 2)
    counts = np.zeros((2, 2, 2, 2))
    np.add.at(counts, (x[both], y[both], a[both], b[both]), 1)
    n_xy = counts.sum(axis=(2, 3))
    cond = counts / np.maximum(n_xy[:, :, None, None], 1)
    sc = Scenario.homogeneous(2, 2, 2)
    beh = Behavior.from_tensor(sc, cond)
    target = np.zeros((2, 2, 2, 2))
    for xx in range(2):
        for yy in range(2):
            for aa in range(2):
                target[xx, yy, aa, aa ^ (xx & yy)] = 0.5
    rep = _report(np.repeat(n_xy.reshape(-1), 4).reshape(target.shape).reshape(-1),
                  cond.reshape(-1), target.reshape(-1), seed)
    rate_a = float(np.mean(a < 2))
    rate_b = float(np.mean(b < 2))
    exp_rates = (2 / 3, 2 / 3) if symmetrized else (0.5, 1.0)
    se_rates = tuple(np.sqrt(r * (1 - r) / N) for r in exp_rates)
    sgn = np.array([1.0, -1.0])
    E = np.einsum("xyab,a,b->xy", cond, sgn, sgn)
    chsh_value = float(E[0, 0] + E[0, 1] + E[1, 0] - E[1, 1])
    return {"behavior": beh, "report": rep, "click_rates": (rate_a, rate_b),
            "expected_rates": exp_rates, "rate_stderr": se_rates, "chsh": chsh_value,
            "both_click": float(np.mean(both)), "N": N, "seed": seed}


# ----------------------------------------------------------------------------
# EPR2 local content

def epr2_local_content(b: Behavior, tol=None, max_vertices: int = 100000) -> float:
    """max sum c_l with c_l >= 0 and p - sum c_l d_l >= 0 entrywise.

    For an NS behavior the residual automatically satisfies the no-signaling equalities and has
    mass (1 - sum c_l) per input setting, so positivity is the only active constraint.
    """
    tol = tol or config.resolve()
    if no_signaling_residual(b) > tol.ns:
        raise ValueError("EPR2 decomposition needs a no-signaling behavior")
    V, _ = local_vertex_matrix(b.scenario)
    if V.shape[0] > max_vertices:
        raise ValueError(f"{V.shape[0]} local vertices exceed the cap {max_vertices}")
    k = V.shape[0]
    sol = lp_solve(LpProblem(np.ones(k), V.T, np.asarray(b.table, float), ["<="] * V.shape[1], maximize=True),
                   tol)
    if sol.status != "optimal":
        raise RuntimeError(f"EPR2 LP {sol.status}")
    return float(min(max(sol.objective, 0.0), 1.0))


def epr2_upper_from_inequality(b: Behavior, expr: BellExpression) -> float:
    """(S_ns - Q)/(S_ns - S_l), clamped to [0, 1]."""
    sl, sns = expr.bound("local"), expr.bound("ns")
    if sl is None or sns is None or sns <= sl:
        raise ValueError("expression needs local and no-signaling bounds with S_ns > S_l")
    q = evaluate(expr, b)
    return float(min(1.0, max(0.0, (sns - q) / (sns - sl))))
