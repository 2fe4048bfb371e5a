"""Elementary maps on behaviors and expressions."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import prod

import numpy as np

from .. import config
from .types import BellExpression, Behavior, Correlators, Game, Scenario


@dataclass(frozen=True)
class ValidationReport:
    positivity: float     # max(0, -min entry)
    normalization: float  # max |sum over outputs - 1|
    ok: bool


def validate_behavior(b: Behavior, tol: config.Tolerances | None = None) -> ValidationReport:
    tol = tol or config.resolve()
    sc = b.scenario
    t = b.table.reshape(prod(sc.inputs), prod(sc.outputs))
    pos = max(0.0, -float(t.min()))
    norm = float(np.abs(t.sum(axis=1) - 1).max())
    return ValidationReport(pos, norm, pos <= tol.pos and norm <= tol.norm)


def no_signaling_residual(b: Behavior) -> float:
    """Largest change of any party-complement marginal when that party's input varies."""
    sc = b.scenario
    n = sc.parties
    t = b.tensor
    worst = 0.0
    for k in range(n):
        if sc.inputs[k] == 1:
            continue
        m = t.sum(axis=n + k)  # marginalize party k's output
        diff = m - np.take(m, [0], axis=k)
        worst = max(worst, float(np.abs(diff).max()))
    return worst


# ----------------------------------------------------------------------------
# Collins-Gisin coordinates

def cg_dimension(sc: Scenario) -> int:
    return prod(1 + m * (d - 1) for m, d in zip(sc.inputs, sc.outputs)) - 1


def _party_maps(m: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Local extraction E (CG <- full) and reconstruction M (full <- CG) for one party.

    Local CG basis: 0 means "marginalized", 1 + x(d-1) + a is p(a|x) for a < d-1.
    Full local index is x*d + a.
    """
    k = 1 + m * (d - 1)
    E = np.zeros((k, m * d))
    M = np.zeros((m * d, k))
    E[0, 0:d] = 1.0  # marginal taken at x = 0
    for x in range(m):
        for a in range(d - 1):
            j = 1 + x * (d - 1) + a
            E[j, x * d + a] = 1.0
            M[x * d + a, j] = 1.0
        M[x * d + d - 1, 0] = 1.0
        M[x * d + d - 1, 1 + x * (d - 1):1 + (x + 1) * (d - 1)] = -1.0
    return E, M


def _grouped_perm(sc: Scenario) -> np.ndarray:
    """perm[c] = flat table index of the party-grouped position c."""
    n = sc.parties
    idx = np.arange(sc.size).reshape(sc.shape)
    order = [ax for k in range(n) for ax in (k, n + k)]
    return idx.transpose(order).reshape(-1)


@lru_cache(maxsize=64)
def _cg_mats(sc: Scenario) -> tuple[np.ndarray, np.ndarray, tuple]:
    E = np.ones((1, 1))
    M = np.ones((1, 1))
    for m, d in zip(sc.inputs, sc.outputs):
        Ek, Mk = _party_maps(m, d)
        E = np.kron(E, Ek)
        M = np.kron(M, Mk)
    perm = _grouped_perm(sc)
    E_t = np.zeros_like(E)
    E_t[:, perm] = E
    M_t = np.zeros_like(M)
    M_t[perm, :] = M
    # order CG labels by support size, then support, then lexicographically
    local = [1 + m * (d - 1) for m, d in zip(sc.inputs, sc.outputs)]
    labels = list(product(*[range(k) for k in local]))
    key = lambda j: (sum(v > 0 for v in j), tuple(i for i, v in enumerate(j) if v > 0), j)
    order = sorted(range(len(labels)), key=lambda i: key(labels[i]))
    E_t = E_t[order]
    M_t = M_t[:, order]
    E_t.setflags(write=False)
    M_t.setflags(write=False)
    return E_t, M_t, tuple(labels[i] for i in order)


def cg_matrices(sc: Scenario) -> tuple[np.ndarray, np.ndarray]:
    """(E, M) with cg = E @ table and table = M @ cg for NS tables.

    Row 0 of E / column 0 of M is the constant coordinate (always 1).
    """
    E, M, _ = _cg_mats(sc)
    return E, M


def cg_labels(sc: Scenario) -> tuple:
    return _cg_mats(sc)[2][1:]


def to_collins_gisin(b: Behavior, tol: config.Tolerances | None = None) -> np.ndarray:
    tol = tol or config.resolve()
    r = no_signaling_residual(b)
    if r > tol.ns:
        raise ValueError(f"behavior is signaling (residual {r:.3g}); no Collins-Gisin coordinates")
    E, _ = cg_matrices(b.scenario)
    return E[1:] @ b.table


def from_collins_gisin(sc: Scenario, vec) -> Behavior:
    vec = np.asarray(vec, dtype=float)
    if vec.size != cg_dimension(sc):
        raise ValueError(f"expected {cg_dimension(sc)} coordinates, got {vec.size}")
    _, M = cg_matrices(sc)
    return Behavior(sc, M[:, 0] + M[:, 1:] @ vec)


# ----------------------------------------------------------------------------
# correlators (binary outputs, 0 -> +1, 1 -> -1)

def _require_binary(sc: Scenario):
    if any(d != 2 for d in sc.outputs):
        raise ValueError("correlators need binary outputs")


def correlators_of(b: Behavior) -> Correlators:
    sc = b.scenario
    _require_binary(sc)
    if sc.parties != 2:
        raise ValueError("correlators_of is bipartite; use full_correlator for n parties")
    t = b.tensor
    sgn = np.array([1.0, -1.0])
    A = np.einsum("xab,a->x", t[:, 0], sgn)
    B = np.einsum("yab,b->y", t[0], sgn)
    AB = np.einsum("xyab,a,b->xy", t, sgn, sgn)
    return Correlators(np.clip(A, -1, 1), np.clip(B, -1, 1), np.clip(AB, -1, 1))


def from_correlators(c: Correlators) -> Behavior:
    mA, mB = c.AB.shape
    sc = Scenario(2, (mA, mB), (2, 2))
    sgn = np.array([1.0, -1.0])
    t = (1 + sgn[None, None, :, None] * c.A[:, None, None, None]
         + sgn[None, None, None, :] * c.B[None, :, None, None]
         + np.multiply.outer(c.AB, np.outer(sgn, sgn))) / 4
    return Behavior.from_tensor(sc, t)


def full_correlator(b: Behavior) -> np.ndarray:
    """<prod_k A^(k)_{x_k}> for every joint input, binary outputs."""
    sc = b.scenario
    _require_binary(sc)
    sign = parity_tensor(sc.parties)
    n = sc.parties
    return np.tensordot(b.tensor, sign, axes=(list(range(n, 2 * n)), list(range(n))))


def parity_tensor(n: int) -> np.ndarray:
    """prod_k (-1)^{a_k} as an array of shape (2,)*n."""
    s = np.array([1.0, -1.0])
    out = np.ones(())
    for _ in range(n):
        out = np.multiply.outer(out, s)
    return out


def correlator_term(sc: Scenario, settings: dict[int, int], coeff: float = 1.0) -> np.ndarray:
    """Coefficient tensor of coeff * <prod_{k in settings} A^(k)_{settings[k]}>.

    Parties outside ``settings`` are marginalized at input 0.
    """
    _require_binary(sc)
    n = sc.parties
    t = np.zeros(sc.shape)
    x = tuple(settings.get(k, 0) for k in range(n))
    s = np.array([1.0, -1.0])
    block = np.ones(())
    for k in range(n):
        block = np.multiply.outer(block, s if k in settings else np.ones(2))
    t[x] = coeff * block
    return t


# ----------------------------------------------------------------------------
# evaluation, games, lifting

def evaluate(expr: BellExpression, b: Behavior) -> float:
    if expr.scenario != b.scenario:
        raise ValueError(f"scenario mismatch: {expr.scenario} vs {b.scenario}")
    return float(expr.coefficients @ b.table)


def game_to_expression(g: Game) -> BellExpression:
    n = g.scenario.parties
    pi = g.pi.reshape(g.pi.shape + (1,) * n)
    return BellExpression.from_tensor(g.scenario, pi * g.predicate, name="game")


def winning_probability(g: Game, b: Behavior) -> float:
    return evaluate(game_to_expression(g), b)


def xor_game(pi, f) -> Game:
    """Two-party binary game won iff a xor b == f[x, y]."""
    f = np.asarray(f, dtype=int)
    mA, mB = f.shape
    sc = Scenario(2, (mA, mB), (2, 2))
    V = np.zeros(sc.shape)
    for x, y, a, b in product(range(mA), range(mB), range(2), range(2)):
        V[x, y, a, b] = float((a ^ b) == f[x, y])
    return Game(sc, pi, V)


def chsh_game() -> Game:
    return xor_game(np.full((2, 2), 0.25), [[0, 0], [0, 1]])


def lift_merge_outcome(expr: BellExpression, party: int, source: int, sink: int) -> BellExpression:
    """Give outcome ``source`` of ``party`` the coefficients of outcome ``sink``.

    If ``source`` equals the current number of outcomes the party gains a new
    outcome (e.g. a no-click event) that the expression treats as ``sink``.
    """
    sc = expr.scenario
    if not 0 <= party < sc.parties:
        raise ValueError("invalid party")
    d = sc.outputs[party]
    if not (0 <= sink < d and 0 <= source <= d) or source == sink:
        raise ValueError("invalid outcome indices")
    axis = sc.parties + party
    t = expr.tensor
    if source == d:
        outs = list(sc.outputs)
        outs[party] = d + 1
        sc = Scenario(sc.parties, sc.inputs, tuple(outs))
        t = np.concatenate([t, np.take(t, [sink], axis=axis)], axis=axis)
    else:
        t = t.copy()
        idx = [slice(None)] * t.ndim
        idx[axis] = source
        src = [slice(None)] * t.ndim
        src[axis] = sink
        t[tuple(idx)] = t[tuple(src)]
    return BellExpression.from_tensor(sc, t, name=f"lift({expr.name})", negated=expr.negated)


# ----------------------------------------------------------------------------
# standard behaviors

def uniform_behavior(sc: Scenario) -> Behavior:
    return Behavior(sc, np.full(sc.size, 1.0 / prod(sc.outputs)))


def deterministic_behavior(sc: Scenario, strategy) -> Behavior:
    """strategy[k][x] is party k's output on input x."""
    n = sc.parties
    t = np.zeros(sc.shape)
    for xs in product(*[range(m) for m in sc.inputs]):
        t[xs + tuple(strategy[k][xs[k]] for k in range(n))] = 1.0
    return Behavior.from_tensor(sc, t)


def product_behavior(locals_) -> Behavior:
    """Product of single-party tables, each of shape (m_k, d_k)."""
    locals_ = [np.asarray(p, dtype=float) for p in locals_]
    sc = Scenario(len(locals_), tuple(p.shape[0] for p in locals_), tuple(p.shape[1] for p in locals_))
    t = np.ones(())
    for p in locals_:
        t = np.multiply.outer(t, p)
    n = sc.parties
    order = [2 * k for k in range(n)] + [2 * k + 1 for k in range(n)]
    return Behavior.from_tensor(sc, t.transpose(order))


def pr_box(alpha: int = 0, beta: int = 0, gamma: int = 0) -> Behavior:
    """p(ab|xy) = 1/2 if a xor b = xy xor alpha x xor beta y xor gamma."""
    sc = Scenario(2, (2, 2), (2, 2))
    t = np.zeros(sc.shape)
    for x, y, a, b in product(range(2), repeat=4):
        if (a ^ b) == ((x & y) ^ (alpha & x) ^ (beta & y) ^ gamma):
            t[x, y, a, b] = 0.5
    return Behavior.from_tensor(sc, t)


def random_ns_behavior(sc: Scenario, rng) -> Behavior:
    """Random product behavior; in the (2,2,2) case mixed with one random PR box at a uniform weight."""
    locs = [rng.dirichlet(np.ones(d), size=m) for m, d in zip(sc.inputs, sc.outputs)]
    p = product_behavior(locs)
    if sc == Scenario(2, (2, 2), (2, 2)):
        w = rng.uniform()
        al, be, ga = rng.integers(0, 2, size=3)
        return Behavior(sc, (1 - w) * p.table + w * pr_box(int(al), int(be), int(ga)).table)
    return p
