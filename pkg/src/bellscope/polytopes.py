"""Local, no-signaling and Svetlichny-bilocal sets: vertices, bounds and membership LPs."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import prod
from typing import Iterator

import numpy as np

from . import config
from .core import (BellExpression, Behavior, Bound, Scenario, cg_matrices, deterministic_behavior,
                   no_signaling_residual, pr_box, uniform_behavior)
from .optim import LpProblem, lp_solve


@dataclass
class MembershipVerdict:
    inside: bool
    visibility: float = float("nan")      # largest v with u + v(p - u) in the set
    weights: dict | None = None            # vertex label -> convex weight, when inside
    certificate: BellExpression | None = None  # separating expression, when outside
    bound: float = float("nan")            # certificate's bound over the set
    value: float = float("nan")            # certificate evaluated on the behavior
    status: str = "optimal"
    info: dict | None = None

    @property
    def violation(self) -> float:
        return self.value - self.bound


# ----------------------------------------------------------------------------
# local deterministic strategies

def local_strategies(sc: Scenario) -> Iterator[tuple]:
    """All deterministic strategies as tuples of per-party output tuples (indexed by input)."""
    per_party = [list(product(range(d), repeat=m)) for m, d in zip(sc.inputs, sc.outputs)]
    return product(*per_party)


VERTEX_CAP = 10 ** 7


def vertex_count(sc: Scenario) -> int:
    return prod(d ** m for m, d in zip(sc.inputs, sc.outputs))


def _check_cap(sc: Scenario, cap: int | None):
    cap = VERTEX_CAP if cap is None else cap
    if vertex_count(sc) > cap:
        raise ValueError(f"{vertex_count(sc)} local vertices exceed the cap {cap}")


def local_vertices(sc: Scenario, cap: int | None = None) -> Iterator[Behavior]:
    _check_cap(sc, cap)
    for s in local_strategies(sc):
        yield deterministic_behavior(sc, s)


@lru_cache(maxsize=16)
def _vertex_matrix(sc: Scenario) -> tuple[np.ndarray, tuple]:
    """Dense (N, size) matrix of deterministic behaviors, built party by party."""
    n = sc.parties
    labels = tuple(local_strategies(sc))
    # one-hot per party: (d^m, m, d)
    onehots = []
    for m, d in zip(sc.inputs, sc.outputs):
        strat = np.array(list(product(range(d), repeat=m))).reshape(-1, m)
        oh = np.zeros((strat.shape[0], m, d))
        for x in range(m):
            oh[np.arange(strat.shape[0]), x, strat[:, x]] = 1.0
        onehots.append(oh)
    V = onehots[0]  # (s0, m0, d0)
    for k in range(1, n):
        # V: (S, m0.., d0..) grouped as (S, inputs..., outputs...)
        oh = onehots[k]
        S = V.shape[0]
        ins = V.shape[1:1 + k]
        outs = V.shape[1 + k:]
        V = np.einsum("s...,tyb->st...yb", V, oh)  # (S, t, ins..., outs..., m_k, d_k)
        V = V.reshape((S * oh.shape[0],) + ins + outs + oh.shape[1:])
        # move new input axis after old inputs
        order = [0] + list(range(1, 1 + k)) + [1 + 2 * k] + list(range(1 + k, 1 + 2 * k)) + [2 + 2 * k]
        V = V.transpose(order)
    V = np.ascontiguousarray(V.reshape(V.shape[0], -1))
    V.setflags(write=False)
    return V, labels


def local_vertex_matrix(sc: Scenario, cap: int | None = None) -> tuple[np.ndarray, tuple]:
    _check_cap(sc, cap)
    return _vertex_matrix(sc)


def local_bound(expr: BellExpression) -> float:
    return local_bound_with_strategy(expr)[0]


def local_bound_with_strategy(expr: BellExpression) -> tuple[float, tuple]:
    """Max of s.p over deterministic strategies.

    Strategies of all but the last party are enumerated; the last party's best
    response is taken input by input.
    """
    sc = expr.scenario
    _check_cap(sc, None)
    n = sc.parties
    T = expr.tensor
    best, arg = -np.inf, None
    heads = [list(product(range(d), repeat=m)) for m, d in zip(sc.inputs[:-1], sc.outputs[:-1])]
    for strat in product(*heads):
        R = T
        # contract parties 0..n-2 one at a time; R keeps axes (x_k.., x_last, a_k.., a_last)
        for k, s in enumerate(strat):
            m = sc.inputs[k]
            # leading axis is party k's input; after dropping it, its output axis is n - k - 1
            R = np.stack([np.take(R[x], s[x], axis=n - k - 1) for x in range(m)]).sum(axis=0)
        resp = R.max(axis=1)
        val = float(resp.sum())
        if val > best:
            best = val
            arg = strat + (tuple(int(a) for a in R.argmax(axis=1)),)
    return best, arg


# ----------------------------------------------------------------------------
# visibility LP shared by local and Svetlichny membership

def _visibility_lp(Vc: np.ndarray, pc: np.ndarray, uc: np.ndarray, tol: config.Tolerances):
    """max v s.t. sum_l q_l Vc_l - v (pc - uc) = uc, sum q = 1, q >= 0, 0 <= v <= 1."""
    N, t = Vc.shape
    A = np.zeros((t + 2, N + 1))
    A[:t, :N] = Vc.T
    A[:t, N] = -(pc - uc)
    A[t, :N] = 1.0
    A[t + 1, N] = 1.0
    b = np.concatenate([uc, [1.0, 1.0]])
    c = np.zeros(N + 1)
    c[N] = 1.0
    return lp_solve(LpProblem(c, A, b, ["="] * (t + 1) + ["<="]), tol)


def _normalize_certificate(s_full: np.ndarray, sc: Scenario, bound_fn, u: np.ndarray):
    """Shift by normalization so the uniform behavior scores 0, scale so the bound is 2."""
    n_joint = prod(sc.inputs)
    s = s_full - (s_full @ u) / n_joint
    bnd = bound_fn(BellExpression(sc, s))
    if bnd > 1e-12:
        s = s * (2.0 / bnd)
    return s


def _membership(b: Behavior, V: np.ndarray, labels, E: np.ndarray | None, bound_fn, tol, kind: str):
    sc = b.scenario
    u = uniform_behavior(sc).table
    if E is None:
        Vc, pc, uc = V, b.table, u
    else:
        Vc, pc, uc = V @ E.T, E @ b.table, E @ u
    sol = _visibility_lp(Vc, pc, uc, tol)
    if sol.status != "optimal":
        return MembershipVerdict(False, status=sol.status, info={"pivots": sol.pivots})
    v = float(sol.x[-1])
    info = {"pivots": sol.pivots, "residual": sol.residual, "gap": sol.gap}
    if v >= 1 - 1e-9:
        q = sol.x[:-1]
        w = {labels[i]: float(q[i]) for i in np.flatnonzero(q > 1e-12)}
        return MembershipVerdict(True, visibility=v, weights=w, info=info)
    y = sol.y[: Vc.shape[1]]
    s_c = -y
    s_full = s_c if E is None else E.T @ s_c
    s_full = _normalize_certificate(s_full, sc, bound_fn, u)
    cert = BellExpression(sc, s_full, name=f"{kind}-certificate")
    bnd = bound_fn(cert)
    cert = BellExpression(sc, s_full, name=f"{kind}-certificate", bounds={"local": Bound(bnd, "computed")}) \
        if kind == "local" else cert
    val = float(s_full @ b.table)
    info["unit_normalized_value"] = val / bnd if bnd > 0 else float("nan")  # bound rescaled to 1
    return MembershipVerdict(False, visibility=v, certificate=cert, bound=bnd, value=val, info=info)


def local_membership(b: Behavior, tol: config.Tolerances | None = None) -> MembershipVerdict:
    """Decide p in L by maximizing the visibility of p against white noise.

    Inside: convex weights over deterministic strategies. Outside: the LP dual is
    a Bell expression with s.p > S_l, normalized to S_l = 2 and s.u = 0.
    Signaling behaviors are handled in full-table coordinates.
    """
    tol = tol or config.resolve()
    sc = b.scenario
    V, labels = local_vertex_matrix(sc)
    E = cg_matrices(sc)[0][1:] if no_signaling_residual(b) <= tol.ns else None
    return _membership(b, V, labels, E, local_bound, tol, "local")


# ----------------------------------------------------------------------------
# no-signaling set

def _positivity_lp_data(sc: Scenario):
    _, M = cg_matrices(sc)
    return M[:, 0], M[:, 1:]


def ns_bound(expr: BellExpression, tol: config.Tolerances | None = None) -> float:
    """max s.p over the no-signaling polytope.

    With p = m0 + M1 g in Collins-Gisin coordinates the primal has one row per
    table entry; the dual, min m0.w s.t. M1^T (w + s) = 0, w >= 0, has only
    t rows and is what we solve.
    """
    tol = tol or config.resolve()
    sc = expr.scenario
    m0, M1 = _positivity_lp_data(sc)
    s = expr.coefficients
    sol = lp_solve(LpProblem(m0, M1.T, -M1.T @ s, ["="] * M1.shape[1], maximize=False), tol)
    if sol.status != "optimal":
        raise RuntimeError(f"NS bound LP ended with status {sol.status}")
    return float(sol.objective + s @ m0)


def ns_membership(b: Behavior, tol: config.Tolerances | None = None) -> MembershipVerdict:
    tol = tol or config.resolve()
    sc = b.scenario
    sig = no_signaling_residual(b)
    t = b.table
    if sig > tol.ns:
        # find the worst marginal mismatch and turn it into a functional that is 0 on NS
        n = sc.parties
        T = b.tensor
        best = None
        for k in range(n):
            if sc.inputs[k] == 1:
                continue
            mk = T.sum(axis=n + k)
            diff = mk - np.take(mk, [0], axis=k)
            idx = np.unravel_index(np.argmax(np.abs(diff)), diff.shape)
            if best is None or abs(diff[idx]) > best[0]:
                best = (abs(diff[idx]), k, idx, np.sign(diff[idx]))
        _, k, idx, sgn = best
        s = np.zeros(sc.shape)
        idx = list(idx)
        # expand marginal index back to the full tensor over party k's outputs
        sel = idx[:n + k] + [slice(None)] + idx[n + k:]
        s[tuple(sel)] += sgn
        sel0 = list(sel)
        sel0[k] = 0
        s[tuple(sel0)] -= sgn
        cert = BellExpression(sc, s.reshape(-1), name="signaling-witness")
        return MembershipVerdict(False, certificate=cert, bound=0.0, value=float(cert.coefficients @ t),
                                 info={"signaling": sig})
    i = int(np.argmin(t))
    if t[i] < -tol.pos:
        s = np.zeros(sc.size)
        s[i] = -1.0
        return MembershipVerdict(False, certificate=BellExpression(sc, s, name="positivity"),
                                 bound=0.0, value=float(-t[i]), info={"signaling": sig})
    return MembershipVerdict(True, visibility=1.0, info={"signaling": sig, "min_entry": float(t.min())})


def ns_vertices_222() -> list[Behavior]:
    """16 deterministic vertices followed by the 8 PR-box relabelings."""
    sc = Scenario(2, (2, 2), (2, 2))
    det = list(local_vertices(sc))
    prs = [pr_box(a, b, g) for a, b, g in product(range(2), repeat=3)]
    return det + prs


# ----------------------------------------------------------------------------
# Svetlichny hybrid model (three parties)

_BIPARTITIONS = ((0, 1, 2), (1, 2, 0), (0, 2, 1))  # (pair, pair, singleton)


@lru_cache(maxsize=4)
def _svetlichny_matrix(sc: Scenario) -> tuple[np.ndarray, tuple]:
    if sc.parties != 3:
        raise ValueError("Svetlichny model is implemented for three parties")
    rows, labels = [], []
    for i, j, k in _BIPARTITIONS:
        mi, mj, mk = sc.inputs[i], sc.inputs[j], sc.inputs[k]
        di, dj, dk = sc.outputs[i], sc.outputs[j], sc.outputs[k]
        pair_outs = list(product(range(di), range(dj)))
        for f in product(range(len(pair_outs)), repeat=mi * mj):
            for g in product(range(dk), repeat=mk):
                t = np.zeros(sc.shape)
                for xi, xj, xk in product(range(mi), range(mj), range(mk)):
                    ai, aj = pair_outs[f[xi * mj + xj]]
                    x = [0, 0, 0]
                    a = [0, 0, 0]
                    x[i], x[j], x[k] = xi, xj, xk
                    a[i], a[j], a[k] = ai, aj, g[xk]
                    t[tuple(x) + tuple(a)] = 1.0
                rows.append(t.reshape(-1))
                labels.append(((i, j), k, f, g))
    V = np.array(rows)
    V.setflags(write=False)
    return V, tuple(labels)


def svetlichny_vertices(sc: Scenario) -> tuple[np.ndarray, tuple]:
    """Hybrid deterministic strategies: a grouped pair answers with a joint function of both inputs."""
    return _svetlichny_matrix(sc)


def svetlichny_bound(expr: BellExpression) -> float:
    sc = expr.scenario
    if sc.parties != 3:
        raise ValueError("Svetlichny model is implemented for three parties")
    T = expr.tensor
    best = -np.inf
    for i, j, k in _BIPARTITIONS:
        # order axes as (x_i, x_j, x_k, a_i, a_j, a_k)
        R = T.transpose((i, j, k, 3 + i, 3 + j, 3 + k))
        mk, dk = sc.inputs[k], sc.outputs[k]
        for g in product(range(dk), repeat=mk):
            Q = sum(R[:, :, z, :, :, g[z]] for z in range(mk))  # (x_i, x_j, a_i, a_j)
            best = max(best, float(Q.reshape(Q.shape[0], Q.shape[1], -1).max(axis=2).sum()))
    return best


def svetlichny_membership(b: Behavior, tol: config.Tolerances | None = None) -> MembershipVerdict:
    """Visibility LP over hybrid vertices in full-table coordinates (the vertices signal within pairs)."""
    tol = tol or config.resolve()
    V, labels = svetlichny_vertices(b.scenario)
    return _membership(b, V, labels, None, svetlichny_bound, tol, "svetlichny")
