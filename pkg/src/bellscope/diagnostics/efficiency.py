"""Finite detection efficiency: local no-click channels, thresholds, and the Eberhard scan."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import config
from ..core import BellExpression, Behavior, Scenario, correlator_term
from ..optim import bisect
from ..polytopes import local_membership
from ..quantum import born_behavior, partially_entangled, seesaw_lower_bound


@dataclass(frozen=True)
class EfficiencyModel:
    etas: tuple
    assign: tuple

    def __post_init__(self):
        if len(self.etas) != len(self.assign):
            raise ValueError("one efficiency and one assignment per party")
        if any(not 0 <= e <= 1 for e in self.etas):
            raise ValueError("efficiencies must lie in [0, 1]")

    @classmethod
    def uniform(cls, eta: float, assign) -> "EfficiencyModel":
        return cls(tuple(float(eta) for _ in assign), tuple(int(a) for a in assign))


def apply_efficiency(b: Behavior, e: EfficiencyModel) -> Behavior:
    """Each party independently clicks with probability eta_k and otherwise outputs assign_k."""
    sc = b.scenario
    n = sc.parties
    if len(e.etas) != n:
        raise ValueError("efficiency model does not match the number of parties")
    t = b.tensor
    for k in range(n):
        d = sc.outputs[k]
        if not 0 <= e.assign[k] < d:
            raise ValueError(f"assignment {e.assign[k]} out of range for party {k}")
        C = e.etas[k] * np.eye(d)
        C[e.assign[k], :] += 1 - e.etas[k]
        t = np.moveaxis(np.tensordot(C, t, axes=([1], [n + k])), 0, n + k)
    return Behavior.from_tensor(sc, t)


def efficiency_threshold(b: Behavior, assign, tol: float = 1e-6, cfg=None) -> tuple[float, float]:
    """Certified bracket (lo, hi): local at eta = lo, nonlocal at eta = hi (equal efficiencies)."""
    cfg = cfg or config.resolve()

    def nonlocal_at(eta):
        return not local_membership(apply_efficiency(b, EfficiencyModel.uniform(eta, assign)), cfg).inside

    if not nonlocal_at(1.0):
        raise ValueError("behavior is local at unit efficiency")
    lo, hi = bisect(nonlocal_at, 0.0, 1.0, tol)
    # re-verify both endpoints with fresh LP calls
    if nonlocal_at(lo) or not nonlocal_at(hi):
        raise RuntimeError("threshold bracket failed re-verification")
    return lo, hi


def efficiency_lower_bound(mA: int, mB: int) -> float:
    if mA < 2 or mB < 2:
        raise ValueError("need at least two inputs per party")
    return (mA + mB - 2) / (mA * mB - 1)


def chsh_relabelings() -> list[BellExpression]:
    """The 8 CHSH forms: minus sign on one of four correlators, times an overall sign."""
    sc = Scenario.homogeneous(2, 2, 2)
    out = []
    for minus in range(4):
        t = sum(correlator_term(sc, {0: x, 1: y}, -1.0 if 2 * x + y == minus else 1.0)
                for x in range(2) for y in range(2))
        for sgn in (1, -1):
            out.append(BellExpression.from_tensor(sc, sgn * t, name=f"chsh[{minus},{sgn:+d}]"))
    return out


@dataclass
class EberhardPoint:
    theta: float
    bracket: tuple
    value_at_hi: float


def _best_violation(state, eta, assign, starts, restarts, seed):
    """Largest CHSH-form value over relabelings and see-saw starts, with its model and raw measurements."""
    eff = [(eta, assign[0]), (eta, assign[1])]
    best = (-np.inf, None, None, None)
    for i, expr in enumerate(chsh_relabelings()):
        init = starts.get(i)
        r = seesaw_lower_bound(expr, (2, 2), restarts=restarts, seed=seed + i, state=state,
                               efficiency=eff, initial=init)
        starts[i] = r.raw_measurements
        if r.value > best[0]:
            best = (r.value, r.model, r.raw_measurements, i)
    return best


def eberhard_threshold(theta: float, tol: float = 1e-4, restarts: int = 5, seed: int = 0,
                       assign=(0, 0), eta_grid=None, cfg=None) -> EberhardPoint:
    """Smallest efficiency with a nonlocal behavior from cos|00> + sin|11>, measurements re-optimized.

    A descending continuation over eta supplies warm starts; the final step is a bisection whose
    nonlocal endpoint is confirmed by local membership of the Born behavior.
    """
    cfg = cfg or config.resolve()
    state = partially_entangled(theta)
    starts: dict = {}

    def nonlocal_at(eta):
        val, model, _, _ = _best_violation(state, eta, assign, starts, restarts, seed)
        if val <= 2 + 1e-12:
            return False
        return not local_membership(born_behavior(model), cfg).inside

    grid = eta_grid if eta_grid is not None else np.linspace(1.0, 0.5, 26)
    prev = None
    for eta in grid:
        if not nonlocal_at(eta):
            if prev is None:
                raise ValueError(f"no violation found at eta = {eta}")
            lo, hi = bisect(nonlocal_at, float(eta), prev, tol)
            val, *_ = _best_violation(state, hi, assign, starts, restarts, seed)
            return EberhardPoint(theta, (lo, hi), val)
        prev = float(eta)
    raise ValueError("still nonlocal at the lowest grid efficiency")
