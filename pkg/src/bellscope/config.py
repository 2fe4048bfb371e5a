"""Central numerical tolerances.

Every solver and validator reads its thresholds from a single
:class:`Tolerances` record. The ``BELLSCOPE_TOL`` environment variable (or the
CLI ``--tol`` flag, which wins over it) overrides fields using either a bare
float, which sets the three behavior tolerances at once, or a comma separated
``field=value`` list.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

ENV_VAR = "BELLSCOPE_TOL"


@dataclass(frozen=True)
class Tolerances:
    pos: float = 1e-9          # positivity of table entries
    norm: float = 1e-9         # normalization per joint input
    ns: float = 1e-9           # no-signaling residual
    lp_feas: float = 1e-8      # LP primal feasibility / duality gap
    lp_pivot: float = 1e-11    # smallest pivot accepted by the simplex
    lp_max_pivots: int = 1_000_000
    sdp_gap: float = 1e-9      # relative gap target of the interior point
    sdp_feas: float = 1e-9     # relative residual target
    sdp_psd: float = 1e-7      # eigenvalue floor reported as PSD
    sdp_max_iter: int = 200
    sdp_step: float = 0.98
    membership: float = 1e-7   # SDP feasibility margin accepted as "inside"


DEFAULT = Tolerances()


def parse_override(text: str, base: Tolerances = DEFAULT) -> Tolerances:
    text = text.strip()
    if not text:
        return base
    try:
        v = float(text)
    except ValueError:
        pass
    else:
        return replace(base, pos=v, norm=v, ns=v)
    names = {f.name: f.type for f in fields(Tolerances)}
    updates = {}
    for item in text.split(","):
        key, _, val = item.partition("=")
        key = key.strip()
        if key not in names:
            raise ValueError(f"unknown tolerance field {key!r}")
        updates[key] = int(float(val)) if key in ("lp_max_pivots", "sdp_max_iter") else float(val)
    return replace(base, **updates)


def resolve(flag: str | None = None) -> Tolerances:
    """Flag beats environment beats defaults."""
    tol = DEFAULT
    env = os.environ.get(ENV_VAR)
    if env:
        tol = parse_override(env, tol)
    if flag:
        tol = parse_override(flag, tol)
    return tol
