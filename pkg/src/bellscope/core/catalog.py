"""Named Bell expressions, all stored in maximize-form."""
from __future__ import annotations

from itertools import product
from math import sqrt

import numpy as np

from .transforms import correlator_term
from .types import BellExpression, Bound, Scenario

# Kullback-Leibler strengths (bits, uniform inputs) quoted for reference only.
KL_STRENGTH = {
    "chsh": {"maximally_entangled": 0.046},
    "cglmp3": {"maximally_entangled": 0.058, "optimal": 0.077},
    "mermin": {"ghz": 0.208},
}


def chsh() -> BellExpression:
    """E00 + E01 + E10 - E11 <= 2."""
    sc = Scenario(2, (2, 2), (2, 2))
    t = sum(correlator_term(sc, {0: x, 1: y}, -1.0 if x == y == 1 else 1.0)
            for x, y in product(range(2), repeat=2))
    return BellExpression.from_tensor(
        sc, t, name="CHSH",
        bounds={"local": Bound(2.0, "literature"), "quantum": Bound(2 * sqrt(2), "literature"), "ns": Bound(4.0, "literature")},
        extra={"kl_bits": KL_STRENGTH["chsh"]},
    )


def i3322() -> BellExpression:
    """I3322 facet with 3 binary inputs per party, negated to read <= 1.

    Native form (outcome 0 plays the role of the counted event):
    2 pA(0|0) + pA(0|1) + pB(0|0) - sum_{xy} c_xy p(00|xy) >= 0 with c from
    I3322_JOINT, shifted by one unit of normalization so the local bound is 1.
    """
    sc = Scenario(2, (3, 3), (2, 2))
    t = np.zeros(sc.shape)
    t[0, 0, 0, :] -= 2.0   # pA(0|0), Bob's input fixed at 0
    t[1, 0, 0, :] -= 1.0   # pA(0|1)
    t[0, 0, :, 0] -= 1.0   # pB(0|0), Alice's input fixed at 0
    for (x, y), c in I3322_JOINT.items():
        t[x, y, 0, 0] += c
    t[0, 0] += 1.0  # + sum_ab p(ab|00) = 1
    return BellExpression.from_tensor(
        sc, t, name="I3322", negated=True,
        bounds={"local": Bound(1.0, "literature"), "ns": Bound(I3322_NS, "derived")},
    )


# coefficients of p(00|xy) in the maximize-form expression
I3322_JOINT = {(0, 0): 1, (0, 1): 1, (0, 2): 1, (1, 0): 1, (2, 0): 1,
               (1, 1): 1, (1, 2): -1, (2, 1): -1}
I3322_NS = 2.0


def chained(d: int, m: int) -> BellExpression:
    """Bracket-form chained inequality, negated.

    Native: sum_x [a_x - b_x] + sum_{x<m-1} [b_x - a_{x+1}] + [b_{m-1} - a_0 - 1] >= d - 1
    where [e] = sum_j j p(e = j mod d).
    """
    if d < 2 or m < 2:
        raise ValueError("chained inequality needs d >= 2 and m >= 2")
    sc = Scenario(2, (m, m), (d, d))
    t = np.zeros(sc.shape)
    a = np.arange(d)[:, None]
    b = np.arange(d)[None, :]
    for x in range(m):
        t[x, x] += (a - b) % d
    for x in range(m - 1):
        t[x + 1, x] += (b - a) % d
    t[0, m - 1] += (b - a - 1) % d
    name = f"CGLMP{d}" if m == 2 else f"chained({d},{m})"
    bounds = {"local": Bound(-(d - 1.0), "literature"), "ns": Bound(0.0, "literature")}
    extra = {}
    if m == 2 and d == 3:
        extra["kl_bits"] = KL_STRENGTH["cglmp3"]
    if d == 2:
        # bracket = m - C/2 with C the binary chained correlator sum, max 2m cos(pi/2m)
        bounds["quantum"] = Bound(-m * (1 - float(np.cos(np.pi / (2 * m)))), "derived")
    return BellExpression.from_tensor(sc, -t, name=name, negated=True, bounds=bounds, extra=extra)


def cglmp(d: int) -> BellExpression:
    return chained(d, 2)


def mermin() -> BellExpression:
    """<A0B1C1> + <A1B0C1> + <A1B1C0> - <A0B0C0>, with |.| <= 2."""
    sc = Scenario.homogeneous(3, 2, 2)
    terms = {(0, 1, 1): 1.0, (1, 0, 1): 1.0, (1, 1, 0): 1.0, (0, 0, 0): -1.0}
    t = sum(correlator_term(sc, dict(enumerate(x)), c) for x, c in terms.items())
    return BellExpression.from_tensor(
        sc, t, name="Mermin",
        bounds={"local": Bound(2.0, "literature"), "quantum": Bound(4.0, "literature"), "ns": Bound(4.0, "derived")},
        extra={"kl_bits": KL_STRENGTH["mermin"]},
    )


def svetlichny_polynomial(n: int) -> dict[tuple[int, ...], float]:
    """Full-correlator coefficients of S_n; input 0 is unprimed, 1 primed."""
    if n < 3:
        raise ValueError("Svetlichny expression needs n >= 3")
    S = {
        (0, 0, 1): 1, (0, 1, 0): 1, (1, 0, 0): 1, (1, 1, 1): -1,
        (1, 1, 0): 1, (1, 0, 1): 1, (0, 1, 1): 1, (0, 0, 0): -1,
    }
    for _ in range(4, n + 1):
        swapped = {(1 - x[0],) + x[1:]: c for x, c in S.items()}
        nxt = {}
        for x, c in S.items():
            nxt[x + (1,)] = nxt.get(x + (1,), 0) + c
        for x, c in swapped.items():
            nxt[x + (0,)] = nxt.get(x + (0,), 0) + c
        S = nxt
    return {x: float(c) for x, c in S.items() if c}


def svetlichny(n: int = 3) -> BellExpression:
    sc = Scenario.homogeneous(n, 2, 2)
    t = sum(correlator_term(sc, dict(enumerate(x)), c) for x, c in svetlichny_polynomial(n).items())
    h = 2.0 ** (n - 1)
    return BellExpression.from_tensor(
        sc, t, name=f"Svetlichny{n}",
        bounds={"local": Bound(h, "derived"), "quantum": Bound(h * sqrt(2), "literature"), "ns": Bound(2.0 ** n, "derived")},
        extra={"svetlichny_bound": h},
    )


# cluster4 settings: 0 = X, 1 = Y, 2 = Z on every party
_X, _Y, _Z = 0, 1, 2


def cluster4() -> BellExpression:
    """|a1 a3' a4 + a1 a3 a4' + a1' a2 a3 a4 - a1' a2 a3' a4'| <= 2 on the linear cluster.

    Observables: a1 = X1, a1' = Z1, a2 = Y2, a3 = Y3, a3' = X3, a4 = Z4, a4' = Y4.
    """
    sc = Scenario.homogeneous(4, 3, 2)
    terms = [
        ({0: _X, 2: _X, 3: _Z}, 1.0),
        ({0: _X, 2: _Y, 3: _Y}, 1.0),
        ({0: _Z, 1: _Y, 2: _Y, 3: _Z}, 1.0),
        ({0: _Z, 1: _Y, 2: _X, 3: _Y}, -1.0),
    ]
    t = sum(correlator_term(sc, s, c) for s, c in terms)
    return BellExpression.from_tensor(
        sc, t, name="cluster4",
        bounds={"local": Bound(2.0, "literature"), "quantum": Bound(4.0, "literature"), "ns": Bound(4.0, "derived")},
    )


_FAMILIES = {
    "chsh": lambda **kw: chsh(),
    "i3322": lambda **kw: i3322(),
    "cglmp": lambda d=3, **kw: cglmp(int(d)),
    "chained": lambda d=2, m=3, **kw: chained(int(d), int(m)),
    "mermin": lambda n=3, **kw: mermin() if int(n) == 3 else _bad("Mermin is catalogued for n = 3"),
    "svetlichny": lambda n=3, **kw: svetlichny(int(n)),
    "cluster4": lambda **kw: cluster4(),
    "graph_state": lambda edges=None, n=None, **kw: _graph(edges, n),
}


def _bad(msg):
    raise ValueError(msg)


def _graph(edges, n):
    from ..quantum.graphs import stabilizer_bell_expression
    if edges is None:
        raise ValueError("graph_state needs an edge list")
    return stabilizer_bell_expression(edges, n)


def catalog_names() -> list[str]:
    return sorted(_FAMILIES)


def catalog(name: str, **params) -> BellExpression:
    key = name.lower().replace("-", "_")
    if key not in _FAMILIES:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(catalog_names())}")
    return _FAMILIES[key](**params)
