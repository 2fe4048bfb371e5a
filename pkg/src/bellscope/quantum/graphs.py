"""Graph states, their stabilizer Bell expressions and classical bounds."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from ..core import BellExpression, Bound, Scenario, correlator_term
from .measurements import PAULI, QuantumModel, observable_projectors
from .states import DensityMatrix, pure

# Pauli labels: 0 = I, 1 = X, 2 = Y, 3 = Z; settings used in the Bell scenario are X, Y, Z -> 0, 1, 2
_MUL = {  # (p, q) -> (phase, r) with sigma_p sigma_q = phase sigma_r
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (2, 0): (1, 2), (3, 0): (1, 3),
    (1, 1): (1, 0), (2, 2): (1, 0), (3, 3): (1, 0),
    (1, 2): (1j, 3), (2, 1): (-1j, 3),
    (2, 3): (1j, 1), (3, 2): (-1j, 1),
    (3, 1): (1j, 2), (1, 3): (-1j, 2),
}


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset

    @classmethod
    def from_edges(cls, edges, n: int | None = None) -> "Graph":
        es = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError("self-loops are not allowed")
            es.add((min(u, v), max(u, v)))
        if n is None:
            n = 1 + max((max(e) for e in es), default=-1)
        if any(v >= n or u < 0 for u, v in es):
            raise ValueError("edge endpoint out of range")
        return cls(int(n), frozenset(es))

    def neighbors(self, i: int) -> list[int]:
        return sorted({v for u, v in self.edges if u == i} | {u for u, v in self.edges if v == i})

    def connected(self) -> bool:
        seen, todo = {0}, [0]
        while todo:
            i = todo.pop()
            for j in self.neighbors(i):
                if j not in seen:
                    seen.add(j)
                    todo.append(j)
        return len(seen) == self.n


def _as_graph(G, n=None) -> Graph:
    return G if isinstance(G, Graph) else Graph.from_edges(G, n)


def generators(G) -> list[tuple[int, ...]]:
    """g_i = X_i prod_{j in neigh(i)} Z_j as Pauli label strings."""
    G = _as_graph(G)
    gens = []
    for i in range(G.n):
        lab = [0] * G.n
        lab[i] = 1
        for j in G.neighbors(i):
            lab[j] = 3
        gens.append(tuple(lab))
    return gens


def stabilizer_group(G) -> list[tuple[int, tuple[int, ...]]]:
    """All 2^n products (sign, labels); signs are real because generators commute."""
    G = _as_graph(G)
    gens = generators(G)
    out = []
    for subset in product((0, 1), repeat=G.n):
        phase, lab = 1 + 0j, [0] * G.n
        for i, use in enumerate(subset):
            if not use:
                continue
            for q in range(G.n):
                ph, r = _MUL[(lab[q], gens[i][q])]
                phase *= ph
                lab[q] = r
        if abs(phase.imag) > 1e-12:
            raise RuntimeError("stabilizer element with imaginary phase")
        out.append((int(round(phase.real)), tuple(lab)))
    return out


def graph_state(G, n: int | None = None) -> DensityMatrix:
    """Common +1 eigenvector of the generators: prod_{edges} CZ |+>^n."""
    G = _as_graph(G, n)
    if G.n > 10:
        raise ValueError("graph states are built for n <= 10")
    N = 2 ** G.n
    psi = np.full(N, 1 / np.sqrt(N), dtype=complex)
    bits = (np.arange(N)[:, None] >> (G.n - 1 - np.arange(G.n))[None, :]) & 1
    for u, v in G.edges:
        psi[(bits[:, u] & bits[:, v]) == 1] *= -1
    return pure(psi, (2,) * G.n)


def stabilizer_bell_expression(G, n: int | None = None) -> BellExpression:
    """B(G) = sum of stabilizer elements, settings 0/1/2 = X/Y/Z; identity factors are marginals."""
    G = _as_graph(G, n)
    sc = Scenario.homogeneous(G.n, 3, 2)
    t = np.zeros(sc.shape)
    for sign, lab in stabilizer_group(G):
        settings = {q: lab[q] - 1 for q in range(G.n) if lab[q]}
        if settings:
            t += correlator_term(sc, settings, sign)
        else:
            t[(0,) * G.n] += sign  # identity: sum over outputs of p(a|0...0) = 1
    L = l_of_g(G) if G.n <= 6 else None
    bounds = {"quantum": Bound(2.0 ** G.n, "literature")}
    if L is not None:
        bounds["local"] = Bound(float(L), "derived")
    return BellExpression.from_tensor(sc, t, name=f"graph{G.n}", bounds=bounds,
                                      extra={"edges": sorted(G.edges)})


def l_of_g(G, n: int | None = None) -> int:
    """max over +/-1 assignments to (X_i, Y_i, Z_i) of |sum_j s_j|."""
    G = _as_graph(G, n)
    if G.n > 6:
        raise ValueError("L(G) enumeration is capped at n = 6")
    group = stabilizer_group(G)
    # values[k, q, p] = value of Pauli p (1..3) on qubit q in assignment k; identity -> 1
    assign = np.array(list(product((1, -1), repeat=3 * G.n))).reshape(-1, G.n, 3)
    total = np.zeros(assign.shape[0])
    for sign, lab in group:
        term = np.full(assign.shape[0], float(sign))
        for q, p in enumerate(lab):
            if p:
                term *= assign[:, q, p - 1]
        total += term
    return int(round(np.abs(total).max()))


def graph_model(G, n: int | None = None) -> QuantumModel:
    G = _as_graph(G, n)
    xyz = [observable_projectors(P) for P in PAULI]
    return QuantumModel(graph_state(G), tuple([xyz] * G.n))


def cluster4_state() -> DensityMatrix:
    """Linear cluster 0-1-2-3."""
    return graph_state([(0, 1), (1, 2), (2, 3)])


# relations of the four-qubit cluster paradox, as (Pauli labels on qubits 0..3, value)
CLUSTER_RELATIONS = (
    ((1, 0, 1, 3), 1),   # X1 X3 Z4
    ((3, 2, 2, 3), 1),   # Z1 Y2 Y3 Z4
    ((1, 0, 2, 2), 1),   # X1 Y3 Y4
    ((3, 2, 1, 2), -1),  # Z1 Y2 X3 Y4
)


def cluster_paradox_assignments() -> int:
    """Number of +/-1 assignments to the local observables satisfying all four relations."""
    count = 0
    for vals in product((1, -1), repeat=12):
        v = np.array(vals).reshape(4, 3)
        ok = True
        for lab, target in CLUSTER_RELATIONS:
            prod_ = 1
            for q, p in enumerate(lab):
                if p:
                    prod_ *= v[q, p - 1]
            if prod_ != target:
                ok = False
                break
        count += ok
    return count
