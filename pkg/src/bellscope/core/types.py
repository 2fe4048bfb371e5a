from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Any, Mapping

import numpy as np


@dataclass(frozen=True)
class Scenario:
    """Numbers of parties, inputs per party and outputs per party."""

    parties: int
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(int(v) for v in self.inputs))
        object.__setattr__(self, "outputs", tuple(int(v) for v in self.outputs))
        if self.parties < 1:
            raise ValueError("need at least one party")
        if len(self.inputs) != self.parties or len(self.outputs) != self.parties:
            raise ValueError("inputs/outputs must have one entry per party")
        if min(self.inputs) < 1 or min(self.outputs) < 1:
            raise ValueError("input and output counts must be positive")

    @classmethod
    def homogeneous(cls, n: int, m: int, d: int) -> "Scenario":
        return cls(n, (m,) * n, (d,) * n)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.inputs + self.outputs

    @property
    def size(self) -> int:
        return prod(self.shape)

    @property
    def nonlocality_capable(self) -> bool:
        ok = [m >= 2 and d >= 2 for m, d in zip(self.inputs, self.outputs)]
        return sum(ok) >= 2

    def to_json(self) -> dict:
        return {"parties": self.parties, "inputs": list(self.inputs), "outputs": list(self.outputs)}

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "Scenario":
        return cls(int(obj["parties"]), tuple(obj["inputs"]), tuple(obj["outputs"]))

    def __str__(self):
        return f"({self.parties}; m={list(self.inputs)}; d={list(self.outputs)})"


def _frozen_array(values, size: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    if arr.size != size:
        raise ValueError(f"{what} has length {arr.size}, scenario needs {size}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Behavior:
    """Conditional distribution p(a..|x..), flattened inputs-major then outputs-major."""

    scenario: Scenario
    table: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "table", _frozen_array(self.table, self.scenario.size, "table"))

    @classmethod
    def from_tensor(cls, scenario: Scenario, tensor) -> "Behavior":
        return cls(scenario, np.asarray(tensor, dtype=float).reshape(-1))

    @property
    def tensor(self) -> np.ndarray:
        return self.table.reshape(self.scenario.shape)

    def prob(self, outputs, inputs) -> float:
        return float(self.tensor[tuple(inputs) + tuple(outputs)])

    def marginal(self, parties) -> np.ndarray:
        """Marginal on ``parties`` with the other parties' inputs fixed to 0.

        Shape is (m_k.. for k in parties, Δ_k.. for k in parties).
        """
        n = self.scenario.parties
        keep = sorted(parties)
        t = self.tensor
        idx = tuple(slice(None) if k in keep else 0 for k in range(n))
        t = t[idx]  # inputs of dropped parties fixed to 0
        drop = tuple(len(keep) + k for k in range(n) if k not in keep)
        return t.sum(axis=drop) if drop else t

    def mix(self, other: "Behavior", w: float) -> "Behavior":
        if other.scenario != self.scenario:
            raise ValueError("scenario mismatch")
        return Behavior(self.scenario, w * self.table + (1 - w) * other.table)


@dataclass(frozen=True)
class Bound:
    value: float
    source: str = "derived"  # "literature", "derived" or "computed"


@dataclass(frozen=True, eq=False)
class BellExpression:
    """Linear functional s·p, always oriented so that violations increase it.

    ``bounds`` may carry ``local``, ``quantum`` and ``ns`` entries. When the
    inequality is natively of the form ``expr >= L`` it is stored as ``-expr``
    and ``negated`` is set, so native values are ``-value``.
    """

    scenario: Scenario
    coefficients: np.ndarray
    bounds: Mapping[str, Bound] = field(default_factory=dict)
    name: str = ""
    negated: bool = False
    extra: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", _frozen_array(self.coefficients, self.scenario.size, "coefficients")
        )
        b = {k: self.bounds[k].value for k in ("local", "quantum", "ns") if k in self.bounds}
        order = [b[k] for k in ("local", "quantum", "ns") if k in b]
        if any(lo > hi + 1e-9 for lo, hi in zip(order, order[1:])):
            raise ValueError(f"bounds must satisfy S_l <= S_q <= S_ns, got {b}")

    @classmethod
    def from_tensor(cls, scenario: Scenario, tensor, **kw) -> "BellExpression":
        return cls(scenario, np.asarray(tensor, dtype=float).reshape(-1), **kw)

    @property
    def tensor(self) -> np.ndarray:
        return self.coefficients.reshape(self.scenario.shape)

    def bound(self, key: str) -> float | None:
        b = self.bounds.get(key)
        return None if b is None else b.value

    def __neg__(self):
        return BellExpression(self.scenario, -self.coefficients, name=f"-{self.name}" if self.name else "")

    def scaled(self, alpha: float, shift: float = 0.0) -> "BellExpression":
        """alpha*s + shift*(sum over joint inputs of normalization), so value -> alpha*v + shift."""
        n_joint = prod(self.scenario.inputs)
        coeffs = alpha * self.coefficients + shift / n_joint
        return BellExpression(self.scenario, coeffs, name=self.name)


@dataclass(frozen=True, eq=False)
class Game:
    """Nonlocal game: input distribution pi(x..) and binary predicate V(a..|x..)."""

    scenario: Scenario
    pi: np.ndarray       # shape inputs
    predicate: np.ndarray  # shape inputs + outputs, entries in {0,1}

    def __post_init__(self):
        pi = np.array(self.pi, dtype=float).reshape(self.scenario.inputs)
        V = np.array(self.predicate, dtype=float).reshape(self.scenario.shape)
        if np.any(pi < 0) or abs(pi.sum() - 1) > 1e-9:
            raise ValueError("input distribution must be nonnegative and normalized")
        if not np.all((V == 0) | (V == 1)):
            raise ValueError("predicate must be 0/1 valued")
        pi.setflags(write=False)
        V.setflags(write=False)
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "predicate", V)


@dataclass(frozen=True)
class Correlators:
    """Bipartite binary-output expectations, outcome 0 -> +1 and 1 -> -1."""

    A: np.ndarray   # <A_x>
    B: np.ndarray   # <B_y>
    AB: np.ndarray  # <A_x B_y>, shape (m_A, m_B)

    def __post_init__(self):
        for name in ("A", "B", "AB"):
            arr = np.array(getattr(self, name), dtype=float)
            if np.any(np.abs(arr) > 1 + 1e-9):
                raise ValueError(f"{name} entries must lie in [-1, 1]")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
