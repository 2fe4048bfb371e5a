from dataclasses import replace
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linprog

from bellscope import config
from bellscope.optim import LpProblem, SdpProblem, bisect, lmi_maximize, lp_solve, psd_project, sdp_solve


# --- LP ----------------------------------------------------------------------

def test_lp_examples():
    s = lp_solve(LpProblem([1.0], [[1.0]], [3.0]))
    assert s.status == "optimal" and s.x[0] == pytest.approx(3)
    assert lp_solve(LpProblem([1.0], [[-1.0]], [0.0])).status == "unbounded"
    assert lp_solve(LpProblem([1.0], [[1.0], [1.0]], [1.0, 2.0], ["<=", ">="])).status == "infeasible"


def test_lp_dimension_mismatch():
    with pytest.raises(ValueError):
        LpProblem([1.0, 2.0], [[1.0, 1.0]], [1.0, 2.0])


def test_lp_pivot_cap_reports_stall():
    rng = np.random.default_rng(0)
    A = rng.random((20, 30))
    tol = replace(config.DEFAULT, lp_max_pivots=2)
    assert lp_solve(LpProblem(rng.random(30), A, np.ones(20)), tol).status == "stalled"


def test_lp_free_variable_and_equalities():
    # max x - y, x + y = 1, y free, x <= 3
    s = lp_solve(LpProblem([1.0, -1.0], [[1.0, 1.0], [1.0, 0.0]], [1.0, 3.0], ["=", "<="], free=[False, True]))
    assert s.status == "optimal"
    assert s.objective == pytest.approx(5.0)
    assert s.x == pytest.approx([3.0, -2.0])


def _brute_force(c, A, b):
    """Max c.x over {A x <= b, x >= 0} by enumerating vertices of the 3-d polyhedron."""
    G = np.vstack([A, -np.eye(3)])
    h = np.concatenate([b, np.zeros(3)])
    best = -np.inf
    for rows in combinations(range(G.shape[0]), 3):
        M = G[list(rows)]
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        x = np.linalg.solve(M, h[list(rows)])
        if np.all(G @ x <= h + 1e-9):
            best = max(best, c @ x)
    return best


@pytest.mark.parametrize("seed", range(100))
def test_lp_vs_vertex_enumeration(seed):
    rng = np.random.default_rng(seed)
    A = rng.uniform(-1, 2, size=(5, 3))
    A = np.vstack([A, np.eye(3)])           # box keeps it bounded
    b = np.concatenate([rng.uniform(0.5, 3, 5), np.full(3, 4.0)])
    c = rng.normal(size=3)
    s = lp_solve(LpProblem(c, A, b))
    assert s.status == "optimal"
    assert s.objective == pytest.approx(_brute_force(c, A, b), abs=1e-8)
    # weak duality with the returned multipliers
    assert np.all(s.y >= -1e-9)
    assert c @ s.x <= b @ s.y + 1e-8


@pytest.mark.parametrize("seed", range(60))
def test_lp_vs_highs(seed):
    rng = np.random.default_rng(1000 + seed)
    m, n = rng.integers(3, 9), rng.integers(3, 9)
    A = rng.normal(size=(m, n))
    b = rng.normal(size=m) + 0.5
    senses = list(rng.choice(["<=", ">=", "="], size=m, p=[0.5, 0.3, 0.2]))
    c = rng.normal(size=n)
    ours = lp_solve(LpProblem(c, A, b, senses))
    A_ub = [A[i] if s == "<=" else -A[i] for i, s in enumerate(senses) if s != "="]
    b_ub = [b[i] if s == "<=" else -b[i] for i, s in enumerate(senses) if s != "="]
    A_eq = [A[i] for i, s in enumerate(senses) if s == "="]
    b_eq = [b[i] for i, s in enumerate(senses) if s == "="]
    ref = linprog(-c, A_ub=np.array(A_ub) if A_ub else None, b_ub=b_ub or None,
                  A_eq=np.array(A_eq) if A_eq else None, b_eq=b_eq or None, bounds=(0, None), method="highs")
    if ref.status == 0:
        assert ours.status == "optimal"
        assert ours.objective == pytest.approx(-ref.fun, abs=1e-7)
    elif ours.status == "optimal":
        # HiGHS folds infeasible-or-unbounded together; check our point directly
        viol = [max(0, A[i] @ ours.x - b[i]) if s == "<=" else max(0, b[i] - A[i] @ ours.x) if s == ">="
                else abs(A[i] @ ours.x - b[i]) for i, s in enumerate(senses)]
        assert max(viol) < 1e-8 and ours.x.min() > -1e-9
    elif ref.status == 2:
        assert ours.status in ("infeasible", "unbounded")
    if ours.status == "optimal":
        assert ours.residual <= 1e-8 and ours.gap <= 1e-8


def test_lp_deterministic():
    rng = np.random.default_rng(3)
    p = LpProblem(rng.normal(size=6), rng.random((4, 6)), np.ones(4))
    a, b = lp_solve(p), lp_solve(p)
    assert np.array_equal(a.x, b.x) and a.pivots == b.pivots


# --- SDP ----------------------------------------------------------------------

def test_sdp_trace_example():
    s = sdp_solve(SdpProblem(np.eye(2), [np.eye(2)], [1.0]))
    assert s.status == "optimal" and s.objective == pytest.approx(1, abs=1e-7)


def test_sdp_correlation_example():
    C = np.array([[0.0, 1.0], [1.0, 0.0]])
    A = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    s = sdp_solve(SdpProblem(C, A, [1.0, 1.0]))
    assert s.status == "optimal" and s.objective == pytest.approx(2, abs=1e-7)
    assert np.linalg.eigvalsh(s.X).min() >= -1e-7 and np.linalg.eigvalsh(s.Z).min() >= -1e-7


def test_sdp_dependent_constraints_removed():
    A = [np.eye(2), 2 * np.eye(2)]
    s = sdp_solve(SdpProblem(np.diag([1.0, 0.0]), A, [1.0, 2.0]))
    assert s.status == "optimal" and s.objective == pytest.approx(1, abs=1e-7)
    assert sdp_solve(SdpProblem(np.eye(2), A, [1.0, 3.0])).status == "infeasible"


def test_sdp_bad_dimensions():
    with pytest.raises(ValueError):
        SdpProblem(np.eye(2), [np.eye(3)], [1.0])


@pytest.mark.parametrize("seed", range(10))
def test_diagonal_sdp_matches_lp(seed):
    rng = np.random.default_rng(seed)
    n, m = 5, 3
    c = rng.normal(size=n)
    A = rng.random((m, n)) + 0.1
    b = A @ (rng.random(n) + 0.1)   # feasible by construction, bounded since A > 0
    lp = lp_solve(LpProblem(c, A, b, ["="] * m))
    assert lp.status == "optimal"
    sdp = sdp_solve(SdpProblem(np.diag(c), [np.diag(a) for a in A], b))
    assert sdp.status == "optimal"
    assert sdp.objective == pytest.approx(lp.objective, abs=1e-6)


@pytest.mark.parametrize("seed", range(5))
def test_sdp_vs_cvxpy(seed):
    cp = pytest.importorskip("cvxpy")
    rng = np.random.default_rng(seed)
    n, k = 4, 3
    C = rng.normal(size=(n, n))
    C = C + C.T
    As = [np.eye(n)]
    for _ in range(k - 1):
        M = rng.normal(size=(n, n))
        As.append(M + M.T)
    X0 = rng.normal(size=(n, n))
    X0 = X0 @ X0.T + np.eye(n)
    X0 /= np.trace(X0)
    b = np.array([np.sum(A * X0) for A in As])
    ours = sdp_solve(SdpProblem(C, As, b))
    X = cp.Variable((n, n), symmetric=True)
    prob = cp.Problem(cp.Maximize(cp.trace(C @ X)), [X >> 0] + [cp.trace(A @ X) == bi for A, bi in zip(As, b)])
    prob.solve(solver=cp.SCS, eps=1e-9, max_iters=200000) if "CLARABEL" not in cp.installed_solvers() \
        else prob.solve(solver=cp.CLARABEL)
    assert ours.status == "optimal"
    assert ours.objective == pytest.approx(prob.value, abs=1e-5)


def test_lmi_maximize_simple():
    # max y s.t. [[1, y], [y, 1]] PSD -> 1
    F0 = np.eye(2)
    F1 = np.array([[0.0, 1.0], [1.0, 0.0]])
    val, y, sol = lmi_maximize(F0, [F1], [1.0])
    assert sol.status == "optimal" and val == pytest.approx(1, abs=1e-7)


# --- PSD projection and bisection --------------------------------------------

def test_psd_project_examples(rng):
    assert np.allclose(psd_project(np.eye(3)), np.eye(3))
    assert np.allclose(psd_project(np.diag([1.0, -1.0])), np.diag([1.0, 0.0]))
    B = rng.normal(size=(4, 4))
    G = B @ B.T
    assert np.abs(psd_project(G) - G).max() < 1e-10


@given(st.integers(0, 10 ** 6))
def test_psd_project_idempotent(seed):
    M = np.random.default_rng(seed).normal(size=(5, 5))
    P = psd_project(M)
    assert np.linalg.eigvalsh(P).min() >= -1e-12
    assert np.abs(psd_project(P) - P).max() < 1e-10


def test_bisect_examples():
    lo, hi = bisect(lambda t: t >= 0.5, 0.0, 1.0, 1e-6)
    assert hi - lo <= 1e-6 and lo < 0.5 <= hi
    lo, hi = bisect(lambda t: t > 0.0, 0.0, 1.0, 1e-6)
    assert lo == 0.0 and hi <= 1e-6
    with pytest.raises(ValueError):
        bisect(lambda t: True, 0.0, 1.0)


@given(st.floats(0.001, 0.999))
def test_bisect_brackets_threshold(t0):
    lo, hi = bisect(lambda t: t > t0, 0.0, 1.0, 1e-9)
    assert lo <= t0 <= hi and hi - lo <= 1e-9
