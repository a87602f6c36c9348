import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from maxcon import InputError, Instance, consensus, refit, solve_basis_analytic, solve_minimax
from maxcon.core import DataPoint, residual

from conftest import random_instance


def sign_pattern_gamma(points):
    """Chebyshev value by exhaustion: max over (d+1)-subsets of the best equioscillating system."""
    d = points[0].dim
    best = 0.0
    for B in itertools.combinations(points, min(d + 1, len(points))):
        if len(B) < d + 1:
            continue
        g = None
        for signs in itertools.product((1, -1), repeat=d + 1):
            M = np.array([list(map(float, p.a)) + [-s] for p, s in zip(B, signs)])
            rhs = np.array([float(p.b) for p in B])
            if abs(np.linalg.det(M)) < 1e-12:
                continue
            z = np.linalg.solve(M, rhs)
            if z[-1] >= -1e-12 and (g is None or z[-1] < g):
                g = z[-1]
        if g is not None:
            best = max(best, g)
    return best


def lp_gamma(points):
    A = np.array([[float(v) for v in p.a] for p in points])
    b = np.array([float(p.b) for p in points])
    n, d = A.shape
    c = np.zeros(d + 1)
    c[-1] = 1
    ones = np.ones((n, 1))
    A_ub = np.vstack([np.hstack([A, -ones]), np.hstack([-A, -ones])])
    b_ub = np.concatenate([b, -b])
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=[(None, None)] * (d + 1), method="highs")
    assert res.status == 0
    return res.fun


def test_two_points_midpoint():
    inst = Instance.build([[1], [1]], [0, 2], 1, exact=True)
    sol = solve_minimax(inst, [0, 1])
    assert sol.model == (1,) and sol.gamma == 1 and sol.basis == (0, 1)


def test_extremes_dominate():
    inst = Instance.build([[1], [1], [1]], [0, 1, 4], 1, exact=True)
    sol = solve_minimax(inst, [0, 1, 2])
    assert sol.model == (2,) and sol.gamma == 2 and sol.basis == (0, 2)


def test_errors():
    inst = Instance.build([[1]], [0], 1)
    with pytest.raises(InputError):
        solve_minimax(inst, [])
    with pytest.raises(InputError):
        solve_minimax(inst, [1])
    with pytest.raises(InputError):
        solve_basis_analytic([DataPoint((1.0,), 0.0)])


def test_single_point_and_zero_rows():
    inst = Instance.build([[0, 0], [2, 0]], [3, 1], 0, exact=True)
    assert solve_minimax(inst, [0]).gamma == 3
    sol = solve_minimax(inst, [1])
    assert sol.gamma == 0 and sol.model == (Fraction(1, 2), 0)


@pytest.mark.parametrize("seed", range(25))
def test_matches_sign_pattern_oracle_and_scipy(seed):
    rng = random.Random(seed)
    inst = random_instance(rng, 6, 2, exact=bool(seed % 2))
    sol = solve_minimax(inst, range(6))
    assert float(sol.gamma) == pytest.approx(sign_pattern_gamma(inst.points), abs=1e-9)
    assert float(sol.gamma) == pytest.approx(lp_gamma(inst.points), abs=1e-7)


@pytest.mark.parametrize("seed", range(25))
def test_analytic_matches_lp(seed):
    rng = random.Random(100 + seed)
    d = rng.randint(1, 3)
    inst = random_instance(rng, d + 1, d, exact=bool(seed % 2))
    a = solve_basis_analytic(inst.points)
    b = solve_minimax(inst, range(d + 1))
    assert float(a.gamma) == pytest.approx(float(b.gamma), abs=1e-9)


def test_analytic_rank_deficient_falls_back():
    inst = Instance.build([[1, 2], [2, 4], [-1, -2]], [0, 3, 1], 0, exact=True)
    a = solve_basis_analytic(inst.points)
    b = solve_minimax(inst, range(3))
    assert a.gamma == b.gamma


@pytest.mark.parametrize("seed", range(40))
def test_basis_invariants(seed):
    rng = random.Random(200 + seed)
    d = rng.randint(1, 3)
    exact = seed % 2 == 0
    inst = random_instance(rng, rng.randint(1, 9), d, exact, degenerate=seed % 3 == 0)
    sub = sorted(rng.sample(range(inst.n), rng.randint(1, inst.n)))
    sol = solve_minimax(inst, sub)
    assert len(sol.basis) <= d + 1
    assert set(sol.basis) <= set(sub)
    res = [residual(inst.points[i], sol.model) for i in sub]
    if exact:
        assert max(res) == sol.gamma
        assert solve_minimax(inst, sol.basis).gamma == sol.gamma
        assert all(residual(inst.points[i], sol.model) == sol.gamma for i in sol.basis)
    else:
        assert max(res) == pytest.approx(sol.gamma, abs=1e-9)
        assert solve_minimax(inst, sol.basis).gamma == pytest.approx(sol.gamma, abs=1e-9)
        for i in sol.basis:
            assert residual(inst.points[i], sol.model) == pytest.approx(sol.gamma, abs=1e-9)


def test_refit_midpoint_example():
    inst = Instance.build([[1], [1], [1]], ["0", "0.9", "2.0"], 1, exact=True)
    res = refit(inst, [0])
    assert res.model == (Fraction(9, 20),)
    assert res.consensus >= 2


def test_refit_fixed_point_and_zero_consensus():
    inst = Instance.build([[1], [1], [1]], [0, 1, 5], 1, exact=True)
    first = refit(inst, [0])
    assert refit(inst, first.model).consensus == first.consensus
    with pytest.raises(InputError):
        refit(inst, [100])


@pytest.mark.parametrize("seed", range(30))
def test_refit_never_loses(seed):
    rng = random.Random(300 + seed)
    d = rng.randint(1, 3)
    inst = random_instance(rng, 8, d, exact=seed % 2 == 0)
    p = inst.points[rng.randrange(inst.n)]
    # a model through one point always has at least that inlier
    x = solve_minimax(inst, [inst.points.index(p)]).model
    before = consensus(inst, x)[0]
    after = refit(inst, x)
    assert after.consensus >= before
    assert refit(inst, after.model).consensus == after.consensus
