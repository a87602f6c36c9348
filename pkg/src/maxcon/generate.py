"""Random planted-model instances.

All randomness comes from ``random.Random(seed)`` (Mersenne Twister, seeded
with the given integer), so a seed fully determines the instance.  Values are
drawn on a 1/1000 grid so that exact and float instances built from the same
seed describe the same data.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Any

from .core import EXACT, FLOAT, DataPoint, InputError, Instance, to_scalar

GRID = 1000
DEFAULT_EPSILON = Fraction(1, 10)


def _fraction(value: Any) -> Fraction:
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def _uniform(rng: random.Random, lo: int = -GRID, hi: int = GRID) -> Fraction:
    return Fraction(rng.randint(lo, hi), GRID)


def planted_count(n: int, inlier_frac: Any) -> int:
    p = _fraction(inlier_frac)
    if not 0 < p <= 1:
        raise InputError(f"inlier fraction {inlier_frac} outside (0, 1]")
    return math.ceil(p * n)


def generate_random(
    n: int,
    d: int,
    inlier_frac: Any,
    seed: int,
    epsilon: Any = DEFAULT_EPSILON,
    exact: bool = False,
) -> Instance:
    """Planted instance with ``ceil(p*n)`` inliers around a random model.

    Inliers get a residual uniform in ``[-eps, eps]``; outliers get a residual
    of magnitude in ``(2 eps, 2 eps + 1]`` with a random sign.  Outlier
    positions are shuffled.  ``metadata['planted_inliers']`` is a lower bound
    on the optimal consensus.
    """
    if n < 1 or d < 1:
        raise InputError("n and d must be positive")
    try:
        eps = _fraction(epsilon)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad epsilon {epsilon!r}") from None
    if eps < 0:
        raise InputError("epsilon must be non-negative")
    try:
        m = planted_count(n, inlier_frac)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad inlier fraction {inlier_frac!r}") from None
    rng = random.Random(seed)
    truth = [_uniform(rng) for _ in range(d)]
    roles = [True] * m + [False] * (n - m)
    rng.shuffle(roles)
    rows, bs = [], []
    for inlier in roles:
        a = [_uniform(rng) for _ in range(d)]
        fit = sum((ai * xi for ai, xi in zip(a, truth)), Fraction(0))
        if inlier:
            r = eps * _uniform(rng)
        else:
            r = 2 * eps + _uniform(rng, 1, GRID)
            if rng.random() < 0.5:
                r = -r
        rows.append(a)
        bs.append(fit + r)
    mode = EXACT if exact else FLOAT
    pts = tuple(
        DataPoint(tuple(to_scalar(v, mode) for v in a), to_scalar(b, mode)) for a, b in zip(rows, bs)
    )
    meta = {
        "generator": "random",
        "seed": seed,
        "inlier_frac": str(_fraction(inlier_frac)),
        "planted_inliers": m,
        "planted_outliers": n - m,
        "planted_model": [str(v) for v in truth],
    }
    return Instance(pts, to_scalar(eps, mode), d, mode, meta)
