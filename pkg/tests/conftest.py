import random
from fractions import Fraction

from hypothesis import HealthCheck, settings

from maxcon import Instance

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def random_instance(rng: random.Random, n: int, d: int, exact: bool, degenerate: bool = False):
    """Small integer-valued instance; ``degenerate`` draws from {-2..2} to force ties."""
    span = 2 if degenerate else 9
    A = [[rng.randint(-span, span) for _ in range(d)] for _ in range(n)]
    b = [rng.randint(-span, span) for _ in range(n)]
    eps = Fraction(rng.randint(0, 4), 2)
    if not exact:
        A = [[v + rng.uniform(-0.3, 0.3) for v in row] for row in A]
        b = [v + rng.uniform(-0.3, 0.3) for v in b]
        eps = float(eps) + 0.05
    return Instance.build(A, b, eps, exact=exact)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for num in sorted(results):
            terminalreporter.write_line(results[num])
