import math

import numpy as np
import pytest

from hbt_renyi.gaussian import StandardForm, is_physical

OMEGA = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def dense_symplectic_eigenvalues(m):
    """Moduli of the eigenvalues of i*Omega*sigma, each pair collapsed."""
    ev = np.sort(np.abs(np.linalg.eigvals(1j * OMEGA @ np.asarray(m))))
    return ev[0], ev[-1]


def random_physical_standard_form(rng, a_range=(1.0, 10.0), log_c=False):
    """Rejection-sample a physical (generally asymmetric) standard form."""
    while True:
        a = rng.uniform(*a_range)
        b = rng.uniform(*a_range)
        bound = math.sqrt((a * a - 1) * (b * b - 1))
        if bound < 1e-4:
            continue
        if log_c:
            c = rng.choice([-1, 1]) * 10 ** rng.uniform(-4, math.log10(bound))
        else:
            c = rng.uniform(-bound, bound)
        d = rng.uniform(-bound, bound)
        sf = StandardForm(a, b, c, d)
        if is_physical(sf):
            return sf


def random_in_family(rng, a_range=(1.0, 100.0)):
    """a == b with c == d (HBT-like) or c == -d (squeezed-like), up to the boundary."""
    a = rng.uniform(*a_range)
    if rng.random() < 0.5:
        c = rng.uniform(-1, 1) * (a - 1)
        return StandardForm(a, a, c, c)
    c = rng.uniform(-1, 1) * math.sqrt(a * a - 1)
    return StandardForm(a, a, c, -c)


def random_tmsv(rng):
    from hbt_renyi.gaussian import two_mode_squeezed_vacuum

    return two_mode_squeezed_vacuum(rng.uniform(0.01, 2.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
