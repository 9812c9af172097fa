import numpy as np
import pytest

from curvlab import families


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_family_algebra(rng, trial: int, n: int | None = None):
    """Alternate between the two families and sampling modes."""
    n = n if n is not None else int(rng.integers(2, 5))
    if trial % 3 == 0:
        p = families.sample_almost_abelian(n, rng, unimodular=bool(trial % 2))
        return families.build_almost_abelian(p)
    p = families.sample_codim2(n, "AB"[trial % 2], rng, unimodular=bool((trial // 2) % 2))
    return families.build_codim2(p)
