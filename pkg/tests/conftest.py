import numpy as np
import pytest


@pytest.fixture(autouse=True, scope="session")
def _isolated_cache(tmp_path_factory):
    """Keep prime and decomposition caches out of the home directory."""
    mp = pytest.MonkeyPatch()
    mp.setenv("SATAKE_LAB_CACHE", str(tmp_path_factory.mktemp("cache")))
    yield
    mp.undo()


def random_torus_points(rng: np.random.Generator, n: int, r: int) -> np.ndarray:
    """(n, r) unit-modulus entries with product exactly 1 up to rounding."""
    ang = rng.uniform(-np.pi, np.pi, size=(n, r - 1))
    ang = np.concatenate([ang, -ang.sum(axis=1, keepdims=True)], axis=1)
    return np.exp(1j * ang)
