import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from repvar.errors import RankIndeterminateError
from repvar.linalg import expm, lstsq_min_norm, null_space, numerical_rank


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6), st.floats(1e-3, 30.0), st.integers(1, 5))
def test_expm_matches_scipy(seed, scale, n):
    rng = np.random.default_rng(seed)
    a = scale * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / n
    ref = scipy.linalg.expm(a)
    assert np.allclose(expm(a), ref, rtol=1e-10, atol=1e-12 * np.linalg.norm(ref))


def test_expm_trivial_cases():
    assert np.allclose(expm(np.zeros((3, 3))), np.eye(3))
    nil = np.array([[0, 1], [0, 0]], dtype=complex)
    assert np.allclose(expm(nil), [[1, 1], [0, 1]])


def test_rank_and_grey_zone():
    a = np.diag([1.0, 1e-3, 1e-14])
    assert numerical_rank(a) == 2
    with pytest.raises(RankIndeterminateError):
        numerical_rank(np.diag([1.0, 1e-8]))
    assert numerical_rank(np.diag([1.0, 1e-8]), strict=False) in (1, 2)
    assert numerical_rank(np.zeros((2, 2))) == 0


def test_null_space_and_lstsq(rng):
    a = rng.normal(size=(4, 6)) + 1j * rng.normal(size=(4, 6))
    k = null_space(a)
    assert k.shape == (6, 2) and np.allclose(a @ k, 0)
    b = rng.normal(size=4)
    x, res = lstsq_min_norm(a, b)
    assert res < 1e-12
    assert np.allclose(k.conj().T @ x, 0)  # minimal norm: orthogonal to the kernel
