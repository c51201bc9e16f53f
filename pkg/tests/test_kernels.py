import math

import numpy as np
import pytest

from xpforecast import kernels

BACKENDS = ["numpy"] + (["numba"] if kernels.numba_backend is not None else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return kernels.get_backend(request.param)


def test_env_flag_selects_numpy(monkeypatch):
    monkeypatch.setenv(kernels.ENV_FLAG, "1")
    assert kernels.get_backend() is kernels.numpy_backend
    monkeypatch.setenv(kernels.ENV_FLAG, "0")
    expected = kernels.numba_backend or kernels.numpy_backend
    assert kernels.get_backend() is expected


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


def test_mix64_matches_reference_splitmix():
    # splitmix64 finalizer evaluated with Python integers
    mask = (1 << 64) - 1

    def ref(z):
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        return z ^ (z >> 31)

    xs = np.array([0, 1, 12345, mask, 0x9E3779B97F4A7C15], dtype=np.uint64)
    got = kernels.numpy_backend.mix64(xs)
    assert [int(v) for v in got] == [ref(int(x)) for x in xs]


@pytest.mark.parametrize("fill", ["uniform", "normal", "truncnorm"])
def test_chunking_does_not_change_values(backend, fill):
    n = 1000
    whole = np.empty(n)
    parts = np.empty(n)
    args = {"uniform": (1.0, 10.0), "normal": (4.0, 1.0),
            "truncnorm": (0.0, 1.0, 0.5, math.inf, 10_000)}[fill]
    fn = getattr(backend, f"{fill}_fill")
    fn(99, 0, *args, whole)
    for a, b in [(0, 7), (7, 500), (500, 1000)]:
        fn(99, a, *args, parts[a:b])
    np.testing.assert_array_equal(whole, parts)


def test_backends_agree_to_rounding():
    if kernels.numba_backend is None:
        pytest.skip("numba not installed")
    a, b = np.empty(50_000), np.empty(50_000)
    kernels.numpy_backend.truncnorm_fill(3, 10, 4.0, 1.0, 0.1, math.inf, 10_000, a)
    kernels.numba_backend.truncnorm_fill(3, 10, 4.0, 1.0, 0.1, math.inf, 10_000, b)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=0)
    kernels.numpy_backend.uniform_fill(3, 10, 1.0, 10.0, a)
    kernels.numba_backend.uniform_fill(3, 10, 1.0, 10.0, b)
    np.testing.assert_array_equal(a, b)


def test_uniform_range_and_moments(backend):
    n = 200_000
    out = np.empty(n)
    backend.uniform_fill(11, 0, 1.0, 10.0, out)
    assert out.min() >= 1.0 and out.max() < 10.0
    assert abs(out.mean() - 5.5) < 3 * (9 / math.sqrt(12)) / math.sqrt(n)


def test_normal_moments(backend):
    n = 200_000
    out = np.empty(n)
    backend.normal_fill(5, 0, -32.0, 42.0, out)
    assert abs(out.mean() + 32.0) < 3 * 42.0 / math.sqrt(n)
    assert abs(out.std() - 42.0) < 0.5


def test_truncnorm_bounds(backend):
    out = np.empty(20_000)
    assert backend.truncnorm_fill(8, 0, 0.0, 1.0, -0.25, 0.5, 10_000, out) == -1
    assert out.min() >= -0.25 and out.max() <= 0.5


def test_truncnorm_reports_exhaustion(backend):
    out = np.empty(4)
    # acceptance probability ~1e-23: every draw exhausts its attempts
    assert backend.truncnorm_fill(8, 40, 0.0, 1.0, 10.0, 11.0, 50, out) == 40
