"""numba versions of the sampling kernels; same streams as ``_numpy``."""
import math

import numpy as np
from numba import njit

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
DRAW_SALT = np.uint64(0xD1B54A32D192ED03)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_ONE = np.uint64(1)
_TWO_M53 = 1.0 / 9007199254740992.0
_TWO_PI = 2.0 * math.pi


@njit(cache=True, nogil=True)
def mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(cache=True, nogil=True)
def _draw_state(key, i):
    return mix64(key ^ mix64(np.uint64(i) * GOLDEN + DRAW_SALT))


@njit(cache=True, nogil=True)
def _uniform(state, k):
    bits = mix64(state + (np.uint64(k) + _ONE) * GOLDEN)
    return np.float64(bits >> _S11) * _TWO_M53


@njit(cache=True, nogil=True)
def _std_normal(state, k):
    u1 = 1.0 - _uniform(state, 2 * k)
    u2 = _uniform(state, 2 * k + 1)
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(_TWO_PI * u2)


@njit(cache=True, nogil=True)
def _uniform_fill(key, start, low, high, out):
    for j in range(out.shape[0]):
        out[j] = low + (high - low) * _uniform(_draw_state(key, start + j), 0)


@njit(cache=True, nogil=True)
def _normal_fill(key, start, mean, sd, out):
    for j in range(out.shape[0]):
        out[j] = mean + sd * _std_normal(_draw_state(key, start + j), 0)


@njit(cache=True, nogil=True)
def _truncnorm_fill(key, start, mean, sd, low, high, max_tries, out):
    for j in range(out.shape[0]):
        state = _draw_state(key, start + j)
        accepted = False
        for attempt in range(max_tries):
            x = mean + sd * _std_normal(state, attempt)
            if x >= low and x <= high:
                out[j] = x
                accepted = True
                break
        if not accepted:
            return start + j
    return -1


def uniform_fill(key, start, low, high, out):
    _uniform_fill(np.uint64(key), np.int64(start), float(low), float(high), out)


def normal_fill(key, start, mean, sd, out):
    _normal_fill(np.uint64(key), np.int64(start), float(mean), float(sd), out)


def truncnorm_fill(key, start, mean, sd, low, high, max_tries, out):
    return int(_truncnorm_fill(np.uint64(key), np.int64(start), float(mean), float(sd),
                               float(low), float(high), int(max_tries), out))
