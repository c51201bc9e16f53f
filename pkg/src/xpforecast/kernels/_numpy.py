"""Pure-numpy sampling kernels.

Each draw ``i`` of a node owns a splitmix64 stream seeded from
``mix64(key ^ mix64(i * GOLDEN + DRAW_SALT))``; uniform number ``k`` of that
stream is ``mix64(state + (k + 1) * GOLDEN)``.  Nothing depends on how draws are
batched, so any chunking of ``[start, start + n)`` gives the same values.
"""
import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
DRAW_SALT = np.uint64(0xD1B54A32D192ED03)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_MASK64 = (1 << 64) - 1
_TWO_M53 = 1.0 / 9007199254740992.0
_TWO_PI = 2.0 * np.pi


def mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def draw_states(key, start, n):
    idx = np.arange(start, start + n, dtype=np.uint64)
    return mix64(np.uint64(key) ^ mix64(idx * GOLDEN + DRAW_SALT))


def uniforms(states, k):
    """The ``k``-th uniform in [0, 1) of every draw stream in ``states``."""
    offset = np.uint64(((k + 1) * int(GOLDEN)) & _MASK64)
    bits = mix64(states + offset)
    return (bits >> _S11).astype(np.float64) * _TWO_M53


def _std_normal(states, k):
    # Box-Muller, cosine branch only; uses uniforms 2k and 2k+1
    u1 = 1.0 - uniforms(states, 2 * k)
    u2 = uniforms(states, 2 * k + 1)
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(_TWO_PI * u2)


def uniform_fill(key, start, low, high, out):
    states = draw_states(key, start, out.shape[0])
    out[:] = low + (high - low) * uniforms(states, 0)


def normal_fill(key, start, mean, sd, out):
    states = draw_states(key, start, out.shape[0])
    out[:] = mean + sd * _std_normal(states, 0)


def truncnorm_fill(key, start, mean, sd, low, high, max_tries, out):
    """Rejection from N(mean, sd); returns the first failing draw index or -1."""
    n = out.shape[0]
    states = draw_states(key, start, n)
    pending = np.arange(n)
    for attempt in range(max_tries):
        if pending.size == 0:
            return -1
        x = mean + sd * _std_normal(states[pending], attempt)
        ok = (x >= low) & (x <= high)
        out[pending[ok]] = x[ok]
        pending = pending[~ok]
    if pending.size == 0:
        return -1
    return int(start + pending[0])
