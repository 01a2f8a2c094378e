"""Optional numba acceleration with pure-numpy fallbacks.

The environment variable ``SPECBAND_NUMBA`` selects the backend:

* unset or anything else: use numba when importable, numpy otherwise;
* ``0``/``false``/``off``: force the numpy paths;
* ``1``/``true``/``on``: require numba, raise ImportError if missing.

Each hot kernel exists twice: a jitted scalar-loop version and a
vectorized numpy twin.  Integer kernels agree exactly; floating-point
kernels agree to round-off (the numpy twins reorder accumulations).
``benchmarks/kernel_benchmark.py`` compares the two backends.
"""

import os

import numpy as np


def _numba_mode():
    raw = os.environ.get("SPECBAND_NUMBA", "").strip().lower()
    if raw in ("0", "false", "off", "no"):
        return "off"
    if raw in ("1", "true", "on", "yes"):
        return "require"
    return "auto"


_MODE = _numba_mode()
NUMBA_ENABLED = False
if _MODE != "off":
    try:
        import numba

        NUMBA_ENABLED = True
    except ImportError:
        if _MODE == "require":
            raise ImportError(
                "SPECBAND_NUMBA=1 requires numba, which is not importable"
            )

if NUMBA_ENABLED:
    _njit = numba.njit(cache=True)
else:

    def _njit(*args, **kwargs):
        # no-op decorator so the jitted definitions stay importable
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


# ---------------------------------------------------------------------------
# AR(2) recursion


def _ar2_filter_np(innovations, phi1, phi2):
    out = np.empty_like(innovations)
    n = innovations.shape[0]
    if n > 0:
        out[0] = innovations[0]
    if n > 1:
        out[1] = phi1 * out[0] + innovations[1]
    for t in range(2, n):
        out[t] = phi1 * out[t - 1] + phi2 * out[t - 2] + innovations[t]
    return out


@_njit
def _ar2_filter_jit(innovations, phi1, phi2):
    n, p = innovations.shape
    out = np.empty_like(innovations)
    for j in range(p):
        if n > 0:
            out[0, j] = innovations[0, j]
        if n > 1:
            out[1, j] = phi1 * out[0, j] + innovations[1, j]
    for t in range(2, n):
        for j in range(p):
            out[t, j] = phi1 * out[t - 1, j] + phi2 * out[t - 2, j] \
                + innovations[t, j]
    return out


def ar2_filter(innovations, phi1, phi2):
    """Run x_t = phi1*x_{t-1} + phi2*x_{t-2} + e_t with zero initial state.

    Parameters
    ----------
    innovations : ndarray, shape (n, p)
        Innovation sequence, one column per component.
    phi1, phi2 : float
        Autoregressive coefficients shared by all components.

    Returns
    -------
    ndarray, shape (n, p)
        The filtered series.
    """
    innovations = np.ascontiguousarray(innovations, dtype=np.float64)
    if NUMBA_ENABLED:
        return _ar2_filter_jit(innovations, float(phi1), float(phi2))
    return _ar2_filter_np(innovations, float(phi1), float(phi2))


# ---------------------------------------------------------------------------
# circular moving average (the discrete uniform smoother)


def _circ_mavg_np(values, m):
    n = values.shape[0]
    if m == 0:
        return values.copy()
    width = 2 * m + 1
    padded = np.concatenate([values[-m:], values, values[:m]], axis=0)
    csum = np.cumsum(padded, axis=0)
    head = csum[width - 1 :]
    tail = np.concatenate(
        [np.zeros((1,) + values.shape[1:], dtype=csum.dtype), csum[: n - 1]],
        axis=0,
    )
    return (head - tail) / width


@_njit
def _circ_mavg_jit(values, m):
    n, k = values.shape
    out = np.empty_like(values)
    width = 2 * m + 1
    inv = 1.0 / width
    for j in range(k):
        s = values[0, j] - values[0, j]
        for offset in range(-m, m + 1):
            s = s + values[offset % n, j]
        out[0, j] = s * inv
        for t in range(1, n):
            s = s + values[(t + m) % n, j] - values[(t - m - 1) % n, j]
            out[t, j] = s * inv
    return out


def circ_mavg(values, m):
    """Circular (2m+1)-point moving average along axis 0.

    Parameters
    ----------
    values : ndarray, shape (n, k)
        Real or complex columns; the window wraps around the ends.
    m : int
        Half-span; 2m+1 must not exceed n.

    Returns
    -------
    ndarray, shape (n, k)
    """
    m = int(m)
    n = values.shape[0]
    if m < 0:
        raise ValueError("half-span m must be nonnegative")
    if 2 * m + 1 > n:
        raise ValueError(f"window 2*{m}+1 exceeds the {n}-point circular grid")
    if NUMBA_ENABLED and m > 0:
        return _circ_mavg_jit(np.ascontiguousarray(values), m)
    return _circ_mavg_np(values, m)


# ---------------------------------------------------------------------------
# block-resampling index assembly


def _assemble_block_indices_np(starts, lengths, n):
    totals = np.cumsum(lengths)
    positions = np.arange(n, dtype=np.int64)
    block = np.searchsorted(totals, positions, side="right")
    within = positions - (totals[block] - lengths[block])
    return (starts[block] + within) % n


@_njit
def _assemble_block_indices_jit(starts, lengths, n):
    idx = np.empty(n, dtype=np.int64)
    pos = 0
    for b in range(starts.shape[0]):
        start = starts[b]
        for offset in range(lengths[b]):
            if pos == n:
                return idx
            idx[pos] = (start + offset) % n
            pos += 1
    return idx


def assemble_block_indices(starts, lengths, n):
    """Expand (start, length) block draws into n circular row indices.

    Parameters
    ----------
    starts, lengths : ndarray of int64
        Pre-drawn block start positions and block lengths; their total
        length must cover n.
    n : int
        Output length (the original series length).

    Returns
    -------
    ndarray of int64, shape (n,)
    """
    starts = np.ascontiguousarray(starts, dtype=np.int64)
    lengths = np.ascontiguousarray(lengths, dtype=np.int64)
    if int(lengths.sum()) < n:
        raise ValueError("drawn blocks do not cover the series")
    if NUMBA_ENABLED:
        return _assemble_block_indices_jit(starts, lengths, int(n))
    return _assemble_block_indices_np(starts, lengths, int(n))
