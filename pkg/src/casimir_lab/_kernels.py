"""Hot loops of the numerical Lifshitz evaluation.

Two interchangeable implementations are provided: numba-compiled kernels
and a vectorised numpy fallback.  The choice is made once at import time
from ``CASIMIR_LAB_BACKEND`` (``numba``, ``numpy`` or ``auto``, the default)
and can be changed later with :func:`use_backend`.

Material models are passed as an integer ``kind`` plus one float parameter:
``KIND_IDEAL`` (no parameter), ``KIND_PLASMA`` (``omega_tilde**2``) and
``KIND_DIELECTRIC`` (``eps0``).
"""
from __future__ import annotations

import logging
import math
import os

import numpy as np

from .errors import ConfigurationError

log = logging.getLogger(__name__)

KIND_IDEAL = 0
KIND_PLASMA = 1
KIND_DIELECTRIC = 2

MODE_PAR = 0
MODE_PERP = 1

#: y^2 / (r^-2 e^y - 1), integrand of the force between plates
KERNEL_PLATE = 0
#: y ln(1 - r^2 e^-y), integrand of the free energy
KERNEL_LOG = 1

_CHUNK = 4096


# -- numpy implementation ----------------------------------------------------

def _deficit_np(x, y, kind, param, mode):
    """``1 - r^2`` written without cancellation."""
    if kind == KIND_IDEAL:
        return np.zeros(np.broadcast(x, y).shape)
    if kind == KIND_PLASMA:
        s = np.sqrt(param + y * y)
        if mode == MODE_PAR:
            om = 2.0 * x * x * s / (y * (x * x + param) + x * x * s)
            return om * (2.0 - om)
        ys = y + s
        return (1.0 + param / (ys * ys)) * (2.0 * y / ys)
    e = param
    s = np.sqrt((e - 1.0) * x * x + y * y)
    if mode == MODE_PAR:
        d = e * y + s
        return 4.0 * e * y * s / (d * d)
    ys = y + s
    return (1.0 + (e - 1.0) * x * x / (ys * ys)) * (2.0 * y / ys)


def _kernel_np(x, y, kind, param, mode, kernel):
    d = _deficit_np(x, y, kind, param, mode)
    q = np.exp(-y)
    r2 = 1.0 - d
    if kernel == KERNEL_PLATE:
        den = -np.expm1(-y) + d * q
        return y * y * r2 * q / den
    with np.errstate(divide="ignore", invalid="ignore"):
        small = np.log(-np.expm1(-y) + d * q)
        large = np.log1p(-r2 * q)
    return y * np.where(y > 0.5, large, small)


def _inner_integrals_np(x, s_nodes, s_weights, kind, param, mode, kernel):
    out = np.empty(x.shape[0])
    for i in range(0, x.shape[0], _CHUNK):
        xs = x[i:i + _CHUNK, None]
        ys = xs + s_nodes[None, :]
        out[i:i + _CHUNK] = _kernel_np(xs, ys, kind, param, mode, kernel) @ s_weights
    return out


def _cosine_moments_np(x, wh, t, n_harmonics):
    out = np.empty(n_harmonics)
    l_all = np.arange(1, n_harmonics + 1, dtype=float)
    step = max(1, 2_000_000 // max(1, x.shape[0]))
    for j in range(0, n_harmonics, step):
        b = l_all[j:j + step] * t
        out[j:j + step] = np.cos(np.multiply.outer(b, x)) @ wh
    return out


# -- numba implementation ----------------------------------------------------

def _build_numba():
    import numba
    from numba import njit, prange

    if "NUMBA_THREADING_LAYER_PRIORITY" not in os.environ:
        # try TBB last: an outdated TBB library only produces a warning
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

    @njit(cache=True, error_model="numpy")
    def deficit(x, y, kind, param, mode):
        if kind == 0:
            return 0.0
        if kind == 1:
            s = math.sqrt(param + y * y)
            if mode == 0:
                om = 2.0 * x * x * s / (y * (x * x + param) + x * x * s)
                return om * (2.0 - om)
            ys = y + s
            return (1.0 + param / (ys * ys)) * (2.0 * y / ys)
        e = param
        s = math.sqrt((e - 1.0) * x * x + y * y)
        if mode == 0:
            d = e * y + s
            return 4.0 * e * y * s / (d * d)
        ys = y + s
        return (1.0 + (e - 1.0) * x * x / (ys * ys)) * (2.0 * y / ys)

    @njit(cache=True, error_model="numpy")
    def kernel_value(x, y, kind, param, mode, kernel):
        d = deficit(x, y, kind, param, mode)
        q = math.exp(-y)
        r2 = 1.0 - d
        if kernel == 0:
            return y * y * r2 * q / (-math.expm1(-y) + d * q)
        if y > 0.5:
            return y * math.log1p(-r2 * q)
        return y * math.log(-math.expm1(-y) + d * q)

    @njit(cache=True, parallel=True, error_model="numpy")
    def inner_integrals(x, s_nodes, s_weights, kind, param, mode, kernel):
        n = x.shape[0]
        out = np.empty(n)
        for i in prange(n):
            acc = 0.0
            for j in range(s_nodes.shape[0]):
                acc += s_weights[j] * kernel_value(x[i], x[i] + s_nodes[j], kind, param, mode, kernel)
            out[i] = acc
        return out

    @njit(cache=True, parallel=True, error_model="numpy")
    def cosine_moments(x, wh, t, n_harmonics):
        out = np.empty(n_harmonics)
        for l in prange(n_harmonics):
            b = (l + 1) * t
            acc = 0.0
            for i in range(x.shape[0]):
                acc += wh[i] * math.cos(b * x[i])
            out[l] = acc
        return out

    threads = os.environ.get("CASIMIR_LAB_THREADS")
    if threads:
        try:
            numba.set_num_threads(max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS)))
        except ValueError:
            raise ConfigurationError(f"CASIMIR_LAB_THREADS must be an integer, got {threads!r}")
    return inner_integrals, cosine_moments


_NUMBA = None
_backend = None


def available_backends() -> list[str]:
    names = ["numpy"]
    try:
        import numba  # noqa: F401
        names.append("numba")
    except ImportError:
        pass
    return names


def use_backend(name: str) -> str:
    """Select ``numba``, ``numpy`` or ``auto``; returns the backend in effect."""
    global _NUMBA, _backend
    name = (name or "auto").strip().lower()
    if name not in ("numba", "numpy", "auto"):
        raise ConfigurationError(f"unknown backend {name!r}; expected numba, numpy or auto")
    if name == "numpy":
        _backend = "numpy"
        return _backend
    try:
        if _NUMBA is None:
            _NUMBA = _build_numba()
        _backend = "numba"
    except ImportError:
        if name == "numba":
            raise ConfigurationError("numba backend requested but numba is not installed")
        log.info("numba not available, using numpy kernels")
        _backend = "numpy"
    return _backend


def backend() -> str:
    return _backend


def inner_integrals(x, s_nodes, s_weights, kind: int, param: float, mode: int,
                    kernel: int) -> np.ndarray:
    """``H(x) = sum_j w_j K(x, x + s_j)`` for every x, i.e. the y-integral from x to infinity."""
    x = np.ascontiguousarray(x, dtype=float)
    if _backend == "numba":
        return _NUMBA[0](x, s_nodes, s_weights, kind, float(param), mode, kernel)
    return _inner_integrals_np(x, s_nodes, s_weights, kind, float(param), mode, kernel)


def cosine_moments(x, wh, t: float, n_harmonics: int) -> np.ndarray:
    """``sum_i wh_i cos(l t x_i)`` for l = 1..n_harmonics."""
    x = np.ascontiguousarray(x, dtype=float)
    wh = np.ascontiguousarray(wh, dtype=float)
    if n_harmonics <= 0:
        return np.empty(0)
    if _backend == "numba":
        return _NUMBA[1](x, wh, float(t), int(n_harmonics))
    return _cosine_moments_np(x, wh, float(t), int(n_harmonics))


use_backend(os.environ.get("CASIMIR_LAB_BACKEND", "auto"))
