"""Float kernels for long partial sums of a series term f(k, x).

The term is compiled from its expression into Python source. With numba
available the scalar loop is ``@njit``-compiled; otherwise, or when
``BCONTINUUM_NUMBA=0``, a chunked numpy version is used. Both return the
running sum after the chunk and the bump-weighted mean of the running sums
inside it.
"""

from __future__ import annotations

import math
import os
from functools import lru_cache

import numpy as np

from bcontinuum import expr as E

ENV_FLAG = "BCONTINUUM_NUMBA"
_CHUNK = 1 << 18

try:  # optional accelerator
    import numba
except ImportError:  # pragma: no cover - depends on the environment
    numba = None


def numba_enabled() -> bool:
    if numba is None:
        return False
    return os.environ.get(ENV_FLAG, "1").strip().lower() not in ("0", "false", "no", "off")


def backend_name() -> str:
    return "numba" if numba_enabled() else "numpy"


_LOOP_TEMPLATE = """
def advance(x, s, k_lo, k_hi, weighted):
    acc = 0.0
    wsum = 0.0
    span = float(k_hi - k_lo)
    for k_int in range(k_lo, k_hi + 1):
        k = float(k_int)
        s += {body}
        if weighted:
            t = (k_int - k_lo) / span
            if 0.0 < t < 1.0:
                w = math.exp(-1.0 / (t * (1.0 - t)))
                acc += w * s
                wsum += w
    if wsum > 0.0:
        return s, acc / wsum
    return s, s
"""


@lru_cache(maxsize=64)
def _numba_kernel(source: str):
    ns = {"math": math}
    exec(_LOOP_TEMPLATE.format(body=source), ns)  # noqa: S102 - source is generated from a parsed AST
    return numba.njit(cache=False, fastmath=False)(ns["advance"])


@lru_cache(maxsize=64)
def _numpy_term(source: str):
    ns = {"np": np}
    exec(f"def term(k, x):\n    return {source}\n", ns)  # noqa: S102
    return ns["term"]


def _advance_numpy(term, x, s, k_lo, k_hi, weighted):
    acc = 0.0
    wsum = 0.0
    span = float(k_hi - k_lo)
    start = k_lo
    while start <= k_hi:
        stop = min(k_hi, start + _CHUNK - 1)
        k = np.arange(start, stop + 1, dtype=np.float64)
        vals = np.asarray(term(k, x), dtype=np.float64) * np.ones_like(k)
        run = s + np.cumsum(vals)
        s = float(run[-1])
        if weighted:
            t = (k - k_lo) / span
            inside = (t > 0.0) & (t < 1.0)
            w = np.zeros_like(t)
            w[inside] = np.exp(-1.0 / (t[inside] * (1.0 - t[inside])))
            acc += float(np.dot(w, run))
            wsum += float(w.sum())
        start = stop + 1
    if wsum > 0.0:
        return s, acc / wsum
    return s, s


class TermKernel:
    """Partial-sum engine for one term expression in ``k`` and ``x``."""

    def __init__(self, term: E.Expr, use_numba: bool | None = None):
        extra = E.free_vars(term) - {"k", "x"}
        if extra:
            raise ValueError(f"series terms use k and x, got {sorted(extra)}")
        self.term = term
        self.use_numba = numba_enabled() if use_numba is None else (use_numba and numba is not None)
        if self.use_numba:
            self._fn = _numba_kernel(E.to_source(term, "math"))
        else:
            self._fn = _numpy_term(E.to_source(term, "np"))

    @property
    def backend(self) -> str:
        return "numba" if self.use_numba else "numpy"

    def advance(self, x: float, s: float, k_lo: int, k_hi: int, weighted: bool = False):
        """Add terms k_lo..k_hi to ``s``; return (new sum, weighted mean of running sums)."""
        if k_hi < k_lo:
            return s, s
        if self.use_numba:
            return self._fn(float(x), float(s), int(k_lo), int(k_hi), bool(weighted))
        return _advance_numpy(self._fn, float(x), float(s), int(k_lo), int(k_hi), weighted)

    def partial_sums(self, x: float, k_lo: int, k_hi: int) -> np.ndarray:
        """Running sums S_k for k = k_lo..k_hi starting from zero (numpy, short ranges)."""
        term = _numpy_term(E.to_source(self.term, "np"))
        k = np.arange(k_lo, k_hi + 1, dtype=np.float64)
        vals = np.asarray(term(k, float(x)), dtype=np.float64) * np.ones_like(k)
        return np.cumsum(vals)
