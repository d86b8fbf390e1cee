"""Hot numeric kernel for the idempotent feasibility search.

The projected-descent loop is the only floating-point inner loop in the
package, so it carries a numba-compiled fast path with a pure-numpy twin.
Both backends execute the same function body; ``RIESZLAB_BACKEND=numpy``
forces the fallback, ``RIESZLAB_BACKEND=numba`` insists on the compiled
kernel, and by default the compiled kernel is used whenever numba imports.
``benchmarks/bench_search.py`` compares the two.
"""

from __future__ import annotations

import os

import numpy as np


def _descent_impl(starts, alpha, iters, step0, success_tol):
    """Projected descent on the squared idempotency residual.

    Feasible set: entrywise nonnegative matrices with every diagonal entry
    pinned to alpha.  Each restart walks downhill on 0.5 * ||P @ P - P||_F^2,
    clamping negatives and resetting the diagonal after every step, halving
    the step on non-improvement.  Returns the smallest max-entry residual
    |P @ P - P| seen, the matrix achieving it, and the restarts consumed.
    """
    restarts = starts.shape[0]
    n = starts.shape[1]
    best = np.inf
    best_p = np.zeros((n, n))
    used = 0
    for r in range(restarts):
        used = r + 1
        p = starts[r].copy()
        for k in range(n):
            p[k, k] = alpha
        step = step0
        resid = p @ p - p
        f = np.sum(resid * resid)
        for _ in range(iters):
            grad = p.T @ resid + resid @ p.T - resid
            cand = p - step * grad
            cand = np.maximum(cand, 0.0)
            for k in range(n):
                cand[k, k] = alpha
            cand_resid = cand @ cand - cand
            cand_f = np.sum(cand_resid * cand_resid)
            if cand_f < f:
                p = cand
                resid = cand_resid
                f = cand_f
            else:
                step *= 0.5
                if step < 1e-18:
                    break
            if np.max(np.abs(resid)) <= success_tol:
                break
        res = np.max(np.abs(resid))
        if res < best:
            best = res
            best_p = p.copy()
        if best <= success_tol:
            break
    return best, best_p, used


_impl_numpy = _descent_impl

try:
    from numba import njit

    _impl_numba = njit(cache=True)(_descent_impl)
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    _impl_numba = None
    HAVE_NUMBA = False

_ENV_FLAG = "RIESZLAB_BACKEND"


def active_backend() -> str:
    """Backend selected by the environment, defaulting to numba when present."""
    choice = os.environ.get(_ENV_FLAG, "").strip().lower()
    if choice in ("numpy", "python"):
        return "numpy"
    if choice == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError(f"{_ENV_FLAG}=numba but numba is not importable")
        return "numba"
    if choice:
        raise RuntimeError(f"unknown {_ENV_FLAG}={choice!r}; use 'numba' or 'numpy'")
    return "numba" if HAVE_NUMBA else "numpy"


def run_descent(starts: np.ndarray, alpha: float, iters: int, step0: float,
                success_tol: float, backend: str | None = None):
    """Dispatch the descent kernel to the requested or active backend."""
    chosen = backend or active_backend()
    if chosen == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend unavailable")
        impl = _impl_numba
    elif chosen == "numpy":
        impl = _impl_numpy
    else:
        raise RuntimeError(f"unknown backend {chosen!r}")
    starts = np.ascontiguousarray(starts, dtype=np.float64)
    best, best_p, used = impl(starts, float(alpha), int(iters), float(step0), float(success_tol))
    return float(best), np.asarray(best_p), int(used), chosen
