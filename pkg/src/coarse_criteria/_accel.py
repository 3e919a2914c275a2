"""Hot subset-lattice and radix-sweep kernels.

Choice functions on the full subset lattice are stored as an ``int64`` table
indexed by menu bitmask: ``table[A]`` is the bitmask of ``c(A)``.  Every
kernel here has a numba ``@njit`` version and a vectorized numpy version with
identical results.  The numba path is used when numba imports cleanly and the
environment variable ``COARSE_CRITERIA_NUMBA`` is not set to ``0``; the numpy
path is always importable as ``numpy_kernels`` for cross-checking and
benchmarking.
"""

from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

_WANT_NUMBA = os.environ.get("COARSE_CRITERIA_NUMBA", "1").strip().lower() not in {
    "0",
    "false",
    "no",
    "off",
}

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def decorator(func):
            return func

        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return decorator


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------


def _np_choice_from_ranks(ranks: np.ndarray) -> np.ndarray:
    n = ranks.shape[0]
    size = 1 << n
    table = np.zeros(size, dtype=np.int64)
    best = np.full(size, np.iinfo(np.int64).min, dtype=np.int64)
    for x in range(n):
        lo, hi = 1 << x, 1 << (x + 1)
        bit = np.int64(lo)
        r = np.int64(ranks[x])
        prev_table = table[:lo]
        prev_best = best[:lo]
        table[lo:hi] = np.where(
            r > prev_best, bit, np.where(r == prev_best, prev_table | bit, prev_table)
        )
        best[lo:hi] = np.maximum(prev_best, r)
    return table


def _np_maximal_sets(beats: np.ndarray) -> np.ndarray:
    n = beats.shape[0]
    size = 1 << n
    # beaten_by[x]: mask of y with y R x
    beaten_by = np.zeros(n, dtype=np.int64)
    for y in range(n):
        for x in range(n):
            if (beats[y] >> x) & 1:
                beaten_by[x] |= np.int64(1 << y)
    table = np.zeros(size, dtype=np.int64)
    for x in range(n):
        lo, hi = 1 << x, 1 << (x + 1)
        bit = np.int64(lo)
        lower = np.arange(lo, dtype=np.int64)
        keep = table[:lo] & beaten_by[x]
        x_max = (lower & ~beats[x]) == 0
        table[lo:hi] = keep | np.where(x_max, bit, np.int64(0))
    return table


def _np_interchange_matrix(table: np.ndarray, n: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.int64)
    out = np.zeros((n, n), dtype=np.bool_)
    for x in range(n):
        out[x, x] = True
        has_x = ((masks >> x) & 1).astype(np.bool_)
        chose_x = ((table >> x) & 1).astype(np.bool_)
        for y in range(n):
            if x == y:
                continue
            has_y = ((masks >> y) & 1).astype(np.bool_)
            chose_y = ((table >> y) & 1).astype(np.bool_)
            if np.any(chose_x & has_y & ~chose_y):
                continue
            sel = has_x & ~has_y
            a = masks[sel]
            mirrored = a ^ np.int64((1 << x) | (1 << y))
            if np.array_equal(chose_x[sel], ((table[mirrored] >> y) & 1).astype(np.bool_)):
                out[x, y] = True
    return out


def _np_first_violation(table: np.ndarray, maximal: np.ndarray) -> int:
    bad = np.nonzero(maximal & ~table)[0]
    return int(bad[0]) if bad.size else -1


def _np_radix_sweep(unit_costs: np.ndarray, nmax: int, tol: float):
    ns = np.arange(nmax + 1, dtype=np.int64)
    kmax = unit_costs.shape[0] + 1
    best = np.zeros(nmax + 1, dtype=unit_costs.dtype)
    mask = np.zeros(nmax + 1, dtype=np.int64)
    digits2 = None
    for k in range(2, kmax + 1):
        powers = [1]
        while powers[-1] < nmax:
            powers.append(powers[-1] * k)
        digits = np.searchsorted(np.asarray(powers, dtype=np.int64), ns, side="left")
        digits[0] = 0
        cost = unit_costs[k - 2] * digits.astype(unit_costs.dtype)
        bit = np.int64(1 << k)
        if k == 2:
            best[:] = cost
            mask[:] = bit
            digits2 = digits
            continue
        less = cost < best - tol
        tie = np.abs(cost - best) <= tol
        mask = np.where(less, bit, np.where(tie, mask | bit, mask))
        best = np.where(less, cost, best)
    return best, mask, digits2


numpy_kernels = SimpleNamespace(
    choice_from_ranks=_np_choice_from_ranks,
    maximal_sets=_np_maximal_sets,
    interchange_matrix=_np_interchange_matrix,
    first_violation=_np_first_violation,
    radix_sweep=_np_radix_sweep,
    name="numpy",
)


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------


@njit(cache=True)
def _nb_choice_from_ranks(ranks):
    n = ranks.shape[0]
    size = 1 << n
    table = np.zeros(size, dtype=np.int64)
    best = np.empty(size, dtype=np.int64)
    for mask in range(1, size):
        low = mask & -mask
        x = 0
        while (low >> x) != 1:
            x += 1
        rest = mask ^ low
        r = ranks[x]
        if rest == 0:
            table[mask] = low
            best[mask] = r
        elif r > best[rest]:
            table[mask] = low
            best[mask] = r
        elif r == best[rest]:
            table[mask] = table[rest] | low
            best[mask] = r
        else:
            table[mask] = table[rest]
            best[mask] = best[rest]
    return table


@njit(cache=True)
def _nb_maximal_sets(beats):
    n = beats.shape[0]
    size = 1 << n
    beaten_by = np.zeros(n, dtype=np.int64)
    for y in range(n):
        for x in range(n):
            if (beats[y] >> x) & 1:
                beaten_by[x] |= np.int64(1) << y
    table = np.zeros(size, dtype=np.int64)
    for mask in range(1, size):
        # peel the highest bit so the lower remainder is already filled
        x = 0
        while (mask >> (x + 1)) != 0:
            x += 1
        bit = np.int64(1) << x
        lower = mask ^ bit
        val = table[lower] & beaten_by[x]
        if (lower & ~beats[x]) == 0:
            val |= bit
        table[mask] = val
    return table


@njit(cache=True)
def _nb_interchange_matrix(table, n):
    size = 1 << n
    out = np.zeros((n, n), dtype=np.bool_)
    for x in range(n):
        out[x, x] = True
        bx = np.int64(1) << x
        for y in range(n):
            if x == y:
                continue
            by = np.int64(1) << y
            ok = True
            for a in range(1, size):
                ca = table[a]
                if (ca & bx) and (a & by) and not (ca & by):
                    ok = False
                    break
                if (a & bx) and not (a & by):
                    mirrored = a ^ bx ^ by
                    if ((ca & bx) != 0) != ((table[mirrored] & by) != 0):
                        ok = False
                        break
            out[x, y] = ok
    return out


@njit(cache=True)
def _nb_first_violation(table, maximal):
    for a in range(table.shape[0]):
        if maximal[a] & ~table[a]:
            return a
    return -1


@njit(cache=True)
def _nb_radix_sweep(unit_costs, nmax, tol):
    kmax = unit_costs.shape[0] + 1
    best = np.zeros(nmax + 1, dtype=unit_costs.dtype)
    mask = np.zeros(nmax + 1, dtype=np.int64)
    digits2 = np.zeros(nmax + 1, dtype=np.int64)
    for k in range(2, kmax + 1):
        bit = np.int64(1) << k
        unit = unit_costs[k - 2]
        digits = 0
        power = 1
        for n in range(1, nmax + 1):
            while power < n:
                power *= k
                digits += 1
            cost = unit * digits
            if k == 2:
                best[n] = cost
                mask[n] = bit
                digits2[n] = digits
            elif cost < best[n] - tol:
                best[n] = cost
                mask[n] = bit
            elif abs(cost - best[n]) <= tol:
                mask[n] |= bit
        if k == 2:
            mask[0] = bit
    for k in range(3, kmax + 1):
        mask[0] |= np.int64(1) << k
    return best, mask, digits2


numba_kernels = SimpleNamespace(
    choice_from_ranks=_nb_choice_from_ranks,
    maximal_sets=_nb_maximal_sets,
    interchange_matrix=_nb_interchange_matrix,
    first_violation=_nb_first_violation,
    radix_sweep=_nb_radix_sweep,
    name="numba",
)

USE_NUMBA = NUMBA_AVAILABLE and _WANT_NUMBA
kernels = numba_kernels if USE_NUMBA else numpy_kernels
BACKEND = kernels.name
