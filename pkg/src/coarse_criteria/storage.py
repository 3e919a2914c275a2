"""Cost-optimal digit bases for storing an integer in ``1..n``.

Storing one of ``n`` values with ``N`` base-``k`` digits costs ``kappa(k) * N``
where ``N`` is the least integer with ``k**N >= n``.  Digit counts are found by
exact integer multiplication, never by floating-point logarithms.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._accel import kernels
from .efficiency import (
    TOL,
    BinaryConditionReport,
    CostModel,
    Number,
    binary_condition,
    compare,
)
from .relations import InputError

# base bitmasks are int64
MAX_SWEEP_BASE = 62


@dataclass(frozen=True)
class StoragePlan:
    n: int
    k: int
    digits: int
    cost: Number


def digit_count(n: int, k: int) -> int:
    """Least ``N >= 0`` with ``k**N >= n``."""
    if n < 1 or k < 2:
        raise InputError("need n >= 1 and k >= 2")
    digits, power = 0, 1
    while power < n:
        power *= k
        digits += 1
    return digits


def storage_cost(n: int, k: int, kappa: CostModel) -> StoragePlan:
    digits = digit_count(n, k)
    return StoragePlan(n, k, digits, kappa(k) * digits)


@dataclass(frozen=True)
class OptimalBases:
    n: int
    bases: tuple[int, ...]
    cost: Number
    plans: tuple[StoragePlan, ...]


def optimal_bases(n: int, kappa: CostModel, k_max: int) -> OptimalBases:
    """All bases in ``2..k_max`` attaining the minimum storage cost for ``n``."""
    if k_max < 2:
        raise InputError("k_max must be at least 2")
    plans = tuple(storage_cost(n, k, kappa) for k in range(2, k_max + 1))
    best = plans[0].cost
    for p in plans[1:]:
        if compare(p.cost, best) < 0:
            best = p.cost
    bases = tuple(p.k for p in plans if compare(p.cost, best) == 0)
    return OptimalBases(n, bases, best, plans)


@dataclass(frozen=True)
class RadixSweep:
    """Per-``n`` minimum cost and minimizing bases for ``n = 0..n_max``.

    ``best`` holds costs multiplied by ``scale`` (exact integers when the model
    is rational and the values fit in int64, floats otherwise).
    """

    k_max: int
    n_max: int
    best: np.ndarray
    masks: np.ndarray
    scale: int
    exact: bool

    def bases(self, n: int) -> tuple[int, ...]:
        m = int(self.masks[n])
        return tuple(k for k in range(2, self.k_max + 1) if (m >> k) & 1)

    def cost(self, n: int) -> Number:
        if self.exact:
            return Fraction(int(self.best[n]), self.scale)
        return float(self.best[n])

    def binary_strict(self) -> np.ndarray:
        """Boolean array: base 2 is the unique minimizer at ``n``."""
        return self.masks == np.int64(1 << 2)

    def rows(self, start: int = 1):
        for n in range(start, self.n_max + 1):
            yield n, self.bases(n), self.cost(n)


def _unit_costs(kappa: CostModel, k_max: int, n_max: int) -> tuple[np.ndarray, int, bool, object]:
    units = [kappa(k) for k in range(2, k_max + 1)]
    if all(isinstance(u, Fraction) for u in units):
        scale = math.lcm(*(u.denominator for u in units))
        ints = [int(u * scale) for u in units]
        max_digits = digit_count(max(n_max, 1), 2)
        if max(ints) * max(max_digits, 1) < 2**62:
            return np.asarray(ints, dtype=np.int64), scale, True, np.int64(0)
    return np.asarray([float(u) for u in units], dtype=np.float64), 1, False, np.float64(TOL)


def sweep(kappa: CostModel, k_max: int, n_max: int) -> RadixSweep:
    """Optimal bases for every ``n`` up to ``n_max`` via the compiled kernel."""
    if k_max < 2 or n_max < 1:
        raise InputError("need k_max >= 2 and n_max >= 1")
    if k_max > MAX_SWEEP_BASE:
        raise InputError(f"k_max is capped at {MAX_SWEEP_BASE} for sweeps")
    units, scale, exact, tol = _unit_costs(kappa, k_max, n_max)
    best, masks, _ = kernels.radix_sweep(units, n_max, tol)
    return RadixSweep(k_max, n_max, np.asarray(best), np.asarray(masks), scale, exact)


@dataclass(frozen=True)
class StorageWitness:
    n: int
    k: int
    cost_k: Number
    cost_binary: Number

    @property
    def tie(self) -> bool:
        return compare(self.cost_k, self.cost_binary) == 0


@dataclass(frozen=True)
class BinaryOptimalityReport:
    binary_optimal: bool
    condition: BinaryConditionReport
    witness: StorageWitness | None
    witnesses: tuple[StorageWitness, ...]
    failures: int
    k_max: int
    n_max: int

    @property
    def condition_holds(self) -> bool:
        return self.condition.holds

    @property
    def agree(self) -> bool:
        return self.binary_optimal == self.condition.holds


def _witness(n: int, k: int, kappa: CostModel) -> StorageWitness:
    return StorageWitness(n, k, storage_cost(n, k, kappa).cost, storage_cost(n, 2, kappa).cost)


def binary_always_optimal(kappa: CostModel, k_max: int, n_max: int) -> BinaryOptimalityReport:
    """Is base 2 the strict minimizer for every ``n`` in ``2..n_max`` over bases ``2..k_max``?

    The sweep is cross-checked against :func:`binary_condition`.  For each base
    ``k`` where the condition fails, ``n = k`` is tried first as a witness, then
    the powers ``k**m``; failures found only by the sweep are reported last.
    """
    if k_max < 3 or n_max < 2:
        raise InputError("need k_max >= 3 and n_max >= 2")
    cond = binary_condition(kappa, k_max)
    result = sweep(kappa, k_max, n_max)
    strict = result.binary_strict()
    strict[:2] = True  # n = 0, 1 are excluded: every base ties at zero digits
    failing_n = np.nonzero(~strict)[0]
    witnesses = []
    for k in cond.failing:
        n = k
        while n <= n_max:
            if not strict[n] and k in result.bases(n):
                witnesses.append(_witness(n, k, kappa))
                break
            n *= k
    if failing_n.size:
        n = int(failing_n[0])
        k = next(b for b in result.bases(n) if b != 2)
        first = _witness(n, k, kappa)
        if all((w.n, w.k) != (n, k) for w in witnesses):
            witnesses.append(first)
    witness = witnesses[0] if witnesses else None
    return BinaryOptimalityReport(
        binary_optimal=failing_n.size == 0,
        condition=cond,
        witness=witness,
        witnesses=tuple(witnesses),
        failures=int(failing_n.size),
        k_max=k_max,
        n_max=n_max,
    )


def encode(value: int, plan: StoragePlan) -> tuple[int, ...]:
    """Big-endian base-``k`` digits of ``value - 1``, zero-padded to ``plan.digits``."""
    if not 1 <= value <= plan.n:
        raise InputError(f"value {value} outside 1..{plan.n}")
    rest = value - 1
    digits = [0] * plan.digits
    for pos in range(plan.digits - 1, -1, -1):
        rest, digits[pos] = divmod(rest, plan.k)
    return tuple(digits)


def decode(digits: Sequence[int], plan: StoragePlan) -> int:
    if len(digits) != plan.digits:
        raise InputError(f"expected {plan.digits} digits, got {len(digits)}")
    value = 0
    for d in digits:
        if not 0 <= d < plan.k:
            raise InputError(f"digit {d} outside 0..{plan.k - 1}")
        value = value * plan.k + d
    value += 1
    if value > plan.n:
        raise InputError(f"digits decode to {value}, outside 1..{plan.n}")
    return value
