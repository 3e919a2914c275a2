"""Category cost models and efficiency of criteria sets.

Costs are exact :class:`~fractions.Fraction` values whenever the model allows
(tables, linear and ceil-log models, integer powers); otherwise floats, which
are compared with an absolute tolerance of ``TOL``.  A criterion with one
category always costs zero.
"""

from __future__ import annotations

import ast
import enum
import math
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

from .criteria import CriteriaSet, discrimination_vector
from .relations import InputError

TOL = 1e-9
FRONTIER_BUDGET_CAP = 24

Number = Fraction | float


class CostModelError(InputError):
    pass


class EnumerationLimitError(InputError):
    pass


def as_number(x) -> Number:
    """Exact Fraction for ints, Fractions and ``"p/q"`` strings; float otherwise."""
    if isinstance(x, bool):
        raise CostModelError(f"not a cost: {x!r}")
    if isinstance(x, (int, Fraction, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise CostModelError(f"not a number: {x!r}") from None
    if isinstance(x, float):
        if not math.isfinite(x):
            raise CostModelError(f"non-finite cost {x!r}")
        return x
    raise CostModelError(f"not a number: {x!r}")


def compare(a: Number, b: Number) -> int:
    """-1, 0 or 1; exact for Fractions, ``TOL``-tolerant if either side is a float."""
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return (a > b) - (a < b)
    d = float(a) - float(b)
    if abs(d) <= TOL:
        return 0
    return 1 if d > 0 else -1


def ceil_log2(e: int) -> int:
    """Exact ``ceil(log2 e)`` for ``e >= 1``."""
    if e < 1:
        raise ValueError("ceil_log2 needs e >= 1")
    return (e - 1).bit_length()


def format_number(x: Number) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(float(x))


# ---------------------------------------------------------------------------
# expression models
# ---------------------------------------------------------------------------


def _fn_log2(x: Number) -> Number:
    if isinstance(x, Fraction) and x > 0 and x.denominator == 1 and x.numerator & (x.numerator - 1) == 0:
        return Fraction(x.numerator.bit_length() - 1)
    return math.log2(x)


def _fn_sqrt(x: Number) -> Number:
    if isinstance(x, Fraction) and x >= 0:
        num, den = math.isqrt(x.numerator), math.isqrt(x.denominator)
        if num * num == x.numerator and den * den == x.denominator:
            return Fraction(num, den)
    return math.sqrt(x)


def _fn_ceil(x: Number) -> Number:
    return Fraction(math.ceil(x))


def _fn_floor(x: Number) -> Number:
    return Fraction(math.floor(x))


_FUNCTIONS: dict[str, Callable[..., Number]] = {
    "log2": _fn_log2,
    "ln": lambda x: math.log(x),
    "log": lambda x: math.log(x),
    "sqrt": _fn_sqrt,
    "ceil": _fn_ceil,
    "floor": _fn_floor,
    "clog2": lambda x: Fraction(ceil_log2(int(x))),
    "min": min,
    "max": max,
}


def _power(base: Number, exp: Number) -> Number:
    if isinstance(exp, Fraction) and exp.denominator == 1 and isinstance(base, Fraction):
        if base == 0 and exp < 0:
            raise ZeroDivisionError("0 to a negative power")
        return base ** int(exp)
    return float(base) ** float(exp)


def _eval_node(node: ast.AST, e: Fraction) -> Number:
    if isinstance(node, ast.Expression):
        return _eval_node(node.body, e)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        return as_number(node.value)
    if isinstance(node, ast.Name) and node.id == "e":
        return e
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
        v = _eval_node(node.operand, e)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        a, b = _eval_node(node.left, e), _eval_node(node.right, e)
        op = node.op
        if isinstance(op, ast.Add):
            return a + b
        if isinstance(op, ast.Sub):
            return a - b
        if isinstance(op, ast.Mult):
            return a * b
        if isinstance(op, ast.Div):
            return a / b
        if isinstance(op, ast.Pow):
            return _power(a, b)
    if (
        isinstance(node, ast.Call)
        and isinstance(node.func, ast.Name)
        and node.func.id in _FUNCTIONS
        and not node.keywords
    ):
        return _FUNCTIONS[node.func.id](*(_eval_node(a, e) for a in node.args))
    raise CostModelError(f"unsupported syntax in cost expression: {ast.dump(node)}")


def _compile_expression(formula: str) -> ast.Expression:
    try:
        tree = ast.parse(formula.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise CostModelError(f"cannot parse cost expression {formula!r}: {exc.msg}") from None
    for node in ast.walk(tree):
        if isinstance(node, ast.Name) and node.id != "e" and node.id not in _FUNCTIONS:
            raise CostModelError(f"unknown name {node.id!r} in cost expression; only 'e' is a variable")
    return tree


# ---------------------------------------------------------------------------
# cost models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CostModel:
    """Cost ``kappa(e)`` of a criterion with ``e`` categories.

    ``kappa(1) == 0`` for every kind; the parametric formula is only consulted
    for ``e >= 2``.
    """

    kind: str
    label: str
    _fn: Callable[[int], Number] = field(repr=False, compare=False)
    entries: Mapping[int, Number] | None = field(default=None, repr=False, compare=False)

    def __call__(self, e: int) -> Number:
        if not isinstance(e, (int,)) or isinstance(e, bool) or e < 1:
            raise CostModelError(f"category counts are positive integers, got {e!r}")
        if e == 1:
            return Fraction(0)
        try:
            value = self._fn(e)
        except (ArithmeticError, ValueError, TypeError) as exc:
            raise CostModelError(f"{self.label}: cannot evaluate at e={e}: {exc}") from None
        value = as_number(value)
        if compare(value, Fraction(0)) < 0:
            raise CostModelError(f"{self.label}: negative cost {value} at e={e}")
        return value

    def __str__(self) -> str:
        return self.label

    @classmethod
    def table(cls, values: Mapping[int, object], label: str = "table") -> CostModel:
        parsed: dict[int, Number] = {}
        for k, v in values.items():
            try:
                e = int(k)
            except (TypeError, ValueError):
                raise CostModelError(f"table keys must be integers, got {k!r}") from None
            if e < 1:
                raise CostModelError(f"table keys must be >= 1, got {e}")
            parsed[e] = as_number(v)
        if 2 not in parsed:
            raise CostModelError("cost table must define kappa(2)")

        def fn(e: int) -> Number:
            try:
                return parsed[e]
            except KeyError:
                raise ValueError(f"no table entry for e={e}") from None

        return cls("table", label, fn, dict(sorted(parsed.items())))

    @classmethod
    def power(cls, p) -> CostModel:
        p = as_number(p)
        return cls("power", f"power:{format_number(p)}", lambda e: _power(Fraction(e), p))

    @classmethod
    def linear(cls, beta) -> CostModel:
        beta = as_number(beta)
        return cls("linear", f"linear:{format_number(beta)}", lambda e: beta * e)

    @classmethod
    def ceillog2(cls, alpha) -> CostModel:
        alpha = as_number(alpha)
        return cls("ceillog2", f"ceillog2:{format_number(alpha)}", lambda e: alpha * ceil_log2(e))

    @classmethod
    def expression(cls, formula: str) -> CostModel:
        tree = _compile_expression(formula)
        return cls("expr", f"expr:{formula}", lambda e: _eval_node(tree, Fraction(e)))

    def is_nondecreasing(self, e_max: int) -> bool:
        return all(compare(self(e), self(e + 1)) <= 0 for e in range(1, e_max))


@dataclass(frozen=True)
class MarginalProfile:
    """Increments ``kappa(e) - kappa(e-1)`` for ``e = 2..e_max``."""

    increments: tuple[Number, ...]
    increasing: bool
    strictly_increasing: bool


def marginal_profile(kappa: CostModel, e_max: int) -> MarginalProfile:
    inc = tuple(kappa(e) - kappa(e - 1) for e in range(2, max(e_max, 2) + 1))
    steps = [compare(b, a) for a, b in zip(inc, inc[1:])]
    return MarginalProfile(inc, all(s >= 0 for s in steps), all(s > 0 for s in steps))


class Efficiency(str, enum.Enum):
    MORE = "MORE"
    LESS = "LESS"
    EQUAL = "EQUAL"
    INCOMPARABLE = "INCOMPARABLE"


@dataclass(frozen=True)
class EfficiencyPoint:
    vector: tuple[int, ...]
    cost: Number
    max_distinctions: int


def efficiency_point(vector: Iterable[int], kappa: CostModel, domain_size: int) -> EfficiencyPoint:
    """Cost and distinction count of a maximally discriminating pair with this vector."""
    vec = tuple(vector)
    return EfficiencyPoint(vec, vector_cost(vec, kappa), min(math.prod(vec), domain_size))


def vector_cost(vector: Iterable[int], kappa: CostModel) -> Number:
    total: Number = Fraction(0)
    for e in vector:
        total = total + kappa(e)
    return total


def set_cost(cs: CriteriaSet, kappa: CostModel) -> Number:
    return vector_cost(discrimination_vector(cs), kappa)


def more_efficient(
    p: EfficiencyPoint, q: EfficiencyPoint, n_p: int | None = None, n_q: int | None = None
) -> Efficiency:
    """Compare two points by (distinctions, cost).

    Distinction counts default to each point's ``max_distinctions``.
    """
    n_p = p.max_distinctions if n_p is None else n_p
    n_q = q.max_distinctions if n_q is None else n_q
    dn = (n_p > n_q) - (n_p < n_q)
    dc = compare(p.cost, q.cost)
    if dn == 0 and dc == 0:
        return Efficiency.EQUAL
    if dn >= 0 and dc <= 0:
        return Efficiency.MORE
    if dn <= 0 and dc >= 0:
        return Efficiency.LESS
    return Efficiency.INCOMPARABLE


# ---------------------------------------------------------------------------
# binary optimality condition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionRow:
    e: int
    cost: Number
    bound: Number
    holds: bool


@dataclass(frozen=True)
class BinaryConditionReport:
    rows: tuple[ConditionRow, ...]

    @property
    def holds(self) -> bool:
        return all(r.holds for r in self.rows)

    @property
    def failing(self) -> tuple[int, ...]:
        return tuple(r.e for r in self.rows if not r.holds)


def binary_condition(kappa: CostModel, e_max: int) -> BinaryConditionReport:
    """Check ``kappa(e) > kappa(2) * ceil(log2 e)`` for every ``e`` in ``3..e_max``."""
    if e_max < 3:
        raise InputError("e_max must be at least 3")
    k2 = kappa(2)
    rows = []
    for e in range(3, e_max + 1):
        cost = kappa(e)
        bound = k2 * ceil_log2(e)
        rows.append(ConditionRow(e, cost, bound, compare(cost, bound) > 0))
    return BinaryConditionReport(tuple(rows))


# ---------------------------------------------------------------------------
# coarseness and the equal-budget comparison
# ---------------------------------------------------------------------------


def costly(vector: Iterable[int]) -> tuple[int, ...]:
    """Entries with at least two categories, sorted."""
    return tuple(sorted(e for e in vector if e >= 2))


def budget(vector: Iterable[int]) -> int:
    """Number of costly categories, ``sum(e_i - 1)``."""
    return sum(e - 1 for e in vector)


def coarseness_dominates(v: Iterable[int], w: Iterable[int]) -> bool:
    """First-order dominance of ``v``'s category counts toward coarseness.

    For every threshold ``t >= 2`` the share of ``v``'s entries with at most ``t``
    categories is at least ``w``'s share, strictly for some ``t``.  One-category
    entries are ignored; an empty vector dominates nothing and is dominated by
    nothing.
    """
    v, w = costly(v), costly(w)
    if not v or not w:
        return False
    strict = False
    for t in range(2, max(v[-1], w[-1]) + 1):
        fv = Fraction(sum(1 for e in v if e <= t), len(v))
        fw = Fraction(sum(1 for e in w if e <= t), len(w))
        if fv < fw:
            return False
        strict = strict or fv > fw
    return strict


@dataclass(frozen=True)
class Result1Verdict:
    status: str  # PASS, FAIL or NOT_APPLICABLE
    variant: str | None
    point_v: EfficiencyPoint | None
    point_w: EfficiencyPoint | None
    relation: Efficiency | None
    reason: str


def verify_result1(
    v: Iterable[int], w: Iterable[int], kappa: CostModel, domain_size: int
) -> Result1Verdict:
    """Check that the coarser vector ``v`` is more efficient than ``w``.

    Both pairs are taken to discriminate maximally.  Applicable when the
    costly-category budgets match, ``v`` coarseness-dominates ``w``, and marginal
    costs are strictly increasing (variant ``"ii"``) or increasing with
    ``min(n_v, n_w) < domain_size`` (variant ``"i"``).
    """
    v, w = costly(v), costly(w)

    def na(reason: str) -> Result1Verdict:
        return Result1Verdict("NOT_APPLICABLE", None, None, None, None, reason)

    if not v or not w:
        return na("both vectors need a costly criterion")
    if budget(v) != budget(w):
        return na(f"costly-category budgets differ ({budget(v)} vs {budget(w)})")
    if not coarseness_dominates(v, w):
        return na("v does not coarseness-dominate w")
    pv = efficiency_point(v, kappa, domain_size)
    pw = efficiency_point(w, kappa, domain_size)
    profile = marginal_profile(kappa, max(v[-1], w[-1]))
    if profile.strictly_increasing:
        variant = "ii"
    elif profile.increasing and min(pv.max_distinctions, pw.max_distinctions) < domain_size:
        variant = "i"
    else:
        return na("marginal costs are not increasing enough for either variant")
    rel = more_efficient(pv, pw)
    status = "PASS" if rel is Efficiency.MORE else "FAIL"
    return Result1Verdict(status, variant, pv, pw, rel, f"n {pv.max_distinctions} vs {pw.max_distinctions}")


# ---------------------------------------------------------------------------
# frontier
# ---------------------------------------------------------------------------


def budget_vectors(budget_max: int) -> Iterator[tuple[int, ...]]:
    """Every nonempty multiset of entries ``>= 2`` with ``sum(e - 1) <= budget_max``,
    as a nondecreasing tuple."""
    if budget_max > FRONTIER_BUDGET_CAP:
        raise EnumerationLimitError(
            f"budget {budget_max} exceeds the enumeration cap of {FRONTIER_BUDGET_CAP}"
        )

    def rec(prefix: list[int], smallest: int, left: int) -> Iterator[tuple[int, ...]]:
        for e in range(smallest, left + 2):
            prefix.append(e)
            yield tuple(prefix)
            yield from rec(prefix, e, left - (e - 1))
            prefix.pop()

    yield from rec([], 2, budget_max)


def frontier(kappa: CostModel, domain_size: int, budget_max: int) -> list[EfficiencyPoint]:
    """Points not dominated by any other budget-feasible vector.

    Points tied on both cost and distinctions are all kept.  Ordered by cost,
    then distinctions, then vector.
    """
    if budget_max < 1:
        raise InputError("budget_max must be at least 1")
    if domain_size < 1:
        raise InputError("domain_size must be at least 1")
    pts = [efficiency_point(v, kappa, domain_size) for v in budget_vectors(budget_max)]
    pts.sort(key=lambda p: (p.cost, -p.max_distinctions, p.vector))
    # group equal costs, then sweep: dominated iff a cheaper point has n >= ours
    # or an equal-cost point has strictly larger n
    keep = []
    best_cheaper = 0
    i = 0
    while i < len(pts):
        j = i + 1
        while j < len(pts) and compare(pts[j].cost, pts[i].cost) == 0:
            j += 1
        group = pts[i:j]
        top = max(p.max_distinctions for p in group)
        for p in group:
            if p.max_distinctions == top and top > best_cheaper:
                keep.append(p)
        best_cheaper = max(best_cheaper, top)
        i = j
    keep.sort(key=lambda p: (p.cost, p.max_distinctions, p.vector))
    return keep


def cheapest_vectors(
    kappa: CostModel, target: int, budget_max: int
) -> tuple[Number, list[tuple[int, ...]]]:
    """Minimum cost of reaching ``prod(v) >= target`` within the budget, and all minimizers."""
    best: Number | None = None
    found: list[tuple[int, ...]] = []
    for v in budget_vectors(budget_max):
        if math.prod(v) < target:
            continue
        c = vector_cost(v, kappa)
        cmp = 1 if best is None else compare(best, c)
        if cmp > 0:
            best, found = c, [v]
        elif cmp == 0:
            found.append(v)
    if best is None:
        raise InputError(f"no vector within budget {budget_max} reaches {target} distinctions")
    return best, sorted(found)


def parse_vector(text: str | Sequence[int]) -> tuple[int, ...]:
    if isinstance(text, str):
        parts = [p for p in text.replace("(", "").replace(")", "").split(",") if p.strip()]
        try:
            vec = tuple(int(p) for p in parts)
        except ValueError:
            raise InputError(f"bad discrimination vector {text!r}") from None
    else:
        vec = tuple(int(x) for x in text)
    if not vec or any(e < 1 for e in vec):
        raise InputError(f"discrimination vectors need positive entries, got {vec}")
    return vec
