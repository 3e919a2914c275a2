"""Command-line interface.

Exit codes: 0 when no check failed, 1 on a failed property or a theorem
violation, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

from .aggregation import (
    NotBinaryError,
    WeightProfile,
    aggregate_choice,
    find_condorcet_cycle,
    majority_choice,
    scores,
    weighted_tournament,
)
from .choice import (
    ChoiceClassError,
    WeakOrder,
    build_max_choice,
    choice_classes,
    condorcet_violation,
    n_classes,
    rationalizable,
    uses,
)
from .criteria import (
    discrimination_partition,
    discrimination_vector,
    isomorphism_table,
    maximally_categorizes,
    product_representation,
    theorem_check,
    verify_product_representation,
)
from .documents import (
    DocumentError,
    choice_to_document,
    dump_json,
    load_choice,
    load_criteria,
    load_json,
)
from .efficiency import (
    CostModel,
    CostModelError,
    as_number,
    binary_condition,
    efficiency_point,
    format_number,
    frontier,
)
from .relations import InputError
from .storage import binary_always_optimal, optimal_bases, storage_cost, sweep

PASS = "PASS"
FAIL = "FAIL"
NOT_APPLICABLE = "NOT_APPLICABLE"
THEOREM_VIOLATION = "THEOREM_VIOLATION"


@dataclass
class RunReport:
    command: str
    json: bool = False
    lines: list[str] = field(default_factory=list)
    verdicts: list[tuple[str, str, str]] = field(default_factory=list)
    results: dict = field(default_factory=dict)
    input_error: str | None = None

    def add(self, line: str = "") -> None:
        self.lines.append(line)

    def verdict(self, name: str, status: str, detail: str = "") -> None:
        self.verdicts.append((name, status, detail))

    @property
    def exit_code(self) -> int:
        if self.input_error is not None:
            return 2
        if any(v[1] in (FAIL, THEOREM_VIOLATION) for v in self.verdicts):
            return 1
        return 0

    def render(self) -> str:
        out = [f"$ {self.command}"]
        if self.input_error is not None:
            out.append(f"input error: {self.input_error}")
        out.extend(self.lines)
        for name, status, detail in self.verdicts:
            out.append(f"verdict {name}: {status}" + (f" ({detail})" if detail else ""))
        out.append(f"exit {self.exit_code}")
        return "\n".join(out) + "\n"

    def to_json(self) -> str:
        doc = {
            "command": self.command,
            "input_error": self.input_error,
            "results": self.results,
            "verdicts": [{"name": n, "status": s, "detail": d} for n, s, d in self.verdicts],
            "exit_code": self.exit_code,
        }
        return json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"


# ---------------------------------------------------------------------------
# cost-model syntax
# ---------------------------------------------------------------------------


def _read_table(path: str) -> dict:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise CostModelError(f"table:{path}: cannot read file ({exc.strerror})") from None
    if p.suffix.lower() == ".json":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CostModelError(f"table:{path}: invalid JSON: {exc.msg}") from None
        if not isinstance(raw, dict):
            raise CostModelError(f"table:{path}: expected an object mapping e to cost")
        return raw
    rows = list(csv.reader(io.StringIO(text), delimiter=";"))
    values = {}
    for lineno, row in enumerate(rows, 1):
        if not row or not "".join(row).strip():
            continue
        if lineno == 1 and not row[0].strip().lstrip("-").isdigit():
            continue  # header
        if len(row) != 2:
            raise CostModelError(f"table:{path}:{lineno}: expected 'e;cost'")
        values[row[0].strip()] = row[1].strip()
    return values


def parse_cost_spec(spec: str) -> CostModel:
    """``table:PATH``, ``power:P``, ``linear:B``, ``ceillog2:A`` or ``expr:FORMULA``."""
    kind, sep, arg = spec.partition(":")
    if not sep or not arg:
        raise CostModelError(f"cost spec {spec!r} must look like KIND:ARG")
    kind = kind.strip().lower()
    if kind == "table":
        return CostModel.table(_read_table(arg), label=f"table:{arg}")
    if kind == "expr":
        return CostModel.expression(arg)
    builders = {"power": CostModel.power, "linear": CostModel.linear, "ceillog2": CostModel.ceillog2}
    if kind not in builders:
        raise CostModelError(f"unknown cost kind {kind!r}; use table, power, linear, ceillog2 or expr")
    try:
        value = as_number(arg) if "/" in arg or arg.strip().lstrip("-").isdigit() else float(arg)
    except ValueError:
        raise CostModelError(f"bad parameter {arg!r} in cost spec") from None
    return builders[kind](value)


def _fmt(x) -> str:
    return format_number(x)


def _vec(v: Sequence[int]) -> str:
    return "(" + ",".join(str(e) for e in v) + ")"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_analyze(args, report: RunReport) -> None:
    cs = load_criteria(args.file)
    vec = discrimination_vector(cs)
    part = discrimination_partition(cs)
    report.add(f"domain size: {len(cs.domain)}")
    for name, s in zip(cs.names, cs.structures):
        cells = " | ".join(",".join(c) for c in s.partition)
        report.add(f"criterion {name}: e={s.e} categories: {cells}")
    report.add(f"discrimination vector: {_vec(vec)}")
    report.add(f"product of category counts: {math.prod(vec)}")
    report.add(f"discrimination partition cells: {len(part)}")
    maxcat = maximally_categorizes(cs)
    report.add(f"maximally categorizes: {str(maxcat).lower()}")
    report.results.update(
        vector=list(vec), cells=len(part), product=math.prod(vec), maximally_categorizes=maxcat
    )


def cmd_theorem(args, report: RunReport) -> None:
    cs = load_criteria(args.file)
    mode = "union" if args.union_selectors else "meet"
    res = theorem_check(cs, mode=mode)
    report.add(f"(i) maximal categorization: {str(res.maximally_categorizes).lower()}")
    report.add(f"(ii) order-isomorphism property: {str(res.order_isomorphism_property).lower()}")
    report.add(f"(iii) product representation: {str(res.product_representation).lower()}")
    report.results.update(
        maximally_categorizes=res.maximally_categorizes,
        order_isomorphism_property=res.order_isomorphism_property,
        product_representation=res.product_representation,
        selector_mode=mode,
    )
    agree = res.agree
    if args.exhaustive_selectors:
        full = theorem_check(cs, exhaustive_selectors=True, mode=mode)
        same = full.order_isomorphism_property == res.order_isomorphism_property
        report.add(f"(ii) by exhaustive selectors: {str(full.order_isomorphism_property).lower()}")
        report.results["exhaustive_order_isomorphism_property"] = full.order_isomorphism_property
        agree = agree and same
    rep = product_representation(cs)
    if rep is not None:
        report.add("relabeling (label -> attribute vector):")
        for x in cs.domain:
            report.add(f"  {x} -> {_vec(rep.relabeling[x])}")
        report.add("category bijections (criterion, category -> attribute range):")
        for name, j, m in isomorphism_table(cs, rep):
            report.add(f"  {name} {j} -> {m}")
        report.results["relabeling"] = {x: list(rep.relabeling[x]) for x in cs.domain}
        if not verify_product_representation(cs, rep):
            report.verdict("product_representation_audit", THEOREM_VIOLATION, "representation fails audit")
    if agree:
        report.verdict("equivalence", PASS, f"all three {str(res.maximally_categorizes).lower()}")
    else:
        report.verdict("equivalence", THEOREM_VIOLATION, f"values {res.as_tuple()}")


def cmd_frontier(args, report: RunReport) -> None:
    kappa = parse_cost_spec(args.cost)
    pts = frontier(kappa, args.domain_size, args.budget)
    report.add(f"cost model: {kappa.label}; domain size {args.domain_size}; budget {args.budget}")
    report.add("vector;cost;n")
    rows = []
    for p in pts:
        row = (",".join(map(str, p.vector)), _fmt(p.cost), str(p.max_distinctions))
        rows.append(row)
        report.add(";".join(row))
    report.results["frontier"] = [
        {"vector": list(p.vector), "cost": _fmt(p.cost), "n": p.max_distinctions} for p in pts
    ]
    if args.csv:
        _write_csv(args.csv, ("vector", "cost", "n"), rows)
        report.add(f"wrote {len(rows)} rows to {args.csv}")
    e_max = max(3, max(max(p.vector) for p in pts))
    cond = binary_condition(kappa, e_max)
    if cond.holds:
        bad = [p for p in pts if p.max_distinctions < args.domain_size and set(p.vector) != {2}]
        if bad:
            report.verdict("binary_frontier", FAIL, f"non-binary frontier point {_vec(bad[0].vector)}")
        else:
            report.verdict("binary_frontier", PASS, "every point below the domain size is all-binary")
    else:
        report.verdict("binary_frontier", NOT_APPLICABLE, f"binary condition fails at e={cond.failing[0]}")


def _write_csv(path: str, header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, delimiter=";", lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _read_csv(path: str) -> tuple[list[str], list[list[str]]]:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh, delimiter=";"))
    except OSError as exc:
        raise InputError(f"{path}: cannot read file ({exc.strerror})") from None
    if not rows:
        raise InputError(f"{path}: empty CSV")
    return rows[0], rows[1:]


def cmd_radix(args, report: RunReport) -> None:
    kappa = parse_cost_spec(args.cost)
    report.add(f"cost model: {kappa.label}")
    if args.radix_cmd == "cost":
        plan = storage_cost(args.n, args.k, kappa)
        report.add(f"n={plan.n} k={plan.k} digits={plan.digits} cost={_fmt(plan.cost)}")
        report.results.update(n=plan.n, k=plan.k, digits=plan.digits, cost=_fmt(plan.cost))
    elif args.radix_cmd == "optimal":
        res = optimal_bases(args.n, kappa, args.kmax)
        for p in res.plans:
            report.add(f"  k={p.k} digits={p.digits} cost={_fmt(p.cost)}")
        report.add(f"optimal bases: {','.join(map(str, res.bases))} cost={_fmt(res.cost)}")
        report.results.update(n=res.n, bases=list(res.bases), cost=_fmt(res.cost))
    elif args.radix_cmd == "check-binary":
        res = binary_always_optimal(kappa, args.kmax, args.nmax)
        report.add("condition kappa(k) > kappa(2)*ceil(log2 k):")
        for row in res.condition.rows:
            mark = "holds" if row.holds else "fails"
            report.add(f"  k={row.e} kappa={_fmt(row.cost)} bound={_fmt(row.bound)} {mark}")
        report.add(f"condition holds: {str(res.condition_holds).lower()}")
        report.add(
            f"binary strictly optimal for n in 2..{args.nmax}: {str(res.binary_optimal).lower()}"
            f" (failures: {res.failures})"
        )
        for w in res.witnesses:
            kind = "tie" if w.tie else "cheaper"
            report.add(
                f"  witness n={w.n} k={w.k} cost_k={_fmt(w.cost_k)} cost_2={_fmt(w.cost_binary)} ({kind})"
            )
        report.add(f"agree: {str(res.agree).lower()}")
        report.results.update(
            condition=res.condition_holds,
            binary_optimal=res.binary_optimal,
            agree=res.agree,
            witnesses=[[w.n, w.k] for w in res.witnesses],
        )
        if res.agree:
            report.verdict("binary_iff_condition", PASS)
        else:
            report.verdict(
                "binary_iff_condition",
                THEOREM_VIOLATION,
                f"sweep says {res.binary_optimal}, condition says {res.condition_holds}",
            )
    elif args.radix_cmd == "sweep":
        res = sweep(kappa, args.kmax, args.nmax)
        rows = [(str(n), ",".join(map(str, ks)), _fmt(c)) for n, ks, c in res.rows()]
        if args.csv:
            _write_csv(args.csv, ("n", "k*", "cost"), rows)
            report.add(f"wrote {len(rows)} rows to {args.csv}")
        else:
            report.add("n;k*;cost")
            for row in rows:
                report.add(";".join(row))
        strict = res.binary_strict()[2:]
        report.add(f"base 2 unique optimum for every n in 2..{args.nmax}: {str(bool(strict.all())).lower()}")
        report.results.update(rows=len(rows), binary_everywhere=bool(strict.all()))


def cmd_choice(args, report: RunReport) -> None:
    if args.choice_cmd == "build":
        cs = load_criteria(args.file)
        c = build_max_choice(cs)
        order = rationalizable(c)
        text = dump_json(choice_to_document(c, order))
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
            report.add(f"wrote choice document to {args.output}")
        else:
            report.add(text.rstrip("\n"))
        report.add(f"choice classes: {n_classes(c)}")
        return
    cs = load_criteria(args.criteria)
    c = load_choice(args.choice)
    if c.domain != cs.domain:
        raise InputError("criteria and choice documents have different domains")
    part = choice_classes(c)
    if not part.well_defined:
        report.add(f"choice classes undefined: interchangeability fails transitivity at {list(part.witness)}")
        report.verdict("choice_classes", FAIL, f"witness {list(part.witness)}")
        return
    report.add(f"choice classes: {len(part.classes)}")
    for cls in part.classes:
        report.add(f"  {{{','.join(cls)}}}")
    used = uses(cs, c)
    report.verdict("uses", PASS if used else FAIL)
    if used:
        target = min(math.prod(discrimination_vector(cs)), len(cs.domain))
        md = len(part.classes) == target
        report.verdict("maximally_discriminates", PASS if md else FAIL, f"n(c)={len(part.classes)} target={target}")
    else:
        report.verdict("maximally_discriminates", NOT_APPLICABLE, "choice function does not use the criteria")
    order = rationalizable(c)
    if order is not None:
        report.add("rationalizing weak order (best first): " + " > ".join("{" + ",".join(lv) + "}" for lv in order.levels))
        report.verdict("rationalizable", PASS)
    else:
        report.verdict("rationalizable", FAIL)
    viol = condorcet_violation(c)
    if viol is None:
        report.verdict("condorcet_consistent", PASS)
    else:
        menu, x = viol
        report.verdict("condorcet_consistent", FAIL, f"{x} wins every pair in {sorted(menu)} but is not chosen")
    report.results.update(
        classes=[list(cls) for cls in part.classes],
        uses=used,
        rationalizable=order is not None,
        condorcet_consistent=viol is None,
    )


def cmd_vote(args, report: RunReport) -> None:
    cs = load_criteria(args.file)
    w = WeightProfile.parse(args.weights)
    if len(w) != cs.N:
        raise InputError(f"{len(w)} weights given for {cs.N} criteria")
    t = weighted_tournament(cs, w)
    report.add("weights: " + ",".join(_fmt(x) for x in w.weights))
    report.add("margins:")
    labels = cs.domain.elements
    for a, x in enumerate(labels):
        for y in labels[a + 1 :]:
            report.add(f"  {x} vs {y}: {_fmt(t.margin(x, y))}")
    try:
        s = scores(cs, w)
    except NotBinaryError as exc:
        report.add(f"not all criteria are binary: {exc}")
        cycle = find_condorcet_cycle(t)
        if cycle is not None:
            report.add("tournament cycle: " + " > ".join(cycle + (cycle[0],)))
            report.verdict("rationalizable", FAIL, "pairwise majority cycles")
            report.results["cycle"] = list(cycle)
            return
        order = rationalizable(majority_choice(t))
        report.verdict("rationalizable", PASS if order is not None else FAIL, "pairwise majority")
        return
    c = aggregate_choice(cs, w)
    report.add("scores: " + ", ".join(f"{x}={_fmt(s[x])}" for x in labels))
    order = rationalizable(c)
    if order is None:
        report.verdict("rationalizable", FAIL)
    else:
        report.add("rationalizing weak order (best first): " + " > ".join("{" + ",".join(lv) + "}" for lv in order.levels))
        report.verdict("rationalizable", PASS)
    viol = condorcet_violation(c)
    report.verdict("condorcet_consistent", PASS if viol is None else FAIL)
    cycle = find_condorcet_cycle(t)
    report.verdict("tournament_acyclic", PASS if cycle is None else FAIL)
    report.results.update(
        scores={x: _fmt(s[x]) for x in labels},
        levels=[list(lv) for lv in order.levels] if order else None,
    )


def cmd_verify_csv(args, report: RunReport) -> None:
    kappa = parse_cost_spec(args.cost)
    header, rows = _read_csv(args.path)
    bad = 0
    if args.kind == "frontier":
        if header != ["vector", "cost", "n"]:
            raise InputError(f"{args.path}: expected header vector;cost;n")
        expected = {p.vector: p for p in frontier(kappa, args.domain_size, args.budget)}
        seen = set()
        for lineno, row in enumerate(rows, 2):
            vec = tuple(int(v) for v in row[0].split(","))
            p = efficiency_point(vec, kappa, args.domain_size)
            ok = vec in expected and _fmt(p.cost) == row[1] and str(p.max_distinctions) == row[2]
            seen.add(vec)
            if not ok:
                bad += 1
                report.add(f"row {lineno} does not match recomputation: {';'.join(row)}")
        missing = set(expected) - seen
        for vec in sorted(missing):
            bad += 1
            report.add(f"frontier point {_vec(vec)} missing from CSV")
    else:
        if header != ["n", "k*", "cost"]:
            raise InputError(f"{args.path}: expected header n;k*;cost")
        for lineno, row in enumerate(rows, 2):
            res = optimal_bases(int(row[0]), kappa, args.kmax)
            if ",".join(map(str, res.bases)) != row[1] or _fmt(res.cost) != row[2]:
                bad += 1
                report.add(f"row {lineno} does not match recomputation: {';'.join(row)}")
    report.add(f"rows checked: {len(rows)}; mismatches: {bad}")
    report.results.update(rows=len(rows), mismatches=bad)
    report.verdict("csv_recomputation", PASS if bad == 0 else FAIL)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise InputError(f"usage: {message}")


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="coarse-criteria", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="category counts, discrimination vector and partition")
    a.add_argument("file")

    t = sub.add_parser("theorem", help="maximal categorization / order isomorphism / product representation")
    t.add_argument("file")
    t.add_argument("--exhaustive-selectors", action="store_true")
    t.add_argument("--union-selectors", action="store_true", help="literal union-of-categories selectors")

    f = sub.add_parser("frontier", help="Pareto frontier of discrimination vectors")
    f.add_argument("--cost", required=True)
    f.add_argument("--domain-size", type=_positive, required=True)
    f.add_argument("--budget", type=_positive, required=True)
    f.add_argument("--csv")

    r = sub.add_parser("radix", help="digit-base storage costs")
    rsub = r.add_subparsers(dest="radix_cmd", required=True, parser_class=_Parser)
    rc = rsub.add_parser("cost")
    rc.add_argument("--n", type=_positive, required=True)
    rc.add_argument("--k", type=int, required=True)
    rc.add_argument("--cost", default="linear:1")
    ro = rsub.add_parser("optimal")
    ro.add_argument("--n", type=_positive, required=True)
    ro.add_argument("--kmax", type=int, default=10)
    ro.add_argument("--cost", default="linear:1")
    rb = rsub.add_parser("check-binary")
    rb.add_argument("--cost", default="linear:1")
    rb.add_argument("--kmax", type=int, default=12)
    rb.add_argument("--nmax", type=int, default=10_000)
    rs = rsub.add_parser("sweep")
    rs.add_argument("--cost", default="linear:1")
    rs.add_argument("--kmax", type=int, default=12)
    rs.add_argument("--nmax", type=int, default=1000)
    rs.add_argument("--csv")

    c = sub.add_parser("choice", help="build or check choice documents")
    csub = c.add_subparsers(dest="choice_cmd", required=True, parser_class=_Parser)
    cb = csub.add_parser("build")
    cb.add_argument("file")
    cb.add_argument("-o", "--output")
    cc = csub.add_parser("check")
    cc.add_argument("criteria")
    cc.add_argument("choice")

    v = sub.add_parser("vote", help="weighted voting over criteria")
    v.add_argument("file")
    v.add_argument("--weights", required=True)

    vc = sub.add_parser("verify-csv", help="re-check an emitted CSV against recomputation")
    vc.add_argument("kind", choices=("frontier", "sweep"))
    vc.add_argument("path")
    vc.add_argument("--cost", required=True)
    vc.add_argument("--domain-size", type=_positive, default=1)
    vc.add_argument("--budget", type=_positive, default=1)
    vc.add_argument("--kmax", type=int, default=12)
    return p


COMMANDS = {
    "analyze": cmd_analyze,
    "theorem": cmd_theorem,
    "frontier": cmd_frontier,
    "radix": cmd_radix,
    "choice": cmd_choice,
    "vote": cmd_vote,
    "verify-csv": cmd_verify_csv,
}


def run(argv: Sequence[str]) -> RunReport:
    argv = list(argv)
    report = RunReport("coarse-criteria " + " ".join(argv))
    report.json = bool(argv) and argv[0] == "--json"
    try:
        args = build_parser().parse_args(argv)
        report.json = args.json
        COMMANDS[args.cmd](args, report)
    except ChoiceClassError as exc:
        report.verdict("choice_classes", FAIL, f"witness {list(exc.witness)}")
    except (InputError, DocumentError) as exc:
        report.input_error = str(exc)
    return report


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    report = run(argv)
    sys.stdout.write(report.to_json() if report.json else report.render())
    return report.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
