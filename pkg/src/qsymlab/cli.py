"""Command-line harness: every verification suite with deterministic output.

Exit codes: 0 all pass, 1 some check failed, 2 unknown suite or bad usage,
3 a parameter exceeds its cap, 4 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from . import _trace
from . import chromqsym as chrom
from . import config
from . import eulerqsym as eul
from . import permstat as ps
from . import polyring as pr
from . import posetlab as pl
from . import symqsym as sq
from .results import CheckResult

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP, EXIT_INPUT = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    max_n: int = 7
    series_order: int = 8
    primes: tuple[int, ...] = (2, 3)
    suites: tuple[str, ...] = ("all",)
    output_format: str = "text"
    jobs: int = 1
    timings: bool = False

    def __post_init__(self):
        config.check_n(self.max_n, config.HARD_MAX_N, "max_n")
        if self.series_order > config.MAX_SERIES_ORDER:
            raise config.CapExceeded(
                f"series_order={self.series_order} exceeds cap {config.MAX_SERIES_ORDER}"
            )
        if self.series_order < 1 or self.max_n < 1:
            raise UsageError("max_n and series_order must be positive")
        for p in self.primes:
            if p not in pl.SUPPORTED_PRIMES:
                raise UsageError(f"prime {p} unsupported; use {pl.SUPPORTED_PRIMES}")


@dataclass
class Report:
    suite: str
    params: dict[str, Any]
    status: str
    witnesses: list[Any] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)
    wall_time: float | None = None
    operations: list[str] = field(default_factory=list)

    def sort_key(self) -> tuple[str, str]:
        return self.suite, json.dumps(self.params, sort_keys=True)

    def to_json(self, timings: bool = False) -> dict:
        out = {"check": self.suite, **self.params, "status": self.status}
        if self.witnesses:
            out["witnesses"] = self.witnesses
        if self.details:
            out["details"] = self.details
        if timings and self.wall_time is not None:
            out["wall_time"] = round(self.wall_time, 3)
        return out

    def to_text(self, timings: bool = False) -> str:
        params = " ".join(f"{k}={_short(v)}" for k, v in sorted(self.params.items()))
        line = f"{self.status.upper():11s} {self.suite} {params}".rstrip()
        if timings and self.wall_time is not None:
            line += f" ({self.wall_time:.2f}s)"
        for w in self.witnesses[:5]:
            line += "\n    witness: " + json.dumps(w, sort_keys=True, default=str)
        return line


def _short(v: Any) -> str:
    if isinstance(v, (list, tuple)):
        return ",".join(map(str, v))
    return str(v)


def from_check(res: CheckResult, report_only: bool = False) -> Report:
    if res.passed:
        status = "pass"
    else:
        status = "report-only" if report_only else "fail"
    return Report(res.check, dict(res.params), status, list(res.witnesses), dict(res.details))


def _jsonable(x: Any) -> Any:
    return json.loads(json.dumps(x, default=str))


# -- tasks -------------------------------------------------------------------
# A task is (function name, args); workers look names up in TASKS so that
# tasks pickle cleanly across processes.


def _example_checks() -> CheckResult:
    """Worked examples that fix conventions across modules."""
    res = CheckResult("examples", {}, True)

    def expect(label: str, ok: bool) -> None:
        if not ok:
            res.fail({"example": label})

    T = pr.T
    expect("A_3", str(eul.q_eulerian(3).A) == "1 + (2 + q + q^2)*t + t^2")
    expect("Q_31", eul.build_Q(3, 1) == sq.h(3) + sq.h(2, 1))
    expect("Q_21", eul.build_Q(2, 1) == sq.h(2))
    ref = eul.build_refined(3)
    expect("Q_(21),1", ref.Q((2, 1), 1) == sq.h(2, 1))
    expect("Q_(3),1", ref.Q((3,), 1) == sq.h(3))
    expect("A^invdes_2", eul.A_inv_des(2) == 1 + pr.Q * T)
    expect("q_multinomial", pr.q_multinomial(4, [2, 2]) == pr.BiPoly.from_q_list([1, 1, 2, 1, 1]))
    expect("exact_div", pr.exact_div(pr.q_factorial(4), pr.q_factorial(2)) == pr.q_int(3) * pr.q_int(4))
    expect("pochhammer", pr.q_pochhammer(2) == (1 - pr.Q) * (1 - pr.Q**2))
    expect("cyclotomic", pr.cyclotomic(6) == pr.BiPoly.from_q_list([1, -1, 1]))
    expect("root_of_unity", pr.eval_at_root_of_unity(pr.q_binomial(4, 2), 2).as_integer() == 2)
    expect("palindromic", pr.is_palindromic([1, 2, 1]) and not pr.is_palindromic([1, 2]))
    verdict = pr.is_b_positive_unimodal([pr.ONE, pr.Q**2, pr.Q])
    expect("unimodality_failure", not verdict.unimodal and verdict.first_failure == 1)
    expect("trim_support", pr.trim_support([0, 1, 0]) == (1, [1]))
    expect("multinomial", pr.ordinary_multinomial(4, [2, 2]) == 6)
    expect("f_to_m", sq.f_to_m(sq.fundamental(3, {1})) == sq.QSymFunc(3, "M", {(1, 2): 1, (1, 1, 1): 1}))
    expect("m_to_f", sq.m_to_f(sq.f_to_m(sq.fundamental(3, {2}))) == sq.fundamental(3, {2}))
    expect("kostka", sq.kostka((2, 1), (1, 1, 1)) == 2)
    expect("omega_h", sq.omega(sq.h(3)) == sq.e(3))
    expect("omega_s", sq.omega(sq.s(2, 1)) == sq.s(2, 1))
    expect("exp_spec", sq.exponential_specialization(sq.h(2)) == pr.BiPoly.const(pr.Fraction(1, 2)))
    expect("m_product", sq.m_product((1,), (1,)) == {(2,): 1, (1, 1): 2})
    expect("positivity", sq.positivity(sq.h(2, 1), "s") and not sq.positivity(sq.m(2, 1), "s"))
    expect("expand", str(sq.expand_in_k_vars(sq.fundamental(2, ()), 2)) == "x1^2 + x1*x2 + x2^2")
    expect("symmetric", sq.is_symmetric(sq.fundamental(2, {1})) and not sq.is_symmetric(sq.fundamental(3, {1})))
    expect("ps", str(sq.stable_principal_specialization(sq.h(3) + sq.h(2, 1))) == "(2 + q + q^2)/(q;q)_3")
    expect("dex", ps.dex(ps.parse("3142")) == frozenset({2}))
    expect("enumerate_class", len(list(ps.enumerate_class((2, 1), 1))) == 3)
    expect("conjugate", ps.conjugate((2, 1, 3), ps.long_cycle(3)) == (1, 3, 2))
    expect("cycle_type", ps.cycle_type(ps.parse("231")) == (3,))
    # chromatic
    X = sq.to_symmetric(chrom.chromatic_qsym(chrom.LabeledGraph.path(3)))
    expect("path_123", X == sq.e(3) + (sq.e(3) + sq.e(2, 1)) * T + sq.e(3) * T**2)
    X2 = chrom.chromatic_qsym(chrom.LabeledGraph.path_through((1, 3, 2)))
    E3 = sq.from_symmetric(sq.e(3))
    target = (E3 + sq.fundamental(3, {1})) + E3 * (2 * T) + (E3 + sq.fundamental(3, {2})) * T**2
    expect("path_132", X2 == target and not sq.is_symmetric(X2))
    P93 = chrom.P_nr(9, 3)
    rows = [[2, 6, 9], [1, 4, 8], [3, 7], [5]]
    expect("tableau", chrom.is_p_tableau(P93, rows) and chrom.tableau_inversions(rows, P93.inc) == 8)
    expect("tableaux_enum", any(t.rows == ((1, 3), (2,)) for t in chrom.p_tableaux(chrom.P_nr(3, 2), (2, 1))))
    G3 = chrom.LabeledGraph.path(3)
    poly = chrom.chromatic_polynomial(G3)
    X3 = chrom.chromatic_qsym(G3)
    expect(
        "chromatic_polynomial",
        all(
            chrom.evaluate_poly(poly, m) == m * (m - 1) ** 2
            and chrom.count_colorings(X3, m).subs(t=1) == m * (m - 1) ** 2
            for m in range(6)
        ),
    )
    expect("pn_formula", chrom.pn_formula(G3) == pr.q_int(3, "t") * pr.Fraction(1, 3))
    expect(
        "freeness",
        chrom.freeness_check(pl.Poset(range(4), [(0, 1), (1, 2)]))
        == {"three_plus_one_free": False, "two_plus_two_free": True},
    )
    expect("interval_order", chrom.UnitIntervalOrder.from_intervals([0, 0.5, 1.2, 2]).m == (2, 3, 4))
    # posets
    B3 = pl.boolean_lattice(3)
    expect("mobius_B3", pl.mobius(B3, frozenset(), frozenset({1, 2, 3})) == -1)
    expect("rank_selected", pl.mobius_bounds(pl.rank_selected(B3, {1})) == 2)
    expect("subspace_mobius", pl.mobius_bounds(pl.subspace_lattice(2, 3)) == -8)
    expect("rees_count", len(pl.rees(pl._drop_bottom_reranked(pl.boolean_lattice(2)), pl.chain(2))) == 4)
    expect("Rnq", pl.mobius_bounds(pl.build_Rnq(2, 2)) == -2)
    expect("mobius_sum", pl.mobius_sum_check(pl.build_Rn(3)))
    return res


def _group_examples(cfg: RunConfig) -> list[tuple]:
    return [("examples", ())]


def _group_permutations(cfg: RunConfig) -> list[tuple]:
    return [("permutations", (n,)) for n in range(1, cfg.max_n + 1)]


def _q_order(cfg: RunConfig) -> int:
    return min(cfg.series_order - 1, cfg.max_n, config.max_n())


def _group_qeuler(cfg: RunConfig) -> list[tuple]:
    tasks = [("closed-form", (n,)) for n in range(1, cfg.max_n + 2) if n <= config.max_n()]
    q = _q_order(cfg)
    tasks += [("majexc", (q,)), ("invdes", (q,))]
    tasks += [("euler", (min(cfg.series_order, config.max_n()),))]
    return tasks


def _group_eqf(cfg: RunConfig) -> list[tuple]:
    N = min(cfg.series_order, config.max_n())
    tasks = [("qsme", (N,)), ("csv", (min(5, N), 5))]
    tasks += [("smirnov", (n, 5)) for n in range(1, min(5, cfg.max_n) + 1)]
    tasks += [("refinement", (n,)) for n in range(1, cfg.max_n + 1)]
    return tasks


def _group_unimodality(cfg: RunConfig) -> list[tuple]:
    return [("unimodality", (n,)) for n in range(1, cfg.max_n + 1)]


def _group_csp(cfg: RunConfig) -> list[tuple]:
    return [("csp", (n,)) for n in range(1, min(cfg.max_n, 6) + 1)]


def _group_poset(cfg: RunConfig) -> list[tuple]:
    tasks = [("rees-eulerian", (n,)) for n in range(1, min(cfg.max_n, 5) + 1)]
    tasks += [("rees-lower-intervals", (n,)) for n in range(1, min(cfg.max_n, 4) + 1)]
    tasks += [("rank-selected-boolean", (n,)) for n in range(1, min(cfg.max_n, 4) + 1)]
    for p in cfg.primes:
        tasks += [("rank-selected-subspace", (n, p)) for n in range(1, min(cfg.max_n, 4) + 1)]
        tasks += [("rees-q", (n, p)) for n in range(1, min(cfg.max_n, 3) + 1)]
    if 2 in cfg.primes and cfg.max_n >= 4:
        tasks.append(("rees-q", (4, 2)))
    names = ["chain:3", "boolean:3", "rees-rn:3"]
    names += [f"subspace:{p}:3" for p in cfg.primes] + [f"rees-rnq:2:{p}" for p in cfg.primes]
    tasks += [("mobius", (name,)) for name in names]
    return tasks


def _group_chromatic(cfg: RunConfig) -> list[tuple]:
    top = min(cfg.max_n, 6)
    tasks = [("chow", (n,)) for n in range(1, top + 1)]
    tasks += [("gasharov", (n,)) for n in range(1, top + 1)]
    tasks += [("pn-coefficient", (n,)) for n in range(1, top + 1)]
    tasks += [("relabel", (n,)) for n in range(1, top + 1)]
    tasks += [("freeness", (n,)) for n in range(1, top + 1)]
    tasks += [("rawlings", (n,)) for n in range(1, cfg.max_n + 1)]
    return tasks


def _group_conjectures(cfg: RunConfig) -> list[tuple]:
    return [("conjectures", (n,)) for n in range(1, cfg.max_n + 1)]


GROUPS: dict[str, Callable[[RunConfig], list[tuple]]] = {
    "examples": _group_examples,
    "permutations": _group_permutations,
    "qeuler": _group_qeuler,
    "eqf": _group_eqf,
    "unimodality": _group_unimodality,
    "csp": _group_csp,
    "poset": _group_poset,
    "chromatic": _group_chromatic,
    "conjectures": _group_conjectures,
}


def _per_order(name: str, check: Callable[[chrom.UnitIntervalOrder], bool]):
    def run(n: int) -> CheckResult:
        res = CheckResult(name, {"n": n}, True)
        count = 0
        for P in chrom.enumerate_unit_interval_orders(n):
            count += 1
            if not check(P):
                res.fail({"hessenberg": list(P.m)})
        res.details["orders"] = count
        return res

    return run


def _chow_ok(P: chrom.UnitIntervalOrder) -> bool:
    X = chrom.chromatic_qsym(P.inc)
    return (
        sq.is_symmetric(X)
        and chrom.chromatic_via_chow(P) == X
        and chrom.chow_sum(P) == sq.omega(X)
    )


def _gasharov_ok(P: chrom.UnitIntervalOrder) -> bool:
    g = chrom.gasharov_expansion(P)
    return g.is_nonneg() and g == chrom.chromatic_symmetric(P)


def _freeness_ok(P: chrom.UnitIntervalOrder) -> bool:
    return all(chrom.freeness_check(P).values())


def _relabel_task(n: int) -> CheckResult:
    """Relabel fixed pseudo-random graphs by a few fixed permutations."""
    import random

    rng = random.Random(n)
    res = CheckResult("relabel", {"n": n}, True)
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    for _ in range(3):
        G = chrom.LabeledGraph.from_edges(n, [e for e in pairs if rng.random() < 0.5])
        perms = [tuple(rng.sample(range(1, n + 1), n)) for _ in range(3)]
        sub = chrom.relabeling_check(G, perms)
        for w in sub.witnesses:
            res.fail({"graph": G.to_json(), **w})
    return res


def _unit_interval_count(n: int) -> CheckResult:
    from math import comb

    res = _per_order("freeness", _freeness_ok)(n)
    catalan = comb(2 * n, n) // (n + 1)
    if res.details["orders"] != catalan:
        res.fail({"reason": "order count is not Catalan", "catalan": catalan})
    return res


def _rawlings_task(n: int) -> CheckResult:
    res = CheckResult("rawlings", {"n": n}, True)
    for r in range(1, n + 1):
        sub = chrom.rawlings_check(n, r)
        res.witnesses.extend(sub.witnesses)
        res.passed &= sub.passed
    if n >= 2 and chrom.rawlings_polynomial(n, 2) != eul.q_eulerian(n).A:
        res.fail({"reason": "A^(2) != A"})
    return res


TASKS: dict[str, Callable[..., CheckResult]] = {
    "examples": _example_checks,
    "permutations": ps.permutation_suite,
    "closed-form": eul.closed_form_check,
    "majexc": eul.verify_majexc_egf,
    "invdes": eul.verify_stanley_invdes,
    "euler": eul.verify_euler,
    "qsme": eul.verify_qsme,
    "csv": eul.csv_check,
    "smirnov": eul.smirnov_check,
    "refinement": eul.refinement_check,
    "unimodality": eul.unimodality_suite,
    "csp": eul.csp_check,
    "rees-eulerian": pl.verify_rees_eulerian,
    "rees-lower-intervals": pl.verify_lower_intervals,
    "rank-selected-boolean": pl.verify_rank_selected_boolean,
    "rank-selected-subspace": pl.verify_rank_selected_subspace,
    "rees-q": pl.verify_rees_q,
    "chow": _per_order("chow", _chow_ok),
    "gasharov": _per_order("gasharov", _gasharov_ok),
    "pn-coefficient": _per_order("pn-coefficient", lambda P: chrom.pn_coefficient_check(P).passed),
    "relabel": _relabel_task,
    "freeness": _unit_interval_count,
    "rawlings": _rawlings_task,
    "conjectures": chrom.conjecture_suites,
    "mobius": pl.check_named,
}


def run_task(task: tuple) -> Report:
    name, args = task
    start = time.perf_counter()
    with _trace.recording() as seen:
        res = TASKS[name](*args)
    report_only = name == "conjectures" and not res.details.get("asserted", True)
    rep = from_check(res, report_only)
    rep.witnesses = _jsonable(rep.witnesses)
    rep.details = _jsonable(rep.details)
    rep.wall_time = time.perf_counter() - start
    rep.operations = sorted(seen)
    return rep


def expand_suites(cfg: RunConfig) -> list[tuple]:
    names = list(GROUPS) if "all" in cfg.suites else list(cfg.suites)
    tasks = []
    for name in names:
        if name not in GROUPS:
            raise UsageError(f"unknown suite {name!r}; choose from all, {', '.join(GROUPS)}")
        tasks.extend(GROUPS[name](cfg))
    return tasks


def run_tasks(tasks: Sequence[tuple], jobs: int = 1) -> list[Report]:
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(run_task, tasks))
    else:
        reports = [run_task(t) for t in tasks]
    return sorted(reports, key=Report.sort_key)


def run(cfg: RunConfig) -> list[Report]:
    return run_tasks(expand_suites(cfg), cfg.jobs)


# -- single computations -----------------------------------------------------


def _cmd_qeuler(args) -> list[Report]:
    n = args.n
    config.check_n(n)
    table = eul.q_eulerian(n)
    res = eul.closed_form_check(n)
    rep = from_check(res)
    rep.suite = "qeuler"
    rep.details = {
        "A": str(table.A),
        "a": [str(a) for a in table.a],
        "Q_h": [str(f.to("h")) for f in table.Q],
    }
    return [rep]


def _cmd_eqf(args) -> list[Report]:
    which, order = args.which, args.order
    if order > config.MAX_SERIES_ORDER:
        raise config.CapExceeded(f"order={order} exceeds cap {config.MAX_SERIES_ORDER}")
    config.check_n(order, what="order")
    fn = {
        "qsme": lambda: eul.verify_qsme(order),
        "majexc": lambda: eul.verify_majexc_egf(order),
        "invdes": lambda: eul.verify_stanley_invdes(order),
        "euler": lambda: eul.verify_euler(order),
        "csv": lambda: eul.csv_check(order, args.vars),
    }[which]
    return [from_check(fn())]


def _load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise chrom.GraphError(f"cannot read {path}: {exc}") from exc


def _expansions(X: sq.QSymFunc) -> dict:
    if sq.is_symmetric(X):
        f = sq.to_symmetric(X)
        return {
            "symmetric": True,
            "e": str(f.to("e")),
            "s": str(f.to("s")),
            "p": str(f.to("p")),
        }
    return {"symmetric": False, "F": str(X.to("F")), "M": str(X.to("M"))}


def _cmd_chromatic(args) -> list[Report]:
    if args.all_n is not None:
        res = TASKS["chow"](args.all_n)
        return [from_check(res)]
    if args.hessenberg is not None:
        P = chrom.UnitIntervalOrder(chrom.parse_hessenberg(args.hessenberg))
        G, params = P.inc, {"hessenberg": list(P.m)}
    elif args.graph is not None:
        G, params = chrom.LabeledGraph.from_json(_load_json(args.graph)), {"graph": args.graph}
    else:
        G, params = chrom.LabeledGraph.path(args.path_n), {"path_n": args.path_n}
    config.check_n(G.n, 8)
    X = chrom.chromatic_qsym(G)
    details = _expansions(X)
    status = "pass"
    if args.hessenberg is not None:
        if not (details["symmetric"] and chrom.chromatic_via_chow(P) == X):
            status = "fail"
    return [Report("chromatic", params, status, [] if status == "pass" else [params], details)]


def _cmd_gasharov(args) -> list[Report]:
    P = chrom.UnitIntervalOrder(chrom.parse_hessenberg(args.hessenberg))
    g = chrom.gasharov_expansion(P)
    ok = g == chrom.chromatic_symmetric(P) and g.is_nonneg()
    return [
        Report(
            "gasharov",
            {"hessenberg": list(P.m)},
            "pass" if ok else "fail",
            [] if ok else [{"hessenberg": list(P.m)}],
            {"s": str(g)},
        )
    ]


def _cmd_rawlings(args) -> list[Report]:
    config.check_n(args.n)
    if not 1 <= args.r <= args.n:
        raise UsageError(f"r={args.r} outside [1, {args.n}]")
    return [from_check(chrom.rawlings_check(args.n, args.r))]


def _cmd_csp(args) -> list[Report]:
    config.check_n(args.n)
    return [from_check(eul.csp_check(args.n))]


def _cmd_mobius(args) -> list[Report]:
    if args.file:
        P = pl.Poset.from_json(_load_json(args.file))
        name = args.file
        params = {"poset": name}
        rep = Report("mobius", params, "pass", [], {"mu_bottom_top": pl.mobius_bounds(P)})
        if args.check and not pl.mobius_sum_check(P):
            rep.status = "fail"
            rep.witnesses.append({"reason": "Mobius values over [0,1] do not sum to 0"})
        return [rep]
    if args.check:
        rep = from_check(pl.check_named(args.poset))
    else:
        P = pl.poset_from_name(args.poset)
        rep = Report("mobius", {"poset": args.poset}, "pass", [], {"mu_bottom_top": pl.mobius_bounds(P)})
    rep.suite = "mobius"
    rep.params = {"poset": args.poset}
    rep.details = _jsonable({k: v for k, v in rep.details.items() if k != "values"})
    return [rep]


def _cmd_suite(args) -> list[Report]:
    cfg = RunConfig(
        max_n=args.max_n,
        series_order=args.series_order,
        primes=tuple(args.primes),
        suites=tuple(args.names),
        jobs=args.jobs,
    )
    return run(cfg)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsymlab", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for suites")
    parser.add_argument("--timings", action="store_true", help="include wall times (not deterministic)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        # accept the global flags after the subcommand as well
        p.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
        p.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
        p.add_argument("--timings", action="store_true", default=argparse.SUPPRESS)

    p = sub.add_parser("qeuler", help="q-Eulerian polynomial and Eulerian quasisymmetric functions")
    p.add_argument("--n", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_qeuler)

    p = sub.add_parser("eqf", help="generating-function identities")
    eqf_sub = p.add_subparsers(dest="eqf_command", required=True)
    v = eqf_sub.add_parser("verify")
    v.add_argument("--which", choices=("qsme", "majexc", "invdes", "euler", "csv"), required=True)
    v.add_argument("--order", type=int, default=8)
    v.add_argument("--vars", type=int, default=5, help="variables for the csv check")
    common(v)
    v.set_defaults(func=_cmd_eqf)

    p = sub.add_parser("chromatic", help="chromatic quasisymmetric function")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--hessenberg")
    g.add_argument("--graph", help="JSON file {n, edges}")
    g.add_argument("--path-n", type=int)
    g.add_argument("--all-n", type=int, help="check every unit interval order on [n]")
    common(p)
    p.set_defaults(func=_cmd_chromatic)

    p = sub.add_parser("gasharov", help="Schur expansion from P-tableaux")
    p.add_argument("--hessenberg", required=True)
    common(p)
    p.set_defaults(func=_cmd_gasharov)

    p = sub.add_parser("rawlings", help="generalized q-Eulerian polynomial")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_rawlings)

    p = sub.add_parser("csp", help="cyclic sieving check")
    p.add_argument("--n", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_csp)

    p = sub.add_parser("mobius", help="Mobius function of a poset")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--poset", help="boolean:n, subspace:p:n, rees-rn:n, rees-rnq:n:p, chain:k")
    g.add_argument("--file", help="JSON file {elements, relations}")
    p.add_argument("--check", action="store_true")
    common(p)
    p.set_defaults(func=_cmd_mobius)

    p = sub.add_parser("suite", help="run named verification suites")
    p.add_argument("names", nargs="+", help="all, " + ", ".join(GROUPS))
    p.add_argument("--max-n", type=int, default=7)
    p.add_argument("--series-order", type=int, default=8)
    p.add_argument("--primes", type=_int_list, default=[2, 3])
    p.add_argument("--coverage", action="store_true", help="append the operation coverage audit")
    common(p)
    p.set_defaults(func=_cmd_suite)
    return parser


def coverage_summary(reports: Sequence[Report]) -> dict:
    """Operations touched by the reports against every registered operation."""
    touched = set().union(*(r.operations for r in reports)) if reports else set()
    return {
        "operations": len(_trace.OPERATIONS),
        "touched": len(touched & _trace.OPERATIONS),
        "missing": sorted(_trace.OPERATIONS - touched),
    }


def render(reports: Sequence[Report], fmt: str, timings: bool = False, coverage: bool = False) -> str:
    overall = "fail" if any(r.status == "fail" for r in reports) else "pass"
    if fmt == "json":
        doc = {
            "schema": SCHEMA,
            "status": overall,
            "reports": [r.to_json(timings) for r in reports],
        }
        if coverage:
            doc["coverage"] = coverage_summary(reports)
        return json.dumps(doc, sort_keys=True, separators=(",", ":"), default=str)
    lines = [r.to_text(timings) for r in reports]
    for r in reports:
        if r.details and len(reports) == 1:
            for k, v in sorted(r.details.items()):
                lines.append(f"  {k}: {v if not isinstance(v, (dict, list)) else json.dumps(v, sort_keys=True)}")
    if coverage:
        cov = coverage_summary(reports)
        missing = ", ".join(cov["missing"]) or "none"
        lines.append(f"coverage: {cov['touched']}/{cov['operations']} operations; missing: {missing}")
    lines.append(f"overall: {overall}")
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    start = time.perf_counter()
    try:
        reports = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (config.CapExceeded, sq.DegreeCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (chrom.GraphError, pl.PosetError) as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    elapsed = time.perf_counter() - start
    for r in reports:
        if r.wall_time is None:
            r.wall_time = elapsed
    print(render(reports, args.format, args.timings, getattr(args, "coverage", False)))
    return EXIT_FAIL if any(r.status == "fail" for r in reports) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
