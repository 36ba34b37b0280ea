"""Chromatic quasisymmetric functions and natural unit interval orders.

``X_G(x, t)`` sums ``t^asc(k) x_k`` over proper colorings ``k`` of a graph
on ``[n]``, where ``asc`` counts edges ``{i < j}`` with ``k(i) < k(j)``.
Unit interval orders are given by Hessenberg vectors ``m``:
``i <_P j`` iff ``j > m_i``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Any, Iterable, Iterator, Sequence

from . import config
from . import permstat as ps
from ._trace import operation
from .polyring import ZERO, BiPoly, is_b_positive_unimodal, q_int
from .results import CheckResult
from .symqsym import (
    QSymFunc,
    SymFunc,
    change_basis,
    is_symmetric,
    omega,
    positivity_oracle,
    stable_principal_specialization,
    subset_to_comp,
    to_symmetric,
)

CONJECTURE_ASSERT_MAX_N = 7


class GraphError(ValueError):
    pass


# -- graphs ------------------------------------------------------------------


@dataclass(frozen=True)
class LabeledGraph:
    """Simple graph on ``[n]``; edges are stored as pairs ``(i, j)`` with ``i < j``."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        for e in self.edges:
            i, j = e
            if not (1 <= i < j <= self.n):
                raise GraphError(f"bad edge {e!r} for n={self.n}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> LabeledGraph:
        out = set()
        for e in edges:
            if len(e) != 2 or e[0] == e[1]:
                raise GraphError(f"edge {list(e)!r} is not a pair of distinct vertices")
            out.add((min(e), max(e)))
        return cls(n, frozenset(out))

    @classmethod
    def path(cls, n: int) -> LabeledGraph:
        return cls.from_edges(n, [(i, i + 1) for i in range(1, n)])

    @classmethod
    def path_through(cls, order: Sequence[int]) -> LabeledGraph:
        """The path visiting vertices in the given order, e.g. ``(1, 3, 2)``."""
        return cls.from_edges(len(order), list(zip(order, order[1:])))

    @classmethod
    def complete(cls, n: int) -> LabeledGraph:
        return cls.from_edges(n, combinations(range(1, n + 1), 2))

    @classmethod
    def edgeless(cls, n: int) -> LabeledGraph:
        return cls(n, frozenset())

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def relabel(self, perm: Sequence[int]) -> LabeledGraph:
        """Rename vertex ``v`` to ``perm[v - 1]``."""
        return LabeledGraph.from_edges(self.n, [(perm[i - 1], perm[j - 1]) for i, j in self.edges])

    def left_degrees(self) -> list[int]:
        """``b_j`` = number of edges ``{i, j}`` with ``i < j``, for ``j = 1..n``."""
        return [sum(1 for i, k in self.edges if k == j) for j in range(1, self.n + 1)]

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in sorted(self.edges)]}

    @classmethod
    def from_json(cls, data: Any) -> LabeledGraph:
        if not isinstance(data, dict) or "edges" not in data:
            raise GraphError('graph JSON needs "edges" (and optionally "n")')
        edges = data["edges"]
        if not isinstance(edges, list) or not all(
            isinstance(e, list) and len(e) == 2 and all(isinstance(v, int) for v in e) for e in edges
        ):
            raise GraphError("edges must be a list of integer pairs")
        n = data.get("n", max((max(e) for e in edges), default=0))
        if not isinstance(n, int):
            raise GraphError("n must be an integer")
        return cls.from_edges(n, edges)

    @classmethod
    def load(cls, path: str) -> LabeledGraph:
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


# -- unit interval orders ----------------------------------------------------


def validate_hessenberg(m: Sequence[int]) -> tuple[int, ...]:
    m = tuple(m)
    n = len(m) + 1
    for i, v in enumerate(m, 1):
        if not (i <= v <= n):
            raise GraphError(f"Hessenberg entry m_{i}={v} outside [{i}, {n}]")
    if any(m[i] > m[i + 1] for i in range(len(m) - 1)):
        raise GraphError(f"Hessenberg vector {list(m)} is not weakly increasing")
    return m


def parse_hessenberg(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        vals = [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise GraphError(f"cannot parse Hessenberg vector {text!r}") from exc
    return validate_hessenberg(vals)


@dataclass(frozen=True)
class UnitIntervalOrder:
    """``P(m)`` on ``[n]``, ``n = len(m) + 1``."""

    m: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "m", validate_hessenberg(self.m))

    @property
    def n(self) -> int:
        return len(self.m) + 1

    def _mi(self, i: int) -> int:
        return self.m[i - 1] if i < self.n else self.n

    def lt(self, a: int, b: int) -> bool:
        return b > self._mi(a) if a < b else False

    @cached_property
    def inc(self) -> LabeledGraph:
        return LabeledGraph.from_edges(
            self.n, [(i, j) for i in range(1, self.n) for j in range(i + 1, self._mi(i) + 1)]
        )

    @classmethod
    def from_intervals(cls, a: Sequence[Any]) -> UnitIntervalOrder:
        """Intervals ``[a_i, a_i + 1]`` with ``a`` strictly increasing."""
        a = [Fraction(x) for x in a]
        if any(a[i] >= a[i + 1] for i in range(len(a) - 1)):
            raise GraphError("left endpoints must be strictly increasing")
        n = len(a)
        m = [max(j for j in range(1, n + 1) if a[j - 1] <= a[i - 1] + 1) for i in range(1, n)]
        P = cls(tuple(m))
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if P.lt(i, j) != (a[i - 1] + 1 < a[j - 1]):
                    raise AssertionError("interval conversion changed the order")
        return P

    def label(self) -> str:
        return ",".join(map(str, self.m))


def P_nr(n: int, r: int) -> UnitIntervalOrder:
    """``i < j`` iff ``j - i >= r``."""
    if not 1 <= r <= max(n, 1):
        raise GraphError(f"r={r} outside [1, {n}]")
    return UnitIntervalOrder(tuple(min(i + r - 1, n) for i in range(1, n)))


@operation
def enumerate_unit_interval_orders(n: int) -> Iterator[UnitIntervalOrder]:
    config.check_n(n)

    def rec(i: int, lo: int, acc: list[int]):
        if i == n:
            yield UnitIntervalOrder(tuple(acc))
            return
        for v in range(max(lo, i), n + 1):
            acc.append(v)
            yield from rec(i + 1, v, acc)
            acc.pop()

    if n <= 1:
        yield UnitIntervalOrder(())
        return
    yield from rec(1, 1, [])


def _order_matrix(P: Any) -> tuple[int, Any]:
    if isinstance(P, UnitIntervalOrder):
        return P.n, lambda a, b: P.lt(a + 1, b + 1)
    return len(P.elements), P.lt


@operation
def freeness_check(P: Any) -> dict[str, bool]:
    """Scan 4-element subsets for induced ``3+1`` and ``2+2`` subposets."""
    n, lt = _order_matrix(P)
    config.check_n(n, 12)

    def comp(a: int, b: int) -> bool:
        return lt(a, b) or lt(b, a)

    three_one = two_two = True
    for quad in combinations(range(n), 4):
        for d in quad:
            rest = [x for x in quad if x != d]
            if any(comp(d, x) for x in rest):
                continue
            a, b, c = sorted(rest, key=lambda x: sum(lt(y, x) for y in rest))
            if lt(a, b) and lt(b, c):
                three_one = False
        for x, y, z, w in ((0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)):
            p1 = (quad[x], quad[y])
            p2 = (quad[z], quad[w])
            if comp(*p1) and comp(*p2) and not any(comp(u, v) for u in p1 for v in p2):
                two_two = False
    return {"three_plus_one_free": three_one, "two_plus_two_free": two_two}


# -- chromatic quasisymmetric function ----------------------------------------


@operation
def chromatic_qsym(G: LabeledGraph, max_colors: int | None = None) -> QSymFunc:
    """M-expansion by a DP over ordered sequences of independent color classes."""
    n = G.n
    config.check_n(n, 8)
    k_max = n if max_colors is None else max_colors
    adj = [0] * n
    lower = [0] * n
    for i, j in G.edges:
        adj[i - 1] |= 1 << (j - 1)
        adj[j - 1] |= 1 << (i - 1)
        lower[j - 1] |= 1 << (i - 1)
    full = (1 << n) - 1
    independent = [True] * (1 << n)
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        independent[mask] = independent[rest] and not adj[low] & rest
    states: dict[int, dict[tuple, int]] = {0: {((), 0): 1}}
    for U in range(full + 1):
        here = states.pop(U, None)
        if here is None or U == full:
            if U == full:
                states[U] = here or {}
            continue
        free = full ^ U
        B = free
        while B:
            if independent[B]:
                gain = 0
                bits = B
                while bits:
                    v = (bits & -bits).bit_length() - 1
                    gain += bin(lower[v] & U).count("1")
                    bits &= bits - 1
                size = bin(B).count("1")
                target = states.setdefault(U | B, {})
                for (alpha, asc), c in here.items():
                    if len(alpha) < k_max:
                        key = (alpha + (size,), asc + gain)
                        target[key] = target.get(key, 0) + c
            B = (B - 1) & free
    coeffs: dict[tuple, dict] = {}
    for (alpha, asc), c in states.get(full, {}).items():
        d = coeffs.setdefault(alpha, {})
        d[(0, asc)] = d.get((0, asc), 0) + c
    if n == 0:
        coeffs = {(): {(0, 0): 1}}
    return QSymFunc(n, "M", {a: BiPoly(d) for a, d in coeffs.items()})


@operation
def chow_sum(P: UnitIntervalOrder) -> QSymFunc:
    """``sum_s F_{n, Des_P(s)} t^{inv_G(s)}`` with ``G = inc(P)``.

    Computed against the coloring definition this sum is ``omega X_G``, not
    ``X_G``: for an antichain every ``Des_P`` is empty and the sum is
    ``[n]_t! h_n``, while proper colorings of the complete graph give ``[n]_t! e_n``.
    """
    G = P.inc
    counts: dict[tuple, dict] = {}
    for sigma in ps.enumerate_perms(P.n):
        alpha = subset_to_comp(P.n, ps.des_P(sigma, P))
        d = counts.setdefault(alpha, {})
        key = (0, ps.inv_G(sigma, G))
        d[key] = d.get(key, 0) + 1
    return QSymFunc(P.n, "F", {a: BiPoly(d) for a, d in counts.items()})


@operation
def chromatic_via_chow(P: UnitIntervalOrder) -> QSymFunc:
    """``X_{inc(P)}`` in the F basis: ``omega`` of :func:`chow_sum`, i.e. ``F_{n, [n-1] - Des_P(s)}``."""
    return omega(chow_sum(P))


def chromatic_symmetric(P: UnitIntervalOrder) -> SymFunc:
    """``X_{inc(P)}`` as a symmetric function; symmetry is asserted."""
    X = chromatic_qsym(P.inc)
    if not is_symmetric(X):
        raise AssertionError(f"X for Hessenberg vector {P.m} is not symmetric")
    return to_symmetric(X)


# -- Gasharov P-tableaux -----------------------------------------------------


@dataclass(frozen=True)
class PTableau:
    shape: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]

    def positions(self) -> dict[int, int]:
        return {v: r for r, row in enumerate(self.rows) for v in row}


def is_p_tableau(P: Any, rows: Sequence[Sequence[int]]) -> bool:
    n, lt = _order_matrix(P)
    flat = [v for row in rows for v in row]
    if sorted(flat) != list(range(1, n + 1)):
        return False
    if any(len(rows[i]) < len(rows[i + 1]) for i in range(len(rows) - 1)):
        return False
    for r, row in enumerate(rows):
        for c, y in enumerate(row):
            if c and not lt(row[c - 1] - 1, y - 1):
                return False
            if r and lt(y - 1, rows[r - 1][c] - 1):
                return False
    return True


@operation
def tableau_inversions(T_: PTableau | Sequence[Sequence[int]], G: LabeledGraph) -> int:
    """Edges ``{i < j}`` with ``i`` in a lower row than ``j``."""
    rows = T_.rows if isinstance(T_, PTableau) else T_
    pos = {v: r for r, row in enumerate(rows) for v in row}
    return sum(1 for i, j in G.edges if pos[i] > pos[j])


def _partitions(n: int, top: int | None = None) -> Iterator[tuple[int, ...]]:
    return ps.partitions(n, top)


@operation
def p_tableaux(P: UnitIntervalOrder, shape: Sequence[int]) -> Iterator[PTableau]:
    """Row-major backtracking: each cell is checked against its left and upper neighbours."""
    shape = tuple(shape)
    n = P.n
    cells = [(r, c) for r, k in enumerate(shape) for c in range(k)]
    grid = [[0] * k for k in shape]

    def rec(idx: int, used: int):
        if idx == len(cells):
            yield PTableau(shape, tuple(tuple(row) for row in grid))
            return
        r, c = cells[idx]
        for v in range(1, n + 1):
            if used >> v & 1:
                continue
            if c and not P.lt(grid[r][c - 1], v):
                continue
            if r and P.lt(v, grid[r - 1][c]):
                continue
            grid[r][c] = v
            yield from rec(idx + 1, used | 1 << v)
        grid[r][c] = 0

    yield from rec(0, 0)


@operation
def gasharov_expansion(P: UnitIntervalOrder) -> SymFunc:
    config.check_n(P.n, 7)
    G = P.inc
    coeffs: dict[tuple, dict] = {}
    for lam in _partitions(P.n):
        for T_ in p_tableaux(P, lam):
            d = coeffs.setdefault(lam, {})
            key = (0, tableau_inversions(T_, G))
            d[key] = d.get(key, 0) + 1
    return SymFunc(P.n, "s", {lam: BiPoly(d) for lam, d in coeffs.items()})


# -- power-sum coefficient and Rawlings polynomials ----------------------------


def pn_formula(G: LabeledGraph) -> BiPoly:
    """``([n]_t / n) prod_{j>=2} [b_j]_t``."""
    n = G.n
    b = G.left_degrees()
    out = q_int(n, "t") * Fraction(1, n)
    for j in range(2, n + 1):
        out = out * q_int(b[j - 1], "t")
    return out


@operation
def pn_coefficient_check(P: UnitIntervalOrder) -> CheckResult:
    res = CheckResult("pn-coefficient", {"hessenberg": list(P.m)}, True)
    Xp = change_basis(omega(chromatic_symmetric(P)), "p")
    got = Xp.coeff((P.n,))
    want = pn_formula(P.inc)
    res.details["coefficient"] = str(got)
    if got != want:
        res.fail({"computed": str(got), "formula": str(want)})
    if got:
        verdict = is_b_positive_unimodal([c.constant() for c in got.t_coeffs()])
        if not verdict.ok:
            res.fail({"reason": "coefficient not palindromic-unimodal", "verdict": verdict.as_dict()})
    at_one = Xp.subs(t=1).coeff((P.n,))
    if at_one != want.subs(t=1):
        res.fail({"reason": "t = 1 slice", "computed": str(at_one)})
    return res


@operation
def rawlings_polynomial(n: int, r: int) -> BiPoly:
    """``sum_s q^{maj_{>=r}(s)} t^{inv_{<r}(s)}`` by brute force."""
    c: dict = {}
    for sigma in ps.enumerate_perms(n):
        key = (ps.maj_ge_r(sigma, r), ps.inv_lt_r(sigma, r))
        c[key] = c.get(key, 0) + 1
    return BiPoly(c)


def rawlings_via_specialization(n: int, r: int) -> BiPoly:
    """``(q;q)_n ps(omega X_{inc(P_{n,r})})``."""
    return stable_principal_specialization(omega(chromatic_symmetric(P_nr(n, r)))).numerator


@operation
def rawlings_check(n: int, r: int) -> CheckResult:
    res = CheckResult("rawlings", {"n": n, "r": r}, True)
    brute = rawlings_polynomial(n, r)
    spec = rawlings_via_specialization(n, r)
    res.details["A"] = str(brute)
    if brute != spec:
        res.fail({"brute_force": str(brute), "specialization": str(spec)})
    return res


# -- counting colorings --------------------------------------------------------


@operation
def chromatic_polynomial(G: LabeledGraph) -> list[int]:
    """Coefficients (constant term first) by deletion and contraction."""

    def rec(n: int, edges: frozenset) -> list[int]:
        if not edges:
            return [0] * n + [1]
        e = min(edges)
        rest = edges - {e}
        a, b = e
        merged = set()
        for x, y in rest:
            x, y = (a if x == b else x), (a if y == b else y)
            if x != y:
                merged.add((min(x, y), max(x, y)))
        # relabel vertices above b down by one so the contracted graph has n - 1 vertices
        shift = lambda v: v - 1 if v > b else v  # noqa: E731
        contracted = frozenset((shift(x), shift(y)) for x, y in merged)
        deleted, cont = rec(n, rest), rec(n - 1, contracted)
        return [x - (cont[i] if i < len(cont) else 0) for i, x in enumerate(deleted)]

    return rec(G.n, G.edges)


def evaluate_poly(coeffs: Sequence[int], m: int) -> int:
    return sum(c * m**i for i, c in enumerate(coeffs))


@operation
def count_colorings(X: QSymFunc, m: int) -> Any:
    """``X`` with ``x_1 = ... = x_m = 1`` and the remaining variables 0."""
    g = X.to("M")
    out = ZERO
    for alpha, c in g.coeffs.items():
        out = out + c * comb(m, len(alpha))
    return out


@operation
def relabeling_check(G: LabeledGraph, perms: Iterable[Sequence[int]]) -> CheckResult:
    """``X_G(x, 1)`` does not depend on the vertex labels."""
    res = CheckResult("relabel", {"graph": G.to_json()}, True)
    base = chromatic_qsym(G).subs(t=1)
    for perm in perms:
        other = chromatic_qsym(G.relabel(perm)).subs(t=1)
        if other != base:
            res.fail({"perm": list(perm)})
    return res


# -- conjecture suites ---------------------------------------------------------


def _e_verdict(X: SymFunc, n_edges: int):
    seq = [change_basis(f, "e") for f in X.t_slices(n_edges + 1)]
    return is_b_positive_unimodal(seq, positivity_oracle("e"))


@operation
def conjecture_suites(n: int) -> CheckResult:
    """Verdicts for every unit interval order on ``[n]``; asserted only for small n."""
    asserted = n <= CONJECTURE_ASSERT_MAX_N
    res = CheckResult("conjectures", {"n": n}, True)
    res.details["asserted"] = asserted
    orders = 0
    findings = []
    for P in enumerate_unit_interval_orders(n):
        orders += 1
        label = list(P.m)
        X = chromatic_qsym(P.inc)
        if not is_symmetric(X):
            findings.append({"hessenberg": label, "reason": "not symmetric"})
            continue
        Xs = to_symmetric(X)
        ne = len(P.inc.edges)
        verdict = _e_verdict(Xs, ne)
        if not verdict.ok or (n >= 1 and verdict.center != Fraction(ne, 2)):
            findings.append({"hessenberg": label, "reason": "e-positive/unimodal/palindromic", "verdict": verdict.as_dict()})
        if not positivity_oracle("e")(Xs.subs(t=1)):
            findings.append({"hessenberg": label, "reason": "X(x,1) not e-positive"})
    res.details["orders"] = orders
    for r in range(1, n + 1):
        A = rawlings_polynomial(n, r)
        verdict = is_b_positive_unimodal(A.t_coeffs())
        if not verdict.ok:
            findings.append({"r": r, "reason": "A^(r) not palindromic q-unimodal", "verdict": verdict.as_dict()})
    res.details["findings"] = findings
    if findings:
        if asserted:
            for f in findings:
                res.fail(f)
        else:
            res.witnesses.extend(findings)
    return res


__all__ = [
    "LabeledGraph",
    "GraphError",
    "UnitIntervalOrder",
    "PTableau",
    "P_nr",
    "validate_hessenberg",
    "parse_hessenberg",
    "enumerate_unit_interval_orders",
    "freeness_check",
    "chromatic_qsym",
    "chromatic_via_chow",
    "chow_sum",
    "chromatic_symmetric",
    "is_p_tableau",
    "tableau_inversions",
    "p_tableaux",
    "gasharov_expansion",
    "pn_formula",
    "pn_coefficient_check",
    "rawlings_polynomial",
    "rawlings_via_specialization",
    "rawlings_check",
    "chromatic_polynomial",
    "evaluate_poly",
    "count_colorings",
    "relabeling_check",
    "conjecture_suites",
]
