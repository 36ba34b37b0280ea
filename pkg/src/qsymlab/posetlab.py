"""Finite posets, Möbius functions, and Rees products of Boolean and subspace lattices.

A poset stores its strict order as two bitmask arrays: ``up[i]`` holds the
elements strictly above ``i`` and ``down[i]`` those strictly below.  Möbius
values ``mu(x, .)`` are computed for all tops at once and memoized per bottom.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, factorial
from typing import Any, Hashable, Iterable, Iterator, Sequence

from . import config
from . import permstat as ps
from ._trace import operation
from .polyring import ONE, ZERO, BiPoly, q_binomial
from .results import CheckResult

BOTTOM = "0^"
TOP = "1^"
SUPPORTED_PRIMES = (2, 3, 5)


class PosetError(ValueError):
    pass


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    """A finite poset on ``elements`` with an optional rank function."""

    def __init__(
        self,
        elements: Sequence[Hashable],
        relations: Iterable[tuple[int, int]],
        rank: Sequence[int] | None = None,
        closed: bool = False,
    ):
        self.elements = list(elements)
        n = len(self.elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != n:
            raise PosetError("duplicate elements")
        up = [0] * n
        for i, j in relations:
            if not (isinstance(i, int) and isinstance(j, int) and 0 <= i < n and 0 <= j < n):
                raise PosetError(f"relation ({i}, {j}) out of range")
            if i == j:
                raise PosetError(f"relation ({i}, {i}) is reflexive")
            up[i] |= 1 << j
        if not closed:
            up = _transitive_closure(up)
        for i in range(n):
            if up[i] >> i & 1:
                raise PosetError(f"relations contain a cycle through element {i}")
        down = [0] * n
        for i in range(n):
            for j in _bits(up[i]):
                down[j] |= 1 << i
        self.up, self.down = up, down
        self.rank = list(rank) if rank is not None else None
        self._mu: dict[int, dict[int, int]] = {}

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def n(self) -> int:
        return len(self.elements)

    def lt(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def leq(self, i: int, j: int) -> bool:
        return i == j or self.lt(i, j)

    def covers(self) -> list[tuple[int, int]]:
        out = []
        for i in range(self.n):
            for j in _bits(self.up[i]):
                if not self.up[i] & self.down[j]:
                    out.append((i, j))
        return out

    def linear_extension(self) -> list[int]:
        return sorted(range(self.n), key=lambda i: (bin(self.down[i]).count("1"), i))

    def minimum(self) -> int | None:
        for i in range(self.n):
            if not self.down[i] and bin(self.up[i]).count("1") == self.n - 1:
                return i
        return None

    def maximum(self) -> int | None:
        for i in range(self.n):
            if not self.up[i] and bin(self.down[i]).count("1") == self.n - 1:
                return i
        return None

    def is_bounded(self) -> bool:
        return self.minimum() is not None and self.maximum() is not None

    def graded_rank(self) -> list[int]:
        """Rank from the minimum; raises unless every cover raises it by one."""
        bottom = self.minimum()
        if bottom is None:
            raise PosetError("poset has no minimum")
        r = [0] * self.n
        for i in self.linear_extension():
            if i != bottom:
                r[i] = 1 + max(r[k] for k in _bits(self.down[i]))
        for i, j in self.covers():
            if r[j] != r[i] + 1:
                raise PosetError("poset is not graded")
        return r

    def interval(self, x: int, y: int) -> int:
        if not self.leq(x, y):
            raise PosetError(f"{self.elements[x]!r} is not below {self.elements[y]!r}")
        return ((self.up[x] | 1 << x) & (self.down[y] | 1 << y))

    def mobius_from(self, x: int) -> dict[int, int]:
        memo = self._mu.get(x)
        if memo is None:
            memo = {x: 1}
            order = [z for z in self.linear_extension() if self.lt(x, z)]
            for z in order:
                below = self.down[z] & (self.up[x] | 1 << x)
                memo[z] = -sum(memo[w] for w in _bits(below))
            self._mu[x] = memo
        return memo

    def subposet(self, keep: Sequence[int]) -> Poset:
        pos = {i: k for k, i in enumerate(keep)}
        rel = [(pos[i], pos[j]) for i in keep for j in keep if self.lt(i, j)]
        rank = [self.rank[i] for i in keep] if self.rank is not None else None
        return Poset([self.elements[i] for i in keep], rel, rank, closed=True)

    def with_bounds(self) -> Poset:
        """Adjoin fresh sentinels below and above everything."""
        n = self.n
        elems = [BOTTOM] + self.elements + [TOP]
        rel = [(0, i + 1) for i in range(n)] + [(i + 1, n + 1) for i in range(n)] + [(0, n + 1)]
        rel += [(i + 1, j + 1) for i in range(n) for j in _bits(self.up[i])]
        rank = None
        if self.rank is not None:
            top = max(self.rank, default=-1) + 1
            rank = [min(self.rank, default=0) - 1] + self.rank + [top]
        return Poset(elems, rel, rank, closed=True)

    def to_json(self) -> dict:
        return {
            "elements": [_label(x) for x in self.elements],
            "relations": [list(c) for c in self.covers()],
        }

    @classmethod
    def from_json(cls, data: Any) -> Poset:
        if not isinstance(data, dict) or "elements" not in data or "relations" not in data:
            raise PosetError('poset JSON needs "elements" and "relations"')
        elems = data["elements"]
        rel = data["relations"]
        if not isinstance(elems, list) or not isinstance(rel, list):
            raise PosetError("elements and relations must be lists")
        pairs = []
        for r in rel:
            if not (isinstance(r, list) and len(r) == 2 and all(isinstance(v, int) for v in r)):
                raise PosetError(f"malformed relation {r!r}")
            pairs.append((r[0], r[1]))
        return cls([_hashable(x) for x in elems], pairs)


def _hashable(x: Any) -> Hashable:
    return tuple(_hashable(v) for v in x) if isinstance(x, list) else x


def _label(x: Any) -> Any:
    if isinstance(x, frozenset):
        return sorted(x)
    if isinstance(x, tuple):
        return [_label(v) for v in x]
    return x


def _transitive_closure(up: list[int]) -> list[int]:
    n = len(up)
    out = list(up)
    for k in range(n):
        bit = 1 << k
        for i in range(n):
            if out[i] & bit:
                out[i] |= out[k]
    return out


@operation
def mobius(P: Poset, x: Hashable, y: Hashable) -> int:
    i, j = P.index[x], P.index[y]
    if not P.leq(i, j):
        raise PosetError(f"{x!r} is not below {y!r}")
    return P.mobius_from(i)[j]


def mobius_bounds(P: Poset) -> int:
    lo, hi = P.minimum(), P.maximum()
    if lo is None or hi is None:
        raise PosetError("poset is not bounded")
    return P.mobius_from(lo)[hi]


@operation
def rank_selected(P: Poset, S: Iterable[int]) -> Poset:
    """Elements with rank in S, with fresh bounds adjoined."""
    r = P.graded_rank()
    length = max(r)
    S = set(S)
    if not S <= set(range(1, length)):
        raise PosetError(f"S must lie in [1, {length - 1}]")
    keep = [i for i in range(P.n) if r[i] in S]
    inner = P.subposet(keep)
    inner.rank = [r[i] for i in keep]
    return inner.with_bounds()


# -- constructions ---------------------------------------------------------


def chain(k: int) -> Poset:
    """``0 < 1 < ... < k-1`` ranked by value."""
    return Poset(list(range(k)), [(i, i + 1) for i in range(k - 1)], list(range(k)))


@operation
def boolean_lattice(n: int) -> Poset:
    elems = [frozenset(i + 1 for i in range(n) if mask >> i & 1) for mask in range(1 << n)]
    rel = [
        (a, a | 1 << i) for a in range(1 << n) for i in range(n) if not a >> i & 1
    ]
    return Poset(elems, rel, [len(x) for x in elems])


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_p^n by its reduced row echelon basis."""

    p: int
    n: int
    rows: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.rows)

    def vectors(self) -> set[tuple[int, ...]]:
        out = set()
        for coeffs in product(range(self.p), repeat=self.dim):
            out.add(
                tuple(sum(c * row[k] for c, row in zip(coeffs, self.rows)) % self.p for k in range(self.n))
            )
        return out

    def __str__(self) -> str:
        return "<" + ",".join("".join(map(str, r)) for r in self.rows) + ">"


def _rref_bases(p: int, n: int, k: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    from itertools import combinations

    for pivots in combinations(range(n), k):
        free = [
            (r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, n) if c not in pivots
        ]
        for vals in product(range(p), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for r, pc in enumerate(pivots):
                rows[r][pc] = 1
            for (r, c), v in zip(free, vals):
                rows[r][c] = v
            yield tuple(tuple(row) for row in rows)


def _check_prime(p: int) -> None:
    if p not in SUPPORTED_PRIMES:
        raise PosetError(f"p={p} unsupported; use one of {SUPPORTED_PRIMES}")


class SubspaceLattice(Poset):
    """Subspaces of F_p^n ordered by inclusion, ranked by dimension."""

    def __init__(self, p: int, n: int):
        _check_prime(p)
        spaces = [Subspace(p, n, rows) for k in range(n + 1) for rows in _rref_bases(p, n, k)]
        vec_index = {v: i for i, v in enumerate(product(range(p), repeat=n))}
        masks = []
        for W in spaces:
            m = 0
            for v in W.vectors():
                m |= 1 << vec_index[v]
            masks.append(m)
        rel = [
            (a, b)
            for a in range(len(spaces))
            for b in range(len(spaces))
            if a != b and masks[a] & masks[b] == masks[a]
        ]
        super().__init__(spaces, rel, [W.dim for W in spaces], closed=True)
        self.p, self.dim = p, n


@operation
def subspace_lattice(p: int, n: int) -> SubspaceLattice:
    return SubspaceLattice(p, n)


def gaussian_count(p: int, n: int) -> int:
    return sum(q_binomial(n, k).subs(q=p).constant() for k in range(n + 1))


class ReesProduct(Poset):
    """Pairs ``(x, u)`` with ``r(x) >= r(u)`` under the rank-gap order."""

    def __init__(self, P: Poset, Q: Poset):
        if P.rank is None or Q.rank is None:
            raise PosetError("Rees product needs ranked factors")
        pairs = [(a, b) for a in range(P.n) for b in range(Q.n) if P.rank[a] >= Q.rank[b]]
        if not pairs:
            raise PosetError("rank condition leaves no elements")
        rp, rq = P.rank, Q.rank
        rel = []
        for i, (a, b) in enumerate(pairs):
            for j, (c, d) in enumerate(pairs):
                if i != j and P.leq(a, c) and Q.leq(b, d) and rp[c] - rp[a] >= rq[d] - rq[b]:
                    rel.append((i, j))
        elems = [(P.elements[a], Q.elements[b]) for a, b in pairs]
        super().__init__(elems, rel, [rp[a] for a, _ in pairs], closed=True)
        self.factors = (P, Q)


@operation
def rees(P: Poset, Q: Poset) -> ReesProduct:
    return ReesProduct(P, Q)


def _drop_bottom_reranked(L: Poset) -> Poset:
    """``L`` minus its minimum, ranked by ``r - 1``."""
    bottom = L.minimum()
    keep = [i for i in range(L.n) if i != bottom]
    sub = L.subposet(keep)
    sub.rank = [L.rank[i] - 1 for i in keep]
    return sub


@operation
def build_Rn(n: int) -> Poset:
    config.check_n(n, 6)
    return rees(_drop_bottom_reranked(boolean_lattice(n)), chain(n)).with_bounds()


@operation
def build_Rnq(n: int, p: int) -> Poset:
    config.check_n(n, 4)
    return rees(_drop_bottom_reranked(subspace_lattice(p, n)), chain(n)).with_bounds()


def _capped(n: int, cap: int, what: str = "n") -> int:
    config.check_n(n, cap, what)
    return n


def poset_from_name(name: str) -> Poset:
    """``boolean:n``, ``subspace:p:n``, ``rees-rn:n``, ``rees-rnq:n:p`` or ``chain:k``."""
    kind, _, rest = name.partition(":")
    try:
        args = [int(x) for x in rest.split(":")] if rest else []
    except ValueError as exc:
        raise PosetError(f"bad poset name {name!r}") from exc
    builders = {
        "boolean": (1, lambda n: boolean_lattice(_capped(n, 8))),
        "chain": (1, lambda k: chain(_capped(k, 64, "k"))),
        "subspace": (2, lambda p, n: subspace_lattice(p, _capped(n, 4))),
        "rees-rn": (1, build_Rn),
        "rees-rnq": (2, build_Rnq),
    }
    if kind not in builders or len(args) != builders[kind][0]:
        raise PosetError(f"unknown poset {name!r}")
    return builders[kind][1](*args)


# -- verifiers -------------------------------------------------------------


def _subsets(n: int) -> Iterator[frozenset[int]]:
    for mask in range(1 << n):
        yield frozenset(i + 1 for i in range(n) if mask >> i & 1)


def _rank_selected_check(name: str, L: Poset, n: int, weight) -> CheckResult:
    res = CheckResult(name, {"n": n}, True)
    paper_sign = standard_sign = 0
    rows = []
    for S in _subsets(n - 1):
        mu = mobius_bounds(rank_selected(L, S))
        target = weight(S)
        if abs(mu) != abs(target):
            res.fail({"S": sorted(S), "mu": mu, "expected_abs": abs(target)})
        paper_sign += mu == (-1) ** n * target
        standard_sign += mu == (-1) ** (len(S) + 1) * target
        rows.append({"S": sorted(S), "mu": mu})
    total = 1 << max(n - 1, 0)
    res.details.update(
        {
            "subsets": total,
            "sign_matches_(-1)^n": paper_sign,
            "sign_matches_(-1)^(|S|+1)": standard_sign,
            "values": rows,
        }
    )
    return res


@operation
def verify_rank_selected_boolean(n: int) -> CheckResult:
    config.check_n(n, 6)
    perms = [ps.des_set(s) for s in ps.enumerate_perms(n)]
    return _rank_selected_check(
        "rank-selected-boolean", boolean_lattice(n), n, lambda S: sum(1 for d in perms if d == S)
    )


@operation
def verify_rank_selected_subspace(n: int, p: int) -> CheckResult:
    config.check_n(n, 4)
    stats = [(ps.des_set(s), ps.inv(s)) for s in ps.enumerate_perms(n)]
    res = _rank_selected_check(
        "rank-selected-subspace",
        subspace_lattice(p, n),
        n,
        lambda S: sum(p**i for d, i in stats if d == S),
    )
    res.params["p"] = p
    return res


def eulerian_by_des(m: int) -> list[int]:
    out = [0] * max(m, 1)
    for s in ps.enumerate_perms(m):
        out[ps.des(s)] += 1
    return out


def derangements(n: int) -> int:
    return sum(1 for s in ps.enumerate_perms(n) if ps.is_derangement(s))


def _rees_elements(R: Poset) -> Iterator[tuple[int, Any, int]]:
    for i, x in enumerate(R.elements):
        if x not in (BOTTOM, TOP):
            yield i, x[0], x[1]


@operation
def verify_rees_eulerian(n: int) -> CheckResult:
    from .eulerqsym import euler_series

    res = CheckResult("rees-eulerian", {"n": n}, True)
    R = build_Rn(n)
    mu = R.mobius_from(R.index[BOTTOM])
    tables = {m: eulerian_by_des(m) for m in range(1, n + 1)}
    checked = 0
    for i, S, j in _rees_elements(R):
        m = len(S)
        want = (-1) ** m * tables[m][j]
        checked += 1
        if mu[i] != want:
            res.fail({"S": sorted(S), "j": j, "mu": mu[i], "expected": want})
    top = mu[R.index[TOP]]
    d = derangements(n)
    res.details.update({"pairs": checked, "mu_bottom_top": top, "derangements": d})
    if top != (-1) ** (n - 1) * d:
        res.fail({"reason": "mu(0,1) != (-1)^(n-1) d_n", "mu": top, "d_n": d})
    # generating function assembled from the full intervals of R_1..R_n
    coeffs = [ONE]
    for m in range(1, n + 1):
        Rm = R if m == n else build_Rn(m)
        mum = Rm.mobius_from(Rm.index[BOTTOM])
        full = frozenset(range(1, m + 1))
        poly = ZERO
        for k, S, j in _rees_elements(Rm):
            if S == full:
                poly = poly + BiPoly.monomial((-1) ** m * mum[k], t=j)
        coeffs.append(poly * Fraction(1, factorial(m)))
    if tuple(coeffs) != euler_series(n, "des").coeffs:
        res.fail({"reason": "Mobius generating function differs from Euler's series"})
    return res


def _majexc_weight(m: int, j: int, p: int) -> int:
    return sum(
        p ** (comb(m, 2) - ps.maj(s) + j) for s in ps.enumerate_perms(m) if ps.exc(s) == j
    )


@operation
def verify_rees_q(n: int, p: int) -> CheckResult:
    res = CheckResult("rees-q", {"n": n, "p": p}, True)
    R = build_Rnq(n, p)
    mu = R.mobius_from(R.index[BOTTOM])
    cache: dict[tuple[int, int], int] = {}
    checked = 0
    for i, W, j in _rees_elements(R):
        m = W.dim
        if (m, j) not in cache:
            cache[(m, j)] = (-1) ** m * _majexc_weight(m, j, p)
        checked += 1
        if mu[i] != cache[(m, j)]:
            res.fail({"W": str(W), "j": j, "mu": mu[i], "expected": cache[(m, j)]})
    top = mu[R.index[TOP]]
    want = (-1) ** (n - 1) * sum(
        p ** (comb(n, 2) - ps.maj(s) + ps.exc(s))
        for s in ps.enumerate_perms(n)
        if ps.is_derangement(s)
    )
    res.details.update({"pairs": checked, "mu_bottom_top": top, "expected_bottom_top": want})
    if top != want:
        res.fail({"reason": "derangement formula", "mu": top, "expected": want})
    return res


@operation
def verify_lower_intervals(n: int) -> CheckResult:
    """Each ``[0, (S, j)]`` in R_n maps isomorphically onto ``[0, ([m], j)]`` in R_m."""
    res = CheckResult("rees-lower-intervals", {"n": n}, True)
    R = build_Rn(n)
    small = {m: build_Rn(m) for m in range(1, n + 1)}
    bottom = R.index[BOTTOM]
    for i, S, j in _rees_elements(R):
        m = len(S)
        relabel = {v: k + 1 for k, v in enumerate(sorted(S))}
        Rm = small[m]
        target = Rm.index[(frozenset(range(1, m + 1)), j)]
        src = list(_bits(R.interval(bottom, i)))
        dst = set(_bits(Rm.interval(Rm.index[BOTTOM], target)))

        def phi(k: int) -> int:
            x = R.elements[k]
            if x == BOTTOM:
                return Rm.index[BOTTOM]
            return Rm.index[(frozenset(relabel[v] for v in x[0]), x[1])]

        image = [phi(k) for k in src]
        ok = set(image) == dst and len(image) == len(dst)
        ok = ok and all(
            R.lt(a, b) == Rm.lt(fa, fb)
            for a, fa in zip(src, image)
            for b, fb in zip(src, image)
        )
        if not ok:
            res.fail({"S": sorted(S), "j": j})
    return res


@operation
def mobius_sum_check(P: Poset) -> bool:
    """``sum_{x in [0,1]} mu(0, x) = 0`` for a bounded poset with two or more elements."""
    lo = P.minimum()
    if lo is None or P.maximum() is None:
        raise PosetError("poset is not bounded")
    return P.n < 2 or sum(P.mobius_from(lo).values()) == 0


@operation
def check_named(name: str) -> CheckResult:
    """Run the verifier that matches a built-in poset name."""
    P = poset_from_name(name)
    kind, _, rest = name.partition(":")
    args = [int(x) for x in rest.split(":")] if rest else []
    if kind == "rees-rn":
        res = verify_rees_eulerian(args[0])
    elif kind == "rees-rnq":
        res = verify_rees_q(args[0], args[1])
    elif kind == "boolean":
        res = verify_rank_selected_boolean(args[0])
    elif kind == "subspace":
        res = verify_rank_selected_subspace(args[1], args[0])
        if len(P) != gaussian_count(args[0], args[1]):
            res.fail({"reason": "subspace count differs from the Gaussian binomial sum"})
    else:
        res = CheckResult("mobius", {"poset": name}, True)
    if not mobius_sum_check(P):
        res.fail({"reason": "Mobius values over [0,1] do not sum to 0"})
    res.details["verifier"] = res.check
    res.check = "mobius"
    res.params = {"poset": name}
    res.details["mu_bottom_top"] = mobius_bounds(P)
    return res


__all__ = [
    "Poset",
    "PosetError",
    "Subspace",
    "SubspaceLattice",
    "ReesProduct",
    "BOTTOM",
    "TOP",
    "mobius",
    "mobius_bounds",
    "rank_selected",
    "chain",
    "boolean_lattice",
    "subspace_lattice",
    "gaussian_count",
    "rees",
    "build_Rn",
    "build_Rnq",
    "poset_from_name",
    "verify_rank_selected_boolean",
    "verify_rank_selected_subspace",
    "verify_rees_eulerian",
    "verify_rees_q",
    "verify_lower_intervals",
    "mobius_sum_check",
    "check_named",
    "derangements",
    "eulerian_by_des",
]
