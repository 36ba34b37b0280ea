"""Homogeneous quasisymmetric and symmetric functions with q,t coefficients.

Quasisymmetric functions live in the monomial (``M``) or fundamental
(``F``) basis, keyed by compositions.  Symmetric functions carry a basis
tag from ``m, e, h, p, s`` and are keyed by partitions.  All conversions
route through the monomial bases.

Subsets ``S = {s_1 < ... < s_k}`` of ``[n-1]`` correspond to the
composition ``(s_1, s_2 - s_1, ..., n - s_k)``, and
``F_{n,S} = sum_{T >= S} M_{comp(T)}``.  The omega involution acts on
``F`` by complementing ``S``; on symmetric functions this agrees with the
usual ``h_n -> e_n``.

Principal specialization reads an F-expansion through
``F_{n,S} -> q^(sum S) / (q;q)_n``.  That is the specialization under the
reversed-index reading of ``F``; for symmetric inputs the two readings
coincide.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Any, Iterable, Iterator

from ._trace import operation
from .permstat import Partition, partitions
from .polyring import ONE, ZERO, BiPoly, SeriesZ, _join, _norm, q_pochhammer
from .polyring import Q as QVAR

Composition = tuple[int, ...]

SYM_BASES = ("m", "e", "h", "p", "s")
DEGREE_CAP = 10


class DegreeCapExceeded(ValueError):
    pass


def set_degree_cap(cap: int) -> None:
    global DEGREE_CAP
    DEGREE_CAP = int(cap)


def _check_degree(n: int) -> None:
    if n > DEGREE_CAP:
        raise DegreeCapExceeded(f"degree {n} exceeds cap {DEGREE_CAP}")


# -- compositions, subsets, partitions --------------------------------------


def compositions(n: int) -> Iterator[Composition]:
    if n == 0:
        yield ()
        return
    for k in range(1, n + 1):
        for rest in compositions(n - k):
            yield (k,) + rest


def subset_to_comp(n: int, S: Iterable[int]) -> Composition:
    S = sorted(S)
    if any(not 1 <= s <= n - 1 for s in S):
        raise ValueError(f"subset {S} not contained in [1, {n - 1}]")
    if n == 0:
        return ()
    cuts = [0] + S + [n]
    return tuple(b - a for a, b in zip(cuts, cuts[1:]))


def comp_to_subset(alpha: Composition) -> frozenset[int]:
    out, acc = [], 0
    for a in alpha[:-1]:
        acc += a
        out.append(acc)
    return frozenset(out)


def conjugate_partition(lam: Partition) -> Partition:
    if not lam:
        return ()
    return tuple(sum(1 for x in lam if x > i) for i in range(lam[0]))


def dominates(lam: Partition, mu: Partition) -> bool:
    """``lam >= mu`` in dominance order (same size)."""
    a = b = 0
    for i in range(max(len(lam), len(mu))):
        a += lam[i] if i < len(lam) else 0
        b += mu[i] if i < len(mu) else 0
        if a < b:
            return False
    return True


def _distinct_perms(values: list[int]) -> Iterator[tuple[int, ...]]:
    counts: dict[int, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    keys = sorted(counts)
    n = len(values)
    cur: list[int] = []

    def rec():
        if len(cur) == n:
            yield tuple(cur)
            return
        for k in keys:
            if counts[k]:
                counts[k] -= 1
                cur.append(k)
                yield from rec()
                cur.pop()
                counts[k] += 1

    yield from rec()


def rearrangements(lam: Partition) -> list[Composition]:
    return list(_distinct_perms(list(lam)))


# -- coefficient formatting -------------------------------------------------


def _term_str(coeff: BiPoly, label: str) -> str:
    if coeff == 1:
        return label
    if coeff == -1:
        return "-" + label
    items = list(coeff.items())
    if len(items) == 1:
        (a, b), v = items[0]
        if a == 0 and b == 0:
            return f"{v}*{label}"
        return f"{coeff}*{label}"
    return f"({coeff})*{label}"


def _as_bipoly(c: Any) -> BiPoly:
    return c if isinstance(c, BiPoly) else BiPoly.const(c)


def _add_into(acc: dict, key: Any, c: BiPoly) -> None:
    prev = acc.get(key)
    acc[key] = c if prev is None else prev + c


def _strip(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


# -- quasisymmetric functions -----------------------------------------------


class QSymFunc:
    """Degree-``n`` quasisymmetric function in basis ``"M"`` or ``"F"``."""

    __slots__ = ("degree", "basis", "coeffs")

    def __init__(self, degree: int, basis: str, coeffs: dict[Composition, Any] | None = None):
        if basis not in ("M", "F"):
            raise ValueError(f"unknown quasisymmetric basis {basis!r}")
        self.degree = degree
        self.basis = basis
        c = {}
        for alpha, v in (coeffs or {}).items():
            alpha = tuple(alpha)
            if sum(alpha) != degree or any(a < 1 for a in alpha):
                raise ValueError(f"{alpha} is not a composition of {degree}")
            v = _as_bipoly(v)
            if v:
                c[alpha] = v
        self.coeffs = c

    @classmethod
    def _raw(cls, degree: int, basis: str, coeffs: dict) -> QSymFunc:
        obj = cls.__new__(cls)
        obj.degree, obj.basis, obj.coeffs = degree, basis, coeffs
        return obj

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def to(self, basis: str) -> QSymFunc:
        if basis == self.basis:
            return self
        return f_to_m(self) if basis == "M" else m_to_f(self)

    def _binop(self, other: QSymFunc, sign: int) -> QSymFunc:
        if not isinstance(other, QSymFunc):
            return NotImplemented
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other if sign > 0 else -other
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        other = other.to(self.basis)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            _add_into(out, k, v if sign > 0 else -v)
        return QSymFunc._raw(self.degree, self.basis, _strip(out))

    def __add__(self, other):
        return self._binop(other, 1)

    def __sub__(self, other):
        return self._binop(other, -1)

    def __neg__(self):
        return QSymFunc._raw(self.degree, self.basis, {k: -v for k, v in self.coeffs.items()})

    def __mul__(self, c: Any) -> QSymFunc:
        if isinstance(c, (QSymFunc, SymFunc)):
            return NotImplemented
        c = _as_bipoly(c)
        return QSymFunc._raw(self.degree, self.basis, _strip({k: v * c for k, v in self.coeffs.items()}))

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SymFunc):
            other = from_symmetric(other)
        if not isinstance(other, QSymFunc):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return not self.coeffs and not other.coeffs
        if self.degree != other.degree:
            return False
        return self.coeffs == other.to(self.basis).coeffs

    __hash__ = None  # type: ignore[assignment]

    def subs(self, q: Any = None, t: Any = None) -> QSymFunc:
        return QSymFunc._raw(
            self.degree, self.basis, _strip({k: v.subs(q=q, t=t) for k, v in self.coeffs.items()})
        )

    def t_slices(self) -> list[QSymFunc]:
        top = max((v.deg_t for v in self.coeffs.values()), default=-1)
        out = [dict() for _ in range(top + 1)]
        for k, v in self.coeffs.items():
            for j, c in enumerate(v.t_coeffs()):
                if c:
                    out[j][k] = c
        return [QSymFunc._raw(self.degree, self.basis, d) for d in out]

    def label(self, alpha: Composition) -> str:
        if self.basis == "M":
            return "M(" + ",".join(map(str, alpha)) + ")"
        return f"F{self.degree}{{" + ",".join(map(str, sorted(comp_to_subset(alpha)))) + "}"

    def _sort_key(self, alpha: Composition):
        if self.basis == "F":
            S = sorted(comp_to_subset(alpha))
            return (len(S), S)
        return (len(alpha), alpha)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        keys = sorted(self.coeffs, key=self._sort_key)
        return _join([_term_str(self.coeffs[a], self.label(a)) for a in keys])

    def __repr__(self) -> str:
        return f"QSymFunc({self.basis}, {self})"

    def to_json(self) -> dict:
        keys = sorted(self.coeffs, key=self._sort_key)
        return {
            "basis": self.basis,
            "degree": self.degree,
            "terms": {self.label(a): str(self.coeffs[a]) for a in keys},
        }


@operation
def fundamental(n: int, S: Iterable[int], coeff: Any = 1) -> QSymFunc:
    return QSymFunc(n, "F", {subset_to_comp(n, S): coeff})


def monomial_qsym(alpha: Composition, coeff: Any = 1) -> QSymFunc:
    return QSymFunc(sum(alpha), "M", {tuple(alpha): coeff})


def _supersets(n: int, S: frozenset[int]) -> Iterator[frozenset[int]]:
    rest = [i for i in range(1, n) if i not in S]
    for k in range(len(rest) + 1):
        for extra in combinations(rest, k):
            yield S | frozenset(extra)


@operation
def f_to_m(f: QSymFunc) -> QSymFunc:
    if f.basis == "M":
        return f
    n = f.degree
    out: dict = {}
    for alpha, c in f.coeffs.items():
        for T in _supersets(n, comp_to_subset(alpha)):
            _add_into(out, subset_to_comp(n, T), c)
    return QSymFunc._raw(n, "M", _strip(out))


@operation
def m_to_f(f: QSymFunc) -> QSymFunc:
    """Inclusion-exclusion: ``M_S = sum_{T >= S} (-1)^{|T - S|} F_T``."""
    if f.basis == "F":
        return f
    n = f.degree
    out: dict = {}
    for alpha, c in f.coeffs.items():
        S = comp_to_subset(alpha)
        for T in _supersets(n, S):
            _add_into(out, subset_to_comp(n, T), c if (len(T) - len(S)) % 2 == 0 else -c)
    return QSymFunc._raw(n, "F", _strip(out))


@operation
def is_symmetric(f: QSymFunc) -> bool:
    f = f.to("M")
    shared: dict[Partition, BiPoly] = {}
    for alpha, c in f.coeffs.items():
        lam = tuple(sorted(alpha, reverse=True))
        if lam in shared and shared[lam] != c:
            return False
        shared[lam] = c
    for lam in shared:
        for alpha in rearrangements(lam):
            if alpha not in f.coeffs:
                return False
    return True


class NotSymmetricError(ValueError):
    pass


@operation
def to_symmetric(f: QSymFunc) -> SymFunc:
    if not is_symmetric(f):
        raise NotSymmetricError("quasisymmetric function is not symmetric")
    f = f.to("M")
    out = {tuple(sorted(a, reverse=True)): c for a, c in f.coeffs.items()}
    return SymFunc._raw(f.degree, "m", out)


def from_symmetric(f: SymFunc) -> QSymFunc:
    f = f.to("m")
    out = {}
    for lam, c in f.coeffs.items():
        for alpha in rearrangements(lam):
            out[alpha] = c
    return QSymFunc._raw(f.degree, "M", out)


# -- symmetric functions ----------------------------------------------------


class SymFunc:
    """Degree-``n`` symmetric function in one of the bases ``m, e, h, p, s``.

    An empty coefficient map is the zero function and adds to anything.
    """

    __slots__ = ("degree", "basis", "coeffs")

    def __init__(self, degree: int, basis: str, coeffs: dict[Partition, Any] | None = None):
        if basis not in SYM_BASES:
            raise ValueError(f"unknown symmetric basis {basis!r}")
        self.degree = degree
        self.basis = basis
        c = {}
        for lam, v in (coeffs or {}).items():
            lam = tuple(lam)
            if sum(lam) != degree or list(lam) != sorted(lam, reverse=True) or any(x < 1 for x in lam):
                raise ValueError(f"{lam} is not a partition of {degree}")
            v = _as_bipoly(v)
            if v:
                c[lam] = v
        self.coeffs = c

    @classmethod
    def _raw(cls, degree: int, basis: str, coeffs: dict) -> SymFunc:
        obj = cls.__new__(cls)
        obj.degree, obj.basis, obj.coeffs = degree, basis, coeffs
        return obj

    @classmethod
    def zero(cls, degree: int = 0, basis: str = "m") -> SymFunc:
        return cls._raw(degree, basis, {})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def to(self, basis: str) -> SymFunc:
        return change_basis(self, basis)

    def _binop(self, other: Any, sign: int) -> SymFunc:
        if not isinstance(other, SymFunc):
            return NotImplemented
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other if sign > 0 else -other
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")
        other = other.to(self.basis)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            _add_into(out, k, v if sign > 0 else -v)
        return SymFunc._raw(self.degree, self.basis, _strip(out))

    def __add__(self, other):
        return self._binop(other, 1)

    def __sub__(self, other):
        return self._binop(other, -1)

    def __neg__(self):
        return SymFunc._raw(self.degree, self.basis, {k: -v for k, v in self.coeffs.items()})

    def __mul__(self, other: Any) -> SymFunc:
        if isinstance(other, QSymFunc):
            return NotImplemented
        if not isinstance(other, SymFunc):
            c = _as_bipoly(other)
            return SymFunc._raw(self.degree, self.basis, _strip({k: v * c for k, v in self.coeffs.items()}))
        deg = self.degree + other.degree
        if not self.coeffs or not other.coeffs:
            return SymFunc.zero(deg, self.basis)
        if self.basis == other.basis and self.basis in "ehp":
            a, b, basis = self, other, self.basis
        else:
            a, b, basis = self.to("h"), other.to("h"), "h"
        out: dict = {}
        for lam, u in a.coeffs.items():
            for mu, v in b.coeffs.items():
                _add_into(out, tuple(sorted(lam + mu, reverse=True)), u * v)
        return SymFunc._raw(deg, basis, _strip(out))

    def __rmul__(self, other: Any) -> SymFunc:
        return self * other

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QSymFunc):
            return from_symmetric(self) == other
        if not isinstance(other, SymFunc):
            if other == 0:
                return not self.coeffs
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return not self.coeffs and not other.coeffs
        if self.degree != other.degree:
            return False
        if self.basis == other.basis:
            return self.coeffs == other.coeffs
        return self.to("m").coeffs == other.to("m").coeffs

    __hash__ = None  # type: ignore[assignment]

    def coeff(self, lam: Partition) -> BiPoly:
        return self.coeffs.get(tuple(lam), ZERO)

    def subs(self, q: Any = None, t: Any = None) -> SymFunc:
        return SymFunc._raw(
            self.degree, self.basis, _strip({k: v.subs(q=q, t=t) for k, v in self.coeffs.items()})
        )

    def t_slices(self, length: int | None = None) -> list[SymFunc]:
        """Coefficients of successive powers of t, as t-free symmetric functions."""
        top = max((v.deg_t for v in self.coeffs.values()), default=-1)
        n = top + 1 if length is None else length
        out: list[dict] = [dict() for _ in range(n)]
        for k, v in self.coeffs.items():
            for j, c in enumerate(v.t_coeffs()):
                if c:
                    out[j][k] = c
        return [SymFunc._raw(self.degree, self.basis, d) for d in out]

    def is_nonneg(self) -> bool:
        """Nonnegativity in the function's own basis."""
        return all(v.is_nonneg() for v in self.coeffs.values())

    def label(self, lam: Partition) -> str:
        return f"{self.basis}[" + ",".join(map(str, lam)) + "]"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        keys = sorted(self.coeffs, reverse=True)
        return _join([_term_str(self.coeffs[k], self.label(k)) for k in keys])

    def __repr__(self) -> str:
        return f"SymFunc({self})"

    def to_json(self) -> dict:
        keys = sorted(self.coeffs, reverse=True)
        return {
            "basis": self.basis,
            "degree": self.degree,
            "terms": {self.label(k): str(self.coeffs[k]) for k in keys},
        }


def basis_element(basis: str, lam: Iterable[int], coeff: Any = 1) -> SymFunc:
    lam = tuple(sorted(lam, reverse=True))
    return SymFunc(sum(lam), basis, {lam: coeff})


def m(*lam: int) -> SymFunc:
    return basis_element("m", lam)


def e(*lam: int) -> SymFunc:
    return basis_element("e", lam)


def h(*lam: int) -> SymFunc:
    return basis_element("h", lam)


def p(*lam: int) -> SymFunc:
    return basis_element("p", lam)


def s(*lam: int) -> SymFunc:
    return basis_element("s", lam)


# -- transition tables ------------------------------------------------------


_m_product_cache: dict[tuple[Partition, Partition], dict[Partition, int]] = {}


def m_product(lam: Partition, mu: Partition) -> dict[Partition, int]:
    """Monomial-basis structure constants of ``m_lam * m_mu``.

    The coefficient of ``m_nu`` counts pairs of exponent vectors, arranged
    from ``lam`` and ``mu`` padded with zeros, summing to ``nu``.
    """
    key = (lam, mu) if lam >= mu else (mu, lam)
    hit = _m_product_cache.get(key)
    if hit is not None:
        return hit
    lam, mu = key
    n = sum(lam) + sum(mu)
    out: dict[Partition, int] = {}
    lo = max(len(lam), len(mu))
    hi = len(lam) + len(mu)
    for nu in partitions(n):
        L = len(nu)
        if not lo <= L <= hi:
            continue
        count = _count_splits(nu, lam, mu)
        if count:
            out[nu] = count
    _m_product_cache[key] = out
    return out


def _count_splits(nu: Partition, lam: Partition, mu: Partition) -> int:
    """Arrangements ``a`` of lam (zero-padded) with ``nu - a`` an arrangement of mu."""
    L = len(nu)
    counts: dict[int, int] = {}
    for v in list(lam) + [0] * (L - len(lam)):
        counts[v] = counts.get(v, 0) + 1
    keys = sorted(counts)
    target = tuple(sorted(mu))
    rest: list[int] = []
    total = 0

    def rec(i: int):
        nonlocal total
        if i == L:
            if tuple(sorted(x for x in rest if x)) == target:
                total += 1
            return
        for k in keys:
            if counts[k] and k <= nu[i]:
                counts[k] -= 1
                rest.append(nu[i] - k)
                rec(i + 1)
                rest.pop()
                counts[k] += 1

    rec(0)
    return total


def _mul_m_dicts(a: dict[Partition, Any], b: dict[Partition, Any]) -> dict[Partition, Any]:
    out: dict[Partition, Any] = {}
    for lam, u in a.items():
        for mu, v in b.items():
            for nu, c in m_product(lam, mu).items():
                out[nu] = out.get(nu, 0) + u * v * c
    return {k: v for k, v in out.items() if v}


def _single_row(basis: str, k: int) -> dict[Partition, int]:
    if basis == "e":
        return {(1,) * k: 1}
    if basis == "p":
        return {(k,): 1}
    if basis == "h":
        return {mu: 1 for mu in partitions(k)}
    raise ValueError(basis)


def _horizontal_strips(kappa: Partition, k: int, bound: Partition) -> Iterator[Partition]:
    """Shapes ``kappa' ⊇ kappa`` inside ``bound`` with ``kappa'/kappa`` a horizontal strip of size k."""
    rows = len(bound)
    base = list(kappa) + [0] * (rows - len(kappa))
    new = [0] * rows

    def rec(i: int, left: int):
        if i == rows:
            if left == 0:
                yield tuple(x for x in new if x)
            return
        cap = bound[i] if i == 0 else min(bound[i], base[i - 1])
        for add in range(min(left, cap - base[i]), -1, -1):
            new[i] = base[i] + add
            yield from rec(i + 1, left - add)

    yield from rec(0, k)


def kostka(lam: Partition, mu: Iterable[int]) -> int:
    """Semistandard tableaux of shape lam and content mu, built as chains of horizontal strips."""
    lam = tuple(lam)
    mu = tuple(mu)
    if sum(lam) != sum(mu):
        return 0
    layer: dict[Partition, int] = {(): 1}
    for k in mu:
        nxt: dict[Partition, int] = {}
        for kappa, c in layer.items():
            for new in _horizontal_strips(kappa, k, lam):
                nxt[new] = nxt.get(new, 0) + c
        layer = nxt
    return layer.get(lam, 0)


@dataclass
class _Tables:
    degree: int
    parts: list[Partition]  # lexicographically decreasing
    in_m: dict[str, dict[Partition, dict[Partition, Any]]]
    m_in: dict[str, dict[Partition, dict[Partition, Any]]]


_tables: dict[int, _Tables] = {}
_tables_lock = threading.Lock()


def _tables_for(n: int) -> _Tables:
    tab = _tables.get(n)
    if tab is not None:
        return tab
    _check_degree(n)
    with _tables_lock:
        tab = _tables.get(n)
        if tab is None:
            tab = _build_tables(n)
            _tables[n] = tab
    return tab


def _multiplicative_in_m(basis: str, lam: Partition, memo: dict) -> dict[Partition, Any]:
    if lam in memo:
        return memo[lam]
    if not lam:
        out = {(): 1}
    elif len(lam) == 1:
        out = _single_row(basis, lam[0])
    else:
        out = _mul_m_dicts(_multiplicative_in_m(basis, lam[1:], memo), _single_row(basis, lam[0]))
    memo[lam] = out
    return out


_mult_memo: dict[str, dict] = {"e": {}, "h": {}, "p": {}}


def _build_tables(n: int) -> _Tables:
    parts = list(partitions(n))
    in_m: dict[str, dict] = {"m": {lam: {lam: 1} for lam in parts}}
    for b in "ehp":
        in_m[b] = {lam: _multiplicative_in_m(b, lam, _mult_memo[b]) for lam in parts}
    in_m["s"] = {}
    for lam in parts:
        row = {}
        for mu in parts:
            if dominates(lam, mu):
                k = kostka(lam, mu)
                if k:
                    row[mu] = k
        in_m["s"][lam] = row
    m_in = {"m": in_m["m"]}
    m_in["s"] = {mu: _solve_s(mu, in_m["s"]) for mu in parts}
    m_in["e"] = {mu: _solve_e(mu, in_m["e"]) for mu in parts}
    m_in["p"] = {mu: _solve_p(mu, in_m["p"]) for mu in parts}
    h_in_s = {nu: {lam: in_m["s"][lam][nu] for lam in parts if nu in in_m["s"][lam]} for nu in parts}
    m_in["h"] = {mu: _solve_h_from_s(m_in["s"][mu], h_in_s) for mu in parts}
    return _Tables(n, parts, in_m, m_in)


def _sub_scaled(v: dict, row: dict, c: Any) -> None:
    for k, x in row.items():
        nv = v.get(k, 0) - c * x
        if nv:
            v[k] = nv
        else:
            v.pop(k, None)


def _solve_s(mu: Partition, s_in_m: dict) -> dict:
    v: dict = {mu: 1}
    out: dict = {}
    while v:
        nu = max(v)
        c = v[nu]
        if s_in_m[nu].get(nu) != 1:
            raise ArithmeticError(f"Schur expansion of {nu} is not unitriangular")
        out[nu] = c
        _sub_scaled(v, s_in_m[nu], c)
    return out


def _solve_e(mu: Partition, e_in_m: dict) -> dict:
    v: dict = {mu: 1}
    out: dict = {}
    while v:
        nu = max(v)
        c = v[nu]
        lam = conjugate_partition(nu)
        if e_in_m[lam].get(nu) != 1:
            raise ArithmeticError(f"e-expansion of {lam} lacks unit leading term")
        out[lam] = c
        _sub_scaled(v, e_in_m[lam], c)
    return out


def _solve_p(mu: Partition, p_in_m: dict) -> dict:
    v: dict = {mu: 1}
    out: dict = {}
    while v:
        nu = min(v)
        lead = p_in_m[nu].get(nu, 0)
        if not lead:
            raise ArithmeticError(f"singular power-sum pivot at {nu}")
        c = _norm(Fraction(v[nu]) / lead)
        out[nu] = c
        _sub_scaled(v, p_in_m[nu], c)
    return out


def _solve_h_from_s(vec: dict, h_in_s: dict) -> dict:
    v = dict(vec)
    out: dict = {}
    while v:
        nu = min(v)
        c = v[nu]
        if h_in_s[nu].get(nu) != 1:
            raise ArithmeticError(f"h-expansion in Schur basis of {nu} is not unitriangular")
        out[nu] = c
        _sub_scaled(v, h_in_s[nu], c)
    return out


def _apply(coeffs: dict[Partition, BiPoly], table: dict[Partition, dict[Partition, Any]]) -> dict:
    out: dict = {}
    for lam, c in coeffs.items():
        for mu, x in table[lam].items():
            _add_into(out, mu, c * x)
    return _strip(out)


@operation
def expand_to_m(f: SymFunc) -> SymFunc:
    if f.basis == "m":
        return f
    if not f.coeffs:
        return SymFunc.zero(f.degree, "m")
    tab = _tables_for(f.degree)
    return SymFunc._raw(f.degree, "m", _apply(f.coeffs, tab.in_m[f.basis]))


@operation
def change_basis(f: SymFunc, target: str) -> SymFunc:
    if target not in SYM_BASES:
        raise ValueError(f"unknown symmetric basis {target!r}")
    if f.basis == target:
        return f
    if not f.coeffs:
        return SymFunc.zero(f.degree, target)
    fm = expand_to_m(f)
    if target == "m":
        return fm
    tab = _tables_for(f.degree)
    return SymFunc._raw(f.degree, target, _apply(fm.coeffs, tab.m_in[target]))


@operation
def omega(f: SymFunc | QSymFunc) -> SymFunc | QSymFunc:
    """The involution ``h_n <-> e_n``; on F it complements descent sets."""
    if isinstance(f, QSymFunc):
        g = f.to("F")
        n = g.degree
        full = frozenset(range(1, n))
        out = {subset_to_comp(n, full - comp_to_subset(a)): c for a, c in g.coeffs.items()}
        return QSymFunc._raw(n, "F", out).to(f.basis)
    n = f.degree
    if f.basis == "h":
        return SymFunc._raw(n, "e", dict(f.coeffs))
    if f.basis == "e":
        return SymFunc._raw(n, "h", dict(f.coeffs))
    if f.basis == "p":
        return SymFunc._raw(
            n, "p", {lam: (c if (n - len(lam)) % 2 == 0 else -c) for lam, c in f.coeffs.items()}
        )
    if f.basis == "s":
        return SymFunc._raw(n, "s", {conjugate_partition(lam): c for lam, c in f.coeffs.items()})
    g = change_basis(f, "e")
    return change_basis(SymFunc._raw(n, "h", dict(g.coeffs)), "m")


@dataclass(frozen=True)
class PrincipalSpecialization:
    """``numerator / (q;q)_n``."""

    numerator: BiPoly
    n: int

    @property
    def denominator(self) -> BiPoly:
        return q_pochhammer(self.n)

    def __str__(self) -> str:
        return f"({self.numerator})/(q;q)_{self.n}"


@operation
def stable_principal_specialization(f: SymFunc | QSymFunc) -> PrincipalSpecialization:
    if isinstance(f, SymFunc):
        f = from_symmetric(f)
    g = f.to("F")
    num = ZERO
    for alpha, c in g.coeffs.items():
        num = num + c * QVAR ** sum(comp_to_subset(alpha))
    return PrincipalSpecialization(num, g.degree)


@operation
def exponential_specialization(f: SymFunc) -> BiPoly:
    """``e_n -> 1/n!``, extended multiplicatively; t (and q) stay symbolic."""
    g = change_basis(f, "e")
    out = ZERO
    for lam, c in g.coeffs.items():
        den = 1
        for k in lam:
            den *= factorial(k)
        out = out + c * Fraction(1, den)
    return out


# -- polynomials in finitely many variables ----------------------------------


class VarPoly:
    """Polynomial in ``x_1..x_k`` with BiPoly coefficients."""

    __slots__ = ("k", "terms")

    def __init__(self, k: int, terms: dict[tuple[int, ...], Any] | None = None):
        self.k = k
        self.terms = {tuple(a): _as_bipoly(c) for a, c in (terms or {}).items() if c}

    @classmethod
    def _raw(cls, k: int, terms: dict) -> VarPoly:
        obj = cls.__new__(cls)
        obj.k, obj.terms = k, terms
        return obj

    @classmethod
    def one(cls, k: int) -> VarPoly:
        return cls._raw(k, {(0,) * k: ONE})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _same(self, other: VarPoly) -> None:
        if other.k != self.k:
            raise ValueError("variable count mismatch")

    def __add__(self, other: VarPoly) -> VarPoly:
        self._same(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            _add_into(out, a, c)
        return VarPoly._raw(self.k, _strip(out))

    def __neg__(self) -> VarPoly:
        return VarPoly._raw(self.k, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other: VarPoly) -> VarPoly:
        return self + (-other)

    def __mul__(self, other: Any) -> VarPoly:
        if not isinstance(other, VarPoly):
            c = _as_bipoly(other)
            return VarPoly._raw(self.k, _strip({a: v * c for a, v in self.terms.items()}))
        self._same(other)
        out: dict = {}
        for a, u in self.terms.items():
            for b, v in other.terms.items():
                _add_into(out, tuple(x + y for x, y in zip(a, b)), u * v)
        return VarPoly._raw(self.k, _strip(out))

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VarPoly):
            return NotImplemented
        return self.k == other.k and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def permute(self, perm: tuple[int, ...]) -> VarPoly:
        """Send ``x_i`` to ``x_{perm[i]}`` (0-indexed positions)."""
        out = {}
        for a, c in self.terms.items():
            b = [0] * self.k
            for i, x in enumerate(a):
                b[perm[i]] = x
            out[tuple(b)] = c
        return VarPoly._raw(self.k, out)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for a in sorted(self.terms, reverse=True):
            mono = "*".join(
                (f"x{i + 1}" if x == 1 else f"x{i + 1}^{x}") for i, x in enumerate(a) if x
            ) or "1"
            pieces.append(_term_str(self.terms[a], mono) if mono != "1" else str(self.terms[a]))
        return _join(pieces)


@operation
def expand_in_k_vars(f: QSymFunc | SymFunc, k: int) -> VarPoly:
    if k < 1:
        raise ValueError("need at least one variable")
    if isinstance(f, SymFunc):
        f = from_symmetric(f)
    g = f.to("M")
    out: dict = {}
    for alpha, c in g.coeffs.items():
        L = len(alpha)
        if L > k:
            continue
        for idx in combinations(range(k), L):
            mono = [0] * k
            for i, a in zip(idx, alpha):
                mono[i] = a
            _add_into(out, tuple(mono), c)
    return VarPoly._raw(k, _strip(out))


@operation
def positivity(f: SymFunc, basis: str) -> bool:
    return change_basis(f, basis).is_nonneg()


def positivity_oracle(basis: str):
    """An oracle for :func:`qsymlab.polyring.is_b_positive_unimodal`."""

    def oracle(x: Any) -> bool:
        if isinstance(x, SymFunc):
            return positivity(x, basis)
        if isinstance(x, BiPoly):
            return x.is_nonneg()
        return x >= 0

    oracle.__name__ = f"{basis}_positive"
    return oracle


# -- series in z with symmetric-function coefficients -------------------------


def _series_zero(example: Any) -> Any:
    if isinstance(example, SymFunc):
        return SymFunc.zero()
    if isinstance(example, QSymFunc):
        return QSymFunc._raw(0, "M", {})
    if isinstance(example, VarPoly):
        return VarPoly(example.k)
    return ZERO


def series_from(coeffs: list[Any], zero: Any | None = None) -> SeriesZ:
    if zero is None:
        zero = _series_zero(coeffs[0])
    return SeriesZ(len(coeffs) - 1, tuple(coeffs), zero)


@operation
def series_mul(a: SeriesZ, b: SeriesZ) -> SeriesZ:
    return a * b


@operation
def series_sub(a: SeriesZ, b: SeriesZ) -> SeriesZ:
    return a - b


@operation
def series_scale(a: SeriesZ, c: Any) -> SeriesZ:
    return a.scale(c)


@operation
def series_eq(a: SeriesZ, b: SeriesZ) -> bool:
    return a == b


def H_series(order: int, scale: Any = ONE) -> SeriesZ:
    """``H(c z) = sum h_n c^n z^n`` for a BiPoly scale c."""
    scale = _as_bipoly(scale)
    return SeriesZ.build(
        order, lambda n: SymFunc._raw(n, "h", _strip({((n,) if n else ()): scale**n})), SymFunc.zero()
    )


def E_series(order: int, scale: Any = ONE) -> SeriesZ:
    scale = _as_bipoly(scale)
    return SeriesZ.build(
        order, lambda n: SymFunc._raw(n, "e", _strip({((n,) if n else ()): scale**n})), SymFunc.zero()
    )


def principal_numerator_of(f: SymFunc | QSymFunc) -> BiPoly:
    """``(q;q)_n ps(f)`` as a polynomial."""
    return stable_principal_specialization(f).numerator


__all__ = [
    "Composition",
    "QSymFunc",
    "SymFunc",
    "VarPoly",
    "PrincipalSpecialization",
    "compositions",
    "subset_to_comp",
    "comp_to_subset",
    "conjugate_partition",
    "dominates",
    "fundamental",
    "monomial_qsym",
    "f_to_m",
    "m_to_f",
    "is_symmetric",
    "to_symmetric",
    "from_symmetric",
    "basis_element",
    "m",
    "e",
    "h",
    "p",
    "s",
    "kostka",
    "m_product",
    "expand_to_m",
    "change_basis",
    "omega",
    "stable_principal_specialization",
    "exponential_specialization",
    "expand_in_k_vars",
    "positivity",
    "positivity_oracle",
    "series_mul",
    "series_sub",
    "series_scale",
    "series_eq",
    "series_from",
    "H_series",
    "E_series",
]
