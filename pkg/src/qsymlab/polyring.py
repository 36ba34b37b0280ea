"""Exact polynomials in q and t, q-analogues, and unimodality testing.

Every coefficient is an ``int`` or a :class:`fractions.Fraction`; floats are
rejected.  Integral fractions are stored as ``int`` so integer-heavy work
stays on the fast path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from numbers import Rational
from typing import Any, Callable, Iterable, Iterator, Sequence

from ._trace import operation

Coeff = int | Fraction


def _norm(v: Coeff) -> Coeff:
    if type(v) is Fraction and v.denominator == 1:
        return v.numerator
    return v


def _scalar(x: Any) -> Coeff:
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return _norm(x)
    if isinstance(x, Rational):
        return _norm(Fraction(x.numerator, x.denominator))
    raise TypeError(f"not an exact rational: {x!r}")


def _clean(d: dict) -> dict:
    out = {}
    for k, v in d.items():
        if v:
            if type(v) is Fraction and v.denominator == 1:
                v = v.numerator
            out[k] = v
    return out


class BiPoly:
    """Sparse polynomial in ``q`` and ``t`` with rational coefficients.

    Keys of the coefficient map are ``(q_exponent, t_exponent)``.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, terms: dict[tuple[int, int], Any] | None = None):
        c = {}
        if terms:
            for (a, b), v in terms.items():
                if a < 0 or b < 0:
                    raise ValueError("exponents must be nonnegative")
                v = _scalar(v)
                if v:
                    c[(int(a), int(b))] = v
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: dict) -> BiPoly:
        obj = cls.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Any) -> BiPoly:
        c = _scalar(c)
        return cls._raw({(0, 0): c} if c else {})

    @classmethod
    def monomial(cls, coeff: Any = 1, q: int = 0, t: int = 0) -> BiPoly:
        return cls({(q, t): coeff})

    @classmethod
    def from_q_list(cls, coeffs: Iterable[Any], t: int = 0) -> BiPoly:
        return cls({(i, t): c for i, c in enumerate(coeffs)})

    @classmethod
    def from_t_list(cls, coeffs: Iterable[Any]) -> BiPoly:
        """Assemble ``sum coeffs[j] * t^j`` where each entry is a q-polynomial or scalar."""
        out: dict = {}
        for j, c in enumerate(coeffs):
            for (a, b), v in _coerce(c)._c.items():
                k = (a, b + j)
                out[k] = out.get(k, 0) + v
        return cls._raw(_clean(out))

    # -- inspection -------------------------------------------------------

    def terms(self) -> dict[tuple[int, int], Coeff]:
        return dict(self._c)

    def items(self):
        return self._c.items()

    def coeff(self, q: int = 0, t: int = 0) -> Coeff:
        return self._c.get((q, t), 0)

    @property
    def deg_q(self) -> int:
        return max((a for a, _ in self._c), default=-1)

    @property
    def deg_t(self) -> int:
        return max((b for _, b in self._c), default=-1)

    def is_zero(self) -> bool:
        return not self._c

    def is_constant(self) -> bool:
        return not self._c or set(self._c) == {(0, 0)}

    def constant(self) -> Coeff:
        return self._c.get((0, 0), 0)

    def is_nonneg(self) -> bool:
        return all(v > 0 for v in self._c.values())

    def t_coeffs(self, length: int | None = None) -> list[BiPoly]:
        """Coefficients of ``t^0, t^1, ...`` as q-polynomials."""
        n = self.deg_t + 1 if length is None else length
        buckets: list[dict] = [{} for _ in range(n)]
        for (a, b), v in self._c.items():
            if b >= n:
                raise ValueError(f"t-degree {b} exceeds requested length {n}")
            buckets[b][(a, 0)] = v
        return [BiPoly._raw(d) for d in buckets]

    def q_list(self) -> list[Coeff]:
        """Dense coefficient list in q; the polynomial must be free of t."""
        if any(b for _, b in self._c):
            raise ValueError("polynomial involves t")
        out = [0] * (self.deg_q + 1)
        for (a, _), v in self._c.items():
            out[a] = v
        return out

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: Any) -> BiPoly:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._c:
            return self
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0) + v
        return BiPoly._raw(_clean(out))

    __radd__ = __add__

    def __neg__(self) -> BiPoly:
        return BiPoly._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other: Any) -> BiPoly:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> BiPoly:
        return (-self) + other

    def __mul__(self, other: Any) -> BiPoly:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                return ZERO
            return BiPoly._raw(_clean({k: v * other for k, v in self._c.items()}))
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._c, other._c
        if not a or not b:
            return ZERO
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for (i, j), u in b.items():
            for (k, l), v in a.items():
                key = (i + k, j + l)
                out[key] = get(key, 0) + u * v
        return BiPoly._raw(_clean(out))

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> BiPoly:
        c = _scalar(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        inv = Fraction(1, 1) / c
        return self * inv

    def __pow__(self, k: int) -> BiPoly:
        if k < 0:
            raise ValueError("negative power")
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, BiPoly):
            return self._c == other._c
        try:
            other = BiPoly.const(other)
        except TypeError:
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._c)

    def subs(self, q: Any = None, t: Any = None) -> BiPoly:
        """Substitute rational constants for q and/or t."""
        qv = None if q is None else _scalar(q)
        tv = None if t is None else _scalar(t)
        out: dict = {}
        for (a, b), v in self._c.items():
            if qv is not None:
                v = v * qv**a
                a = 0
            if tv is not None:
                v = v * tv**b
                b = 0
            out[(a, b)] = out.get((a, b), 0) + v
        return BiPoly._raw(_clean(out))

    def __call__(self, q: Any = None, t: Any = None) -> BiPoly:
        return self.subs(q=q, t=t)

    def swap(self) -> BiPoly:
        """Exchange the roles of q and t."""
        return BiPoly._raw({(b, a): v for (a, b), v in self._c.items()})

    # -- text -------------------------------------------------------------

    def __repr__(self) -> str:
        return f"BiPoly({str(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


def _coerce(x: Any) -> BiPoly:
    if isinstance(x, BiPoly):
        return x
    try:
        return BiPoly.const(x)
    except TypeError:
        return NotImplemented


ZERO = BiPoly()
ONE = BiPoly.const(1)
Q = BiPoly.monomial(1, q=1)
T = BiPoly.monomial(1, t=1)


def _var_part(a: int, b: int) -> str:
    parts = []
    if a:
        parts.append("q" if a == 1 else f"q^{a}")
    if b:
        parts.append("t" if b == 1 else f"t^{b}")
    return "*".join(parts)


def _monomial_str(c: Coeff, a: int, b: int) -> str:
    vp = _var_part(a, b)
    if not vp:
        return str(c)
    if c == 1:
        return vp
    if c == -1:
        return "-" + vp
    return f"{c}*{vp}"


def _join(pieces: list[str]) -> str:
    out = pieces[0]
    for p in pieces[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def format_poly(p: BiPoly) -> str:
    """Canonical text form, grouped by powers of t.

    ``1 + (2 + q + q^2)*t + t^2``; single-term groups print unparenthesised.
    """
    if not p._c:
        return "0"
    groups: dict[int, list[tuple[int, Coeff]]] = {}
    for (a, b), v in p._c.items():
        groups.setdefault(b, []).append((a, v))
    pieces = []
    for b in sorted(groups):
        terms = sorted(groups[b])
        if b == 0 or len(terms) == 1:
            pieces.extend(_monomial_str(v, a, b) for a, v in terms)
        else:
            inner = _join([_monomial_str(v, a, 0) for a, v in terms])
            pieces.append(f"({inner})*{_var_part(0, b)}")
    return _join(pieces)


# -- q-analogues ------------------------------------------------------------


def _var(var: str) -> tuple[int, int]:
    if var == "q":
        return (1, 0)
    if var == "t":
        return (0, 1)
    raise ValueError(f"unknown variable {var!r}")


@operation
def q_int(n: int, var: str = "q") -> BiPoly:
    """``[n] = 1 + x + ... + x^(n-1)``; zero for ``n = 0``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    dq, dt = _var(var)
    return BiPoly._raw({(i * dq, i * dt): 1 for i in range(n)})


@operation
def q_factorial(n: int, var: str = "q") -> BiPoly:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _q_factorial(n, var)


@lru_cache(maxsize=None)
def _q_factorial(n: int, var: str) -> BiPoly:
    if n <= 1:
        return ONE
    return _q_factorial(n - 1, var) * q_int(n, var)


@operation
def q_pochhammer(n: int, var: str = "q") -> BiPoly:
    """``(x;x)_n = prod_{j=1}^{n} (1 - x^j)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    dq, dt = _var(var)
    out = ONE
    for j in range(1, n + 1):
        out = out * BiPoly._raw({(0, 0): 1, (j * dq, j * dt): -1})
    return out


def _udivmod(num: list, den: list) -> tuple[list, list]:
    """Dense univariate division over the rationals."""
    num = list(num)
    while den and den[-1] == 0:
        den = den[:-1]
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    lead = den[-1]
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return [], num
    quo = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if not c:
            continue
        f = _norm(Fraction(c) / lead) if (isinstance(c, Fraction) or c % lead) else c // lead
        quo[i - dd] = f
        for j, d in enumerate(den):
            num[i - dd + j] -= f * d
    rem = num[:dd]
    while rem and rem[-1] == 0:
        rem.pop()
    return quo, [_norm(x) for x in rem]


def exact_div(num: BiPoly, den: BiPoly, var: str = "q") -> BiPoly:
    """Divide univariate polynomials, insisting on a zero remainder."""
    if var == "t":
        return exact_div(num.swap(), den.swap(), "q").swap()
    quo, rem = _udivmod(num.q_list(), den.q_list())
    if rem:
        raise ArithmeticError(f"{den} does not divide {num}")
    return BiPoly.from_q_list(quo)


@operation
def q_multinomial(n: int, parts: Sequence[int], var: str = "q") -> BiPoly:
    """``[n]! / prod [k_i]!``, verified to divide exactly."""
    if any(k < 0 for k in parts):
        raise ValueError("parts must be nonnegative")
    if sum(parts) != n:
        raise ValueError(f"parts {list(parts)} do not sum to {n}")
    return _q_multinomial(n, tuple(sorted(parts)), var)


@lru_cache(maxsize=None)
def _q_multinomial(n: int, parts: tuple[int, ...], var: str) -> BiPoly:
    den = ONE
    for k in parts:
        den = den * _q_factorial(k, var)
    return exact_div(_q_factorial(n, var), den, var)


def q_binomial(n: int, k: int, var: str = "q") -> BiPoly:
    if k < 0 or k > n:
        return ZERO
    return q_multinomial(n, [k, n - k], var)


# -- palindromicity and unimodality -----------------------------------------


def _is_zero(x: Any) -> bool:
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return x == 0


@operation
def is_palindromic(coeffs: Sequence[Any], center: Any = None) -> bool:
    """True iff ``a_i == a_{n-i}`` for the sequence ``a_0..a_n``.

    ``center`` (a half-integer) must equal ``n/2`` when given.
    """
    n = len(coeffs) - 1
    if center is not None and n >= 0 and Fraction(center) * 2 != n:
        raise ValueError(f"center {center} inconsistent with length {n + 1}")
    return all(coeffs[i] == coeffs[n - i] for i in range(len(coeffs) // 2))


def nonnegative(x: Any) -> bool:
    """Default positivity oracle: nonnegative coefficients in powers of q (and t)."""
    if hasattr(x, "is_nonneg"):
        return x.is_nonneg()
    return _scalar(x) >= 0


@dataclass(frozen=True)
class UnimodalityVerdict:
    positive: bool
    unimodal: bool
    palindromic: bool
    first_failure: int | None = None
    center: Fraction | None = None
    unimodal_failures: tuple[int, ...] = ()

    @property
    def ok(self) -> bool:
        return self.positive and self.unimodal and self.palindromic

    def as_dict(self) -> dict:
        return {
            "positive": self.positive,
            "unimodal": self.unimodal,
            "palindromic": self.palindromic,
            "first_failure": self.first_failure,
            "center": None if self.center is None else str(self.center),
            "unimodal_failures": list(self.unimodal_failures),
        }


@operation
def is_b_positive_unimodal(
    coeffs: Sequence[Any],
    positivity_oracle: Callable[[Any], bool] = nonnegative,
) -> UnimodalityVerdict:
    """Check ``0 <= a_0 <= a_1 <= ... <= a_floor(n/2)`` and the mirrored descent.

    The middle step for even length is left to palindromicity.
    ``first_failure`` is the smallest index at which positivity or a
    unimodality comparison fails.
    """
    n = len(coeffs) - 1
    center = Fraction(n, 2) if n >= 0 else None
    if n <= 0:
        pos = all(positivity_oracle(a) for a in coeffs)
        return UnimodalityVerdict(pos, True, True, None if pos else 0, center)
    bad_pos = [i for i, a in enumerate(coeffs) if not positivity_oracle(a)]
    bad_uni = []
    for i in range(1, n + 1):
        if i <= n // 2:
            step = coeffs[i] - coeffs[i - 1]
        elif i > (n + 1) // 2:
            step = coeffs[i - 1] - coeffs[i]
        else:
            continue
        if not positivity_oracle(step):
            bad_uni.append(i)
    pal = is_palindromic(coeffs)
    fails = bad_pos[:1] + bad_uni[:1]
    return UnimodalityVerdict(
        positive=not bad_pos,
        unimodal=not bad_uni,
        palindromic=pal,
        first_failure=min(fails) if fails else None,
        center=center,
        unimodal_failures=tuple(bad_uni),
    )


def trim_support(coeffs: Sequence[Any]) -> tuple[int, list]:
    """Strip leading/trailing zeros; return ``(offset, core)``."""
    lo = 0
    hi = len(coeffs)
    while lo < hi and _is_zero(coeffs[lo]):
        lo += 1
    while hi > lo and _is_zero(coeffs[hi - 1]):
        hi -= 1
    return lo, list(coeffs[lo:hi])


# -- cyclotomic reduction ---------------------------------------------------


def _divisors(d: int) -> list[int]:
    return [e for e in range(1, d + 1) if d % e == 0]


@operation
def cyclotomic(d: int) -> BiPoly:
    """The d-th cyclotomic polynomial in q, from ``q^d - 1 = prod_{e|d} Phi_e``."""
    if d < 1:
        raise ValueError("d must be positive")
    return BiPoly.from_q_list(_cyclo_list(d))


@lru_cache(maxsize=None)
def _cyclo_list(d: int) -> tuple:
    num = [-1] + [0] * (d - 1) + [1]
    for e in _divisors(d)[:-1]:
        quo, rem = _udivmod(num, list(_cyclo_list(e)))
        if rem:
            raise ArithmeticError(f"Phi_{e} does not divide q^{d}-1")
        num = quo
    return tuple(num)


@dataclass(frozen=True)
class CyclotomicElt:
    """Element of ``Q[q]/(Phi_d)``, i.e. a value at a primitive d-th root of unity."""

    d: int
    remainder: BiPoly

    def __mul__(self, other: CyclotomicElt) -> CyclotomicElt:
        if self.d != other.d:
            raise ValueError("different moduli")
        return _reduce(self.remainder * other.remainder, self.d)

    def __add__(self, other: CyclotomicElt) -> CyclotomicElt:
        if self.d != other.d:
            raise ValueError("different moduli")
        return CyclotomicElt(self.d, self.remainder + other.remainder)

    def is_rational(self) -> bool:
        return self.remainder.is_constant()

    def as_integer(self) -> int:
        if not self.remainder.is_constant():
            raise ValueError(
                f"value {self.remainder} at a primitive {self.d}-th root is not rational"
            )
        c = self.remainder.constant()
        if type(c) is Fraction:
            raise ValueError(f"value {c} is not an integer")
        return c


def _reduce(p: BiPoly, d: int) -> CyclotomicElt:
    _, rem = _udivmod(p.q_list(), list(_cyclo_list(d)))
    return CyclotomicElt(d, BiPoly.from_q_list(rem))


@operation
def eval_at_root_of_unity(p: BiPoly, d: int) -> CyclotomicElt:
    """Reduce a q-polynomial modulo ``Phi_d``."""
    if d < 1:
        raise ValueError("d must be positive")
    return _reduce(p, d)


# -- truncated power series in z --------------------------------------------


@dataclass(frozen=True)
class SeriesZ:
    """``sum_{n<=order} coeffs[n] z^n`` over a declared coefficient ring.

    ``zero`` is the ring's zero; its type names the ring.
    """

    order: int
    coeffs: tuple
    zero: Any

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ValueError("coefficient count must be order + 1")

    @classmethod
    def build(cls, order: int, fn: Callable[[int], Any], zero: Any) -> SeriesZ:
        return cls(order, tuple(fn(n) for n in range(order + 1)), zero)

    @property
    def ring(self) -> type:
        return type(self.zero)

    def _check(self, other: SeriesZ) -> None:
        if not isinstance(other, SeriesZ):
            raise TypeError("expected a SeriesZ")
        if self.order != other.order:
            raise ValueError(f"order mismatch: {self.order} vs {other.order}")
        if self.ring is not other.ring:
            raise ValueError(f"ring mismatch: {self.ring.__name__} vs {other.ring.__name__}")

    def __getitem__(self, n: int) -> Any:
        return self.coeffs[n]

    def __iter__(self) -> Iterator:
        return iter(self.coeffs)

    def __add__(self, other: SeriesZ) -> SeriesZ:
        self._check(other)
        return SeriesZ(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.zero)

    def __sub__(self, other: SeriesZ) -> SeriesZ:
        self._check(other)
        return SeriesZ(self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.zero)

    def __mul__(self, other: SeriesZ) -> SeriesZ:
        self._check(other)
        out = []
        for n in range(self.order + 1):
            acc = self.zero
            for k in range(n + 1):
                acc = acc + self.coeffs[k] * other.coeffs[n - k]
            out.append(acc)
        return SeriesZ(self.order, tuple(out), self.zero)

    def scale(self, c: Any) -> SeriesZ:
        return SeriesZ(self.order, tuple(a * c for a in self.coeffs), self.zero)

    def first_mismatch(self, other: SeriesZ) -> int | None:
        self._check(other)
        for n, (a, b) in enumerate(zip(self.coeffs, other.coeffs)):
            if a != b:
                return n
        return None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SeriesZ):
            return NotImplemented
        return self.first_mismatch(other) is None

    __hash__ = None  # type: ignore[assignment]


def ordinary_multinomial(n: int, parts: Sequence[int]) -> int:
    out = factorial(n)
    for k in parts:
        out //= factorial(k)
    return out
