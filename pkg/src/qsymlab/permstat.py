"""Permutations of [n] in one-line notation and their statistics.

A permutation is a tuple ``(s(1), ..., s(n))`` of the values ``1..n``.
Positions are 1-indexed throughout, so ``des_set((2, 1)) == {1}``.
Enumeration is lexicographic in one-line notation.
"""

from __future__ import annotations

from itertools import permutations
from typing import Iterator, Protocol

from . import config
from ._trace import operation
from .polyring import BiPoly, q_factorial
from .results import CheckResult

Permutation = tuple[int, ...]
Partition = tuple[int, ...]


class _Order(Protocol):
    n: int

    def lt(self, a: int, b: int) -> bool: ...


class _Graph(Protocol):
    n: int

    def has_edge(self, a: int, b: int) -> bool: ...


def parse(s: str) -> Permutation:
    """Read one-line notation such as ``"3142"`` (n <= 9)."""
    s = s.strip()
    perm = tuple(int(ch) for ch in s)
    if sorted(perm) != list(range(1, len(perm) + 1)):
        raise ValueError(f"{s!r} is not a permutation in one-line notation")
    return perm


def to_string(sigma: Permutation) -> str:
    if len(sigma) > 9:
        raise ValueError("one-line strings are limited to n <= 9")
    return "".join(map(str, sigma))


def identity(n: int) -> Permutation:
    return tuple(range(1, n + 1))


def long_cycle(n: int) -> Permutation:
    """The n-cycle ``(1, 2, ..., n)``: ``i -> i + 1`` and ``n -> 1``."""
    return tuple(range(2, n + 1)) + (1,) if n else ()


def _check(sigma: Permutation) -> None:
    if sorted(sigma) != list(range(1, len(sigma) + 1)):
        raise ValueError(f"{sigma!r} is not a permutation of [n]")


@operation
def exc(sigma: Permutation) -> int:
    return sum(1 for i, v in enumerate(sigma, 1) if v > i)


@operation
def des_set(sigma: Permutation) -> frozenset[int]:
    return frozenset(i for i in range(1, len(sigma)) if sigma[i - 1] > sigma[i])


@operation
def des(sigma: Permutation) -> int:
    return sum(1 for i in range(1, len(sigma)) if sigma[i - 1] > sigma[i])


@operation
def maj(sigma: Permutation) -> int:
    return sum(i for i in range(1, len(sigma)) if sigma[i - 1] > sigma[i])


@operation
def inv(sigma: Permutation) -> int:
    n = len(sigma)
    return sum(1 for i in range(n) for j in range(i + 1, n) if sigma[i] > sigma[j])


@operation
def dex(sigma: Permutation) -> frozenset[int]:
    """Descent set of the word with excedance letters barred.

    Barred letters precede all unbarred ones, so letter ``v`` at an
    excedance maps to ``v - n`` and other letters keep their value.
    """
    n = len(sigma)
    word = [v - n if v > i else v for i, v in enumerate(sigma, 1)]
    return frozenset(i for i in range(1, n) if word[i - 1] > word[i])


@operation
def dex_sum_identity(sigma: Permutation) -> bool:
    return sum(dex(sigma)) == maj(sigma) - exc(sigma)


@operation
def cycle_type(sigma: Permutation) -> Partition:
    n = len(sigma)
    seen = [False] * (n + 1)
    lengths = []
    for start in range(1, n + 1):
        if seen[start]:
            continue
        k, x = 0, start
        while not seen[x]:
            seen[x] = True
            x = sigma[x - 1]
            k += 1
        lengths.append(k)
    return tuple(sorted(lengths, reverse=True))


@operation
def is_derangement(sigma: Permutation) -> bool:
    return all(v != i for i, v in enumerate(sigma, 1))


def inverse(sigma: Permutation) -> Permutation:
    out = [0] * len(sigma)
    for i, v in enumerate(sigma, 1):
        out[v - 1] = i
    return tuple(out)


def compose(a: Permutation, b: Permutation) -> Permutation:
    """``a o b``, i.e. ``i -> a(b(i))``."""
    if len(a) != len(b):
        raise ValueError("size mismatch")
    return tuple(a[v - 1] for v in b)


@operation
def conjugate(sigma: Permutation, tau: Permutation) -> Permutation:
    """``tau sigma tau^{-1}``."""
    if len(sigma) != len(tau):
        raise ValueError("size mismatch")
    out = [0] * len(sigma)
    for i, v in enumerate(sigma, 1):
        out[tau[i - 1] - 1] = tau[v - 1]
    return tuple(out)


def power(sigma: Permutation, k: int) -> Permutation:
    out = identity(len(sigma))
    for _ in range(k):
        out = compose(sigma, out)
    return out


@operation
def inv_lt_r(sigma: Permutation, r: int) -> int:
    """Pairs ``i < j`` with ``0 < s(i) - s(j) < r``."""
    n = len(sigma)
    if not 1 <= r <= max(n, 1):
        raise ValueError(f"r={r} outside [1, {n}]")
    return sum(
        1 for i in range(n) for j in range(i + 1, n) if 0 < sigma[i] - sigma[j] < r
    )


@operation
def maj_ge_r(sigma: Permutation, r: int) -> int:
    """Sum of positions i with ``s(i) - s(i+1) >= r``."""
    n = len(sigma)
    if not 1 <= r <= max(n, 1):
        raise ValueError(f"r={r} outside [1, {n}]")
    return sum(i for i in range(1, n) if sigma[i - 1] - sigma[i] >= r)


@operation
def des_P(sigma: Permutation, P: _Order) -> frozenset[int]:
    """Positions i with ``s(i) >_P s(i+1)``."""
    if P.n != len(sigma):
        raise ValueError("poset and permutation sizes differ")
    return frozenset(i for i in range(1, len(sigma)) if P.lt(sigma[i], sigma[i - 1]))


@operation
def inv_G(sigma: Permutation, G: _Graph) -> int:
    """Inverted position pairs whose values span an edge of G."""
    n = len(sigma)
    if G.n != n:
        raise ValueError("graph and permutation sizes differ")
    return sum(
        1
        for i in range(n)
        for j in range(i + 1, n)
        if sigma[i] > sigma[j] and G.has_edge(sigma[i], sigma[j])
    )


@operation
def enumerate_perms(n: int, cap: int | None = None) -> Iterator[Permutation]:
    config.check_n(n, cap)
    return permutations(range(1, n + 1))


@operation
def enumerate_class(lam: Partition, j: int) -> Iterator[Permutation]:
    """Permutations of cycle type ``lam`` with exactly ``j`` excedances."""
    lam = tuple(sorted(lam, reverse=True))
    n = sum(lam)
    for sigma in enumerate_perms(n):
        if exc(sigma) == j and cycle_type(sigma) == lam:
            yield sigma


def partitions(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """Partitions of n in reverse lexicographic order (``(n)`` first)."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


@operation
def permutation_suite(n: int) -> CheckResult:
    """Dex-sum identity, des/exc equidistribution, and the Rawlings statistic being Mahonian."""
    res = CheckResult("permutations", {"n": n}, True)
    des_counts = [0] * max(n, 1)
    exc_counts = [0] * max(n, 1)
    rawlings = {r: {} for r in range(1, max(n, 1) + 1)}
    for sigma in enumerate_perms(n):
        if not dex_sum_identity(sigma):
            res.fail({"identity": "dex", "sigma": list(sigma)})
        des_counts[des(sigma)] += 1
        exc_counts[exc(sigma)] += 1
        if n:
            for r, acc in rawlings.items():
                k = maj_ge_r(sigma, r) + inv_lt_r(sigma, r)
                acc[(k, 0)] = acc.get((k, 0), 0) + 1
    if des_counts != exc_counts:
        res.fail({"identity": "des/exc", "des": des_counts, "exc": exc_counts})
    if n:
        target = q_factorial(n)
        for r, acc in rawlings.items():
            if BiPoly(acc) != target:
                res.fail({"identity": "rawlings-mahonian", "r": r})
    res.details["eulerian"] = des_counts
    return res
