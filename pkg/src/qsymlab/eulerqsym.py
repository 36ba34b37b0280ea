"""Eulerian quasisymmetric functions and q-Eulerian polynomials.

``Q_{n,j}`` sums ``F_{n,Dex(s)}`` over permutations with ``j`` excedances;
``a_{n,j}(q)`` sums ``q^(maj - j)`` over the same set, and
``A_n(q,t) = sum_j a_{n,j}(q) t^j``.  The ``verify_*`` functions check the
generating-function identities in cross-multiplied form, so no series is
ever divided.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, factorial

from . import permstat as ps
from ._trace import operation
from .permstat import Partition, partitions
from .polyring import (
    ONE,
    Q,
    T,
    ZERO,
    BiPoly,
    SeriesZ,
    eval_at_root_of_unity,
    is_b_positive_unimodal,
    q_binomial,
    q_int,
    q_multinomial,
    trim_support,
)
from .results import CheckResult
from .symqsym import (
    SymFunc,
    VarPoly,
    e,
    expand_in_k_vars,
    fundamental,
    H_series,
    omega,
    positivity_oracle,
    series_eq,
    series_from,
    series_mul,
    series_scale,
    series_sub,
    stable_principal_specialization,
    subset_to_comp,
    QSymFunc,
    is_symmetric,
    to_symmetric,
)


@lru_cache(maxsize=None)
def _records(n: int) -> tuple:
    """(sigma, exc, maj, des, inv, Dex, cycle type) for every sigma in S_n."""
    out = []
    for sigma in ps.enumerate_perms(n):
        out.append(
            (
                sigma,
                ps.exc(sigma),
                ps.maj(sigma),
                ps.des(sigma),
                ps.inv(sigma),
                ps.dex(sigma),
                ps.cycle_type(sigma),
            )
        )
    return tuple(out)


def _f_sum(n: int, counts: Counter) -> QSymFunc:
    """``sum_S counts[S] * F_{n,S}`` in the F basis."""
    return QSymFunc(n, "F", {subset_to_comp(n, S): c for S, c in counts.items()})


def _symmetrize(n: int, counts: Counter) -> SymFunc:
    f = _f_sum(n, counts).to("M")
    if not is_symmetric(f):
        raise AssertionError(f"sum of F_(Dex) for n={n} is not symmetric")
    return to_symmetric(f)


@operation
def build_Q(n: int, j: int) -> SymFunc:
    """``Q_{n,j}`` in the monomial basis."""
    if not 0 <= j <= max(n - 1, 0):
        raise ValueError(f"j={j} outside [0, {n - 1}]")
    fundamental(n, ())  # degree sanity for n
    counts = Counter(rec[5] for rec in _records(n) if rec[1] == j)
    return _symmetrize(n, counts)


@dataclass
class QEulerianTable:
    n: int
    Q: list[SymFunc]
    a: list[BiPoly]
    A: BiPoly

    @property
    def Q_poly(self) -> SymFunc:
        """``sum_j Q_{n,j} t^j`` as one function with t in the coefficients."""
        out = SymFunc.zero(self.n)
        for j, f in enumerate(self.Q):
            out = out + f * T**j
        return out

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "A": str(self.A),
            "a": [str(x) for x in self.a],
            "Q_h": [f.to("h").to_json()["terms"] for f in self.Q],
        }


@operation
def q_eulerian(n: int) -> QEulerianTable:
    if n == 0:
        return QEulerianTable(0, [SymFunc(0, "m", {(): 1})], [ONE], ONE)
    a_terms: list[dict] = [dict() for _ in range(n)]
    for rec in _records(n):
        j, mj = rec[1], rec[2] - rec[1]
        d = a_terms[j]
        d[(mj, 0)] = d.get((mj, 0), 0) + 1
    a = [BiPoly(d) for d in a_terms]
    Qs = [build_Q(n, j) for j in range(n)]
    return QEulerianTable(n, Qs, a, BiPoly.from_t_list(a))


def _compositions_min2(total: int):
    if total == 0:
        yield ()
        return
    for k in range(2, total + 1):
        for rest in _compositions_min2(total - k):
            yield (k,) + rest


def closed_form_terms(n: int):
    """Summands ``(k, qmultinomial, t-part)`` of the closed form for ``A_n``."""
    for ks in _compositions_min2(n + 1):
        parts = [ks[0] - 1] + list(ks[1:])
        qm = q_multinomial(n, parts)
        tpart = T ** (len(ks) - 1)
        for k in ks:
            tpart = tpart * q_int(k - 1, "t")
        yield ks, qm, tpart


@operation
def closed_form_A(n: int) -> BiPoly:
    """``A_n(q,t)`` summed over compositions of ``n+1`` into parts ``>= 2``."""
    if n == 0:
        return ONE
    out = ZERO
    for _, qm, tpart in closed_form_terms(n):
        out = out + qm * tpart
    return out


def eulerian_numbers(n: int, stat: str = "des") -> list[int]:
    idx = {"exc": 1, "des": 3}[stat]
    counts = [0] * max(n, 1)
    for rec in _records(n):
        counts[rec[idx]] += 1
    return counts


def A_inv_des(n: int) -> BiPoly:
    c: dict = {}
    for rec in _records(n):
        k = (rec[4], rec[3])
        c[k] = c.get(k, 0) + 1
    return BiPoly(c)


def A_maj_exc(n: int) -> BiPoly:
    c: dict = {}
    for rec in _records(n):
        k = (rec[2], rec[1])
        c[k] = c.get(k, 0) + 1
    return BiPoly(c)


# -- symmetric function identity ---------------------------------------------


def Q_series(N: int) -> SeriesZ:
    """``1 + sum_{n>=1} sum_j Q_{n,j} t^j z^n`` with h-basis coefficients."""
    coeffs = [SymFunc(0, "h", {(): 1})]
    for n in range(1, N + 1):
        coeffs.append(q_eulerian(n).Q_poly.to("h"))
    return series_from(coeffs, SymFunc.zero())


def _first_symfunc_diff(a: SymFunc, b: SymFunc) -> dict:
    diff = (a - b).to("m")
    lam = max(diff.coeffs)
    c = diff.coeffs[lam]
    (qe, te), v = sorted(c.items())[0]
    return {"m": list(lam), "monomial": {"q": qe, "t": te}, "difference": str(v)}


def _series_mismatch(lhs: SeriesZ, rhs: SeriesZ) -> dict | None:
    n = lhs.first_mismatch(rhs)
    if n is None:
        return None
    w = {"n": n}
    if isinstance(lhs[n], SymFunc):
        w.update(_first_symfunc_diff(lhs[n], rhs[n]))
    else:
        w["difference"] = str(lhs[n] - rhs[n])
    return w


@operation
def verify_qsme(N: int) -> CheckResult:
    """``(1 + sum Q_{n,j} t^j z^n) (H(zt) - t H(z)) = (1 - t) H(z)`` and the
    denominator form ``... (1 - sum_{n>=2} t[n-1]_t h_n z^n) = H(z)``."""
    res = CheckResult("qsme", {"order": N}, True)
    Qs = Q_series(N)
    Hz = H_series(N)
    lhs = series_mul(Qs, series_sub(H_series(N, T), series_scale(Hz, T)))
    rhs = series_scale(Hz, ONE - T)
    if not series_eq(lhs, rhs):
        res.fail({"form": "ratio", **_series_mismatch(lhs, rhs)})
    den_coeffs = [SymFunc(0, "h", {(): 1}), SymFunc.zero()]
    for n in range(2, N + 1):
        den_coeffs.append(SymFunc(n, "h", {(n,): -(T * q_int(n - 1, "t"))}))
    den = series_from(den_coeffs[: N + 1], SymFunc.zero())
    lhs2 = series_mul(Qs, den)
    if not series_eq(lhs2, Hz):
        res.fail({"form": "denominator", **_series_mismatch(lhs2, Hz)})
    if N >= 3:
        # the z^3 t coefficient, read off the identity
        res.details["Q_3_1"] = str(Qs[3].t_slices()[1].to("h"))
    return res


def _qegf_product(a: list[BiPoly], b: list[BiPoly]) -> list[BiPoly]:
    """Numerators of a product of series ``sum a_n z^n/[n]_q!``."""
    out = []
    for n in range(len(a)):
        acc = ZERO
        for k in range(n + 1):
            acc = acc + q_binomial(n, k) * a[k] * b[n - k]
        out.append(acc)
    return out


def _compare_lists(res: CheckResult, form: str, lhs: list, rhs: list) -> None:
    for n, (x, y) in enumerate(zip(lhs, rhs)):
        if x != y:
            res.fail({"form": form, "n": n, "difference": str(x - y)})
            return


@operation
def verify_majexc_egf(N: int) -> CheckResult:
    """``A(z) (exp_q(zt) - t exp_q(z)) = (1 - t) exp_q(z)`` and the maj/exc form with ``tq``.

    Numerators are compared after clearing ``[n]_q!`` from each z^n coefficient.
    """
    res = CheckResult("majexc", {"order": N}, True)
    A = [ONE] + [q_eulerian(n).A for n in range(1, N + 1)]
    b = [T**n - T for n in range(N + 1)]
    _compare_lists(res, "rewritten", _qegf_product(A, b), [ONE - T] * (N + 1))
    tq = T * Q
    Amx = [ONE] + [A_maj_exc(n) for n in range(1, N + 1)]
    b2 = [tq**n - tq for n in range(N + 1)]
    _compare_lists(res, "maj-exc", _qegf_product(Amx, b2), [ONE - tq] * (N + 1))
    return res


@operation
def verify_stanley_invdes(N: int) -> CheckResult:
    res = CheckResult("invdes", {"order": N}, True)
    A = [ONE] + [A_inv_des(n) for n in range(1, N + 1)]
    b = [Q ** comb(n, 2) * (T - 1) ** n for n in range(N + 1)]
    b[0] = b[0] - T
    _compare_lists(res, "invdes", _qegf_product(A, b), [ONE - T] + [ZERO] * N)
    return res


def euler_series(N: int, stat: str = "exc") -> SeriesZ:
    """``1 + sum_n sum_s t^stat(s) z^n/n!`` with rational coefficients."""
    coeffs = [ONE]
    for n in range(1, N + 1):
        poly = BiPoly.from_t_list(eulerian_numbers(n, stat))
        coeffs.append(poly * Fraction(1, factorial(n)))
    return series_from(coeffs, ZERO)


@operation
def verify_euler(N: int) -> CheckResult:
    """``(sum A_n(t) z^n/n!) (e^{z(t-1)} - t) = 1 - t`` over the rationals."""
    res = CheckResult("euler", {"order": N}, True)
    exp_part = [(T - 1) ** n * Fraction(1, factorial(n)) for n in range(N + 1)]
    exp_part[0] = exp_part[0] - T
    den = series_from(exp_part, ZERO)
    rhs = series_from([ONE - T] + [ZERO] * N, ZERO)
    for stat in ("des", "exc"):
        lhs = series_mul(euler_series(N, stat), den)
        if not series_eq(lhs, rhs):
            res.fail({"stat": stat, **_series_mismatch(lhs, rhs)})
    # the q = 1 slice of the q-analogues
    for n in range(1, N + 1):
        if q_eulerian(n).A.subs(q=1) != BiPoly.from_t_list(eulerian_numbers(n, "des")):
            res.fail({"stat": "A_n(1,t)", "n": n})
    return res


# -- Smirnov words ------------------------------------------------------------


def smirnov_words(n: int, k: int):
    for w in product(range(1, k + 1), repeat=n):
        if all(w[i] != w[i + 1] for i in range(n - 1)):
            yield w


def _word_monomial(w: tuple[int, ...], k: int) -> tuple[int, ...]:
    mono = [0] * k
    for x in w:
        mono[x - 1] += 1
    return tuple(mono)


@operation
def smirnov_check(n: int, k: int) -> CheckResult:
    """``omega Q_{n,j}`` in k variables against Smirnov words binned by descents."""
    res = CheckResult("smirnov", {"n": n, "k": k}, True)
    bins: list[dict] = [dict() for _ in range(max(n, 1))]
    for w in smirnov_words(n, k):
        d = sum(1 for i in range(n - 1) if w[i] > w[i + 1])
        mono = _word_monomial(w, k)
        bins[d][mono] = bins[d].get(mono, 0) + 1
    for j in range(max(n, 1)):
        words = VarPoly(k, bins[j])
        sym = expand_in_k_vars(omega(build_Q(n, j)), k)
        if words != sym:
            res.fail({"j": j, "words": str(words), "omega_Q": str(sym)})
    return res


@operation
def csv_check(N: int, k: int) -> CheckResult:
    """``(sum_n sum_{w in W_n} x_w z^n)(1 - sum_{n>=2} (n-1) e_n z^n) = E(z)`` in k variables."""
    res = CheckResult("csv", {"order": N, "k": k}, True)
    W = [VarPoly.one(k)]
    for n in range(1, N + 1):
        d: dict = {}
        for w in smirnov_words(n, k):
            mono = _word_monomial(w, k)
            d[mono] = d.get(mono, 0) + 1
        W.append(VarPoly(k, d))
    En = [VarPoly.one(k)] + [expand_in_k_vars(e(n), k) for n in range(1, N + 1)]
    den = [VarPoly.one(k), VarPoly(k)] + [En[n] * -(n - 1) for n in range(2, N + 1)]
    zero = VarPoly(k)
    lhs = series_mul(series_from(W, zero), series_from(den[: N + 1], zero))
    rhs = series_from(En, zero)
    if not series_eq(lhs, rhs):
        res.fail(_series_mismatch(lhs, rhs))
    return res


# -- refinements by cycle type --------------------------------------------------


@dataclass
class RefinedTable:
    n: int
    entries: dict[tuple[Partition, int], tuple[SymFunc, BiPoly]]

    def Q(self, lam: Partition, j: int) -> SymFunc:
        hit = self.entries.get((tuple(lam), j))
        return hit[0] if hit else SymFunc.zero(self.n)

    def a(self, lam: Partition, j: int) -> BiPoly:
        hit = self.entries.get((tuple(lam), j))
        return hit[1] if hit else ZERO


@operation
def build_refined(n: int) -> RefinedTable:
    dexes: dict[tuple, Counter] = {}
    polys: dict[tuple, dict] = {}
    for rec in _records(n):
        key = (rec[6], rec[1])
        dexes.setdefault(key, Counter())[rec[5]] += 1
        d = polys.setdefault(key, {})
        mj = (rec[2] - rec[1], 0)
        d[mj] = d.get(mj, 0) + 1
    entries = {}
    for key in sorted(dexes):
        Qf = _symmetrize(n, dexes[key])
        a = BiPoly(polys[key])
        if stable_principal_specialization(Qf).numerator != a:
            raise AssertionError(f"(q;q)_n ps(Q_{key}) differs from a_{key}(q)")
        entries[key] = (Qf, a)
    return RefinedTable(n, entries)


@operation
def unimodality_suite(n: int) -> CheckResult:
    res = CheckResult("unimodality", {"n": n}, True)
    table = q_eulerian(n)
    hv = is_b_positive_unimodal(table.Q, positivity_oracle("h"))
    res.details["Q_h"] = hv.as_dict()
    if not hv.ok or hv.center != Fraction(n - 1, 2):
        res.fail({"sequence": "Q_n", "verdict": hv.as_dict()})
    qv = is_b_positive_unimodal(table.A.t_coeffs(n))
    res.details["A_q"] = qv.as_dict()
    if not qv.ok or qv.center != Fraction(n - 1, 2):
        res.fail({"sequence": "A_n", "verdict": qv.as_dict()})
    refined = build_refined(n)
    per_lam = {}
    for lam in partitions(n):
        seq = [refined.Q(lam, j) for j in range(n)]
        lo, core = trim_support(seq)
        sv = is_b_positive_unimodal(core, positivity_oracle("s"))
        center = lo + sv.center if sv.center is not None else None
        fixed = lam.count(1)
        avals = [refined.a(lam, j) for j in range(n)]
        alo, acore = trim_support(avals)
        av = is_b_positive_unimodal(acore)
        per_lam[",".join(map(str, lam))] = {
            "center": str(center),
            "expected_center": str(Fraction(n - fixed, 2)),
            "schur": sv.as_dict(),
            "q": av.as_dict(),
        }
        if not sv.ok or not av.ok:
            res.fail({"lambda": list(lam), "schur": sv.as_dict(), "q": av.as_dict()})
    res.details["refined"] = per_lam
    return res


@operation
def csp_check(n: int) -> CheckResult:
    """Fixed points of conjugation by powers of the long cycle on each ``S_{lam,j}``."""
    res = CheckResult("csp", {"n": n}, True)
    gamma = ps.long_cycle(n)
    classes: dict[tuple, list] = {}
    for rec in _records(n):
        classes.setdefault((rec[6], rec[1]), []).append(rec[0])
    refined = build_refined(n)
    divisors = [d for d in range(1, n + 1) if n % d == 0]
    powers = {d: ps.power(gamma, n // d) for d in divisors}
    compared = 0
    for (lam, j), members in sorted(classes.items()):
        members_set = set(members)
        if any(ps.conjugate(sig, gamma) not in members_set for sig in members):
            res.fail({"lambda": list(lam), "j": j, "reason": "class not closed under conjugation"})
            continue
        a = refined.a(lam, j)
        for d in divisors:
            tau = powers[d]
            fixed = sum(1 for sig in members if ps.conjugate(sig, tau) == sig)
            try:
                value = eval_at_root_of_unity(a, d).as_integer()
            except ValueError as exc:
                res.fail({"lambda": list(lam), "j": j, "d": d, "reason": str(exc)})
                continue
            compared += 1
            if value != fixed:
                res.fail({"lambda": list(lam), "j": j, "d": d, "fixed": fixed, "value": value})
    res.details["comparisons"] = compared
    return res


def psq_identity_holds(n: int) -> bool:
    """``(q;q)_n ps(Q_{n,j}) = a_{n,j}(q)`` for every j."""
    table = q_eulerian(n)
    return all(
        stable_principal_specialization(table.Q[j]).numerator == table.a[j] for j in range(n)
    )




@operation
def closed_form_check(n: int) -> CheckResult:
    """Brute force against the closed form, and each summand palindromic-unimodal about ``(n-1)/2``."""
    res = CheckResult("closed-form", {"n": n}, True)
    table = q_eulerian(n)
    if closed_form_A(n) != table.A:
        res.fail({"reason": "closed form differs", "brute_force": str(table.A)})
    for ks, qm, tpart in closed_form_terms(n):
        verdict = is_b_positive_unimodal((qm * tpart).t_coeffs(n))
        if not verdict.ok or verdict.center != Fraction(n - 1, 2):
            res.fail({"k": list(ks), "verdict": verdict.as_dict()})
    if table.A.subs(q=1) != BiPoly.from_t_list(eulerian_numbers(n, "des")):
        res.fail({"reason": "A_n(1,t) is not the Eulerian polynomial"})
    if sum(a.subs(q=1).constant() for a in table.a) != factorial(n):
        res.fail({"reason": "a_{n,j}(1) do not sum to n!"})
    return res


@operation
def refinement_check(n: int) -> CheckResult:
    """``sum_lam Q_{lam,j} = Q_{n,j}``, ``sum_lam a_{lam,j} = a_{n,j}`` and ``(q;q)_n ps(Q_{n,j}) = a_{n,j}``."""
    res = CheckResult("refinement", {"n": n}, True)
    table = q_eulerian(n)
    refined = build_refined(n)
    for j in range(max(n, 1)):
        Qsum = SymFunc.zero(n)
        asum = ZERO
        for lam in partitions(n):
            Qsum = Qsum + refined.Q(lam, j)
            asum = asum + refined.a(lam, j)
        if Qsum != table.Q[j] or asum != table.a[j]:
            res.fail({"j": j, "reason": "refinements do not sum to the total"})
    if not psq_identity_holds(n):
        res.fail({"reason": "(q;q)_n ps(Q_{n,j}) != a_{n,j}(q)"})
    return res


__all__ = [
    "QEulerianTable",
    "RefinedTable",
    "build_Q",
    "build_refined",
    "q_eulerian",
    "closed_form_A",
    "closed_form_terms",
    "verify_qsme",
    "verify_majexc_egf",
    "verify_stanley_invdes",
    "verify_euler",
    "smirnov_check",
    "csv_check",
    "unimodality_suite",
    "csp_check",
    "psq_identity_holds",
    "closed_form_check",
    "refinement_check",
    "Q_series",
    "euler_series",
    "A_inv_des",
    "A_maj_exc",
    "eulerian_numbers",
]
