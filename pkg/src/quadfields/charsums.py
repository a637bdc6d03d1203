"""Character sums over the orbit of lam: complete sums mod p and mod ell*p,
the exact frequency-split product identity, incomplete sums with their bound
ratios, Weil-ratio scans, and the averaged and conditional measurements.

Conventions: e(t) = exp(2*pi*i*t), sums run over x = 1..tau unless a K says
otherwise, and every a = 0 path is computed in exact integers.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from math import gcd

import numpy as np

from .arith import is_prime, is_squarefree, jacobi, multiplicative_order, primes_up_to
from .sequences import Polynomial, gcd_degree

__all__ = [
    "FrequencySplit",
    "CharSumResult",
    "WeilScanReport",
    "HbAverage",
    "split_frequencies",
    "complete_sum_p",
    "complete_sum_pair",
    "product_formula_residual",
    "incomplete_sum",
    "weil_scan",
    "hb_average",
    "conditional_char_measure",
]

WEIL_SLACK = 1  # asserted bound is (degree + WEIL_SLACK) * sqrt(p)


@dataclass(frozen=True)
class FrequencySplit:
    """a split into per-prime frequencies: a_ell*tau_p + a_p*tau_ell = a
    mod tau_ell*tau_p."""

    a: int
    tau_ell: int
    tau_p: int
    a_ell: int
    a_p: int

    def __post_init__(self):
        if gcd(self.tau_ell, self.tau_p) != 1:
            raise ValueError("frequency split needs coprime periods")
        t = self.tau_ell * self.tau_p
        if (self.a_ell * self.tau_p + self.a_p * self.tau_ell - self.a) % t:
            raise ValueError("split congruence violated")


@dataclass(frozen=True)
class CharSumResult:
    value: complex
    modulus: int
    period: int
    frequency: int
    lam: int
    kind: str  # complete_p | complete_lp | incomplete
    bound_ratio: float | None = None

    def __post_init__(self):
        if abs(self.value) > self.period + 1e-6:
            raise ValueError("character sum exceeds its trivial bound")


def split_frequencies(a: int, tau_ell: int, tau_p: int) -> FrequencySplit:
    """Split a frequency along coprime periods: a_ell = a/tau_p mod tau_ell
    and symmetrically, so the two split sums multiply back to the pair sum."""
    if tau_ell < 1 or tau_p < 1:
        raise ValueError("split_frequencies: periods must be >= 1")
    if gcd(tau_ell, tau_p) != 1:
        raise ValueError("split_frequencies: periods must be coprime")
    a_ell = a * pow(tau_p, -1, tau_ell) % tau_ell
    a_p = a * pow(tau_ell, -1, tau_p) % tau_p
    return FrequencySplit(a, tau_ell, tau_p, a_ell, a_p)


def _require_monic_separable(f: Polynomial, who: str) -> None:
    if f.degree < 1:
        raise ValueError(f"{who}: deg f must be >= 1")
    if f.leading != 1:
        raise ValueError(f"{who}: f must be monic")
    if gcd_degree(f, f.derivative()) != 0:
        raise ValueError(f"{who}: f must be separable")


def _orbit_sum(f: Polynomial, lam: int, modulus: int, period: int, a: int) -> complex:
    # core summation, no hypothesis gates: sum over x=1..period of
    # (f(lam^x)/modulus) e(a x / period)
    a %= period
    power = lam % modulus
    if a == 0:
        acc = 0
        for _ in range(period):
            acc += jacobi(f.eval_mod(power, modulus), modulus)
            power = power * lam % modulus
        return complex(acc)
    acc = 0j
    for x in range(1, period + 1):
        sym = jacobi(f.eval_mod(power, modulus), modulus)
        if sym:
            acc += sym * cmath.exp(2j * cmath.pi * (a * x % period) / period)
        power = power * lam % modulus
    return acc


def complete_sum_p(f: Polynomial, lam: int, p: int, a: int) -> CharSumResult:
    """Complete sum over one orbit of lam mod an odd prime p.

    Gates are the square-root-cancellation hypotheses: f monic separable and
    p coprime to lam*f(0).  The returned bound_ratio is |value|/sqrt(p).
    """
    _require_monic_separable(f, "complete_sum_p")
    if lam == 0:
        raise ValueError("complete_sum_p: lam must be nonzero")
    if p == 2 or not is_prime(p):
        raise ValueError("complete_sum_p: p must be an odd prime")
    if (lam * f.constant) % p == 0:
        raise ValueError("complete_sum_p: p divides lam*f(0)")
    period = multiplicative_order(lam, p).order
    value = _orbit_sum(f, lam, p, period, a)
    return CharSumResult(
        value=value,
        modulus=p,
        period=period,
        frequency=a,
        lam=lam,
        kind="complete_p",
        bound_ratio=abs(value) / math.sqrt(p),
    )


def _pair_orders(f, lam, ell, p, who):
    if ell == p:
        raise ValueError(f"{who}: ell and p must be distinct")
    for q in (ell, p):
        if q == 2 or not is_prime(q):
            raise ValueError(f"{who}: {q} must be an odd prime")
    if lam == 0 or lam % ell == 0 or lam % p == 0:
        raise ValueError(f"{who}: lam must be coprime to ell*p")
    t_ell = multiplicative_order(lam, ell).order
    t_p = multiplicative_order(lam, p).order
    if gcd(t_ell, t_p) != 1:
        raise ValueError(f"{who}: orders of lam mod ell and mod p share a factor")
    return t_ell, t_p


def _symbol_cycles(f, A, lam, ell, p, t_ell, t_p):
    # J[x] = (f(A lam^x) / q) for x = 1..t_q; the sequence mod q has period
    # t_q in x, so two short cycles replace every jacobi call mod ell*p.
    cycles = []
    for q, t in ((ell, t_ell), (p, t_p)):
        power = A * lam % q
        cyc = []
        for _ in range(t):
            cyc.append(jacobi(f.eval_mod(power, q), q))
            power = power * lam % q
        cycles.append(np.array(cyc, dtype=np.int64))
    return cycles


def _pair_terms(jl, jp, length):
    # term n (1-based) is jl[(n-1) % t_ell] * jp[(n-1) % t_p]
    idx = np.arange(length, dtype=np.int64)
    return jl[idx % len(jl)] * jp[idx % len(jp)]


def complete_sum_pair(f: Polynomial, lam: int, ell: int, p: int, a: int) -> CharSumResult:
    """Complete sum mod ell*p over the full period tau_ell * tau_p.

    No monic gate here: the product identity this feeds is exact for any
    integer f, and the coprimality conditions are the whole hypothesis.
    """
    t_ell, t_p = _pair_orders(f, lam, ell, p, "complete_sum_pair")
    period = t_ell * t_p
    jl, jp = _symbol_cycles(f, 1, lam, ell, p, t_ell, t_p)
    terms = _pair_terms(jl, jp, period)
    a_red = a % period
    if a_red == 0:
        value = complex(int(terms.sum()))
    else:
        n = np.arange(1, period + 1, dtype=np.int64)
        phases = np.exp(2j * np.pi * (a_red * n % period) / period)
        value = complex((terms * phases).sum())
    return CharSumResult(
        value=value,
        modulus=ell * p,
        period=period,
        frequency=a,
        lam=lam,
        kind="complete_lp",
        bound_ratio=abs(value) / math.sqrt(ell * p),
    )


def _split_sum(cycle: np.ndarray, a: int) -> complex:
    t = len(cycle)
    a %= t
    if a == 0:
        return complex(int(cycle.sum()))
    x = np.arange(1, t + 1, dtype=np.int64)
    return complex((cycle * np.exp(2j * np.pi * (a * x % t) / t)).sum())


def product_formula_residual(f: Polynomial, lam: int, ell: int, p: int, a: int) -> float:
    """|pair sum - product of split sums|; 0 exactly on the a=0 integer path,
    pure roundoff otherwise."""
    t_ell, t_p = _pair_orders(f, lam, ell, p, "product_formula_residual")
    period = t_ell * t_p
    jl, jp = _symbol_cycles(f, 1, lam, ell, p, t_ell, t_p)
    split = split_frequencies(a, t_ell, t_p)
    if a % period == 0:
        lhs = int(_pair_terms(jl, jp, period).sum())
        rhs = int(jl.sum()) * int(jp.sum())
        return float(abs(lhs - rhs))
    terms = _pair_terms(jl, jp, period)
    n = np.arange(1, period + 1, dtype=np.int64)
    lhs = complex((terms * np.exp(2j * np.pi * (a % period * n % period) / period)).sum())
    rhs = _split_sum(jl, split.a_ell) * _split_sum(jp, split.a_p)
    return abs(lhs - rhs)


def incomplete_sum(f: Polynomial, A: int, lam: int, ell: int, p: int, K: int) -> CharSumResult:
    """Exact integer sum of (f(A lam^n)/ell*p) for n = 1..K, with the ratio
    against K*sqrt(ell*p)/tau + sqrt(ell*p)*log(ell*p) attached."""
    _require_monic_separable(f, "incomplete_sum")
    t_ell, t_p = _pair_orders(f, lam, ell, p, "incomplete_sum")
    m = ell * p
    if gcd(A, m) != 1:
        raise ValueError("incomplete_sum: A must be coprime to ell*p")
    if (lam * f.constant) % ell == 0 or (lam * f.constant) % p == 0:
        raise ValueError("incomplete_sum: ell*p must be coprime to lam*f(0)")
    if K < 0:
        raise ValueError("incomplete_sum: K must be >= 0")
    period = t_ell * t_p
    if K == 0:
        total = 0
    else:
        jl, jp = _symbol_cycles(f, A, lam, ell, p, t_ell, t_p)
        total = int(_pair_terms(jl, jp, K).sum())
    bound = K * math.sqrt(m) / period + math.sqrt(m) * math.log(m)
    return CharSumResult(
        value=complex(total),
        modulus=m,
        period=period,
        frequency=0,
        lam=lam,
        kind="incomplete",
        bound_ratio=abs(total) / bound,
    )


@dataclass(frozen=True)
class WeilScanRow:
    modulus: int
    period: int
    frequency: int  # the a achieving the max ratio for this modulus
    value: complex
    ratio: float
    admissible: bool  # p coprime to lam*f(0), i.e. the bound hypothesis holds


@dataclass(frozen=True)
class WeilScanReport:
    degree: int
    lam: int
    slack: float  # asserted ceiling for admissible ratios, (d+1)
    rows: tuple[WeilScanRow, ...]

    @property
    def max_ratio(self) -> float:
        return max((r.ratio for r in self.rows if r.admissible), default=0.0)

    @property
    def max_ratio_any(self) -> float:
        return max((r.ratio for r in self.rows), default=0.0)

    @property
    def violations(self) -> tuple[WeilScanRow, ...]:
        return tuple(r for r in self.rows if r.admissible and r.ratio > self.slack)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_csv(self) -> str:
        lines = ["modulus,period,frequency,re,im,ratio"]
        for r in self.rows:
            lines.append(
                f"{r.modulus},{r.period},{r.frequency},"
                f"{r.value.real:.12g},{r.value.imag:.12g},{r.ratio:.12g}"
            )
        return "\n".join(lines) + "\n"


def _qr_signs(p: int, values: np.ndarray) -> np.ndarray:
    # quadratic character mod odd prime p of an array of residues in [0, p)
    w = np.arange(1, p, dtype=np.int64)
    qr = np.zeros(p, dtype=np.int8)
    qr[w * w % p] = 1
    signs = np.where(qr[values] == 1, 1, -1).astype(np.int64)
    signs[values == 0] = 0
    return signs


def weil_scan(f: Polynomial, lam: int, p_max: int):
    """Scan odd primes p <= p_max coprime to lam; for each, take the worst
    frequency of the complete sum and report |value|/sqrt(p).

    One FFT per prime covers every frequency at once.  Rows where p divides
    f(0) carry admissible=False: the square-root bound promises nothing
    there, so they are reported but never asserted against.
    """
    _require_monic_separable(f, "weil_scan")
    if lam == 0:
        raise ValueError("weil_scan: lam must be nonzero")
    rows = []
    coeffs = f.coefficients
    for p in primes_up_to(p_max):
        if p == 2 or lam % p == 0:
            continue
        period = multiplicative_order(lam, p).order
        powers = np.empty(period, dtype=np.int64)
        v = lam % p
        for x in range(period):
            powers[x] = v
            v = v * lam % p
        vals = np.full(period, coeffs[-1] % p, dtype=np.int64)
        for c in reversed(coeffs[:-1]):
            vals = (vals * powers + c) % p
        terms = _qr_signs(p, vals).astype(np.float64)
        # terms[x-1] holds x = 1..period; numpy's fft sign convention means
        # our sum at frequency a is e(a/period) * conj(fft[a])
        spectrum = np.fft.fft(terms)
        mags = np.abs(spectrum)
        a_best = int(mags.argmax())
        value = cmath.exp(2j * cmath.pi * a_best / period) * spectrum[a_best].conjugate()
        rows.append(
            WeilScanRow(
                modulus=p,
                period=period,
                frequency=a_best,
                value=complex(value),
                ratio=float(mags[a_best]) / math.sqrt(p),
                admissible=f.constant % p != 0,
            )
        )
    return WeilScanReport(
        degree=f.degree, lam=lam, slack=float(f.degree + WEIL_SLACK), rows=tuple(rows)
    )


@dataclass(frozen=True)
class HbAverage:
    lhs: float
    normalized: float


def hb_average(R: int, S: int, psi=None) -> HbAverage:
    """Average of |sum of psi(s)(s/m)|^2 over odd squarefree m <= R,
    normalized by S(R+S)max|psi|^2.

    psi is a table of S values (default all ones); integer tables keep the
    whole computation exact.
    """
    if R < 1 or S < 1:
        raise ValueError("hb_average: R and S must be >= 1")
    if psi is None:
        psi = [1] * S
    if len(psi) != S:
        raise ValueError("hb_average: psi must have exactly S entries")
    lhs = 0
    for m in range(1, R + 1, 2):
        if not is_squarefree(m):
            continue
        inner = sum(psi[s - 1] * jacobi(s, m) for s in range(1, S + 1))
        lhs += abs(inner) ** 2
    peak = max(abs(w) for w in psi)
    if peak == 0:
        return HbAverage(lhs=float(lhs), normalized=0.0)
    return HbAverage(lhs=float(lhs), normalized=float(lhs) / (S * (R + S) * peak**2))


def conditional_char_measure(q: int, k: int) -> float:
    """|sum_{n<=k} (n/q)| / sqrt(k) for the quadratic character mod q."""
    if q == 2 or not is_prime(q):
        raise ValueError("conditional_char_measure: q must be an odd prime")
    if not 1 <= k < q:
        raise ValueError("conditional_char_measure: need 1 <= k < q")
    return abs(sum(jacobi(n, q) for n in range(1, k + 1))) / math.sqrt(k)
