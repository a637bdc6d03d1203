"""Harvest sieving primes: ell in [z, Cz] with a large P+(ell-1) and large
multiplicative order of g, plus the empirical density and progression checks
that back the harvest up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import factorize, is_prime, isqrt, largest_prime_factor, primes_up_to

__all__ = [
    "SievePrime",
    "SievePrimeSet",
    "DensityReport",
    "primes_in_range",
    "build_prime_set",
    "density_report",
    "pi_progression",
    "bt_ratio",
    "euler_sum",
    "format_records",
    "parse_records",
]

VARIANTS = ("standard", "erh")


@dataclass(frozen=True)
class SievePrime:
    """One harvested prime ell with P+(ell-1) and the order of g mod ell."""

    ell: int
    p_plus: int
    order_g: int
    large_order: bool  # order_g > ell / log ell

    def __post_init__(self):
        if (self.ell - 1) % self.p_plus or (self.ell - 1) % self.order_g:
            raise ValueError("p_plus and order_g must divide ell-1")
        # When p_plus^2 > ell and the order reaches p_plus, the order cannot
        # fit inside (ell-1)/p_plus, so p_plus must divide it.
        if self.p_plus * self.p_plus >= self.ell and self.order_g >= self.p_plus:
            if self.order_g % self.p_plus:
                raise ValueError("large p_plus must divide a large order")


@dataclass(frozen=True)
class SievePrimeSet:
    z: float
    C: float
    alpha: float
    g: int
    variant: str
    members: tuple[SievePrime, ...]

    def __len__(self):
        return len(self.members)

    @property
    def ells(self) -> tuple[int, ...]:
        return tuple(sp.ell for sp in self.members)


def primes_in_range(lo: int, hi: int) -> list[int]:
    """Primes in [lo, hi] by a segmented sieve over the window."""
    if hi < lo or hi < 2:
        return []
    lo = max(lo, 2)
    base = primes_up_to(isqrt(hi))
    flags = bytearray([1]) * (hi - lo + 1)
    for p in base:
        start = max(p * p, ((lo + p - 1) // p) * p)
        for m in range(start, hi + 1, p):
            flags[m - lo] = 0
    return [lo + i for i, f in enumerate(flags) if f]


def _order_from_factors(g: int, ell: int, fac) -> int:
    # descent from ell-1 through the prime factors of ell-1
    t = ell - 1
    for q, _ in fac:
        while t % q == 0 and pow(g, t // q, ell) == 1:
            t //= q
    return t


def build_prime_set(
    g: int, z: float, C: float = 2.0, alpha: float = 0.677, variant: str = "standard"
) -> SievePrimeSet:
    """Enumerate primes ell in [z, Cz] passing order_g >= P+(ell-1) >= z^alpha.

    The erh variant keeps only members whose order additionally beats
    ell/log ell.  Output is ascending in ell and fully deterministic.
    """
    if z < 10:
        raise ValueError("build_prime_set: z must be >= 10")
    if C <= 1:
        raise ValueError("build_prime_set: C must be > 1")
    if not 0.5 < alpha < 1:
        raise ValueError("build_prime_set: alpha must lie in (1/2, 1)")
    if variant not in VARIANTS:
        raise ValueError(f"build_prime_set: unknown variant {variant!r}")
    lo, hi = math.ceil(z), math.floor(C * z)
    if hi < lo:
        raise ValueError("build_prime_set: window [z, Cz] contains no integer")
    threshold = z**alpha
    members = []
    for ell in primes_in_range(lo, hi):
        if g % ell == 0:
            continue
        fac = factorize(ell - 1).factors
        p_plus = fac[-1][0]
        if p_plus < threshold:
            continue
        order = _order_from_factors(g % ell, ell, fac)
        if order < p_plus:
            continue
        large = order > ell / math.log(ell)
        if variant == "erh" and not large:
            continue
        members.append(SievePrime(ell, p_plus, order, large))
    return SievePrimeSet(z, C, alpha, g, variant, tuple(members))


def _gpf_sieve(limit: int) -> list[int]:
    # gpf[n] = greatest prime factor of n (gpf[n] == n iff n prime), n >= 2
    gpf = list(range(limit + 1))
    for p in range(2, limit + 1):
        if gpf[p] == p:
            for m in range(2 * p, limit + 1, p):
                gpf[m] = p
    return gpf


@dataclass(frozen=True)
class DensityReport:
    z: float
    alpha: float
    g: int
    primes_counted: int
    count_alpha: int  # primes ell <= z with P+(ell-1) >= ell^alpha
    count_order: int  # primes ell <= z, ell not dividing g, with order_g >= ell^alpha
    ratio_alpha: float
    dickman_reference: float


def dickman_reference(alpha: float) -> float:
    """Asymptotic density of n with P+(n) > n^alpha, for alpha in [1/2, 1).

    In this range the Dickman function is rho(1/alpha) = 1 - log(1/alpha),
    and the wanted event is its complement, so the value is log(1/alpha).
    """
    if not 0.5 <= alpha < 1:
        raise ValueError("dickman_reference: alpha must lie in [1/2, 1)")
    return math.log(1 / alpha)


def density_report(g: int, z: float, alpha: float) -> DensityReport:
    """Measure, over all primes ell <= z, how often P+(ell-1) >= ell^alpha
    and how often the order of g mod ell clears the same bar.

    Factorizations of ell-1 come from one greatest-prime-factor sieve pass,
    not per-number factoring.
    """
    if z < 10**3:
        raise ValueError("density_report: z must be >= 10^3")
    if not 0.5 <= alpha < 1:
        raise ValueError("density_report: alpha must lie in [1/2, 1)")
    limit = math.floor(z)
    gpf = _gpf_sieve(limit)
    primes_counted = count_alpha = count_order = 0
    for ell in range(2, limit + 1):
        if gpf[ell] != ell:
            continue
        primes_counted += 1
        if ell == 2:
            continue
        bar = ell**alpha
        if gpf[ell - 1] >= bar:
            count_alpha += 1
        if g % ell == 0:
            continue
        # factor ell-1 off the sieve, then the usual order descent
        n, fac = ell - 1, []
        while n > 1:
            p = gpf[n]
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            fac.append((p, e))
        if _order_from_factors(g % ell, ell, fac) >= bar:
            count_order += 1
    return DensityReport(
        z=z,
        alpha=alpha,
        g=g,
        primes_counted=primes_counted,
        count_alpha=count_alpha,
        count_order=count_order,
        ratio_alpha=count_alpha / primes_counted,
        dickman_reference=dickman_reference(alpha),
    )


def pi_progression(t: float, m: int, a: int) -> int:
    """Exact count of primes p <= t with p = a (mod m)."""
    if t < 2:
        raise ValueError("pi_progression: t must be >= 2")
    if not 1 <= m <= t:
        raise ValueError("pi_progression: need 1 <= m <= t")
    a %= m
    return sum(1 for p in primes_up_to(math.floor(t)) if p % m == a)


def bt_ratio(t: float, m: int, a: int) -> float:
    """Companion ratio pi(t;m,a) * phi(m) * log(t) / t for the
    Brun-Titchmarsh comparison."""
    from .arith import euler_phi

    return pi_progression(t, m, a) * euler_phi(m) * math.log(t) / t


def euler_sum(t: float) -> float:
    """Sum of n/phi(n)^2 over n <= t.

    Each term is an exact rational cast to float once; accumulation uses
    fsum.  A single exact Fraction accumulator is hopeless here: the common
    denominator over n <= 10^6 has millions of digits.
    """
    if t < 2:
        raise ValueError("euler_sum: t must be >= 2")
    limit = math.floor(t)
    # phi for all n <= limit by a sieve pass
    phi = list(range(limit + 1))
    for p in range(2, limit + 1):
        if phi[p] == p:  # p prime
            for m in range(p, limit + 1, p):
                phi[m] -= phi[m] // p
    return math.fsum(
        float(Fraction(n, phi[n] * phi[n])) for n in range(1, limit + 1)
    )


def format_records(pset: SievePrimeSet) -> str:
    """One member per line: ell, P+(ell-1), order of g, large-order flag."""
    lines = [f"{sp.ell} {sp.p_plus} {sp.order_g} {int(sp.large_order)}" for sp in pset.members]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_records(
    text: str, z: float, C: float, alpha: float, g: int, variant: str = "standard"
) -> SievePrimeSet:
    """Inverse of format_records; revalidates every member invariant."""
    members = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        ell, p_plus, order_g, flag = (int(tok) for tok in line.split())
        if not is_prime(ell):
            raise ValueError(f"parse_records: {ell} is not prime")
        members.append(SievePrime(ell, p_plus, order_g, bool(flag)))
    return SievePrimeSet(z, C, alpha, g, variant, tuple(members))
