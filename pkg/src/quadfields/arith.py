"""Exact integer kernel: square tests, Jacobi symbols, factorization, orders.

Factorization is deterministic end to end (fixed Miller-Rabin bases, fixed
Pollard rho parameter schedule), so identical inputs always factor along the
identical path.  Everything here is pure and shareable across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import gcd, isqrt

__all__ = [
    "Factorization",
    "OrderRecord",
    "isqrt",
    "is_perfect_square",
    "jacobi",
    "is_prime",
    "primes_up_to",
    "factorize",
    "largest_prime_factor",
    "multiplicative_order",
    "euler_phi",
    "is_squarefree",
]

U64_MAX = 2**64 - 1

# Sufficient for every n < 3_317_044_064_679_887_385_961_981, far past 64 bits.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_PREFILTER_MODULI = (64, 63, 65, 11)
_SQUARE_RESIDUES = tuple(
    frozenset(i * i % m for i in range(m)) for m in _PREFILTER_MODULI
)


@dataclass(frozen=True)
class Factorization:
    """Complete factorization of n, pairs (prime, exponent) ascending."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        for p, e in self.factors:
            if e < 1:
                raise ValueError("exponent < 1 in factorization")
            prod *= p**e
        if prod != self.n:
            raise ValueError(f"factorization of {self.n} does not multiply back")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


@dataclass(frozen=True)
class OrderRecord:
    """Multiplicative order of lam modulo m, with minimality witnesses."""

    lam: int
    m: int
    order: int

    def __post_init__(self):
        if pow(self.lam, self.order, self.m) != 1 % self.m:
            raise ValueError("order does not annihilate the base")


def is_perfect_square(n: int) -> bool:
    """True iff n = r*r for an integer r; negative n is never a square.

    Residue classes mod 64, 63, 65, 11 reject most non-squares before the
    isqrt call ever runs; the moduli are the contract, the speedup is free.
    """
    if n < 0:
        return False
    for m, residues in zip(_PREFILTER_MODULI, _SQUARE_RESIDUES):
        if n % m not in residues:
            return False
    r = isqrt(n)
    return r * r == n


def jacobi(a: int, m: int) -> int:
    """Jacobi symbol (a/m) for odd m >= 1, by binary reciprocity.

    Negative or oversized a is reduced mod m first; (a/1) = 1 by convention.
    """
    if m <= 0 or m % 2 == 0:
        raise ValueError("jacobi: modulus must be odd and positive")
    a %= m
    sign = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                sign = -sign
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            sign = -sign
        a %= m
    return sign if m == 1 else 0


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for all 64-bit inputs."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(limit: int) -> list[int]:
    """All primes <= limit by an odd-only Eratosthenes sieve."""
    if limit < 2:
        return []
    half = (limit - 1) // 2  # flags[i] stands for 2i+1
    flags = bytearray([1]) * (half + 1)
    flags[0] = 0
    for i in range(1, (isqrt(limit) + 1) // 2 + 1):
        if flags[i]:
            p = 2 * i + 1
            start = (p * p - 1) // 2
            flags[start::p] = bytearray(len(range(start, half + 1, p)))
    return [2] + [2 * i + 1 for i in range(1, half + 1) if flags[i]]


# Trial division strips everything below this before rho takes over; any n
# below the bound squared is finished by the strip alone.
_TRIAL_BOUND = 1024
_TRIAL_PRIMES = primes_up_to(_TRIAL_BOUND)


def _brent_rho(n: int) -> int:
    """One nontrivial factor of composite odd n, Brent's cycle variant.

    The polynomial increment c walks a fixed schedule 1, 2, 3, ... so the
    factor found for a given n never varies between runs.
    """
    for c in range(1, 1000):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho schedule exhausted on {n}")  # pragma: no cover


def _factor_into(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _brent_rho(n)
    _factor_into(d, out)
    _factor_into(n // d, out)


def factorize(n: int) -> Factorization:
    """Factor 2 <= n <= 2^64-1: trial division, then deterministic rho."""
    if n < 2:
        raise ValueError("factorize: n must be >= 2")
    if n > U64_MAX:
        raise ValueError("factorize: n exceeds 64 bits")
    orig, out = n, {}
    for p in _TRIAL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n > 1:
        _factor_into(n, out)
    return Factorization(orig, tuple(sorted(out.items())))


def largest_prime_factor(n: int) -> int:
    """P+(n), the largest prime dividing n; n >= 2."""
    return factorize(n).factors[-1][0]


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("euler_phi: n must be >= 1")
    if n == 1:
        return 1
    phi = 1
    for p, e in factorize(n).factors:
        phi *= (p - 1) * p ** (e - 1)
    return phi


def multiplicative_order(lam: int, m: int) -> OrderRecord:
    """Least t >= 1 with lam^t = 1 mod m, via divisor descent from phi(m).

    Descent: start at phi(m) and strip each prime q of it while the power
    lam^(t/q) still fixes 1; what survives is minimal, which is exactly the
    OrderRecord invariant.
    """
    if lam == 0:
        raise ValueError("multiplicative_order: base must be nonzero")
    if m < 2:
        raise ValueError("multiplicative_order: modulus must be >= 2")
    if gcd(lam, m) != 1:
        raise ValueError("multiplicative_order: base and modulus share a factor")
    t = euler_phi(m)
    for q in factorize(t).primes if t > 1 else ():
        while t % q == 0 and pow(lam, t // q, m) == 1:
            t //= q
    return OrderRecord(lam, m, t)


def is_squarefree(n: int) -> bool:
    """True iff no prime square divides n; n >= 1."""
    if n < 1:
        raise ValueError("is_squarefree: n must be >= 1")
    if n == 1:
        return True
    return all(e == 1 for _, e in factorize(n).factors)
