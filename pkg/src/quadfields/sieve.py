"""The square-sieve detector over a harvested prime set.

For k = s*u(n), the sum of Jacobi symbols (k/ell) over the set equals
|set| - omega(k) exactly when k is a positive perfect square; non-squares
oscillate.  Everything below is the exact bookkeeping around that identity:
the window partition by omega, the certificate inequality, and the pair
diagnostics U, V, W, T, Q.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .arith import jacobi
from .census import s_matches
from .harvest import SievePrimeSet
from .sequences import SequenceSpec, u_eval, u_eval_mod

__all__ = [
    "Partition",
    "Certificate",
    "Diagnostics",
    "SieveRun",
    "omega_z",
    "detector",
    "partition",
    "certificate",
    "diagnostics",
    "run_sieve",
]


def omega_z(spec: SequenceSpec, n: int, s: int, prime_set: SievePrimeSet) -> int:
    """Distinct primes of the set dividing s*u(n), by modular tests only."""
    if u_eval(spec, n) == 0:
        raise ValueError("omega_z: u(n) = 0 has no omega")
    return sum(
        1
        for ell in prime_set.ells
        if s % ell == 0 or u_eval_mod(spec, n, ell) == 0
    )


def detector(spec: SequenceSpec, n: int, s: int, prime_set: SievePrimeSet) -> int:
    """D(n) = sum of (s*u(n) / ell) over the set, via residues mod each ell."""
    total = 0
    for ell in prime_set.ells:
        r = (s % ell) * u_eval_mod(spec, n, ell) % ell
        total += jacobi(r, ell)
    return total


def _symbol_rows(spec, M, N, s, prime_set):
    # rows[i][j] = (s*u(M+1+j) / ell_i); g-powers advance by one multiply per n
    rows = []
    for ell in prime_set.ells:
        g = spec.g % ell
        x = pow(spec.g, M + 1, ell)
        s_red = s % ell
        row = []
        for _ in range(N):
            row.append(jacobi(s_red * spec.f.eval_mod(x, ell) % ell, ell))
            x = x * g % ell
        rows.append(row)
    return rows


@dataclass(frozen=True)
class Partition:
    n_z: tuple[int, ...]  # omega_z(u(n)) <= floor(|L|/2)
    e_z: tuple[int, ...]
    e_ratio: float  # |e_z| / (N z^-alpha + log z)


def partition(spec: SequenceSpec, M: int, N: int, prime_set: SievePrimeSet) -> Partition:
    """Split the window by omega_z(u(n)) against the half-set threshold.

    n with u(n) = 0 land in the heavy side: every modulus divides 0.
    """
    if N < 1:
        raise ValueError("partition: N must be >= 1")
    rows = _symbol_rows(spec, M, N, 1, prime_set)
    half = len(prime_set) // 2
    n_z, e_z = [], []
    for j in range(N):
        omega = sum(1 for row in rows if row[j] == 0)
        (n_z if omega <= half else e_z).append(M + 1 + j)
    z, alpha = prime_set.z, prime_set.alpha
    denom = N * z**-alpha + math.log(z)
    return Partition(tuple(n_z), tuple(e_z), len(e_z) / denom)


@dataclass(frozen=True)
class Certificate:
    lhs: int
    rhs: Fraction
    holds: bool
    matches: tuple[int, ...]  # the n counted by lhs


def certificate(
    spec: SequenceSpec, M: int, N: int, s: int, prime_set: SievePrimeSet
) -> Certificate:
    """Exact check of |N_{s,z}| <= (2/|L|) * sum of D(n)^2 over the matches.

    lhs counts n in the light part of the window whose s*u(n) is a perfect
    square (the field-census criterion); rhs is exact rational arithmetic.
    """
    L = len(prime_set)
    if L < 1:
        raise ValueError("certificate: prime set must be nonempty")
    part = partition(spec, M, N, prime_set)
    matched = [n for n in part.n_z if s_matches(spec, n, s)]
    square_sum = sum(detector(spec, n, s, prime_set) ** 2 for n in matched)
    rhs = Fraction(2 * square_sum, L)
    return Certificate(
        lhs=len(matched), rhs=rhs, holds=len(matched) <= rhs, matches=tuple(matched)
    )


@dataclass(frozen=True)
class Diagnostics:
    U: int  # ordered pairs, equal P+(ell-1)
    V: int  # ordered pairs, distinct P+
    W: int  # all ordered pairs, U + V
    T: int  # sum of gcd(ell-1, p-1) over distinct-P+ pairs
    Q_quantity: int  # same pairs, gcd squared
    U_ratio: float
    V_ratio: float
    T_ratio: float
    Q_ratio: float
    max_cross_gcd: int
    gcd_cap: float  # C * z^(1-alpha)
    gcd_bound_holds: bool


def diagnostics(
    spec: SequenceSpec, M: int, N: int, s: int, prime_set: SievePrimeSet
) -> Diagnostics:
    """The pair sums behind the variance argument, over ordered pairs
    (both orientations, matching the expansion of D(n)^2).

    The per-pair cap gcd(ell-1, p-1) <= C z^(1-alpha) for distinct-P+ pairs
    is reported exactly; it must hold for any honestly harvested set.
    """
    rows = _symbol_rows(spec, M, N, s, prime_set)
    members = prime_set.members
    U = V = T = Q = 0
    max_cross = 0
    for i, a in enumerate(members):
        for j, b in enumerate(members):
            if i == j:
                continue
            inner = sum(x * y for x, y in zip(rows[i], rows[j]))
            if a.p_plus == b.p_plus:
                U += inner
            else:
                V += inner
                d = gcd(a.ell - 1, b.ell - 1)
                T += d
                Q += d * d
                if d > max_cross:
                    max_cross = d
    z, alpha, C = prime_set.z, prime_set.alpha, prime_set.C
    logz = math.log(z)
    cap = C * z ** (1 - alpha)
    return Diagnostics(
        U=U,
        V=V,
        W=U + V,
        T=T,
        Q_quantity=Q,
        U_ratio=abs(U) / (N * z ** (2 - alpha)),
        V_ratio=abs(V) / (N * z ** (3 - 2 * alpha) / logz**2 + z**3),
        T_ratio=T / (z**2 / logz),
        Q_ratio=Q / z ** (3 - alpha),
        max_cross_gcd=max_cross,
        gcd_cap=cap,
        gcd_bound_holds=max_cross <= cap,
    )


@dataclass(frozen=True)
class SieveRun:
    spec: SequenceSpec
    M: int
    N: int
    s: int
    prime_set: SievePrimeSet
    detector_map: dict[int, int]
    omega_map: dict[int, int]  # omega_z(s*u(n))
    part: Partition
    cert: Certificate

    def to_json(self) -> str:
        doc = {
            "f": self.spec.f.format(),
            "g": self.spec.g,
            "window": [self.M, self.N],
            "s": self.s,
            "prime_set": {
                "z": self.prime_set.z,
                "C": self.prime_set.C,
                "alpha": self.prime_set.alpha,
                "g": self.prime_set.g,
                "variant": self.prime_set.variant,
                "members": [
                    [sp.ell, sp.p_plus, sp.order_g, int(sp.large_order)]
                    for sp in self.prime_set.members
                ],
            },
            "detector": [[n, d] for n, d in sorted(self.detector_map.items())],
            "omega": [[n, w] for n, w in sorted(self.omega_map.items())],
            "partition": {
                "n_z": list(self.part.n_z),
                "e_z": list(self.part.e_z),
                "e_ratio": self.part.e_ratio,
            },
            "certificate": {
                "lhs": self.cert.lhs,
                "rhs": [self.cert.rhs.numerator, self.cert.rhs.denominator],
                "holds": self.cert.holds,
            },
        }
        return json.dumps(doc, sort_keys=True)


def run_sieve(
    spec: SequenceSpec, M: int, N: int, s: int, prime_set: SievePrimeSet
) -> SieveRun:
    """Assemble detector values, omega counts, partition, and certificate
    for one window."""
    rows = _symbol_rows(spec, M, N, s, prime_set)
    ns = range(M + 1, M + N + 1)
    detector_map = {n: sum(rows[i][j] for i in range(len(rows))) for j, n in enumerate(ns)}
    omega_map = {n: sum(1 for row in rows if row[j] == 0) for j, n in enumerate(ns)}
    return SieveRun(
        spec=spec,
        M=M,
        N=N,
        s=s,
        prime_set=prime_set,
        detector_map=detector_map,
        omega_map=omega_map,
        part=partition(spec, M, N, prime_set),
        cert=certificate(spec, M, N, s, prime_set),
    )
