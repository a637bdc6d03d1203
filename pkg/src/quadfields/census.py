"""Exact census of the quadratic fields Q(sqrt(u(n))) over a window of n.

Counting goes through squarefree kernels, never through a factorization of
u(n): two positive integers generate the same field exactly when their
product is a perfect square, and s*u(n) is a square exactly when s is the
squarefree kernel of u(n).
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass
from math import gcd, isqrt

from .arith import U64_MAX, is_perfect_square, is_squarefree, jacobi, primes_up_to
from .sequences import SequenceSpec, u_eval, u_eval_mod

__all__ = [
    "KernelResult",
    "CensusResult",
    "same_field",
    "s_matches",
    "count_Q",
    "count_Q_total",
    "distinct_fields",
    "squarefree_kernel",
]

DEFAULT_KERNEL_BOUND = 10**6

# Fixed witnesses for the residue prefilters.  Any odd primes work; these sit
# above every coefficient the test suite uses so zero residues stay rare.
_WITNESS_PRIMES = (
    10007, 10009, 10037, 10039, 10061, 10067, 10069, 10079,
    10091, 10093, 10099, 10103, 10111, 10133, 10139, 10141,
)

_prime_cache: list[int] = []


def _primes_through(bound: int) -> list[int]:
    global _prime_cache
    if not _prime_cache or _prime_cache[-1] < bound:
        _prime_cache = primes_up_to(max(bound, 1 << 16))
    return _prime_cache[: bisect_right(_prime_cache, bound)]


@dataclass(frozen=True)
class KernelResult:
    """Squarefree kernel of n as far as trial division to B can see.

    complete: kernel is exact.  Otherwise kernel is a certified lower bound
    on the true kernel (the unfactored cofactor is a non-square whose prime
    factors all exceed B, so the true kernel exceeds B as well).
    """

    kernel: int
    complete: bool
    small_part: int  # squarefree kernel of the B-smooth part, always exact
    cofactor: int  # leftover: 1, a square, or a certified prime when complete


_CHUNK = 64


def squarefree_kernel(n: int, B: int) -> KernelResult:
    """Strip primes <= B to even multiplicity and classify what remains.

    Primes are consumed in chunks: one big modulus against the chunk product
    tells whether the chunk holds any divisor at all, which keeps the number
    of big-integer operations near the number of actual prime divisors.
    """
    if n <= 0:
        raise ValueError("squarefree_kernel: n must be positive")
    if B < 2:
        raise ValueError("squarefree_kernel: B must be >= 2")
    primes = _primes_through(B)
    m = n
    small_kernel = 1
    proven_prime = False
    i = 0
    while i < len(primes) and m > 1:
        chunk = primes[i : i + _CHUNK]
        i += _CHUNK
        if chunk[0] * chunk[0] > m:
            proven_prime = True  # no factor below chunk[0] and chunk[0]^2 > m
            break
        prod = 1
        for p in chunk:
            prod *= p
        g = gcd(m % prod, prod)
        if g == 1:
            continue
        for p in chunk:
            if g % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                if e & 1:
                    small_kernel *= p
    if m == 1 or is_perfect_square(m):
        return KernelResult(kernel=small_kernel, complete=True, small_part=small_kernel, cofactor=m if m > 1 else 1)
    if proven_prime or m <= B * B:
        # full-scan leftover below B^2 has no factor pair, also prime
        if m <= B:
            return KernelResult(kernel=small_kernel * m, complete=True, small_part=small_kernel * m, cofactor=1)
        return KernelResult(kernel=small_kernel * m, complete=True, small_part=small_kernel, cofactor=m)
    return KernelResult(
        kernel=small_kernel * (B + 1),
        complete=False,
        small_part=small_kernel,
        cofactor=m,
    )


def same_field(a: int, b: int) -> bool:
    """Q(sqrt(a)) equals Q(sqrt(b)) iff a*b is a perfect square.

    Jacobi witnesses mod fixed small primes run first, so unequal fields are
    usually rejected without ever forming the product a*b.
    """
    if a <= 0 or b <= 0:
        raise ValueError("same_field: inputs must be positive")
    for p in _WITNESS_PRIMES:
        r = (a % p) * (b % p) % p
        if r and jacobi(r, p) == -1:
            return False
    return is_perfect_square(a * b)


def _require_census_spec(spec: SequenceSpec, who: str) -> None:
    if not spec.separable:
        raise ValueError(f"{who}: census requires a separable f")


def _window(M: int, N: int, who: str) -> range:
    if M < 0:
        raise ValueError(f"{who}: M must be >= 0")
    if N < 1:
        raise ValueError(f"{who}: N must be >= 1")
    return range(M + 1, M + N + 1)


def _s_times_u_is_square(spec: SequenceSpec, n: int, s: int, u: int) -> bool:
    # u > 0 known; witness symbols first, big multiply last
    for p in _WITNESS_PRIMES:
        r = (s % p) * u_eval_mod(spec, n, p) % p
        if r and jacobi(r, p) == -1:
            return False
    return is_perfect_square(s * u)


def s_matches(spec: SequenceSpec, n: int, s: int) -> bool:
    """True when u(n) > 0 and s*u(n) is a perfect square."""
    u = u_eval(spec, n)
    return u > 0 and _s_times_u_is_square(spec, n, s, u)


def count_Q(spec: SequenceSpec, M: int, N: int, s: int) -> int:
    """Number of n in [M+1, M+N] with u(n) > 0 and s*u(n) a perfect square."""
    _require_census_spec(spec, "count_Q")
    if s < 1:
        raise ValueError("count_Q: s must be >= 1")
    if s > U64_MAX:
        raise ValueError("count_Q: cannot certify squarefreeness past 64 bits")
    if not is_squarefree(s):
        raise ValueError("count_Q: s must be squarefree")
    count = 0
    for n in _window(M, N, "count_Q"):
        u = u_eval(spec, n)
        if u > 0 and _s_times_u_is_square(spec, n, s, u):
            count += 1
    return count


@dataclass(frozen=True)
class CensusResult:
    M: int
    N: int
    S: int | None
    per_s: dict[int, int]
    total: int
    classes: tuple[tuple[int, tuple[int, ...]], ...]  # (representative, members)
    skipped: tuple[int, ...]  # n with u(n) <= 0

    def to_json(self) -> str:
        doc = {
            "M": self.M,
            "N": self.N,
            "S": self.S,
            "per_s": [[s, c] for s, c in sorted(self.per_s.items())],
            "classes": [[rep, len(members)] for rep, members in self.classes],
            "skipped": list(self.skipped),
        }
        return json.dumps(doc, sort_keys=True)


def _fallback_matches(spec, n, u, small_kernel, S, B):
    # kernel undecidable from the certificate (only possible when B < S):
    # any matching s is small_kernel times a squarefree t whose prime
    # factors all exceed B, so enumerate those t directly.
    matches = []
    for t in range(B + 1, S // small_kernel + 1):
        s = small_kernel * t
        if s > S:
            break
        lpf_small = False
        for p in _primes_through(min(B, isqrt(t))):
            if t % p == 0:
                lpf_small = True
                break
        if lpf_small:
            continue
        if _s_times_u_is_square(spec, n, s, u):
            matches.append(s)
            break  # the kernel is unique, nothing else can match
    return matches


def count_Q_total(
    spec: SequenceSpec, M: int, N: int, S: int, B: int = DEFAULT_KERNEL_BOUND
) -> CensusResult:
    """Sum of count_Q over all squarefree s <= S, computed per n by kernel
    extraction instead of a loop over s.

    For each n the kernel of u(n) either comes out exact (counted iff <= S)
    or is certified to exceed B; when B >= S that already decides the
    question, and when B < S a direct fallback scan keeps the result exact.
    """
    _require_census_spec(spec, "count_Q_total")
    if S < 1:
        raise ValueError("count_Q_total: S must be >= 1")
    per_s: dict[int, int] = {}
    skipped = []
    for n in _window(M, N, "count_Q_total"):
        u = u_eval(spec, n)
        if u <= 0:
            skipped.append(n)
            continue
        k = squarefree_kernel(u, B)
        if k.complete:
            if k.kernel <= S:
                per_s[k.kernel] = per_s.get(k.kernel, 0) + 1
        elif B < S:
            for s in _fallback_matches(spec, n, u, k.small_part, S, B):
                per_s[s] = per_s.get(s, 0) + 1
        # else: true kernel > B >= S, nothing to count
    return CensusResult(
        M=M,
        N=N,
        S=S,
        per_s=per_s,
        total=sum(per_s.values()),
        classes=(),
        skipped=tuple(skipped),
    )


def distinct_fields(spec: SequenceSpec, M: int, N: int) -> CensusResult:
    """Partition {n in window : u(n) > 0} into field-equality classes.

    Each new n is compared against existing class representatives only;
    same_field is an equivalence, so that already decides membership, and
    ascending n keeps the merge order deterministic.
    """
    _require_census_spec(spec, "distinct_fields")
    classes: list[tuple[int, list[int], int]] = []  # (rep_n, members, u(rep))
    skipped = []
    for n in _window(M, N, "distinct_fields"):
        u = u_eval(spec, n)
        if u <= 0:
            skipped.append(n)
            continue
        for rep, members, u_rep in classes:
            if same_field(u_rep, u):
                members.append(n)
                break
        else:
            classes.append((n, [n], u))
    return CensusResult(
        M=M,
        N=N,
        S=None,
        per_s={},
        total=sum(len(members) for _, members, _ in classes),
        classes=tuple((rep, tuple(members)) for rep, members, _ in classes),
        skipped=tuple(skipped),
    )
