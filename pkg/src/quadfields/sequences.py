"""Integer polynomials f, the base g, and the sequence u(n) = f(g^n).

Validation decides the hypotheses downstream code cares about (separable,
monic, degree, sign of the leading coefficient) exactly over the integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

__all__ = [
    "Polynomial",
    "SequenceSpec",
    "validate",
    "u_eval",
    "u_eval_mod",
    "positivity_threshold",
]


@dataclass(frozen=True)
class Polynomial:
    """Dense integer polynomial, constant term first, leading coeff nonzero."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        if not self.coefficients or self.coefficients[-1] == 0:
            raise ValueError("polynomial must have a nonzero leading coefficient")

    @classmethod
    def parse(cls, text: str) -> "Polynomial":
        """Parse the comma-separated coefficient format, e.g. '1,6,1'."""
        try:
            coeffs = tuple(int(part.strip()) for part in text.split(","))
        except ValueError:
            raise ValueError(f"bad polynomial text {text!r}") from None
        return cls(coeffs)

    def format(self) -> str:
        return ",".join(str(c) for c in self.coefficients)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> int:
        return self.coefficients[-1]

    @property
    def constant(self) -> int:
        return self.coefficients[0]

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def eval_mod(self, x: int, m: int) -> int:
        acc = 0
        for c in reversed(self.coefficients):
            acc = (acc * x + c) % m
        return acc

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            raise ValueError("derivative of a constant is the zero polynomial")
        return Polynomial(
            tuple(i * c for i, c in enumerate(self.coefficients) if i > 0)
        )


def _content(coeffs):
    g = 0
    for c in coeffs:
        g = gcd(g, c)
    return g


def _strip(coeffs):
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    return coeffs


def _pseudo_rem(a, b):
    # prem(a, b) over Z: scale a by lc(b)^(deg a - deg b + 1), then divide.
    a, b = list(a), list(b)
    da, db = len(a) - 1, len(b) - 1
    lc = b[-1]
    a = [c * lc ** (da - db + 1) for c in a]
    for shift in range(da - db, -1, -1):
        q, r = divmod(a[db + shift], lc)
        assert r == 0
        if q:
            for i, c in enumerate(b):
                a[i + shift] -= q * c
    return _strip(a[:db])


def gcd_degree(f: Polynomial, g: Polynomial) -> int:
    """Degree of gcd(f, g) over Q, by a primitive pseudo-remainder sequence.

    All arithmetic stays in Z; dividing each remainder by its content keeps
    the coefficients from exploding.
    """
    a, b = list(f.coefficients), list(g.coefficients)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _pseudo_rem(a, b)
        if r:
            c = _content(r)
            r = [x // c for x in r]
        a, b = b, r
    return len(a) - 1


@dataclass(frozen=True)
class SequenceSpec:
    """A validated pair (f, g) defining u(n) = f(g^n)."""

    f: Polynomial
    g: int
    separable: bool
    positive_leading: bool
    degree_ge_3: bool
    monic: bool


def validate(f: Polynomial, g: int) -> SequenceSpec:
    """Decide the hypotheses on f exactly and package the sequence.

    Separability is gcd(f, f') having degree 0; everything is integer
    arithmetic, no floating point anywhere.
    """
    if f.degree < 1:
        raise ValueError("validate: deg f must be >= 1")
    if g <= 1:
        raise ValueError("validate: g must be > 1")
    return SequenceSpec(
        f=f,
        g=g,
        separable=gcd_degree(f, f.derivative()) == 0,
        positive_leading=f.leading > 0,
        degree_ge_3=f.degree >= 3,
        monic=f.leading == 1,
    )


def u_eval(spec: SequenceSpec, n: int) -> int:
    """Exact u(n) = f(g^n)."""
    if n < 0:
        raise ValueError("u_eval: n must be >= 0")
    return spec.f(spec.g**n)


def u_eval_mod(spec: SequenceSpec, n: int, m: int) -> int:
    """u(n) mod m without big-integer work."""
    if n < 0:
        raise ValueError("u_eval_mod: n must be >= 0")
    if m < 2:
        raise ValueError("u_eval_mod: modulus must be >= 2")
    return spec.f.eval_mod(pow(spec.g, n, m), m)


def positivity_threshold(spec: SequenceSpec) -> int:
    """Smallest n0 such that u(n) > 0 for every n >= n0.

    For x > 1 + max|c_i|/c_d the sign of f(x) is the sign of the leading
    coefficient, so scan up to the first n clearing that bound, then walk
    back down while the values stay positive.
    """
    if not spec.positive_leading:
        raise ValueError("positivity threshold needs a positive leading coefficient")
    lead = spec.f.leading
    tail_max = max((abs(c) for c in spec.f.coefficients[:-1]), default=0)
    n_star = 0
    # g^n > 1 + tail_max/lead, kept in integers as lead*(g^n - 1) > tail_max
    while lead * (spec.g**n_star - 1) <= tail_max:
        n_star += 1
    n0 = n_star
    while n0 > 0 and u_eval(spec, n0 - 1) > 0:
        n0 -= 1
    return n0
