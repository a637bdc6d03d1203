"""Term balancing and the exponent calculus behind the count bounds.

Everything here is shape arithmetic: o(1) exponents are rendered as 0 and
no output is a certified bound for finite N.  The optimizer returns a
constructive guarantee with the explicit constant 2JK in place of the
unprinted constant of the balancing lemma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import linear_regression

__all__ = [
    "TermSystem",
    "GrakolResult",
    "ExponentTable",
    "RegimeBound",
    "InterpolationCheck",
    "grakol_optimize",
    "exponent_table",
    "regime_bound",
    "bound_curve_csv",
    "interpolation_check",
    "fit_exponent",
    "default_z",
    "endgame_terms",
    "endgame_system",
    "av1_system",
]


@dataclass(frozen=True)
class TermSystem:
    """B(z) = sum A_j z^B_j + sum C_k z^-D_k over z in [z1, z2]."""

    ascending: tuple[tuple[float, float], ...]  # (A_j, B_j)
    descending: tuple[tuple[float, float], ...]  # (C_k, D_k)
    z1: float
    z2: float

    def __post_init__(self) -> None:
        if not self.ascending or not self.descending:
            raise ValueError("TermSystem: term lists must be nonempty")
        for coeff, exp in (*self.ascending, *self.descending):
            if coeff <= 0 or exp <= 0:
                raise ValueError("TermSystem: coefficients and exponents must be positive")
        if not 0 < self.z1 <= self.z2:
            raise ValueError("TermSystem: need 0 < z1 <= z2")

    def value(self, z: float) -> float:
        up = sum(a * z**b for a, b in self.ascending)
        down = sum(c * z**-d for c, d in self.descending)
        return up + down


@dataclass(frozen=True)
class GrakolResult:
    z_star: float
    value: float
    T: tuple[tuple[float, ...], ...]  # T[j][k]
    guarantee: float  # 2JK * sum T + edge terms
    holds: bool  # value <= guarantee


def _refine_log_grid(ts: TermSystem, lo: float, hi: float) -> tuple[float, float]:
    # shrink around the grid argmin until relative step <= 1e-4
    n = 96
    while True:
        if hi <= lo:
            return lo, ts.value(lo)
        ratio = hi / lo
        pts = [lo * ratio ** (i / n) for i in range(n + 1)]
        vals = [ts.value(z) for z in pts]
        i = min(range(n + 1), key=vals.__getitem__)
        if ratio ** (1 / n) <= 1 + 1e-4:
            return pts[i], vals[i]
        lo, hi = pts[max(i - 1, 0)], pts[min(i + 1, n)]


def grakol_optimize(ts: TermSystem) -> GrakolResult:
    """Balance ascending against descending power terms over [z1, z2].

    T_jk is closed form; z_star is the best of the clipped pairwise
    balancing points and a refined logarithmic grid.  The guarantee
    B(z_star) <= 2JK * sum T_jk + sum A_j z1^B_j + sum C_k z2^-D_k is the
    balancing lemma with its constant made explicit.
    """
    J, K = len(ts.ascending), len(ts.descending)
    T = tuple(
        tuple((a**d * c**b) ** (1 / (b + d)) for c, d in ts.descending)
        for a, b in ts.ascending
    )
    best_z, best_v = _refine_log_grid(ts, ts.z1, ts.z2)
    for a, b in ts.ascending:
        for c, d in ts.descending:
            # stationary point of a z^b + c z^-d, clipped to the range
            z = min(max((c * d / (a * b)) ** (1 / (b + d)), ts.z1), ts.z2)
            v = ts.value(z)
            if v < best_v:
                best_z, best_v = z, v
    edges = sum(a * ts.z1**b for a, b in ts.ascending) + sum(
        c * ts.z2**-d for c, d in ts.descending
    )
    guarantee = 2 * J * K * sum(sum(row) for row in T) + edges
    return GrakolResult(
        z_star=best_z, value=best_v, T=T, guarantee=guarantee, holds=best_v <= guarantee
    )


@dataclass(frozen=True)
class ExponentTable:
    alpha: float
    beta: float  # 1/(2 alpha)
    gamma: float  # 2 - 1/alpha
    beta0: float  # 3/(2(1+alpha))
    gamma0: float  # (4+alpha)/(1+alpha)
    switch1: float  # 2(1-alpha)/(1+3 alpha)
    switch2: float  # 4(1-alpha)/(1+3 alpha)
    switch3: float  # 2 alpha/3
    theta: float  # (1-alpha)^2 (1+3 alpha) / ((1+alpha^2)(3 alpha - 1))


def _require_alpha(alpha: float, who: str) -> None:
    if not 0.5 < alpha < 1:
        raise ValueError(f"{who}: alpha must lie in (1/2, 1)")


def exponent_table(alpha: float) -> ExponentTable:
    """All derived exponents at one alpha.

    switch1 < switch2 always; switch2 < switch3 only once alpha > 2/3
    (below that the averaged regimes never beat the trivial bound at the
    claimed crossover, and the regime cascade collapses).
    """
    _require_alpha(alpha, "exponent_table")
    table = ExponentTable(
        alpha=alpha,
        beta=1 / (2 * alpha),
        gamma=2 - 1 / alpha,
        beta0=3 / (2 * (1 + alpha)),
        gamma0=(4 + alpha) / (1 + alpha),
        switch1=2 * (1 - alpha) / (1 + 3 * alpha),
        switch2=4 * (1 - alpha) / (1 + 3 * alpha),
        switch3=2 * alpha / 3,
        theta=(1 - alpha) ** 2 * (1 + 3 * alpha) / ((1 + alpha**2) * (3 * alpha - 1)),
    )
    assert 0 < table.theta < 1
    assert table.switch1 < table.switch2
    if alpha > 2 / 3:
        assert table.switch2 < table.switch3
    return table


@dataclass(frozen=True)
class RegimeBound:
    value: float
    regime: str  # small_s | mid_s | large_s | trivial


def regime_bound(alpha: float, N: float, S: float) -> RegimeBound:
    """Piecewise averaged-count bound with o(1) = 0 (shape comparison only)."""
    _require_alpha(alpha, "regime_bound")
    if N < 2:
        raise ValueError("regime_bound: N must be >= 2")
    if S < 1:
        raise ValueError("regime_bound: S must be >= 1")
    t = exponent_table(alpha)
    logS = math.log(S) / math.log(N)
    if logS <= t.switch1:
        return RegimeBound(S ** (1 - 1 / (4 * alpha)) * N ** (1 / (2 * alpha)), "small_s")
    if logS <= t.switch2:
        return RegimeBound(S**0.5 * N ** ((3 - alpha) / (1 + 3 * alpha)), "mid_s")
    if logS <= t.switch3:
        return RegimeBound(
            S ** (3 / (3 + alpha)) * N ** ((3 - alpha) / (3 + alpha)), "large_s"
        )
    return RegimeBound(float(N), "trivial")


def bound_curve_csv(alpha: float, N: float, s_values: list[float]) -> str:
    """CSV rows (N, S, bound, regime) for external plotting."""
    lines = ["N,S,bound,regime"]
    for S in s_values:
        rb = regime_bound(alpha, N, S)
        lines.append(f"{N!r},{S!r},{rb.value!r},{rb.regime}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class InterpolationCheck:
    theta: float
    identity_error: float  # |(1 - theta/2) - rational form|
    inequality_holds: bool  # 1 - theta/2 >= (7a-3)/(6a-2) at this alpha
    grid_holds: bool  # same inequality across a fixed alpha grid


def interpolation_check(alpha: float) -> InterpolationCheck:
    """The convexity step that drops the fourth balanced term.

    theta interpolates between two of the balanced terms; the inequality
    1 - theta/2 >= (7a-3)/(6a-2) is what makes the interpolated term
    dominated.  Checked at alpha and on a grid over (1/2, 1).
    """
    _require_alpha(alpha, "interpolation_check")

    def theta_of(a: float) -> float:
        return (1 - a) ** 2 * (1 + 3 * a) / ((1 + a**2) * (3 * a - 1))

    def lhs(a: float) -> float:
        return (-3 + 5 * a + 3 * a**2 + 3 * a**3) / ((6 * a - 2) * (1 + a**2))

    def rhs(a: float) -> float:
        return (7 * a - 3) / (6 * a - 2)

    theta = theta_of(alpha)
    assert 0 < theta < 1
    err = abs((1 - theta / 2) - lhs(alpha))
    grid = [0.501 + i * 0.002 for i in range(250)]  # 0.501 .. 0.999
    grid_ok = all(
        0 < theta_of(a) < 1 and lhs(a) >= rhs(a) - 1e-12 for a in grid
    )
    return InterpolationCheck(
        theta=theta,
        identity_error=err,
        inequality_holds=lhs(alpha) >= rhs(alpha) - 1e-12,
        grid_holds=grid_ok,
    )


def fit_exponent(points: list[tuple[float, float]]) -> float:
    """Log-log least-squares slope of count against N."""
    if len(points) < 3:
        raise ValueError("fit_exponent: need at least 3 points")
    if any(n <= 0 or c <= 0 for n, c in points):
        raise ValueError("fit_exponent: N and count must be positive")
    xs = [math.log(n) for n, _ in points]
    ys = [math.log(c) for _, c in points]
    if max(xs) == min(xs):
        raise ValueError("fit_exponent: N values must not all coincide")
    return linear_regression(xs, ys).slope


def default_z(N: float, alpha: float) -> float:
    """z = N^(1/(2 alpha)) (log N)^(-1/alpha), the endgame balancing choice."""
    _require_alpha(alpha, "default_z")
    if N < 3:
        raise ValueError("default_z: N must be >= 3")
    return N ** (1 / (2 * alpha)) * math.log(N) ** (-1 / alpha)


def endgame_terms(N: float, alpha: float, z: float) -> tuple[float, float]:
    """The two terms N z^(1-2 alpha) and z (log z)^2 the default z balances."""
    return N * z ** (1 - 2 * alpha), z * math.log(z) ** 2


def endgame_system(N: float, alpha: float, z1: float, z2: float) -> TermSystem:
    """Single-pair system {z} vs {N z^-(2 alpha - 1)}; T_11 = N^(1/(2 alpha))."""
    return TermSystem(
        ascending=((1.0, 1.0),),
        descending=((float(N), 2 * alpha - 1),),
        z1=z1,
        z2=z2,
    )


def av1_system(S: float, N: float, alpha: float, z1: float, z2: float) -> TermSystem:
    """First averaged system: {S z} vs {S^(1/2) N z^-(2a-1), S N z^-a}.

    Balanced terms come out as T_11 = S^(1-1/(4a)) N^(1/(2a)) and
    T_12 = S N^(1/(1+a)).
    """
    return TermSystem(
        ascending=((float(S), 1.0),),
        descending=((math.sqrt(S) * N, 2 * alpha - 1), (float(S) * N, alpha)),
        z1=z1,
        z2=z2,
    )
