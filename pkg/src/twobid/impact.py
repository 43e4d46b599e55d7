"""Closed-form solutions of the news-impact price models.

Covers the characteristic roots of the linear upgrade/price system, the
explicit price paths (power, log-oscillatory and degenerate branches),
the logistic variant, the Bessel-type profit-taking paths, the two-event
hypergeometric solutions and the tree-growth recurrence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import DomainError
from .special import bessel_j, hyp2f1

REAL_DISTINCT = "real-distinct"
DOUBLE = "double"
OSCILLATORY = "oscillatory"


@dataclass(frozen=True)
class ImpactParams:
    """Validated bundle of model coefficients.

    a: global-investing coefficient, b: momentum coefficient, c: news
    reduction coefficient, sigma: relative price-target scale, e:
    profit-taking coupling, nu: exponent modifier, tau: inter-event lag,
    lam: emigration/decay rate.
    """

    a: float = 0.0
    b: float = 0.0
    c: float = 1.0
    sigma: float = 1.0
    e: float = 1.0
    nu: float = 1.0
    tau: float = 1.0
    lam: float = 0.0

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise DomainError("coefficients a, b must be >= 0")
        if self.sigma <= 0:
            raise DomainError("sigma must be > 0")
        if self.e <= 0:
            raise DomainError("e must be > 0")
        if not 0 < self.nu <= 1:
            raise DomainError("nu must be in (0, 1]")
        if self.tau <= 0:
            raise DomainError("tau must be > 0")
        if self.lam < 0:
            raise DomainError("lambda must be >= 0")


@dataclass(frozen=True)
class CharacteristicRoots:
    d: float
    D: float
    kind: str
    r1: Optional[float] = None
    r2: Optional[float] = None
    freq: Optional[float] = None


def char_roots(a: float, b: float, c: float) -> CharacteristicRoots:
    """Roots r = d +- sqrt(D) of the power substitution, d=(c-b)/2, D=d^2-a."""
    d = (c - b) / 2.0
    big_d = d * d - a
    if big_d > 0:
        root = math.sqrt(big_d)
        return CharacteristicRoots(d, big_d, REAL_DISTINCT, r1=d + root, r2=d - root)
    if big_d == 0:
        return CharacteristicRoots(d, big_d, DOUBLE, r1=d, r2=d)
    return CharacteristicRoots(d, big_d, OSCILLATORY, freq=math.sqrt(-big_d))


def price_path(roots: CharacteristicRoots, c1: float, c2: float, t: float) -> float:
    """Price return p(t) from the characteristic roots; natural log throughout.

    D>0: c1*t^r1 + c2*t^r2.  D<0: t^d (c1 sin + c2 cos)(freq * ln t).
    D=0: degenerate Euler pair c1*t^d + c2*t^d*ln(t).
    """
    if t <= 0:
        raise DomainError(f"price_path needs t > 0, got {t}")
    if roots.kind == REAL_DISTINCT:
        return c1 * t**roots.r1 + c2 * t**roots.r2
    if roots.kind == OSCILLATORY:
        phase = roots.freq * math.log(t)
        return t**roots.d * (c1 * math.sin(phase) + c2 * math.cos(phase))
    logt = math.log(t)
    return c1 * t**roots.d + c2 * t**roots.d * logt


def logistic_solution(
    c: float, b: float, beta: float, B: float, sigma: float, t: float
) -> tuple[float, float]:
    """Saturating (logistic) solution for pure momentum investing (a=0).

    u = (beta + B t^(r-beta)) / (r + B t^(r-beta)) with r = c - b, and
    p = sigma (b u + beta).  Requires 0 <= beta < r and B >= 0.
    """
    r = c - b
    if r <= 0:
        raise DomainError(f"logistic solution needs c - b > 0, got {r}")
    if not 0 <= beta < r:
        raise DomainError(f"beta must satisfy 0 <= beta < r={r}, got {beta}")
    if B < 0:
        raise DomainError("B must be >= 0")
    if t < 0:
        raise DomainError("t must be >= 0")
    if t == 0:
        # limit value: exponent r - beta > 0 kills the B terms
        u = beta / r
    else:
        grow = B * t ** (r - beta)
        u = (beta + grow) / (r + grow)
    return u, sigma * (b * u + beta)


def profit_path_pair(c: float, e: float, t: float) -> tuple[float, float]:
    """Fundamental profit-taking paths t^((1+c)/2) * J_{+-(1+c)/2}(sqrt(e) t)."""
    if t <= 0:
        raise DomainError(f"profit path needs t > 0, got {t}")
    if e <= 0:
        raise DomainError(f"profit path needs e > 0, got {e}")
    order = (1.0 + c) / 2.0
    x = math.sqrt(e) * t
    amp = t**order
    return amp * bessel_j(order, x), amp * bessel_j(-order, x)


def profit_path(c: float, e: float, a1: float, a2: float, t: float) -> float:
    """Profit-taking price path a1*p1 + a2*p2 built from the Bessel pair."""
    p1, p2 = profit_path_pair(c, e, t)
    return a1 * p1 + a2 * p2


def profit_path_asymptote(
    c: float, e: float, branch: int, t: float
) -> tuple[float, float]:
    """Large-t form of a fundamental path: (amplitude t^(c/2), phase).

    Returns (value, phase) where value = C * t^(c/2) * cos(sqrt(e) t - phase)
    and phase = order*pi/2 + pi/4 for order = +-(1+c)/2 (branch +1/-1).
    The t-period of the oscillation is 2*pi/sqrt(e).
    """
    if branch not in (1, -1):
        raise DomainError("branch must be +1 or -1")
    if t <= 0 or e <= 0:
        raise DomainError("profit path asymptote needs t > 0 and e > 0")
    order = branch * (1.0 + c) / 2.0
    phase = order * math.pi / 2.0 + math.pi / 4.0
    amp = math.sqrt(2.0 / (math.pi * math.sqrt(e))) * t ** (c / 2.0)
    return amp * math.cos(math.sqrt(e) * t - phase), phase


def modified_profit_path(
    c: float, e: float, nu: float, t: float
) -> tuple[float, float]:
    """Fundamental pair t^(c/2) * J_{+-c/nu}(2 sqrt(e) t^(nu/2) / nu).

    Generic orders only; c/nu integral makes the pair degenerate and is
    not supported.
    """
    if t <= 0 or e <= 0:
        raise DomainError("modified profit path needs t > 0 and e > 0")
    if not 0 < nu <= 1:
        raise DomainError(f"nu must be in (0, 1], got {nu}")
    order = c / nu
    if order == int(order) and order != 0:
        raise DomainError(f"degenerate integer order c/nu={order} not supported")
    x = 2.0 * math.sqrt(e) * t ** (nu / 2.0) / nu
    amp = t ** (c / 2.0)
    return amp * bessel_j(order, x), amp * bessel_j(-order, x)


class TwoEventPrice(NamedTuple):
    """Values of the two-event solutions at one t; a field is None when
    its series argument falls outside |z| < 1."""

    p: Optional[float]
    p1: Optional[float]
    p2: Optional[float]


def two_event_price(
    a: float, c0: float, c_tau: float, tau: float, t: float
) -> TwoEventPrice:
    """Hypergeometric solutions for two events at -tau and 0 (b=0 branch).

    p(t) = F(alpha, beta; gamma; -t/tau) with gamma = 1 - c0 and
    alpha, beta = -c/2 +- sqrt(c^2/4 - a), c = c0 + c_tau; valid for t < tau.
    p1 = t^(-beta) F(beta, -alpha - c_tau; 1 + beta - alpha; -tau/t) and p2
    with alpha <-> beta; valid for t > tau.  For large t/tau they grow as
    t^(r1), t^(r2) with the b=0 characteristic roots.
    """
    if tau <= 0:
        raise DomainError("tau must be > 0")
    if t < 0:
        raise DomainError("t must be >= 0")
    c = c0 + c_tau
    disc = c * c / 4.0 - a
    if disc < 0:
        raise DomainError("complex exponents (a > c^2/4) not supported")
    root = math.sqrt(disc)
    alpha = -c / 2.0 + root
    beta = -c / 2.0 - root
    gamma = 1.0 - c0

    p = p1 = p2 = None
    if t < tau:
        p = hyp2f1(alpha, beta, gamma, -t / tau)
    if t > tau:
        p1 = t ** (-beta) * hyp2f1(beta, -alpha - c_tau, 1.0 + beta - alpha, -tau / t)
        p2 = t ** (-alpha) * hyp2f1(alpha, -beta - c_tau, 1.0 + alpha - beta, -tau / t)
    if p is None and p1 is None:
        raise DomainError(f"no convergent series at t={t}, tau={tau}")
    return TwoEventPrice(p, p1, p2)


def tree_growth(c: float, lam: float, f1: float, f2: float, n: int) -> list[float]:
    """Tree-growth recurrence f_k = f_{k-1} + c/(k-2) f_{k-2} - lam f_{k-1}.

    Returns [f_3, ..., f_n].  With c=1, lam=0 the fundamental solutions
    are f_n = n (seeds 1, 2) and f_n = D_n/(n-1)! for derangement counts
    D_n (seeds 0, 1).
    """
    if n <= 2:
        raise DomainError(f"n must be > 2, got {n}")
    prev2, prev1 = f1, f2
    out: list[float] = []
    for k in range(3, n + 1):
        nxt = prev1 + (c / (k - 2)) * prev2 - lam * prev1
        out.append(nxt)
        prev2, prev1 = prev1, nxt
    return out
