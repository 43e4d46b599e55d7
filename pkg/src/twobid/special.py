"""Bessel J and Gauss 2F1 evaluators used by the price-impact solutions.

Both are plain series evaluators tuned for the parameter ranges the
impact models actually visit (orders up to a few units, |z| < 1).  The
Bessel evaluator switches to the large-argument expansion past a
crossover so that huge arguments stay accurate in float arithmetic.
"""

from __future__ import annotations

import math

from .errors import DomainError

# Series terms must stay this small, relative to the running sum, for
# three consecutive terms before summation stops; guards against a
# premature stop at an incidental zero term of an oscillating series.
_REL_STOP = 1e-15
_STOP_STREAK = 3
_MAX_TERMS = 2000


def bessel_crossover(alpha: float) -> float:
    """Argument above which the large-x expansion takes over."""
    return max(25.0, 2.0 * alpha * alpha)


def _bessel_series(alpha: float, x: float) -> float:
    # sum_m (-1)^m (x/2)^(2m+alpha) / (m! Gamma(m+alpha+1))
    half = x / 2.0
    try:
        term = half**alpha / math.gamma(alpha + 1.0)
    except ValueError as exc:  # Gamma pole: alpha is a negative integer
        raise DomainError(f"series order {alpha} hits a Gamma pole") from exc
    total = term
    streak = 0
    q = half * half
    for m in range(1, _MAX_TERMS):
        term *= -q / (m * (m + alpha))
        total += term
        if abs(term) <= _REL_STOP * max(abs(total), 1e-290):
            streak += 1
            if streak >= _STOP_STREAK:
                break
        else:
            streak = 0
    return total


def _bessel_asymptotic(alpha: float, x: float) -> float:
    # Hankel expansion sqrt(2/(pi x)) * (P cos w - Q sin w),
    # w = x - alpha*pi/2 - pi/4.  The bare cosine term is the leading
    # behaviour; the P/Q corrections keep the branch accurate enough to
    # meet the series at the crossover.
    w = x - alpha * math.pi / 2.0 - math.pi / 4.0
    mu = 4.0 * alpha * alpha
    ex = 8.0 * x
    p_sum, q_sum = 1.0, 0.0
    term = 1.0
    for k in range(1, 9):
        term *= (mu - (2 * k - 1) ** 2) / (k * ex)
        if k % 2 == 1:
            q_sum += term if (k // 2) % 2 == 0 else -term
        else:
            p_sum += -term if (k // 2) % 2 == 1 else term
        if abs(term) < 1e-17:
            break
    amp = math.sqrt(2.0 / (math.pi * x))
    return amp * (p_sum * math.cos(w) - q_sum * math.sin(w))


def bessel_j(alpha: float, x: float) -> float:
    """Bessel function of the first kind J_alpha(x) for x >= 0.

    Power series up to the crossover, large-argument expansion beyond.
    alpha must not be a negative integer when the series branch runs.
    """
    if x < 0:
        raise DomainError(f"bessel_j needs x >= 0, got {x}")
    if x == 0.0:
        if alpha == 0.0:
            return 1.0
        if alpha > 0.0:
            return 0.0
        raise DomainError("bessel_j at x=0 undefined for negative order")
    if x <= bessel_crossover(alpha):
        return _bessel_series(alpha, x)
    return _bessel_asymptotic(alpha, x)


def hyp2f1(alpha: float, beta: float, gamma: float, z: float) -> float:
    """Gauss hypergeometric series F(alpha, beta; gamma; z) for |z| < 1."""
    if abs(z) >= 1.0:
        raise DomainError(f"hyp2f1 series needs |z| < 1, got z={z}")
    if gamma <= 0.0 and gamma == int(gamma):
        raise DomainError(f"hyp2f1 undefined for gamma={gamma}")
    total = 1.0
    term = 1.0
    streak = 0
    for m in range(_MAX_TERMS):
        term *= (alpha + m) * (beta + m) / ((gamma + m) * (m + 1)) * z
        total += term
        if abs(term) <= _REL_STOP * max(abs(total), 1e-290):
            streak += 1
            if streak >= _STOP_STREAK:
                break
        else:
            streak = 0
    return total
