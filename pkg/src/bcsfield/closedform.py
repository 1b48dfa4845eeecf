"""Closed-form oracles cross-validating the numerical paths.

Contains the exact 1-D cosine-band integral, the constant-model identities
(where every trace integral collapses to a single hyperbolic expression), and
the algebraic constants eta0 = 17 - 12*sqrt(2), a0 = 3 + 2*sqrt(2) underlying
the boundary-shape threshold 3 - 2*sqrt(2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class AlgebraicConstants:
    """eta0 = threshold^2, a0 * threshold = 1, a0 = (1 + eta0)/(6 eta0).

    The small constants are evaluated as reciprocals of their conjugates
    (17 - 12*sqrt(2) = 1/(17 + 12*sqrt(2)) etc.), which avoids the
    subtractive cancellation of the literal forms and makes the defining
    identities hold to machine precision.
    """

    eta0: float = 1.0 / (17.0 + 12.0 * math.sqrt(2.0))
    a0: float = 3.0 + 2.0 * math.sqrt(2.0)
    threshold: float = 1.0 / (3.0 + 2.0 * math.sqrt(2.0))


ALGEBRAIC_CONSTANTS = AlgebraicConstants()


def cosine_integral_closed(x: float, t_hop: float) -> float:
    """(1/2pi) * Int_0^{2pi} dk / (1 + x*(t_hop*(cos k + 1) + 1)^2), exactly.

    Closed form obtained by residue calculus; valid for x >= 0, t_hop >= 0.
    """
    if x < 0 or t_hop < 0:
        raise ValueError("x and t_hop must be non-negative")
    p = math.sqrt((2.0 * t_hop + 1.0) ** 2 * x + 1.0)
    q = math.sqrt(x + 1.0)
    inner = math.sqrt(p * q + (2.0 * t_hop + 1.0) * x + 1.0)
    return (p + q) / (math.sqrt(2.0) * q * p * inner)


def constant_model_beta_c(b: int, e: float, U: float) -> float:
    """beta_c = (2/e) * artanh(b|U|/(2e)) for the constant dispersion e*I_b."""
    kappa = b * abs(U) / (2.0 * e)
    if not (U < 0 and kappa < 1.0):
        raise ValueError("need U < 0 and b|U| < 2e")
    return (2.0 / e) * math.atanh(kappa)


def constant_model_tau(b: int, e: float, U: float, beta: float) -> float:
    """tau(beta) = 2*arccos((|U|b/(2e)) sinh(beta e) - cosh(beta e)).

    Valid for beta in (0, beta_c); the arccos argument then lies in (-1, 0).
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    beta_c = constant_model_beta_c(b, e, U)
    if beta >= beta_c:
        raise ValueError("beta must lie in (0, beta_c)")
    y = (abs(U) * b / (2.0 * e)) * math.sinh(beta * e) - math.cosh(beta * e)
    if not (-1.0 <= y <= 1.0):
        raise ValueError("arccos argument out of range; beta outside (0, beta_c)?")
    return 2.0 * math.acos(y)


def constant_model_delta(b: int, e: float, U: float, beta: float, t: float,
                         tol: float = 1e-14) -> float:
    """Gap solution for the constant dispersion via a scalar bracketed search.

    Solves b * sinh(beta*S)/((cos(t/2) + cosh(beta*S)) * S) = 2/|U| for
    S = sqrt(e^2 + delta^2) >= e and returns delta; 0 when no solution with
    S >= e exists (disordered side).
    """
    c = math.cos(0.5 * t)
    target = 2.0 / abs(U)

    def lhs(S):
        a = beta * S
        u = math.exp(-a)
        return b * (1.0 - u * u) / ((1.0 + u * u + 2.0 * c * u) * S)

    if lhs(e) <= target:
        return 0.0
    lo, hi = e, 2.0 * e
    while lhs(hi) > target:
        hi *= 2.0
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if lhs(mid) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol * hi:
            break
    S = 0.5 * (lo + hi)
    return math.sqrt(max(S * S - e * e, 0.0))
