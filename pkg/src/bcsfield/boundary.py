"""Phase-boundary curve tau(beta): derivatives, minima count, shape machinery.

tau(beta) is the unique t in (pi, 2*pi) with g(beta, t, 0) = 0 for
beta in (0, beta_c).  Implicit differentiation gives

    tau'  = -g_x / g_t,
    tau'' = (2 g_xt g_x g_t - g_xx g_t^2 - g_tt g_x^2) / g_t^3,

with every g_* a trace integral of an explicit hyperbolic kernel in
y = |lambda|, c = cos(tau/2) and f0(y) = c + cosh(beta y):

    g_x  = Avg Tr (c cosh(beta y) + 1) / f0^2
    g_t  = Avg Tr (1/2) sin(tau/2) sinh(beta y) / (f0^2 y)
    g_xx = Avg Tr y sinh(beta y) (c^2 - c cosh(beta y) - 2) / f0^3
    g_xt = Avg Tr (1/2) sin(tau/2) (c cosh(beta y) + 1 - sinh(beta y)^2) / f0^3
    g_tt = Avg Tr (1/4) sinh(beta y) (1 + sin(tau/2)^2 + c cosh(beta y)) / (f0^3 y)

The shape classifier decides, from s = (b - b')/b' and eta = (e_min/e_max)^2
alone, whether the small-coupling boundary curve of the two-level dispersion
can oscillate; the exact threshold constant is 3 - 2*sqrt(2) = sqrt(eta0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bzquad import trace_integral
from .closedform import ALGEBRAIC_CONSTANTS
from .dispersion import DispersionModel, MultiOrbitalDiagonal
from .gapcore import (
    DEFAULT_SOLVER,
    SolverConfig,
    bisect,
    check_admissible,
    g,
    solve_beta_c,
    solve_tau,
)

TWO_PI = 2.0 * math.pi
PLATEAU_TOL = 1e-11


@dataclass(frozen=True)
class CurveGrid:
    """Hybrid beta grid: uniform core plus geometric refinement at both ends."""

    core_points: int = 512
    per_decade: int = 64
    decades: int = 4
    core_lo: float = 0.05
    core_hi: float = 0.95

    def fractions(self) -> np.ndarray:
        """Sorted beta/beta_c fractions in (0, 1)."""
        parts = [np.linspace(self.core_lo, self.core_hi, self.core_points)]
        for j in range(self.decades):
            dec = np.geomspace(self.core_lo * 10.0 ** (-(j + 1)),
                               self.core_lo * 10.0 ** (-j),
                               self.per_decade, endpoint=False)
            parts.append(dec)
            parts.append(1.0 - dec[::-1])
        return np.unique(np.concatenate(parts))


@dataclass(frozen=True)
class BoundaryCurve:
    """Sampled (beta, tau, tau', tau'') with detected local minima of tau."""

    samples: list
    beta_c: float
    local_minima: list


@dataclass(frozen=True)
class ShapeVerdict:
    ratio: float
    threshold_side: str  # "Above" | "At" | "Below" vs 3 - 2*sqrt(2)
    minima_count: int    # 1 = single minimum certified, 2 = multiple possible
    convexity_certified: bool


# ---------------------------------------------------------------------------
# derivative kernels (u = exp(-a) parametrization, overflow-free)

def _kernels_z0(beta, tau, lam):
    """The five g-derivative trace integrands at (beta, tau, z=0)."""
    c = math.cos(0.5 * tau)
    sn = math.sin(0.5 * tau)
    y = np.abs(lam)
    a = beta * y
    u = np.exp(-a)
    u2 = u * u
    q = 1.0 + u2 + 2.0 * c * u
    q2 = q * q
    q3 = q2 * q
    # cosh a = (1+u^2)/(2u), sinh a = (1-u^2)/(2u), f0 = q/(2u)
    gx = 2.0 * u * (2.0 * u + c * (1.0 + u2)) / q2
    gt = 0.5 * sn * 2.0 * u * (1.0 - u2) / (q2 * y)
    gxx = 2.0 * y * u * (1.0 - u2) * (2.0 * u * c * c - c * (1.0 + u2) - 4.0 * u) / q3
    gxt = sn * u * (2.0 * u * c * (1.0 + u2) + 4.0 * u2 - (1.0 - u2) ** 2) / q3
    gtt = (1.0 - u2) * (2.0 * u * (1.0 + sn * sn) + c * (1.0 + u2)) * u / (2.0 * q3 * y)
    return gx, gt, gxx, gxt, gtt


def _g_derivs(model, beta, tau, cfg, second):
    names = 5 if second else 2
    vals = []
    for i in range(names):
        def integrand(lam, i=i):
            return _kernels_z0(beta, tau, lam)[i]
        vals.append(trace_integral(model, integrand, cfg.quad))
    return vals


def tau_prime(model: DispersionModel, U: float, beta: float,
              cfg: SolverConfig = DEFAULT_SOLVER, tau: float | None = None) -> float:
    """tau'(beta) = -g_x/g_t at (beta, tau(beta), 0)."""
    if tau is None:
        tau = solve_tau(model, U, beta, cfg)
    gx, gt = _g_derivs(model, beta, tau, cfg, second=False)
    return -gx / gt


def tau_second(model: DispersionModel, U: float, beta: float,
               cfg: SolverConfig = DEFAULT_SOLVER, tau: float | None = None) -> float:
    """tau''(beta) from the full nine-trace-integral kernel expression."""
    if tau is None:
        tau = solve_tau(model, U, beta, cfg)
    gx, gt, gxx, gxt, gtt = _g_derivs(model, beta, tau, cfg, second=True)
    return (2.0 * gxt * gx * gt - gxx * gt * gt - gtt * gx * gx) / gt**3


def trace_curve(model: DispersionModel, U: float,
                grid: CurveGrid | None = None,
                cfg: SolverConfig = DEFAULT_SOLVER,
                with_second: bool = False) -> BoundaryCurve:
    """Sample tau, tau' (optionally tau'') over (0, beta_c) and locate minima.

    Local minima are detected from sign changes of the analytic tau' (never
    from finite differences of tau samples) and refined by bisection on tau'
    to beta precision 1e-8.  Sign changes where |tau'| stays below 1e-11
    throughout the bracket are reported as ambiguous plateaus, not counted.
    """
    check_admissible(model, U)
    if grid is None:
        grid = CurveGrid()
    beta_c = solve_beta_c(model, U, cfg)
    betas = grid.fractions() * beta_c
    samples = []
    primes = []
    for beta in betas:
        tau = solve_tau(model, U, beta, cfg)
        tp = tau_prime(model, U, beta, cfg, tau=tau)
        ts = tau_second(model, U, beta, cfg, tau=tau) if with_second else None
        samples.append((float(beta), float(tau), float(tp), ts))
        primes.append(tp)
    minima = []
    tp_of = lambda b: tau_prime(model, U, b, cfg)
    for i in range(len(betas) - 1):
        if primes[i] < 0.0 <= primes[i + 1]:
            if max(abs(primes[i]), abs(primes[i + 1])) < PLATEAU_TOL:
                minima.append((float(betas[i]), float(samples[i][1]), "ambiguous"))
                continue
            b_star, _, _ = bisect(tp_of, float(betas[i]), float(betas[i + 1]),
                                  primes[i], primes[i + 1],
                                  abs_tol=float("inf"), max_iter=200, x_tol=1e-8)
            minima.append((b_star, solve_tau(model, U, b_star, cfg), "refined"))
    return BoundaryCurve(samples, beta_c, minima)


# ---------------------------------------------------------------------------
# shape machinery

def w_tilde(x: float, y: float, z: float) -> float:
    """The internal shape function w, analytically continued to y = -1.

    For y > -1:
      w(x,y,z) = -(1 + y cosh(sqrt(y+1) sqrt(2x))) (y + cosh(sqrt(y+1) sqrt(2zx)))^2
                 / [(1 + y cosh(sqrt(y+1) sqrt(2zx))) (y + cosh(sqrt(y+1) sqrt(2x)))^2]
    At y = -1 this continues to the rational form
      (x - 1)(1 + z x)^2 / ((1 - z x)(1 + x)^2),   requiring z x < 1.
    """
    if x <= 0 or z <= 0:
        raise ValueError("need x > 0 and z > 0")
    if y == -1.0:
        if z * x >= 1.0:
            raise ValueError("domain violation: z*x must be < 1 at y = -1")
        return (x - 1.0) * (1.0 + z * x) ** 2 / ((1.0 - z * x) * (1.0 + x) ** 2)
    if y < -1.0:
        raise ValueError("y must be >= -1")
    r = math.sqrt(y + 1.0)
    ch1 = math.cosh(r * math.sqrt(2.0 * x))
    chz = math.cosh(r * math.sqrt(2.0 * z * x))
    den = (1.0 + y * chz) * (y + ch1) ** 2
    if den == 0.0:
        raise ValueError("domain violation: denominator vanishes")
    return -(1.0 + y * ch1) * (y + chz) ** 2 / den


def a_hat(eta: float) -> float:
    if not 0.0 < eta:
        raise ValueError("eta must be positive")
    return (1.0 + eta) / (6.0 * eta)


def _a_disc(eta: float) -> float:
    if not 0.0 < eta <= ALGEBRAIC_CONSTANTS.eta0:
        raise ValueError("eta must lie in (0, 17 - 12*sqrt(2)]")
    # a_hat^2 - 1/eta = (eta^2 - 34 eta + 1)/(36 eta^2); the factored form
    # over the roots eta0, 17 + 12*sqrt(2) avoids the cancellation that the
    # direct difference suffers near the critical eta0 (double root in a)
    eta0 = ALGEBRAIC_CONSTANTS.eta0
    eta0_conj = 17.0 + 12.0 * math.sqrt(2.0)
    poly = (eta - eta0) * (eta - eta0_conj)
    return math.sqrt(max(poly, 0.0)) / (6.0 * eta)


def a_plus(eta: float) -> float:
    return a_hat(eta) + _a_disc(eta)


def a_minus(eta: float) -> float:
    return a_hat(eta) - _a_disc(eta)


def big_w(x: float, y: float, z: float, s: float) -> float:
    """W(x,y,z,s) = sinh(x)/(y + cosh x) + s sinh(zx)/((y + cosh(zx)) z)."""
    return (math.sinh(x) / (y + math.cosh(x))
            + s * math.sinh(z * x) / ((y + math.cosh(z * x)) * z))


def classify_shape(b: int, b_prime: int, e_min: float, e_max: float) -> ShapeVerdict:
    """Predict the small-coupling minima structure of the two-level boundary.

    Decision tree in s = (b - b')/b' and eta = (e_min/e_max)^2: a single
    local minimum is certified when s >= 3 - 2*sqrt(2), when eta >= eta0,
    when s < w_tilde(a_+(eta), -1, eta), or when s >= w_tilde(a_-(eta), -1, eta);
    in the remaining band multiple minima are possible (verdict 2).
    """
    if not (1 <= b_prime < b):
        raise ValueError("need 1 <= b' < b")
    if not (0 < e_min <= e_max):
        raise ValueError("need 0 < e_min <= e_max")
    consts = ALGEBRAIC_CONSTANTS
    ratio = e_min / e_max
    if abs(ratio - consts.threshold) <= 1e-12:
        side = "At"
    elif ratio > consts.threshold:
        side = "Above"
    else:
        side = "Below"
    s = (b - b_prime) / b_prime
    eta = ratio * ratio
    if s >= consts.threshold or eta >= consts.eta0:
        count = 1
    else:
        lo_level = w_tilde(a_plus(eta), -1.0, eta)
        hi_level = w_tilde(a_minus(eta), -1.0, eta)
        count = 1 if (s < lo_level or s >= hi_level) else 2
    return ShapeVerdict(ratio, side, count, convexity_certified=(ratio == 1.0))


def multiorbital_exact_tau_check(b: int, b_prime: int, e_min: float, e_max: float,
                                 U: float, beta: float,
                                 cfg: SolverConfig = DEFAULT_SOLVER) -> tuple[float, float]:
    """Exact tau(beta) for the two-level dispersion, plus the g residual at it.

    tau = 2*arccos(y_+) with y_+ = (-D1 + sqrt(D1^2 - 4 D0))/2 the larger root
    of y^2 + D1 y + D0 = 0, where with au = |U|/2:
      D0 = cosh(be_max) cosh(be_min)
           - au ((b'/e_max) sinh(be_max) cosh(be_min)
                 + ((b-b')/e_min) cosh(be_max) sinh(be_min))
      D1 = cosh(be_max) + cosh(be_min)
           - au ((b'/e_max) sinh(be_max) + ((b-b')/e_min) sinh(be_min))
    """
    model = MultiOrbitalDiagonal(b, b_prime, e_min, e_max)
    check_admissible(model, U)
    if beta <= 0:
        raise ValueError("beta must be positive")
    au = 0.5 * abs(U)
    c1, c2 = math.cosh(beta * e_max), math.cosh(beta * e_min)
    s1, s2 = math.sinh(beta * e_max), math.sinh(beta * e_min)
    w1 = b_prime / e_max
    w2 = (b - b_prime) / e_min
    D0 = c1 * c2 - au * (w1 * s1 * c2 + w2 * c1 * s2)
    D1 = c1 + c2 - au * (w1 * s1 + w2 * s2)
    disc = D1 * D1 - 4.0 * D0
    if disc <= 0.0:
        raise ValueError("non-positive discriminant; parameters out of range")
    y_plus = 0.5 * (-D1 + math.sqrt(disc))
    if not (-1.0 < y_plus < 0.0):
        raise ValueError(f"root y_+={y_plus} outside (-1, 0); "
                         "beta is not inside (0, beta_c)")
    tau = 2.0 * math.acos(y_plus)
    residual = g(model, U, beta, tau, 0.0, cfg)
    return tau, residual
