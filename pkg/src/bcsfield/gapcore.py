"""Gap function g, its analytic partial derivatives, and the scalar solvers.

g(x, t, z) = -2/|U| + D_d * Int Tr [ sinh(x*S) / ((cos(t/2) + cosh(x*S)) * S) ] dk
with S = sqrt(E(k)^2 + z^2).  Monotonicity makes every root finding problem a
guaranteed bracketed bisection:

  * z -> g(beta, t, z) is strictly decreasing (unique gap solution),
  * beta -> g(beta, 2*pi, 0) is strictly decreasing (unique beta_c),
  * t -> g(beta, t, 0) is strictly increasing on (pi, 2*pi) (unique tau(beta)).

All hyperbolic kernels are evaluated through u = exp(-a) so that large
arguments never overflow: with q = 1 + u^2 + 2*c*u and c = cos(t/2),

  sinh(a)/(c + cosh(a))   = (1 - u^2)/q
  1/(c + cosh(a))         = 2u/q
  log(c + cosh(a))        = a - log 2 + log q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .bzquad import DEFAULT_QUAD, QuadratureConfig, trace_integral
from .dispersion import DispersionModel

TWO_PI = 2.0 * math.pi
FOUR_PI = 4.0 * math.pi


class AdmissibilityError(ValueError):
    """The coupling violates the |U| < 2*e_min/b gate."""


class BracketError(RuntimeError):
    """A root bracket could not be established (defensive; cannot occur
    mathematically for admissible inputs)."""


class Regime(str, Enum):
    QPlus = "QPlus"
    QZero = "QZero"
    QMinus = "QMinus"


@dataclass(frozen=True)
class ModelParams:
    """Coupling U < 0, inverse temperature beta > 0, time variable t = beta*theta."""

    U: float
    beta: float
    t: float

    def __post_init__(self):
        if not self.U < 0:
            raise ValueError("coupling U must be strictly negative")
        if not self.beta > 0:
            raise ValueError("beta must be positive")

    @property
    def theta(self) -> float:
        return self.t / self.beta


@dataclass(frozen=True)
class RootConfig:
    abs_tol: float = 1e-10
    max_iter: int = 200
    classification_tol: float = 1e-8

    def __post_init__(self):
        if self.abs_tol <= 0 or self.classification_tol <= 0 or self.max_iter <= 0:
            raise ValueError("root-finding tolerances and max_iter must be positive")


@dataclass(frozen=True)
class SolverConfig:
    quad: QuadratureConfig = DEFAULT_QUAD
    root: RootConfig = RootConfig()


DEFAULT_SOLVER = SolverConfig()


@dataclass(frozen=True)
class GapResult:
    delta: float
    regime: Regime
    residual: float
    iterations: int


# ---------------------------------------------------------------------------
# stable hyperbolic kernels (vectorized over a >= 0)
#
# q(a, c) := 2 u (c + cosh a) = 1 + u^2 + 2cu with u = exp(-a).  The naive
# form cancels catastrophically near c = -1 (t near 2*pi) with small a, so it
# is assembled as (expm1(-a) + (1+c))^2 + (1-c)(1+c), which is exact algebra
# and keeps full relative precision there.

def _q(a, c):
    um1 = np.expm1(-a)
    cp = 1.0 + c
    return (um1 + cp) ** 2 + (2.0 - cp) * cp


def _one_minus_u2(a):
    return -np.expm1(-2.0 * a)


def sin_half(t: float) -> float:
    """sin(t/2), snapped to exactly 0 at floating-point multiples of 2*pi."""
    sn = math.sin(0.5 * t)
    return 0.0 if abs(sn) < 1e-15 else sn


def ratio_sinh(a, c):
    """sinh(a) / (c + cosh(a)) without overflow."""
    return _one_minus_u2(a) / _q(a, c)


def inv_f0(a, c):
    """1 / (c + cosh(a))."""
    return 2.0 * np.exp(-a) / _q(a, c)


def log_f0(a, c):
    """log(c + cosh(a))."""
    return a - math.log(2.0) + np.log(_q(a, c))


def kern_gx(a, c):
    """(1 + c*cosh(a)) / (c + cosh(a))^2, the d/dx integrand kernel."""
    u = np.exp(-a)
    return 2.0 * u * (2.0 * u + c * (1.0 + u * u)) / _q(a, c) ** 2


def kern_sinh_f0sq(a, c):
    """sinh(a) / (c + cosh(a))^2."""
    return 2.0 * np.exp(-a) * _one_minus_u2(a) / _q(a, c) ** 2


def kern_ghat_S(x, c, S):
    """d/dS of sinh(x*S)/((c + cosh(x*S))*S), evaluated stably.

    Equals [x*S*(1 + c*cosh(x*S)) - sinh(x*S)*(c + cosh(x*S))]
           / ((c + cosh(x*S))^2 * S^2); strictly negative for x, S > 0.
    """
    a = x * S
    u = np.exp(-a)
    q = _q(a, c)
    num = a * 2.0 * u * (2.0 * u + c * (1.0 + u * u)) - _one_minus_u2(a) * q
    return num / (q * q * S * S)


# ---------------------------------------------------------------------------
# g and its partial derivatives

def g(model: DispersionModel, U: float, x: float, t: float, z: float = 0.0,
      cfg: SolverConfig = DEFAULT_SOLVER) -> float:
    """The gap function g(x, t, z) for inverse temperature x."""
    if not x > 0:
        raise ValueError("x (inverse temperature) must be positive")
    if not U < 0:
        raise ValueError("U must be strictly negative")
    if z < 0:
        raise ValueError("z must be non-negative")
    c = math.cos(0.5 * t)

    def integrand(lam):
        S = np.sqrt(lam * lam + z * z)
        return ratio_sinh(x * S, c) / S

    return -2.0 / abs(U) + trace_integral(model, integrand, cfg.quad)


def dg_dx(model: DispersionModel, U: float, x: float, t: float, z: float = 0.0,
          cfg: SolverConfig = DEFAULT_SOLVER) -> float:
    """Partial derivative of g in its first (inverse temperature) slot."""
    c = math.cos(0.5 * t)

    def integrand(lam):
        S = np.sqrt(lam * lam + z * z)
        return kern_gx(x * S, c)

    return trace_integral(model, integrand, cfg.quad)


def dg_dt(model: DispersionModel, U: float, x: float, t: float, z: float = 0.0,
          cfg: SolverConfig = DEFAULT_SOLVER) -> float:
    """Partial derivative of g in the time slot; carries a sin(t/2) factor."""
    c = math.cos(0.5 * t)
    sn = sin_half(t)
    if sn == 0.0:
        return 0.0

    def integrand(lam):
        S = np.sqrt(lam * lam + z * z)
        return 0.5 * sn * kern_sinh_f0sq(x * S, c) / S

    return trace_integral(model, integrand, cfg.quad)


def dg_dz(model: DispersionModel, U: float, x: float, t: float, z: float = 0.0,
          cfg: SolverConfig = DEFAULT_SOLVER, at_zero: str = "limit") -> float:
    """Partial derivative of g in z.

    For z > 0 this is the raw derivative.  At z = 0 the raw derivative
    vanishes by evenness; the default at_zero="limit" instead returns the
    finite negative limit density lim_{z->0} (1/z) dg/dz
    = D_d * Int Tr [ ghat_S(x, t, |E|) / |E| ] dk, which is the quantity
    entering the second-derivative jump formulas.  at_zero="raw" returns 0.
    """
    c = math.cos(0.5 * t)
    if z == 0.0:
        if at_zero == "raw":
            return 0.0
        if at_zero != "limit":
            raise ValueError("at_zero must be 'limit' or 'raw'")

        def integrand(lam):
            y = np.abs(lam)
            return kern_ghat_S(x, c, y) / y

        return trace_integral(model, integrand, cfg.quad)

    def integrand(lam):
        S = np.sqrt(lam * lam + z * z)
        return kern_ghat_S(x, c, S) * z / S

    return trace_integral(model, integrand, cfg.quad)


# ---------------------------------------------------------------------------
# bracketed bisection

def bisect(f, lo: float, hi: float, f_lo: float, f_hi: float,
           abs_tol: float, max_iter: int, x_tol: float = 0.0):
    """Plain bisection for a bracketed sign change; returns (root, f(root), iters).

    Stops when |f(mid)| <= abs_tol and the bracket width is below x_tol (or
    machine-level width).  Monotonicity of all callers guarantees uniqueness.
    """
    if f_lo == 0.0:
        return lo, f_lo, 0
    if f_hi == 0.0:
        return hi, f_hi, 0
    if f_lo * f_hi > 0:
        raise BracketError(f"no sign change on [{lo}, {hi}]")
    width_goal = max(x_tol, 4.0 * np.finfo(float).eps * max(abs(lo), abs(hi), 1.0))
    mid, f_mid = lo, f_lo
    for i in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            return mid, f(mid), i
        f_mid = f(mid)
        if (f_lo < 0) == (f_mid < 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
        if hi - lo <= width_goal and abs(f_mid) <= abs_tol:
            return mid, f_mid, i
    return mid, f_mid, max_iter


# ---------------------------------------------------------------------------
# solvers

def solve_delta(model: DispersionModel, U: float, beta: float, t: float,
                cfg: SolverConfig = DEFAULT_SOLVER) -> GapResult:
    """Solve the gap equation g(beta, t, delta) = 0 and classify the regime."""
    root = cfg.root
    g0 = g(model, U, beta, t, 0.0, cfg)
    if g0 > root.classification_tol:
        z_hi = 1.0
        g_hi = g(model, U, beta, t, z_hi, cfg)
        doublings = 0
        while g_hi >= 0.0:
            z_hi *= 2.0
            doublings += 1
            if doublings > 200:
                raise BracketError("gap bracket expansion failed")
            g_hi = g(model, U, beta, t, z_hi, cfg)
        delta, res, iters = bisect(
            lambda z: g(model, U, beta, t, z, cfg),
            0.0, z_hi, g0, g_hi, root.abs_tol, root.max_iter)
        return GapResult(delta, Regime.QPlus, res, iters + doublings)
    if abs(g0) <= root.classification_tol:
        return GapResult(0.0, Regime.QZero, g0, 0)
    return GapResult(0.0, Regime.QMinus, g0, 0)


def check_admissible(model: DispersionModel, U: float):
    if not (U < 0 and abs(U) < 2.0 * model.e_min / model.b):
        raise AdmissibilityError(
            f"coupling U={U} outside admissible range (-{2.0 * model.e_min / model.b:g}, 0)")


def beta_c_upper_bound(model: DispersionModel, U: float) -> float:
    """(2/e_min) * artanh(b|U| / (2 e_min)); tight for constant dispersions."""
    check_admissible(model, U)
    return (2.0 / model.e_min) * math.atanh(model.b * abs(U) / (2.0 * model.e_min))


def solve_beta_c(model: DispersionModel, U: float,
                 cfg: SolverConfig = DEFAULT_SOLVER) -> float:
    """Unique root of beta -> g(beta, 2*pi, 0), bisected under its upper bound."""
    root = cfg.root
    hi = beta_c_upper_bound(model, U)
    f = lambda b: g(model, U, b, TWO_PI, 0.0, cfg)
    g_hi = f(hi)
    if abs(g_hi) <= root.abs_tol:
        return hi
    if g_hi > 0:
        # cannot occur for in-scope models (the bound is rigorous); defensive
        while g_hi > 0:
            hi *= 2.0
            g_hi = f(hi)
    lo = 0.5 * hi
    g_lo = f(lo)
    halvings = 0
    while g_lo <= 0.0:
        lo *= 0.5
        halvings += 1
        if halvings > 200:
            raise BracketError("beta_c lower bracket failed")
        g_lo = f(lo)
    beta_c, _, _ = bisect(f, lo, hi, g_lo, g_hi, root.abs_tol, root.max_iter,
                          x_tol=1e-13 * max(1.0, hi))
    return beta_c


def solve_tau(model: DispersionModel, U: float, beta: float,
              cfg: SolverConfig = DEFAULT_SOLVER) -> float:
    """The unique tau in (pi, 2*pi) with g(beta, tau, 0) = 0, for beta < beta_c."""
    check_admissible(model, U)
    root = cfg.root
    f = lambda t: g(model, U, beta, t, 0.0, cfg)
    g_lo = f(math.pi)
    g_hi = f(TWO_PI)
    if g_hi <= 0.0:
        if abs(g_hi) <= root.classification_tol:
            return TWO_PI
        raise ValueError(f"beta={beta} is not inside (0, beta_c): g(beta, 2*pi, 0) < 0")
    if g_lo >= 0.0:
        raise BracketError("g(beta, pi, 0) >= 0 contradicts the admissibility gate")
    tau, _, _ = bisect(f, math.pi, TWO_PI, g_lo, g_hi, root.abs_tol,
                       root.max_iter, x_tol=1e-12)
    return tau


def canonical_time(t: float) -> tuple[float, dict]:
    """Reduce t to the representative in [0, 2*pi] with the same cos(t/2).

    g depends on t only through cos(t/2), hence is 4*pi-periodic and
    reflection symmetric about 2*pi.  Returns (t_hat, branch) with
    t = 4*pi*m + t_hat (reflected=False) or t = 4*pi*(m+1) - t_hat
    (reflected=True).
    """
    r = math.fmod(t, FOUR_PI)
    if r < 0:
        r += FOUR_PI
    if r <= TWO_PI:
        t_hat = r
        reflected = False
        m = round((t - t_hat) / FOUR_PI)
    else:
        t_hat = FOUR_PI - r
        reflected = True
        m = round((t + t_hat) / FOUR_PI) - 1
    return t_hat, {"period": m, "reflected": reflected}
