"""Free energy density F(beta, t), its C^1 structure, jumps, order parameters.

F(beta, t) = Delta^2/|U| - (D_d/beta) * Int Tr log(2 cos(t/2) e^{-beta E}
             + e^{beta(sqrt(E^2+Delta^2)-E)} + e^{-beta(sqrt(E^2+Delta^2)+E)}) dk

with Delta = Delta(beta, t) the gap solution.  The auxiliary function

F_hat(x, t, z) = z^2/|U| - (D_d/x) * Int Tr log(cos(t/2) + cosh(x sqrt(E^2+z^2))) dk

differs from F (at z = Delta) only by the affine term
D_d Int Tr E dk - (b/beta) log 2, and satisfies dF_hat/dz = -z * g(x, t, z),
so the gap equation is exactly the stationarity condition.  First derivatives
of F therefore reduce to partial derivatives of F_hat in its (x, t) slots
(envelope property); second derivatives jump across the phase boundary by

    jump d2F/dt2    = (dg/dt)^2 / L,    jump d2F/dbeta2 = (dg/dx)^2 / L,

where L < 0 is the z -> 0 limit density of (1/z) dg/dz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bzquad import trace_integral
from .dispersion import DispersionModel
from .gapcore import (
    DEFAULT_SOLVER,
    Regime,
    SolverConfig,
    dg_dt,
    dg_dx,
    dg_dz,
    g,
    inv_f0,
    log_f0,
    ratio_sinh,
    sin_half,
    solve_delta,
    solve_tau,
)

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class FreeEnergyPoint:
    F: float
    dF_dbeta: float
    dF_dt: float
    regime: Regime
    delta: float


@dataclass(frozen=True)
class JumpReport:
    """Second-derivative jumps (Q+ side minus Q- side) at a boundary point."""

    location: tuple[float, float]
    jump_d2F_dbeta2: float
    jump_d2F_dt2: float
    analytic_jump_dbeta2: float
    analytic_jump_dt2: float


def _resolve_time(beta: float, theta, t):
    if (theta is None) == (t is None):
        raise ValueError("provide exactly one of theta or t")
    return beta * theta if t is None else t


def free_energy(model: DispersionModel, U: float, beta: float, t: float,
                cfg: SolverConfig = DEFAULT_SOLVER, delta: float | None = None) -> float:
    """F(beta, t); delta may be passed to skip the gap solve."""
    if delta is None:
        delta = solve_delta(model, U, beta, t, cfg).delta
    c = math.cos(0.5 * t)

    def integrand(lam):
        S = np.sqrt(lam * lam + delta * delta)
        u = np.exp(-beta * S)
        # log of 2c e^{-beta lam} + e^{beta(S-lam)} + e^{-beta(S+lam)},
        # factored through e^{beta(S-lam)} to avoid overflow
        return beta * (S - lam) + np.log(1.0 + u * u + 2.0 * c * u)

    return delta * delta / abs(U) - trace_integral(model, integrand, cfg.quad) / beta


def f_hat(model: DispersionModel, U: float, x: float, t: float, z: float,
          cfg: SolverConfig = DEFAULT_SOLVER) -> float:
    """F_hat(x, t, z) = z^2/|U| - (D_d/x) Int Tr log(cos(t/2) + cosh(x S)) dk."""
    if not x > 0:
        raise ValueError("x must be positive")
    c = math.cos(0.5 * t)

    def integrand(lam):
        S = np.sqrt(lam * lam + z * z)
        return log_f0(x * S, c)

    return z * z / abs(U) - trace_integral(model, integrand, cfg.quad) / x


def _f_hat_dx(model, U, x, t, z, cfg):
    c = math.cos(0.5 * t)

    def log_part(lam):
        S = np.sqrt(lam * lam + z * z)
        return log_f0(x * S, c)

    def sinh_part(lam):
        S = np.sqrt(lam * lam + z * z)
        return S * ratio_sinh(x * S, c)

    return (trace_integral(model, log_part, cfg.quad) / (x * x)
            - trace_integral(model, sinh_part, cfg.quad) / x)


def _f_hat_dt(model, U, x, t, z, cfg):
    sn = sin_half(t)
    if sn == 0.0:
        return 0.0
    c = math.cos(0.5 * t)

    def integrand(lam):
        S = np.sqrt(lam * lam + z * z)
        return inv_f0(x * S, c)

    return 0.5 * sn * trace_integral(model, integrand, cfg.quad) / x


def first_derivatives(model: DispersionModel, U: float, beta: float, t: float,
                      cfg: SolverConfig = DEFAULT_SOLVER,
                      delta: float | None = None) -> tuple[float, float]:
    """(dF/dbeta, dF/dt) via the envelope property; valid in Q+, Q- and on Q0.

    dF/dbeta = dF_hat/dx(beta, t, Delta) + b log(2)/beta^2, the last term being
    the beta-derivative of the affine gap between F and F_hat.
    """
    if delta is None:
        delta = solve_delta(model, U, beta, t, cfg).delta
    dF_db = _f_hat_dx(model, U, beta, t, delta, cfg) + model.b * LOG2 / (beta * beta)
    dF_dt = _f_hat_dt(model, U, beta, t, delta, cfg)
    return dF_db, dF_dt


def free_energy_point(model: DispersionModel, U: float, beta: float,
                      theta: float | None = None,
                      cfg: SolverConfig = DEFAULT_SOLVER, *,
                      t: float | None = None) -> FreeEnergyPoint:
    t = _resolve_time(beta, theta, t)
    res = solve_delta(model, U, beta, t, cfg)
    F = free_energy(model, U, beta, t, cfg, delta=res.delta)
    dF_db, dF_dt = first_derivatives(model, U, beta, t, cfg, delta=res.delta)
    return FreeEnergyPoint(F, dF_db, dF_dt, res.regime, res.delta)


def second_derivative_jumps(model: DispersionModel, U: float, beta0: float,
                            cfg: SolverConfig = DEFAULT_SOLVER,
                            h_t: float = 1e-3,
                            h_beta: float | None = None) -> JumpReport:
    """Jump report at the boundary point (beta0, tau(beta0)).

    analytic_* use the exact Delta -> 0 limit formulas; jump_* are one-sided
    three-point finite-difference stencils applied to the analytic first
    derivatives (Q+ side minus Q- side in both).
    """
    tau = solve_tau(model, U, beta0, cfg)
    gt = dg_dt(model, U, beta0, tau, 0.0, cfg)
    gx = dg_dx(model, U, beta0, tau, 0.0, cfg)
    L = dg_dz(model, U, beta0, tau, 0.0, cfg, at_zero="limit")
    analytic_t = gt * gt / L
    analytic_b = gx * gx / L

    if h_beta is None:
        h_beta = max(1e-4, 1e-3 * beta0)
        h_beta = min(h_beta, 0.25 * beta0)

    def dFdt_at(tv):
        return first_derivatives(model, U, beta0, tv, cfg)[1]

    def dFdb_at(bv):
        return first_derivatives(model, U, bv, tau, cfg)[0]

    def one_sided(fun, x0, h):
        # O(h^2) derivative of fun at x0 using x0, x0+h, x0+2h (h signed)
        f0, f1, f2 = fun(x0), fun(x0 + h), fun(x0 + 2.0 * h)
        return (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h)

    # in t, the ordered phase Q+ lies above tau (g increases with t on (pi, 2pi))
    jump_t = one_sided(dFdt_at, tau, h_t) - one_sided(dFdt_at, tau, -h_t)

    # in beta, identify the Q+ side by the sign of g just off the boundary
    plus_up = g(model, U, beta0 + h_beta, tau, 0.0, cfg) > 0
    d2_up = one_sided(dFdb_at, beta0, h_beta)
    d2_dn = one_sided(dFdb_at, beta0, -h_beta)
    jump_b = (d2_up - d2_dn) if plus_up else (d2_dn - d2_up)

    return JumpReport((beta0, tau), jump_b, jump_t, analytic_b, analytic_t)


def ssb_order(model: DispersionModel, U: float, beta: float,
              theta: float | None = None, rho: int = 0,
              cfg: SolverConfig = DEFAULT_SOLVER, *,
              t: float | None = None) -> float:
    """Spontaneous-symmetry-breaking order parameter for orbital rho.

    -(Delta/2) * D_d Int G(rho, rho) dk with the kernel
    G = sinh(beta S)/((cos(t/2) + cosh(beta S)) S), S = sqrt(lambda^2 + Delta^2);
    zero whenever Delta = 0.
    """
    t = _resolve_time(beta, theta, t)
    delta = solve_delta(model, U, beta, t, cfg).delta
    if delta == 0.0:
        return 0.0
    return -0.5 * delta * _g_kernel_integral(model, beta, t, delta, rho, cfg)


def _g_kernel_integral(model, beta, t, delta, rho, cfg):
    c = math.cos(0.5 * t)

    def integrand(lam):
        S = np.sqrt(lam * lam + delta * delta)
        return ratio_sinh(beta * S, c) / S

    return trace_integral(model, integrand, cfg.quad, orbital=rho)


def odlro_and_density(model: DispersionModel, U: float, beta: float,
                      theta: float | None = None, rho: int = 0, eta: int = 0,
                      cfg: SolverConfig = DEFAULT_SOLVER, *,
                      t: float | None = None) -> tuple[float, float]:
    """(ODLRO for the orbital pair (rho, eta), Cooper-pair density Delta^2/U^2).

    ODLRO = Delta^2 * prod over the two orbitals of (D_d/2) Int G(rho, rho) dk.
    On Q- both vanish; exactly on Q0 the limit statement differs, so the
    input is rejected.
    """
    t = _resolve_time(beta, theta, t)
    res = solve_delta(model, U, beta, t, cfg)
    if res.regime is Regime.QZero:
        raise ValueError("(beta, t) lies on the phase boundary Q0; "
                         "the ODLRO formula does not apply there")
    if res.regime is Regime.QMinus:
        return 0.0, 0.0
    delta = res.delta
    odlro = delta * delta
    for orb in (rho, eta):
        odlro *= 0.5 * _g_kernel_integral(model, beta, t, delta, orb, cfg)
    return odlro, delta * delta / (U * U)
