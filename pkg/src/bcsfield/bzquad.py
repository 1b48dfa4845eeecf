"""Brillouin-zone trace integrals D_d * Int Tr f(E(k)) dk.

Uniform (trapezoidal) rule on the torus with grid doubling: for periodic
analytic integrands it converges geometrically and needs no endpoint
handling.  For k-independent models the integral collapses to the exact
finite sum over eigenvalues.  The D_d normalization cancels against the BZ
volume, so every result is the plain BZ average of Tr f(E(k)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dispersion import TWO_PI, DispersionModel


class QuadratureError(RuntimeError):
    """Grid doubling failed to converge; carries the last two estimates."""

    def __init__(self, message, last=None, previous=None):
        super().__init__(message)
        self.last = last
        self.previous = previous


@dataclass(frozen=True)
class QuadratureConfig:
    base_points_per_dim: int = 64
    abs_tol: float = 1e-11
    max_doublings: int = 18

    def __post_init__(self):
        if self.base_points_per_dim < 4:
            raise ValueError("base_points_per_dim must be at least 4")
        if self.abs_tol <= 0:
            raise ValueError("abs_tol must be positive")
        if self.max_doublings < 1:
            raise ValueError("max_doublings must be positive")


DEFAULT_QUAD = QuadratureConfig()


def _grid_estimate(model: DispersionModel, f, n: int, orbital) -> float:
    d = model.geometry.d
    axes = [np.arange(n) * (TWO_PI / n)] * d
    mesh = np.meshgrid(*axes, indexing="ij")
    X = np.stack([m.ravel() for m in mesh], axis=1)
    lam = model.eigs_dual(X)
    if orbital is not None:
        lam = lam[:, orbital:orbital + 1]
    # np.sum uses pairwise accumulation: deterministic for a fixed grid
    return float(np.sum(f(lam)) / lam.shape[0])


def trace_integral(model: DispersionModel, f, cfg: QuadratureConfig = DEFAULT_QUAD,
                   orbital: int | None = None) -> float:
    """D_d * Int Tr f(E(k)) dk, i.e. the BZ average of sum_rho f(lambda_rho(k)).

    f must accept numpy arrays elementwise.  With orbital given, only that
    eigenvalue branch contributes (no trace).
    """
    if orbital is not None and not (0 <= orbital < model.b):
        raise ValueError("orbital index out of range")
    if model.k_independent:
        lam = model.eigs_dual(np.zeros((1, model.geometry.d)))[0]
        if orbital is not None:
            lam = lam[orbital:orbital + 1]
        return float(np.sum(f(lam)))
    n = cfg.base_points_per_dim
    prev = _grid_estimate(model, f, n, orbital)
    cur = prev
    for _ in range(cfg.max_doublings):
        n *= 2
        cur = _grid_estimate(model, f, n, orbital)
        # allow a machine-precision floor: the pairwise grid sum carries a
        # relative rounding error, so large-magnitude integrals cannot settle
        # below ~eps*|I| no matter how fine the grid
        if abs(cur - prev) < cfg.abs_tol + 8.0 * np.finfo(float).eps * abs(cur):
            return cur
        prev, older = cur, prev
    raise QuadratureError(
        f"quadrature did not converge to {cfg.abs_tol:g} after "
        f"{cfg.max_doublings} doublings (last two estimates "
        f"{older!r}, {cur!r})", last=cur, previous=older)
