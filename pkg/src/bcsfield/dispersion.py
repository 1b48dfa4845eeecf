"""Dispersion relations E(k) on the momentum torus.

All bundled models are diagonal, so only eigenvalue access is exposed; the
matrix E(k) is never materialized because every formula downstream is a trace
of a scalar function of E (spectral calculus).  Eigenvalue magnitudes are
certified to lie in [e_min, e_max] with e_min > 0 (gapped dispersion).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class BZGeometry:
    """Brillouin-zone geometry: dual basis vectors and normalization D_d.

    dual_basis holds the vectors v_1..v_d as columns; the BZ is the torus
    spanned by 2*pi*v_j and D_d = |det(v_1,...,v_d)|^-1 (2*pi)^-d.
    """

    d: int
    dual_basis: np.ndarray

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be a positive integer")
        basis = np.asarray(self.dual_basis, dtype=float)
        if basis.shape != (self.d, self.d):
            raise ValueError("dual_basis must be a d x d matrix")
        if abs(np.linalg.det(basis)) < 1e-300:
            raise ValueError("dual_basis must be invertible")
        basis = basis.copy()
        basis.flags.writeable = False
        object.__setattr__(self, "dual_basis", basis)

    @property
    def D_d(self) -> float:
        return 1.0 / (abs(np.linalg.det(self.dual_basis)) * TWO_PI**self.d)

    @property
    def is_canonical(self) -> bool:
        return bool(np.array_equal(self.dual_basis, np.eye(self.d)))

    def to_dual(self, k):
        """Ambient momentum -> dual coordinates x with k = sum x_j v_j."""
        k = np.asarray(k, dtype=float)
        if k.shape != (self.d,):
            raise ValueError(f"momentum must be a {self.d}-vector, got shape {k.shape}")
        if self.is_canonical:
            return k
        return np.linalg.solve(self.dual_basis, k)


def canonical_geometry(d: int) -> BZGeometry:
    return BZGeometry(d, np.eye(d))


@dataclass(frozen=True)
class MeasureFractions:
    """Target normalized measures for the bump plateau (s) and support (t)."""

    s: float
    t: float

    def __post_init__(self):
        if not (0.0 < self.s < self.t < 1.0):
            raise ValueError("fractions must satisfy 0 < s < t < 1")


class DispersionModel:
    """Base class: a dispersion presented through its eigenvalue branches.

    Subclasses set kind, b, e_min, e_max, geometry, k_independent and
    implement eigs_dual(X) for X of shape (N, d) in dual coordinates
    (2*pi-periodic in each coordinate), returning shape (N, b).
    """

    kind: str
    b: int
    e_min: float
    e_max: float
    geometry: BZGeometry
    k_independent: bool

    def eigs_dual(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def eigenvalues(self, k) -> np.ndarray:
        """Ordered eigenvalues of E(k) for a single ambient momentum k."""
        x = self.geometry.to_dual(k)
        if not np.all(np.isfinite(x)):
            raise ValueError("momentum must be finite")
        return self.eigs_dual(x[np.newaxis, :])[0]


class ConstantDiagonal(DispersionModel):
    """E(k) = e * I_b, independent of k."""

    kind = "constant_diagonal"
    k_independent = True

    def __init__(self, b: int, e: float, geometry: BZGeometry | None = None):
        if b < 1:
            raise ValueError("orbital count must be positive")
        if e <= 0:
            raise ValueError("eigenvalue must be positive (gapped dispersion)")
        self.b = int(b)
        self.e = float(e)
        self.e_min = self.e_max = float(e)
        self.geometry = geometry if geometry is not None else canonical_geometry(1)

    def eigs_dual(self, X):
        return np.full((X.shape[0], self.b), self.e)


class MultiOrbitalDiagonal(DispersionModel):
    """E(k) = e_max * I_b' (+) e_min * I_(b-b'), independent of k."""

    kind = "multi_orbital_diagonal"
    k_independent = True

    def __init__(self, b: int, b_prime: int, e_min: float, e_max: float,
                 geometry: BZGeometry | None = None):
        if not (1 <= b_prime < b):
            raise ValueError("need 1 <= b' < b")
        if not (0 < e_min <= e_max):
            raise ValueError("need 0 < e_min <= e_max")
        self.b = int(b)
        self.b_prime = int(b_prime)
        self.e_min = float(e_min)
        self.e_max = float(e_max)
        self.geometry = geometry if geometry is not None else canonical_geometry(1)
        self._diag = np.concatenate([
            np.full(self.b_prime, self.e_max),
            np.full(self.b - self.b_prime, self.e_min),
        ])

    def eigs_dual(self, X):
        return np.broadcast_to(self._diag, (X.shape[0], self.b)).copy()


class Cosine1D(DispersionModel):
    """Single band E(k) = t_hop * (cos k + 1) + e_min on the 1-D torus."""

    kind = "cosine_1d"

    def __init__(self, t_hop: float, e_min: float, geometry: BZGeometry | None = None):
        if t_hop < 0:
            raise ValueError("hopping must be non-negative")
        if e_min <= 0:
            raise ValueError("e_min must be positive")
        self.b = 1
        self.t_hop = float(t_hop)
        self.e_min = float(e_min)
        self.e_max = float(e_min + 2.0 * t_hop)
        self.geometry = geometry if geometry is not None else canonical_geometry(1)
        if self.geometry.d != 1:
            raise ValueError("Cosine1D requires a 1-D geometry")
        self.k_independent = t_hop == 0.0

    def eigs_dual(self, X):
        return self.t_hop * (np.cos(X[:, 0:1]) + 1.0) + self.e_min


def _ramp(x: np.ndarray) -> np.ndarray:
    """Mollifier ramp exp(-1/x) for x > 0, 0 otherwise (C-infinity)."""
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


class BumpDispersion(DispersionModel):
    """Smooth scalar dispersion E(k) = Phi(k) * I_b with prescribed level sets.

    Phi is e_min plus a product of per-coordinate C-infinity plateau bumps of
    height (e_max - e_min)^(1/d), plateau radius pi*s^(1/d) and support radius
    pi*t^(1/d) around the BZ center pi, so that the normalized measure of
    {Phi = e_max} is s and of {Phi = e_min} is 1 - t.
    """

    kind = "bump"
    k_independent = False

    def __init__(self, d: int, b: int, fractions: MeasureFractions,
                 e_min: float, e_max: float, geometry: BZGeometry | None = None):
        if b < 1:
            raise ValueError("orbital count must be positive")
        if not (0 < e_min < e_max):
            raise ValueError("need 0 < e_min < e_max (degenerate plateau rejected)")
        self.b = int(b)
        self.d = int(d)
        self.fractions = fractions
        self.e_min = float(e_min)
        self.e_max = float(e_max)
        self.geometry = geometry if geometry is not None else canonical_geometry(d)
        if self.geometry.d != self.d:
            raise ValueError("geometry dimension mismatch")
        self.plateau_radius = math.pi * fractions.s ** (1.0 / d)
        self.support_radius = math.pi * fractions.t ** (1.0 / d)
        self._height = (e_max - e_min) ** (1.0 / d)

    def _phi(self, x: np.ndarray) -> np.ndarray:
        # distance from the BZ center pi, reduced periodically into [0, pi]
        u = np.abs(np.mod(x, TWO_PI) - math.pi)
        num = _ramp(self.support_radius - u)
        den = num + _ramp(u - self.plateau_radius)
        return self._height * num / den

    def eigs_dual(self, X):
        phi = np.prod(self._phi(X), axis=1) + self.e_min
        return np.broadcast_to(phi[:, np.newaxis], (X.shape[0], self.b)).copy()


def build_bump_dispersion(d: int, b: int, fractions: MeasureFractions,
                          e_min: float, e_max: float,
                          geometry: BZGeometry | None = None) -> BumpDispersion:
    """Construct the plateau-bump dispersion with target measure fractions."""
    return BumpDispersion(d, b, fractions, e_min, e_max, geometry)


def verify_bounds(model: DispersionModel, n_samples: int) -> tuple[float, float]:
    """Observed (min, max) eigenvalue magnitude over a uniform dual-coordinate grid."""
    d = model.geometry.d
    if n_samples < 2**d:
        raise ValueError("need at least 2^d samples")
    n_per = max(2, int(round(n_samples ** (1.0 / d))))
    axes = [np.linspace(0.0, TWO_PI, n_per, endpoint=False)] * d
    mesh = np.meshgrid(*axes, indexing="ij")
    X = np.stack([m.ravel() for m in mesh], axis=1)
    mags = np.abs(model.eigs_dual(X))
    return float(mags.min()), float(mags.max())
