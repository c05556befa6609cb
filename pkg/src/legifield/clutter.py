"""Clutteredness of a scene from the divergence between the fitted object
position distribution and a uniform spread over the workspace.

Pipeline: fit a Gaussian to the object centers, take the divergence between
that fit and the uniform density 1/V on the workspace, then squash with
exp(-D) so the result lands in (0, 1].  1 means spread out, small values
mean bunched together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSceneError
from .scene import Scene, WorkspaceBounds

# Ridge added to the fitted variance (m^2); keeps the fit positive definite
# for collinear and duplicate-free-but-tight layouts.
VARIANCE_RIDGE = 1e-6


@dataclass(frozen=True, eq=False)
class GaussianFit:
    """Planar Gaussian over object centers (dimension fixed at 2)."""

    mean: np.ndarray          # (2,)
    covariance: np.ndarray    # (2, 2), symmetric positive definite
    dimension: int = 2

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(2)
        cov = np.asarray(self.covariance, dtype=float).reshape(2, 2)
        mean.flags.writeable = False
        cov.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)
        if not np.allclose(cov, cov.T):
            raise ValueError("covariance must be symmetric")
        if np.linalg.det(cov) <= 0 or cov[0, 0] <= 0:
            raise ValueError("covariance must be positive definite")


@dataclass(frozen=True, eq=False)
class ClutterResult:
    fit: GaussianFit
    entropy_p: float            # nats
    cross_entropy_pq: float     # nats
    divergence: float           # nats, clamped >= 0
    xi: float                   # exp(-divergence), in (0, 1]


def fit_gaussian(scene: Scene) -> GaussianFit:
    """Gaussian over the object centers.

    The covariance is isotropic: the per-axis sample variances (divisor N-1)
    are pooled into a single radial variance, plus VARIANCE_RIDGE.  Pooling
    keeps a straight row of objects from collapsing the fit along one axis,
    which would make any evenly spread line measure as maximally bunched.
    """
    if len(scene.objects) < 2:
        raise DegenerateSceneError(
            f"need >= 2 objects to fit a distribution, scene has {len(scene.objects)}")
    pos = scene.positions()
    mean = pos.mean(axis=0)
    var = pos.var(axis=0, ddof=1)
    radial = float(var.mean()) + VARIANCE_RIDGE
    return GaussianFit(mean=mean, covariance=radial * np.eye(2))


def differential_entropy(fit: GaussianFit) -> float:
    """Closed-form Gaussian entropy, 0.5 * ln((2*pi*e)^d * det(cov)), in nats."""
    det = float(np.linalg.det(fit.covariance))
    d = fit.dimension
    return 0.5 * math.log((2.0 * math.pi * math.e) ** d * det)


def cross_entropy_uniform(fit: GaussianFit, bounds: WorkspaceBounds) -> float:
    """Cross entropy of the fit against the uniform density on the workspace.

    With the fit truncated and renormalized to the workspace (where the
    uniform has density 1/V), the expectation of -ln(1/V) is ln V exactly.
    """
    return math.log(bounds.area)


def kl_divergence(fit: GaussianFit, bounds: WorkspaceBounds) -> float:
    """Divergence of the fit from the workspace uniform, clamped at 0.

    Uses the closed form ln V - h(fit); the clamp restores the nonnegativity
    the untruncated entropy approximation can lose when the fit spreads past
    the workspace.
    """
    return max(0.0, cross_entropy_uniform(fit, bounds) - differential_entropy(fit))


def clutteredness(scene: Scene) -> ClutterResult:
    """Fit, divergence and the normalized clutteredness xi = exp(-D)."""
    fit = fit_gaussian(scene)
    h_p = differential_entropy(fit)
    h_pq = cross_entropy_uniform(fit, scene.bounds)
    d = max(0.0, h_pq - h_p)
    return ClutterResult(fit=fit, entropy_p=h_p, cross_entropy_pq=h_pq,
                         divergence=d, xi=math.exp(-d))


def _grid_pdf(fit: GaussianFit, bounds: WorkspaceBounds, grid_n: int):
    """Gaussian density on the midpoints of a grid_n x grid_n workspace grid."""
    xs = np.linspace(bounds.x_min, bounds.x_max, grid_n + 1)
    ys = np.linspace(bounds.y_min, bounds.y_max, grid_n + 1)
    cx = 0.5 * (xs[:-1] + xs[1:])
    cy = 0.5 * (ys[:-1] + ys[1:])
    gx, gy = np.meshgrid(cx, cy, indexing="ij")
    diff = np.stack([gx - fit.mean[0], gy - fit.mean[1]], axis=-1)
    inv = np.linalg.inv(fit.covariance)
    det = np.linalg.det(fit.covariance)
    quad = np.einsum("...i,ij,...j->...", diff, inv, diff)
    pdf = np.exp(-0.5 * quad) / (2.0 * np.pi * np.sqrt(det))
    cell_area = (bounds.width / grid_n) * (bounds.height / grid_n)
    return pdf, cell_area


def gaussian_mass_in_bounds(fit: GaussianFit, bounds: WorkspaceBounds,
                            grid_n: int = 512) -> float:
    """Probability mass of the fit inside the workspace (midpoint Riemann sum)."""
    pdf, cell_area = _grid_pdf(fit, bounds, grid_n)
    return float(pdf.sum() * cell_area)


def kl_numeric_oracle(fit: GaussianFit, bounds: WorkspaceBounds,
                      grid_n: int = 512) -> float:
    """Grid-quadrature divergence of the truncated, renormalized fit vs uniform.

    Independent reference for `kl_divergence`: truncates the Gaussian to the
    workspace, renormalizes, and Riemann-sums p * ln(p/q) on a grid_n^2 grid.
    Test-only code path; O(grid_n^2).
    """
    if grid_n < 64:
        raise ValueError(f"grid_n={grid_n} too coarse, need >= 64")
    pdf, cell_area = _grid_pdf(fit, bounds, grid_n)
    mass = pdf.sum() * cell_area
    p = pdf / mass
    q = 1.0 / bounds.area
    ratio = np.where(p > 0, p / q, 1.0)  # p*ln(p/q) -> 0 as p -> 0
    return float(np.sum(p * np.log(ratio)) * cell_area)
