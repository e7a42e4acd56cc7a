"""Quadrature grids, the Jacobi transform pair, and the heat semigroup.

Functions cross module boundaries as samples on explicit grids, never as
closures; the dense phi_lambda(t) matrix for a (radial, spectral) grid pair
is built once and cached per parameter set.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from ._util import composite_gauss_legendre, graded_breakpoints
from .core import JacobiParameters, phi_matrix, plancherel_density, weight_density
from .errors import DecayError, DomainError, GridError, JacobiLabError

__all__ = [
    "RadialGrid",
    "SpectralGrid",
    "SampledRadialFunction",
    "SampledSpectralFunction",
    "default_grids",
    "forward_constant",
    "plancherel_constant",
    "jacobi_transform",
    "inverse_transform",
    "plancherel_defect",
    "heat_kernel",
    "apply_laplacian",
]

_TOKENS = itertools.count()
_DECAY_FRACTION = 1e-10


def _barycentric_weights(x):
    n = len(x)
    w = np.ones(n)
    for i in range(n):
        for j in range(n):
            if i != j:
                w[i] /= x[i] - x[j]
    return w


def _differentiation_matrix(x):
    """First-derivative collocation matrix on the nodes x (exact for degree < len(x))."""
    w = _barycentric_weights(x)
    n = len(x)
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                d[i, j] = (w[j] / w[i]) / (x[i] - x[j])
        d[i, i] = -np.sum(d[i])
    return d


class _PanelGrid:
    """Shared machinery for composite-GL grids: interpolation, differentiation."""

    def __init__(self, nodes, base_weights, slices, upper, scheme):
        self.nodes = nodes
        self.base_weights = base_weights
        self.panel_slices = slices
        self.upper = float(upper)
        self.scheme = scheme
        self.token = next(_TOKENS)
        self._panel_edges = None

    def _edges(self):
        if self._panel_edges is None:
            # midpoints between adjacent panels' extreme nodes serve as cut points
            edges = [0.0]
            for sl_a, sl_b in zip(self.panel_slices[:-1], self.panel_slices[1:]):
                edges.append(0.5 * (self.nodes[sl_a][-1] + self.nodes[sl_b][0]))
            edges.append(self.upper)
            self._panel_edges = np.asarray(edges)
        return self._panel_edges

    def interpolate(self, values, z):
        """Panel-wise barycentric interpolation of sampled values at points z."""
        z = np.atleast_1d(np.asarray(z, dtype=float))
        if np.any(z < 0.0) or np.any(z > self.upper * (1 + 1e-12)):
            raise DomainError("interpolation point outside the grid range")
        out = np.empty(z.shape, dtype=complex)
        idx = np.clip(np.searchsorted(self._edges(), z) - 1, 0, len(self.panel_slices) - 1)
        for k in np.unique(idx):
            sl = self.panel_slices[k]
            x = self.nodes[sl]
            v = values[sl]
            w = _barycentric_weights(x)
            zz = z[idx == k]
            diff = zz[:, None] - x[None, :]
            exact = np.isclose(diff, 0.0, atol=1e-300)
            diff[exact] = 1.0
            num = (w[None, :] / diff) @ v
            den = np.sum(w[None, :] / diff, axis=1)
            res = num / den
            hit_rows, hit_cols = np.nonzero(exact)
            res[hit_rows] = v[hit_cols]
            out[idx == k] = res
        return out

    def derivatives(self, values):
        """(f', f'') at every node by per-panel polynomial differentiation."""
        d1 = np.empty_like(values, dtype=complex)
        d2 = np.empty_like(values, dtype=complex)
        for sl in self.panel_slices:
            d = _differentiation_matrix(self.nodes[sl])
            d1[sl] = d @ values[sl]
            d2[sl] = d @ d1[sl]
        return d1, d2


class RadialGrid(_PanelGrid):
    """Graded composite-GL grid on (0, T_max] with dmu quadrature weights."""

    def __init__(self, params: JacobiParameters, nodes, base_weights, slices, t_max, scheme):
        super().__init__(nodes, base_weights, slices, t_max, scheme)
        self.params = params
        self.t_max = float(t_max)
        self.mu_weights = base_weights * weight_density(params, nodes)

    @classmethod
    def graded(cls, params, t_max=20.0, n_panels=400, nodes_per_panel=8, exponent=2.0):
        bp = graded_breakpoints(t_max, n_panels, exponent)
        nodes, weights, slices = composite_gauss_legendre(bp, nodes_per_panel)
        return cls(params, nodes, weights, slices, t_max, "graded-gauss")

    @classmethod
    def uniform_trapezoid(cls, params, t_max, n):
        # open rule: nodes at (i+1/2)h so the t=0 endpoint is never touched
        h = t_max / n
        nodes = (np.arange(n) + 0.5) * h
        weights = np.full(n, h)
        slices = [slice(0, n)]
        return cls(params, nodes, weights, slices, t_max, "uniform-trapezoid")


def forward_constant(params) -> float:
    """Normalization of the forward transform, f_hat = const * integral f phi dmu.

    Fixed at 1: this is the unique choice for which the hypergroup
    convolution is simultaneously an algebra homomorphism under the transform
    and contractive in the Young inequality.  See the decisions ledger.
    """
    return 1.0


def plancherel_constant(params) -> float:
    """Constant C with dnu = C |c(lambda)|^(-2) dlambda.

    Chosen so that the transform pair with unit forward normalization is
    exactly unitary L2(dmu) -> L2(dnu); the unitarity condition is
    forward_constant^2 * C = 1/(2 pi).
    """
    return 1.0 / (2.0 * math.pi)


class SpectralGrid(_PanelGrid):
    """Composite-GL grid on (0, Lambda_max] with dnu quadrature weights."""

    def __init__(self, params: JacobiParameters, nodes, base_weights, slices, lam_max):
        super().__init__(nodes, base_weights, slices, lam_max, "gauss")
        self.params = params
        self.lam_max = float(lam_max)
        self.density = plancherel_density(params, nodes)
        self.nu_weights = base_weights * self.density * plancherel_constant(params)
        # The inverse transform is the adjoint of the forward one, which
        # carries the forward normalization on top of the dnu density.
        self.inverse_weights = self.nu_weights * forward_constant(params)

    @classmethod
    def build(cls, params, lam_max=50.0, n_panels=300, nodes_per_panel=4):
        bp = np.linspace(0.0, lam_max, n_panels + 1)
        nodes, weights, slices = composite_gauss_legendre(bp, nodes_per_panel)
        return cls(params, nodes, weights, slices, lam_max)


@dataclass
class SampledRadialFunction:
    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != self.grid.nodes.shape:
            raise GridError("value array does not match the grid")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("non-finite sample values")

    def norm(self, p):
        return _lp_norm(self.values, self.grid.mu_weights, p)

    def at(self, z):
        return self.grid.interpolate(self.values, z)


@dataclass
class SampledSpectralFunction:
    grid: SpectralGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != self.grid.nodes.shape:
            raise GridError("value array does not match the grid")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("non-finite sample values")

    def norm(self, p):
        return _lp_norm(self.values, self.grid.nu_weights, p)


def _lp_norm(values, weights, p):
    if p == math.inf:
        return float(np.max(np.abs(values)))
    if p < 1:
        raise DomainError("p must be >= 1")
    return float(np.sum(weights * np.abs(values) ** p) ** (1.0 / p))


def default_grids(params, t_max=20.0, radial_panels=400, lam_max=50.0, spectral_panels=300):
    return (
        RadialGrid.graded(params, t_max, radial_panels),
        SpectralGrid.build(params, lam_max, spectral_panels),
    )


_PHI_CACHE: dict = {}


def phi_matrix_for(params, rgrid: RadialGrid, sgrid: SpectralGrid):
    key = (params, rgrid.token, sgrid.token)
    if key not in _PHI_CACHE:
        _PHI_CACHE[key] = phi_matrix(params, rgrid.nodes, sgrid.nodes)
    return _PHI_CACHE[key]


def _check_decay(values, weights_mask_size, what, fraction=_DECAY_FRACTION):
    peak = float(np.max(np.abs(values)))
    if peak == 0.0:
        return
    tail = float(np.max(np.abs(values[-weights_mask_size:])))
    if tail >= fraction * peak:
        raise DecayError(
            f"{what} has not decayed at the end of its grid "
            f"(tail {tail:.3e} vs {peak:.3e} peak)"
        )


def jacobi_transform(params, f: SampledRadialFunction, sgrid: SpectralGrid, check=True, decay_fraction=_DECAY_FRACTION) -> SampledSpectralFunction:
    """Forward transform: f_hat(lambda) = sqrt(pi)/Gamma(alpha+1) * integral f phi dmu."""
    if check:
        _check_decay(f.values, _tail_count(f.grid), "radial function", decay_fraction)
    phi = phi_matrix_for(params, f.grid, sgrid)
    vals = forward_constant(params) * (phi.T @ (f.values * f.grid.mu_weights))
    return SampledSpectralFunction(sgrid, vals)


def inverse_transform(params, g: SampledSpectralFunction, rgrid: RadialGrid, check=True, decay_fraction=_DECAY_FRACTION) -> SampledRadialFunction:
    """Inverse transform: f(t) = integral g(lambda) phi_lambda(t) dnu(lambda).

    check=False skips the tail gate; used internally on spectra that are
    re-computed from already-validated radial samples, whose tails sit at the
    quadrature noise floor rather than at true spectral content.
    """
    if check:
        _check_decay(g.values, _tail_count(g.grid), "spectral function", decay_fraction)
    phi = phi_matrix_for(params, rgrid, g.grid)
    vals = phi @ (g.values * g.grid.inverse_weights)
    return SampledRadialFunction(rgrid, vals)


def _tail_count(grid):
    return max(len(grid.nodes[grid.panel_slices[-1]]), 4)


def plancherel_defect(params, f: SampledRadialFunction, sgrid: SpectralGrid) -> float:
    """| ||f||_L2(dmu) - ||f_hat||_L2(dnu) | / ||f||_L2(dmu)."""
    n_f = f.norm(2)
    if n_f == 0.0:
        raise DomainError("plancherel_defect of the zero function")
    n_hat = jacobi_transform(params, f, sgrid).norm(2)
    return abs(n_f - n_hat) / n_f


def heat_kernel(params, s, rgrid: RadialGrid, sgrid: SpectralGrid) -> SampledRadialFunction:
    """h_s = inverse transform of lambda -> exp(-s (lambda^2 + rho^2))."""
    if not s > 0.0:
        raise DomainError("heat_kernel requires s > 0")
    with np.errstate(under="ignore"):
        spectral = np.exp(-s * (sgrid.nodes**2 + params.rho**2))
    return inverse_transform(params, SampledSpectralFunction(sgrid, spectral), rgrid)


def apply_laplacian(params, f: SampledRadialFunction) -> SampledRadialFunction:
    """Jacobi Laplacian f'' + ((2a+1) coth t + (2b+1) tanh t) f' on the grid."""
    if len(f.grid.nodes) < 16:
        raise GridError("apply_laplacian needs at least 16 nodes")
    t = f.grid.nodes
    if f.grid.scheme == "graded-gauss":
        d1, d2 = f.grid.derivatives(f.values)
    else:
        d1 = np.gradient(f.values, t)
        d2 = np.gradient(d1, t)
    drift = (2.0 * params.alpha + 1.0) / np.tanh(t) + (2.0 * params.beta + 1.0) * np.tanh(t)
    return SampledRadialFunction(f.grid, d2 + drift * d1)
