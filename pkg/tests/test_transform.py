import math

import numpy as np
import pytest

from jacobilab import (
    DecayError,
    DomainError,
    GridError,
    RadialGrid,
    SampledRadialFunction,
    SampledSpectralFunction,
    SpectralGrid,
    apply_laplacian,
    forward_constant,
    heat_kernel,
    inverse_transform,
    jacobi_transform,
    plancherel_constant,
    plancherel_defect,
)


def gaussian_bump(rgrid, center=1.0, width=0.5):
    # symmetrized so the even radial extension is smooth through t = 0
    t = rgrid.nodes
    vals = np.exp(-((t - center) ** 2) / width**2) + np.exp(
        -((t + center) ** 2) / width**2
    )
    return SampledRadialFunction(rgrid, vals)


class TestGrids:
    def test_graded_grid_integrates_smooth_functions(self, generic_params):
        rgrid = RadialGrid.graded(generic_params, 10.0, 100)
        # integral of exp(-t) over (0, 10) against plain dt
        got = float(np.sum(rgrid.base_weights * np.exp(-rgrid.nodes)))
        assert got == pytest.approx(1.0 - math.exp(-10.0), rel=1e-12)

    def test_mu_weights_carry_density(self, generic_params):
        rgrid = RadialGrid.graded(generic_params, 5.0, 50)
        from jacobilab import weight_density

        expected = rgrid.base_weights * weight_density(generic_params, rgrid.nodes)
        assert np.allclose(rgrid.mu_weights, expected, rtol=1e-14)

    def test_interpolation_reproduces_samples(self, generic_params, small_grids):
        rgrid, _ = small_grids
        f = gaussian_bump(rgrid)
        probes = np.array([0.5, 1.0, 2.3, 7.9])
        vals = f.at(probes)
        expected = np.exp(-((probes - 1.0) ** 2) / 0.25) + np.exp(
            -((probes + 1.0) ** 2) / 0.25
        )
        assert np.max(np.abs(vals - expected)) < 1e-10

    def test_interpolation_domain_guard(self, generic_params, small_grids):
        rgrid, _ = small_grids
        f = gaussian_bump(rgrid)
        with pytest.raises(DomainError):
            f.at(rgrid.t_max + 1.0)

    def test_value_shape_mismatch(self, generic_params, small_grids):
        rgrid, _ = small_grids
        with pytest.raises(GridError):
            SampledRadialFunction(rgrid, np.ones(3))

    def test_non_finite_samples_rejected(self, generic_params, small_grids):
        rgrid, _ = small_grids
        vals = np.ones_like(rgrid.nodes)
        vals[0] = math.inf
        with pytest.raises(DomainError):
            SampledRadialFunction(rgrid, vals)


class TestNorms:
    def test_lp_norm_scaling(self, generic_params, small_grids):
        rgrid, _ = small_grids
        f = gaussian_bump(rgrid)
        g = SampledRadialFunction(rgrid, 3.0 * f.values)
        for p in (1, 2, 4, math.inf):
            assert g.norm(p) == pytest.approx(3.0 * f.norm(p), rel=1e-12)

    def test_invalid_p(self, generic_params, small_grids):
        rgrid, _ = small_grids
        with pytest.raises(DomainError):
            gaussian_bump(rgrid).norm(0.5)


class TestTransformPair:
    def test_plancherel_identity(self, generic_params, grids):
        rgrid, sgrid = grids
        f = gaussian_bump(rgrid)
        assert plancherel_defect(generic_params, f, sgrid) < 1e-10

    def test_roundtrip(self, generic_params, grids):
        rgrid, sgrid = grids
        f = gaussian_bump(rgrid)
        fhat = jacobi_transform(generic_params, f, sgrid)
        back = inverse_transform(generic_params, fhat, rgrid, check=False)
        assert np.max(np.abs(back.values - f.values)) < 1e-9

    def test_constants(self, generic_params):
        # unitarity requires forward_constant^2 * plancherel_constant = 1/(2 pi)
        kappa = forward_constant(generic_params)
        const = plancherel_constant(generic_params)
        assert kappa**2 * const == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-14)
        assert kappa == 1.0

    def test_decay_gate_forward(self, generic_params, small_grids):
        rgrid, sgrid = small_grids
        undecayed = SampledRadialFunction(rgrid, np.ones_like(rgrid.nodes))
        with pytest.raises(DecayError):
            jacobi_transform(generic_params, undecayed, sgrid)

    def test_decay_gate_inverse(self, generic_params, small_grids):
        rgrid, sgrid = small_grids
        undecayed = SampledSpectralFunction(sgrid, np.ones_like(sgrid.nodes))
        with pytest.raises(DecayError):
            inverse_transform(generic_params, undecayed, rgrid)

    def test_decay_gate_escape_hatch(self, generic_params, small_grids):
        rgrid, sgrid = small_grids
        undecayed = SampledSpectralFunction(sgrid, np.ones_like(sgrid.nodes))
        inverse_transform(generic_params, undecayed, rgrid, check=False)

    def test_zero_function_defect_guard(self, generic_params, small_grids):
        rgrid, sgrid = small_grids
        zero = SampledRadialFunction(rgrid, np.zeros_like(rgrid.nodes))
        with pytest.raises(DomainError):
            plancherel_defect(generic_params, zero, sgrid)


class TestHeatKernel:
    def test_spectral_consistency(self, generic_params, grids):
        # forward transform of h_s recovers exp(-s(lam^2 + rho^2))
        rgrid, sgrid = grids
        s = 0.1
        h = heat_kernel(generic_params, s, rgrid, sgrid)
        hhat = jacobi_transform(generic_params, h, sgrid, check=False)
        lam = sgrid.nodes[sgrid.nodes < 20.0]
        expected = np.exp(-s * (lam**2 + generic_params.rho**2))
        got = hhat.values.real[sgrid.nodes < 20.0]
        assert np.max(np.abs(got - expected)) < 1e-10

    def test_positivity(self, generic_params, grids):
        rgrid, sgrid = grids
        h = heat_kernel(generic_params, 0.05, rgrid, sgrid)
        assert np.min(h.values.real) > -1e-10 * np.max(h.values.real)

    def test_requires_positive_time(self, generic_params, grids):
        rgrid, sgrid = grids
        with pytest.raises(DomainError):
            heat_kernel(generic_params, 0.0, rgrid, sgrid)


class TestLaplacian:
    def test_eigenfunction_relation(self, generic_params, grids):
        rgrid, sgrid = grids
        lam = 2.0
        from jacobilab import phi_matrix

        phi = phi_matrix(generic_params, rgrid.nodes, np.array([lam]))[:, 0]
        f = SampledRadialFunction(rgrid, phi)
        lap = apply_laplacian(generic_params, f)
        expected = -(lam**2 + generic_params.rho**2) * phi
        # compare away from the panel ends of the graded grid's first cells
        mask = (rgrid.nodes > 0.5) & (rgrid.nodes < 10.0)
        err = np.max(np.abs(lap.values[mask] - expected[mask]))
        assert err < 1e-3

    def test_minimum_size_guard(self, generic_params):
        rgrid = RadialGrid.uniform_trapezoid(generic_params, 5.0, 8)
        f = SampledRadialFunction(rgrid, np.ones(8))
        with pytest.raises(GridError):
            apply_laplacian(generic_params, f)
