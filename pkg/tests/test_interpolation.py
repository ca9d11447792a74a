"""Collocation interpolation: assembly, solving, and error reporting.

Frozen oracles used below:

- gaussian(alpha=1) on the integer lattice assembles the Toeplitz matrix
  ``exp(-(j-k)^2)``; sinc on the lattice assembles the identity, so the
  solve returns the data unchanged and the condition estimate is 1.
- Data sampled from a single kernel translate must solve to a unit
  coefficient vector (uniqueness of the interpolant from a fixed window).
- For data sampled from a space member, the solved coefficient size obeys
  ``||a|| <= C_W^4 (sup_cell0/delta + C_W^2 C_phi) ||data||`` with raw
  window constants and tail-honest kernel constants.
- Mollifying a generator (convolving with a sharpening approximate
  identity) gives an interpolant family whose error against a member of the
  generator's space decreases as the mollifier sharpens, since the
  convolution approaches the generator itself.
"""

import numpy as np
import pytest

from qsispace.errors import SolvabilityError, UsageError
from qsispace.fourier import LineGrid
from qsispace.interpolation import (
    CollocationSystem,
    assemble,
    comparison_csv,
    interpolate,
    residual_report,
    solve,
)
from qsispace.kernels import convolve, make_kernel, regularity_report
from qsispace.nodes import make_nodes, riesz_estimate
from qsispace.space import QsisFunction, evaluate, random_function, sample


class TestAssemble:
    def test_gaussian_lattice_is_toeplitz(self):
        nodes = make_nodes("lattice", half_width=4)
        system = assemble(make_kernel("gaussian", 1.0), nodes)
        diff = nodes.x[:, None] - nodes.x[None, :]
        expected = np.exp(-diff**2)
        assert np.allclose(system.matrix, expected, rtol=1e-15, atol=0.0)
        assert system.rhs is None
        assert system.size == 9

    def test_sinc_lattice_is_identity(self):
        nodes = make_nodes("lattice", half_width=6)
        system = assemble(make_kernel("sinc"), nodes)
        assert np.allclose(system.matrix, np.eye(13), atol=1e-14)
        assert np.all(np.diag(system.matrix) == 1.0)

    @pytest.mark.parametrize("name,alpha", [
        ("gaussian", 1.0),
        ("poisson", 2.0),
        ("inverse-multiquadric", 2.5),
        ("triangle-spectrum", None),
        ("gaussian-ai", None),
        ("dilated-gaussian-ai", 3.0),
    ])
    def test_symmetry_is_exact(self, name, alpha):
        nodes = make_nodes("kadec-alternating:0.17", half_width=5)
        system = assemble(make_kernel(name, alpha), nodes)
        assert np.array_equal(system.matrix, system.matrix.T)
        assert np.all(np.isfinite(system.matrix))

    @pytest.mark.parametrize("name,alpha", [
        ("sinc", None),
        ("gaussian", 1.0),
        ("poisson", 2.0),
        ("inverse-multiquadric", 2.5),
        ("triangle-spectrum", None),
        ("dilated-gaussian-ai", 2.0),
    ])
    def test_positive_definite_on_wide_window(self, name, alpha):
        nodes = make_nodes("kadec-alternating:0.2", half_width=24)
        system = assemble(make_kernel(name, alpha), nodes)
        smallest = np.linalg.eigvalsh(system.matrix)[0]
        assert smallest > 0.0

    def test_matrix_readonly_and_with_rhs(self):
        nodes = make_nodes("lattice", half_width=3)
        system = assemble(make_kernel("gaussian", 1.0), nodes)
        assert not system.matrix.flags.writeable
        loaded = system.with_rhs(np.arange(7.0))
        assert loaded.rhs is not None
        assert np.array_equal(loaded.rhs, np.arange(7.0))
        assert system.rhs is None
        with pytest.raises(UsageError):
            system.with_rhs(np.arange(6.0))
        with pytest.raises(UsageError):
            system.with_rhs(np.arange(7.0) * 1j)
        with pytest.raises(UsageError):
            system.with_rhs([np.nan] * 7)

    def test_asymmetric_matrix_rejected(self):
        nodes = make_nodes("lattice", half_width=1)
        bad = np.array([[1.0, 0.2, 0.0], [0.3, 1.0, 0.2], [0.0, 0.2, 1.0]])
        with pytest.raises(UsageError):
            CollocationSystem(make_kernel("gaussian", 1.0), nodes, bad)


class TestSolve:
    def test_sinc_lattice_returns_data(self):
        nodes = make_nodes("lattice", half_width=6)
        system = assemble(make_kernel("sinc"), nodes)
        rng = np.random.default_rng(3)
        data = rng.standard_normal(13)
        result = solve(system.with_rhs(data))
        assert np.allclose(result.coefficients, data, atol=1e-13)
        assert 1.0 <= result.kappa < 1.0 + 1e-9
        assert result.residual < 1e-13

    def test_translate_data_gives_unit_vector(self):
        nodes = make_nodes("kadec-alternating:0.2", half_width=8)
        kernel = make_kernel("gaussian", 1.0)
        pick = 5
        data = kernel.eval_space(nodes.x - nodes.x[pick])
        result = solve(assemble(kernel, nodes, rhs=data))
        expected = np.zeros(len(nodes))
        expected[pick] = 1.0
        assert np.allclose(result.coefficients, expected, atol=1e-10)

    def test_random_data_residual_wide_gaussian_window(self):
        nodes = make_nodes("lattice", half_width=24)
        rng = np.random.default_rng(11)
        data = rng.standard_normal(49)
        data /= np.linalg.norm(data)
        result = solve(assemble(make_kernel("gaussian", 1.0), nodes, data))
        assert result.residual < 1e-10
        scale = np.max(np.abs(data))
        assert result.residual <= max(result.kappa, 1.0) * 1e-12 * scale

    def test_missing_data_raises(self):
        nodes = make_nodes("lattice", half_width=3)
        with pytest.raises(UsageError):
            solve(assemble(make_kernel("gaussian", 1.0), nodes))

    def test_exactly_singular_raises_with_kappa(self):
        # A hugely widened gaussian is constant 1.0 across the window at
        # machine precision: the all-ones matrix is exactly singular.
        nodes = make_nodes("lattice", half_width=3)
        system = assemble(make_kernel("gaussian", 1e9), nodes)
        assert np.all(system.matrix == 1.0)
        with pytest.raises(SolvabilityError) as info:
            solve(system.with_rhs(np.ones(7)))
        assert info.value.kappa == float("inf")

    def test_nearly_flat_kernel_keeps_contract_for_decaying_data(self):
        # alpha=4 on the integer window is conditioned near 1/eps; decaying
        # data keeps the coefficients bounded, so the residual stays far
        # below the conditioning contract.
        nodes = make_nodes("lattice", half_width=24)
        data = np.exp(-nodes.x**2 / 15.0)
        result = solve(assemble(make_kernel("gaussian", 4.0), nodes, data))
        assert result.kappa > 1e14
        assert result.residual < 1e-10

    def test_linearity_through_shared_matrix(self):
        nodes = make_nodes("kadec-alternating:0.15", half_width=10)
        system = assemble(make_kernel("gaussian", 1.0), nodes)
        rng = np.random.default_rng(5)
        first = rng.standard_normal(21)
        second = rng.standard_normal(21)
        a_first = solve(system.with_rhs(first)).coefficients
        a_second = solve(system.with_rhs(second)).coefficients
        a_sum = solve(system.with_rhs(first + second)).coefficients
        assert np.allclose(a_sum, a_first + a_second, atol=5e-13)


class TestInterpolate:
    @pytest.mark.parametrize("name,alpha,token", [
        ("gaussian", 1.0, "kadec-alternating:0.2"),
        ("sinc", None, "lattice"),
        ("triangle-spectrum", None, "kadec-alternating:0.2"),
    ])
    def test_same_space_idempotence(self, name, alpha, token):
        kernel = make_kernel(name, alpha)
        nodes = make_nodes(token, half_width=12)
        f = random_function(kernel, nodes, seed=9)
        g = interpolate(f, kernel, nodes)
        tol = max(g.kappa, 1.0) * 1e-12
        assert np.allclose(g.coefficients, f.coefficients, atol=tol)

    def test_cross_space_matches_at_integers(self):
        # Bandlimited reference with decaying data, interpolated by a wide
        # gaussian on the same integer window: the interpolation condition
        # holds at every node even though the system is conditioned near
        # the precision limit.
        nodes = make_nodes("lattice", half_width=24)
        f = QsisFunction(make_kernel("sinc"), nodes,
                         np.exp(-nodes.x**2 / 15.0))
        g = interpolate(f, make_kernel("gaussian", 4.0), nodes)
        mismatch = np.max(np.abs(g(nodes.x) - f(nodes.x)))
        assert mismatch < 1e-10

    def test_coefficient_size_bound_same_window(self):
        phi = make_kernel("gaussian", 1.0)
        reg = regularity_report(phi, cells=12)
        c_phi = (reg.amalgam_offcenter + reg.tail_bound) / reg.delta
        window = make_nodes("kadec-alternating:0.2", half_width=12)
        c_w = riesz_estimate(window).raw_constant
        slope = c_w**4 * (reg.cell_sups[0] / reg.delta + c_w**2 * c_phi)
        for seed in range(20):
            f = random_function(make_kernel("sinc"), window, seed)
            data = sample(f, window)
            g = interpolate(f, phi, window)
            bound = slope * np.linalg.norm(data) * (1.0 + 1e-12)
            assert np.linalg.norm(g.coefficients) <= bound

    def test_coefficient_size_bound_distinct_windows(self):
        # The reference lives on a rougher window than the sample window,
        # so the rougher window's constant dominates and the stated bound
        # still applies.
        phi = make_kernel("gaussian", 1.0)
        reg = regularity_report(phi, cells=12)
        c_phi = (reg.amalgam_offcenter + reg.tail_bound) / reg.delta
        rough = make_nodes("sqrt2-swap", half_width=12)
        smooth = make_nodes("kadec-alternating:0.1", half_width=12)
        c_rough = riesz_estimate(rough).raw_constant
        assert c_rough >= riesz_estimate(smooth).raw_constant
        slope = c_rough**4 * (
            reg.cell_sups[0] / reg.delta + c_rough**2 * c_phi)
        for seed in range(20):
            f = random_function(make_kernel("gaussian", 2.0), rough,
                                seed + 100)
            data = sample(f, smooth)
            g = interpolate(f, phi, smooth)
            bound = slope * np.linalg.norm(data) * (1.0 + 1e-12)
            assert np.linalg.norm(g.coefficients) <= bound

    def test_interpolant_evaluates_like_its_function(self):
        nodes = make_nodes("kadec-alternating:0.1", half_width=6)
        f = random_function(make_kernel("gaussian", 1.0), nodes, seed=2)
        g = interpolate(f, make_kernel("gaussian", 1.0), nodes)
        xs = np.linspace(-3.0, 3.0, 11)
        assert np.allclose(g(xs), evaluate(g.as_function(), xs), atol=0.0)
        scalar = g(0.3)
        assert np.isscalar(scalar) or np.ndim(scalar) == 0

    def test_to_dict_shape(self):
        nodes = make_nodes("lattice", half_width=3)
        f = random_function(make_kernel("gaussian", 1.0), nodes, seed=1)
        g = interpolate(f, make_kernel("gaussian", 1.0), nodes)
        payload = g.to_dict()
        assert set(payload) == {
            "kernel", "nodes", "coefficients", "kappa", "residual"}
        assert payload["kernel"] == {"name": "gaussian", "alpha": 1.0}
        assert payload["nodes"]["name"] == "lattice"
        assert len(payload["coefficients"]) == 7
        assert payload["kappa"] >= 1.0
        assert payload["residual"] >= 0.0


class TestResidualReport:
    def test_exact_reproduction_is_tiny(self):
        nodes = make_nodes("kadec-alternating:0.2", half_width=8)
        kernel = make_kernel("gaussian", 1.0)
        f = random_function(kernel, nodes, seed=4)
        g = interpolate(f, kernel, nodes)
        report = residual_report(f, g)
        assert report.l2_relative < 1e-8
        assert report.sup_relative < 1e-8
        assert report.central_fraction == 0.5

    def test_zero_reference_reports_zero(self):
        nodes = make_nodes("lattice", half_width=4)
        kernel = make_kernel("gaussian", 1.0)
        f = QsisFunction(kernel, nodes, np.zeros(9))
        g = interpolate(f, kernel, nodes)
        report = residual_report(f, g)
        assert report.l2_error == 0.0
        assert report.sup_error == 0.0
        assert report.l2_relative == 0.0
        assert report.sup_relative == 0.0

    def test_error_decreases_as_mollifier_sharpens(self):
        tri = make_kernel("triangle-spectrum")
        window = make_nodes("kadec-alternating:0.2", half_width=8)
        f = random_function(tri, window, seed=7)
        grid = LineGrid(24.0, 1.0 / 8.0)
        l2_errors = []
        sup_errors = []
        for alpha in [1.0, 2.0, 4.0, 8.0]:
            phi = convolve(make_kernel("dilated-gaussian-ai", alpha), tri)
            g = interpolate(f, phi, window)
            report = residual_report(f, g, grid=grid)
            l2_errors.append(report.l2_error)
            sup_errors.append(report.sup_error)
        assert all(a > b for a, b in zip(l2_errors, l2_errors[1:]))
        assert all(a > b for a, b in zip(sup_errors, sup_errors[1:]))

    def test_bad_fraction_rejected(self):
        nodes = make_nodes("lattice", half_width=2)
        kernel = make_kernel("gaussian", 1.0)
        f = random_function(kernel, nodes, seed=0)
        g = interpolate(f, kernel, nodes)
        for fraction in (0.0, -0.5, 1.5):
            with pytest.raises(UsageError):
                residual_report(f, g, central_fraction=fraction)

    def test_central_fraction_masks_edge_disagreement(self):
        nodes = make_nodes("lattice", half_width=4)
        kernel = make_kernel("gaussian", 1.0)
        f = random_function(kernel, nodes, seed=6)

        def g(xs):
            xs = np.asarray(xs, dtype=float)
            return f(xs) + np.where(np.abs(xs) > 20.0, 0.01, 0.0)

        grid = LineGrid(24.0, 1.0 / 8.0)
        inner = residual_report(f, g, grid=grid, central_fraction=0.5)
        full = residual_report(f, g, grid=grid, central_fraction=1.0)
        assert inner.sup_error < 1e-12
        assert full.sup_error == pytest.approx(0.01, rel=1e-12)


class TestComparisonCsv:
    def test_format_and_consistency(self):
        nodes = make_nodes("lattice", half_width=3)
        kernel = make_kernel("gaussian", 1.0)
        f = random_function(kernel, nodes, seed=8)
        g = interpolate(f, kernel, nodes)
        grid = LineGrid(8.0, 0.5)
        text = comparison_csv(f, g, grid=grid)
        lines = text.strip().split("\n")
        assert lines[0] == "x,f,g,f-g"
        assert len(lines) == 1 + grid.nodes.size
        mid = lines[1 + grid.nodes.size // 2].split(",")
        x, fv, gv, dv = (float(part) for part in mid)
        assert x == 0.0
        assert fv - gv == pytest.approx(dv, abs=1e-17)
        assert fv == pytest.approx(float(f(0.0)), abs=1e-15)
