import csv
import json
import math
import tempfile
import unittest
from unittest.mock import patch
from pathlib import Path

import numpy

from hartree_solvers.energy import (
    EnergyContext,
    Sign,
    energy,
    gradient,
    gradient_norm,
    metric_constant,
    ray_divergence,
    residual_stationary,
    scan_ray,
    verify_local_min,
)
from hartree_solvers.greens import (
    convolution_bound_ratios,
    estimate_green_constant,
    green_bound_ratios,
    green_kernel,
    green_potential,
    hartree_quartic,
    hartree_trilinear,
)
from hartree_solvers.mpsolver import (
    ConvergenceError,
    GeometryError,
    PathState,
    PolishResult,
    SolveConfig,
    cerami_monitor,
    default_seed_field,
    find_endpoint,
    mountain_pass,
    nehari_level,
    refine_and_compare,
    solve_both_signs,
)
from hartree_solvers.nonlinearity import (
    NonlinearitySpec,
    Verdict,
    builtin,
    check_ar,
    check_growth,
    check_quasimonotone,
    check_small_s,
    check_superquadratic,
    from_config,
    hypothesis_table,
)
from hartree_solvers.runner import (
    ArtifactError,
    ConfigurationError,
    ExitCode,
    FIELD_NAMES,
    REPORT_NAMES,
    SOLVE_ARTIFACTS,
    RunConfig,
    export_plot_data,
    load_field,
    run_hypotheses,
    run_solve,
    run_sweep,
    run_verify,
    save_field,
)
from hartree_solvers.spectral import (
    DomainSpec,
    OperatorParams,
    SpectralField,
    apply_sqrt_op,
    critical_exponent,
    evaluate_extension,
    extension_energy,
    extension_residual,
    lp_norm,
    prolong,
    q_norm,
    quadratic_form,
    random_field,
    restrict,
    solitary_wave,
    solve_sqrt_op,
)
from hartree_solvers.spectral.errors import DomainMismatchError, FieldValueError, ParameterError
from main import main


def first_mode(domain, scale=1.0):
    coefficients = numpy.zeros(domain.shape)
    coefficients[(0,) * domain.dimension] = scale
    return SpectralField(domain, coefficients)


def write_config(directory, **values):
    path = Path(directory) / 'config.json'
    path.write_text(json.dumps(values))
    return str(path)


# small solver settings shared by the solve tests
FAST_SOLVE = SolveConfig(certificate_samples=50)


class TestSpectralOperators(unittest.TestCase):
    def setUp(self):
        self.domain = DomainSpec(1, 255)
        self.phi = first_mode(self.domain)

    def test_eigenfunctions_are_exact(self):
        x = self.domain.axis
        for k in (1, 2, 7, 10):
            coefficients = numpy.zeros(self.domain.shape)
            coefficients[k - 1] = 1.0
            applied = apply_sqrt_op(SpectralField(self.domain, coefficients), 1.0).grid
            expected = math.sqrt(k * k * math.pi ** 2 + 1) * self.domain.eigenfunction((k,), x)
            self.assertTrue(numpy.allclose(applied, expected, rtol=0, atol=1e-12 * numpy.max(numpy.abs(expected))))

    def test_solve_inverts_apply(self):
        solved = solve_sqrt_op(self.phi, 1.0)
        self.assertAlmostEqual(solved.coefficients[0], 1 / math.sqrt(math.pi ** 2 + 1), places=14)
        u = random_field(self.domain, numpy.random.default_rng(3))
        round_trip = solve_sqrt_op(apply_sqrt_op(u, 2.0), 2.0)
        self.assertTrue(numpy.allclose(round_trip.coefficients, u.coefficients, atol=1e-13))

    def test_norms_of_first_mode(self):
        self.assertAlmostEqual(lp_norm(self.phi, 2), 1.0, places=12)
        self.assertAlmostEqual(lp_norm(self.phi, math.inf), math.sqrt(2), places=12)
        self.assertAlmostEqual(quadratic_form(self.phi, 1.0), math.sqrt(math.pi ** 2 + 1), places=12)

    def test_trace_inequality(self):
        rng = numpy.random.default_rng(0)
        for _ in range(20):
            u = random_field(self.domain, rng)
            self.assertGreaterEqual(quadratic_form(u, 1.0), lp_norm(u, 2) ** 2 * (1 - 1e-12))

    def test_invalid_inputs(self):
        with self.assertRaises(ParameterError):
            DomainSpec(3, 15)
        with self.assertRaises(ParameterError):
            apply_sqrt_op(self.phi, 0.0)
        with self.assertRaises(ParameterError):
            lp_norm(self.phi, 0.5)
        with self.assertRaises(ParameterError):
            OperatorParams(-1.0)
        with self.assertRaises(FieldValueError):
            SpectralField(self.domain, numpy.zeros(10))
        with self.assertRaises(FieldValueError):
            SpectralField(self.domain, numpy.full(self.domain.shape, numpy.nan))
        with self.assertRaises(DomainMismatchError):
            self.phi + first_mode(DomainSpec(1, 31))

    def test_prolong_then_restrict(self):
        u = random_field(DomainSpec(1, 31), numpy.random.default_rng(1))
        fine = prolong(u, u.domain.refined())
        self.assertEqual(fine.domain.points, 63)
        self.assertTrue(numpy.array_equal(restrict(fine, u.domain).coefficients, u.coefficients))
        with self.assertRaises(FieldValueError):
            prolong(fine, u.domain)

    def test_parts_of_a_field(self):
        u = random_field(DomainSpec(1, 31), numpy.random.default_rng(2))
        recombined = u.positive_part().grid - u.negative_part().grid
        self.assertTrue(numpy.allclose(recombined, u.grid, atol=1e-12))
        self.assertTrue(numpy.all(u.negative_part().grid >= -1e-12))

    def test_solitary_wave_keeps_modulus(self):
        u = random_field(DomainSpec(1, 31), numpy.random.default_rng(4))
        for t in (0.0, 0.7, 12.5):
            self.assertTrue(numpy.allclose(numpy.abs(solitary_wave(u, 0.5, t)), numpy.abs(u.grid)))
        self.assertTrue(numpy.allclose(solitary_wave(u, 0.5, 0.0), u.grid))

    def test_critical_exponent(self):
        self.assertTrue(math.isinf(critical_exponent(1)))
        self.assertEqual(critical_exponent(2), 4.0)
        self.assertEqual(critical_exponent(3), 3.0)

    def test_two_dimensional_symbol(self):
        domain = DomainSpec(2, 15)
        self.assertEqual(domain.nodes.shape, (15, 15, 2))
        self.assertAlmostEqual(domain.symbol(1.0)[0, 1], math.sqrt(5 * math.pi ** 2 + 1), places=12)


class TestExtension(unittest.TestCase):
    def setUp(self):
        self.domain = DomainSpec(1, 31)
        self.phi = first_mode(self.domain)

    def test_single_mode_value(self):
        value = evaluate_extension(self.phi, 1.0, 0.5, 1.0)
        self.assertAlmostEqual(value, math.sqrt(2) * math.exp(-math.sqrt(math.pi ** 2 + 1)), places=12)
        self.assertAlmostEqual(evaluate_extension(self.phi, 1.0, 0.0, 0.3), 0.0, places=14)

    def test_trace_is_the_field(self):
        u = random_field(self.domain, numpy.random.default_rng(5))
        base = evaluate_extension(u, 1.0, self.domain.axis, 0.0)
        self.assertTrue(numpy.allclose(base, u.grid, atol=1e-12))

    def test_negative_height_rejected(self):
        with self.assertRaises(ParameterError):
            evaluate_extension(self.phi, 1.0, 0.5, -0.1)

    def test_energy_is_minimal_at_the_extension(self):
        u = random_field(self.domain, numpy.random.default_rng(6))
        self.assertAlmostEqual(extension_energy(u, 1.0), quadratic_form(u, 1.0), places=10)
        for shift in (-0.5, 0.2, 3.0):
            self.assertGreater(extension_energy(u, 1.0, shift), quadratic_form(u, 1.0))

    def test_residual_convergence(self):
        rng = numpy.random.default_rng(7)
        samples = [(rng.uniform(0.1, 0.9, size=1), float(rng.uniform(0.1, 1.0))) for _ in range(20)]
        coarse = extension_residual(self.phi, 1.0, samples, step=1e-2)
        fine = extension_residual(self.phi, 1.0, samples, step=5e-3)
        self.assertAlmostEqual(coarse.laplacian / fine.laplacian, 4.0, delta=0.2)
        self.assertAlmostEqual(coarse.neumann / fine.neumann, 2.0, delta=0.2)

    def test_zero_field_has_no_residual(self):
        residual = extension_residual(SpectralField.zeros(self.domain), 1.0, [(numpy.array([0.5]), 0.5)])
        self.assertEqual(residual.laplacian, 0.0)
        self.assertEqual(residual.neumann, 0.0)


class TestGreenPotential(unittest.TestCase):
    def setUp(self):
        self.domain = DomainSpec(1, 255)
        self.x = self.domain.axis
        self.u = SpectralField.from_grid(numpy.sin(numpy.pi * self.x), self.domain)

    def test_analytic_potential(self):
        expected = numpy.pi * self.x * (1 - self.x) + (1 - numpy.cos(2 * numpy.pi * self.x)) / (2 * numpy.pi)
        potential = green_potential(self.u)
        self.assertTrue(numpy.allclose(potential.grid, expected, rtol=0, atol=1e-8))
        self.assertAlmostEqual(potential.grid[127], math.pi / 4 + 1 / math.pi, places=8)

    def test_analytic_quartic(self):
        expected = math.pi / 12 + 5 / (8 * math.pi)
        self.assertAlmostEqual(hartree_quartic(self.u), expected, places=8)
        self.assertAlmostEqual(hartree_trilinear(self.u, self.u, self.u), expected, places=8)

    def test_dealiased_potential_agrees(self):
        self.assertTrue(numpy.allclose(green_potential(self.u, dealias=True).grid, green_potential(self.u).grid,
                                       atol=1e-8))

    def test_dealiased_trilinear_matches_quartic(self):
        u = random_field(DomainSpec(1, 31), numpy.random.default_rng(9))
        for dealias in (False, True):
            quartic = hartree_quartic(u, dealias=dealias)
            self.assertLessEqual(abs(hartree_trilinear(u, u, u, dealias=dealias) - quartic), 1e-12 * quartic)

    def test_homogeneity(self):
        self.assertTrue(numpy.allclose(green_potential(self.u * 3.0).grid, 9.0 * green_potential(self.u).grid))
        self.assertAlmostEqual(hartree_quartic(self.u * 2.0), 16.0 * hartree_quartic(self.u), places=10)

    def test_trilinear_symmetry(self):
        rng = numpy.random.default_rng(8)
        v, u, w = (random_field(self.domain, rng) for _ in range(3))
        value = hartree_trilinear(v, u, w)
        self.assertLessEqual(abs(value - hartree_trilinear(v, w, u)), 1e-12 * max(1.0, abs(value)))
        self.assertEqual(hartree_trilinear(v, u, SpectralField.zeros(self.domain)), 0.0)

    def test_kernel_symmetry(self):
        kernel = green_kernel(DomainSpec(1, 31))
        self.assertTrue(numpy.allclose(kernel, kernel.T, rtol=0, atol=1e-10 * numpy.max(numpy.abs(kernel))))
        with self.assertRaises(ValueError):
            green_kernel(DomainSpec(2, 7))

    def test_green_constant_bounds_fresh_samples(self):
        domain = DomainSpec(1, 31)
        constant = estimate_green_constant(domain, 1.0, 1000, seed=0)
        fresh = green_bound_ratios(domain, 1.0, 200, seed=1)
        self.assertLessEqual(numpy.max(fresh), constant)

    def test_convolution_ratios_below_one(self):
        distribution = convolution_bound_ratios(DomainSpec(1, 31), 100, seed=0)
        self.assertLessEqual(distribution.maximum, 1.0)
        self.assertGreater(distribution.minimum, 0.0)
        self.assertEqual(distribution.count, 100)


class TestNonlinearity(unittest.TestCase):
    def setUp(self):
        self.loglike = builtin('loglike')
        self.params = OperatorParams(1.0, 0.5, 1.0)

    def test_loglike_values(self):
        x = numpy.array([[0.3]])
        self.assertAlmostEqual(float(self.loglike.sigma(x, numpy.array([1.0]))[0]), 1 - math.log(2), places=12)
        self.assertEqual(float(self.loglike.sigma(x, numpy.array([0.0]))[0]), 0.0)
        self.assertEqual(float(self.loglike.F(x, numpy.array([0.0]))[0]), 0.0)

    def test_primitive_derivative(self):
        rng = numpy.random.default_rng(9)
        x = rng.random((1000, 1))
        s = rng.uniform(-5, 5, 1000)
        for spec in (self.loglike, builtin('power', r=3.0), builtin('power', r=4.5)):
            h = 1e-6
            derivative = (spec.F(x, s + h) - spec.F(x, s - h)) / (2 * h)
            self.assertTrue(numpy.allclose(derivative, spec.f(x, s), rtol=1e-6, atol=1e-8))
            self.assertTrue(numpy.allclose(spec.sigma(x, s), spec.f(x, s) * s - 2 * spec.F(x, s), atol=1e-10))

    def test_loglike_table(self):
        table = {report.name: report.verdict for report in hypothesis_table(self.loglike, self.params)}
        for name in ('growth', 'superquadratic', 'quasimonotone', 'small_s'):
            self.assertEqual(table[name], Verdict.PASS)
        for mu in (2.01, 2.1, 3.0):
            self.assertEqual(table[f'ar(mu={mu:g})'], Verdict.FAIL)

    def test_loglike_ar_witness(self):
        report = check_ar(self.loglike, 2.1)
        self.assertEqual(report.verdict, Verdict.FAIL)
        # ln(1 + s^2) exceeds mu / (mu - 2) = 21 near |s| = e^10.5
        self.assertGreater(abs(report.witness['s']), 1e4)
        self.assertTrue(math.isfinite(report.witness['s']))

    def test_loglike_ar_beyond_float_range_is_inconclusive(self):
        # the violation sits near ln(1 + s^2) = 20001, far past any float
        report = check_ar(self.loglike, 2.0001)
        self.assertEqual(report.verdict, Verdict.INCONCLUSIVE)
        self.assertIsNone(report.witness)
        self.assertGreater(report.margin, 0.0)
        self.assertEqual(check_ar(builtin('power', r=3.0), 3.0).verdict, Verdict.PASS)

    def test_power_passes_everything(self):
        reports = hypothesis_table(builtin('power', r=3.0), OperatorParams(1.0))
        self.assertTrue(all(report.passed for report in reports))
        self.assertEqual(reports[-1].name, 'ar(mu=3)')

    def test_exponent_out_of_range(self):
        with self.assertRaises(ParameterError):
            builtin('power', r=2.0)
        with self.assertRaises(ParameterError):
            builtin('power', dimension=2, r=4.0)
        with self.assertRaises(ParameterError):
            check_ar(self.loglike, 2.0)

    def test_from_config(self):
        spec = from_config({'kind': 'power', 'r': 3.5}, 1)
        self.assertEqual(spec.r, 3.5)
        with self.assertRaises(ParameterError):
            from_config({'kind': 'power', 'exponent': 3}, 1)
        with self.assertRaises(ParameterError):
            from_config({'kind': 'cubic'}, 1)

    def test_growth_violation(self):
        cubic = NonlinearitySpec.from_callables('cubic', lambda x, s: s ** 3, lambda x, s: s ** 4 / 4, r=2.5)
        report = check_growth(cubic)
        self.assertEqual(report.verdict, Verdict.FAIL)
        self.assertGreater(abs(report.witness['s']), 1.0)

    def test_bounded_ratio_is_not_superquadratic(self):
        quadratic = NonlinearitySpec.from_callables('quadratic', lambda x, s: s, lambda x, s: s ** 2 / 2)
        self.assertEqual(check_superquadratic(quadratic).verdict, Verdict.FAIL)

    def test_quasimonotone_dip(self):
        dip = NonlinearitySpec('dip', lambda x, s: s, lambda x, s: s ** 2 / 2,
                               sigma_eval=lambda x, s: numpy.where(numpy.abs(s) > 1, -2.0, 0.0), beta_star=1.0)
        report = check_quasimonotone(dip, count=4)
        self.assertEqual(report.verdict, Verdict.FAIL)
        self.assertLess(report.margin, 0)

    def test_small_s_margin(self):
        spec = builtin('power', r=3.0, theta=0.01)
        report = check_small_s(spec, OperatorParams(1.0, 0.999))
        self.assertEqual(report.verdict, Verdict.FAIL)
        self.assertEqual(check_small_s(self.loglike, self.params).verdict, Verdict.PASS)


class TestEnergy(unittest.TestCase):
    def setUp(self):
        self.domain = DomainSpec(1, 31)
        self.ctx = EnergyContext(self.domain, OperatorParams(1.0, 0.5, 1.0), builtin('loglike'), Sign.PLUS)
        self.quadratic = EnergyContext(self.domain, OperatorParams(1.0), builtin('zero'))

    def test_energy_of_zero(self):
        for sign in Sign:
            self.assertEqual(energy(SpectralField.zeros(self.domain), self.ctx.with_sign(sign)), 0.0)

    def test_pure_quadratic(self):
        u = random_field(self.domain, numpy.random.default_rng(10))
        self.assertAlmostEqual(energy(u, self.quadratic), 0.5 * quadratic_form(u, 1.0), places=10)
        self.assertTrue(numpy.allclose(gradient(u, self.quadratic).coefficients, u.coefficients, atol=1e-13))

    def test_gradient_matches_finite_differences(self):
        rng = numpy.random.default_rng(11)
        for sign in Sign:
            ctx = self.ctx.with_sign(sign)
            for _ in range(5):
                u, w = random_field(self.domain, rng), random_field(self.domain, rng)
                u, w = u * (1 / q_norm(u, 1.0)), w * (1 / q_norm(w, 1.0))
                g = gradient(u, ctx)
                h = 1e-5
                difference = (energy(u + w * h, ctx) - energy(u - w * h, ctx)) / (2 * h)
                exact = float(numpy.sum(self.domain.symbol(1.0) * g.coefficients * w.coefficients))
                self.assertLess(abs(difference - exact), 1e-5 * q_norm(g, 1.0))

    def test_gradient_in_two_dimensions(self):
        domain = DomainSpec(2, 15)
        ctx = EnergyContext(domain, OperatorParams(1.0, 0.25, 1.0), builtin('power', dimension=2, r=3.0))
        rng = numpy.random.default_rng(12)
        u, w = random_field(domain, rng), random_field(domain, rng)
        g = gradient(u, ctx)
        h = 1e-5
        difference = (energy(u + w * h, ctx) - energy(u - w * h, ctx)) / (2 * h)
        exact = float(numpy.sum(domain.symbol(1.0) * g.coefficients * w.coefficients))
        self.assertLess(abs(difference - exact), 1e-5 * q_norm(g, 1.0) * q_norm(w, 1.0))

    def test_mirror_energy(self):
        u = random_field(self.domain, numpy.random.default_rng(13))
        self.assertAlmostEqual(energy(-u, self.ctx.with_sign(Sign.MINUS)), energy(u, self.ctx), places=9)

    def test_residual_bounded_by_gradient(self):
        u = random_field(self.domain, numpy.random.default_rng(14))
        bound = metric_constant(self.domain, 1.0) * gradient_norm(u, self.ctx)
        self.assertLessEqual(residual_stationary(u, self.ctx), bound * (1 + 1e-12))

    def test_margin_validation(self):
        ctx = EnergyContext(self.domain, OperatorParams(1.0, 1.0, 1.0), builtin('loglike'))
        with self.assertRaises(ParameterError):
            ctx.validate()
        with self.assertRaises(ParameterError):
            EnergyContext(self.domain, OperatorParams(1.0), builtin('power', dimension=2))

    def test_local_minimum_certificate(self):
        certificate = verify_local_min(self.ctx, 0.1, 50, seed=0, constant_samples=50)
        self.assertTrue(certificate.certified)
        self.assertGreater(certificate.lower_bound, 0.0)
        self.assertGreaterEqual(certificate.minimum, certificate.lower_bound)
        quadratic = verify_local_min(self.quadratic, 0.1, 20, seed=0)
        self.assertAlmostEqual(quadratic.minimum, 0.005, places=14)
        self.assertTrue(quadratic.certified)

    def test_certificate_needs_a_positive_bound(self):
        strong = EnergyContext(self.domain, OperatorParams(1.0, 0.5, 1e4), builtin('loglike'), Sign.PLUS)
        certificate = verify_local_min(strong, 0.1, 20, seed=0, constant_samples=50)
        self.assertLess(certificate.lower_bound, 0.0)
        self.assertFalse(certificate.certified)
        with self.assertRaises(GeometryError):
            mountain_pass(strong, FAST_SOLVE)

    def test_ray_divergence(self):
        v = first_mode(self.domain)
        scan = ray_divergence(v, self.ctx)
        self.assertTrue(scan.diverges)
        self.assertLess(energy(v * (scan.crossing * 1.01), self.ctx), 0.0)
        doubled = EnergyContext(self.domain, OperatorParams(1.0, 0.5, 2.0), builtin('loglike'), Sign.PLUS)
        self.assertLessEqual(ray_divergence(v, doubled).crossing, scan.crossing)

    def test_ray_rules(self):
        v = first_mode(self.domain)
        self.assertFalse(scan_ray(v, self.quadratic).diverges)
        with self.assertRaises(ParameterError):
            ray_divergence(v, self.quadratic)
        with self.assertRaises(ParameterError):
            scan_ray(-v, self.ctx)
        with self.assertRaises(ParameterError):
            scan_ray(SpectralField.zeros(self.domain), self.ctx)


class TestMountainPass(unittest.TestCase):
    def setUp(self):
        self.domain = DomainSpec(1, 63)
        self.ctx = EnergyContext(self.domain, OperatorParams(1.0, 0.5, 1.0), builtin('loglike'))

    def test_solve_both_signs(self):
        u_plus, u_minus, report = solve_both_signs(self.ctx, FAST_SOLVE)
        self.assertTrue(report.converged)
        self.assertGreater(report.plus.critical_value, 0.0)
        self.assertTrue(report.plus.strictly_signed)
        self.assertTrue(report.minus.strictly_signed)
        self.assertLessEqual(report.plus.gradient_norm, 1e-8)
        self.assertLessEqual(report.plus.residual, report.plus.metric_constant * report.plus.gradient_norm * (1 + 1e-9))
        self.assertLessEqual(report.mirror_defect, 1e-6)
        self.assertTrue(report.plus.path_invariant)
        self.assertAlmostEqual(report.plus.critical_value, report.minus.critical_value, places=9)
        self.assertTrue(numpy.all(u_plus.grid > 0))
        self.assertTrue(numpy.all(u_minus.grid < 0))

    def test_asymmetric_nonlinearity(self):
        spec = builtin('loglike', weight_slope=1.0, negative_scale=2.0)
        ctx = EnergyContext(self.domain, OperatorParams(1.0, 0.5, 1.0), spec)
        _, _, report = solve_both_signs(ctx, FAST_SOLVE)
        self.assertTrue(report.converged)
        self.assertFalse(report.symmetric)

    def test_quadratic_functional_has_no_endpoint(self):
        ctx = EnergyContext(self.domain, OperatorParams(1.0), builtin('zero'))
        with self.assertRaises(GeometryError):
            solve_both_signs(ctx, FAST_SOLVE)

    def test_negative_endpoint(self):
        ctx = self.ctx.with_sign(Sign.MINUS)
        endpoint = find_endpoint(ctx, default_seed_field(ctx))
        self.assertTrue(numpy.all(endpoint.grid <= 0))
        self.assertLess(energy(endpoint, ctx), 0.0)

    def test_straight_path(self):
        ctx = self.ctx.with_sign(Sign.PLUS)
        endpoint = find_endpoint(ctx, default_seed_field(ctx))
        path = PathState.straight(endpoint, 5, ctx)
        self.assertEqual(path.energies[0], 0.0)
        self.assertLess(path.energies[-1], 0.0)
        self.assertGreater(path.max_energy, 0.0)
        self.assertIn(path.max_index, (1, 2, 3))

    def test_cerami_diagnostics(self):
        ctx = EnergyContext(self.domain, OperatorParams(1.0), builtin('zero'))
        phi = first_mode(self.domain)
        diverging = cerami_monitor((phi * n for n in range(1, 13)), ctx)
        self.assertTrue(diverging.pathological)
        self.assertEqual(diverging.length, 12)
        resting = cerami_monitor((SpectralField.zeros(self.domain) for _ in range(5)), ctx)
        self.assertFalse(resting.pathological)
        self.assertEqual(resting.products, (0.0,) * 5)

    def test_nehari_level_matches_mountain_pass(self):
        ctx = EnergyContext(self.domain, OperatorParams(1.0, 0.0, 1.0), builtin('power', r=3.0))
        u_plus, _, report = solve_both_signs(ctx, FAST_SOLVE)
        nehari = nehari_level(ctx.with_sign(Sign.PLUS))
        self.assertTrue(nehari.converged)
        self.assertAlmostEqual(nehari.level, report.plus.critical_value, delta=1e-4)

    def test_path_stays_above_the_estimate(self):
        ctx = self.ctx.with_sign(Sign.PLUS)
        u_plus, report = mountain_pass(ctx, FAST_SOLVE)
        bound = report.certificate['lower_bound']
        self.assertGreater(bound, 0.0)
        self.assertEqual(report.failed_checks, [])
        self.assertTrue(report.path_invariant)
        self.assertGreaterEqual(min(report.max_energy_history), bound)
        self.assertTrue(numpy.all(numpy.diff(report.max_energy_history) <= 1e-11))
        self.assertGreaterEqual(min(report.fibre_levels), bound)
        self.assertTrue(numpy.all(numpy.diff(report.fibre_levels) <= 1e-11))
        self.assertGreaterEqual(report.critical_value, bound)
        self.assertTrue(report.nontrivial)
        self.assertLessEqual(report.wrong_sign_norm, 10 * FAST_SOLVE.tolerance)
        self.assertGreater(q_norm(u_plus, 1.0), 1e-3)

    def test_pinned_reparametrisation_keeps_the_peak(self):
        ctx = self.ctx.with_sign(Sign.PLUS)
        path = PathState.straight(find_endpoint(ctx, default_seed_field(ctx)), 7, ctx)
        raised = path.nodes[2] * 1.5
        bent = path.with_node(2, raised, energy(raised, ctx))
        moved = bent.reparametrized(ctx, 2)
        self.assertEqual(moved.size, 7)
        self.assertIs(moved.nodes[0], path.nodes[0])
        self.assertIs(moved.nodes[-1], path.nodes[-1])
        kept = [i for i, node in enumerate(moved.nodes) if node is raised]
        self.assertEqual(len(kept), 1)
        self.assertEqual(moved.energies[kept[0]], bent.energies[2])
        self.assertTrue(0 < kept[0] < 6)

    def test_trivial_polish_is_not_converged(self):
        def collapse(u, ctx, tolerance, max_iterations, monitor=None):
            return PolishResult(SpectralField.zeros(u.domain), 0, 0.0, True)

        with patch('hartree_solvers.mpsolver.mountain_pass_solver.newton_polish', collapse):
            u0, report = mountain_pass(self.ctx.with_sign(Sign.PLUS), FAST_SOLVE)
        self.assertEqual(q_norm(u0, 1.0), 0.0)
        self.assertFalse(report.converged)
        self.assertNotIn('gradient', report.failed_checks)
        for name in ('nontrivial', 'sign', 'level'):
            self.assertIn(name, report.failed_checks)
        self.assertIn('failed: nontrivial', report.message)

    def test_refinement(self):
        ctx = self.ctx.with_sign(Sign.PLUS)
        u_plus, _ = mountain_pass(ctx, FAST_SOLVE)
        drift = refine_and_compare(u_plus, ctx, FAST_SOLVE)
        self.assertTrue(drift.converged)
        self.assertEqual(drift.refined_points, 127)
        self.assertLessEqual(drift.energy_drift, 1e-4)
        self.assertLessEqual(drift.sup_norm_change, 0.05)

    def test_refinement_of_zero(self):
        zero = SpectralField.zeros(self.domain)
        with self.assertRaises(ParameterError):
            refine_and_compare(zero, self.ctx)
        quadratic = EnergyContext(self.domain, OperatorParams(1.0), builtin('zero'))
        report = refine_and_compare(zero, quadratic)
        self.assertEqual(report.energy_drift, 0.0)
        self.assertEqual(report.l2_drift, 0.0)

    def test_strict_refinement_raises(self):
        u = first_mode(self.domain, 0.5)
        config = SolveConfig(tolerance=1e-30, polish_max_iterations=1)
        with self.assertRaises(ConvergenceError):
            refine_and_compare(u, self.ctx.with_sign(Sign.PLUS), config, strict=True)


class TestBaseline(unittest.TestCase):
    def test_power_baseline_at_default_resolution(self):
        ctx = EnergyContext(DomainSpec(1, 255), OperatorParams(1.0, 0.0, 1.0), builtin('power', r=3.0))
        u_plus, _, report = solve_both_signs(ctx)
        self.assertTrue(report.converged)
        self.assertTrue(numpy.all(u_plus.grid > 0))
        self.assertGreater(report.plus.critical_value, 0.0)
        nehari = nehari_level(ctx.with_sign(Sign.PLUS))
        self.assertAlmostEqual(nehari.level, report.plus.critical_value, delta=1e-4)

    def test_loglike_baseline_at_default_resolution(self):
        ctx = EnergyContext(DomainSpec(1, 255), OperatorParams(1.0, 0.5, 1.0), builtin('loglike'))
        u_plus, u_minus, report = solve_both_signs(ctx)
        self.assertTrue(report.converged, report.failures)
        self.assertLessEqual(report.mirror_defect, 1e-6)
        self.assertTrue(numpy.all(u_plus.grid > 0))
        self.assertTrue(numpy.all(u_minus.grid < 0))
        for signed in (report.plus, report.minus):
            self.assertLessEqual(signed.residual, 1e-6)
            self.assertGreater(signed.critical_value, 0.0)
            self.assertGreaterEqual(signed.critical_value, signed.certificate['lower_bound'])
            self.assertLessEqual(signed.wrong_sign_norm, 1e-7)
            self.assertLessEqual(signed.cerami.products[-1], 1e-8)
            self.assertTrue(all(math.isfinite(value) for value in signed.cerami.sigma_integrals))
            self.assertTrue(all(math.isfinite(value) for value in signed.cerami.quartic_integrals))

        drift = refine_and_compare(u_plus, ctx.with_sign(Sign.PLUS))
        self.assertTrue(drift.converged)
        self.assertEqual(drift.refined_points, 511)
        self.assertLessEqual(drift.energy_drift, 1e-4)
        self.assertLessEqual(drift.sup_norm_change, 0.05)


class TestRunner(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.root = Path(self.directory.name)

    def tearDown(self):
        self.directory.cleanup()

    def test_config_validation(self):
        with self.assertRaises(ConfigurationError):
            RunConfig.from_dict({'mass': 1.0, 'colour': 'red'})
        with self.assertRaises(ConfigurationError):
            RunConfig.from_dict({'points': True})
        with self.assertRaises(ConfigurationError):
            RunConfig(mode='dance')
        self.assertEqual(RunConfig().points, 255)
        self.assertEqual(RunConfig(dimension=2).points, 63)
        with self.assertRaises(ParameterError):
            RunConfig(frequency=1.0).validate()
        with self.assertRaises(ConfigurationError):
            RunConfig().with_value('dimension', 2)
        self.assertEqual(RunConfig().with_value('lambda', 2.0).coupling, 2.0)

    def test_digest_ignores_output_dir(self):
        self.assertEqual(RunConfig().digest(), RunConfig(output_dir='elsewhere').digest())
        self.assertNotEqual(RunConfig().digest(), RunConfig(seed=1).digest())

    def test_field_file(self):
        u = random_field(DomainSpec(1, 31), numpy.random.default_rng(15))
        text = save_field(u, self.root / 'u.field')
        binary = save_field(u, self.root / 'u.bin', binary=True)
        self.assertEqual(text.read_text().splitlines()[0], 'HARTREE-FIELD v1; d=1; n=31; repr=spectral')
        self.assertTrue(numpy.array_equal(load_field(text).coefficients, u.coefficients))
        self.assertTrue(numpy.array_equal(load_field(binary).coefficients, u.coefficients))
        potential = save_field(green_potential(u), self.root / 'phi.field')
        self.assertEqual(type(load_field(potential)).__name__, 'PotentialField')

    def test_broken_field_files(self):
        with self.assertRaises(ArtifactError):
            load_field(self.root / 'missing.field')
        bad = self.root / 'bad.field'
        bad.write_text('HARTREE-FIELD v1; d=1; n=3; repr=spectral\n1.0\n2.0\n')
        with self.assertRaises(ArtifactError):
            load_field(bad)
        bad.write_text('not a field\n')
        with self.assertRaises(ArtifactError):
            load_field(bad)

    def test_export_without_artifacts(self):
        with self.assertRaises(ArtifactError):
            export_plot_data(self.root)

    def test_solve_artifacts(self):
        config = RunConfig(points=31, certificate_samples=50)
        outcome = run_solve(config, self.root / 'first')
        self.assertEqual(outcome.exit_code, ExitCode.SUCCESS)
        for name in SOLVE_ARTIFACTS + ('manifest.json',):
            self.assertTrue((outcome.directory / name).is_file())

        u_plus = load_field(outcome.directory / FIELD_NAMES[Sign.PLUS])
        report = json.loads((outcome.directory / REPORT_NAMES[Sign.PLUS]).read_text())
        self.assertAlmostEqual(residual_stationary(u_plus, config.context(Sign.PLUS)), report['residual'], places=12)

        manifest = json.loads((outcome.directory / 'manifest.json').read_text())
        self.assertEqual(manifest['config_sha256'], config.digest())
        self.assertEqual(sorted(manifest['artifacts']), sorted(SOLVE_ARTIFACTS))

        tables = export_plot_data(outcome.directory)
        profile = tables[0].read_text().splitlines()
        self.assertEqual(profile[0], 'x,u_plus,u_minus,phi')
        self.assertEqual(len(profile), 32)

        again = run_solve(config, self.root / 'second')
        for name in SOLVE_ARTIFACTS + ('manifest.json',):
            self.assertEqual((outcome.directory / name).read_bytes(), (again.directory / name).read_bytes())

    def test_sweep_keeps_failed_points(self):
        config = RunConfig(points=31, certificate_samples=50)
        code, path = run_sweep(config, 'omega', [0.0, 1.5], self.root / 'sweep', workers=2)
        self.assertEqual(code, ExitCode.VALIDATION)

        with open(path, newline='') as handle:
            rows = list(csv.DictReader(handle))
        self.assertEqual([row['value'] for row in rows], ['0.0', '1.5'])
        self.assertEqual([int(row['exit_code']) for row in rows], [0, 2])
        self.assertTrue((self.root / 'sweep' / 'omega=0' / 'manifest.json').is_file())

        with self.assertRaises(ConfigurationError):
            run_sweep(config, 'points_per_wave', [1.0], self.root / 'other')

    def test_trivial_solve_reports_its_reason(self):
        def collapse(u, ctx, tolerance, max_iterations, monitor=None):
            return PolishResult(SpectralField.zeros(u.domain), 0, 0.0, True)

        config = RunConfig(points=31, certificate_samples=50)
        with patch('hartree_solvers.mpsolver.mountain_pass_solver.newton_polish', collapse):
            outcome = run_solve(config, self.root / 'trivial')
        self.assertEqual(outcome.exit_code, ExitCode.NON_CONVERGENCE)
        self.assertIn('plus: ', outcome.reason)
        self.assertIn('minus: ', outcome.reason)
        self.assertIn('nontrivial', outcome.reason)
        manifest = json.loads((outcome.directory / 'manifest.json').read_text())
        self.assertFalse(manifest['summary']['converged'])
        self.assertIn('nontrivial', manifest['summary']['failed_checks']['plus'])

    def test_hypotheses_bundle(self):
        bundle = run_hypotheses(RunConfig(), self.root)
        self.assertEqual(bundle['table']['growth'], 'pass')
        self.assertEqual(bundle['table']['ar(mu=2.1)'], 'fail')
        self.assertTrue((self.root / 'hypotheses.json').is_file())

    def test_quick_verification(self):
        report = run_verify(quick=True)
        self.assertTrue(report.passed, report.failures)
        faulty = run_verify(quick=True, fault='hartree_gradient_sign')
        self.assertEqual(faulty.failures, ['gradient_consistency'])
        with self.assertRaises(ParameterError):
            run_verify(quick=True, fault='unknown')


class TestCommandLine(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.root = Path(self.directory.name)

    def tearDown(self):
        self.directory.cleanup()

    def test_validation_exit_code(self):
        config = write_config(self.root, frequency=1.0, points=31)
        self.assertEqual(main(['solve', '--config', config, '--output', str(self.root / 'run')]), 2)

    def test_geometry_exit_code(self):
        config = write_config(self.root, coupling=0.0, nonlinearity={'kind': 'zero'}, points=31,
                              certificate_samples=20)
        self.assertEqual(main(['solve', '--config', config, '--output', str(self.root / 'run')]), 3)

    def test_bad_exponent_exit_code(self):
        config = write_config(self.root, nonlinearity={'kind': 'power', 'r': 2.0})
        self.assertEqual(main(['hypotheses', '--config', config]), 2)

    def test_missing_config_exit_code(self):
        self.assertEqual(main(['solve', '--config', str(self.root / 'absent.json')]), 5)

    def test_export_exit_code(self):
        self.assertEqual(main(['export', '--dir', str(self.root)]), 5)


if __name__ == "__main__":
    unittest.main()
