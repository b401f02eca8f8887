import numpy as np
import pytest
from conftest import coords4, kahler_test_potential, trig_field4

from scalarflat import (
    ConvergenceError,
    CurveModel,
    DegreeError,
    DescriptorError,
    MetricModel4T,
    SolvabilityError,
    chern_scalar,
    conformal_scalar_flat,
    conformal_total_scalar_identity_check,
    is_gauduchon,
    make_line_bundle,
    poisson_periodic,
    prescribe_curvature,
)
from scalarflat.fourier import laplacian
from scalarflat.geom_core import grid_coordinates, integrate
from scalarflat.pde import ConformalSolution, TraceOperator, ddbar_density


# ---------------------------------------------------------------------------
# periodic Poisson

def test_poisson_zero_source():
    u = poisson_periodic(np.zeros((32, 32)))
    assert np.max(np.abs(u)) == 0.0


def test_poisson_eigenfunction():
    n = 64
    x, _ = grid_coordinates(n)
    rho = np.broadcast_to(np.cos(2 * np.pi * x), (n, n)).copy()
    u = poisson_periodic(rho)
    expected = -rho / (2 * np.pi) ** 2
    assert np.max(np.abs(u - expected)) < 1e-10
    assert abs(float(np.mean(u))) < 1e-14


def test_poisson_rejects_nonzero_mean():
    with pytest.raises(SolvabilityError):
        poisson_periodic(np.ones((16, 16)))


def test_poisson_residual_and_self_adjointness():
    rng = np.random.default_rng(4)
    n = 32
    x, y = grid_coordinates(n)

    def zero_mean_field():
        f = sum(rng.normal() * np.sin(2 * np.pi * (i * x + j * y) + rng.uniform(0, 6))
                for i in (1, 2) for j in (1, 3))
        return f - f.mean()

    a = zero_mean_field()
    b = zero_mean_field()
    ua = poisson_periodic(a)
    assert np.max(np.abs(laplacian(ua) - a)) < 1e-10
    lhs = float(np.sum(ua * b))
    rhs = float(np.sum(a * poisson_periodic(b)))
    assert abs(lhs - rhs) < 1e-10


# ---------------------------------------------------------------------------
# prescribed curvature

def test_prescribe_curvature_identity_target():
    curve = CurveModel.flat(2, 32)
    bundle = make_line_bundle(1, "constant", curve)
    u = prescribe_curvature(bundle.kappa, bundle)
    assert np.max(np.abs(u)) < 1e-14


def test_prescribe_curvature_round_trip():
    curve = CurveModel.flat(2, 64)
    bundle = make_line_bundle(1, "constant", curve)
    x, _ = curve.coordinates()
    target = np.pi + 0.5 * np.broadcast_to(np.sin(2 * np.pi * x), (64, 64))
    u = prescribe_curvature(target, bundle)
    achieved = bundle.kappa + ddbar_density(u)
    assert np.max(np.abs(achieved - target)) < 1e-8
    # degree conservation is exact: the twist adds a pure derivative
    assert abs(integrate(achieved, curve) / np.pi - 1.0) < 1e-10


def test_prescribe_curvature_rejects_degree_mismatch():
    curve = CurveModel.flat(2, 32)
    bundle = make_line_bundle(1, "constant", curve)
    with pytest.raises(DegreeError):
        prescribe_curvature(np.full((32, 32), 2 * np.pi), bundle)


# ---------------------------------------------------------------------------
# Gauduchon check

def test_is_gauduchon_flat_and_kahler():
    flag, residual = is_gauduchon(MetricModel4T.flat(8))
    assert flag and residual == 0.0
    metric = MetricModel4T.from_kahler_potential(kahler_test_potential(16, 0.1))
    flag, residual = is_gauduchon(metric)
    assert flag
    assert residual < 1e-8


def test_is_gauduchon_rejects_conformal_factor():
    n = 32
    a = 0.3
    x1 = coords4(n)[0]
    u = np.broadcast_to(a * np.sin(2 * np.pi * x1), (n,) * 4).copy()
    flag, residual = is_gauduchon(MetricModel4T.conformal(u))
    assert not flag
    # closed form: the defect is ddbar_1(e^u), largest entry of
    # pi^2 e^{a sin}(a^2 cos^2 - a sin) over the grid
    s = np.sin(2 * np.pi * x1)
    c = np.cos(2 * np.pi * x1)
    analytic = np.pi ** 2 * np.exp(a * s) * (a ** 2 * c ** 2 - a * s)
    assert residual == pytest.approx(float(np.max(np.abs(analytic))), abs=1e-6)


# ---------------------------------------------------------------------------
# conformal scalar-flat solver

def test_conformal_solver_flat_metric_is_immediate():
    solution = conformal_scalar_flat(MetricModel4T.flat(8))
    assert np.max(np.abs(solution.f)) == 0.0
    assert solution.residual == 0.0
    assert solution.solve_residual == 0.0
    assert solution.iterations == 0


def test_conformal_solver_kahler_perturbation():
    n = 16
    metric = MetricModel4T.from_kahler_potential(kahler_test_potential(n, 0.1 / np.pi ** 2))
    solution = conformal_scalar_flat(metric)
    assert solution.solve_residual < 1e-10
    assert solution.residual < 1e-6
    assert abs(float(np.mean(solution.f))) < 1e-13

    # the verification chain holds pointwise on the grid
    s_g = chern_scalar(metric)
    trace_f = TraceOperator(metric).apply(solution.f)
    s_new = chern_scalar(metric.rescaled(solution.f / 2))
    chain = -np.exp(-solution.f / 2) * (s_g - trace_f)
    assert np.max(np.abs(s_new - chain)) < 1e-8

    # stored residual must match an independent recomputation
    recomputed = float(np.max(np.abs(chern_scalar(metric.rescaled(solution.f / 2)))))
    assert abs(recomputed - solution.residual) < 1e-12


def test_conformal_solver_near_degenerate_kahler_metric():
    # potential amplitude 0.1 drives the metric's smallest eigenvalue to
    # ~0.013 and the scalar curvature to ~2e5; the solver must still push the
    # rescaled metric's scalar curvature to the verification bound
    n = 32
    metric = MetricModel4T.from_kahler_potential(kahler_test_potential(n, 0.1))
    solution = conformal_scalar_flat(metric, tol=1e-8)
    assert solution.solve_residual < 1e-8
    assert solution.residual < 1e-6


def test_conformal_solver_gates_reject_non_gauduchon():
    n = 16
    u = np.broadcast_to(0.2 * np.sin(2 * np.pi * coords4(n)[0]), (n,) * 4).copy()
    with pytest.raises(SolvabilityError):
        conformal_scalar_flat(MetricModel4T.conformal(u))


def test_conformal_solver_flattens_conformally_flat_input_when_ungated():
    # e^u * flat fails the Gauduchon gate, but with the gate disabled the
    # solver finds the exact rescaling back to a constant metric
    n = 16
    u = np.broadcast_to(0.2 * np.sin(2 * np.pi * coords4(n)[0]), (n,) * 4).copy()
    metric = MetricModel4T.conformal(u)
    solution = conformal_scalar_flat(metric, check_compat=False)
    assert solution.residual < 1e-6
    rescaled = metric.rescaled(solution.f / 2)
    assert float(np.ptp(rescaled.g[..., 0, 0].real)) < 1e-6


def _project_onto_resolved_modes(field):
    # the trace operator annihilates Fourier modes supported entirely on
    # {0, Nyquist} wavenumbers, so solutions are unique only modulo those
    n = field.shape[0]
    k = np.fft.fftfreq(n, 1.0 / n)
    degenerate = (k == 0) | (np.abs(k) == n // 2)
    mask = (degenerate[:, None, None, None] & degenerate[None, :, None, None]
            & degenerate[None, None, :, None] & degenerate[None, None, None, :])
    spec = np.fft.fftn(field)
    spec[mask] = 0.0
    return np.fft.ifftn(spec).real


def test_conformal_solver_matches_volume_normalization_oracle():
    # on the torus chart the exact solution of s_G = tr ddbar f is
    # f = -(log det g - mean): the rescaled metric has unit determinant and
    # vanishing Ricci curvature; the iterative solver must find it
    n = 16
    metric = MetricModel4T.from_kahler_potential(kahler_test_potential(n, 0.05))
    solution = conformal_scalar_flat(metric)
    log_det = np.log(metric.det)
    oracle = -(log_det - log_det.mean())
    gap = _project_onto_resolved_modes(solution.f) - _project_onto_resolved_modes(oracle)
    assert np.max(np.abs(gap)) < 1e-8


def test_conformal_solver_iteration_budget():
    n = 16
    metric = MetricModel4T.from_kahler_potential(kahler_test_potential(n, 0.1 / np.pi ** 2))
    with pytest.raises(ConvergenceError):
        conformal_scalar_flat(metric, max_iterations=1)


def test_conformal_solver_is_bit_deterministic():
    n = 8
    metric = MetricModel4T.from_kahler_potential(kahler_test_potential(n, 0.02))
    first = conformal_scalar_flat(metric)
    second = conformal_scalar_flat(
        MetricModel4T.from_kahler_potential(kahler_test_potential(n, 0.02)))
    assert np.array_equal(first.f, second.f)
    assert first.residual == second.residual
    assert first.iterations == second.iterations


def test_conformal_solution_requires_zero_mean():
    with pytest.raises(DescriptorError):
        ConformalSolution(f=np.ones((4, 4, 4, 4)), residual=0.0, solve_residual=0.0,
                          iterations=0, rounds=0)


# ---------------------------------------------------------------------------
# total-scalar identity after rescaling

def test_identity_check_zero_and_constant_factor():
    n = 16
    metric = MetricModel4T.from_kahler_potential(kahler_test_potential(n, 0.05))
    zero = conformal_total_scalar_identity_check(metric, np.zeros((n,) * 4))
    assert zero < 1e-10
    constant = conformal_total_scalar_identity_check(metric, np.full((n,) * 4, 0.3))
    assert constant < 1e-10


def test_identity_check_flat_metric():
    n = 8
    flat = MetricModel4T.flat(n)
    assert conformal_total_scalar_identity_check(flat, np.full((n,) * 4, -0.7)) < 1e-8


def test_identity_check_rejects_non_gauduchon_rescaling():
    n = 16
    flat = MetricModel4T.flat(n)
    f = np.broadcast_to(0.3 * np.sin(2 * np.pi * coords4(n)[0]), (n,) * 4).copy()
    with pytest.raises(SolvabilityError):
        conformal_total_scalar_identity_check(flat, f)


def test_trace_operator_matches_flat_laplacian():
    n = 16
    rng = np.random.default_rng(9)
    f = trig_field4(n, rng)
    flat_trace = TraceOperator(MetricModel4T.flat(n)).apply(f)
    from scalarflat.fourier import ddbar4_components
    d11, d22, _ = ddbar4_components(f)
    assert np.max(np.abs(flat_trace - (d11 + d22))) < 1e-12
