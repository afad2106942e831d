"""End-to-end checks of the published behavior: oracle equivalences, scaling, stability, sanity."""

import numpy as np
import pytest

from app.bench.config import BenchConfig
from app.bench.reporting.csv_report import emit_csv
from app.bench.sweep import run_sweep
from app.landmarks.kmeans import kmeanspp_select
from app.landmarks.models import LandmarkSet
from app.landmarks.stability import stability_experiment
from app.optimize.descent import gradient_descent
from app.optimize.grid import grid_search, stage_windows
from app.optimize.models import GridSpec, TuneMethod
from app.optimize.oracle import rmse_optimal_epsilon
from app.optimize.tuner import TuneSettings, default_jitter, tune_shape_parameter
from app.rbf.kernel import assemble_reduced, fit, nystrom_reconstruct, rms_error
from app.rbf.loocv import loocv_full_closed_form, loocv_naive, loocv_nystrom, woodbury_factors
from app.rbf.models import KernelSpec, NodeSet
from app.testbed.functions import eval_function, get_function
from app.testbed.nodes import ExperimentDesign, NodeScheme, make_nodes
from app.utils.timing import median_wall_time
from tests.test_optimize import analytic, log_quadratic


def test_closed_form_matches_naive_refits():
    rng = np.random.default_rng(1)
    for _ in range(20):
        dim = int(rng.integers(1, 3))
        n = int(rng.choice([20, 50, 100]))
        nodes = NodeSet(rng.random((n, dim)))
        f = rng.standard_normal(n)
        for eps in rng.uniform(0.1, 50.0, size=5):
            # random nodes with eps near 0.1 make A numerically singular at the default jitter,
            # where both paths only agree to rounding noise; 1e-6 keeps A factorizable
            spec = KernelSpec(epsilon=float(eps), jitter=1e-6)
            naive = loocv_naive(nodes, f, spec)
            fast = loocv_full_closed_form(nodes, f, spec)
            assert naive.valid and fast.valid
            assert np.all(np.abs(fast.residuals - naive.residuals) <= 1e-6 * (1.0 + np.abs(naive.residuals)))


def test_closed_form_matches_naive_refits_at_default_jitter():
    cases = [
        NodeSet(np.linspace(0.0, 1.0, 30)[:, None]),
        NodeSet(np.stack(np.meshgrid(np.linspace(0.0, 1.0, 5), np.linspace(0.0, 1.0, 5)), -1).reshape(-1, 2)),
    ]
    for nodes in cases:
        f = eval_function(get_function("f1" if nodes.dim == 1 else "f5"), nodes.points)
        for eps in (3.0, 10.0, 30.0):
            spec = KernelSpec(epsilon=eps, jitter=default_jitter(nodes.dim))
            naive = loocv_naive(nodes, f, spec)
            fast = loocv_full_closed_form(nodes, f, spec)
            assert naive.valid and fast.valid
            assert np.all(np.abs(fast.residuals - naive.residuals) <= 1e-6 * (1.0 + np.abs(naive.residuals)))


def test_woodbury_matches_dense_inverse():
    rng = np.random.default_rng(2)
    for i in range(10):
        dim = 1 + i % 2
        n = int(rng.integers(80, 301))
        m = int(rng.integers(10, 41))
        lam = (1e-6, 1e-4)[i % 2]
        nodes = NodeSet(rng.random((n, dim)))
        lm = kmeanspp_select(nodes, m, seed=i)
        c, w = assemble_reduced(nodes, lm.indices, KernelSpec(epsilon=20.0 if dim == 1 else 10.0))
        dense = nystrom_reconstruct(c, w) + lam * np.eye(n)
        inv = np.linalg.inv(0.5 * (dense + dense.T))
        f = rng.standard_normal(n)

        wf = woodbury_factors(c, w, lam)
        u, d = wf.apply_inverse(f), wf.inverse_diagonal()
        assert np.linalg.norm(u - inv @ f) <= 1e-8 * np.linalg.norm(inv @ f)
        assert np.linalg.norm(d - np.diag(inv)) <= 1e-8 * np.linalg.norm(np.diag(inv))


def test_nystrom_with_every_node_is_the_full_form():
    rng = np.random.default_rng(3)
    # spacing times eps stays near 2, so A and M = A + A^2 / lambda are well conditioned
    for n, eps in ((16, 30.0), (32, 60.0), (64, 120.0)):
        nodes = NodeSet(np.linspace(0.0, 1.0, n)[:, None])
        f = rng.standard_normal(n)
        lm = LandmarkSet(indices=np.arange(n), assignments=np.arange(n), inertia=0.0, seed=0)
        nys = loocv_nystrom(nodes, f, lm, eps, 1e-3)
        full = loocv_full_closed_form(nodes, f, KernelSpec(epsilon=eps, jitter=1e-3))
        assert nys.valid and full.valid
        np.testing.assert_allclose(nys.residuals, full.residuals, rtol=1e-6, atol=1e-12)


@pytest.mark.slow
def test_nystrom_scales_linearly_full_cubically():
    f = get_function("f2")

    def cost(n, nystrom):
        nodes = make_nodes(1, n, NodeScheme.UNIFORM, seed=n)
        values = eval_function(f, nodes.points)
        if nystrom:
            lm = kmeanspp_select(nodes, 200, seed=0)
            run = lambda: loocv_nystrom(nodes, values, lm, 30.0, 1e-6)  # noqa: E731
        else:
            run = lambda: loocv_full_closed_form(nodes, values, KernelSpec(epsilon=30.0, jitter=1e-14))  # noqa: E731
        run()  # warm-up
        return median_wall_time(run, 5)[1]

    assert cost(4096, True) / cost(1024, True) <= 6.0
    assert cost(4096, False) / cost(1024, False) >= 20.0


@pytest.mark.slow
@pytest.mark.parametrize("dim,floor", [(1, 0.85), (2, 0.80), (3, 0.75)])
def test_landmark_stability(dim, floor):
    nodes = make_nodes(dim, 4096, NodeScheme.UNIFORM, seed=dim)
    report = stability_experiment(nodes, 200, base_seed=0, workers=4)
    assert report.mean_nmi >= floor
    assert report.std_nmi <= 0.1


def test_grid_contract():
    grid = GridSpec()
    result = grid_search(analytic(lambda e: (e - 7.0) ** 2), grid)
    coarse, fine = stage_windows(result, grid)
    assert len(coarse) == 30 and coarse[0] == 1e-5 and coarse[-1] == 1e3
    assert len(fine) == 50
    eps_c = coarse[int(np.argmin((coarse - 7.0) ** 2))]
    assert fine[0] == pytest.approx(0.5 * eps_c) and fine[-1] == pytest.approx(2.0 * eps_c)
    assert abs(result.epsilon_star - 7.0) <= fine[1] - fine[0]


def test_gradient_descent_contract():
    objective = analytic(log_quadratic(5.0))
    result = gradient_descent(objective, 1.0)
    assert result.epsilon_star == pytest.approx(5.0, rel=1e-4)
    assert result.iterations <= 100
    accepted = [p.objective for p in result.trace if p.accepted]
    assert all(b < a for a, b in zip(accepted, accepted[1:]))
    assert result.evaluations <= 100 * 18


def test_runge_selection_is_near_rms_optimal():
    f = get_function("f2")
    design = ExperimentDesign(f, [512])
    nodes = design.nodes(512)
    values = eval_function(f, nodes.points)
    x_test = design.test_set()
    truth = eval_function(f, x_test)
    jitter = 1e-14

    result = tune_shape_parameter(nodes, values, TuneMethod.GRID_FULL, TuneSettings(jitter=jitter))
    rmse = rms_error(fit(nodes, values, KernelSpec(epsilon=result.epsilon_star, jitter=jitter)), x_test, truth)
    _, rmse_best, _, _ = rmse_optimal_epsilon(nodes, values, x_test, truth, jitter)
    assert rmse <= 2.0 * rmse_best


def test_accuracy_improves_with_n_on_f3():
    records = run_sweep(BenchConfig(
        functions=["f3"],
        methods=[TuneMethod.GRID_FULL],
        full_sizes=[64, 512],
        record_timing=False,
    ))
    small, large = records
    assert small.ok and large.ok
    assert large.rmse * 10.0 <= small.rmse


def test_sweep_csv_is_byte_identical_across_worker_counts(tmp_path):
    def run(workers, name):
        cfg = BenchConfig(
            functions=["f1", "f5"],
            methods=[TuneMethod.GRID_FULL, TuneMethod.GD_NYSTROM],
            full_sizes=[32, 64],
            nystrom_sizes=[96],
            m=16,
            n_test=500,
            workers=workers,
            record_timing=False,
        )
        return emit_csv(run_sweep(cfg), tmp_path / name).read_bytes()

    first = run(1, "a.csv")
    assert first == run(1, "b.csv")
    assert first == run(3, "c.csv")
