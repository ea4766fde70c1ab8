import math

import numpy as np
import pytest

import pndg


def test_moment_matrices_invariants():
    mm = pndg.moment_matrices(3)
    assert len(mm["A"]) == 3
    for a, abs_a in zip(mm["A"], mm["abs_A"]):
        assert a.shape == (16, 16)
        assert np.abs(a - a.T).max() <= 1e-12
        assert np.linalg.norm(a, 2) <= 1 + 1e-10
        assert np.abs(abs_a @ abs_a - a @ a).max() <= 1e-12
    checks = pndg.verify_moment_matrices(5)
    assert checks and all(c["pass"] for c in checks)


def test_recursion_at_a_direction():
    omega = np.array([0.36, 0.48, 0.8])
    m3 = pndg.eval_basis(omega, 3)
    m4 = pndg.eval_basis(omega, 4)
    a4 = pndg.moment_matrices(4)["A"]
    for i in range(3):
        assert np.abs(omega[i] * m3 - (a4[i] @ m4)[:16]).max() <= 1e-12
    with pytest.raises(pndg.InputError):
        pndg.eval_basis([1.0, 1.0, 0.0], 2)


def test_sphere_quadrature_weights():
    nodes, weights = pndg.sphere_quadrature(4)
    assert len(nodes) == 6 * 11
    assert sum(weights) == pytest.approx(4 * math.pi, rel=1e-14)


def test_radau_projection():
    c = pndg.radau_project(lambda x: x * x, -1.0, 1.0, 1, "right")
    for x in (-1.0, 0.0, 0.5, 1.0):
        assert pndg.evaluate_interval(c, -1.0, 1.0, x) == pytest.approx(1 / 3 + 2 * x / 3, abs=1e-14)
    with pytest.raises(pndg.InputError):
        pndg.radau_project(math.sin, 0.0, 1.0, 0, "right")


def test_config_round_trip_and_errors():
    cfg = pndg.StudyConfig()
    cfg.eps = [1.0, 1e-3]
    cfg.cells = [8, 16, 32]
    cfg.solver = "direct"
    assert pndg.parse_config(pndg.write_config(cfg)) == cfg
    with pytest.raises(pndg.ConfigError, match="sigma_t > sigma_a"):
        pndg.parse_config("[materials]\nsigma_t = 1\nsigma_a = 1\n")


def test_convergence_rates():
    cfg = pndg.StudyConfig()
    cfg.cells = [8, 16, 32, 64]
    cfg.eps = [1.0, 1e-6]
    rows = pndg.run_convergence(cfg, threads=2)
    assert len(rows) == 8
    for row in rows:
        if row["cells"] == 64:
            assert row["eoc_l2"] == pytest.approx(2.0, abs=0.2)
    assert pndg.eoc([0.5, 0.25], [4.0, 1.0])[0] == pytest.approx(2.0)


def test_sweeps():
    cfg = pndg.StudyConfig()
    cfg.cells = [16]
    cfg.eps = [1.0, 0.1, 0.01]
    rows = pndg.run_eps_sweep(cfg)
    ratios = [r["max_higher_moment_over_eps"] for r in rows]
    assert max(ratios) / min(ratios) <= 5.0
    cfg.oracle = "kinetic"
    cfg.eps = [1.0]
    errors = [r["moment_error"] for r in pndg.run_n_sweep(cfg)]
    assert all(b < a for a, b in zip(errors, errors[1:]))


def test_solver_failure_raises():
    cfg = pndg.StudyConfig()
    cfg.cells = [4, 8]
    cfg.solver = "iterative"
    cfg.max_iterations = 1
    cfg.restart = 1
    cfg.tolerance = 1e-13
    with pytest.raises(pndg.SolverError):
        pndg.run_convergence(cfg)
