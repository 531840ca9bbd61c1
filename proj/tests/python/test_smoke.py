import math
import os

import pytest

import telegraph as tg


def base():
    return tg.ProcessParams(mu0=-1.0, mu1=1.0, lambda0=1.0, lambda1=1.0, B=1.0)


def test_roots_example():
    r = tg.roots(base(), 1.0)
    assert abs(r.m.real - (math.sqrt(2) - 1)) < 1e-14
    assert abs(r.q.real - 8.0) < 1e-13


def test_boundary_transforms_and_mc_agree():
    p = base()
    init = tg.InitialCondition.point(0.5, tg.Regime.Up, 1.0)
    bt = tg.solve_boundary_transforms(p, init, 1.0)
    est = tg.estimate_transform(p, init, [1.0], 60.0, n_paths=50000, seed=3)[0]
    assert abs(est.psi_hat - bt.psi_hat.real) < 4 * est.psi_err


def test_field_engines():
    p = base()
    init = tg.InitialCondition.point(0.5, tg.Regime.Up, 1.0)
    x = [i / 20 for i in range(21)]
    mc = tg.estimate_field(p, init, [0.0, 1.0], x, n_paths=5000, seed=1)
    assert mc.F1.shape == (2, 21)
    assert mc.F1[0, 0] == 1.0
    pde = tg.solve_pde(p, init, nx=400, cfl=1.0, t_max=1.0, snapshot_times=[1.0])
    assert pde.F0.shape == (1, 401)
    assert pde.F0[0, -1] == 0.0


def test_invert_python_callable():
    cfg = tg.IltConfig()
    values, errors = tg.invert(lambda p: 1 / (p + 1), [1.0, 2.0], cfg)
    assert abs(values[0] - math.exp(-1)) < 1e-6
    assert len(errors) == 2


def test_errors_surface_as_exception():
    with pytest.raises(tg.TelegraphError):
        tg.validate_params(1.0, 1.0, 1.0, 1.0, 1.0, True)


def test_run_cli_validate():
    root = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    assert tg.run_cli(["validate", "--config", os.path.join(root, "configs", "example.cfg"), "--quiet"]) == 0
