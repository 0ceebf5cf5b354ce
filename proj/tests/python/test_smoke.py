import math

import numpy as np
import pytest

import bishopdisc as bd

JST2 = {"n": 2, "standard": True}
QUADRIC2 = {"n": 2, "m": 1, "terms": [{"monomial": [0, 2, 0], "coeff": [0.5]},
                                      {"monomial": [0, 0, 2], "coeff": [0.5]}]}


def test_cauchy_green_inverts_dbar():
    grid = bd.DiscGrid(64, 16)
    g = bd.DiscFunction.from_function(grid, lambda z: z * z * z.conjugate() + 1.0)
    assert (bd.dbar(bd.cauchy_green(g)) - g).sup() < 1e-10


def test_cauchy_green_of_one():
    grid = bd.DiscGrid(32, 8)
    t = bd.cauchy_green(bd.DiscFunction.from_function(grid, lambda z: 1.0))
    nodes = grid.nodes()
    assert np.max(np.abs(t.values - nodes.conj())) < 1e-12


def test_schwarz():
    theta = 2 * math.pi * np.arange(64) / 64
    coeffs = bd.schwarz(1.0 + np.cos(theta))
    assert coeffs[0] == pytest.approx(1.0, abs=1e-12)
    assert coeffs[1] == pytest.approx(1.0, abs=1e-12)


def test_q_matrix_of_standard():
    j = np.array([[0.0, -1.0], [1.0, 0.0]])
    assert np.abs(bd.q_matrix(j)).max() == 0.0


def test_phi_standard_is_identity():
    grid = bd.DiscGrid(32, 8)
    f = [bd.DiscFunction.from_function(grid, lambda z: 0.1 * z), bd.DiscFunction.from_function(grid, lambda z: z * z)]
    g = bd.phi_forward(f, JST2)
    assert max((a - b).sup() for a, b in zip(f, g)) == 0.0
    assert bd.phi_inverse(g, JST2)["iterations"] == 1


def test_solve_bishop_on_the_quadric():
    grid = bd.DiscGrid(32, 12)
    a, b = 0.05, 0.1
    sol = bd.solve_bishop(JST2, QUADRIC2, [np.array([a, b], dtype=complex)], [0.2], grid)
    assert sol["boundary_residual"] <= 1e-10
    z = sol["disc"][0]
    expected = 0.5 * (a * a + b * b) + 0.2j + a * b * 0.3
    assert abs(z.eval(0.3) - expected) < 1e-10


def test_quadric_family_and_ranks():
    p = bd.boggess_pitts_point(0.1, 1.0, np.zeros(1), 0.0, 2, -1.0)
    assert np.abs(p).max() < 1e-14
    assert bd.attachment_ranks(0.1, 2) == (4, 3)


def test_scenario_report():
    rep = bd.run_scenario({"scenario": "convergence", "structure": {"n": 3, "standard": True}, "m": 1})
    assert rep["aggregates"]["exact"] is True


def test_errors_are_raised():
    with pytest.raises(bd.Error):
        bd.run_scenario({"scenario": "unknown"})
