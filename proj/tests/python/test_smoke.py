"""Smoke tests of the python module against values the C++ suites pin down."""

import numpy as np
import pytest

import curldirac as cd

PSI = np.array([1.0, 0.2 + 0.1j, 0.3 - 0.2j, 0.8 + 0.1j], dtype=complex)


def test_frame_roundtrip():
    t = cd.frame_from_bispinor(PSI, tau=1)
    assert t.rho > 0
    assert cd.orthonormality_defect(t.f0, t.f1, t.f2, t.f3) < 1e-12
    back = cd.bispinor_from_frame(t)
    gap = min(np.linalg.norm(back - PSI), np.linalg.norm(back + PSI))
    assert gap < 1e-12
    # explicit argument form agrees with the struct form
    back2 = cd.bispinor_from_frame(t.rho, t.theta, t.tau, t.f0, t.f1, t.f2)
    assert np.allclose(back2, back)


def test_degenerate_bispinor_raises():
    with pytest.raises(ValueError):
        cd.frame_from_bispinor(np.array([1, 0, 0, 0], dtype=complex))


def test_frame_equivariance_under_rotation():
    l = cd.LorentzTransform.rotation(0.7, np.array([0.0, 0.0, 1.0]))
    t = cd.frame_from_bispinor(PSI, tau=1)
    moved = cd.transform_frame(l, t)
    direct = cd.frame_from_bispinor(l.apply_bispinor(PSI), tau=moved.tau)
    assert abs(moved.rho - direct.rho) < 1e-12
    assert np.allclose(moved.f0, direct.f0, atol=1e-12)
    assert np.allclose(moved.f3, direct.f3, atol=1e-12)


def test_identity_residual_constant_field():
    st = cd.identity_residual(lambda x: PSI, n=5)
    assert st.skipped == 0
    assert st.max_residual < 1e-12


def test_identity_residual_converges():
    def psi(x):
        s = np.sin(0.4 * x[0] - 0.3 * x[2])
        c = np.cos(0.5 * x[1] + 0.2 * x[3])
        return PSI + 0.2 * np.array([s, c, s * c, s - c], dtype=complex)

    def pot(x):
        return 0.3 * np.array(
            [np.cos(0.3 * x[1]), np.sin(0.2 * x[0]), np.cos(0.4 * x[3]), np.sin(0.3 * x[2])]
        )

    coarse = cd.identity_residual(psi, pot, n=9)
    fine = cd.identity_residual(psi, pot, n=17)
    assert coarse.skipped == 0 and fine.skipped == 0
    ratio = coarse.max_residual / fine.max_residual
    assert 2.5 < ratio < 5.5


def test_pencil_gap_and_band():
    g = cd.PlanarGrid(6.0, 17)
    pot = cd.PlanarPotential.analytic(g, "gauss", 0.5)
    pencil = cd.assemble_pencil(g, pot, 1.0, 1)
    sp = cd.pencil_spectrum(pencil, g)
    assert len(sp.gap) >= 1
    ground = sp.gap[0]
    assert 0 < ground.eps < 1
    assert ground.residual < 1e-8
    gap_r = {round(1.0 / q.eps, 9) for q in sp.gap}
    for mu in sp.reciprocal:
        inside = abs(mu) <= 1.0 + sp.delta_box + 1e-12
        assert inside or round(mu, 9) in gap_r


def test_pencil_rejects_deep_well():
    g = cd.PlanarGrid(6.0, 17)
    pot = cd.PlanarPotential.analytic(g, "gauss", 1.5)
    with pytest.raises(ValueError):
        cd.assemble_pencil(g, pot, 1.0, 1)


def test_symbol_det_closed_form():
    rng = np.random.default_rng(5)
    for _ in range(20):
        xi = rng.uniform(-3, 3, size=2)
        eps = rng.uniform(-2, 2)
        expected = xi @ xi + 1.0 - eps * eps
        assert abs(cd.symbol_det(xi, eps, 1.0) - expected) < 1e-12 * max(1.0, abs(expected))


def test_weyl_residual_decreases_with_width():
    g = cd.PlanarGrid(96.0, 257)
    pencil = cd.assemble_pencil(g, cd.PlanarPotential.zero(g), 1.0, 1)
    res = [
        cd.weyl_residual(cd.make_weyl_packet(g, 1.25, 1.0, 1, w), pencil, g, 1.25)
        for w in (8.0, 16.0, 32.0)
    ]
    assert res[0] > res[1] > res[2]


def test_squared_identity():
    g = cd.PlanarGrid(5.0, 15)
    rep = cd.squared_identity_residual(g, cd.PlanarPotential.zero(g), 1.0, 1, 0.37, 11)
    assert rep.residual < 1e-12


def test_radial_routes_coincide_at_k0():
    grid = cd.RadialGrid(20.0, 2000)
    ch = cd.RadialChannel(0, 1)
    well = cd.ScaledPotential.gaussian_well(0.6, 0.3)
    a = cd.assemble_radial_matrix("model", ch, well, grid, 0.9)
    b = cd.assemble_radial_matrix("kg", ch, well, grid, 0.9)
    assert np.max(np.abs(a.diag - b.diag)) < 1e-14 * np.max(np.abs(a.diag))
    assert np.max(np.abs(a.off - b.off)) < 1e-14 * np.max(np.abs(a.off))
    gm = cd.solve_bound_states("model", ch, well, grid, 1)
    gk = cd.solve_bound_states("kg", ch, well, grid, 1)
    assert gm[0].nodes == 0
    assert abs(gm[0].eps - gk[0].eps) < 1e-12
    assert gm[0].eps == pytest.approx(0.883362716412166, abs=1e-12)


def test_scaling_sweep_fit():
    ch = cd.RadialChannel(1, 1)
    res = cd.scaling_sweep(ch, cd.ScaledPotential.gaussian(0.5), [0.2, 0.15, 0.1], 1.0)
    assert res.usable_alphas == 3
    assert res.reliable
    deltas = [r.delta for r in res.rows]
    assert deltas == sorted(deltas, reverse=True)
    assert res.e_ratio_spread < 0.2
    with pytest.raises(ValueError):
        cd.scaling_sweep(ch, cd.ScaledPotential.gaussian(0.5), [0.2], 1.0)
