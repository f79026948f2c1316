"""Acceptance criteria, each checked at its stated tolerance against an independent oracle."""

import random

import numpy as np
import pytest

import exact_oracle as ex
from maslov_wave import bundle as bd
from maslov_wave import config as cf
from maslov_wave import pipeline as pl
from maslov_wave import symplectic as sy
from maslov_wave import system as sm
from maslov_wave import wave as wv

S11 = sy.SymplecticSpace(1, 1)


# -- 1 ------------------------------------------------------------------------

@pytest.mark.criterion(1, "Remark matrix: sigma(QB) = {-1/4, -3/4}, <QBe1,e1> = 1, H1 true, H2' false, H2 true")
def test_remark_matrix():
    s = np.sqrt(35) / 4
    B = np.array([[1.0, s], [s, 2.0]])
    Q = np.diag([1.0, -1.0])
    QB = Q @ B
    # QB = [[1, s], [-s, -2]]: trace -1, determinant -2 + 35/16 = 3/16, roots of x^2 + x + 3/16
    ev = np.linalg.eigvals(QB)
    assert np.max(np.abs(ev.imag)) == 0.0
    assert np.max(np.abs(np.sort(ev.real) - [-0.75, -0.25])) <= 1e-12
    e1 = np.array([1.0, 0.0])
    assert abs(QB @ e1 @ e1 - 1.0) <= 1e-12
    assert sm.check_H1(B, Q).holds
    assert not sm.check_H2prime(B, Q).holds
    assert sm.check_H2(B, Q).holds


# -- 2 ------------------------------------------------------------------------

@pytest.mark.criterion(2, "random Lagrangian quadruples in R^4: Hormander, kernel identity, exact triple index")
@pytest.mark.parametrize("r", [1, 2])
def test_random_quadruples(r):
    rng = random.Random(2024 + r)
    space = sy.SymplecticSpace(2, r)
    degenerate = 0
    for _ in range(500):
        exact = [ex.random_rational_lagrangian(rng, 2, r) for _ in range(4)]
        l1, l2, k1, k2 = (sy.LagrangianFrame(ex.to_float(m), space) for m in exact)
        e1, e2, f1, f2 = exact

        # triple indices against the rational oracle
        t = {
            "l1l2k2": (sy.triple_index(space, l1, l2, k2), ex.triple_index(2, r, e1, e2, f2)),
            "l1l2k1": (sy.triple_index(space, l1, l2, k1), ex.triple_index(2, r, e1, e2, f1)),
            "l1k1k2": (sy.triple_index(space, l1, k1, k2), ex.triple_index(2, r, e1, f1, f2)),
            "l2k1k2": (sy.triple_index(space, l2, k1, k2), ex.triple_index(2, r, e2, f1, f2)),
        }
        for got, want in t.values():
            assert got == want

        # the two expressions of the Hormander index
        s1 = t["l1l2k2"][0] - t["l1l2k1"][0]
        s2 = t["l1k1k2"][0] - t["l2k1k2"][0]
        assert s1 == s2 == sy.hormander_index(space, l1, l2, k1, k2)

        # kernel of Q(alpha, beta; delta) is alpha∩beta + alpha∩delta
        _, m0, _ = sy.triple_form(space, l1, l2, k1).inertia(1e-9)
        want = ex.intersection_dim(e1, e2) + ex.intersection_dim(e1, f1) - ex.triple_intersection_dim(e1, e2, f1)
        assert m0 == want
        degenerate += want > 0
    assert degenerate >= 50


# -- 3 ------------------------------------------------------------------------

def _rotation(a, b):
    return sy.LagrangianPath(lambda t: sy.LagrangianFrame(np.array([np.cos(t), np.sin(t)]), S11), a, b)


@pytest.mark.criterion(3, "rotation paths: interior crossing +1, endpoint crossing +1, reversal -1")
def test_rotation_paths():
    y_axis = sy.LagrangianFrame(np.array([0.0, 1.0]), S11)
    x_axis = sy.LagrangianFrame(np.array([1.0, 0.0]), S11)
    interior = _rotation(-0.1, np.pi - 0.1)             # meets the y-axis at pi/2
    assert sy.clm_index_fixed(y_axis, interior) == 1
    endpoint = _rotation(0.0, np.pi)                     # meets the x-axis at both ends
    assert sy.clm_index_fixed(x_axis, endpoint) == 1
    const = sy.LagrangianPath.constant(y_axis, -0.1, np.pi - 0.1)
    assert sy.clm_index_pair(const.reversed(), interior.reversed()) == -1
    assert sy.clm_index_pair(const, interior) == 1


# -- 4 ------------------------------------------------------------------------

def _mu_closed_form(c, alpha, lam):
    # mu^2 + c mu + (alpha - lam) = 0
    disc = np.sqrt(complex(c * c + 4 * (lam - alpha)))
    return np.array([(-c + disc) / 2, (-c - disc) / 2])


@pytest.mark.criterion(4, "FHN at 50 lambda in [0, C]: (2,2) splitting, closed-form mu to 1e-10")
def test_fhn_end_splitting(fhn_bundle):
    b = fhn_bundle
    C = sm.bound_C(b)
    for lam in np.linspace(0.0, C, 50):
        for side, B in ((np.inf, b.B_plus), (-np.inf, b.B_minus)):
            A = sm.assemble_A(b, lam, side)
            Vp, Vm = sm.hyperbolic_splitting(A)
            assert (Vp.shape[1], Vm.shape[1]) == (2, 2)
            want = np.concatenate([_mu_closed_form(b.c, a, lam) for a in np.linalg.eigvals(b.Q @ B)])
            got = np.linalg.eigvals(A)
            d = np.abs(got[:, None] - want[None, :])
            assert max(d.min(axis=0).max(), d.min(axis=1).max()) <= 1e-10


# -- 5 ------------------------------------------------------------------------

@pytest.mark.criterion(5, "lambda = 0: |det| <= 1e-6, kernel dim 1, angle to wave tangent <= 1e-4, simple zero")
def test_translation_zero(fhn_analysis):
    tr = fhn_analysis.report.details["translation"]
    assert abs(tr["det0"]) <= 1e-6
    assert tr["kernel_dim"] == 1
    assert tr["angle"] <= 1e-4
    assert tr["simple"]


# -- 6 ------------------------------------------------------------------------

@pytest.mark.criterion(6, "FHN: N_plus = sf(S) = iota(w*) = 0; both theorem inequalities hold")
def test_fhn_counts_and_bounds(fhn_analysis):
    r = fhn_analysis.report
    n_plus, nbar, sf = r.counts["N_plus"], r.counts["N_bar_plus"], r.counts["sf_S"]
    iota = r.indices["maslov_def15"]
    assert n_plus == sf == iota == 0
    assert abs(iota) <= nbar
    assert abs(iota + r.indices["triple_LR_0"]) <= nbar
    assert r.identities["thm_central"] and r.identities["thm_main"] and r.identities["thm_fhn"]


# -- 7 ------------------------------------------------------------------------

@pytest.mark.criterion(7, "H2': L_R triple index 0 on the grid, M+ < 0 < M-, boundary path 0 by both routes")
def test_h2prime_consequences(fhn_bundle, fhn_analysis):
    r = fhn_analysis.report
    assert r.hypotheses["H2prime"]
    C = sm.bound_C(fhn_bundle)
    for lam in np.linspace(0.0, C, 50):
        assert bd.triple_LR(fhn_bundle, lam) == 0
        Mp, Mm = bd.M_matrices(fhn_bundle, lam)
        assert np.linalg.eigvalsh(0.5 * (Mp + Mp.T))[-1] < 0
        assert np.linalg.eigvalsh(0.5 * (Mm + Mm.T))[0] > 0
    assert r.indices["boundary_lambda"] == 0
    assert r.details["boundary_via_triple"] == 0


# -- 8 ------------------------------------------------------------------------

@pytest.mark.criterion(8, "-Sf = iCLM(tau) + iCLM(boundary)")
@pytest.mark.parametrize("which", ["fhn", "pt"])
def test_spectral_flow_identity(which, fhn_analysis, pt_analysis):
    r = (fhn_analysis if which == "fhn" else pt_analysis).report
    # the Maslov index of the wave is minus the CLM index along tau
    clm_tau = -r.indices["maslov_def15"]
    assert -r.counts["sf_S"] == clm_tau + r.indices["boundary_lambda"]
    if which == "pt":
        assert r.counts["sf_S"] == 1           # the identity is not satisfied vacuously


# -- 9 ------------------------------------------------------------------------

@pytest.mark.criterion(9, "doubling Xi, nodes and lambda grid: integers fixed, c to 1e-6, Nagumo speed to 1e-4")
def test_refinement(fhn_analysis, fhn_profile):
    fine = pl.run_analysis(cf.merged({
        "bvp": {"Xi": 80.0, "nodes": 4000},
        "sweep": {"lambda_grid": 100, "S_nodes": 4001, "tau_samples": 401},
    }))
    a, b = fhn_analysis.report, fine.report
    assert a.indices == b.indices and a.counts == b.counts and a.identities == b.identities
    for k in ("H1", "H2", "H2prime", "lemma31", "d_gt_gamma_inv2"):
        assert a.hypotheses[k] == b.hypotheses[k]
    assert abs(fine.profile.c - fhn_profile.c) <= 1e-6
    for cfgb in (wv.BVPConfig(), wv.BVPConfig(Xi=80.0, nodes=4000)):
        assert abs(wv.nagumo_front(0.25, cfgb).c - np.sqrt(2) * (0.5 - 0.25)) <= 1e-4


# -- 10 -----------------------------------------------------------------------

@pytest.mark.criterion(10, "standing pulse: both Maslov index definitions agree")
def test_pulse_definitions_agree(pulse_bundle):
    T = bd._default_T(pulse_bundle)
    traj = bd.evolve_frames(pulse_bundle, 0.0, T, xi_stop=T)
    d15 = bd.maslov_def15(pulse_bundle, traj=traj).index
    d14 = bd.maslov_def14(pulse_bundle, traj=traj).index
    assert d14 == d15 == 1
