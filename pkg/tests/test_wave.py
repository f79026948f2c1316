import json
from dataclasses import replace

import numpy as np
import pytest

from maslov_wave import system as sm
from maslov_wave import wave as wv
from maslov_wave.errors import InputError, ParameterRegimeError, ProfileError


def test_equilibria_fhn():
    u1, u2, u3 = wv.find_equilibria_fhn(0.25, 10.0)
    # nonzero roots of 10u^2 - 12.5u + 3.5 = 0
    disc = np.sqrt(12.5 ** 2 - 4 * 10 * 3.5)
    assert u1 == 0.0
    assert abs(u2 - (12.5 - disc) / 20) <= 1e-14 and abs(u3 - (12.5 + disc) / 20) <= 1e-14
    assert abs(u2 - 0.42344) < 1e-5 and abs(u3 - 0.82656) < 1e-5
    f = lambda u: u * (1 - u) * (u - 0.25)
    for u in (u1, u2, u3):
        assert abs(u - 10.0 * f(u)) <= 1e-12


def test_equilibria_below_fold():
    # the reduced quadratic gamma u^2 - gamma (1+a) u + gamma a + 1 has negative discriminant
    with pytest.raises(ParameterRegimeError):
        wv.find_equilibria_fhn(0.25, 2.0)


def test_bvp_config_validation():
    with pytest.raises(InputError):
        wv.BVPConfig(Xi=0.0)
    with pytest.raises(InputError):
        wv.BVPConfig(nodes=50)


def test_fhn_front_invariants(fhn_profile):
    p = fhn_profile
    cfg = wv.BVPConfig()
    assert p.residual_norm <= cfg.tol_res
    assert p.c > 0
    assert np.max(np.abs(p.w[0] - p.w_minus.w)) <= cfg.tol_bc
    assert np.max(np.abs(p.w[-1] - p.w_plus.w)) <= cfg.tol_bc
    _, _, u3 = wv.find_equilibria_fhn(0.25, 10.0)
    # c > 0 forces the reflected orientation: 0 at -inf, (u3, u3/gamma) at +inf
    assert np.allclose(p.w_minus.w, 0.0) and np.allclose(p.w_plus.w, [u3, u3 / 10.0])
    assert np.all(np.diff(p.w[:, 0]) > -1e-12)      # monotone in u
    # stored derivative agrees with divided differences to O(h^2)
    h = p.xi[1] - p.xi[0]
    dd = np.diff(p.w, axis=0) / h
    mid = 0.5 * (p.w_prime[1:] + p.w_prime[:-1])
    assert np.max(np.abs(dd - mid)) <= 10 * h * h


def test_fhn_phase_anchor(fhn_profile):
    _, u2, _ = wv.find_equilibria_fhn(0.25, 10.0)
    spl = fhn_profile.interpolant()
    assert abs(spl(0.0)[0] - u2) <= 1e-10


def test_translation_mode_solves_linearization(fhn_profile):
    p = fhn_profile
    w2 = wv._second_derivative(p)
    w3 = wv._fd_derivative(p.xi, w2)
    jac = np.array([p.system.reaction_jacobian(w) @ v for w, v in zip(p.w, p.w_prime)])
    assert np.max(np.abs(w3 + p.c * w2 + jac)) <= 10 * wv.BVPConfig().tol_res


def test_exponential_end_convergence(fhn_profile, fhn_bundle):
    p = fhn_profile
    for side, mask in ((np.inf, (p.xi > 10) & (p.xi < 25)), (-np.inf, (p.xi < -10) & (p.xi > -25))):
        rest = p.w_plus.w if side > 0 else p.w_minus.w
        dist = np.linalg.norm(p.w - rest, axis=1)
        slope = np.polyfit(p.xi[mask], np.log(dist[mask]), 1)[0]
        ev = np.linalg.eigvals(sm.assemble_A(fhn_bundle, 0.0, side)).real
        rate = ev[ev < 0].max() if side > 0 else ev[ev > 0].min()
        assert abs(slope - rate) <= 0.2 * abs(rate)


def test_nagumo_refinement_order():
    res = [wv.nagumo_front(config=wv.BVPConfig(Xi=20.0, nodes=N, tol_res=1e-3)).residual_norm
           for N in (400, 800)]
    assert res[1] <= res[0] / 4                         # at least second order


def test_nagumo_profile_closed_form():
    p = wv.nagumo_front(0.25)
    want = wv.nagumo_profile(p.xi, 0.25)
    assert np.max(np.abs(p.w[:, 0] - want)) <= 1e-6


def test_standing_pulse():
    p = wv.standing_pulse()
    assert p.c == 0.0 and p.residual_norm <= 1e-9
    assert np.isclose(p.w[:, 0].max(), 1.0)


def test_profile_roundtrip(tmp_path, fhn_profile):
    csv, meta = wv.save_profile(fhn_profile, tmp_path / "w.csv", tmp_path / "w.json")
    q = wv.load_profile(csv, meta)
    assert np.array_equal(q.xi, fhn_profile.xi)
    assert np.array_equal(q.w, fhn_profile.w)
    assert np.array_equal(q.w_prime, fhn_profile.w_prime)
    assert q.c == fhn_profile.c
    assert q.residual_norm == fhn_profile.residual_norm
    assert np.array_equal(q.w_plus.w, fhn_profile.w_plus.w)
    assert open(csv).readline().strip() == "xi,w1,w2,dw1,dw2"


def test_corrupted_speed_rejected(tmp_path, fhn_profile):
    csv, meta = wv.save_profile(replace(fhn_profile, c=fhn_profile.c * 1.5), tmp_path / "w.csv")
    with pytest.raises(ProfileError, match="not a wave"):
        wv.load_profile(csv, meta)


def test_bad_metadata_rejected(tmp_path, fhn_profile):
    csv, meta = wv.save_profile(fhn_profile, tmp_path / "w.csv")
    m = json.loads(meta.read_text())
    del m["c"]
    meta.write_text(json.dumps(m))
    with pytest.raises(ProfileError):
        wv.load_profile(csv, meta)


def test_bad_header_rejected(tmp_path, fhn_profile):
    csv, meta = wv.save_profile(fhn_profile, tmp_path / "w.csv")
    lines = csv.read_text().splitlines()
    lines[0] = "xi,u,v,du,dv"
    csv.write_text("\n".join(lines) + "\n")
    with pytest.raises(ProfileError, match="header"):
        wv.load_profile(csv, meta)
