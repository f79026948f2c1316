"""End-to-end runs behind the command line: hypothesis check and full analysis."""

from __future__ import annotations

import contextlib
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from . import bundle as bd
from . import spectral as spc
from . import symplectic as sy
from . import wave as wv
from .config import config_hash
from .errors import HypothesisError, InputError, PipelineError
from .system import (
    LinearizedBundle,
    bound_C,
    check_H1,
    check_H2,
    check_H2prime,
    fhn_system,
    nagumo_system,
)

NOTES = [
    "eigenvalue search restricted to the real interval [0, C]",
    "bounds of the main and central theorems use N_bar_plus (real nonnegative eigenvalues)",
    "spectral flow of S_lambda and the Evans count both start at delta0; the lambda = 0 kernel is "
    "counted separately in N_bar_plus",
    "the lambda = 0 translation crossing of (E^s(tau), E^u(-tau)) lies at tau = 0 and enters as a "
    "left-end crossing",
]


@contextlib.contextmanager
def stage(name: str):
    """Re-raise any failure inside the block as PipelineError(name)."""
    try:
        yield
    except PipelineError:
        raise
    except Exception as exc:  # noqa: BLE001 - every failure is reported with its stage
        raise PipelineError(name, exc) from exc


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------


def _rest_matrices(sysb: Dict[str, Any]):
    """(space label, Q, B_minus, B_plus, extra) for a system config block."""
    kind = sysb["kind"]
    if kind == "matrices":
        n, r = sysb["n"], sysb["r"]
        Q = np.diag([1.0] * r + [-1.0] * (n - r))
        return Q, np.array(sysb["B_minus"], float), np.array(sysb["B_plus"], float), {}
    if kind == "fhn":
        a, g, d = sysb["a"], sysb["gamma"], sysb["d"]
        sysm = fhn_system(a, g, d)
        _, _, u3 = wv.find_equilibria_fhn(a, g)
        Bm = sysm.B(np.array([u3, u3 / g]))
        Bp = sysm.B(np.zeros(2))
        return sysm.Q, Bm, Bp, {"d_gt_gamma_inv2": bool(d > g ** -2)}
    if kind == "nagumo":
        sysm = nagumo_system(sysb["a"])
        return sysm.Q, sysm.B(np.ones(1)), sysm.B(np.zeros(1)), {}
    raise InputError(f"unknown system kind {kind!r}")


@dataclass
class CheckResult:
    verdicts: Dict[str, Dict[str, Any]]
    required: List[str]
    ok: bool

    def lines(self) -> List[str]:
        out = []
        for key, v in self.verdicts.items():
            if isinstance(v, dict):
                ev = ", ".join(_fmt_complex(z) for z in v["eigenvalues"])
                state = "-" if v["holds"] is None else ("true" if v["holds"] else "false")
                out.append(f"{key:<22} {state:<6} margin {v['margin']:.6g}  eig [{ev}]")
            else:
                out.append(f"{key:<22} {'true' if v else 'false'}")
        out.append(f"required: {', '.join(self.required)} -> {'ok' if self.ok else 'FAILED'}")
        return out


def _fmt_complex(z) -> str:
    z = complex(z)
    if abs(z.imag) < 1e-14:
        return f"{z.real:.6g}"
    return f"{z.real:.6g}{z.imag:+.6g}j"


def run_check(cfg: Dict[str, Any]) -> CheckResult:
    Q, Bm, Bp, extra = _rest_matrices(cfg["system"])
    verdicts: Dict[str, Any] = {}
    overall: Dict[str, bool] = {}
    for name, fn in (("H1", check_H1), ("H2", check_H2), ("H2prime", check_H2prime)):
        both = True
        for side, B in (("minus", Bm), ("plus", Bp)):
            v = fn(B, Q)
            verdicts[f"{name}[{side}]"] = {"holds": bool(v.holds), "margin": float(v.margin),
                                          "eigenvalues": [complex(z) for z in np.atleast_1d(v.eigenvalues)]}
            both &= bool(v.holds)
        overall[name] = both
    for side, B in (("minus", Bm), ("plus", Bp)):
        verdicts[f"sigma(QB)[{side}]"] = {
            "holds": None, "margin": float(-np.max(np.linalg.eigvals(Q @ B).real)),
            "eigenvalues": [complex(z) for z in np.linalg.eigvals(Q @ B)],
        }
    verdicts.update(extra)
    overall.update(extra)
    required = [k for k in cfg["check"]["require"] if k in overall]
    ok = all(overall[k] for k in required)
    return CheckResult(verdicts, required, ok)


# ---------------------------------------------------------------------------
# wave
# ---------------------------------------------------------------------------


def bvp_config(cfg: Dict[str, Any]) -> wv.BVPConfig:
    b = cfg["bvp"]
    return wv.BVPConfig(Xi=float(b["Xi"]), nodes=int(b["nodes"]), tol_newton=float(b["tol_newton"]),
                        tol_bc=float(b["tol_bc"]), tol_res=float(b["tol_res"]))


def obtain_wave(cfg: Dict[str, Any]) -> wv.WaveProfile:
    """Solve for the front or load the profile named in the config."""
    prof = cfg.get("profile") or {}
    if prof.get("csv"):
        return wv.load_profile(prof["csv"], prof.get("meta"), config=bvp_config(cfg))
    sysb = cfg["system"]
    if sysb["kind"] == "fhn":
        return wv.fhn_front(sysb["a"], sysb["gamma"], sysb["d"], bvp_config(cfg),
                            orientation=sysb.get("orientation", "auto"))
    if sysb["kind"] == "nagumo":
        return wv.nagumo_front(sysb["a"], bvp_config(cfg))
    raise InputError("a wave needs a 'fhn' or 'nagumo' system or a profile file")


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------


@dataclass
class Analysis:
    report: spc.IndexReport
    tables: Dict[str, List[Dict[str, Any]]] = field(default_factory=dict)
    profile: Optional[wv.WaveProfile] = None


def _form_check(traj, crossings) -> float:
    """Largest gap between numeric crossing forms and the flow formula -<(H(tau)+H(-tau)) v, v>."""
    worst = 0.0
    for c in crossings:
        V = c.form.basis
        G = bd.analytic_pair_form(traj, c.t0, V)
        worst = max(worst, float(np.max(np.abs(G - c.form.gram))))
    return worst


def analyze_bundle(bundle: LinearizedBundle, cfg: Dict[str, Any],
                   provenance: Optional[Dict[str, Any]] = None,
                   seed: Optional[int] = None) -> Analysis:
    """Index and counting pipeline on a linearised bundle (any source)."""
    sweep = cfg["sweep"]
    delta0 = float(sweep["delta0"])
    ngrid = int(sweep["lambda_grid"])
    taus = int(sweep["tau_samples"])
    rng = np.random.default_rng(cfg.get("seed", 0) if seed is None else seed)
    tables: Dict[str, List[Dict[str, Any]]] = {}
    details: Dict[str, Any] = {}

    with stage("hypotheses"):
        hyp = spc.end_hypotheses(bundle)
        if not hyp["H1"]:
            raise HypothesisError("H1 fails at an end state; indices are undefined")
        C_override = sweep.get("C")
        C = float(C_override) if C_override else bound_C(bundle)
        T = bd._default_T(bundle)
        prof = bundle.profile
        sysm = prof.system if prof is not None else None
        if sysm is not None and sysm.label == "fhn":
            hyp["d_gt_gamma_inv2"] = bool(sysm.params["d"] > sysm.params["gamma"] ** -2)
        else:
            hyp["d_gt_gamma_inv2"] = None
        lam_grid = np.linspace(0.0, C, ngrid)

    with stage("bundle"):
        traj0 = bd.evolve_frames(bundle, 0.0, T, xi_stop=T)
        details["isotropy_defect"] = traj0.isotropy_defect(101)
        m15 = bd.maslov_def15(bundle, traj=traj0, samples=taus)
        details["crossing_form_check"] = _form_check(traj0, m15.crossings)
        tables["crossings_def15"] = bd.crossing_rows(0.0, m15.crossings)
        try:
            m14 = bd.maslov_def14(bundle, None, traj=traj0)
            m14_index = m14.index
            details["tau0"] = m14.tau0
            tables["crossings_def14"] = bd.crossing_rows(0.0, m14.crossings)
        except HypothesisError as exc:
            m14_index = None
            details["def14_unavailable"] = str(exc)
            tables["crossings_def14"] = []
        angles = []
        for t in np.linspace(0.0, T, taus):
            th = sy.principal_angles(traj0.Es(t).Z, traj0.Eu(-t).Z)
            angles.append({"tau": f"{t:.10g}", **{f"angle{i + 1}": f"{a:.10g}" for i, a in enumerate(th)}})
        tables["principal_angles"] = angles

    with stage("boundary"):
        br = bd.boundary_lambda_path(bundle, C, samples=max(ngrid, 21), seed=int(cfg.get("seed", 0)))
        details["boundary_transversal_LR"] = br.transversal
        details["boundary_reference"] = br.reference
        details["boundary_via_triple"] = br.via_triple
        rows = []
        mp_top, mm_bot = -np.inf, np.inf
        for lam in lam_grid:
            ti = bd.triple_LR(bundle, lam)
            row = {"lambda": f"{lam:.10g}", "triple_LR": ti}
            try:
                Mp, Mm = bd.M_matrices(bundle, lam)
                ep, em = np.linalg.eigvalsh(0.5 * (Mp + Mp.T)), np.linalg.eigvalsh(0.5 * (Mm + Mm.T))
                mp_top, mm_bot = max(mp_top, ep[-1]), min(mm_bot, em[0])
                row.update({"M_plus_max_eig": f"{ep[-1]:.10g}", "M_minus_min_eig": f"{em[0]:.10g}"})
            except HypothesisError:
                row.update({"M_plus_max_eig": "", "M_minus_min_eig": ""})
            rows.append(row)
        tables["boundary"] = rows
        triple_grid = [r["triple_LR"] for r in rows]
        details["triple_LR_grid_max"] = int(max(triple_grid))
        details["triple_LR_grid_min"] = int(min(triple_grid))
        details["M_plus_max_eig"] = float(mp_top)
        details["M_minus_min_eig"] = float(mm_bot)
        details["M_symmetry_defect"] = float(max(
            np.max(np.abs(M - M.T)) for M in bd.M_matrices(bundle, 0.0)
        )) if br.transversal else None
        details["LR_form_identity_defect"] = (
            bd.lr_form_identity_defect(bundle, 0.0, rng) if br.transversal else None
        )
        t0, tC = triple_grid[0], triple_grid[-1]

    with stage("evans"):
        samples, frames = spc.evans_sweep(bundle, lam_grid, T)
        eig = spc.count_eigenvalues(bundle, samples, frames, delta0, T)
        tables["evans"] = [{"lambda": f"{s.lam:.10g}", "det": f"{s.det_value:.10g}",
                            "sigma_min": f"{s.sigma_min:.10g}", "intersection_dim": s.intersection_dim}
                           for s in samples]
        details["eigenvalues"] = [[float(l), int(m)] for l, m in eig.eigenvalues]
        if prof is not None:
            tc = spc.translation_check(bundle, delta0, T)
            details["translation"] = {"det0": tc.det0, "kernel_dim": tc.kernel_dim,
                                      "angle": tc.angle, "derivative": tc.derivative,
                                      "simple": tc.simple}
        above = np.linspace(C, 2 * C, 6)
        s_above, _ = spc.evans_sweep(bundle, above, T)
        signs = {np.sign(s.det_value) for s in s_above}
        details["no_eigenvalue_in_C_2C"] = bool(len(signs) == 1 and min(s.sigma_min for s in s_above) > 1e-6)

    with stage("spectral_flow"):
        ds = spc.discretize_S(bundle, T, int(sweep["S_nodes"]))
        sf = spc.spectral_flow_S(bundle, C, ds=ds, grid=ngrid, delta0=delta0)
        tables["spectral_flow"] = [{"lambda": f"{l:.10g}", "kernel_dim": k, "sign": s}
                                   for l, k, s in sf.crossings]

    with stage("lemma31"):
        l31 = spc.check_lemma31(bundle, ds=ds)
        hyp["lemma31"] = bool(l31.holds)
        hyp["lemma31_branch"] = l31.branch
        hyp["lemma31_margins"] = l31.margins
        if l31.symbolic is not None:
            hyp["lemma31_symbolic"] = l31.symbolic

    with stage("verify"):
        prov = dict(provenance or {})
        prov.update({
            "C": C, "C_source": "override" if C_override else "bound_C", "T": T,
            "lambda_grid": ngrid, "delta0": delta0, "S_nodes": int(sweep["S_nodes"]),
            "tau_samples": taus, "notes": NOTES,
        })
        report = spc.verify_theorems(
            hypotheses=hyp, maslov15=m15.index, maslov14=m14_index, boundary=br.index,
            triple_LR_0=t0, triple_LR_C=tC, eig=eig, sflow=sf, provenance=prov, details=details,
        )
    return Analysis(report, tables)


def run_analysis(cfg: Dict[str, Any]) -> Analysis:
    with stage("wave"):
        profile = obtain_wave(cfg)
    with stage("bundle"):
        bundle = LinearizedBundle.from_profile(profile)
    prov = {
        "config_hash": config_hash(cfg),
        "system": profile.system.label,
        "params": dict(profile.system.params),
        "c": float(profile.c),
        "residual_norm": float(profile.residual_norm),
        "Xi": float(profile.Xi),
        "nodes": int(profile.xi.size),
        "source": "profile" if (cfg.get("profile") or {}).get("csv") else "solver",
    }
    out = analyze_bundle(bundle, cfg, prov)
    out.profile = profile
    return out
