"""Stable and unstable bundles along a wave and the Maslov index of the wave.

For each lambda the subspaces E^s_lambda(xi) and E^u_lambda(xi) of solutions
of y' = A_lambda(xi) y decaying at +inf and -inf are carried as orthonormal
frames.  The frame ODE is the continuous orthonormalisation

    Z' = A Z - Z (Z^T A Z),

which keeps Z^T Z = I and moves span(Z) exactly as the linear flow does.
The stable frame is started at xi = +T from V^-(A_lambda(+inf)) and
integrated backwards; the unstable frame is started at xi = -T from
V^+(A_lambda(-inf)) and integrated forwards.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from . import symplectic as sy
from .errors import (
    ConsistencyError,
    HypothesisError,
    IllConditionedError,
    InputError,
    IntegrationError,
)
from .system import (
    LinearizedBundle,
    assemble_A,
    assemble_H,
    build_LR,
    end_subspaces,
    lr_graph_matrix,
)

RTOL = 1e-11
ATOL = 1e-12


# ---------------------------------------------------------------------------
# frame evolution
# ---------------------------------------------------------------------------


def init_end_frames(bundle: LinearizedBundle, lam: float):
    """(E^s_lambda(+inf), E^u_lambda(-inf)) as Lagrangian frames."""
    Es, Eu = end_subspaces(bundle, lam)
    for name, fr in (("E^s(+inf)", Es), ("E^u(-inf)", Eu)):
        if not sy.is_lagrangian(fr):
            raise HypothesisError(f"{name} at lambda = {lam} is not Lagrangian")
    return Es, Eu


def _drury_rhs(bundle, lam, n):
    def rhs(xi, z):
        Z = z.reshape(2 * n, n)
        A = assemble_A(bundle, lam, xi)
        AZ = A @ Z
        return (AZ - Z @ (Z.T @ AZ)).ravel()
    return rhs


def _integrate(bundle, lam, Z0, xi0, xi1):
    n = bundle.space.n
    sol = solve_ivp(_drury_rhs(bundle, lam, n), (xi0, xi1), Z0.ravel(), method="DOP853",
                    rtol=RTOL, atol=ATOL, dense_output=True)
    if not sol.success:
        raise IntegrationError(f"frame integration failed at lambda = {lam}: {sol.message}")
    return sol


@dataclass
class FrameTrajectory:
    """Frames of E^s_lambda(xi) and E^u_lambda(xi) on [-T, T].

    ``Es(xi)`` and ``Eu(xi)`` return orthonormal Lagrangian frames.  The
    end frames are the limits at +inf and -inf; by construction
    Es(T) = Es_inf and Eu(-T) = Eu_inf.
    """

    lam: float
    T: float
    bundle: LinearizedBundle = field(repr=False)
    Es_inf: sy.LagrangianFrame = field(repr=False)
    Eu_inf: sy.LagrangianFrame = field(repr=False)
    _s: object = field(repr=False, default=None)
    _u: object = field(repr=False, default=None)
    xi_stop: float = 0.0

    @property
    def space(self) -> sy.SymplecticSpace:
        return self.bundle.space

    def _frame(self, sol, xi):
        n = self.space.n
        Z = sol.sol(xi).reshape(2 * n, n)
        return sy.LagrangianFrame(Z, self.space).orthonormal()

    def Es(self, xi: float) -> sy.LagrangianFrame:
        if xi > self.T:
            return self.Es_inf
        if xi < -self.xi_stop - 1e-12:
            raise InputError(f"stable frame only available on [{-self.xi_stop}, {self.T}]")
        return self._frame(self._s, xi)

    def Eu(self, xi: float) -> sy.LagrangianFrame:
        if xi < -self.T:
            return self.Eu_inf
        if xi > self.xi_stop + 1e-12:
            raise InputError(f"unstable frame only available on [{-self.T}, {self.xi_stop}]")
        return self._frame(self._u, xi)

    def tau_grid(self, samples: int = 201) -> np.ndarray:
        return np.linspace(0.0, self.T, samples)

    def isotropy_defect(self, samples: int = 201) -> float:
        d = 0.0
        for x in np.linspace(-self.xi_stop, self.T, samples):
            d = max(d, sy.isotropy_defect(self.Es(x)))
        for x in np.linspace(-self.T, self.xi_stop, samples):
            d = max(d, sy.isotropy_defect(self.Eu(x)))
        return d


def evolve_frames(bundle: LinearizedBundle, lam: float, T: Optional[float] = None,
                  xi_stop: float = 0.0) -> FrameTrajectory:
    """Integrate E^s from +T down to -xi_stop and E^u from -T up to xi_stop.

    T defaults to the end of the bundle grid.  xi_stop = 0 is enough for
    the matching determinant and for Definition-1.5 style indices; the
    one-sided index with a fixed E^s(tau0) needs xi_stop >= tau0.
    """
    if T is None:
        T = float(min(-bundle.xi_grid[0], bundle.xi_grid[-1]))
    if T <= 0:
        raise InputError("T must be positive")
    Es_inf, Eu_inf = init_end_frames(bundle, lam)
    s = _integrate(bundle, lam, Es_inf.Z, T, -xi_stop)
    u = _integrate(bundle, lam, Eu_inf.Z, -T, xi_stop)
    return FrameTrajectory(float(lam), float(T), bundle, Es_inf, Eu_inf, s, u, float(xi_stop))


# ---------------------------------------------------------------------------
# Maslov index of the wave
# ---------------------------------------------------------------------------


@dataclass
class MaslovResult:
    """Index of the wave together with the crossings that produced it."""

    index: int
    crossings: List[sy.CrossingRecord]
    definition: str
    tau0: Optional[float] = None
    lam: float = 0.0


def tau_paths(traj: FrameTrajectory, samples: int = 201):
    """The pair (E^s(tau), E^u(-tau)) on tau in [0, T]; tau = T is the compactified infinity."""
    p1 = sy.LagrangianPath(traj.Es, 0.0, traj.T, samples)
    p2 = sy.LagrangianPath(lambda t: traj.Eu(-t), 0.0, traj.T, samples)
    return p1, p2


def analytic_pair_form(traj: FrameTrajectory, tau: float, V: np.ndarray) -> np.ndarray:
    """Crossing form of (E^s(tau), E^u(-tau)) on the columns of V.

    Along the flow y' = A y the Robbin--Salamon form is omega(v, A v) = <H v, v>,
    so the pair form is -<H(-tau) v, v> - <H(tau) v, v>.
    """
    b = traj.bundle
    Hp = assemble_H(b, traj.lam, tau)
    Hm = assemble_H(b, traj.lam, -tau)
    return -(V.T @ (Hp + Hm) @ V)


def maslov_def15(bundle: LinearizedBundle, T: Optional[float] = None, lam: float = 0.0,
                 samples: int = 201, traj: Optional[FrameTrajectory] = None) -> MaslovResult:
    """iota(w*) = -iCLM(E^s(tau), E^u(-tau); tau in [0, +inf]).

    A crossing at tau = 0 (the translation mode when lam = 0) enters as a
    left-end crossing, weighted by m+ of its form.
    """
    if traj is None:
        traj = evolve_frames(bundle, lam, T)
    p1, p2 = tau_paths(traj, samples)
    res = sy.clm_index_pair(p1, p2, detail=True)
    return MaslovResult(-res.index, res.crossings, "def_1_5", None, traj.lam)


def reliable_horizon(traj: FrameTrajectory) -> float:
    """Largest xi up to which the forward unstable frame can be trusted.

    Errors of size RTOL in E^u grow like exp(g xi) with g the spread of
    real parts of the eigenvalues of A_lambda(+inf); past the returned xi
    they exceed CROSSING_TOL.
    """
    ev = np.linalg.eigvals(assemble_A(traj.bundle, traj.lam, np.inf)).real
    g = max(ev.max() - ev.min(), 1e-12)
    return float(min(traj.xi_stop, np.log(sy.CROSSING_TOL / RTOL) / g))


def check_tau0(traj: FrameTrajectory, tau0: float, samples: int = 201,
               tol: float = sy.CROSSING_TOL) -> None:
    """Require E^s(tau0) ∩ E^u(tau) = {0} for tau in (tau0, xi_stop].

    An intersection at tau = tau0 itself is allowed; it is the endpoint
    crossing weighted by m-.  The check stops at :func:`reliable_horizon`.
    Raises HypothesisError otherwise.
    """
    V = traj.Es(tau0)
    stop = max(reliable_horizon(traj), tau0 + 1.0)
    p1 = sy.LagrangianPath.constant(V, tau0, stop)
    p2 = sy.LagrangianPath(traj.Eu, tau0, stop, samples)
    hits = [t for t, end in sy.locate_crossings(p1, p2, samples, tol) if end != "left"]
    if hits:
        raise HypothesisError(
            f"E^s(tau0) meets E^u(tau) at tau = {hits[0]:.6g} > tau0 = {tau0}; "
            "the one-sided definition is ineffective here"
        )


def check_tau0_far(traj: FrameTrajectory, tau0: float, samples: int = 201,
                   tol: float = sy.CROSSING_TOL) -> None:
    """Require E^s(tau) ∩ E^u(-inf) = {0} for tau in [tau0, T].

    This transversality makes the one-sided index independent of tau0.
    """
    p1 = sy.LagrangianPath(traj.Es, tau0, traj.T, samples)
    p2 = sy.LagrangianPath.constant(traj.Eu_inf, tau0, traj.T)
    hits = sy.locate_crossings(p1, p2, samples, tol)
    if hits:
        raise HypothesisError(f"E^s(tau) meets E^u(-inf) at tau = {hits[0][0]:.6g} >= tau0 = {tau0}")


def choose_tau0(traj: FrameTrajectory, candidates: Optional[Sequence[float]] = None,
                samples: int = 101) -> float:
    """Smallest candidate tau0 for which the one-sided index is well defined.

    Both transversality conditions must hold.  Large tau0 is avoided: the
    unstable frame is carried forward into the region where it is repelled
    from decaying directions, so its error grows roughly like exp(2 mu tau).
    """
    if candidates is None:
        candidates = np.arange(0.0, reliable_horizon(traj), 0.5)
    for t0 in candidates:
        try:
            check_tau0_far(traj, t0, samples)
            check_tau0(traj, t0, samples)
        except HypothesisError:
            continue
        return float(t0)
    raise HypothesisError("no admissible tau0 found for the one-sided index")


def maslov_def14(bundle: LinearizedBundle, tau0: Optional[float] = None,
                 T: Optional[float] = None, lam: float = 0.0, samples: int = 401,
                 traj: Optional[FrameTrajectory] = None) -> MaslovResult:
    """sum_{tau < tau0} sign Gamma(E^u(tau), E^s(tau0); tau) - m-(Gamma at tau0).

    The path E^u(tau) runs over [-T, tau0] against the fixed E^s(tau0).
    Transversality of E^s(tau0) and E^u(tau) for tau > tau0, and of E^s(tau)
    and E^u(-inf) for tau >= tau0, is verified first.  With tau0 = None the
    smallest admissible value is chosen.
    """
    if traj is None:
        T = _default_T(bundle) if T is None else T
        traj = evolve_frames(bundle, lam, T, xi_stop=T)
    elif traj.xi_stop < traj.T:
        # the forward unstable frame is needed beyond tau0
        traj = evolve_frames(bundle, traj.lam, traj.T, xi_stop=traj.T)
    if tau0 is None:
        tau0 = choose_tau0(traj)
    if not 0 <= tau0 < min(traj.T, traj.xi_stop + 1e-12):
        raise InputError("tau0 must lie in [0, min(T, xi_stop))")
    check_tau0_far(traj, tau0)
    V = traj.Es(tau0)
    gap = sy.smallest_singular_value(V.Z, traj.Eu(tau0).Z)
    if sy.CROSSING_TOL < gap < 1e3 * sy.CROSSING_TOL:
        raise IllConditionedError(
            f"E^s(tau0) and E^u(tau0) nearly meet (sigma_min = {gap:.2e}); choose a smaller tau0"
        )
    check_tau0(traj, tau0)
    path = sy.LagrangianPath(traj.Eu, -traj.T, tau0, samples)
    res = sy.clm_index_fixed(V, path, detail=True)
    return MaslovResult(res.index, res.crossings, "def_1_4", float(tau0), traj.lam)


def _default_T(bundle):
    return float(min(-bundle.xi_grid[0], bundle.xi_grid[-1]))


# ---------------------------------------------------------------------------
# boundary lambda path and the L_R block form
# ---------------------------------------------------------------------------


def end_paths(bundle: LinearizedBundle, C: float, samples: int = 201):
    """(E^s_lambda(+inf), E^u_lambda(-inf)) as paths in lambda on [0, C]."""
    p1 = sy.LagrangianPath(lambda l: init_end_frames(bundle, l)[0], 0.0, C, samples)
    p2 = sy.LagrangianPath(lambda l: init_end_frames(bundle, l)[1], 0.0, C, samples)
    return p1, p2


def triple_LR(bundle: LinearizedBundle, lam: float) -> int:
    """iota(E^u_lambda(-inf), E^s_lambda(+inf); L_R)."""
    Es, Eu = init_end_frames(bundle, lam)
    return sy.triple_index(bundle.space, Eu, Es, build_LR(bundle.space))


@dataclass
class BoundaryResult:
    index: int
    direct: int
    via_triple: Optional[int]
    transversal: bool
    reference: Optional[str]
    crossings: List[sy.CrossingRecord]


def boundary_lambda_path(bundle: LinearizedBundle, C: float, samples: int = 201,
                         seed: int = 0, attempts: int = 10) -> BoundaryResult:
    """iCLM(E^s_lambda(+inf), E^u_lambda(-inf); lambda in [0, C]) by two routes.

    The direct route sums regular crossings.  The second is the difference
    of triple indices against a Lagrangian L transversal to both end paths:
    L_R when the paths stay transversal to it (``transversal`` is then
    True), otherwise a seeded random Lagrangian.  When no such L is found
    only the direct value is returned.
    """
    p1, p2 = end_paths(bundle, C, samples)
    res = sy.clm_index_pair(p1, p2, detail=True)
    via, ref = None, None
    transversal = True
    try:
        via = sy.clm_via_transversal_endpoints(p1, p2, build_LR(bundle.space), samples)
        ref = "L_R"
    except InputError:
        transversal = False
        rng = np.random.default_rng(seed)
        for _ in range(attempts):
            L = sy.random_lagrangian(bundle.space, rng)
            try:
                via = sy.clm_via_transversal_endpoints(p1, p2, L, samples)
                ref = "random"
                break
            except InputError:
                continue
    if via is not None and via != res.index:
        raise ConsistencyError(f"boundary path: direct {res.index} != triple-index route {via}")
    return BoundaryResult(res.index, res.index, via, transversal, ref, res.crossings)


def M_matrices(bundle: LinearizedBundle, lam: float):
    """(M_{lambda,+}, M_{lambda,-}): block forms of E^s_lambda(+inf) and E^u_lambda(-inf)
    as graphs (p+, q-) = M (q+, p-) over the complement of L_R."""
    Es, Eu = init_end_frames(bundle, lam)
    return lr_graph_matrix(Es), lr_graph_matrix(Eu)


def lr_form_identity_defect(bundle: LinearizedBundle, lam: float, rng: np.random.Generator,
                            trials: int = 20) -> float:
    """max |Q(E^u, E^s; L_R)(u, u) - <(M+ - M-) u, u>| over random u.

    Q is evaluated from its definition: x = T_- u in E^u, x = y + z with
    y = T_+ u in E^s and z = (T_- - T_+) u in L_R, Q(u, u) = omega(y, z).
    """
    Mp, Mm = M_matrices(bundle, lam)
    sp = bundle.space
    n, r = sp.n, sp.r
    free = np.r_[np.arange(n, n + r), np.arange(r, n)]
    dep = np.r_[np.arange(0, r), np.arange(n + r, 2 * n)]

    def frame(M):
        Z = np.zeros((2 * n, n))
        Z[free] = np.eye(n)
        Z[dep] = M
        return Z

    Tp, Tm = frame(Mp), frame(Mm)
    worst = 0.0
    for _ in range(trials):
        u = rng.standard_normal(n)
        y = Tp @ u
        z = (Tm - Tp) @ u
        lhs = sy.omega(sp, y, z)
        rhs = u @ (Mp - Mm) @ u
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return worst


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


CROSSING_FIELDS = ["lambda", "tau", "kernel_dim", "m_plus", "m_minus", "sign"]


def crossing_rows(lam: float, crossings: Sequence[sy.CrossingRecord]) -> List[dict]:
    return [
        {
            "lambda": f"{lam:.10g}",
            "tau": f"{c.t0:.10g}",
            "kernel_dim": c.kernel_dim,
            "m_plus": c.m_plus,
            "m_minus": c.m_minus,
            "sign": c.signature,
        }
        for c in crossings
    ]


def write_crossings_csv(path, rows: Sequence[dict]) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        wr = csv.DictWriter(fh, fieldnames=CROSSING_FIELDS, lineterminator="\n")
        wr.writeheader()
        for row in rows:
            wr.writerow(row)
    return path
