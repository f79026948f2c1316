"""Traveling fronts as heteroclinic orbits of w'' + c w' + Q D grad F(w) = 0.

The profile and the speed are computed together by Hermite--Simpson
collocation of the first-order system y = (w, w') on a uniform grid,
with projection boundary conditions at both ends and a phase condition
pinning one component at xi = 0.  The nonlinear system is solved by
damped Newton with a sparse Jacobian.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.interpolate import CubicHermiteSpline
from scipy.linalg import null_space
from scipy.sparse.linalg import splu

from .errors import (
    ConvergenceError,
    HyperbolicityError,
    InputError,
    OrientationError,
    ParameterRegimeError,
    ProfileError,
)
from .system import (
    RestState,
    SkewGradientSystem,
    fhn_system,
    hyperbolic_splitting,
    nagumo_system,
    quadratic_pulse_system,
)


# ---------------------------------------------------------------------------
# equilibria
# ---------------------------------------------------------------------------


def find_equilibria_fhn(a: float, gamma: float) -> Tuple[float, float, float]:
    """Roots 0 = u1 < u2 < u3 of u = gamma f(u), f(u) = u (1 - u)(u - a).

    Away from zero the equation reduces to gamma u^2 - gamma (1 + a) u + gamma a + 1 = 0.
    """
    disc = gamma * gamma * (1 + a) ** 2 - 4 * gamma * (gamma * a + 1)
    if disc <= 0:
        raise ParameterRegimeError(
            f"u = gamma f(u) has fewer than three real roots for a = {a}, gamma = {gamma}"
        )
    s = math.sqrt(disc)
    u2 = (gamma * (1 + a) - s) / (2 * gamma)
    u3 = (gamma * (1 + a) + s) / (2 * gamma)
    # the product of the roots is exact; use it to avoid cancellation in u2
    u2 = (gamma * a + 1) / (gamma * u3)
    if not 0 < u2 < u3:
        raise ParameterRegimeError(f"roots not ordered: u2 = {u2}, u3 = {u3}")
    return 0.0, u2, u3


def nagumo_speed(a: float) -> float:
    """Closed-form speed of the front of u'' + c u' + u(1-u)(u-a) = 0 from 1 to 0."""
    return math.sqrt(2.0) * (0.5 - a)


def nagumo_profile(xi, a: float):
    """Closed-form front u = 1 / (1 + exp(xi / sqrt 2)) (phase u(0) = 1/2)."""
    return 1.0 / (1.0 + np.exp(np.asarray(xi) / math.sqrt(2.0)))


def standing_pulse(Xi: float = 30.0, nodes: int = 3001) -> "WaveProfile":
    """Closed-form homoclinic u = sech^2(xi/2) of u'' - u + (3/2) u^2 = 0 (c = 0).

    Its linearisation d^2 - 1 + 3 sech^2(xi/2) has eigenvalues 5/4, 0 and
    -3/4, so the pulse has one unstable eigenvalue besides translation.
    """
    sysm = quadratic_pulse_system()
    xi = np.linspace(-Xi, Xi, nodes)
    s = 1.0 / np.cosh(xi / 2)
    w = (s * s)[:, None]
    wp = (-(s * s) * np.tanh(xi / 2))[:, None]
    rest = RestState.of(sysm, np.zeros(1), "minus")
    prof = WaveProfile(xi, w, wp, 0.0, rest, RestState.of(sysm, np.zeros(1), "plus"), 0.0, sysm)
    res = ode_residual(sysm, xi, w, wp, 0.0)
    return replace(prof, residual_norm=res)


# ---------------------------------------------------------------------------
# data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BVPConfig:
    """Discretisation and solver settings.

    Parameters
    ----------
    Xi : float
        Half length of the truncated line [-Xi, Xi].
    nodes : int
        Number of grid points (at least 100).
    tol_newton : float
        Newton stops when the max-norm of the update falls below this.
    tol_bc, tol_res : float
        Acceptance thresholds for end proximity and the ODE residual.
    continuation : sequence of float
        Half lengths solved first, each solution seeding the next.
    phase_anchor : (int, float) or None
        Component index and value pinned at xi = 0.
    max_iter : int
    """

    Xi: float = 40.0
    nodes: int = 2000
    tol_newton: float = 1e-11
    tol_bc: float = 1e-6
    tol_res: float = 1e-8
    continuation: Tuple[float, ...] = ()
    phase_anchor: Optional[Tuple[int, float]] = None
    max_iter: int = 60

    def __post_init__(self):
        if not self.Xi > 0:
            raise InputError("Xi must be positive")
        if self.nodes < 100:
            raise InputError("nodes must be at least 100")


@dataclass(frozen=True)
class WaveProfile:
    """A computed heteroclinic front on [-Xi, Xi]."""

    xi: np.ndarray
    w: np.ndarray          # nodes x n
    w_prime: np.ndarray    # nodes x n
    c: float
    w_minus: RestState
    w_plus: RestState
    residual_norm: float
    system: SkewGradientSystem = field(repr=False, default=None)

    @property
    def Xi(self) -> float:
        return float(self.xi[-1])

    @property
    def n(self) -> int:
        return self.w.shape[1]

    def interpolant(self) -> CubicHermiteSpline:
        return CubicHermiteSpline(self.xi, self.w, self.w_prime, axis=0)

    def tangent(self, xi: float) -> Tuple[np.ndarray, np.ndarray]:
        """(w'(xi), w''(xi)) with w'' taken from the ODE."""
        spl = CubicHermiteSpline(self.xi, self.w_prime, _second_derivative(self), axis=0)
        d1 = spl(xi)
        w = self.interpolant()(xi)
        d2 = -self.c * d1 - self.system.reaction(w)
        return d1, d2


def _second_derivative(profile: WaveProfile) -> np.ndarray:
    sys = profile.system
    return -profile.c * profile.w_prime - np.array([sys.reaction(w) for w in profile.w])


# ---------------------------------------------------------------------------
# residuals
# ---------------------------------------------------------------------------


def _fd_derivative(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Sixth-order central differences on a uniform grid (one-sided stencils
    of the same width near the ends)."""
    h = x[1] - x[0]
    m = len(x)
    out = np.empty_like(y)
    for i in range(m):
        lo = min(max(i - 3, 0), m - 7)
        xs = (x[lo:lo + 7] - x[i]) / h
        V = np.vander(xs, 7, increasing=True).T
        rhs = np.zeros(7)
        rhs[1] = 1.0
        wts = np.linalg.solve(V, rhs)
        out[i] = wts @ y[lo:lo + 7] / h
    return out


def ode_residual(system: SkewGradientSystem, xi, w, w_prime, c) -> float:
    """max over the grid of |w'' + c w' + Q D grad F(w)| and |d/dxi w - w'|,
    with derivatives from sixth-order differences of the stored arrays."""
    xi = np.asarray(xi, float)
    h = np.diff(xi)
    if np.max(np.abs(h - h[0])) > 1e-9 * abs(h[0]):
        raise ProfileError("profile grid must be uniform")
    d2 = _fd_derivative(xi, w_prime)
    d1 = _fd_derivative(xi, w)
    g = np.array([system.reaction(row) for row in w])
    r2 = d2 + c * w_prime + g
    r1 = d1 - w_prime
    return float(max(np.max(np.abs(r1)), np.max(np.abs(r2))))


# ---------------------------------------------------------------------------
# collocation
# ---------------------------------------------------------------------------


def _end_matrix(system: SkewGradientSystem, w_end, c) -> np.ndarray:
    n = system.n
    G = system.reaction_jacobian(w_end)
    M = np.zeros((2 * n, 2 * n))
    M[:n, n:] = np.eye(n)
    M[n:, :n] = -G
    M[n:, n:] = -c * np.eye(n)
    return M


def _invariant_basis(system, w_end, c, side):
    Vp, Vm = hyperbolic_splitting(_end_matrix(system, w_end, c))
    keep = Vp if side == "minus" else Vm
    if keep.shape[1] != system.n:
        raise HyperbolicityError(
            f"end state {side} has a ({Vp.shape[1]}, {Vm.shape[1]}) splitting, need ({system.n}, {system.n})"
        )
    return keep


def _projection_rows(system, w_end, c, side, ref):
    """Rows N^T with N^T (y - y_end) = 0 iff y - y_end lies in the unstable
    (side minus) or stable (side plus) subspace of the end linearisation.

    N^T = ref^T (I - K K^T) with K an orthonormal basis of the subspace and
    ``ref`` a fixed complement basis, so the rows vary smoothly with c.
    """
    K = _invariant_basis(system, w_end, c, side)
    return ref.T - (ref.T @ K) @ K.T


class _Collocation:
    def __init__(self, system, xi, w_minus, w_plus, anchor):
        self.sys = system
        self.xi = xi
        self.h = xi[1] - xi[0]
        self.n = system.n
        self.m = len(xi)
        self.w_minus = w_minus
        self.w_plus = w_plus
        self.anchor = anchor
        self.refs = {}
        # interval containing xi = 0 and cubic Hermite weights there
        k = int(np.clip(np.searchsorted(xi, 0.0) - 1, 0, self.m - 2))
        s = (0.0 - xi[k]) / self.h
        self.k0 = k
        self.hw = np.array([2 * s**3 - 3 * s**2 + 1, (s**3 - 2 * s**2 + s) * self.h,
                            -2 * s**3 + 3 * s**2, (s**3 - s**2) * self.h])

    def f(self, Y, c):
        n = self.n
        w, v = Y[:, :n], Y[:, n:]
        g = np.array([self.sys.reaction(row) for row in w])
        return np.hstack([v, -c * v - g])

    def fy(self, Y, c):
        n = self.n
        out = np.zeros((len(Y), 2 * n, 2 * n))
        out[:, :n, n:] = np.eye(n)
        out[:, n:, n:] = -c * np.eye(n)
        for i, row in enumerate(Y):
            out[i, n:, :n] = -self.sys.reaction_jacobian(row[:n])
        return out

    def fc(self, Y):
        n = self.n
        out = np.zeros_like(Y)
        out[:, n:] = -Y[:, n:]
        return out

    def bc(self, Y, c):
        ym = np.r_[self.w_minus, np.zeros(self.n)]
        yp = np.r_[self.w_plus, np.zeros(self.n)]
        if not self.refs:
            for side, w_end in (("minus", self.w_minus), ("plus", self.w_plus)):
                self.refs[side] = null_space(_invariant_basis(self.sys, w_end, c, side).T)
        Nm = _projection_rows(self.sys, self.w_minus, c, "minus", self.refs["minus"])
        Np = _projection_rows(self.sys, self.w_plus, c, "plus", self.refs["plus"])
        return np.r_[Nm @ (Y[0] - ym), Np @ (Y[-1] - yp)], Nm, Np

    def phase(self, Y):
        j, val = self.anchor
        n, k = self.n, self.k0
        return (self.hw[0] * Y[k, j] + self.hw[1] * Y[k, n + j]
                + self.hw[2] * Y[k + 1, j] + self.hw[3] * Y[k + 1, n + j] - val)

    def residual_and_jacobian(self, x):
        n2 = 2 * self.n
        m, h = self.m, self.h
        Y = x[:-1].reshape(m, n2)
        c = x[-1]
        F = self.f(Y, c)
        Fy = self.fy(Y, c)
        Fc = self.fc(Y)
        Y0, Y1, F0, F1 = Y[:-1], Y[1:], F[:-1], F[1:]
        Ym = 0.5 * (Y0 + Y1) + h / 8 * (F0 - F1)
        Fm = self.f(Ym, c)
        Fym = self.fy(Ym, c)
        Fcm = self.fc(Ym)
        R = Y1 - Y0 - h / 6 * (F0 + 4 * Fm + F1)

        I = np.eye(n2)
        # dYm/dY0 = I/2 + h/8 Fy0, dYm/dY1 = I/2 - h/8 Fy1
        dFm0 = np.einsum("kij,kjl->kil", Fym, 0.5 * I + h / 8 * Fy[:-1])
        dFm1 = np.einsum("kij,kjl->kil", Fym, 0.5 * I - h / 8 * Fy[1:])
        dR0 = -I - h / 6 * (Fy[:-1] + 4 * dFm0)
        dR1 = I - h / 6 * (4 * dFm1 + Fy[1:])
        dYmc = h / 8 * (Fc[:-1] - Fc[1:])
        dFmc = np.einsum("kij,kj->ki", Fym, dYmc) + Fcm
        dRc = -h / 6 * (Fc[:-1] + 4 * dFmc + Fc[1:])

        rows, cols, vals = [], [], []
        base_r = np.arange(m - 1)[:, None, None] * n2 + np.arange(n2)[None, :, None]
        base_c = np.arange(m - 1)[:, None, None] * n2 + np.arange(n2)[None, None, :]
        for blk, off in ((dR0, 0), (dR1, n2)):
            rr = np.broadcast_to(base_r, blk.shape)
            cc = np.broadcast_to(base_c + off, blk.shape)
            rows.append(rr.ravel()); cols.append(cc.ravel()); vals.append(blk.ravel())
        nu = m * n2
        rows.append((np.arange(m - 1)[:, None] * n2 + np.arange(n2)[None, :]).ravel())
        cols.append(np.full((m - 1) * n2, nu))
        vals.append(dRc.ravel())

        r0 = (m - 1) * n2
        bcv, Nm, Np = self.bc(Y, c)
        k = Nm.shape[0]
        for i in range(k):
            rows.append(np.full(n2, r0 + i)); cols.append(np.arange(n2)); vals.append(Nm[i])
        for i in range(Np.shape[0]):
            rows.append(np.full(n2, r0 + k + i)); cols.append((m - 1) * n2 + np.arange(n2)); vals.append(Np[i])
        # derivative of the boundary rows with respect to c by differences
        dc = 1e-7 * max(1.0, abs(c))
        bcd = (self.bc(Y, c + dc)[0] - self.bc(Y, c - dc)[0]) / (2 * dc)
        rows.append(r0 + np.arange(len(bcv))); cols.append(np.full(len(bcv), nu)); vals.append(bcd)

        rp = r0 + len(bcv)
        j = self.anchor[0]
        kk = self.k0
        pc = [kk * n2 + j, kk * n2 + self.n + j, (kk + 1) * n2 + j, (kk + 1) * n2 + self.n + j]
        rows.append(np.full(4, rp)); cols.append(np.array(pc)); vals.append(self.hw)

        Jm = sp.csc_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                           shape=(nu + 1, nu + 1))
        res = np.concatenate([R.ravel(), bcv, [self.phase(Y)]])
        return res, Jm


def _newton(col: _Collocation, x0, tol, max_iter):
    x = x0.copy()
    res, Jm = col.residual_and_jacobian(x)
    rnorm = np.max(np.abs(res))
    for it in range(max_iter):
        try:
            dx = splu(Jm).solve(-res)
        except RuntimeError as exc:
            raise ConvergenceError(f"singular Newton matrix at iteration {it}: {exc}", x) from exc
        step = 1.0
        while True:
            xt = x + step * dx
            try:
                rt, Jt = col.residual_and_jacobian(xt)
                rtn = np.max(np.abs(rt))
            except HyperbolicityError:
                rtn = np.inf
            if rtn < (1 - 1e-4 * step) * rnorm or step < 1e-4 or rtn < 1e-13:
                break
            step *= 0.5
        if not np.isfinite(rtn):
            raise ConvergenceError("Newton step left the hyperbolic regime", x)
        x, res, Jm, rnorm = xt, rt, Jt, rtn
        if step * np.max(np.abs(dx)) < tol and rnorm < 1e3 * tol:
            return x, it + 1
    raise ConvergenceError(f"Newton did not converge in {max_iter} iterations (residual {rnorm:.2e})", x)


# ---------------------------------------------------------------------------
# public solver
# ---------------------------------------------------------------------------


def default_anchor(system: SkewGradientSystem) -> Tuple[int, float]:
    if system.label == "fhn":
        p = system.params
        return 0, find_equilibria_fhn(p["a"], p["gamma"])[1]
    if system.label == "nagumo":
        return 0, 0.5
    raise InputError("no default phase anchor for this system; set BVPConfig.phase_anchor")


def tanh_guess(w_minus, w_plus, c0: float, width: float = 1.0):
    """Initial guess: tanh interpolant from w_minus to w_plus plus a speed."""
    w_minus = np.asarray(w_minus, float)
    w_plus = np.asarray(w_plus, float)

    def at(xi):
        s = 0.5 * (1 + np.tanh(np.asarray(xi) / (2 * width)))
        ds = 0.25 / width / np.cosh(np.asarray(xi) / (2 * width)) ** 2
        w = w_minus[None, :] + s[:, None] * (w_plus - w_minus)[None, :]
        wp = ds[:, None] * (w_plus - w_minus)[None, :]
        return w, wp

    return at, float(c0)


def solve_front(system: SkewGradientSystem, w_minus, w_plus, config: BVPConfig = BVPConfig(),
                initial_guess=None) -> WaveProfile:
    """Front from w_minus (xi -> -inf) to w_plus (xi -> +inf) and its speed c > 0.

    ``initial_guess`` is a pair (callable xi -> (w, w'), c0); by default a
    tanh interpolant with the scalar Nagumo speed.
    """
    rm = RestState.of(system, w_minus, "minus")
    rp = RestState.of(system, w_plus, "plus")
    anchor = config.phase_anchor or default_anchor(system)
    if initial_guess is None:
        c0 = nagumo_speed(system.params.get("a", 0.25))
        initial_guess = tanh_guess(rm.w, rp.w, c0, width=math.sqrt(2.0))
    guess_at, c = initial_guess
    n2 = 2 * system.n

    stages = [X for X in config.continuation if X < config.Xi] + [config.Xi]
    x = None
    for X in stages:
        xi = np.linspace(-X, X, config.nodes)
        w, wp = guess_at(xi)
        x0 = np.concatenate([np.hstack([w, wp]).ravel(), [c]])
        col = _Collocation(system, xi, rm.w, rp.w, anchor)
        try:
            x, _ = _newton(col, x0, config.tol_newton, config.max_iter)
        except ConvergenceError as exc:
            raise ConvergenceError(f"continuation stage Xi = {X}: {exc}", exc.last_good) from exc
        Y = x[:-1].reshape(config.nodes, n2)
        c = float(x[-1])
        guess_at = _extender(xi, Y, system.n, rm.w, rp.w)

    Y = x[:-1].reshape(config.nodes, n2)
    c = float(x[-1])
    if c <= 0:
        raise OrientationError(
            f"computed speed c = {c:.6g} <= 0; swap the end states (xi -> -xi) so that c > 0"
        )
    xi = np.linspace(-config.Xi, config.Xi, config.nodes)
    w, wp = Y[:, :system.n], Y[:, system.n:]
    res = ode_residual(system, xi, w, wp, c)
    prof = WaveProfile(xi, w, wp, c, rm, rp, res, system)
    validate_profile(prof, config)
    return prof


def _extender(xi, Y, n, w_minus, w_plus):
    """Evaluate a solution on a new grid, extending by the end states."""
    spl_w = CubicHermiteSpline(xi, Y[:, :n], Y[:, n:], axis=0)
    spl_v = CubicHermiteSpline(xi, Y[:, n:], np.gradient(Y[:, n:], xi, axis=0), axis=0)

    def at(x):
        x = np.asarray(x, float)
        w = spl_w(np.clip(x, xi[0], xi[-1]))
        v = spl_v(np.clip(x, xi[0], xi[-1]))
        w[x < xi[0]] = w_minus
        w[x > xi[-1]] = w_plus
        v[(x < xi[0]) | (x > xi[-1])] = 0.0
        return w, v

    return at


def validate_profile(profile: WaveProfile, config: BVPConfig) -> None:
    """Raise ProfileError unless the stored profile is a wave of its system."""
    if profile.residual_norm > config.tol_res:
        raise ProfileError(
            f"not a wave of this system: ODE residual {profile.residual_norm:.2e} > {config.tol_res:.1e}"
        )
    dm = np.max(np.abs(profile.w[0] - profile.w_minus.w))
    dp = np.max(np.abs(profile.w[-1] - profile.w_plus.w))
    if max(dm, dp) > config.tol_bc:
        raise ProfileError(f"ends too far from the rest states ({dm:.2e}, {dp:.2e}); increase Xi")


def fhn_front(a=0.25, gamma=10.0, d=1.0, config: BVPConfig = BVPConfig(),
              orientation: str = "auto") -> WaveProfile:
    """Front of the FitzHugh--Nagumo system joining (u3, u3/gamma) and (0, 0).

    orientation="high-to-low" asks for w(-inf) = (u3, u3/gamma), w(+inf) = 0;
    "low-to-high" for the reverse.  With "auto" the first is tried and, if its
    speed comes out negative, the reflected front xi -> -xi (which then has
    positive speed) is computed instead.
    """
    sysm = fhn_system(a, gamma, d)
    _, _, u3 = find_equilibria_fhn(a, gamma)
    high, low = [u3, u3 / gamma], [0.0, 0.0]
    if orientation == "low-to-high":
        return _reflected_solve(sysm, high, low, config)
    try:
        return solve_front(sysm, high, low, config)
    except OrientationError:
        if orientation != "auto":
            raise
    return _reflected_solve(sysm, high, low, config)


def _reflected_solve(sysm, high, low, config):
    """Solve with the ends exchanged, seeded by a tanh guess of small speed."""
    guess = tanh_guess(low, high, 0.05, width=math.sqrt(2.0))
    return solve_front(sysm, low, high, config, initial_guess=guess)


def nagumo_front(a=0.25, config: BVPConfig = BVPConfig()) -> WaveProfile:
    return solve_front(nagumo_system(a), [1.0], [0.0], config)


# ---------------------------------------------------------------------------
# files
# ---------------------------------------------------------------------------


def save_profile(profile: WaveProfile, csv_path, meta_path=None) -> Tuple[Path, Path]:
    """CSV with header xi,w1..wn,dw1..dwn plus a JSON sidecar of metadata."""
    csv_path = Path(csv_path)
    meta_path = Path(meta_path) if meta_path else csv_path.with_suffix(".json")
    n = profile.n
    header = ",".join(["xi"] + [f"w{i + 1}" for i in range(n)] + [f"dw{i + 1}" for i in range(n)])
    data = np.column_stack([profile.xi, profile.w, profile.w_prime])
    with open(csv_path, "w") as fh:
        fh.write(header + "\n")
        for row in data:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    sysm = profile.system
    meta = {
        "c": repr(float(profile.c)),
        "w_minus": [repr(float(v)) for v in profile.w_minus.w],
        "w_plus": [repr(float(v)) for v in profile.w_plus.w],
        "system": {"kind": sysm.label, **{k: float(v) for k, v in sysm.params.items()}},
        "residual_norm": float(profile.residual_norm),
        "n": n,
        "r": sysm.space.r,
    }
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return csv_path, meta_path


META_SCHEMA = {
    "type": "object",
    "required": ["c", "w_minus", "w_plus", "system", "n"],
    "properties": {
        "c": {"type": ["string", "number"]},
        "w_minus": {"type": "array"},
        "w_plus": {"type": "array"},
        "system": {"type": "object", "required": ["kind"]},
        "residual_norm": {"type": "number"},
        "n": {"type": "integer", "minimum": 1},
        "r": {"type": "integer", "minimum": 0},
    },
}


def system_from_meta(meta: dict) -> SkewGradientSystem:
    s = meta["system"]
    if s["kind"] == "fhn":
        return fhn_system(s.get("a", 0.25), s.get("gamma", 10.0), s.get("d", 1.0))
    if s["kind"] == "nagumo":
        return nagumo_system(s.get("a", 0.25))
    if s["kind"] == "pulse":
        return quadratic_pulse_system()
    raise ProfileError(f"unknown system kind {s['kind']!r} in profile metadata")


def load_profile(csv_path, meta_path=None, system: Optional[SkewGradientSystem] = None,
                 config: BVPConfig = BVPConfig()) -> WaveProfile:
    """Read a profile written by :func:`save_profile`; the residual is recomputed."""
    import jsonschema

    csv_path = Path(csv_path)
    meta_path = Path(meta_path) if meta_path else csv_path.with_suffix(".json")
    try:
        meta = json.loads(meta_path.read_text())
        jsonschema.validate(meta, META_SCHEMA)
    except (OSError, json.JSONDecodeError, jsonschema.ValidationError) as exc:
        raise ProfileError(f"bad profile metadata {meta_path}: {exc}") from exc
    n = int(meta["n"])
    with open(csv_path) as fh:
        header = fh.readline().strip().split(",")
    want = ["xi"] + [f"w{i + 1}" for i in range(n)] + [f"dw{i + 1}" for i in range(n)]
    if header != want:
        raise ProfileError(f"profile header {header} does not match {want}")
    data = np.loadtxt(csv_path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != 2 * n + 1:
        raise ProfileError("profile column count does not match metadata")
    sysm = system or system_from_meta(meta)
    c = float(meta["c"])
    xi, w, wp = data[:, 0], data[:, 1:n + 1], data[:, n + 1:]
    rm = RestState.of(sysm, [float(v) for v in meta["w_minus"]], "minus")
    rp = RestState.of(sysm, [float(v) for v in meta["w_plus"]], "plus")
    res = ode_residual(sysm, xi, w, wp, c)
    prof = WaveProfile(xi, w, wp, c, rm, rp, res, sysm)
    validate_profile(prof, config)
    return prof
