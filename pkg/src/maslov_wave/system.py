"""Skew-gradient systems, their linearisation along a wave, and hypothesis checks.

A skew-gradient system is

    w_t = w_xx + Q D grad F(w),

with Q = diag(I_r, -I_{n-r}) and D a positive diagonal matrix.  Along a
traveling wave w*(xi) moving with speed c the eigenvalue problem for the
linearisation becomes the first-order system y' = A_lambda(xi) y with

    A_lambda = [[-c I, lambda I - Q B(xi)], [I, 0]],   B = D^{1/2} Hess F(w*) D^{1/2},

acting on y = (phi', phi).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.linalg import schur, solve_continuous_lyapunov

from .errors import ConsistencyError, HyperbolicityError, HypothesisError, InputError
from .symplectic import LagrangianFrame, SymplecticSpace

HYPERBOLIC_MARGIN = 1e-8
C_FLOOR = 1e-6


# ---------------------------------------------------------------------------
# systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SkewGradientSystem:
    """w_t = w_xx + Q D grad F(w).

    Parameters
    ----------
    space : SymplecticSpace
        Supplies n, r and Q.
    grad_F, hess_F : callable
        w -> grad F(w) (n-vector) and w -> Hess F(w) (symmetric n x n).
    D : sequence of float, optional
        Diagonal of the diffusion scaling; identity when omitted.
    label : str
    params : dict
        Model parameters, kept for reports and file metadata.
    """

    space: SymplecticSpace
    grad_F: Callable[[np.ndarray], np.ndarray]
    hess_F: Callable[[np.ndarray], np.ndarray]
    D: Optional[Sequence[float]] = None
    label: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        D = np.ones(self.space.n) if self.D is None else np.asarray(self.D, dtype=float).ravel()
        if D.shape != (self.space.n,) or np.any(D <= 0):
            raise InputError("D must be a positive vector of length n")
        object.__setattr__(self, "D", D)

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def Q(self) -> np.ndarray:
        return self.space.Q

    def reaction(self, w) -> np.ndarray:
        """Q D grad F(w)."""
        return np.diag(self.space.Q) * self.D * np.asarray(self.grad_F(np.asarray(w, float)), float)

    def reaction_jacobian(self, w) -> np.ndarray:
        return (np.diag(self.space.Q) * self.D)[:, None] * np.asarray(self.hess_F(np.asarray(w, float)), float)

    def B(self, w) -> np.ndarray:
        """D^{1/2} Hess F(w) D^{1/2}."""
        s = np.sqrt(self.D)
        H = np.asarray(self.hess_F(np.asarray(w, float)), float)
        return s[:, None] * H * s[None, :]

    def check_consistency(self, samples: Sequence[np.ndarray], h: float = 1e-6,
                          tol: float = 1e-5) -> float:
        """Compare hess_F with central differences of grad_F; return the max error."""
        err = 0.0
        for w in samples:
            w = np.asarray(w, dtype=float)
            H = np.asarray(self.hess_F(w), float)
            if np.max(np.abs(H - H.T)) > 1e-12:
                raise ConsistencyError("Hessian is not symmetric")
            fd = np.empty_like(H)
            for j in range(self.n):
                e = np.zeros(self.n)
                e[j] = h
                fd[:, j] = (np.asarray(self.grad_F(w + e)) - np.asarray(self.grad_F(w - e))) / (2 * h)
            err = max(err, float(np.max(np.abs(fd - H))))
        if err > tol:
            raise ConsistencyError(f"grad_F and hess_F disagree (max error {err:.2e})")
        return err


def fhn_system(a: float = 0.25, gamma: float = 10.0, d: float = 1.0) -> SkewGradientSystem:
    """FitzHugh--Nagumo: u_t = u_xx + (f(u) - v)/d, v_t = v_xx + u - gamma v.

    f(u) = u (1 - u)(u - a), F(u, v) = int f - u v + gamma v^2 / 2,
    Q = diag(1, -1), D = diag(1/d, 1).
    """
    if not 0 < a < 0.5:
        raise InputError(f"need 0 < a < 1/2, got a = {a}")
    if gamma <= 0 or d <= 0:
        raise InputError("gamma and d must be positive")

    def grad(w):
        u, v = w
        return np.array([u * (1 - u) * (u - a) - v, gamma * v - u])

    def hess(w):
        u = w[0]
        fp = -3 * u * u + 2 * (1 + a) * u - a
        return np.array([[fp, -1.0], [-1.0, gamma]])

    return SkewGradientSystem(SymplecticSpace(2, 1), grad, hess, D=[1.0 / d, 1.0],
                              label="fhn", params={"a": a, "gamma": gamma, "d": d})


def nagumo_system(a: float = 0.25) -> SkewGradientSystem:
    """Scalar bistable Nagumo equation u_t = u_xx + u (1 - u)(u - a)."""

    def grad(w):
        u = w[0]
        return np.array([u * (1 - u) * (u - a)])

    def hess(w):
        u = w[0]
        return np.array([[-3 * u * u + 2 * (1 + a) * u - a]])

    return SkewGradientSystem(SymplecticSpace(1, 1), grad, hess, label="nagumo", params={"a": a})


def quadratic_pulse_system() -> SkewGradientSystem:
    """Scalar u_t = u_xx - u + (3/2) u^2, whose standing pulse is sech^2(x/2)."""

    def grad(w):
        u = w[0]
        return np.array([-u + 1.5 * u * u])

    def hess(w):
        return np.array([[-1.0 + 3.0 * w[0]]])

    return SkewGradientSystem(SymplecticSpace(1, 1), grad, hess, label="pulse", params={})


def cubic_derivative(u, a):
    return -3 * u * u + 2 * (1 + a) * u - a


# ---------------------------------------------------------------------------
# rest states and linearised bundles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RestState:
    """Equilibrium w with grad F(w) = 0 and B = D^{1/2} Hess F(w) D^{1/2}."""

    w: np.ndarray
    B: np.ndarray
    side: str

    @classmethod
    def of(cls, system: SkewGradientSystem, w, side: str, tol: float = 1e-10) -> "RestState":
        if side not in ("minus", "plus"):
            raise InputError("side must be 'minus' or 'plus'")
        w = np.asarray(w, dtype=float)
        g = np.linalg.norm(system.grad_F(w))
        if g > tol:
            raise InputError(f"not an equilibrium: |grad F(w)| = {g:.2e}")
        return cls(w, system.B(w), side)


@dataclass(frozen=True)
class LinearizedBundle:
    """Coefficients of the eigenvalue problem along a wave.

    ``B_of_xi`` must return B(xi) for any real xi; outside the sampled range
    it should return the limits.  ``xi_grid`` is the set of points used for
    suprema (the constant C) and as default sampling.
    """

    space: SymplecticSpace
    c: float
    B_of_xi: Callable[[float], np.ndarray]
    B_minus: np.ndarray
    B_plus: np.ndarray
    xi_grid: np.ndarray
    profile: object = None
    label: str = ""

    def B(self, xi: float) -> np.ndarray:
        if xi == np.inf:
            return self.B_plus
        if xi == -np.inf:
            return self.B_minus
        return self.B_of_xi(xi)

    @property
    def Q(self) -> np.ndarray:
        return self.space.Q

    @classmethod
    def from_function(cls, space, c, B_func, B_minus, B_plus, xi_max, nodes=2001, label=""):
        return cls(space, float(c), B_func, np.asarray(B_minus, float), np.asarray(B_plus, float),
                   np.linspace(-xi_max, xi_max, nodes), None, label)

    @classmethod
    def from_profile(cls, profile, label: str = "") -> "LinearizedBundle":
        """B(xi) = D^{1/2} Hess F(w*(xi)) D^{1/2} along a computed wave.

        Inside the grid w* is the cubic Hermite interpolant of the stored
        values and derivatives; outside it the end matrices are used.
        """
        sysm = profile.system
        spl = profile.interpolant()
        lo, hi = float(profile.xi[0]), float(profile.xi[-1])
        Bm, Bp = profile.w_minus.B, profile.w_plus.B

        def B_of(xi):
            if xi <= lo:
                return Bm
            if xi >= hi:
                return Bp
            return sysm.B(spl(xi))

        return cls(sysm.space, float(profile.c), B_of, Bm, Bp, np.asarray(profile.xi, float),
                   profile, label or sysm.label)

    def translation_mode(self, xi: float) -> np.ndarray:
        """(phi', phi) with phi = D^{-1/2} w*'(xi), the lambda = 0 eigenfunction."""
        if self.profile is None:
            raise InputError("bundle has no wave profile")
        d1, d2 = self.profile.tangent(xi)
        s = 1.0 / np.sqrt(self.profile.system.D)
        return np.r_[s * d2, s * d1]

    @classmethod
    def constant(cls, space, c, B, xi_max=10.0, label="constant"):
        B = np.asarray(B, dtype=float)
        return cls.from_function(space, c, lambda xi: B, B, B, xi_max, 101, label)


def assemble_A(bundle: LinearizedBundle, lam, xi) -> np.ndarray:
    """A_lambda(xi) = [[-c I, lambda I - Q B(xi)], [I, 0]]; xi may be +-inf."""
    n = bundle.space.n
    QB = bundle.Q @ bundle.B(xi)
    dtype = complex if np.iscomplexobj(lam) else float
    A = np.zeros((2 * n, 2 * n), dtype=dtype)
    A[:n, :n] = -bundle.c * np.eye(n)
    A[:n, n:] = lam * np.eye(n) - QB
    A[n:, :n] = np.eye(n)
    return A


def assemble_H(bundle: LinearizedBundle, lam, xi) -> np.ndarray:
    """H_lambda(xi) = [[Q, c Q / 2], [c Q / 2, B(xi) - lambda Q]]; JH = A + c/2 I."""
    n = bundle.space.n
    Q = bundle.Q
    B = bundle.B(xi)
    dtype = complex if np.iscomplexobj(lam) else float
    H = np.zeros((2 * n, 2 * n), dtype=dtype)
    H[:n, :n] = Q
    H[:n, n:] = 0.5 * bundle.c * Q
    H[n:, :n] = 0.5 * bundle.c * Q
    H[n:, n:] = B - lam * Q
    if np.max(np.abs(H - H.T)) > 1e-12:
        raise ConsistencyError("H_lambda is not symmetric; B(xi) must be symmetric")
    if np.isinf(xi):
        shift = bundle.space.J @ H - assemble_A(bundle, lam, xi) - 0.5 * bundle.c * np.eye(2 * n)
        if np.max(np.abs(shift)) > 1e-12:
            raise ConsistencyError("J H != A + c/2 at an end state")
    return H


def asymptotic_eigs(c: float, alpha, lam) -> np.ndarray:
    """Roots mu of mu^2 + c mu + (alpha - lambda) = 0, the eigenvalues of A_lambda
    at an end state for the eigenvalue alpha of Q B.  Returned as
    [(-c + s)/2, (-c - s)/2] with s the principal square root of c^2 + 4(lambda - alpha).
    """
    s = np.sqrt(complex(c * c + 4 * (lam - alpha)))
    return np.array([0.5 * (-c + s), 0.5 * (-c - s)])


# ---------------------------------------------------------------------------
# hypotheses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    """Outcome of a hypothesis check; ``margin`` > 0 means it holds with room."""

    name: str
    holds: bool
    margin: float
    eigenvalues: np.ndarray

    def __bool__(self):
        return bool(self.holds)


def _sym(M):
    return 0.5 * (M + M.T)


def check_H1(B, Q, margin: float = 1e-10) -> Verdict:
    """sigma(Q B) lies in the open left half plane."""
    ev = np.linalg.eigvals(np.asarray(Q, float) @ np.asarray(B, float))
    top = float(np.max(ev.real))
    return Verdict("H1", top < -margin, -top, ev)


def check_H2(B, Q) -> Verdict:
    """<Q B v, v> < 0 for every nonzero v in the negative eigenspace of Q."""
    Q = np.asarray(Q, float)
    neg = np.where(np.diag(Q) < 0)[0]
    if neg.size == 0:
        return Verdict("H2", True, np.inf, np.zeros(0))
    S = _sym(Q @ np.asarray(B, float))[np.ix_(neg, neg)]
    ev = np.linalg.eigvalsh(S)
    return Verdict("H2", bool(ev[-1] < 0), float(-ev[-1]), ev)


def check_H2prime(B, Q) -> Verdict:
    """<Q B v, v> < 0 for every nonzero v; implies H1."""
    ev = np.linalg.eigvalsh(_sym(np.asarray(Q, float) @ np.asarray(B, float)))
    v = Verdict("H2prime", bool(ev[-1] < 0), float(-ev[-1]), ev)
    if v.holds and not check_H1(B, Q, margin=0.0).holds:
        raise ConsistencyError("H2' holds but H1 fails; eigen-solver inconsistency")
    return v


def negativize_conjugation(QB, max_halvings: int = 200) -> np.ndarray:
    """Nonsingular T with sym(T^{-1} QB T) negative definite.

    Works from the real Schur form QB = U S U^T.  Each 2 x 2 block of a
    complex pair is balanced so that its off-diagonal part is
    antisymmetric; the strictly block-upper part is then damped by the
    diagonal scaling diag(t^k) until the symmetric part sits below half the
    spectral abscissa.  Nearly defective eigenvalues can make that scaling
    numerically useless; the Lyapunov solution P of QB^T P + P QB = -I then
    gives T = P^{-1/2} instead.
    """
    QB = np.asarray(QB, dtype=float)
    if not check_H1(np.eye(len(QB)), QB).holds:
        raise HypothesisError("negativize_conjugation needs sigma(QB) in the open left half plane")
    T = _schur_conjugation(QB, max_halvings)
    if T is None or _conjugated_top(QB, T) >= 0:
        P = solve_continuous_lyapunov(QB.T, -np.eye(len(QB)))
        w, V = np.linalg.eigh(0.5 * (P + P.T))
        T = (V / np.sqrt(w)[None, :]) @ V.T
    top = _conjugated_top(QB, T)
    if not top < 0:
        raise ConsistencyError(f"conjugated symmetric part not negative definite (top eigenvalue {top})")
    return T


def _conjugated_top(QB, T):
    K = np.linalg.solve(T, QB @ T)
    return np.linalg.eigvalsh(_sym(K))[-1]


def _schur_conjugation(QB, max_halvings):
    S, U = schur(QB, output="real")
    m = len(S)
    D0 = np.ones(m)
    block = np.zeros(m, dtype=int)
    i = k = 0
    while i < m:
        if i + 1 < m and abs(S[i + 1, i]) > 0:
            b, c = S[i, i + 1], S[i + 1, i]
            D0[i + 1] = np.sqrt(-c / b)
            block[i] = block[i + 1] = k
            i += 2
        else:
            block[i] = k
            i += 1
        k += 1
    S1 = (S * D0[None, :]) / D0[:, None]
    abscissa = np.max(np.linalg.eigvals(QB).real)
    t = 1.0
    for _ in range(max_halvings):
        Dt = t ** block.astype(float)
        S2 = (S1 * Dt[None, :]) / Dt[:, None]
        if np.linalg.eigvalsh(_sym(S2))[-1] < 0.5 * abscissa:
            return U * (D0 * Dt)[None, :]
        t *= 0.5
    return None


def bound_C(bundle: LinearizedBundle, floor: float = C_FLOOR) -> float:
    """C = max(floor, sup_xi lambda_max(sym(Q B(xi)))) over the bundle grid and both ends."""
    Q = bundle.Q
    top = -np.inf
    for xi in np.r_[bundle.xi_grid, -np.inf, np.inf]:
        top = max(top, np.linalg.eigvalsh(_sym(Q @ bundle.B(xi)))[-1])
    return float(max(floor, top))


# ---------------------------------------------------------------------------
# spectral subspaces
# ---------------------------------------------------------------------------


def hyperbolic_splitting(M, margin: float = HYPERBOLIC_MARGIN):
    """Orthonormal bases of V+(M) and V-(M) from an ordered real Schur form.

    Raises HyperbolicityError if an eigenvalue has |Re| <= margin.
    """
    M = np.asarray(M)
    ev = np.linalg.eigvals(M)
    gap = float(np.min(np.abs(ev.real)))
    if gap <= margin:
        raise HyperbolicityError(
            f"matrix not hyperbolic: eigenvalue with |Re| = {gap:.3e} <= {margin:.1e}"
        )
    out = "complex" if np.iscomplexobj(M) else "real"
    _, Up, kp = schur(M, output=out, sort="rhp")
    _, Um, km = schur(M, output=out, sort="lhp")
    return Up[:, :kp], Um[:, :km]


def end_subspaces(bundle: LinearizedBundle, lam, margin: float = HYPERBOLIC_MARGIN):
    """(E^s_lambda(+inf), E^u_lambda(-inf)) as orthonormal frames."""
    _, Es = hyperbolic_splitting(assemble_A(bundle, lam, np.inf), margin)
    Eu, _ = hyperbolic_splitting(assemble_A(bundle, lam, -np.inf), margin)
    n = bundle.space.n
    if Es.shape[1] != n or Eu.shape[1] != n:
        raise HypothesisError(
            f"end splitting is ({Es.shape[1]}, {Eu.shape[1]}), expected ({n}, {n}); is H1 satisfied?"
        )
    return LagrangianFrame(Es, bundle.space), LagrangianFrame(Eu, bundle.space)


def build_LR(space: SymplecticSpace) -> LagrangianFrame:
    """L_R = {(p, q): p in V+(Q), q in V-(Q)}."""
    n, r = space.n, space.r
    Z = np.zeros((2 * n, n))
    for i in range(n):
        Z[i if i < r else n + i, i] = 1.0
    return LagrangianFrame(Z, space)


def lr_graph_matrix(frame: LagrangianFrame) -> np.ndarray:
    """Symmetric M with frame = {(p+, p-, q+, q-) : (p+, q-) = M (q+, p-)}.

    Exists exactly when the subspace is transversal to L_R.
    """
    space = frame.space
    n, r = space.n, space.r
    Z = frame.Z
    free = np.r_[np.arange(n, n + r), np.arange(r, n)]       # q+, p-
    dep = np.r_[np.arange(0, r), np.arange(n + r, 2 * n)]    # p+, q-
    F = Z[free]
    cond = np.linalg.cond(F)
    if not np.isfinite(cond) or cond > 1e10:
        raise HypothesisError(f"subspace not transversal to L_R (cond {cond:.2e})")
    M = Z[dep] @ np.linalg.inv(F)
    return M
