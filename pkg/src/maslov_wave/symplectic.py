"""Finite-dimensional symplectic linear algebra.

Everything lives in R^{2n} with the complex structure

    J = [[0, -Q], [Q, 0]],   Q = diag(I_r, -I_{n-r}),

and the symplectic form omega(x, y) = <J x, y>.  Subspaces are represented by
frames: 2n x k matrices whose column span is the subspace.

The Maslov (CLM) index of a pair of Lagrangian paths follows the convention
in which the *first* argument plays the role of the reference subspace: for a
fixed reference V and a moving path L(t) the crossing form is the
Robbin--Salamon form of L(t), and for a pair (L1(t), L2(t)) it is the form of
L2 minus the form of L1, restricted to the intersection.  Regular crossings
are summed with m+ at the left end, the signature in the interior and -m- at
the right end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.linalg import subspace_angles
from scipy.optimize import minimize_scalar

from .errors import (
    ConsistencyError,
    IllConditionedError,
    InputError,
    NoCrossingError,
    NonRegularCrossingError,
    NotAFrameError,
    NotIsotropicError,
    RankAmbiguityError,
    RefinementExhaustedError,
)

RANK_RTOL = 1e-8
ISOTROPY_TOL = 1e-8
CROSSING_TOL = 1e-6
FORM_TOL = 1e-7
LOCATE_XTOL = 1e-10


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymplecticSpace:
    """(R^{2n}, omega) with omega(x, y) = <Jx, y>.

    Parameters
    ----------
    n : int
        Half dimension.
    r : int
        Dimension of the positive eigenspace of Q, 0 <= r <= n.
    """

    n: int
    r: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InputError(f"n must be a positive integer, got {self.n!r}")
        if int(self.r) != self.r or not 0 <= self.r <= self.n:
            raise InputError(f"r must satisfy 0 <= r <= n, got r={self.r!r}, n={self.n}")

    @property
    def dim(self) -> int:
        return 2 * self.n

    @property
    def Q(self) -> np.ndarray:
        return np.diag(np.r_[np.ones(self.r), -np.ones(self.n - self.r)])

    @property
    def J(self) -> np.ndarray:
        n = self.n
        Q = self.Q
        J = np.zeros((2 * n, 2 * n))
        J[:n, n:] = -Q
        J[n:, :n] = Q
        return J


@dataclass(frozen=True)
class LagrangianFrame:
    """A 2n x n matrix whose column span is (meant to be) Lagrangian.

    Construction does not validate; use :func:`is_lagrangian` or
    :func:`check_lagrangian`.
    """

    Z: np.ndarray
    space: SymplecticSpace

    def __post_init__(self):
        Z = np.asarray(self.Z, dtype=float)
        if Z.ndim == 1:
            Z = Z[:, None]
        if Z.ndim != 2 or Z.shape[0] != self.space.dim:
            raise InputError(
                f"frame must have {self.space.dim} rows, got shape {np.shape(self.Z)}"
            )
        object.__setattr__(self, "Z", Z)

    def orthonormal(self) -> "LagrangianFrame":
        """Same subspace, orthonormal columns (Householder QR, diag(R) > 0)."""
        q, r = np.linalg.qr(self.Z)
        s = np.sign(np.diag(r))
        s[s == 0] = 1.0
        return LagrangianFrame(q * s, self.space)

    def __matmul__(self, G):
        return LagrangianFrame(self.Z @ np.asarray(G, dtype=float), self.space)


@dataclass(frozen=True)
class SymmetricFormOnSubspace:
    """A symmetric bilinear form given by its Gram matrix on a basis.

    ``basis`` is 2n x k; ``gram`` is k x k.  A zero-dimensional domain is
    represented by a 2n x 0 basis and a 0 x 0 Gram matrix.
    """

    basis: np.ndarray
    gram: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.gram, dtype=float).reshape(
            np.shape(self.gram) if np.size(self.gram) else (0, 0)
        )
        object.__setattr__(self, "gram", 0.5 * (g + g.T))
        object.__setattr__(self, "basis", np.asarray(self.basis, dtype=float))

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def eigenvalues(self) -> np.ndarray:
        if self.dim == 0:
            return np.zeros(0)
        return np.linalg.eigvalsh(self.gram)

    def inertia(self, tol: float = FORM_TOL) -> Tuple[int, int, int]:
        """(m+, m0, m-), eigenvalues with |e| <= tol * max(1, |gram|) count as zero."""
        ev = self.eigenvalues()
        if ev.size == 0:
            return 0, 0, 0
        thr = tol * max(1.0, np.max(np.abs(ev)))
        return int(np.sum(ev > thr)), int(np.sum(np.abs(ev) <= thr)), int(np.sum(ev < -thr))

    def signature(self, tol: float = FORM_TOL) -> int:
        mp, _, mm = self.inertia(tol)
        return mp - mm


@dataclass(frozen=True)
class LagrangianPath:
    """A continuous path t -> LagrangianFrame on the closed interval [a, b].

    The evaluator may be called slightly outside [a, b] only if it supports
    it; the crossing-form code uses one-sided differences at the ends.
    """

    evaluator: Callable[[float], LagrangianFrame]
    a: float
    b: float
    samples: int = 201

    def __post_init__(self):
        if not self.b > self.a:
            raise InputError(f"path interval must satisfy a < b, got [{self.a}, {self.b}]")

    def __call__(self, t: float) -> LagrangianFrame:
        return self.evaluator(float(t))

    def reversed(self) -> "LagrangianPath":
        """The same path traversed backwards, parameterised on [-b, -a]."""
        ev = self.evaluator
        return LagrangianPath(lambda s: ev(-s), -self.b, -self.a, self.samples)

    @classmethod
    def constant(cls, frame: LagrangianFrame, a: float, b: float, samples: int = 3):
        return cls(lambda t: frame, a, b, samples)


@dataclass(frozen=True)
class CrossingRecord:
    """One crossing: parameter, basis of the intersection, crossing form."""

    t0: float
    kernel_basis: np.ndarray
    form: SymmetricFormOnSubspace
    regular: bool
    endpoint: Optional[str] = None  # "left", "right" or None

    @property
    def kernel_dim(self) -> int:
        return self.kernel_basis.shape[1]

    @property
    def m_plus(self) -> int:
        return self.form.inertia()[0]

    @property
    def m_minus(self) -> int:
        return self.form.inertia()[2]

    @property
    def signature(self) -> int:
        return self.form.signature()

    def contribution(self) -> int:
        """Contribution to the index under the regular-crossing formula."""
        mp, _, mm = self.form.inertia()
        if self.endpoint == "left":
            return mp
        if self.endpoint == "right":
            return -mm
        return mp - mm


@dataclass
class ClmResult:
    """Value of a CLM index together with the crossings that produced it."""

    index: int
    crossings: List[CrossingRecord] = field(default_factory=list)


# ---------------------------------------------------------------------------
# basic operations
# ---------------------------------------------------------------------------


def omega(space: SymplecticSpace, x, y) -> float:
    """omega(x, y) = <J x, y>."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[0] != space.dim or y.shape[0] != space.dim:
        raise InputError(
            f"vectors must have length {space.dim}, got {x.shape[0]} and {y.shape[0]}"
        )
    return float(np.dot(space.J @ x, y))


def omega_matrix(space: SymplecticSpace, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Matrix of omega(X[:, i], Y[:, j])."""
    return (space.J @ X).T @ Y


def _frame_of(obj, space: Optional[SymplecticSpace] = None) -> LagrangianFrame:
    if isinstance(obj, LagrangianFrame):
        return obj
    if space is None:
        raise InputError("a SymplecticSpace is needed to wrap a bare array")
    return LagrangianFrame(np.asarray(obj, dtype=float), space)


def frame_rank(frame: LagrangianFrame, rtol: float = RANK_RTOL) -> int:
    s = np.linalg.svd(frame.Z, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def isotropy_defect(frame: LagrangianFrame) -> float:
    """max |Z^T J Z| on an orthonormalised copy of the frame."""
    Z = frame.orthonormal().Z
    return float(np.max(np.abs(Z.T @ frame.space.J @ Z))) if Z.size else 0.0


def check_lagrangian(frame: LagrangianFrame, tol: float = ISOTROPY_TOL) -> None:
    """Raise NotAFrameError or NotIsotropicError unless ``frame`` is Lagrangian."""
    n = frame.space.n
    if frame.Z.shape[1] != n:
        raise NotAFrameError(f"a Lagrangian frame needs {n} columns, got {frame.Z.shape[1]}")
    rank = frame_rank(frame)
    if rank != n:
        raise NotAFrameError(f"not a frame: rank {rank} < {n}")
    defect = isotropy_defect(frame)
    if defect > tol:
        raise NotIsotropicError(f"not isotropic: max |Z^T J Z| = {defect:.3e} > {tol:.1e}")


def is_lagrangian(frame: LagrangianFrame, tol: float = ISOTROPY_TOL) -> bool:
    try:
        check_lagrangian(frame, tol)
    except NotIsotropicError:
        return False
    except NotAFrameError:
        return False
    return True


def orthonormal_basis(M: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal basis of the column span of M."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.shape[1] == 0:
        return np.zeros((M.shape[0], 0))
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((M.shape[0], 0))
    k = int(np.sum(s > rtol * s[0]))
    return u[:, :k]


def null_space(M: np.ndarray, rtol: float = RANK_RTOL, scale: Optional[float] = None) -> np.ndarray:
    """Orthonormal basis of ker M; singular values <= rtol * scale count as zero."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    _, s, vt = np.linalg.svd(M, full_matrices=True)
    if scale is None:
        scale = s[0] if s.size and s[0] > 0 else 1.0
    rank = int(np.sum(s > rtol * scale))
    return vt[rank:].T


def intersection(space: SymplecticSpace, L1, L2, tol: float = RANK_RTOL) -> Tuple[int, np.ndarray]:
    """Dimension and orthonormal basis of L1 ∩ L2.

    The dimension is the number of singular values of [Z1 | Z2] (orthonormal
    frames) that are <= tol times the largest one.
    """
    if not tol > 0:
        raise InputError(f"tol must be positive, got {tol}")
    Z1 = _frame_of(L1, space).orthonormal().Z
    Z2 = _frame_of(L2, space).orthonormal().Z
    k1 = Z1.shape[1]
    N = null_space(np.hstack([Z1, Z2]), tol)
    if N.shape[1] == 0:
        return 0, np.zeros((space.dim, 0))
    X = Z1 @ N[:k1]
    return N.shape[1], orthonormal_basis(X, 1e-3)


def subspace_sum(*frames: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    return orthonormal_basis(np.hstack(frames), rtol)


def principal_angles(Z1: np.ndarray, Z2: np.ndarray) -> np.ndarray:
    """Principal angles (radians, ascending) between two column spans."""
    return np.sort(subspace_angles(orthonormal_basis(Z1), orthonormal_basis(Z2)))


def smallest_singular_value(Z1: np.ndarray, Z2: np.ndarray) -> float:
    """sigma_min of [Z1 | Z2]; frames are assumed orthonormal."""
    return float(np.linalg.svd(np.hstack([Z1, Z2]), compute_uv=False)[-1])


# ---------------------------------------------------------------------------
# crossing forms
# ---------------------------------------------------------------------------


def _complement_solve(Zt: np.ndarray, W: np.ndarray, v: np.ndarray) -> np.ndarray:
    """w in span(W) with v + w in span(Zt)."""
    M = np.hstack([Zt, -W])
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > 1e10:
        raise IllConditionedError(f"complement solve ill-conditioned (cond = {cond:.2e})")
    sol = np.linalg.solve(M, v)
    return W @ sol[Zt.shape[1]:]


def _form_values(path: LagrangianPath, kernel: np.ndarray, t0: float, W: np.ndarray,
                 h: float) -> np.ndarray:
    """d/dt omega(v_i, w_j(t)) at t0 by finite differences of step h.

    Central differences in the interior, second-order one-sided at the ends
    of the path interval.
    """
    space = path(t0).space
    J = space.J

    def omega_block(t):
        Zt = path(t).orthonormal().Z
        Wt = np.column_stack([_complement_solve(Zt, W, v) for v in kernel.T])
        return (J @ kernel).T @ Wt

    if t0 - h >= path.a - 1e-15 and t0 + h <= path.b + 1e-15:
        return (omega_block(t0 + h) - omega_block(t0 - h)) / (2 * h)
    f0 = omega_block(t0)
    if t0 - h < path.a - 1e-15:
        return (-3 * f0 + 4 * omega_block(t0 + h) - omega_block(t0 + 2 * h)) / (2 * h)
    return (3 * f0 - 4 * omega_block(t0 - h) + omega_block(t0 - 2 * h)) / (2 * h)


def path_form(path: LagrangianPath, kernel: np.ndarray, t0: float,
              h: Optional[float] = None, complement: Optional[np.ndarray] = None,
              richardson: bool = True) -> np.ndarray:
    """Gram matrix of the Robbin--Salamon form of ``path`` at t0 on ``kernel``.

    For v in L(t0) and a Lagrangian complement W of L(t0), w(t) in W solves
    v + w(t) in L(t) and the form is d/dt omega(v, w(t)) at t0.  The default
    complement is J L(t0), the orthogonal complement.
    """
    if h is None:
        h = 1e-5 * max(1.0, path.b - path.a)
    Z0 = path(t0).orthonormal()
    W = Z0.space.J @ Z0.Z if complement is None else np.asarray(complement, dtype=float)
    G = _form_values(path, kernel, t0, W, h)
    if richardson:
        G2 = _form_values(path, kernel, t0, W, h / 2)
        G = (4 * G2 - G) / 3
    return 0.5 * (G + G.T)


def crossing_form(path: LagrangianPath, V, t0: float, h: Optional[float] = None,
                  tol: float = CROSSING_TOL,
                  complement: Optional[np.ndarray] = None) -> SymmetricFormOnSubspace:
    """Crossing form Gamma(L(t), V; t0) on L(t0) ∩ V."""
    L0 = path(t0)
    space = L0.space
    V = _frame_of(V, space)
    dim, basis = intersection(space, L0, V, tol)
    if dim == 0:
        raise NoCrossingError(f"no crossing at t0 = {t0}: path(t0) ∩ V = {{0}}")
    G = path_form(path, basis, t0, h, complement)
    return SymmetricFormOnSubspace(basis, G)


def relative_crossing_form(path1: LagrangianPath, path2: LagrangianPath, t0: float,
                           h: Optional[float] = None,
                           tol: float = CROSSING_TOL) -> SymmetricFormOnSubspace:
    """Form of path2 minus form of path1 on path1(t0) ∩ path2(t0)."""
    L1 = path1(t0)
    space = L1.space
    dim, basis = intersection(space, L1, path2(t0), tol)
    if dim == 0:
        raise NoCrossingError(f"no crossing at t0 = {t0}")
    G = path_form(path2, basis, t0, h) - path_form(path1, basis, t0, h)
    return SymmetricFormOnSubspace(basis, G)


# ---------------------------------------------------------------------------
# CLM index
# ---------------------------------------------------------------------------


def _sigma_profile(path1: LagrangianPath, path2: LagrangianPath, ts: np.ndarray) -> np.ndarray:
    return np.array([
        smallest_singular_value(path1(t).orthonormal().Z, path2(t).orthonormal().Z) for t in ts
    ])


def locate_crossings(path1: LagrangianPath, path2: LagrangianPath, samples: Optional[int] = None,
                     tol: float = CROSSING_TOL, xtol: float = LOCATE_XTOL) -> List[Tuple[float, Optional[str]]]:
    """Parameters where path1(t) ∩ path2(t) is nontrivial.

    Local minima of sigma_min([Z1 | Z2]) on a uniform grid are refined by a
    bounded scalar minimisation; minima at or below ``tol`` are crossings.
    Returns a list of (t0, endpoint) with endpoint in {"left", "right", None}.
    """
    a, b = path1.a, path1.b
    if samples is None:
        samples = max(path1.samples, path2.samples)
    ts = np.linspace(a, b, samples)
    sig = _sigma_profile(path1, path2, ts)
    end_tol = max(1e3 * xtol, 1e-9 * (b - a))
    found: List[Tuple[float, Optional[str]]] = []
    if sig[0] <= tol:
        found.append((a, "left"))
    if sig[-1] <= tol:
        found.append((b, "right"))

    def f(t):
        return smallest_singular_value(path1(t).orthonormal().Z, path2(t).orthonormal().Z)

    for i in range(samples):
        left = sig[i - 1] if i > 0 else np.inf
        right = sig[i + 1] if i < samples - 1 else np.inf
        if not (sig[i] <= left and sig[i] <= right):
            continue
        lo = ts[max(i - 1, 0)]
        hi = ts[min(i + 1, samples - 1)]
        res = minimize_scalar(f, bounds=(lo, hi), method="bounded",
                              options={"xatol": xtol, "maxiter": 500})
        t0, s0 = float(res.x), float(res.fun)
        if s0 > sig[i]:
            t0, s0 = float(ts[i]), float(sig[i])
        if s0 > tol:
            continue
        if t0 - a <= end_tol or t0 - b >= -end_tol:
            continue  # endpoint crossings are taken from the end samples
        if any(abs(t0 - t) <= end_tol for t, _ in found):
            continue
        # a minimum in the cell next to a detected endpoint crossing is that crossing
        if (i <= 1 and sig[0] <= tol) or (i >= samples - 2 and sig[-1] <= tol):
            continue
        found.append((t0, None))
    found.sort(key=lambda p: p[0])
    return found


def _clm_pass(path1: LagrangianPath, path2: LagrangianPath, samples: int, h, tol,
              form_tol) -> ClmResult:
    records = []
    for t0, endpoint in locate_crossings(path1, path2, samples, tol):
        form = relative_crossing_form(path1, path2, t0, h, tol)
        _, m0, _ = form.inertia(form_tol)
        if m0 > 0:
            raise NonRegularCrossingError(
                f"non-regular crossing at t0 = {t0:.10g} (form eigenvalues {form.eigenvalues()})",
                t0,
            )
        records.append(CrossingRecord(t0, form.basis, form, True, endpoint))
    return ClmResult(sum(r.contribution() for r in records), records)


def clm_index_pair(path1: LagrangianPath, path2: LagrangianPath, samples: Optional[int] = None,
                   h: Optional[float] = None, tol: float = CROSSING_TOL,
                   form_tol: float = FORM_TOL, refine_check: bool = True,
                   max_doublings: int = 3, detail: bool = False):
    """CLM index of the pair (path1, path2) by the regular-crossing formula.

    The crossing form is Q_{path2} - Q_{path1} on the intersection, so a
    constant path1 = V reproduces :func:`clm_index_fixed`.  With
    ``refine_check`` the computation is repeated on a doubled grid until two
    consecutive passes agree.
    """
    if abs(path1.a - path2.a) > 1e-14 or abs(path1.b - path2.b) > 1e-14:
        raise InputError("both paths must share the parameter interval")
    if samples is None:
        samples = max(path1.samples, path2.samples)
    res = _clm_pass(path1, path2, samples, h, tol, form_tol)
    if refine_check:
        for _ in range(max_doublings):
            samples = 2 * samples - 1
            nxt = _clm_pass(path1, path2, samples, h, tol, form_tol)
            if nxt.index == res.index and len(nxt.crossings) == len(res.crossings):
                res = nxt
                break
            res = nxt
        else:
            raise RefinementExhaustedError(
                "crossing count did not stabilise under grid refinement"
            )
    return res if detail else res.index


def clm_index_fixed(V, path: LagrangianPath, **kwargs):
    """CLM index of path(t) relative to the fixed Lagrangian V."""
    V = _frame_of(V, path(path.a).space)
    const = LagrangianPath.constant(V, path.a, path.b, path.samples)
    return clm_index_pair(const, path, **kwargs)


# ---------------------------------------------------------------------------
# triple index and Hormander index
# ---------------------------------------------------------------------------


def triple_form(space: SymplecticSpace, alpha, beta, delta,
                tol: float = RANK_RTOL) -> SymmetricFormOnSubspace:
    """The form Q(alpha, beta; delta) on alpha ∩ (beta + delta).

    Q(x1, x2) = omega(y1, z2) where x_j = y_j + z_j, y_j in beta, z_j in delta.
    """
    A = _frame_of(alpha, space).orthonormal().Z
    Bm = _frame_of(beta, space).orthonormal().Z
    D = _frame_of(delta, space).orthonormal().Z
    S = subspace_sum(Bm, D, rtol=tol)
    N = null_space(np.hstack([A, -S]), tol)
    if N.shape[1] == 0:
        return SymmetricFormOnSubspace(np.zeros((space.dim, 0)), np.zeros((0, 0)))
    X = orthonormal_basis(A @ N[:A.shape[1]], 1e-3)
    BD = np.hstack([Bm, D])
    coef, *_ = np.linalg.lstsq(BD, X, rcond=None)
    resid = np.max(np.abs(BD @ coef - X)) if X.size else 0.0
    if resid > 1e-6:
        raise ConsistencyError(f"x not in beta + delta (residual {resid:.2e})")
    Y = Bm @ coef[:Bm.shape[1]]
    Zd = D @ coef[Bm.shape[1]:]
    G = omega_matrix(space, Y, Zd)
    return SymmetricFormOnSubspace(X, G)


def _triple_index_once(space, alpha, beta, kappa, tol) -> int:
    form = triple_form(space, alpha, beta, kappa, tol)
    m_plus = form.inertia(max(tol, 1e-9))[0]
    d_ak, _ = intersection(space, alpha, kappa, tol)
    d_abk = triple_intersection_dim(space, alpha, beta, kappa, tol)
    return m_plus + d_ak - d_abk


def triple_intersection_dim(space, alpha, beta, kappa, tol: float = RANK_RTOL) -> int:
    A = _frame_of(alpha, space).orthonormal().Z
    Bm = _frame_of(beta, space).orthonormal().Z
    K = _frame_of(kappa, space).orthonormal().Z
    z = np.zeros_like(Bm)
    M = np.block([[A, -Bm, np.zeros_like(K)], [A, z, -K]])
    return null_space(M, tol).shape[1]


def triple_index(space: SymplecticSpace, alpha, beta, kappa, tol: float = RANK_RTOL) -> int:
    """iota(alpha, beta, kappa) = m+(Q(alpha, beta; kappa)) + dim(alpha∩kappa) - dim(alpha∩beta∩kappa).

    Recomputed with the rank tolerance scaled by 1/10 and 10; disagreement
    raises RankAmbiguityError.
    """
    vals = {_triple_index_once(space, alpha, beta, kappa, t) for t in (tol, tol / 10, tol * 10)}
    if len(vals) != 1:
        raise RankAmbiguityError(f"triple index depends on rank tolerance: {sorted(vals)}")
    return vals.pop()


def hormander_index(space: SymplecticSpace, l1, l2, k1, k2, tol: float = RANK_RTOL) -> int:
    """s(l1, l2; k1, k2) from triple indices; both expressions must agree."""
    s1 = triple_index(space, l1, l2, k2, tol) - triple_index(space, l1, l2, k1, tol)
    s2 = triple_index(space, l1, k1, k2, tol) - triple_index(space, l2, k1, k2, tol)
    if s1 != s2:
        raise ConsistencyError(f"Hormander index expressions disagree: {s1} != {s2}")
    return s1


def clm_via_transversal_endpoints(path1: LagrangianPath, path2: LagrangianPath, L,
                                  samples: Optional[int] = None,
                                  tol: float = RANK_RTOL) -> int:
    """CLM index of (path1, path2) from triple indices against a common transversal L.

    iCLM = iota(L2(b), L1(b); L) - iota(L2(a), L1(a); L), valid when both
    paths stay transversal to L; this is checked with :func:`locate_crossings`,
    so touches between grid points are caught as well.
    """
    space = path1(path1.a).space
    L = _frame_of(L, space)
    if samples is None:
        samples = max(path1.samples, path2.samples)
    const = LagrangianPath.constant(L, path1.a, path1.b)
    for p in (path1, path2):
        hits = locate_crossings(p, const, samples)
        if hits:
            raise InputError(f"transversality to L violated at t = {hits[0][0]:.6g}")
    a, b = path1.a, path1.b
    return (triple_index(space, path2(b), path1(b), L, tol)
            - triple_index(space, path2(a), path1(a), L, tol))


def lagrangian_from_symmetric(space: SymplecticSpace, S: np.ndarray, graph_over: str = "q") -> LagrangianFrame:
    """Graph frame built from a symmetric n x n matrix.

    graph_over="q": {(Q S q, q)}; graph_over="p": {(p, Q S p)}.
    """
    S = np.asarray(S, dtype=float)
    n = space.n
    I = np.eye(n)
    if graph_over == "q":
        Z = np.vstack([space.Q @ S, I])
    else:
        Z = np.vstack([I, space.Q @ S])
    return LagrangianFrame(Z, space)


def random_lagrangian(space: SymplecticSpace, rng: np.random.Generator) -> LagrangianFrame:
    """A random Lagrangian frame (image of a graph under a random symplectic map)."""
    n = space.n
    A = rng.standard_normal((n, n))
    base = lagrangian_from_symmetric(space, A + A.T, "q").Z
    S2 = rng.standard_normal((n, n))
    M = np.eye(2 * n)
    M[n:, :n] = space.Q @ (S2 + S2.T)
    return LagrangianFrame(M @ base, space).orthonormal()
