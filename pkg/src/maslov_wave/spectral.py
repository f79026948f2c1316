"""Counting the real unstable eigenvalues of L two ways and checking the index identities.

Route one is the matching (Evans) determinant D(lambda) = det[E^s(0) | E^u(0)]
swept over [0, C].  Route two is the spectral flow of the self-adjoint
family S_lambda = -Q d^2 + (c^2/4) Q - B + lambda Q, which satisfies
S_lambda = -Q (LL - lambda) with LL = d^2 - c^2/4 + Q B the symmetrised
operator, so the kernels of S_lambda sit exactly at the real eigenvalues
of L.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sps
from scipy.linalg import eig_banded, eigvals_banded
from scipy.optimize import brentq, minimize_scalar
from scipy.sparse.linalg import LinearOperator, eigsh, splu

from . import bundle as bd
from . import symplectic as sy
from .errors import InputError, MaslovWaveError, NonRegularCrossingError
from .system import LinearizedBundle, check_H1, check_H2, check_H2prime

DELTA0 = 1e-4
ROOT_XTOL = 1e-9
KERNEL_TOL = 1e-6


def thread_count(requested: Optional[int] = None) -> int:
    """Worker threads for lambda sweeps: argument, else MASLOV_WAVE_THREADS, else 1."""
    if requested is None:
        env = os.environ.get("MASLOV_WAVE_THREADS", "").strip()
        requested = int(env) if env else 1
    return max(1, int(requested))


# ---------------------------------------------------------------------------
# synthetic test bundle with known spectrum
# ---------------------------------------------------------------------------


def sech2_bundle(ell: int = 2, beta: float = 2.0, c: float = 1.0, xi_max: float = 12.0,
                 nodes: int = 2001) -> LinearizedBundle:
    """Scalar bundle with Q B(xi) = -beta + ell(ell+1) sech^2 xi.

    The symmetrised operator d^2 - c^2/4 + Q B is a Poschl--Teller
    operator; see :func:`sech2_eigenvalues`.
    """
    space = sy.SymplecticSpace(1, 1)
    k = ell * (ell + 1)

    def B(xi):
        return np.array([[-beta + k / np.cosh(xi) ** 2]])

    end = np.array([[-float(beta)]])
    return LinearizedBundle.from_function(space, c, B, end, end, xi_max, nodes, "sech2")


def sech2_eigenvalues(ell: int = 2, beta: float = 2.0, c: float = 1.0) -> np.ndarray:
    """Real eigenvalues kappa^2 - beta - c^2/4, kappa = ell, ..., 1, in decreasing order."""
    return np.array([k * k - beta - c * c / 4 for k in range(ell, 0, -1)], float)


# ---------------------------------------------------------------------------
# Evans sweep
# ---------------------------------------------------------------------------


@dataclass
class EvansSample:
    lam: float
    det_value: float
    sigma_min: float
    intersection_dim: int


class EvansFunction:
    """D(lambda) = det[E^s_lambda(0) | E^u_lambda(0)] with orthonormal frames.

    The end frames are oriented against reference frames so that D is
    continuous in lambda: a frame K is kept when det(R^T K) > 0 and gets
    its first column flipped otherwise.  :func:`evans_sweep` moves the
    reference along the lambda grid.
    """

    def __init__(self, bundle: LinearizedBundle, T: Optional[float] = None):
        self.bundle = bundle
        self.T = bd._default_T(bundle) if T is None else float(T)

    def raw(self, lam: float):
        """(det, sigma_min, dim, end frames) with the end frames as computed."""
        tr = bd.evolve_frames(self.bundle, lam, self.T)
        Zs, Zu = tr.Es(0.0).Z, tr.Eu(0.0).Z
        M = np.hstack([Zs, Zu])
        sv = np.linalg.svd(M, compute_uv=False)
        dim = int(np.sum(sv <= KERNEL_TOL))
        return float(np.linalg.det(M)), float(sv[-1]), dim, (tr.Es_inf.Z, tr.Eu_inf.Z), tr

    @staticmethod
    def _sign(ref, K) -> float:
        d = np.linalg.det(ref.T @ K)
        if abs(d) < 1e-6:
            raise MaslovWaveError("orientation reference too far from the end frame; refine the lambda grid")
        return 1.0 if d > 0 else -1.0

    def oriented(self, lam: float, ref=None):
        """Oriented (det, sigma_min, dim, end frames); no orientation when ref is None."""
        det, sig, dim, ends, _ = self.raw(lam)
        if ref is None:
            return det, sig, dim, ends
        ss = self._sign(ref[0], ends[0])
        su = self._sign(ref[1], ends[1])
        s_ends = (ends[0] * np.r_[ss, np.ones(ends[0].shape[1] - 1)],
                  ends[1] * np.r_[su, np.ones(ends[1].shape[1] - 1)])
        return det * ss * su, sig, dim, s_ends

    def __call__(self, lam: float) -> float:
        return self.oriented(lam)[0]


def evans_sweep(bundle: LinearizedBundle, lambdas: Sequence[float], T: Optional[float] = None,
                threads: Optional[int] = None, evans: Optional[EvansFunction] = None):
    """Evans samples on an increasing lambda grid with orientation carried along it.

    Returns (samples, oriented end frames per sample).  The integrations run
    in parallel; the orientation chain is applied afterwards.
    """
    lambdas = np.asarray(lambdas, float)
    if np.any(np.diff(lambdas) <= 0):
        raise InputError("lambda grid must be strictly increasing")
    ev = evans or EvansFunction(bundle, T)
    nt = thread_count(threads)
    if nt > 1:
        with ThreadPoolExecutor(nt) as pool:
            raws = list(pool.map(ev.raw, lambdas))
    else:
        raws = [ev.raw(l) for l in lambdas]
    samples, frames = [], []
    ref = None
    for lam, (det, sig, dim, ends, _) in zip(lambdas, raws):
        if ref is not None:
            ss = ev._sign(ref[0], ends[0])
            su = ev._sign(ref[1], ends[1])
            ends = (ends[0] * np.r_[ss, np.ones(ends[0].shape[1] - 1)],
                    ends[1] * np.r_[su, np.ones(ends[1].shape[1] - 1)])
            det = det * ss * su
        ref = ends
        samples.append(EvansSample(float(lam), det, sig, dim))
        frames.append(ends)
    return samples, frames


@dataclass
class EigCount:
    eigenvalues: List[Tuple[float, int]]
    N_plus: int
    N_bar_plus: int
    kernel_dim_0: int
    delta0: float


def count_eigenvalues(bundle: LinearizedBundle, samples: Sequence[EvansSample], frames,
                      delta0: float = DELTA0, T: Optional[float] = None,
                      xtol: float = ROOT_XTOL) -> EigCount:
    """Real eigenvalues in (delta0, C] from an oriented Evans sweep.

    Sign changes are bracketed and solved to ``xtol``; minima of sigma_min
    without a sign change are refined as possible double roots.  The
    multiplicity of a root is the intersection dimension there.
    """
    ev = EvansFunction(bundle, T)
    lams = np.array([s.lam for s in samples])
    dets = np.array([s.det_value for s in samples])
    sig = np.array([s.sigma_min for s in samples])
    roots: List[Tuple[float, int]] = []
    if samples[-1].intersection_dim > 0:
        raise MaslovWaveError(f"eigenvalue at the upper end C = {lams[-1]:.6g}; widen the lambda interval")

    def local(ref):
        return lambda l: ev.oriented(l, ref)[0]

    for i in range(len(samples) - 1):
        a, b = lams[i], lams[i + 1]
        if b <= delta0:
            continue
        a = max(a, delta0)
        fa = dets[i] if lams[i] >= delta0 else ev.oriented(a, frames[i])[0]
        fb = dets[i + 1]
        if fa == 0.0 or fb == 0.0 or np.sign(fa) != np.sign(fb):
            r = brentq(local(frames[i]), a, b, xtol=xtol) if fa * fb < 0 else (a if fa == 0 else b)
            roots.append((r, max(1, ev.raw(r)[2])))
    # sigma_min dips without a sign change
    for i in range(1, len(samples) - 1):
        if lams[i] <= delta0 or not (sig[i] <= sig[i - 1] and sig[i] <= sig[i + 1]):
            continue
        if sig[i] > 1e-2 or np.sign(dets[i - 1]) != np.sign(dets[i + 1]):
            continue
        res = minimize_scalar(lambda l: ev.raw(l)[1], bounds=(lams[i - 1], lams[i + 1]),
                              method="bounded", options={"xatol": xtol})
        if res.fun <= KERNEL_TOL and res.x > delta0 and not any(abs(res.x - r) < 1e-6 for r, _ in roots):
            roots.append((float(res.x), max(2, ev.raw(res.x)[2])))
    roots.sort()
    k0 = samples[0].intersection_dim if lams[0] == 0.0 else ev.raw(0.0)[2]
    n_plus = sum(m for _, m in roots)
    return EigCount(roots, n_plus, n_plus + k0, k0, delta0)


@dataclass
class TranslationCheck:
    det0: float
    kernel_dim: int
    angle: float
    derivative: float
    simple: bool


def translation_check(bundle: LinearizedBundle, delta0: float = DELTA0,
                      T: Optional[float] = None) -> TranslationCheck:
    """Evans data at lambda = 0 against the wave tangent (D^{-1/2} w'', D^{-1/2} w').

    The derivative D'(0) is a central difference over [-delta0, delta0],
    with orientation fixed by the lambda = 0 end frames.
    """
    if bundle.profile is None:
        raise InputError("translation check needs a bundle built from a profile")
    ev = EvansFunction(bundle, T)
    det0, _, dim, ends, tr = ev.raw(0.0)
    _, V = sy.intersection(bundle.space, tr.Es(0.0), tr.Eu(0.0), KERNEL_TOL)
    v = bundle.translation_mode(0.0)
    v = v / np.linalg.norm(v)
    if V.shape[1] == 0:
        angle = np.pi / 2
    else:
        angle = float(sy.principal_angles(v[:, None], V)[0])
    dp = ev.oriented(delta0, ends)[0]
    dm = ev.oriented(-delta0, ends)[0]
    deriv = (dp - dm) / (2 * delta0)
    # simple zero: the difference quotient is resolved well above the value at 0
    simple = bool(abs(deriv) * delta0 > 100 * abs(det0) and abs(deriv) > 1e-8)
    return TranslationCheck(det0, dim, angle, float(deriv), simple)


# ---------------------------------------------------------------------------
# discretised S_lambda and its spectral flow
# ---------------------------------------------------------------------------


@dataclass
class DiscreteS:
    """S_lambda on interior nodes of [-Xi, Xi] with Dirichlet ends, 4th-order stencil.

    Unknowns are interleaved (node-major), so the matrix is banded with
    lower bandwidth 2n.
    """

    bundle: LinearizedBundle = field(repr=False)
    Xi: float
    nodes: int
    xi: np.ndarray = field(repr=False, default=None)
    _base: sps.csr_matrix = field(repr=False, default=None)
    _Qdiag: np.ndarray = field(repr=False, default=None)

    @property
    def h(self) -> float:
        return 2 * self.Xi / (self.nodes - 1)

    def matrix(self, lam: float) -> sps.csr_matrix:
        return (self._base + lam * sps.diags(self._Qdiag)).tocsr()

    def banded(self, lam: float) -> np.ndarray:
        """Lower banded storage for scipy.linalg.eig_banded."""
        n = self.bundle.space.n
        bw = 2 * n
        M = self.matrix(lam).todia()
        N = M.shape[0]
        ab = np.zeros((bw + 1, N))
        for k in range(bw + 1):
            ab[k, : N - k] = M.diagonal(-k)
        return ab

    @property
    def weight(self) -> np.ndarray:
        """Diagonal of I (x) Q, the lambda-derivative of S_lambda."""
        return self._Qdiag


def discretize_S(bundle: LinearizedBundle, Xi: Optional[float] = None, nodes: int = 2001) -> DiscreteS:
    """Assemble the lambda-independent part of S_lambda; ``.matrix(lam)`` adds lambda Q."""
    if nodes < 200:
        raise InputError("nodes must be at least 200")
    Xi = bd._default_T(bundle) if Xi is None else float(Xi)
    Q = np.diag(bundle.Q).astype(float)
    c = bundle.c
    xi = np.linspace(-Xi, Xi, nodes)[1:-1]
    N = xi.size
    h = 2 * Xi / (nodes - 1)
    # -d^2 with (-1, 16, -30, 16, -1)/(12 h^2), applied componentwise with weight Q;
    # the ghost value beyond each Dirichlet node is the odd reflection -u_1
    diag = np.full(N, 30.0)
    diag[[0, -1]] = 29.0
    lap = sps.diags([np.full(N - 2, 1.0), np.full(N - 1, -16.0), diag,
                     np.full(N - 1, -16.0), np.full(N - 2, 1.0)], [-2, -1, 0, 1, 2]) / (12 * h * h)
    S = sps.kron(lap, sps.diags(Q)) + sps.kron(sps.identity(N), sps.diags(0.25 * c * c * Q))
    Bblocks = sps.block_diag([bundle.B(x) for x in xi])
    S = (S - Bblocks).tocsr()
    S = 0.5 * (S + S.T)
    return DiscreteS(bundle, Xi, nodes, xi, S.tocsr(), np.tile(Q, N))


def _block_tridiagonal(ab: np.ndarray, m: int):
    """Diagonal and sub-diagonal m x m blocks of a symmetric matrix in lower banded storage.

    Requires bandwidth <= m; the matrix is padded with identity rows to a
    multiple of m (which adds positive eigenvalues only).
    """
    bw = ab.shape[0] - 1
    N = ab.shape[1]
    K = -(-N // m)
    pad = K * m - N
    full = np.zeros((bw + 1, K * m))
    full[:, :N] = ab
    full[0, N:] = 1.0
    A = np.zeros((K, m, m))
    Bs = np.zeros((K, m, m))
    base = np.arange(K) * m
    for p in range(m):
        for q in range(m):
            d = p - q
            if 0 <= d <= bw:
                A[:, p, q] = full[d, base + q]
                A[:, q, p] = A[:, p, q]
            # row p of block k against column q of block k-1
            d = p + m - q
            if d <= bw:
                Bs[1:, p, q] = full[d, base[:-1] + q]
    return A, Bs, pad


def negative_count(ds: DiscreteS, lam: float, eps: float = 0.0) -> int:
    """n_-(S_lambda + eps I) by Sylvester's law on a block LDL^T factorisation.

    Pivot blocks D_k = A_k - B_k D_{k-1}^{-1} B_k^T are congruent pieces of
    the matrix, so the negative eigenvalues of the D_k add up to n_-.  A
    nearly singular pivot falls back to a banded eigenvalue count.
    """
    ab = ds.banded(lam)
    ab[0] += eps
    m = ab.shape[0] - 1
    A, Bs, _ = _block_tridiagonal(ab, m)
    scale = max(1.0, float(np.max(np.abs(ab))))
    count = 0
    D = Dprev = A[0]
    for k in range(A.shape[0]):
        if k:
            D = A[k] - Bs[k] @ np.linalg.solve(Dprev, Bs[k].T)
        w = np.linalg.eigvalsh(0.5 * (D + D.T))
        if np.min(np.abs(w)) < 1e-11 * scale:
            ev = eigvals_banded(ab, lower=True, select="v", select_range=(-1e300, 0.0))
            return int(ev.size)
        count += int(np.sum(w < 0))
        Dprev = D
    return count


def _kernel_vectors(ds: DiscreteS, lam: float, k: int) -> np.ndarray:
    ab = ds.banded(lam)
    w, V = eig_banded(ab, lower=True, select="v", select_range=(-1.0, 1.0))
    order = np.argsort(np.abs(w))[:k]
    return V[:, order]


@dataclass
class SpectralFlowResult:
    crossings: List[Tuple[float, int, int]]   # (lambda, kernel_dim, signature)
    sf: int
    sf_inertia: int
    lam_lo: float
    grid: Dict[str, float]


def spectral_flow_S(bundle: LinearizedBundle, C: float, Xi: Optional[float] = None,
                    nodes: int = 2001, grid: int = 200, delta0: float = DELTA0,
                    eps: float = 1e-10, ds: Optional[DiscreteS] = None) -> SpectralFlowResult:
    """Sf{S_lambda; lambda in [0, C]} counted across the level -eps.

    With this convention a kernel at lambda = 0 does not count, and the
    flow equals n_-(S_0 + eps) - n_-(S_C + eps).  The discretisation moves
    the translation eigenvalue 0 by a tiny amount, so the flow is evaluated
    from lam_lo = delta0 (no crossings are expected in (0, delta0]; the
    Evans route checks this independently).  Crossings are located by
    bisection on the negative count; their sign is sign <Q phi, phi> on
    the kernel, the derivative of <S_lambda phi, phi>.
    """
    ds = ds or discretize_S(bundle, Xi, nodes)
    lo = float(delta0)
    lams = np.linspace(lo, C, grid)
    counts = [negative_count(ds, l, eps) for l in lams]
    crossings = []
    for i in range(len(lams) - 1):
        if counts[i] == counts[i + 1]:
            continue
        a, b = lams[i], lams[i + 1]
        ca = counts[i]
        while b - a > ROOT_XTOL * max(1.0, abs(b)):
            m = 0.5 * (a + b)
            if negative_count(ds, m, eps) == ca:
                a = m
            else:
                b = m
        lam0 = 0.5 * (a + b)
        k = abs(counts[i] - counts[i + 1])
        phi = _kernel_vectors(ds, lam0, k)
        G = phi.T @ (ds.weight[:, None] * phi)
        gev = np.linalg.eigvalsh(0.5 * (G + G.T))
        if np.any(np.abs(gev) < 1e-8):
            raise NonRegularCrossingError(f"degenerate spectral-flow crossing at lambda = {lam0:.10g}", lam0)
        sig = int(np.sum(gev > 0) - np.sum(gev < 0))
        crossings.append((float(lam0), int(k), sig))
    sf = sum(s for _, _, s in crossings)
    sf_inertia = counts[0] - counts[-1]
    if sf != sf_inertia:
        raise MaslovWaveError(f"spectral flow: crossing sum {sf} != inertia difference {sf_inertia}")
    return SpectralFlowResult(crossings, sf, sf_inertia, lo,
                              {"Xi": ds.Xi, "nodes": ds.nodes, "lambda_grid": grid, "eps": eps})


# ---------------------------------------------------------------------------
# realness criterion for the spectrum
# ---------------------------------------------------------------------------


@dataclass
class Lemma31Verdict:
    holds: bool
    branch: Optional[str]
    margins: Dict[str, float]
    symbolic: Optional[bool] = None


def _norm_sq_of_inverse_map(Sdef: sps.spmatrix, S3: sps.spmatrix) -> float:
    """Largest eigenvalue of S3 Sdef^{-2} S3^T for positive definite sparse Sdef."""
    lu = splu(Sdef.tocsc())
    m = S3.shape[0]

    def mv(x):
        y = lu.solve(np.asarray(S3.T @ x).ravel())
        y = lu.solve(y)
        return np.asarray(S3 @ y).ravel()

    if m == 0 or S3.nnz == 0:
        return 0.0
    op = LinearOperator((m, m), matvec=mv, dtype=float)
    if m <= 2:
        dense = np.column_stack([mv(e) for e in np.eye(m)])
        return float(np.linalg.eigvalsh(0.5 * (dense + dense.T))[-1])
    return float(eigsh(op, k=1, which="LA", v0=np.ones(m), return_eigenvectors=False, tol=1e-10)[0])


def _min_eig(M: sps.spmatrix) -> float:
    if M.shape[0] <= 2:
        return float(np.linalg.eigvalsh(M.toarray())[0])
    # fixed start vector keeps ARPACK deterministic
    v0 = np.ones(M.shape[0])
    return float(eigsh(M.tocsc(), k=1, sigma=-1e3, which="LM", v0=v0, return_eigenvectors=False)[0])


def check_lemma31(bundle: LinearizedBundle, lam: float = 0.0, Xi: Optional[float] = None,
                  nodes: int = 2001, ds: Optional[DiscreteS] = None) -> Lemma31Verdict:
    """Operator inequalities that force sigma(LL) in the closed right half plane to be real.

    With S = [[S1, S3], [S3^T, S2]] split along V+(Q) and V-(Q), either
    S1 > 0 and I > S3^T S1^{-2} S3, or -S2 > 0 and I > S3 (-S2)^{-2} S3^T.
    Both are tested on the discretisation by smallest and largest
    eigenvalues.  For FitzHugh--Nagumo the second branch reduces to d > gamma^-2.
    """
    ds = ds or discretize_S(bundle, Xi, nodes)
    S = ds.matrix(lam).tocsr()
    n, r = bundle.space.n, bundle.space.r
    N = ds.xi.size
    plus = np.array([i * n + j for i in range(N) for j in range(r)], int)
    minus = np.array([i * n + j for i in range(N) for j in range(r, n)], int)
    S1 = S[plus][:, plus]
    S2 = S[minus][:, minus]
    S3 = S[plus][:, minus]
    margins: Dict[str, float] = {}
    branch = None
    if minus.size:
        m2 = _min_eig(-S2)
        margins["min_eig_minus_S2"] = m2
        if m2 > 0:
            top = _norm_sq_of_inverse_map(-S2, S3) if plus.size else 0.0
            margins["branch2_gap"] = 1.0 - top
            if top < 1.0:
                branch = "minus_S2"
    if branch is None and plus.size:
        m1 = _min_eig(S1)
        margins["min_eig_S1"] = m1
        if m1 > 0:
            top = _norm_sq_of_inverse_map(S1, S3.T) if minus.size else 0.0
            margins["branch1_gap"] = 1.0 - top
            if top < 1.0:
                branch = "S1"
    symbolic = None
    prof = bundle.profile
    if prof is not None and prof.system is not None and prof.system.label == "fhn":
        p = prof.system.params
        symbolic = bool(p["d"] > p["gamma"] ** -2)
    return Lemma31Verdict(branch is not None, branch, margins, symbolic)


# ---------------------------------------------------------------------------
# theorem verification
# ---------------------------------------------------------------------------


@dataclass
class IndexReport:
    hypotheses: Dict[str, object]
    indices: Dict[str, Optional[int]]
    counts: Dict[str, int]
    identities: Dict[str, Optional[bool]]
    provenance: Dict[str, object]
    details: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def failed(self) -> List[str]:
        return [k for k, v in self.identities.items() if v is False]


def verify_theorems(*, hypotheses: Dict[str, object], maslov15: int, maslov14: Optional[int],
                    boundary: int, triple_LR_0: int, triple_LR_C: int, eig: EigCount,
                    sflow: SpectralFlowResult, provenance: Dict[str, object],
                    details: Optional[Dict[str, object]] = None) -> IndexReport:
    """Evaluate the index identities and inequalities on computed integers.

    The bounds use N_bar_plus, the count of real nonnegative eigenvalues,
    for the undefined symbol in the original statements.  Failures are
    report content, not exceptions; a check whose hypotheses fail is None.
    """
    H1 = bool(hypotheses.get("H1"))
    H2 = bool(hypotheses.get("H2"))
    H2p = bool(hypotheses.get("H2prime"))
    nbar = eig.N_bar_plus
    ids: Dict[str, Optional[bool]] = {
        "thm_main": (abs(maslov15 + triple_LR_0) <= nbar) if (H1 and H2) else None,
        "thm_central": (abs(maslov15) <= nbar) if H2p else None,
        "thm_fhn": None,
        "prop_16": None if maslov14 is None else (maslov14 == maslov15),
        "prop_29": (-sflow.sf == -maslov15 + boundary),
        "dual_count": (eig.N_plus == sflow.sf) if hypotheses.get("lemma31") else None,
    }
    if hypotheses.get("d_gt_gamma_inv2") is not None:
        ids["thm_fhn"] = (eig.N_plus == maslov15) if hypotheses.get("d_gt_gamma_inv2") else None
    return IndexReport(
        hypotheses=dict(hypotheses),
        indices={"maslov_def15": int(maslov15), "maslov_def14": maslov14, "boundary_lambda": int(boundary),
                 "triple_LR_0": int(triple_LR_0), "triple_LR_C": int(triple_LR_C)},
        counts={"N_plus": int(eig.N_plus), "N_bar_plus": int(nbar), "sf_S": int(sflow.sf)},
        identities=ids,
        provenance=dict(provenance),
        details=dict(details or {}),
    )


def end_hypotheses(bundle: LinearizedBundle) -> Dict[str, object]:
    """H1, H2 and H2' at both ends (all must hold at both)."""
    Q = bundle.Q
    out = {}
    for name, fn in (("H1", check_H1), ("H2", check_H2), ("H2prime", check_H2prime)):
        vm, vp = fn(bundle.B_minus, Q), fn(bundle.B_plus, Q)
        out[name] = bool(vm.holds and vp.holds)
        out[name + "_margin"] = float(min(vm.margin, vp.margin))
    return out
