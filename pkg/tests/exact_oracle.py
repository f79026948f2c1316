"""Exact rational reference implementation of the triple index.

Pure Python Fractions: Gaussian elimination for kernels and ranks, and the
number of positive eigenvalues of a rational symmetric matrix from the sign
changes of its characteristic polynomial (exact for real-rooted
polynomials).  Shares no code with the floating-point implementation.
"""

from fractions import Fraction
import random


def mat(rows):
    return [[Fraction(x) for x in row] for row in rows]


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def matmul(A, B):
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def hstack(*blocks):
    return [sum((list(b[i]) for b in blocks), []) for i in range(len(blocks[0]))]


def rref(A):
    A = [list(r) for r in A]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        pv = A[r][c]
        A[r] = [x / pv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def rank(A):
    return len(rref(A)[1]) if A and A[0] else 0


def kernel(A):
    """Basis of ker A as a list of column vectors."""
    cols = len(A[0])
    R, piv = rref(A)
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def independent_columns(vectors):
    """Maximal independent subset of a list of vectors."""
    if not vectors:
        return []
    M = transpose(vectors)
    _, piv = rref(M)
    return [vectors[p] for p in piv]


def solve_any(A, b):
    """Some solution x of A x = b (raises if inconsistent)."""
    aug = [row + [bi] for row, bi in zip(A, b)]
    R, piv = rref(aug)
    ncols = len(A[0])
    if ncols in piv:
        raise ValueError("inconsistent system")
    x = [Fraction(0)] * ncols
    for i, p in enumerate(piv):
        x[p] = R[i][-1]
    return x


def char_poly(A):
    """Coefficients of det(t I - A), leading first (Faddeev--LeVerrier)."""
    k = len(A)
    coeffs = [Fraction(1)]
    M = [[Fraction(0)] * k for _ in range(k)]
    I = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    c = Fraction(1)
    for m in range(1, k + 1):
        AM = matmul(A, M)
        M = [[AM[i][j] + c * I[i][j] for j in range(k)] for i in range(k)]
        AM = matmul(A, M)
        c = -sum(AM[i][i] for i in range(k)) / m
        coeffs.append(c)
    return coeffs


def positive_roots(coeffs):
    """Positive roots (with multiplicity) of a real-rooted polynomial: Descartes."""
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    signs = [c > 0 for c in coeffs if c != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def J_matrix(n, r):
    Q = [Fraction(1)] * r + [Fraction(-1)] * (n - r)
    J = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        J[i][n + i] = -Q[i]
        J[n + i][i] = Q[i]
    return J


def omega(J, x, y):
    Jx = [sum(a * b for a, b in zip(row, x)) for row in J]
    return sum(a * b for a, b in zip(Jx, y))


def cols(Z):
    return [list(c) for c in zip(*Z)]


def intersection_dim(Z1, Z2):
    return len(Z1[0]) + len(Z2[0]) - rank(hstack(Z1, Z2))


def triple_index(n, r, alpha, beta, kappa):
    """iota(alpha, beta, kappa) for 2n x n rational frames."""
    J = J_matrix(n, r)
    dim = 2 * n
    negB = [[-x for x in row] for row in beta]
    negK = [[-x for x in row] for row in kappa]
    ker = kernel(hstack(alpha, negB, negK))
    xs = []
    for v in ker:
        a = v[:n]
        xs.append([sum(alpha[i][j] * a[j] for j in range(n)) for i in range(dim)])
    xs = [x for x in xs if any(c != 0 for c in x)]
    xs = independent_columns(xs)
    ys, zs = [], []
    BK = hstack(beta, kappa)
    for x in xs:
        coef = solve_any(BK, x)
        y = [sum(beta[i][j] * coef[j] for j in range(n)) for i in range(dim)]
        z = [x[i] - y[i] for i in range(dim)]
        ys.append(y)
        zs.append(z)
    k = len(xs)
    G = [[omega(J, ys[i], zs[j]) for j in range(k)] for i in range(k)]
    m_plus = positive_roots(char_poly(G)) if k else 0
    return m_plus + intersection_dim(alpha, kappa) - triple_intersection_dim(alpha, beta, kappa)


def triple_intersection_dim(alpha, beta, kappa):
    """dim(alpha ∩ beta ∩ kappa) for frames of full column rank."""
    dim, n = len(alpha), len(alpha[0])
    zero = [[Fraction(0)] * n for _ in range(dim)]
    negB = [[-x for x in row] for row in beta]
    negK = [[-x for x in row] for row in kappa]
    return len(kernel(hstack(alpha, negB, zero) + hstack(alpha, zero, negK)))


# -- random rational Lagrangians -------------------------------------------


def _sym(rng, n, vals=(-1, 0, 0, 1, 2)):
    S = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            S[i][j] = S[j][i] = Fraction(rng.choice(vals))
    return S


def _shear(n, r, S, upper):
    """Symplectic shear [[I, QS],[0, I]] or [[I, 0],[QS, I]]."""
    Q = [1] * r + [-1] * (n - r)
    M = [[Fraction(int(i == j)) for j in range(2 * n)] for i in range(2 * n)]
    for i in range(n):
        for j in range(n):
            if upper:
                M[i][n + j] = Q[i] * S[i][j]
            else:
                M[n + i][j] = Q[i] * S[i][j]
    return M


def random_rational_lagrangian(rng: random.Random, n, r, shears=2):
    """Image of a coordinate Lagrangian under a product of rational shears.

    Small integer entries make nontrivial intersections frequent.
    """
    if rng.random() < 0.5:
        Z = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)] + [[Fraction(0)] * n for _ in range(n)]
    else:
        Z = [[Fraction(0)] * n for _ in range(n)] + [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for _ in range(rng.randint(0, shears)):
        Z = matmul(_shear(n, r, _sym(rng, n), rng.random() < 0.5), Z)
    return Z


def to_float(Z):
    import numpy as np

    return np.array([[float(x) for x in row] for row in Z])
