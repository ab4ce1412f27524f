"""Numerical search for sum-of-squares certificates, exactly re-verified.

Pipeline: build a Gram-matrix problem over a multiaffine monomial basis,
run alternating projections between the coefficient-matching affine
subspace and the PSD cone (eigendecompositions via cyclic Jacobi rotations
written here, not a library call), then round the float Gram matrix to
rationals, repair the affine constraints exactly, test positive
semidefiniteness with an exact LDL^T factorization under symmetric
pivoting, and read certificate terms off the factors.  A certificate is
only ever emitted after it verifies exactly against the target, so the
float stage cannot leak into a proof.

Failure at any stage returns None; failure to find a certificate says
nothing about nonexistence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from hppcheck.certificate import SosCertificate, verify
from hppcheck.polynomial import Exponents, Polynomial


class GramProblemError(ValueError):
    """Raised when the target cannot have a Gram decomposition at all."""


@dataclass
class GramProblem:
    target: Polynomial
    basis: list[Exponents]                 # degree-d multiaffine exponent tuples
    groups: list[tuple[list[tuple[int, int]], Fraction]]
    # each group: (ordered index pairs of the Gram matrix, target coefficient)

    @property
    def size(self) -> int:
        return len(self.basis)

    def basis_polynomials(self) -> list[Polynomial]:
        return [Polynomial(self.target.m, {e: Fraction(1)}) for e in self.basis]


def build_problem(target: Polynomial) -> GramProblem:
    """Set up target == v^T G v over the multiaffine monomial basis.

    The basis is every multiaffine monomial of half the target degree over
    the target's support variables.  Requires the target homogeneous of
    even degree with per-variable degree at most two; a negative
    pure-square coefficient is immediately infeasible since it pins a
    diagonal entry of any valid Gram matrix.
    """
    if target.is_zero():
        raise GramProblemError("zero target needs no certificate")
    if not target.is_homogeneous():
        raise GramProblemError("target must be homogeneous")
    deg = target.total_degree()
    if deg % 2:
        raise GramProblemError(f"target degree {deg} is odd")
    d = deg // 2
    for exps, coeff in target.terms.items():
        if any(e > 2 for e in exps):
            raise GramProblemError("target has a variable of degree > 2")
        if all(e % 2 == 0 for e in exps) and coeff < 0:
            raise GramProblemError(
                "negative pure-square coefficient: any Gram diagonal entry "
                "for it would be negative")
    support = sorted(target.support_variables())
    m = target.m
    basis: list[Exponents] = []
    for subset in combinations(support, d):
        exps = [0] * m
        for v in subset:
            exps[v - 1] = 1
        basis.append(tuple(exps))
    if not basis:
        raise GramProblemError("empty monomial basis")

    by_product: dict[Exponents, list[tuple[int, int]]] = {}
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            prod = tuple(a + b for a, b in zip(bi, bj))
            by_product.setdefault(prod, []).append((i, j))
    # every target monomial must be a product of two basis monomials
    for exps in target.terms:
        if exps not in by_product:
            raise GramProblemError(
                f"target monomial {exps} is not a product of basis monomials")
    groups = [(pairs, target.coefficient(prod))
              for prod, pairs in sorted(by_product.items())]
    return GramProblem(target=target, basis=basis, groups=groups)


# -- cyclic Jacobi eigendecomposition ------------------------------------------


def jacobi_eigh(A: np.ndarray, tol: float = 1e-13,
                max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns (eigenvalues, Q) with A == Q @ diag(eigenvalues) @ Q.T up to
    rotation roundoff.
    """
    A = np.array(A, dtype=float)
    n = A.shape[0]
    Q = np.eye(n)
    if n == 1:
        return A.diagonal().copy(), Q
    scale = max(1.0, float(np.abs(np.diagonal(A)).max()))
    for _ in range(max_sweeps):
        # direct off-diagonal norm; the difference-of-sums form cancels
        # catastrophically once the matrix is nearly diagonal
        off = float(np.sqrt(((A - np.diag(np.diagonal(A))) ** 2).sum()))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-300:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                if tau == 0.0:
                    t = 1.0
                elif abs(tau) > 1e100:
                    t = 1.0 / (2.0 * tau)
                else:
                    t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # A <- G^T A G with the rotation in the (p, q) plane
                col_p = A[:, p].copy()
                col_q = A[:, q].copy()
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                row_p = A[p, :].copy()
                row_q = A[q, :].copy()
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q
                A[p, q] = 0.0
                A[q, p] = 0.0
                qcol_p = Q[:, p].copy()
                qcol_q = Q[:, q].copy()
                Q[:, p] = c * qcol_p - s * qcol_q
                Q[:, q] = s * qcol_p + c * qcol_q
    return np.diagonal(A).copy(), Q


def _project_psd(G: np.ndarray) -> np.ndarray:
    vals, Q = jacobi_eigh(G)
    return _reassemble_clipped(vals, Q)


def _reassemble_clipped(vals: np.ndarray, Q: np.ndarray) -> np.ndarray:
    clipped = np.maximum(vals, 0.0)
    out = (Q * clipped) @ Q.T
    return (out + out.T) / 2.0


def _project_affine(G: np.ndarray, problem: GramProblem) -> np.ndarray:
    out = G.copy()
    for pairs, rhs in problem.groups:
        ii = [i for i, _ in pairs]
        jj = [j for _, j in pairs]
        s = out[ii, jj].sum()
        out[ii, jj] += (float(rhs) - s) / len(pairs)
    return out


def search(problem: GramProblem, tolerance: float = 1e-9,
           max_iterations: int = 50_000, seed: int = 0) -> np.ndarray | None:
    """Alternating projections onto {A(G) = coeffs} and the PSD cone.

    Returns an affine-feasible G whose minimum eigenvalue exceeds
    -tolerance, or None.  Start point and stall jitter are seeded, so runs
    are reproducible.
    """
    n = problem.size
    rng = np.random.default_rng([seed, n])
    G = _project_affine(np.zeros((n, n)), problem)
    best_eig = -np.inf
    stall = 0
    for _ in range(max_iterations):
        # G is affine-feasible here; one decomposition serves both the
        # convergence test and the PSD projection
        vals, Q = jacobi_eigh(G)
        min_eig = float(vals.min())
        if min_eig > -tolerance:
            return G
        if min_eig > best_eig + 1e-14:
            best_eig = min_eig
            stall = 0
        else:
            stall += 1
            if stall >= 200:
                jitter = rng.normal(scale=max(-min_eig, 1e-6), size=(n, n))
                jitter = (jitter + jitter.T) / 2.0
                G = _project_affine(G + jitter, problem)
                best_eig = -np.inf
                stall = 0
                continue
        P = _reassemble_clipped(vals, Q)
        G = _project_affine(P, problem)
    return None


# -- exact rational LDL^T -------------------------------------------------------


def ldlt_psd(A: list[list[Fraction]]) -> tuple[list[int], list[list[Fraction]], list[Fraction]] | None:
    """P A P^T = L D L^T with symmetric (greatest-diagonal) pivoting.

    Returns (perm, L, D) when A is positive semidefinite, else None.  perm
    lists original indices in pivot order; L is unit lower triangular.
    """
    n = len(A)
    A = [list(row) for row in A]
    perm = list(range(n))
    L = [[Fraction(1) if i == j else Fraction(0) for j in range(n)]
         for i in range(n)]
    D = [Fraction(0)] * n
    for k in range(n):
        p = max(range(k, n), key=lambda i: A[i][i])
        if A[p][p] < 0:
            return None
        if A[p][p] == 0:
            # PSD forces the whole trailing block to vanish
            for i in range(k, n):
                for j in range(k, n):
                    if A[i][j] != 0:
                        return None
            break
        if p != k:
            A[k], A[p] = A[p], A[k]
            for row in A:
                row[k], row[p] = row[p], row[k]
            perm[k], perm[p] = perm[p], perm[k]
            for j in range(k):
                L[k][j], L[p][j] = L[p][j], L[k][j]
        d = A[k][k]
        D[k] = d
        for i in range(k + 1, n):
            L[i][k] = A[i][k] / d
        for i in range(k + 1, n):
            aik = A[i][k]
            if aik == 0:
                continue
            for j in range(k + 1, n):
                A[i][j] -= aik * A[k][j] / d
        for i in range(k + 1, n):
            A[i][k] = Fraction(0)
            A[k][i] = Fraction(0)
    return perm, L, D


def certificate_from_gram(Grat: list[list[Fraction]],
                          problem: GramProblem) -> SosCertificate | None:
    """Exact PSD test + certificate extraction from a rational Gram matrix."""
    fact = ldlt_psd(Grat)
    if fact is None:
        return None
    perm, L, D = fact
    monos = problem.basis_polynomials()
    terms = []
    n = problem.size
    for k in range(n):
        if D[k] == 0:
            continue
        q = Polynomial.zero(problem.target.m)
        for a in range(n):
            if L[a][k] != 0:
                q = q + monos[perm[a]].scalar_mul(L[a][k])
        terms.append((D[k], q))
    if not terms:
        return None
    cert = SosCertificate(terms=tuple(terms), target=problem.target)
    if not verify(cert, problem.target):
        return None
    return cert


def rationalize_and_verify(G: np.ndarray, problem: GramProblem,
                           denominator_bound: int) -> SosCertificate | None:
    """Round, repair the affine constraints exactly, test PSD, extract.

    Basis monomials whose pure-square target coefficient is zero are pinned
    to zero rows first (any PSD solution has them zero), which keeps the
    exact factorization away from forced boundary noise.
    """
    n = problem.size
    zero_rows = set()
    for i, exps in enumerate(problem.basis):
        square = tuple(2 * e for e in exps)
        if problem.target.coefficient(square) == 0:
            zero_rows.add(i)
    Grat: list[list[Fraction]] = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            if i in zero_rows or j in zero_rows:
                continue
            x = Fraction(float(G[i, j])).limit_denominator(denominator_bound)
            Grat[i][j] = x
            Grat[j][i] = x
    # exact affine repair, distributing the residual inside each group
    for pairs, rhs in problem.groups:
        free = [(i, j) for i, j in pairs
                if i not in zero_rows and j not in zero_rows]
        s = sum(Grat[i][j] for i, j in free) if free else Fraction(0)
        if not free:
            if rhs != 0:
                return None
            continue
        r = (rhs - s) / len(free)
        if r != 0:
            for i, j in free:
                Grat[i][j] += r
    return certificate_from_gram(Grat, problem)


# -- exact facial reduction via target zeros ------------------------------------
#
# When the target touches zero on real points, every valid Gram matrix is
# singular there: target(x) = v(x)^T G v(x) = 0 with G PSD forces
# G v(x) = 0, where v(x) evaluates the basis monomials.  Small integer
# zeros therefore hand us exact kernel constraints; restricting to the
# kernel's orthogonal complement turns a boundary-touching problem into
# one with relative interior, which rounds robustly.


def _integer_zero_kernel(problem: GramProblem,
                         box: int = 2, cap: int = 400) -> list[list[Fraction]]:
    """Exact kernel vectors from integer zeros of the target."""
    target = problem.target
    support = sorted(target.support_variables())
    if len(support) > 7:
        return []
    t_exps = np.array(list(target.terms.keys()), dtype=np.int64)
    t_coef = np.array([int(c) if c.denominator == 1 else 0
                       for c in target.terms.values()], dtype=object)
    if any(c.denominator != 1 for c in target.terms.values()):
        # rational coefficients: clear denominators first
        from math import lcm
        den = 1
        for c in target.terms.values():
            den = lcm(den, c.denominator)
        t_coef = np.array([int(c * den) for c in target.terms.values()],
                          dtype=object)
    grid = np.arange(-box, box + 1)
    pts = np.array(np.meshgrid(*([grid] * len(support)),
                               indexing="ij")).reshape(len(support), -1).T
    full = np.zeros((pts.shape[0], target.m), dtype=np.int64)
    for col, v in enumerate(support):
        full[:, v - 1] = pts[:, col]
    vals = np.zeros(pts.shape[0], dtype=object)
    for exps, coeff in zip(t_exps, t_coef):
        term = np.full(pts.shape[0], int(coeff), dtype=object)
        for j in range(target.m):
            if exps[j]:
                term = term * (full[:, j].astype(object) ** int(exps[j]))
        vals = vals + term
    zero_idx = [i for i in range(pts.shape[0])
                if vals[i] == 0 and full[i].any()]
    vectors: list[list[Fraction]] = []
    seen: set[tuple] = set()
    for i in zero_idx[: cap]:
        x = full[i]
        vec = []
        for exps in problem.basis:
            v = 1
            for j in range(target.m):
                if exps[j]:
                    v *= int(x[j]) ** int(exps[j])
            vec.append(Fraction(v))
        if not any(vec):
            continue
        key = tuple(vec)
        if key in seen:
            continue
        seen.add(key)
        vectors.append(vec)
    return vectors


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    mat = [list(r) for r in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if mat else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return mat[:r], pivots


def _nullspace(rows: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    """Rational basis of {x : rows @ x = 0} in dimension n."""
    if not rows:
        return [[Fraction(i == j) for i in range(n)] for j in range(n)]
    red, pivots = _rref(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            vec[pc] = -row[fc]
        basis.append(vec)
    return basis


def _solve_affine_projection(C: list[list[Fraction]], b: list[Fraction],
                             x0: list[Fraction]) -> list[Fraction] | None:
    """Exact Euclidean projection of x0 onto {x : C x = b}.

    Reduces to independent rows, then x = x0 - C'^T y with
    (C' C'^T) y = C' x0 - b'.  Returns None when the system is
    inconsistent.
    """
    aug = [row + [rhs] for row, rhs in zip(C, b)]
    red, pivots = _rref(aug)
    ncols = len(C[0])
    for row, pc in zip(red, pivots):
        if pc == ncols:
            return None      # 0 = 1 row: inconsistent
    C2 = [row[:-1] for row in red]
    b2 = [row[-1] for row in red]
    k = len(C2)
    if k == 0:
        return list(x0)
    # gram = C2 C2^T (independent rows => invertible)
    gram = [[sum(C2[i][t] * C2[j][t] for t in range(ncols))
             for j in range(k)] for i in range(k)]
    rhs = [sum(C2[i][t] * x0[t] for t in range(ncols)) - b2[i]
           for i in range(k)]
    aug2 = [gram[i] + [rhs[i]] for i in range(k)]
    red2, piv2 = _rref(aug2)
    if len(piv2) != k or any(p >= k for p in piv2):
        return None
    y = [Fraction(0)] * k
    for row, pc in zip(red2, piv2):
        y[pc] = row[-1]
    return [x0[t] - sum(C2[i][t] * y[i] for i in range(k))
            for t in range(ncols)]


def _rationalize_on_face(G: np.ndarray, problem: GramProblem,
                         kernel: list[list[Fraction]],
                         denominator_bound: int) -> SosCertificate | None:
    """Exact rationalization restricted to the kernel's orthocomplement.

    Writes G = B H B^T with B a rational nullspace basis of the kernel
    constraints, rounds the induced H, projects it exactly onto the
    (consistent by construction) coefficient constraints, and factors.
    """
    n = problem.size
    B = _nullspace(kernel, n)        # columns (as vectors) of the face basis
    r = len(B)
    if r == 0:
        return None
    # rounded float H via least squares: H ~= (B^T B)^{-1} B^T G B (B^T B)^{-1}
    Bf = np.array([[float(x) for x in col] for col in B], dtype=float).T  # n x r
    M = Bf.T @ Bf
    try:
        Minv = np.linalg.inv(M)
    except np.linalg.LinAlgError:
        return None
    Hf = Minv @ (Bf.T @ np.asarray(G, dtype=float) @ Bf) @ Minv
    Hf = (Hf + Hf.T) / 2.0
    # unknowns: upper triangle of H
    idx = [(p, q) for p in range(r) for q in range(p, r)]
    x0 = [Fraction(float(Hf[p, q])).limit_denominator(denominator_bound)
          for p, q in idx]
    # constraints: sum over group pairs of (B H B^T)[i][j] = rhs
    C: list[list[Fraction]] = []
    b: list[Fraction] = []
    for pairs, rhs in problem.groups:
        row = [Fraction(0)] * len(idx)
        for i, j in pairs:
            for t, (p, q) in enumerate(idx):
                coeff = B[p][i] * B[q][j]
                if p != q:
                    coeff += B[q][i] * B[p][j]
                row[t] += coeff
        C.append(row)
        b.append(rhs)
    sol = _solve_affine_projection(C, b, x0)
    if sol is None:
        return None
    H = [[Fraction(0)] * r for _ in range(r)]
    for t, (p, q) in enumerate(idx):
        H[p][q] = sol[t]
        H[q][p] = sol[t]
    fact = ldlt_psd(H)
    if fact is None:
        return None
    perm, L, D = fact
    monos = problem.basis_polynomials()
    w_polys = []
    for a in range(r):
        poly = Polynomial.zero(problem.target.m)
        for i in range(n):
            if B[a][i] != 0:
                poly = poly + monos[i].scalar_mul(B[a][i])
        w_polys.append(poly)
    terms = []
    for k in range(r):
        if D[k] == 0:
            continue
        q = Polynomial.zero(problem.target.m)
        for a in range(r):
            if L[a][k] != 0:
                q = q + w_polys[perm[a]].scalar_mul(L[a][k])
        terms.append((D[k], q))
    if not terms:
        return None
    cert = SosCertificate(terms=tuple(terms), target=problem.target)
    if not verify(cert, problem.target):
        return None
    return cert


def _reduced_problem(problem: GramProblem) -> GramProblem | None:
    """Drop basis monomials whose pure-square target coefficient is zero."""
    keep = [i for i, e in enumerate(problem.basis)
            if problem.target.coefficient(tuple(2 * x for x in e)) != 0]
    if len(keep) == len(problem.basis):
        return problem
    remap = {old: new for new, old in enumerate(keep)}
    basis = [problem.basis[i] for i in keep]
    groups = []
    for pairs, rhs in problem.groups:
        inside = [(remap[i], remap[j]) for i, j in pairs
                  if i in remap and j in remap]
        if not inside:
            if rhs != 0:
                return None
            continue
        groups.append((inside, rhs))
    if not basis:
        return None
    return GramProblem(target=problem.target, basis=basis, groups=groups)


def search_certificate(target: Polynomial, tolerance: float = 1e-9,
                       max_iterations: int = 50_000,
                       denominator_bound: int = 1 << 16,
                       denominator_cap: int = 1 << 32,
                       seed: int = 0) -> SosCertificate | None:
    """End-to-end search; returns an exactly verified certificate or None.

    Runs the float search on the pure-square-reduced problem, tries the
    direct round-and-repair path at doubling denominator bounds, and falls
    back to the exact zero-kernel face restriction for boundary targets.
    """
    try:
        problem = build_problem(target)
    except GramProblemError:
        return None
    reduced = _reduced_problem(problem)
    if reduced is None:
        return None
    G = search(reduced, tolerance=tolerance,
               max_iterations=min(max_iterations, 4000), seed=seed)
    loose = None
    if G is None:
        # keep a best-effort iterate for the kernel fallback; the exact
        # face projection only needs a rough starting point
        loose = search(reduced, tolerance=5e-4,
                       max_iterations=max_iterations, seed=seed)
        if loose is None:
            return None
    cand = G if G is not None else loose
    bound = denominator_bound
    while bound <= denominator_cap:
        cert = rationalize_and_verify(cand, reduced, bound)
        if cert is not None:
            return cert
        bound *= 4
    kernel = _integer_zero_kernel(reduced)
    if kernel:
        bound = denominator_bound
        while bound <= denominator_cap:
            cert = _rationalize_on_face(cand, reduced, kernel, bound)
            if cert is not None:
                return cert
            bound *= 4
    return None
