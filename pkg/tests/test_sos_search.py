import random
from fractions import Fraction

import numpy as np
import pytest

from hppcheck.catalog import resolve_name, uniform
from hppcheck.certificate import verify
from hppcheck.polynomial import parse_polynomial
from hppcheck.rayleigh import rayleigh_diff_multiaffine
from hppcheck.sos_search import (GramProblemError, build_problem,
                                 certificate_from_gram, jacobi_eigh,
                                 ldlt_psd, rationalize_and_verify, search,
                                 search_certificate)


def P(text, m=None):
    return parse_polynomial(text, m)


def mono(b, m):
    exps = [0] * m
    for v in b:
        exps[v - 1] = 1
    return tuple(exps)


class TestBuildProblem:
    def test_u24_basis(self):
        target = P("y3*y3 + y3*y4 + y4*y4", 4)
        prob = build_problem(target)
        assert prob.basis == [mono((3,), 4), mono((4,), 4)]

    def test_f7m4_ten_monomials(self):
        Z = resolve_name("F7m4").basis_polynomial()
        target = rayleigh_diff_multiaffine(Z, 1, 2)
        prob = build_problem(target)
        assert len(prob.basis) == 10
        assert all(sum(b) == 2 for b in prob.basis)

    def test_negative_pure_square_rejected(self):
        with pytest.raises(GramProblemError):
            build_problem(P("-1*y3*y3", 3))

    def test_odd_degree_rejected(self):
        with pytest.raises(GramProblemError):
            build_problem(P("y1*y2*y3", 3))

    def test_high_variable_degree_rejected(self):
        with pytest.raises(GramProblemError):
            build_problem(P("y1*y1*y1*y2", 2))

    def test_inhomogeneous_rejected(self):
        with pytest.raises(GramProblemError):
            build_problem(P("y1*y1 + y2", 2))


class TestSearch:
    def test_u24_gram_matrix(self):
        prob = build_problem(P("y3*y3 + y3*y4 + y4*y4", 4))
        G = search(prob, seed=0)
        assert G is not None
        want = np.array([[1.0, 0.5], [0.5, 1.0]])
        assert np.allclose(G, want, atol=1e-6)

    def test_single_square_immediate(self):
        prob = build_problem(P("y3*y3", 3))
        G = search(prob)
        assert G is not None and np.allclose(G, [[1.0]])

    def test_indefinite_target_fails(self):
        # y3*y4 alone needs G = [[0, 1/2], [1/2, 0]], which is not PSD
        prob = build_problem(P("y3*y4", 4))
        assert search(prob, max_iterations=300) is None


class TestJacobi:
    def test_reconstruction_accuracy(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            n = int(rng.integers(1, 31))
            A = rng.normal(size=(n, n))
            A = (A + A.T) / 2
            vals, Q = jacobi_eigh(A)
            assert np.linalg.norm((Q * vals) @ Q.T - A) < 1e-10

    def test_matches_numpy_spectrum(self):
        rng = np.random.default_rng(3)
        A = rng.normal(size=(9, 9))
        A = (A + A.T) / 2
        vals, _ = jacobi_eigh(A)
        assert np.allclose(np.sort(vals), np.linalg.eigvalsh(A), atol=1e-10)


class TestLdlt:
    def test_rejects_indefinite(self):
        A = [[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]]
        assert ldlt_psd(A) is None
        A = [[Fraction(-1)]]
        assert ldlt_psd(A) is None

    def test_accepts_psd_with_zero_block(self):
        A = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(0)]]
        fact = ldlt_psd(A)
        assert fact is not None

    def test_factorization_reconstructs(self):
        rng = random.Random(31)
        for _ in range(25):
            n = rng.randint(1, 6)
            L = [[Fraction(rng.randint(-3, 3), rng.randint(1, 4))
                  if j < i else Fraction(i == j) for j in range(n)]
                 for i in range(n)]
            D = [Fraction(rng.randint(0, 5)) for _ in range(n)]
            A = [[sum(L[i][k] * D[k] * L[j][k] for k in range(n))
                  for j in range(n)] for i in range(n)]
            fact = ldlt_psd(A)
            assert fact is not None
            perm, L2, D2 = fact
            # P A P^T == L2 D2 L2^T exactly
            for i in range(n):
                for j in range(n):
                    lhs = A[perm[i]][perm[j]]
                    rhs = sum(L2[i][k] * D2[k] * L2[j][k] for k in range(n))
                    assert lhs == rhs

    def test_extraction_identity_on_random_psd(self):
        # exact LDL^T acceptance implies the weighted squares resum exactly
        rng = random.Random(77)
        for _ in range(10):
            m = 4
            prob = build_problem(P("y1*y1 + y2*y2 + y3*y3 + y4*y4"
                                   " + y1*y2 + y3*y4", 4))
            n = len(prob.basis)
            L = [[Fraction(rng.randint(-2, 2), rng.randint(1, 3))
                  if j < i else Fraction(i == j) for j in range(n)]
                 for i in range(n)]
            D = [Fraction(rng.randint(0, 4)) for _ in range(n)]
            G = [[sum(L[i][k] * D[k] * L[j][k] for k in range(n))
                  for j in range(n)] for i in range(n)]
            cert = certificate_from_gram(G, prob)
            if cert is None:
                continue     # expansion did not match this random target
            assert verify(cert, cert.expand()).passed


class TestRationalize:
    def test_u24_by_hand(self):
        prob = build_problem(P("y3*y3 + y3*y4 + y4*y4", 4))
        G = np.array([[1.0, 0.5], [0.5, 1.0]])
        cert = rationalize_and_verify(G, prob, 1 << 16)
        assert cert is not None
        assert cert.terms == (
            (Fraction(1), P("y3 + 1/2*y4", 4)),
            (Fraction(3, 4), P("y4", 4)),
        )

    def test_rank_one_exact(self):
        prob = build_problem(P("y3*y3", 3))
        cert = rationalize_and_verify(np.array([[1.0]]), prob, 16)
        assert cert is not None
        assert cert.terms == ((Fraction(1), P("y3", 3)),)

    def test_psd_loss_returns_none(self):
        # an affine-feasible but indefinite Gram matrix must be rejected
        prob = build_problem(P("y3*y4", 4))
        G = np.array([[0.0, 0.5], [0.5, 0.0]])
        assert rationalize_and_verify(G, prob, 16) is None


class TestEndToEnd:
    def test_u24_search_certificate(self):
        Z = uniform(2, 4).basis_polynomial()
        target = rayleigh_diff_multiaffine(Z, 1, 2)
        cert = search_certificate(target)
        assert cert is not None
        assert verify(cert, target).passed

    def test_certificate_never_unverified(self):
        # the search returns None rather than an unverifiable certificate
        assert search_certificate(P("y3*y4", 4), max_iterations=300) is None
        assert search_certificate(P("-1*y3*y3", 3)) is None
