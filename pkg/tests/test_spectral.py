"""Truncated Jacobi operators: spectra, quadrature rules, truncation policy."""
from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhaar import (
    AWParams,
    ConvergenceError,
    JacobiCoeffs,
    QContext,
    TruncationPolicyError,
    aw_integrate,
    aw_measure,
    check_truncation,
    min_truncation,
    orthonormal_polys,
    spectral_data,
)
from qhaar.qsu2rep import SphericalParams, build_rep, element


def cocentral_coeffs(ctx: QContext) -> JacobiCoeffs:
    # halved creation ladder: d_m = 0, (m, m+1) entry sqrt(1 - q^{2m+2}) / 2
    q = ctx.q
    return JacobiCoeffs(
        diag=lambda m: 0.0,
        offdiag=lambda m: 0.5 * math.sqrt(1.0 - q ** (2 * m + 2)),
    )


class TestTruncate:
    def test_one_by_one(self) -> None:
        coeffs = JacobiCoeffs(diag=lambda m: 3.25, offdiag=lambda m: 1.0)
        m = coeffs.dense(1)
        assert m.shape == (1, 1)
        assert m[0, 0] == 3.25

    def test_two_by_two_cocentral(self, ctx: QContext) -> None:
        m = cocentral_coeffs(ctx).dense(2)
        off = 0.5 * math.sqrt(1 - ctx.q**2)
        assert np.allclose(m, [[0.0, off], [off, 0.0]], atol=1e-15)
        assert m[0, 1] == pytest.approx(0.4330127018922193, abs=1e-15)

    def test_chebyshev_three_nodes(self) -> None:
        # constant offdiag 1/2 is the Chebyshev-U operator; the 3x3
        # truncation has eigenvalues {-1/sqrt2, 0, 1/sqrt2}
        coeffs = JacobiCoeffs(diag=lambda m: 0.0, offdiag=lambda m: 0.5)
        sd = spectral_data(coeffs, 3)
        assert np.allclose(sd.nodes, [-1 / math.sqrt(2), 0.0, 1 / math.sqrt(2)], atol=1e-14)

    def test_arrays_match_dense(self, ctx: QContext) -> None:
        coeffs = cocentral_coeffs(ctx)
        diag, off = coeffs.arrays(6)
        m = coeffs.dense(6)
        assert np.allclose(np.diag(m), diag)
        assert np.allclose(np.diag(m, 1), off)

    def test_zero_offdiagonal_rejected(self) -> None:
        from qhaar import DomainError

        coeffs = JacobiCoeffs(diag=lambda m: 0.0, offdiag=lambda m: float(m))
        with pytest.raises(DomainError):
            coeffs.arrays(3)


class TestSpectralData:
    def test_two_by_two_weights(self, ctx: QContext) -> None:
        sd = spectral_data(cocentral_coeffs(ctx), 2)
        assert np.allclose(sd.weights, [0.5, 0.5], atol=1e-14)

    def test_weight_normalization_and_mean(self) -> None:
        coeffs = JacobiCoeffs(diag=lambda m: 0.3 * 0.7**m, offdiag=lambda m: 0.4)
        sd = spectral_data(coeffs, 12)
        assert sd.weights.sum() == pytest.approx(1.0, abs=1e-13)
        assert (sd.weights * sd.nodes).sum() == pytest.approx(coeffs.diag(0), abs=1e-13)

    def test_weights_nonnegative_nodes_increasing(self, ctx: QContext) -> None:
        sd = spectral_data(cocentral_coeffs(ctx), 40)
        assert np.all(sd.weights >= -1e-15)
        assert np.all(np.diff(sd.nodes) > 0)

    def test_vector_and_recurrence_weights_agree(self, ctx: QContext) -> None:
        coeffs = cocentral_coeffs(ctx)
        a = spectral_data(coeffs, 25)
        b = spectral_data(coeffs, 25, full_vectors=True)
        assert np.allclose(a.weights, b.weights, atol=1e-12)
        assert b.vectors is not None and a.vectors is None

    def test_cocentral_moments_against_quadrature_measure(self, ctx: QContext, ctx2: QContext) -> None:
        # low moments of the size-80 spectral measure reproduce the continuum
        # weight with all four parameters zero
        sd = spectral_data(cocentral_coeffs(ctx), 80)
        spec = aw_measure(AWParams(0.0, 0.0, 0.0, 0.0, ctx2))
        for m in range(5):
            got = float((sd.weights * sd.nodes**m).sum())
            want = aw_integrate(spec, lambda x: x**m)
            assert got == pytest.approx(want, abs=1e-8)

    def test_even_moments_closed_values(self, ctx2: QContext) -> None:
        spec = aw_measure(AWParams(0.0, 0.0, 0.0, 0.0, ctx2))
        assert aw_integrate(spec, lambda x: x * x) == pytest.approx(3 / 16, abs=1e-13)
        assert aw_integrate(spec, lambda x: x**4) == pytest.approx(81 / 1024, abs=1e-13)

    def test_spectral_theorem_functional_calculus(self, ctx: QContext) -> None:
        # <f(T) e0, e0> = sum_j w_j f(x_j) for analytic f
        coeffs = cocentral_coeffs(ctx)
        size = 30
        m = coeffs.dense(size)
        sd = spectral_data(coeffs, size)
        vals, vecs = np.linalg.eigh(m)
        e0 = np.zeros(size)
        e0[0] = 1.0
        for f in (np.exp, np.sin, lambda x: 1.0 / (2.0 + x)):
            lhs = vecs @ (f(vals) * (vecs.T @ e0))
            assert lhs[0] == pytest.approx(float((sd.weights * f(sd.nodes)).sum()), abs=1e-11)

    def test_eigenvalue_interlacing(self, ctx: QContext) -> None:
        coeffs = cocentral_coeffs(ctx)
        for size in (5, 11):
            lo = spectral_data(coeffs, size).nodes
            hi = spectral_data(coeffs, size + 1).nodes
            assert np.all(hi[:-1] < lo + 1e-14)
            assert np.all(lo < hi[1:] + 1e-14)

    @given(size=st.integers(2, 18), scale=st.floats(0.1, 2.0))
    @settings(max_examples=25, deadline=None)
    def test_interlacing_property(self, size: int, scale: float) -> None:
        coeffs = JacobiCoeffs(
            diag=lambda m: 0.2 * math.sin(1.7 * m),
            offdiag=lambda m: scale / (m + 1.0),
        )
        lo = spectral_data(coeffs, size - 1).nodes
        hi = spectral_data(coeffs, size).nodes
        assert np.all(hi[:-1] <= lo + 1e-12)
        assert np.all(lo <= hi[1:] + 1e-12)

    def test_extreme_eigenvalues_of_rep_element(self, ctx: QContext) -> None:
        # spectrum of the size-200 rho_{tau,inf} truncation approaches both
        # geometric ladders; check the six extreme nodes
        tau = 0.4
        q = ctx.q
        rep = build_rep(ctx, 0.0, 200)
        vals = np.linalg.eigvalsh(element(rep, "rho_tau_inf", SphericalParams(tau=tau)))
        assert np.allclose(vals[:3], [-1.0, -(q**2), -(q**4)], atol=1e-6)
        assert np.allclose(
            vals[-3:], [q ** (2 * tau + 4), q ** (2 * tau + 2), q ** (2 * tau)], atol=1e-6
        )


class TestOrthonormalPolys:
    def test_degree_zero_and_one(self) -> None:
        coeffs = JacobiCoeffs(diag=lambda m: 0.3 + 0.1 * m, offdiag=lambda m: 0.5 + 0.1 * m)
        x = np.array([0.2, -0.4, 1.1])
        vals = orthonormal_polys(coeffs, 3, x)
        assert np.allclose(vals[0], 1.0)
        assert np.allclose(vals[1], (x - coeffs.diag(0)) / coeffs.offdiag(0))

    def test_quadrature_exactness(self, ctx: QContext) -> None:
        # Gauss rule from the size-60 truncation integrates p_n p_m exactly
        coeffs = cocentral_coeffs(ctx)
        sd = spectral_data(coeffs, 60)
        vals = orthonormal_polys(coeffs, 30, sd.nodes)
        gram = (vals * sd.weights) @ vals.T
        assert np.max(np.abs(gram - np.eye(31))) < 1e-9

    def test_three_term_recurrence_residual(self, ctx: QContext) -> None:
        coeffs = cocentral_coeffs(ctx)
        x = np.linspace(-0.9, 0.9, 7)
        vals = orthonormal_polys(coeffs, 10, x)
        for m in range(1, 10):
            resid = (
                x * vals[m]
                - coeffs.offdiag(m) * vals[m + 1]
                - coeffs.diag(m) * vals[m]
                - coeffs.offdiag(m - 1) * vals[m - 1]
            )
            assert np.max(np.abs(resid)) < 1e-12


class TestTruncationPolicy:
    def test_formula(self) -> None:
        for q, degree, tol in ((0.5, 6, 1e-7), (0.3, 4, 1e-9), (0.8, 6, 1e-7)):
            got = min_truncation(degree, tol, q)
            want = degree + math.ceil(math.log(tol) / (2 * math.log(q)))
            assert got == want

    def test_frozen_examples(self) -> None:
        assert min_truncation(6, 1e-7, 0.99) == 808
        assert min_truncation(4, 1e-9, 0.99) == 1035

    def test_check_passes_at_minimum(self) -> None:
        needed = min_truncation(6, 1e-7, 0.5)
        check_truncation(needed, 6, 1e-7, 0.5)

    def test_check_raises_below_minimum(self) -> None:
        needed = min_truncation(6, 1e-7, 0.5)
        with pytest.raises(TruncationPolicyError, match="policy minimum"):
            check_truncation(needed - 1, 6, 1e-7, 0.5)

    def test_policy_error_is_convergence_error(self) -> None:
        assert issubclass(TruncationPolicyError, ConvergenceError)
