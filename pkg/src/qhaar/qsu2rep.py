"""Truncated generator representation for quantum SU(2) and its Haar trace.

The *-algebra with generators a, g and relations

    ag = q ga,   ag* = q g*a,   gg* = g*g,
    a*a + g*g = 1,   aa* + q^2 g*g = 1

acts on an orthonormal basis e_0, e_1, ... through the family of
irreducible representations labeled by a phase angle:

    a e_n = sqrt(1 - q^{2n}) e_{n-1},        g e_n = e^{i phi} q^n e_n.

The Haar functional of a polynomial in the generators is the phase average
of the weighted trace with density diag(q^{2p}), scaled by (1 - q^2).
Everything here works with the leading (size+1)-dimensional block, so the
last rows of products are boundary-corrupted and get excluded from checks.

Distinguished self-adjoint elements:

``cocentral``
    (a + a*)/2, half the character of the defining corepresentation.
``gamma_star_gamma``
    g*g, diagonal with entries q^{2n}.
``rho_tau_inf``
    i q^tau (a*g - g*a) - (1 - q^{2tau}) g*g, whose spectrum is the pair of
    geometric ladders {-q^{2k}} and {q^{2tau+2k}}.
``rho_tau_sigma``
    the two-parameter element whose spectral measure is an Askey-Wilson
    measure in base q^2; rescaled by 2 q^{sigma+tau-1} it converges to
    ``rho_tau_inf`` at rate O(q^sigma).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .qseries import QContext, SeriesSpec, phi_rs, qpoch
from .spectral import check_truncation

__all__ = [
    "SphericalParams",
    "TruncRep",
    "build_rep",
    "ELEMENT_NAMES",
    "element",
    "op_D",
    "haar_trace",
    "haar_trace_samples",
    "EigenBasisEntry",
    "eigen_basis",
    "eigvec_poly",
    "eigvec_components",
    "eigvec_norm_sq",
    "d_coeff",
    "spectral_trace",
    "StructureReport",
    "verify_structure",
]

ELEMENT_NAMES = ("cocentral", "gamma_star_gamma", "rho_tau_inf", "rho_tau_sigma")

# basis-index reach of each element; degree-d polynomials corrupt the last
# reach*d rows of the truncation
_ELEMENT_REACH = {
    "cocentral": 1,
    "gamma_star_gamma": 0,
    "rho_tau_inf": 1,
    "rho_tau_sigma": 2,
}


@dataclass(frozen=True)
class SphericalParams:
    """Parameters (tau, sigma) selecting a spherical-type element.

    ``sigma = None`` refers to the limiting element ``rho_tau_inf``.
    """

    tau: float
    sigma: float | None = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.tau):
            raise DomainError("tau must be finite")
        if self.sigma is not None and not math.isfinite(self.sigma):
            raise DomainError("sigma must be finite or None")


@dataclass(frozen=True)
class TruncRep:
    """Truncated generator matrices at a fixed phase angle."""

    ctx: QContext
    phi: float
    size: int
    alpha: np.ndarray
    gamma: np.ndarray


def build_rep(ctx: QContext, phi: float, size: int) -> TruncRep:
    """Matrices of the two generators on basis states 0..size."""
    if size < 1:
        raise DomainError("size must be at least 1")
    q = ctx.q
    n = np.arange(size + 1)
    alpha = np.zeros((size + 1, size + 1), dtype=complex)
    alpha[n[:-1], n[1:]] = np.sqrt(1.0 - q ** (2 * n[1:]))
    gamma = np.diag(np.exp(1j * phi) * q**n).astype(complex)
    return TruncRep(ctx=ctx, phi=phi, size=size, alpha=alpha, gamma=gamma)


def element(rep: TruncRep, name: str, params: SphericalParams | None = None) -> np.ndarray:
    """Matrix of a distinguished self-adjoint element, symmetrized.

    The (M + M*)/2 symmetrization removes the boundary asymmetry that
    truncation introduces in the formally self-adjoint combinations.
    """
    q = rep.ctx.q
    A, C = rep.alpha, rep.gamma
    Ah, Ch = A.conj().T, C.conj().T
    if name == "cocentral":
        M = 0.5 * (A + Ah)
    elif name == "gamma_star_gamma":
        M = Ch @ C
    elif name == "rho_tau_inf":
        if params is None:
            raise DomainError("rho_tau_inf needs SphericalParams")
        t = params.tau
        M = 1j * q**t * (Ah @ C - Ch @ A) - (1.0 - q ** (2 * t)) * (Ch @ C)
    elif name == "rho_tau_sigma":
        if params is None or params.sigma is None:
            raise DomainError("rho_tau_sigma needs SphericalParams with sigma")
        t, s = params.tau, params.sigma
        ts = q**-s - q**s
        tt = q**-t - q**t
        M = 0.5 * (
            A @ A
            + Ah @ Ah
            + q * (C @ C)
            + q * (Ch @ Ch)
            + 1j * q * ts * (Ah @ C - Ch @ A)
            - 1j * q * tt * (C @ A - Ah @ Ch)
            - q * ts * tt * (Ch @ C)
        )
    else:
        raise DomainError(f"unknown element {name!r}")
    return 0.5 * (M + M.conj().T)


def op_D(ctx: QContext, size: int) -> np.ndarray:
    """Diagonal of the trace density, q^{2p} for p = 0..size."""
    return ctx.q ** (2.0 * np.arange(size + 1))


def _poly_degree(coeffs: np.ndarray) -> int:
    nz = np.nonzero(coeffs)[0]
    return int(nz[-1]) if nz.size else 0


def haar_trace_samples(
    ctx: QContext,
    name: str,
    coeffs,
    size: int,
    params: SphericalParams | None = None,
    tol: float = 1e-9,
    phi_count: int | None = None,
    phi_offset: float = 0.0,
) -> np.ndarray:
    """Weighted traces (1 - q^2) tr(D p(element)) at each phase grid point.

    ``coeffs`` are polynomial coefficients in ascending order; p(element)
    is built by explicit matrix powers (Horner), capped at degree 16.  The
    default grid is the 4*deg(p) + 4 uniform angles starting at
    ``phi_offset``.  The truncation size is checked against the
    geometric-tail policy before any work happens.

    For cocentral, gamma_star_gamma and rho_tau_inf the samples are
    phase-independent up to roundoff (diagonal phase unitaries carry one
    angle into another and commute with the trace density).  For
    rho_tau_sigma the samples genuinely oscillate in 2*phi and only their
    average is meaningful; the average is still offset-independent because
    the integrand is a trigonometric polynomial the grid resolves exactly.
    """
    coeffs = np.atleast_1d(np.asarray(coeffs, dtype=float))
    deg = _poly_degree(coeffs)
    if deg > 16:
        raise DomainError("polynomial degree capped at 16 for matrix functional calculus")
    if name not in ELEMENT_NAMES:
        raise DomainError(f"unknown element {name!r}")
    check_truncation(size, _ELEMENT_REACH[name] * deg, tol, ctx.q)
    if phi_count is None:
        phi_count = 4 * deg + 4
    if phi_count < 1:
        raise DomainError("phi_count must be positive")
    weights = op_D(ctx, size)
    eye = np.eye(size + 1, dtype=complex)
    samples = np.empty(phi_count, dtype=complex)
    for j in range(phi_count):
        phi = phi_offset + 2.0 * math.pi * j / phi_count
        rep = build_rep(ctx, phi, size)
        E = element(rep, name, params)
        P = coeffs[-1] * eye
        for c in coeffs[-2::-1]:
            P = P @ E
            P += c * eye
        samples[j] = (1.0 - ctx.q**2) * np.sum(weights * np.diagonal(P))
    return samples


def haar_trace(
    ctx: QContext,
    name: str,
    coeffs,
    size: int,
    params: SphericalParams | None = None,
    tol: float = 1e-9,
    phi_count: int | None = None,
) -> float:
    """Haar functional of p(element) by phase-averaged weighted trace.

    The phase average is a trapezoid rule; the integrand is a trigonometric
    polynomial of degree at most 2*deg(p), so the default grid integrates
    it exactly.
    """
    samples = haar_trace_samples(ctx, name, coeffs, size, params, tol, phi_count)
    total = complex(np.mean(samples))
    if abs(total.imag) > 1e-8 * (1.0 + abs(total.real)):
        raise ConvergenceError(f"phase average left imaginary residue {total.imag:g}")
    return float(total.real)


def _branch_lambda(branch: int, k: int, tau: float, q: float) -> float:
    if branch not in (1, -1):
        raise DomainError("branch must be +1 or -1")
    if k < 0:
        raise DomainError("k must be nonnegative")
    return q ** (2 * tau + 2 * k) if branch == 1 else -(q ** (2 * k))


def eigvec_components(
    branch: int, k: int, tau: float, ctx: QContext, size: int
) -> np.ndarray:
    """Real coefficient sequence p_0..p_size of the rho_tau_inf eigenvector.

    Stable per-branch evaluation: the terminating 2phi1 is summed over
    j <= min(n, k) with the n-dependent prefactor folded in iteratively.
    Once the prefactor underflows to exact zero the true component is far
    below double range and is reported as 0.
    """
    q = ctx.q
    Q = q * q
    lam = _branch_lambda(branch, k, tau, q)
    Z = -(q**2) * lam if branch == 1 else q ** (2 - 2 * tau) * lam
    out = np.zeros(size + 1)
    pre = 1.0
    for n in range(size + 1):
        if pre != 0.0:
            s, c = 0.0, 1.0
            for j in range(min(n, k) + 1):
                s += c
                c *= (
                    (1.0 - q ** (-2 * n) * Q**j)
                    * (1.0 - q ** (-2 * k) * Q**j)
                    / (1.0 - Q ** (j + 1))
                    * Z
                )
            out[n] = pre * s
        pre *= (q**-tau if branch == 1 else -(q**tau)) * q**n / math.sqrt(1.0 - Q ** (n + 1))
    return out


def eigvec_poly(
    n: int, branch: int, k: int, tau: float, ctx: QContext, form: int | None = None
) -> float:
    """Single component p_n(lambda) through one of its two 2phi1 forms.

        form 1:  q^{-n tau} q^{n(n-1)/2} (q^2;q^2)_n^{-1/2}
                 2phi1(q^{-2n}, q^{2 tau}/lambda; 0; q^2, -q^2 lambda)
        form 2:  (-q^tau)^n q^{n(n-1)/2} (q^2;q^2)_n^{-1/2}
                 2phi1(q^{-2n}, -1/lambda; 0; q^2, q^{2-2tau} lambda)

    By default the form terminating through its lambda-dependent slot is
    chosen (1 on the positive branch, 2 on the negative), which is the
    numerically stable pairing.  The mismatched pairing terminates through
    q^{-2n} instead and cancels catastrophically, so it is only available
    for n <= 25; agreement of the two forms is an extended-precision fact.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    q = ctx.q
    Q = q * q
    ctx2 = ctx.squared()
    lam = _branch_lambda(branch, k, tau, q)
    if form is None:
        form = 1 if branch == 1 else 2
    if form not in (1, 2):
        raise DomainError("form must be 1, 2, or None")
    stable = (form == 1 and branch == 1) or (form == 2 and branch == -1)
    if not stable and n > 25:
        raise DomainError("mismatched form/branch pairing is unstable past n = 25")
    pre = q ** (0.5 * n * (n - 1)) / math.sqrt(qpoch(Q, ctx2, n))
    if pre == 0.0:
        return 0.0
    if form == 1:
        pre *= q ** (-n * tau)
        spec = SeriesSpec((Q ** (-n), q ** (2 * tau) / lam), (0.0,), -(q**2) * lam, ctx2)
    else:
        pre *= (-(q**tau)) ** n
        spec = SeriesSpec((Q ** (-n), -1.0 / lam), (0.0,), q ** (2 - 2 * tau) * lam, ctx2)
    return float(pre * phi_rs(spec).real)


def eigvec_norm_sq(branch: int, k: int, tau: float, ctx: QContext) -> float:
    """Closed form of sum_n p_n(lambda)^2 for the rho_tau_inf eigenvector."""
    q = ctx.q
    Q = q * q
    ctx2 = ctx.squared()
    _branch_lambda(branch, k, tau, q)
    if branch == 1:
        return (
            q ** (-2 * k)
            * qpoch(Q, ctx2, k)
            * qpoch(-(q ** (2 + 2 * tau)), ctx2, k)
            * qpoch(-(q ** (-2 * tau)), ctx2)
        )
    return (
        q ** (-2 * k)
        * qpoch(Q, ctx2, k)
        * qpoch(-(q ** (2 - 2 * tau)), ctx2, k)
        * qpoch(-(q ** (2 * tau)), ctx2)
    )


@dataclass(frozen=True)
class EigenBasisEntry:
    """One rho_tau_inf eigenvector of the truncated representation."""

    branch: int
    k: int
    eigenvalue: float
    norm_sq: float
    vector: np.ndarray


def eigen_basis(
    ctx: QContext,
    tau: float,
    size: int,
    k_max: int,
    phi: float = 0.0,
    branches: tuple[int, ...] = (1, -1),
) -> list[EigenBasisEntry]:
    """Eigenvectors v_lambda = sum_n i^n e^{i n phi} p_n(lambda) e_n.

    Components past ``size`` are dropped; for the closed-form ``norm_sq``
    to describe the truncated vector, size must comfortably exceed the
    index where components fall below working precision.
    """
    n = np.arange(size + 1)
    phase = (1j**n) * np.exp(1j * n * phi)
    out = []
    for branch in branches:
        for k in range(k_max + 1):
            p = eigvec_components(branch, k, tau, ctx, size)
            out.append(
                EigenBasisEntry(
                    branch=branch,
                    k=k,
                    eigenvalue=_branch_lambda(branch, k, tau, ctx.q),
                    norm_sq=eigvec_norm_sq(branch, k, tau, ctx),
                    vector=phase * p,
                )
            )
    return out


def d_coeff(ctx: QContext, tau: float, branch1: int, k1: int, branch2: int, k2: int) -> float:
    """Closed form of sum_n q^{2n} p_n(lambda_1) p_n(lambda_2).

    This is the matrix coefficient of the trace density between two
    eigenvectors; the phases cancel, so it does not depend on the angle.
    """
    q = ctx.q
    Q = q * q
    ctx2 = ctx.squared()
    _branch_lambda(branch1, k1, tau, q)
    _branch_lambda(branch2, k2, tau, q)
    if branch1 == branch2 and k1 < k2:
        k1, k2 = k2, k1
    if branch1 == -1 and branch2 == -1:
        return (
            qpoch(-(q ** (2 * tau + 2)), ctx2)
            * qpoch(Q, ctx2, k1)
            * qpoch(-(q ** (2 - 2 * tau)), ctx2, k2)
        )
    if branch1 == 1 and branch2 == 1:
        return (
            qpoch(-(q ** (2 - 2 * tau)), ctx2)
            * qpoch(Q, ctx2, k1)
            * qpoch(-(q ** (2 + 2 * tau)), ctx2, k2)
        )
    if branch1 == 1:  # normalize to (negative, positive) order
        branch1, k1, branch2, k2 = branch2, k2, branch1, k1
    return (
        qpoch(Q, ctx2)
        * qpoch(-(q ** (2 - 2 * tau)), ctx2, k1)
        * qpoch(-(q ** (2 + 2 * tau)), ctx2, k2)
    )


def spectral_trace(ctx: QContext, tau: float, coeffs, tol: float = 1e-12) -> float:
    """Haar functional of p(rho_tau_inf) summed over the two spectral ladders.

    The diagonal ratios d_coeff / norm_sq collapse to the weights
    q^{2k} / (1 + q^{2 tau}) and q^{2 tau + 2k} / (1 + q^{2 tau}), giving

        (1 - q^2) / (1 + q^{2 tau}) *
            sum_k q^{2k} [ p(-q^{2k}) + q^{2 tau} p(q^{2 tau + 2k}) ].
    """
    coeffs = np.atleast_1d(np.asarray(coeffs, dtype=float))
    q = ctx.q
    Q = q * q
    pval = np.polynomial.polynomial.polyval
    scale = max(1.0, float(np.max(np.abs(coeffs))))
    total = 0.0
    qk = 1.0
    k = 0
    while True:
        term = qk * (
            pval(-qk, coeffs) + q ** (2 * tau) * pval(q ** (2 * tau) * qk, coeffs)
        )
        total += term
        qk *= Q
        k += 1
        if qk * scale * (2.0 + q ** (2 * tau)) / (1.0 - Q) < 0.01 * tol:
            break
        if k > ctx.max_terms:
            raise ConvergenceError("spectral ladder sum did not close")
    return (1.0 - Q) / (1.0 + q ** (2 * tau)) * total


@dataclass(frozen=True)
class StructureReport:
    """Worst-case deviations of the defining structure on a truncation.

    All checks stay away from the boundary rows that truncation corrupts:
    a degree-d product of generators is trusted on rows 0..N-d-2 only, so
    the relations and the factorization (both degree 2) drop the last three
    rows, and the vector identities compare leading components.
    """

    relations: float
    factorization: float
    shifts: float
    recursion: float

    @property
    def max_deviation(self) -> float:
        return max(self.relations, self.factorization, self.shifts, self.recursion)


def _shift_ops(rep: TruncRep, t: float) -> tuple[np.ndarray, ...]:
    # ladder combinations moving the spectral parameter tau by one
    q = rep.ctx.q
    A, C = rep.alpha, rep.gamma
    Ah, Ch = A.conj().T, C.conj().T
    al = q**0.5 * A + 1j * q ** (t + 0.5) * C
    be = 1j * q**0.5 * Ch + q ** (t - 0.5) * Ah
    ga = -(q ** (t + 0.5)) * A + 1j * q**0.5 * C
    de = -1j * q ** (t + 0.5) * Ch + q ** (-0.5) * Ah
    return al, be, ga, de


def verify_structure(
    ctx: QContext,
    tau: float,
    sigma: float,
    size: int,
    phi: float = 0.7,
    k_max: int = 3,
) -> StructureReport:
    """Numerically confirm relations, factorization, shifts and recursion."""
    if size < 40:
        raise DomainError("size too small for meaningful boundary margins")
    q = ctx.q
    rep = build_rep(ctx, phi, size)
    A, C = rep.alpha, rep.gamma
    Ah, Ch = A.conj().T, C.conj().T
    eye = np.eye(size + 1)

    blk = slice(0, size - 3)  # rows 0..N-4 are exact for degree-2 products
    rel = 0.0
    for dev in (
        A @ C - q * (C @ A),
        A @ Ch - q * (Ch @ A),
        C @ Ch - Ch @ C,
        Ah @ A + Ch @ C - eye,
        A @ Ah + q**2 * (Ch @ C) - eye,
    ):
        rel = max(rel, float(np.max(np.abs(dev[blk, blk]))))

    # factorization of the shifted rho_tau_sigma into tau-ladder operators
    params = SphericalParams(tau=tau, sigma=sigma)
    R = element(rep, "rho_tau_sigma", params)
    al1, be1, _, _ = _shift_ops(rep, tau + 1.0)
    _, _, ga0, de0 = _shift_ops(rep, tau)
    lhs = 2.0 * q ** (tau + sigma) * R - (q ** (2 * sigma - 1) + q ** (2 * tau + 1)) * eye
    rhs = (be1 - q ** (sigma - 1) * al1) @ (ga0 + q**sigma * de0)
    fac = float(np.max(np.abs((lhs - rhs)[blk, blk])))

    lead = slice(0, size - 19)

    def vec(branch: int, k: int, t: float) -> np.ndarray:
        n = np.arange(size + 1)
        return (1j**n) * np.exp(1j * n * phi) * eigvec_components(branch, k, t, ctx, size)

    zero = np.zeros(size + 1, dtype=complex)
    al, be, ga, de = _shift_ops(rep, tau)
    shift = 0.0
    for branch in (1, -1):
        for k in range(k_max + 1):
            lam = _branch_lambda(branch, k, tau, q)
            v = vec(branch, k, tau)
            scale = float(np.linalg.norm(v))
            tgt = vec(1, k, tau - 1) if branch == 1 else (vec(-1, k - 1, tau - 1) if k else zero)
            shift = max(
                shift,
                float(
                    np.linalg.norm(
                        (al @ v - np.exp(1j * phi) * 1j * q ** (0.5 - tau) * (1 + lam) * tgt)[lead]
                    )
                )
                / scale,
            )
            tgt = vec(1, k + 1, tau - 1) if branch == 1 else vec(-1, k, tau - 1)
            shift = max(
                shift,
                float(np.linalg.norm((be @ v - np.exp(-1j * phi) * 1j * q**0.5 * tgt)[lead]))
                / scale,
            )
            tgt = (vec(1, k - 1, tau + 1) if k else zero) if branch == 1 else vec(-1, k, tau + 1)
            shift = max(
                shift,
                float(
                    np.linalg.norm(
                        (ga @ v - np.exp(1j * phi) * 1j * q**0.5 * (q ** (2 * tau) - lam) * tgt)[lead]
                    )
                )
                / scale,
            )
            tgt = vec(1, k, tau + 1) if branch == 1 else vec(-1, k + 1, tau + 1)
            shift = max(
                shift,
                float(
                    np.linalg.norm((de @ v + np.exp(-1j * phi) * 1j * q ** (0.5 + tau) * tgt)[lead])
                )
                / scale,
            )

    rec = 0.0
    for branch, k in ((-1, 0), (-1, 1), (1, 0)):
        lam = _branch_lambda(branch, k, tau, q)
        v = vec(branch, k, tau)
        v_dn = vec(branch, k + 1, tau)
        v_up = vec(branch, k - 1, tau) if k else zero
        lhs_v = 2.0 * (R @ v)
        rhs_v = (
            q * np.exp(-2j * phi) * v_dn
            + np.exp(2j * phi) / q * (1 - q ** (-2 * tau) * lam) * (1 + lam) * v_up
            + lam * q ** (1 - tau) * (q**-sigma - q**sigma) * v
        )
        rec = max(
            rec, float(np.linalg.norm((lhs_v - rhs_v)[lead])) / float(np.linalg.norm(v))
        )

    return StructureReport(relations=rel, factorization=fac, shifts=shift, recursion=rec)
