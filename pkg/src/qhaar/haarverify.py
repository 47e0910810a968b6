"""Dual-route verification of closed forms for the Haar functional.

Three closed forms are checked, each by computing both sides independently:
the operator side as a phase-averaged weighted trace of p(element) on a
truncated representation, and the measure side by quadrature against the
claimed orthogonality measure.

    thm4   p((a + a*)/2)        against the semicircle law on [-1, 1]
    thm5   p(rho_tau_inf)       against a two-endpoint Jackson integral
    thm6   p(rho_tau_sigma)     against an Askey-Wilson measure in base q^2

Supporting identities get their own checks: the intermediate expression of
the thm6 functional through diagonal Al-Salam-Chihara Poisson kernels, the
two-term very-well-poised 8W7 relation (Bailey) that collapses the kernel
pair into the Askey-Wilson density, and the matching identity for discrete
mass weights.  The two routes of every comparison share no intermediate
caches; each side is computed from its own module path.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .orthopoly import (
    AWParams,
    MeasureSpec,
    asc_mass_poisson_tq,
    asc_poisson,
    aw_h0,
    aw_integrate,
    aw_mass_weight,
    aw_measure,
    aw_theta_weight,
)
from .qseries import QContext, q_integral, qpoch, qpoch_prod, w87
from .qsu2rep import SphericalParams, build_rep, element, haar_trace, spectral_trace
from .spectral import check_truncation

__all__ = [
    "VerifyConfig",
    "VerifyRow",
    "VerifyReport",
    "THEOREMS",
    "monomials",
    "verify",
    "thm4_measure",
    "thm5_measure",
    "thm6_params",
    "thm6_measure",
    "gamma_measure",
    "IntermediateReport",
    "intermediate_check",
    "bailey_check",
    "bailey_raw_check",
    "bailey_variant_residuals",
    "mass_identity_check",
    "support_check",
    "sigma_limit_check",
]

THEOREMS = ("thm4", "thm5", "thm6", "gamma")

_THEOREM_ALIASES = {4: "thm4", 5: "thm5", 6: "thm6", "4": "thm4", "5": "thm5", "6": "thm6"}

# smaller measure values than this make relative error meaningless; the
# reported rel_err falls back to the absolute error there
REL_ERR_FLOOR = 1e-6


def monomials(max_degree: int) -> tuple[tuple[float, ...], ...]:
    """Coefficient tuples (ascending) for 1, x, ..., x^max_degree."""
    if max_degree < 0:
        raise DomainError("max_degree must be nonnegative")
    return tuple((0.0,) * d + (1.0,) for d in range(max_degree + 1))


@dataclass(frozen=True)
class VerifyConfig:
    """Shared knobs for a verification run.

    ``poly_set`` holds ascending coefficient tuples; the default is the
    monomials through degree 6.  ``phi_points = 0`` lets the trace route
    pick its exact phase grid.  Construction enforces the truncation policy
    of the spectral module for the largest degree present.
    """

    ctx: QContext
    tau: float = 0.4
    sigma: float = 1.5
    N: int = 160
    poly_set: tuple[tuple[float, ...], ...] = field(default_factory=lambda: monomials(6))
    tol: float = 1e-7
    phi_points: int = 0

    def __post_init__(self) -> None:
        if self.N < 1:
            raise DomainError("N must be positive")
        if self.tol <= 0.0:
            raise DomainError("tol must be positive")
        if self.phi_points < 0:
            raise DomainError("phi_points must be nonnegative (0 = automatic)")
        if not self.poly_set:
            raise DomainError("poly_set must not be empty")
        object.__setattr__(
            self, "poly_set", tuple(tuple(float(c) for c in p) for p in self.poly_set)
        )
        check_truncation(self.N, self.max_degree, self.tol, self.ctx.q)

    @property
    def max_degree(self) -> int:
        return max(_poly_degree(np.asarray(p)) for p in self.poly_set)


@dataclass(frozen=True)
class VerifyRow:
    """One polynomial, both routes, and the discrepancy.

    ``rel_err`` is relative to the measure side unless that is smaller than
    REL_ERR_FLOOR, in which case it equals the absolute error.  The route
    labels record where each side's constants came from.
    """

    label: str
    coeffs: tuple[float, ...]
    trace_side: float
    measure_side: float
    abs_err: float
    rel_err: float
    passed: bool
    trace_route: str
    measure_route: str


@dataclass(frozen=True)
class VerifyReport:
    theorem: str
    config: VerifyConfig
    rows: tuple[VerifyRow, ...] = field(default_factory=tuple)

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def max_rel_err(self) -> float:
        return max((r.rel_err for r in self.rows), default=0.0)


def _poly_degree(coeffs: np.ndarray) -> int:
    nz = np.nonzero(coeffs)[0]
    return int(nz[-1]) if nz.size else 0


def _poly_label(coeffs: np.ndarray) -> str:
    nz = np.nonzero(coeffs)[0]
    if nz.size == 0:
        return "0"
    if nz.size == 1 and coeffs[nz[0]] == 1.0:
        d = int(nz[0])
        return "1" if d == 0 else ("x" if d == 1 else f"x^{d}")
    return f"poly(deg={int(nz[-1])})"


def _as_coeffs(p) -> np.ndarray | None:
    if callable(p):
        return None
    return np.atleast_1d(np.asarray(p, dtype=float))


def _as_callable(p):
    if callable(p):
        return p
    coeffs = np.atleast_1d(np.asarray(p, dtype=float))
    return lambda x: np.polynomial.polynomial.polyval(x, coeffs)


def _row(label: str, coeffs, trace_side: float, measure_side: float, tol: float,
         trace_route: str, measure_route: str) -> VerifyRow:
    trace_side = float(trace_side)
    measure_side = float(measure_side)
    abs_err = abs(trace_side - measure_side)
    rel_err = abs_err if abs(measure_side) < REL_ERR_FLOOR else abs_err / abs(measure_side)
    return VerifyRow(
        label=label,
        coeffs=tuple(float(c) for c in np.atleast_1d(coeffs)),
        trace_side=trace_side,
        measure_side=measure_side,
        abs_err=abs_err,
        rel_err=rel_err,
        passed=bool(rel_err <= tol),
        trace_route=trace_route,
        measure_route=measure_route,
    )


def thm4_measure(p, n_nodes: int | None = None) -> float:
    """Semicircle moments (2/pi) int_{-1}^1 p(x) sqrt(1-x^2) dx.

    ``p`` is an ascending coefficient array or a continuous function on
    [-1, 1].  Chebyshev quadrature of the second kind, exact for
    polynomials of degree up to 2*n_nodes - 1.
    """
    coeffs = _as_coeffs(p)
    if n_nodes is None:
        n_nodes = 256 if coeffs is None else max(16, coeffs.shape[0])
    i = np.arange(1, n_nodes + 1)
    angles = i * math.pi / (n_nodes + 1)
    nodes = np.cos(angles)
    weights = math.pi / (n_nodes + 1) * np.sin(angles) ** 2
    if coeffs is None:
        vals = np.array([float(p(x)) for x in nodes])
    else:
        vals = np.polynomial.polynomial.polyval(nodes, coeffs)
    return float(np.sum(weights * vals) * 2.0 / math.pi)


def thm5_measure(p, tau: float, ctx: QContext) -> float:
    """(1 + q^{2 tau})^{-1} times the base-q^2 Jackson integral of p over [-1, q^{2 tau}]."""
    pf = _as_callable(p)
    q = ctx.q
    val = q_integral(lambda x: float(pf(x)), -1.0, q ** (2.0 * tau), ctx.squared())
    return val / (1.0 + q ** (2.0 * tau))


def thm6_params(tau: float, sigma: float, ctx: QContext) -> AWParams:
    """Askey-Wilson parameter quadruple attached to rho_tau_sigma, base q^2."""
    q = ctx.q
    return AWParams(
        a=-(q ** (sigma + tau + 1.0)),
        b=-(q ** (1.0 - sigma - tau)),
        c=q ** (sigma - tau + 1.0),
        d=q ** (1.0 - sigma + tau),
        ctx=ctx.squared(),
    )


def thm6_measure(p, tau: float, sigma: float, ctx: QContext) -> float:
    """Integral of p against the Askey-Wilson measure attached to rho_tau_sigma."""
    spec = aw_measure(thm6_params(tau, sigma, ctx))
    return aw_integrate(spec, _as_callable(p))


def gamma_measure(p, ctx: QContext) -> float:
    """Base-q^2 Jackson integral of p over [0, 1]."""
    pf = _as_callable(p)
    return q_integral(lambda x: float(pf(x)), 0.0, 1.0, ctx.squared())


def verify(theorem, cfg: VerifyConfig) -> VerifyReport:
    """Compare trace and measure sides for every polynomial in cfg.poly_set.

    ``theorem`` is one of "thm4", "thm5", "thm6", "gamma" (the integers
    4, 5, 6 are accepted as aliases).
    """
    theorem = _THEOREM_ALIASES.get(theorem, theorem)
    if theorem not in THEOREMS:
        raise DomainError(f"unknown theorem {theorem!r}; expected one of {THEOREMS}")
    ctx = cfg.ctx
    phi_count = cfg.phi_points if cfg.phi_points else None
    trace_route = f"phase-averaged weighted trace, N={cfg.N}"
    rows = []
    spec: MeasureSpec | None = None
    if theorem == "thm6":
        spec = aw_measure(thm6_params(cfg.tau, cfg.sigma, ctx))
    for coeffs_t in cfg.poly_set:
        coeffs = np.asarray(coeffs_t)
        if theorem == "thm4":
            trace = haar_trace(ctx, "cocentral", coeffs, cfg.N, tol=cfg.tol, phi_count=phi_count)
            meas = thm4_measure(coeffs)
            measure_route = "semicircle, Chebyshev-2 quadrature"
        elif theorem == "thm5":
            trace = haar_trace(
                ctx,
                "rho_tau_inf",
                coeffs,
                cfg.N,
                SphericalParams(tau=cfg.tau),
                tol=cfg.tol,
                phi_count=phi_count,
            )
            meas = thm5_measure(coeffs, cfg.tau, ctx)
            measure_route = f"Jackson q^2-integral over [-1, q^(2*{cfg.tau:g})]"
        elif theorem == "thm6":
            trace = haar_trace(
                ctx,
                "rho_tau_sigma",
                coeffs,
                cfg.N,
                SphericalParams(tau=cfg.tau, sigma=cfg.sigma),
                tol=cfg.tol,
                phi_count=phi_count,
            )
            meas = aw_integrate(spec, _as_callable(coeffs))
            measure_route = (
                f"Askey-Wilson q^2 measure, {len(spec.masses)} mass point(s)"
            )
        else:
            trace = haar_trace(
                ctx, "gamma_star_gamma", coeffs, cfg.N, tol=cfg.tol, phi_count=phi_count
            )
            meas = gamma_measure(coeffs, ctx)
            measure_route = "Jackson q^2-integral over [0, 1]"
        rows.append(
            _row(_poly_label(coeffs), coeffs, trace, meas, cfg.tol, trace_route, measure_route)
        )
    return VerifyReport(theorem=theorem, config=cfg, rows=tuple(rows))


@dataclass(frozen=True)
class IntermediateReport:
    """Deviations of the diagonal-Poisson-kernel expression for one polynomial.

    The functional of p(rho_tau_sigma) is rewritten as a weighted pair of
    integrals of p(x) P_{q^2}(x, x) against the two Al-Salam-Chihara
    orthogonality measures; that value is compared against the assembled
    Askey-Wilson measure route (``vs_measure``) and the operator trace
    route (``vs_trace``), both relative to max(1, |measure|).
    ``support_separation`` is the smallest distance between discrete mass
    points of the two kernels' measures (infinity when either has none);
    the rewriting needs these supports disjoint.
    """

    vs_measure: float
    vs_trace: float
    support_separation: float


def _asc_pair(tau: float, sigma: float, q: float) -> tuple[tuple[float, float], tuple[float, float]]:
    a1 = q ** (1.0 + sigma - tau)
    b1 = -(q ** (1.0 - sigma - tau))
    a2 = q ** (1.0 - sigma + tau)
    b2 = -(q ** (1.0 + sigma + tau))
    return (a1, b1), (a2, b2)


def intermediate_check(
    p, tau: float, sigma: float, ctx: QContext, size: int = 200
) -> IntermediateReport:
    """Check the kernel-pair expression of the thm6 functional on one polynomial."""
    if tau == 0.0:
        raise DomainError("tau = 0 makes a printed prefactor of this identity singular")
    q = ctx.q
    Q = q * q
    ctx2 = ctx.squared()
    coeffs = _as_coeffs(p)
    if coeffs is None:
        raise DomainError("intermediate_check needs polynomial coefficients")
    pv = _as_callable(coeffs)
    (a1, b1), (a2, b2) = _asc_pair(tau, sigma, q)
    spec1 = aw_measure(AWParams(a1, b1, 0.0, 0.0, ctx2))
    spec2 = aw_measure(AWParams(a2, b2, 0.0, 0.0, ctx2))
    if spec1.masses and spec2.masses:
        sep = min(abs(x1 - x2) for x1, _ in spec1.masses for x2, _ in spec2.masses)
    else:
        sep = math.inf
    if sep < 1e-10:
        raise DomainError("mass supports of the two kernel measures collide")
    w1 = (1.0 - Q) / (1.0 + q ** (2.0 * tau))
    w2 = (1.0 - Q) / (1.0 + q ** (-2.0 * tau))
    part1 = aw_integrate(spec1, lambda x: pv(x) * asc_poisson(Q, x, x, a1, b1, ctx2))
    part2 = aw_integrate(spec2, lambda x: pv(x) * asc_poisson(Q, x, x, a2, b2, ctx2))
    val = w1 * part1 + w2 * part2
    meas = thm6_measure(coeffs, tau, sigma, ctx)
    trace = haar_trace(
        ctx, "rho_tau_sigma", coeffs, size, SphericalParams(tau=tau, sigma=sigma), tol=1e-9
    )
    scale = max(1.0, abs(meas))
    return IntermediateReport(
        vs_measure=abs(val - meas) / scale,
        vs_trace=abs(val - trace) / scale,
        support_separation=sep,
    )


def bailey_raw_check(theta: float, tau: float, sigma: float, ctx: QContext) -> float:
    """Relative residual of the two-term very-well-poised 8W7 relation.

    Evaluated directly at the base-q^2 substitution attached to
    (theta, tau, sigma): a = -q^{2-2 tau}, b = q^2, and the two conjugate
    pairs c, d = -q^{1 -/+ sigma - tau} e^{+/- i theta} ... built from the
    kernel parameters.
    """
    q = ctx.q
    Q = q * q
    ctx2 = ctx.squared()
    a = -(q ** (2.0 - 2.0 * tau))
    b = Q
    z = cmath.exp(1j * theta)
    c = -(q ** (1.0 - sigma - tau)) * z
    d = c.conjugate()
    e = q ** (1.0 + sigma - tau) * z
    f = e.conjugate()
    term1 = w87(a, b, c, d, e, f, ctx2, Q) / qpoch(b / a, ctx2)
    pref = qpoch_prod(
        (a * Q, c, d, e, f, b * Q / c, b * Q / d, b * Q / e, b * Q / f), ctx2
    ) / qpoch_prod(
        (
            a * Q / c,
            a * Q / d,
            a * Q / e,
            a * Q / f,
            b * c / a,
            b * d / a,
            b * e / a,
            b * f / a,
            b * b * Q / a,
        ),
        ctx2,
    )
    term2 = (
        pref
        * w87(b * b / a, b, b * c / a, b * d / a, b * e / a, b * f / a, ctx2, Q)
        / qpoch(a / b, ctx2)
    )
    rhs = qpoch_prod(
        (
            a * Q,
            a * Q / (c * d),
            a * Q / (c * e),
            a * Q / (c * f),
            a * Q / (d * e),
            a * Q / (d * f),
            a * Q / (e * f),
        ),
        ctx2,
    ) / qpoch_prod(
        (a * Q / c, a * Q / d, a * Q / e, a * Q / f, b * c / a, b * d / a, b * e / a, b * f / a),
        ctx2,
    )
    return abs(term1 + term2 - rhs) / abs(rhs)


def _display_residual(
    theta: float, tau: float, sigma: float, ctx: QContext, second_denom: float
) -> float:
    q = ctx.q
    Q = q * q
    ctx2 = ctx.squared()
    (a1, b1), (a2, b2) = _asc_pair(tau, sigma, q)
    p6 = thm6_params(tau, sigma, ctx)
    params4 = (p6.a, p6.b, p6.c, p6.d)
    x = math.cos(theta)
    lhs = (1.0 - Q) * asc_poisson(Q, x, x, a1, b1, ctx2) * aw_theta_weight(
        theta, a1, b1, 0.0, 0.0, ctx2
    ) / ((1.0 + q ** (2.0 * tau)) * aw_h0(a1, b1, 0.0, 0.0, ctx2)) + (1.0 - Q) * asc_poisson(
        Q, x, x, a2, b2, ctx2
    ) * aw_theta_weight(theta, a2, b2, 0.0, 0.0, ctx2) / (
        second_denom * aw_h0(a2, b2, 0.0, 0.0, ctx2)
    )
    rhs = aw_theta_weight(theta, *params4, ctx2) / aw_h0(*params4, ctx2)
    return abs(lhs - rhs) / abs(rhs)


def bailey_check(theta: float, tau: float, sigma: float, ctx: QContext) -> float:
    """Relative residual of the assembled kernel-pair density identity at theta.

    Pointwise on x = cos(theta): the two diagonal Poisson kernels times
    their one-pair Askey-Wilson densities, weighted by
    (1-q^2)/((1 +/- q^{-/+ 2 tau}) h0), combine into the four-parameter
    density over its h0.  The prefactor of the second term uses the
    internally consistent sign (1 + q^{-2 tau}); see
    :func:`bailey_variant_residuals` for the variant comparison.  tau = 0
    is rejected because the variant prefactor 1/(1 - q^{-2 tau}) is
    singular there.
    """
    if tau == 0.0:
        raise DomainError("tau = 0 makes the variant prefactor 1/(1 - q^{-2 tau}) singular")
    return _display_residual(theta, tau, sigma, ctx, 1.0 + ctx.q ** (-2.0 * tau))


def bailey_variant_residuals(
    theta: float, tau: float, sigma: float, ctx: QContext
) -> tuple[float, float]:
    """Residuals (consistent, variant) of the two second-term prefactors.

    The consistent form divides the second term by (1 + q^{-2 tau}); the
    variant divides by (1 - q^{-2 tau}).  Only one of them can agree with
    the four-parameter density; the caller should flag the discrepancy
    when the variant residual exceeds tolerance instead of silently
    dropping the inconsistent form.
    """
    if tau == 0.0:
        raise DomainError("tau = 0 makes the variant prefactor 1/(1 - q^{-2 tau}) singular")
    q = ctx.q
    return (
        _display_residual(theta, tau, sigma, ctx, 1.0 + q ** (-2.0 * tau)),
        _display_residual(theta, tau, sigma, ctx, 1.0 - q ** (-2.0 * tau)),
    )


def mass_identity_check(a: float, b: float, k: int, ctx: QContext) -> float:
    """Absolute deviation in the discrete-mass-weight matching identity.

    With x_k the mass point of parameter a (needs |a| > 1, |a q^k| > 1,
    signed ab < 1):

        (1-q) / (1 - q/(ab)) * P_k(a; b) * w_k(a; b, 0, 0) / h0(a, b, 0, 0)
            = w_k(a; b, q/a, q/b) / h0(a, b, q/a, q/b).

    The four-parameter side generally violates the bounds a measure
    requires, so the raw weight and normalization helpers are used; the
    identity itself is a meromorphic statement about the formulas.
    """
    q = ctx.q
    if abs(a) <= 1.0:
        raise DomainError("mass parameter needs |a| > 1")
    if a * b >= 1.0:
        raise DomainError("need signed ab < 1")
    if k < 0 or abs(a) * q**k <= 1.0:
        raise DomainError("index k beyond the mass ladder of a")
    lhs = (
        (1.0 - q)
        / (1.0 - q / (a * b))
        * asc_mass_poisson_tq(k, a, b, ctx)
        * aw_mass_weight(a, (b, 0.0, 0.0), k, ctx)
        / aw_h0(a, b, 0.0, 0.0, ctx)
    )
    rhs = aw_mass_weight(a, (b, q / a, q / b), k, ctx) / aw_h0(a, b, q / a, q / b, ctx)
    return abs(lhs - rhs)


def support_check(tau: float, sigma: float, ctx: QContext, size: int = 200) -> float:
    """Largest distance from a truncation eigenvalue to the spectral support.

    The support is [-1, 1] together with the mass points of the
    Askey-Wilson measure attached to rho_tau_sigma.  Eigenvalues of the
    truncated matrix should approach it from within roundoff plus
    truncation error.
    """
    spec = aw_measure(thm6_params(tau, sigma, ctx))
    rep = build_rep(ctx, 0.0, size)
    M = element(rep, "rho_tau_sigma", SphericalParams(tau=tau, sigma=sigma))
    eigs = np.linalg.eigvalsh(M)
    worst = 0.0
    for x in eigs:
        dist = max(abs(x) - 1.0, 0.0)
        for xm, _ in spec.masses:
            dist = min(dist, abs(x - xm))
        worst = max(worst, dist)
    return float(worst)


def sigma_limit_check(
    p,
    tau: float,
    ctx: QContext,
    sigmas: tuple[float, ...] = (4.0, 6.0, 8.0),
    size: int = 160,
) -> tuple[float, ...]:
    """Errors |h(p(2 q^{sigma+tau-1} rho_tau_sigma)) - h(p(rho_tau_inf))|.

    The rescaled element converges in norm at rate O(q^sigma), so the
    returned sequence should decrease geometrically for increasing sigmas.
    """
    coeffs = _as_coeffs(p)
    if coeffs is None:
        raise DomainError("sigma_limit_check needs polynomial coefficients")
    q = ctx.q
    reference = spectral_trace(ctx, tau, coeffs)
    out = []
    for sigma in sigmas:
        scale = 2.0 * q ** (sigma + tau - 1.0)
        scaled = coeffs * scale ** np.arange(coeffs.shape[0])
        val = haar_trace(
            ctx,
            "rho_tau_sigma",
            scaled,
            size,
            SphericalParams(tau=tau, sigma=sigma),
            tol=1e-9,
        )
        out.append(abs(val - reference))
    return tuple(out)
