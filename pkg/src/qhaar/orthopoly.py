"""Orthogonal polynomial families and their measures.

Four interlocking pieces:

* continuous q-Hermite polynomials, their weight and Poisson kernel;
* q-Charlier polynomials with the two discrete moment functionals that
  encode the diagonal-operator matrix elements;
* Al-Salam-Chihara polynomials (series and recurrence forms) with their
  Poisson kernel in closed very-well-poised form;
* the Askey-Wilson measure: normalization constant, continuous weight,
  and discrete masses for parameters outside the unit disc, assembled
  into a quadrature-ready MeasureSpec.

Measures are normalized so the total mass is 1; that normalization is
re-verified at construction time and is one of the deeper consistency
checks on the mass-weight formulas.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError
from .qseries import QContext, SeriesSpec, phi_rs, qpoch, qpoch_prod, w87

__all__ = [
    "AWParams",
    "MeasureSpec",
    "MomentFunctional",
    "cqh",
    "cqh_all",
    "cqh_weight",
    "cqh_poisson",
    "cqh_poisson_series",
    "q_charlier",
    "moment_apply",
    "asc",
    "asc_all",
    "asc_orthonormal",
    "asc_poisson",
    "asc_poisson_series",
    "asc_mass_poisson_tq",
    "aw_h0",
    "aw_theta_weight",
    "aw_mass_weight",
    "aw_measure",
    "aw_integrate",
]

#: |e q^k| must exceed 1 by more than this to generate a discrete mass;
#: values inside the band are treated as the (measure-zero) boundary case.
MASS_EDGE_TOL = 1e-12


# ---------------------------------------------------------------------------
# continuous q-Hermite


def cqh_all(n_max: int, x: float, ctx: QContext) -> np.ndarray:
    """H_0..H_{n_max} at x via the recurrence 2x H_n = H_{n+1} + (1-q^n) H_{n-1}."""
    out = np.empty(n_max + 1)
    out[0] = 1.0
    if n_max == 0:
        return out
    out[1] = 2.0 * x
    qn = ctx.q
    for n in range(1, n_max):
        out[n + 1] = 2.0 * x * out[n] - (1.0 - qn) * out[n - 1]
        qn *= ctx.q
    return out


def cqh(n: int, x: float, ctx: QContext) -> float:
    """Continuous q-Hermite polynomial H_n(x|q)."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    return float(cqh_all(n, x, ctx)[n])


def _unit_circle_point(x: float) -> complex:
    """e^{i theta} with x = cos theta, continued off [-1,1] as x + sqrt(x^2-1).

    Either branch works wherever the result is used: the expressions below
    are symmetric under z -> 1/z.
    """
    return complex(x) + cmath.sqrt(complex(x * x - 1.0))


def cqh_weight(x: float, ctx: QContext) -> float:
    """w(x|q) = (e^{2 i theta}, e^{-2 i theta}; q)_inf with x = cos theta."""
    if not -1.0 <= x <= 1.0:
        raise DomainError("cqh_weight needs x in [-1, 1]")
    z = _unit_circle_point(x)
    val = qpoch(z * z, ctx) * qpoch(z.conjugate() * z.conjugate(), ctx)
    return float(val.real)


def cqh_poisson(t: float, x: float, y: float, ctx: QContext) -> float:
    """Poisson kernel of the continuous q-Hermite family, closed form:

        (t^2;q)_inf / prod_{eps,eps'} (t e^{i(eps theta + eps' psi)};q)_inf

    for x = cos theta, y = cos psi, |t| < 1.
    """
    if abs(t) >= 1.0:
        raise DomainError("cqh_poisson needs |t| < 1")
    z1 = _unit_circle_point(x)
    z2 = _unit_circle_point(y)
    denom = 1.0 + 0.0j
    for w in (z1 * z2, z1 / z2, z2 / z1, 1.0 / (z1 * z2)):
        denom *= qpoch(t * w, ctx)
    val = qpoch(t * t, ctx) / denom
    return float(val.real)


def cqh_poisson_series(t: float, x: float, y: float, ctx: QContext, n_terms: int) -> float:
    """Defining sum sum_n t^n H_n(x) H_n(y) / (q;q)_n, truncated at n_terms."""
    hx = cqh_all(n_terms, x, ctx)
    hy = cqh_all(n_terms, y, ctx)
    total = 0.0
    tn = 1.0
    poch = 1.0
    qn = 1.0
    for n in range(n_terms + 1):
        if n > 0:
            qn *= ctx.q
            poch *= 1.0 - qn
            tn *= t
        total += tn * hx[n] * hy[n] / poch
    return total


# ---------------------------------------------------------------------------
# q-Charlier and moment functionals


def q_charlier(n: int, x: float, a: float, ctx: QContext) -> float:
    """c_n(x; a; q) = 2phi1(q^-n, x; 0; q, -q^{n+1}/a)."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    if a == 0:
        raise DomainError("a must be nonzero")
    q = ctx.q
    spec = SeriesSpec((q ** (-n), x), (0.0,), -(q ** (n + 1)) / a, ctx)
    return float(phi_rs(spec).real)


@dataclass(frozen=True)
class MomentFunctional:
    """Discrete moment functional on functions of x.

    kind "L":  L(p) = sum_n q^{2 n tau} q^{n(n-1)} / (q^2;q^2)_n * p(q^{-2n})
    kind "M":  M(p) = sum_n (-1)^n  q^{n(n-1)} / (q^2;q^2)_n * p(q^{-2n})

    Both live in base ctx.q (the squares are written out explicitly).
    """

    kind: str
    ctx: QContext
    tau: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("L", "M"):
            raise DomainError(f"kind must be 'L' or 'M', got {self.kind!r}")
        if self.kind == "L" and self.tau is None:
            raise DomainError("kind 'L' requires tau")


def _as_callable(p) -> Callable[[float], float]:
    if callable(p):
        return p
    coeffs = np.asarray(p, dtype=float)
    return lambda x: float(np.polynomial.polynomial.polyval(x, coeffs))


def moment_apply(functional: MomentFunctional, p, p2=None) -> float:
    """Apply L or M to a polynomial (coefficient sequence) or callable.

    The coefficient q^{n(n-1)} decays faster than any polynomial growth of
    p(q^{-2n}); summation stops once two consecutive terms sit below an
    internal fraction of tail_tol while decreasing.

    The weight and the polynomial values separately leave double range long
    before their product does (q^{n(n-1)} underflows near n=34 for q=0.5),
    so the weight is carried as mantissa * 2^exponent and each term is
    reassembled with ldexp.  For a product of two large-degree factors pass
    them separately as ``p`` and ``p2``; each factor is folded into the
    mantissa before the next, keeping every intermediate finite as long as
    the individual factor values are.
    """
    ctx = functional.ctx
    q = ctx.q
    fn = _as_callable(p)
    fn2 = None if p2 is None else _as_callable(p2)
    cutoff = 0.01 * ctx.tail_tol
    # largest node representable: q^{-2n} < overflow threshold
    n_node_cap = int(700.0 / (-2.0 * math.log(q)))
    total = 0.0
    mant, exp = 1.0, 0  # weight = mant * 2^exp
    prev_small = None
    q2n = 1.0  # q^{2n}
    for n in range(ctx.max_terms):
        if n > n_node_cap:
            raise ConvergenceError(
                "moment functional nodes exceed double range before convergence"
            )
        x = q ** (-2 * n)
        try:
            v = mant * fn(x)
            if fn2 is not None:
                v, e2 = math.frexp(v)
                v *= fn2(x)
                exp_term = exp + e2
            else:
                exp_term = exp
        except OverflowError:
            raise ConvergenceError(
                f"moment functional factor overflowed at node index {n}; "
                "pass a large-degree product split across the two factor slots"
            ) from None
        if not math.isfinite(v):
            raise ConvergenceError(
                f"moment functional term overflowed at node index {n}"
            )
        try:
            term = math.ldexp(v, exp_term)
        except OverflowError:
            raise ConvergenceError(
                f"moment functional term overflowed at node index {n}"
            ) from None
        total += term
        if prev_small is not None and abs(term) <= cutoff and abs(term) <= prev_small:
            return total
        prev_small = abs(term) if abs(term) <= cutoff else None
        # update to n+1: multiply by q^{2 tau} (L) or -1 (M), then by
        # q^{2n} / (1 - q^{2n+2})
        if functional.kind == "L":
            mant *= q ** (2.0 * functional.tau)
        else:
            mant = -mant
        mant *= q2n / (1.0 - q2n * q * q)
        mant, de = math.frexp(mant)
        exp += de
        q2n *= q * q
    raise ConvergenceError("moment functional did not converge within max_terms")


# ---------------------------------------------------------------------------
# Al-Salam-Chihara


def asc(n: int, x: float, a: float, b: float, ctx: QContext) -> float:
    """p_n(x; a, b | q) by the terminating 3phi2 series

        a^{-n} (ab;q)_n 3phi2(q^{-n}, a e^{i theta}, a e^{-i theta}; ab, 0; q, q).

    The terminating series carries terms up to q^{-n(n-1)/2} in magnitude
    while the sum stays moderate, a cancellation intrinsic to this
    representation (no summation order avoids it).  The series route is
    taken only when the forecast roundoff

        eps * q^{-n(n-1)/2} * max(1, |a z|, 1/|a|)^n

    stays safely below the library tolerance; otherwise the value comes
    from the recurrence, which is stable on [-1, 1] and agrees with the
    series wherever both are accurate.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    if abs(a) < abs(b):
        a, b = b, a
    q = ctx.q
    z = _unit_circle_point(x)
    amp = max(1.0, abs(a) * abs(z), 1.0 / abs(a)) if a != 0.0 else np.inf
    if b == 0.0 or q ** (-0.5 * n * (n - 1)) * amp**n > 1e3:
        return float(asc_all(n, x, a, b, ctx)[n])
    spec = SeriesSpec((q ** (-n), a * z, a * z.conjugate()), (a * b, 0.0), q, ctx)
    val = a ** (-n) * qpoch(a * b, ctx, n) * phi_rs(spec)
    return float(val.real)


def asc_all(n_max: int, x, a: float, b: float, ctx: QContext) -> np.ndarray:
    """p_0..p_{n_max} at x (scalar or array) via the three-term recurrence

        2x p_n = p_{n+1} + (a+b) q^n p_n + (1 - a b q^{n-1})(1 - q^n) p_{n-1}.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max == 0:
        return out
    out[1] = 2.0 * x - (a + b)
    q = ctx.q
    qn = q
    for n in range(1, n_max):
        out[n + 1] = (2.0 * x - (a + b) * qn) * out[n] - (
            1.0 - a * b * qn / q
        ) * (1.0 - qn) * out[n - 1]
        qn *= q
    return out


def asc_orthonormal(n_max: int, x, s: float, t: float, ctx: QContext) -> np.ndarray:
    """Orthonormal variants h_n(x; s, t | q) = p_n(x; q^{1/2} t/s, -q^{1/2}/(st)) /
    sqrt((q, -q s^{-2}; q)_n)."""
    q = ctx.q
    rq = math.sqrt(q)
    a = rq * t / s
    b = -rq / (s * t)
    p = asc_all(n_max, x, a, b, ctx)
    scale = 1.0
    qn = 1.0
    for n in range(1, n_max + 1):
        qn *= q
        scale *= (1.0 - qn) * (1.0 + qn / (s * s))
        p[n] /= math.sqrt(scale)
    return p


def asc_poisson_series(
    t: float, x: float, y: float, a: float, b: float, ctx: QContext, n_terms: int
) -> float:
    """Defining sum sum_k t^k p_k(x) p_k(y) / ((q, ab; q)_k) truncated at n_terms."""
    px = asc_all(n_terms, x, a, b, ctx)
    py = asc_all(n_terms, y, a, b, ctx)
    q = ctx.q
    total = 0.0
    tk = 1.0
    poch = 1.0
    qk = 1.0
    for k in range(n_terms + 1):
        if k > 0:
            tk *= t
            poch *= (1.0 - qk) * (1.0 - a * b * qk / q)
        total += tk * px[k] * py[k] / poch
        qk *= q
    return total


def _asc_mass_location(e: float, k: int, q: float) -> float:
    return 0.5 * (e * q**k + 1.0 / (e * q**k))


def asc_mass_poisson_tq(k: int, a: float, b: float, ctx: QContext) -> float:
    """Poisson kernel at t = q on the k-th discrete mass of parameter a:

        P_k(a;b|q) = (a b q^k, b q / a; q)_inf / ((ab, a^{-2} q^{1-2k}; q)_inf)
                     * (q^{-k}, b q^{-k}/a, a^2 q^k; q)_k * q^k.
    """
    q = ctx.q
    num = qpoch(a * b * q**k, ctx) * qpoch(b * q / a, ctx)
    den = qpoch(a * b, ctx) * qpoch(q ** (1 - 2 * k) / (a * a), ctx)
    fin = qpoch_prod((q ** (-k), b * q ** (-k) / a, a * a * q**k), ctx, k)
    return float(num / den * fin * q**k)


def asc_poisson(t: float, x: float, y: float, a: float, b: float, ctx: QContext) -> float:
    """Al-Salam-Chihara Poisson kernel P_t(x, y; a, b | q), closed form.

    Two regimes:

    * x, y in [-1, 1], |t| < 1, ab < 1: the very-well-poised representation

        (a t z1, a t / z1, b t z2, b t / z2, t; q)_inf
        / ((t z1 z2, t z1/z2, t z2/z1, t/(z1 z2), a b t; q)_inf)
        * 8W7(a b t / q; t, b z1, b / z1, a z2, a / z2; q, t)

      with z1 = e^{i theta}, z2 = e^{i psi}.

    * x = y = a discrete mass point of parameter e in {a, b} with |e| > 1,
      |t| < e^2 q^{2k}: a terminating evaluation; at t = q exactly it reduces
      to asc_mass_poisson_tq.
    """
    q = ctx.q
    if a * b >= 1.0:
        raise DomainError("asc_poisson needs ab < 1")
    if t == 0.0:
        return 1.0
    if a == 0.0 or b == 0.0:
        # the very-well-poised form divides by a and b; the series route
        # still covers these degenerate subfamilies
        raise DomainError("closed-form kernel needs a != 0 and b != 0")
    if abs(x) <= 1.0 and abs(y) <= 1.0:
        if abs(t) >= 1.0:
            raise DomainError("continuous regime needs |t| < 1")
        z1 = _unit_circle_point(x)
        z2 = _unit_circle_point(y)
        num = 1.0 + 0.0j
        for w in (a * t * z1, a * t / z1, b * t * z2, b * t / z2, t + 0.0j):
            num *= qpoch(w, ctx)
        den = qpoch(a * b * t + 0.0j, ctx)
        for w in (t * z1 * z2, t * z1 / z2, t * z2 / z1, t / (z1 * z2)):
            den *= qpoch(w, ctx)
        val = num / den * w87(a * b * t / q, t, b * z1, b / z1, a * z2, a / z2, ctx, t)
        return float(val.real)

    # discrete regime: locate x among the masses of a or b
    if abs(x - y) > 1e-9 * (1.0 + abs(x)):
        raise DomainError("off-diagonal Poisson values outside [-1,1] are not supported")
    for e, other in ((a, b), (b, a)):
        if abs(e) <= 1.0:
            continue
        k = 0
        while abs(e) * q**k > 1.0 + MASS_EDGE_TOL:
            if abs(x - _asc_mass_location(e, k, q)) <= 1e-9 * (1.0 + abs(x)):
                if not abs(t) < e * e * q ** (2 * k):
                    raise DomainError(
                        f"mass-point Poisson kernel needs |t| < e^2 q^(2k) = "
                        f"{e * e * q ** (2 * k):.6g}"
                    )
                if abs(t - q) <= 1e-15:
                    return asc_mass_poisson_tq(k, e, other, ctx)
                pref = qpoch_prod((e * e * q**k * t, t * q ** (-k)), ctx, k)
                num = qpoch(e * other * t * q**k, ctx) * qpoch(
                    other * t * q ** (-k) / e, ctx
                )
                den = qpoch(e * other * t, ctx) * qpoch(
                    t * q ** (-2 * k) / (e * e), ctx
                )
                w = w87(
                    e * other * t / q,
                    t,
                    e * other * q**k,
                    other * q ** (-k) / e,
                    q ** (-k),
                    e * e * q**k,
                    ctx,
                    t,
                )
                return float((pref * num / den * w).real)
            k += 1
    raise DomainError(f"x={x!r} is not a discrete mass point of (a={a!r}, b={b!r})")


# ---------------------------------------------------------------------------
# Askey-Wilson measure


@dataclass(frozen=True)
class AWParams:
    """Real Askey-Wilson parameters with all *signed* pairwise products < 1.

    The signed reading matches the positivity condition actually required
    of the measure: products of two negative parameters or two positive
    parameters must stay below 1, while a large negative product is
    harmless.  abcd is also kept away from q^{-2m} (poles of h0).
    """

    a: float
    b: float
    c: float
    d: float
    ctx: QContext

    def __post_init__(self) -> None:
        vals = (self.a, self.b, self.c, self.d)
        names = "abcd"
        for i in range(4):
            for j in range(i + 1, 4):
                prod = vals[i] * vals[j]
                if not prod < 1.0:
                    raise DomainError(
                        f"pairwise product {names[i]}{names[j]} = {prod!r} must be < 1"
                    )

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)


def aw_h0(a: float, b: float, c: float, d: float, ctx: QContext) -> float:
    """Normalization h0 = (abcd;q)_inf / (q, ab, ac, ad, bc, bd, cd; q)_inf."""
    num = qpoch(a * b * c * d, ctx)
    den = qpoch(ctx.q, ctx)
    for prod in (a * b, a * c, a * d, b * c, b * d, c * d):
        den *= qpoch(prod, ctx)
    return float(num / den)


def _qpoch_inf_array(z: np.ndarray, ctx: QContext) -> np.ndarray:
    """(z;q)_inf elementwise for a complex array, shared truncation policy."""
    q = ctx.q
    threshold = ctx.tail_tol * (1.0 - q)
    zmax = float(np.max(np.abs(z))) if z.size else 0.0
    out = np.ones_like(z)
    qi = 1.0
    for _ in range(ctx.max_terms):
        if zmax * qi < threshold:
            return out
        out *= 1.0 - z * qi
        qi *= q
    raise ConvergenceError("array q-Pochhammer did not reach tail_tol")


def aw_theta_weight(theta, a: float, b: float, c: float, d: float, ctx: QContext):
    """Continuous weight w(cos theta; a,b,c,d | q) for theta scalar or array.

    w = |(e^{2 i theta};q)_inf|^2 / prod_e |(e e^{i theta};q)_inf|^2 for the
    real parameters e in {a,b,c,d}.
    """
    th = np.asarray(theta, dtype=float)
    z = np.exp(1j * th)
    num = np.abs(_qpoch_inf_array(z * z, ctx)) ** 2
    den = np.ones_like(num)
    for e in (a, b, c, d):
        if e != 0.0:
            den *= np.abs(_qpoch_inf_array(e * z, ctx)) ** 2
    out = num / den
    return out if out.shape else float(out)


def aw_mass_weight(e: float, others: Sequence[float], k: int, ctx: QContext) -> float:
    """Discrete mass weight at x_k = (e q^k + e^{-1} q^{-k})/2, |e q^k| > 1.

    With e in the first slot and (f, g, h) the remaining parameters,

        w_k = (e^{-2};q)_inf / ((q;q)_inf prod_p (e p; q)_inf (p/e; q)_inf)
              * (1 - e^2 q^{2k}) / (1 - e^2)
              * (e^2;q)_k / (q;q)_k * q^k e^{-k} * prod_p G_p(k),

    where G_p(k) = (e p;q)_k / ((e q/p;q)_k p^k) and the p -> 0 limit of
    G_p is (-1)^k e^{-k} q^{-k(k+1)/2}; the zero-parameter variants cover
    the Al-Salam-Chihara (two zeros) and q-Hermite (three zeros) cases.
    Includes the (1 - e^2 q^{2k})/(1 - e^2) factor required for the weights
    to sum correctly.
    """
    q = ctx.q
    c_inf = qpoch(e ** (-2.0), ctx) / qpoch(q, ctx)
    for p in others:
        if p != 0.0:
            c_inf /= qpoch(e * p, ctx) * qpoch(p / e, ctx)
    inv_e = 1.0 / e
    val = c_inf * (1.0 - e * e * q ** (2 * k)) / (1.0 - e * e)
    val *= qpoch(e * e, ctx, k) / qpoch(q, ctx, k)
    val *= q**k * inv_e**k
    for p in others:
        if p != 0.0:
            val *= qpoch(e * p, ctx, k) / (qpoch(e * q / p, ctx, k) * p**k)
        else:
            val *= (-1.0) ** k * inv_e**k * q ** (-0.5 * k * (k + 1))
    return float(val)


@dataclass
class MeasureSpec:
    """Quadrature-ready normalized measure: continuous part on (-1,1) plus
    discrete masses at |x| > 1.

    ``theta_nodes``/``theta_weights`` integrate the continuous part:
    sum_i theta_weights[i] * f(cos(theta_nodes[i])) ~ (2 pi h0)^{-1}
    int_0^pi f(cos theta) w(cos theta) d theta.  ``masses`` holds
    (x_k, normalized weight) pairs.  Total mass is 1 within 1e-9.
    """

    params: AWParams
    h0: float
    masses: tuple
    theta_nodes: np.ndarray = field(repr=False)
    theta_weights: np.ndarray = field(repr=False)
    total_mass: float = 1.0

    def weight(self, x) -> float:
        """Continuous density w.r.t. dx at x in (-1,1), normalized by 1/(2 pi h0)
        and carrying the 1/sqrt(1-x^2) Jacobian of x = cos theta."""
        xx = np.asarray(x, dtype=float)
        if np.any(np.abs(xx) >= 1.0):
            raise DomainError("continuous weight lives on (-1, 1)")
        a, b, c, d = self.params.as_tuple()
        w = aw_theta_weight(np.arccos(xx), a, b, c, d, self.params.ctx)
        out = w / (2.0 * math.pi * self.h0 * np.sqrt(1.0 - xx * xx))
        return out if out.shape else float(out)


def _gl_continuous_rule(params: AWParams, h0: float, n_nodes: int):
    """Gauss-Legendre rule in theta for (2 pi h0)^{-1} int_0^pi . w d theta."""
    t, wt = np.polynomial.legendre.leggauss(n_nodes)
    theta = 0.5 * math.pi * (t + 1.0)
    a, b, c, d = params.as_tuple()
    wvals = aw_theta_weight(theta, a, b, c, d, params.ctx)
    weights = 0.5 * math.pi * wt * wvals / (2.0 * math.pi * h0)
    return theta, weights


def _enumerate_masses(params: AWParams) -> list:
    q = params.ctx.q
    out = []
    for e, others in (
        (params.a, (params.b, params.c, params.d)),
        (params.b, (params.a, params.c, params.d)),
        (params.c, (params.a, params.b, params.d)),
        (params.d, (params.a, params.b, params.c)),
    ):
        if abs(e) <= 1.0 + MASS_EDGE_TOL:
            continue
        k = 0
        while abs(e) * q**k > 1.0 + MASS_EDGE_TOL:
            x_k = _asc_mass_location(e, k, q)
            w_k = aw_mass_weight(e, others, k, params.ctx)
            out.append((x_k, w_k))
            k += 1
    return out


def aw_measure(params: AWParams, start_nodes: int = 64, mass_tol: float = 1e-10) -> MeasureSpec:
    """Build the normalized Askey-Wilson measure for the given parameters.

    The Gauss-Legendre node count doubles until the computed total mass
    stabilizes within ``mass_tol``; construction fails if the final total
    strays from 1 by more than 1e-9 (a strong joint check on h0, the
    weight, and the mass formula).
    """
    h0 = aw_h0(*params.as_tuple(), params.ctx)
    raw_masses = _enumerate_masses(params)
    mass_sum = sum(w for _, w in raw_masses) / h0
    masses = tuple((x, w / h0) for x, w in raw_masses)

    n = start_nodes
    prev = None
    while n <= 8192:
        theta, weights = _gl_continuous_rule(params, h0, n)
        total = float(np.sum(weights)) + mass_sum
        if prev is not None and abs(total - prev) <= mass_tol:
            if abs(total - 1.0) > 1e-9:
                raise ConvergenceError(
                    f"total mass {total!r} deviates from 1 beyond 1e-9"
                )
            return MeasureSpec(params, h0, masses, theta, weights, total)
        prev = total
        n *= 2
    raise ConvergenceError("Gauss-Legendre refinement did not stabilize the total mass")


def aw_integrate(spec: MeasureSpec, f, refine_check: float | None = None) -> float:
    """Integrate a function (or coefficient sequence) against the measure.

    With ``refine_check`` set, the continuous part is re-evaluated on a
    doubled node set and a ConvergenceError is raised if the two values
    disagree by more than the given amount.
    """
    fn = _as_callable(f)
    fx = np.array([fn(float(v)) for v in np.cos(spec.theta_nodes)])
    cont = float(np.dot(spec.theta_weights, fx))
    if refine_check is not None:
        theta2, weights2 = _gl_continuous_rule(
            spec.params, spec.h0, 2 * len(spec.theta_nodes)
        )
        fx2 = np.array([fn(float(v)) for v in np.cos(theta2)])
        cont2 = float(np.dot(weights2, fx2))
        if abs(cont2 - cont) > refine_check:
            raise ConvergenceError(
                f"quadrature not converged: {cont!r} vs {cont2!r} on doubled nodes"
            )
        cont = cont2
    disc = sum(w * fn(x) for x, w in spec.masses)
    return cont + disc
