"""q-series primitives.

q-shifted factorials, basic hypergeometric sums r_phi_s, the very-well-poised
8W7 combination, and Jackson q-integrals.  Everything is double precision;
every infinite sum or product is truncated behind an explicit geometric tail
bound controlled by ``QContext.tail_tol``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import ConvergenceError, DomainError

__all__ = [
    "QContext",
    "SeriesSpec",
    "qpoch",
    "qpoch_prod",
    "phi_rs",
    "w87",
    "q_integral",
]

#: relative tolerance used to decide whether a parameter equals q**-n exactly
TERMINATION_RTOL = 1e-12


@dataclass(frozen=True)
class QContext:
    """Base q in (0,1) together with the shared truncation policy.

    ``tail_tol`` bounds the tail discarded when an infinite object is cut
    off; ``max_terms`` aborts runaway summations with ConvergenceError.
    """

    q: float
    tail_tol: float = 1e-14
    max_terms: int = 20000

    def __post_init__(self) -> None:
        if not 0.0 < self.q < 1.0:
            raise DomainError(f"q must lie strictly inside (0,1), got {self.q!r}")
        if not self.tail_tol > 0.0:
            raise DomainError("tail_tol must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")

    def squared(self) -> "QContext":
        """Same policy with base q^2 (most operator formulas live there)."""
        return QContext(self.q * self.q, self.tail_tol, self.max_terms)


def neg_power_index(value, q: float, rtol: float = TERMINATION_RTOL):
    """Return n >= 0 such that value == q**-n within relative ``rtol``, else None.

    Used both for terminating-series detection (upper parameters) and for
    the divide-by-zero guard on lower parameters.
    """
    if isinstance(value, complex):
        if abs(value.imag) > rtol * max(abs(value), 1.0):
            return None
        value = value.real
    if value <= 0.0:
        return None
    n = round(-math.log(value) / math.log(q))
    if n < 0:
        return None
    if abs(value - q ** (-n)) <= rtol * q ** (-n):
        return n
    return None


def qpoch(a, ctx: QContext, k=None):
    """q-shifted factorial (a;q)_k = prod_{i=0}^{k-1} (1 - a q^i).

    ``k`` is a nonnegative integer or None/inf for the infinite product.
    The infinite product stops at the first i with |a| q^i < tail_tol*(1-q);
    the discarded factors are 1 + eps_i with sum |eps_i| <= |a| q^i / (1-q)
    < tail_tol, so the relative truncation error is below ~tail_tol.
    """
    q = ctx.q
    if k is not None and k != math.inf:
        if k < 0 or k != int(k):
            raise DomainError(f"k must be a nonnegative integer or inf, got {k!r}")
        out = 1.0 + 0.0j if isinstance(a, complex) else 1.0
        qi = 1.0
        for _ in range(int(k)):
            out *= 1.0 - a * qi
            qi *= q
        return out
    threshold = ctx.tail_tol * (1.0 - q)
    out = 1.0 + 0.0j if isinstance(a, complex) else 1.0
    qi = 1.0
    for i in range(ctx.max_terms):
        if abs(a) * qi < threshold:
            return out
        out *= 1.0 - a * qi
        qi *= q
    raise ConvergenceError(
        f"(a;q)_inf with |a|={abs(a):.3g}, q={q} did not reach tail_tol "
        f"within {ctx.max_terms} factors"
    )


def qpoch_prod(params: Sequence, ctx: QContext, k=None):
    """(a1, ..., ar; q)_k, the product of the individual factorials."""
    out = 1.0
    for a in params:
        out = out * qpoch(a, ctx, k)
    return out


@dataclass(frozen=True)
class SeriesSpec:
    """One r_phi_s evaluation: upper/lower parameter tuples, argument, base."""

    upper: tuple
    lower: tuple
    z: complex
    base: QContext

    def __post_init__(self) -> None:
        object.__setattr__(self, "upper", tuple(self.upper))
        object.__setattr__(self, "lower", tuple(self.lower))

    def terminating_length(self):
        """Number of nonzero terms (n+1) when some upper parameter is q^-n."""
        hits = [
            n
            for n in (neg_power_index(a, self.base.q) for a in self.upper)
            if n is not None
        ]
        if not hits:
            return None
        return min(hits) + 1


def phi_rs(spec: SeriesSpec):
    """Basic hypergeometric sum r_phi_s(upper; lower; q, z).

    Term k carries the usual ((-1)^k q^{k(k-1)/2})^{1+s-r} factor.  A series
    flagged terminating (some upper parameter within 1e-12 relative of q^-n)
    is summed exactly over its n+1 terms; otherwise partial sums run until
    both the current term and a geometric tail estimate drop below tail_tol.
    """
    ctx = spec.base
    q = ctx.q
    r, s = len(spec.upper), len(spec.lower)
    e = 1 + s - r  # exponent of the (-1)^k q^{k(k-1)/2} factor
    n_terms = spec.terminating_length()

    # Lower parameters of the form q^-m make term m+1 divide by zero, which
    # is fine only if the series stops at or before term m.
    for b in spec.lower:
        m = neg_power_index(b, q)
        if m is not None and (n_terms is None or n_terms > m + 1):
            raise DomainError(
                f"lower parameter {b!r} equals q^-{m}; series does not "
                "terminate before the resulting zero denominator"
            )
    if e < 0 and n_terms is None:
        raise DomainError(
            f"{r}_phi_{s} with r > s+1 has zero radius of convergence unless "
            "it terminates"
        )

    total = 0.0 + 0.0j
    term = 1.0 + 0.0j
    qk = 1.0  # q^k
    for k in range(ctx.max_terms):
        total += term
        if n_terms is not None:
            if k + 1 >= n_terms:
                break
        else:
            # Conservative one-step ratio bound: |t_{j+1}/t_j| <= R for all
            # j >= k.  Each factor below is decreasing in k (for |b| q^k < 1),
            # so the tail is dominated by the geometric series with ratio R.
            ok = all(abs(b) * qk < 1.0 for b in spec.lower)
            if ok:
                ratio = abs(spec.z) * (q ** (k * e) if e else 1.0)
                for a in spec.upper:
                    ratio *= 1.0 + abs(a) * qk
                ratio /= 1.0 - q * qk  # the (q;q)_k update factor
                for b in spec.lower:
                    ratio /= 1.0 - abs(b) * qk
                if (
                    ratio < 1.0
                    and abs(term) <= ctx.tail_tol
                    and abs(term) * ratio / (1.0 - ratio) <= ctx.tail_tol
                ):
                    break
        factor = spec.z
        for a in spec.upper:
            factor *= 1.0 - a * qk
        factor /= 1.0 - q * qk
        for b in spec.lower:
            factor /= 1.0 - b * qk
        if e:
            factor *= (-qk) ** e
        term *= factor
        qk *= q
    else:
        raise ConvergenceError(
            f"{r}_phi_{s} did not converge within {ctx.max_terms} terms"
        )
    return total


def w87(a, b, c, d, e, f, ctx: QContext, z):
    """Very-well-poised 8W7(a; b,c,d,e,f; q, z).

    Expanding the abbreviation gives an 8_phi_7 whose well-poised pair
    (q*sqrt(a), -q*sqrt(a)) over (sqrt(a), -sqrt(a)) telescopes to
    (1 - a q^{2k})/(1 - a); the sum is evaluated in that collapsed form, so
    the principal-branch square roots only ever appear formally and cancel.
    Term k reads

        (1 - a q^{2k})/(1 - a) * (a,b,c,d,e,f;q)_k
        / ((q, aq/b, aq/c, aq/d, aq/e, aq/f; q)_k) * z^k.
    """
    q = ctx.q
    if a == 1:
        raise DomainError("w87 requires a != 1")
    numer = (b, c, d, e, f)
    denom = tuple(q * a / p for p in numer)

    # Termination: (a;q)_k dies for k > m when a = q^-m, and (p;q)_k dies
    # for k > n when p = q^-n.
    hits = []
    na = neg_power_index(a, q)
    if na is not None:
        hits.append(na + 1)
    for p in numer:
        n = neg_power_index(p, q)
        if n is not None:
            hits.append(n + 1)
    n_terms = min(hits) + 0 if hits else None
    for p in denom:
        m = neg_power_index(p, q)
        if m is not None and (n_terms is None or n_terms > m + 1):
            raise DomainError(
                f"w87 denominator parameter {p!r} equals q^-{m} before termination"
            )

    total = 0.0 + 0.0j
    u = 1.0 + 0.0j  # term without the (1-aq^{2k})/(1-a) factor
    qk = 1.0
    q2k = 1.0  # q^{2k}
    for k in range(ctx.max_terms):
        total += u * (1.0 - a * q2k) / (1.0 - a)
        if n_terms is not None:
            if k + 1 >= n_terms:
                break
        else:
            ok = all(abs(p) * qk < 1.0 for p in denom)
            if ok:
                ratio = abs(z) * (1.0 + abs(a) * qk)
                for p in numer:
                    ratio *= 1.0 + abs(p) * qk
                ratio /= 1.0 - q * qk
                for p in denom:
                    ratio /= 1.0 - abs(p) * qk
                vbound = (1.0 + abs(a) * q2k) / abs(1.0 - a)
                tk = abs(u) * vbound
                if ratio < 1.0 and tk <= ctx.tail_tol and tk * ratio / (1.0 - ratio) <= ctx.tail_tol:
                    break
        factor = z * (1.0 - a * qk)
        for p in numer:
            factor *= 1.0 - p * qk
        factor /= 1.0 - q * qk
        for p in denom:
            factor /= 1.0 - p * qk
        u *= factor
        qk *= q
        q2k *= q * q
    else:
        raise ConvergenceError(f"w87 did not converge within {ctx.max_terms} terms")
    return total


def _jackson_zero_to(f: Callable[[float], float], c: float, ctx: QContext):
    """int_0^c f d_q x = (1-q) c sum_k f(c q^k) q^k with a tail bound.

    The tail past index K is (1-q)|c| sum_{k>K} |f(c q^k)| q^k
    <= |c| M q^{K+1} where M bounds |f| near 0; M is estimated from f(0)
    and the last few sampled values.
    """
    if c == 0.0:
        return 0.0
    q = ctx.q
    f0 = abs(f(0.0))
    window = []
    total = 0.0
    qk = 1.0
    for k in range(ctx.max_terms):
        val = f(c * qk)
        total += val * qk
        window.append(abs(val))
        if len(window) > 6:
            window.pop(0)
        m_hat = max(max(window), f0)
        if k >= 5 and abs(c) * m_hat * qk * q <= ctx.tail_tol:
            return (1.0 - q) * c * total
        qk *= q
    raise ConvergenceError(
        f"Jackson q-integral tail did not reach tail_tol within {ctx.max_terms} terms"
    )


def q_integral(f: Callable[[float], float], a: float, b: float, ctx: QContext):
    """Jackson q-integral int_a^b f(x) d_q x.

    Defined as int_0^b - int_0^a with
    int_0^c f d_q x = (1-q) c sum_{k>=0} f(c q^k) q^k; admits c < 0.
    """
    return _jackson_zero_to(f, b, ctx) - _jackson_zero_to(f, a, ctx)
