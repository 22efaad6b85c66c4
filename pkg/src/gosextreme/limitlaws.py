"""Attraction-domain transforms and the three bivariate limit families.

The transforms map a normalized coordinate into the nonneg argument of
the limit law:

  upper side (max-type):   frechet(a): x^(-a) on x>0, +inf otherwise
                           weibull(a): (-x)^a on x<=0, 0 otherwise
                           gumbel:     e^(-x)
  lower side (min-type):   frechet(b): (-x)^(-b) on x<0, +inf otherwise
                           weibull(b): x^b on x>=0, 0 otherwise
                           gumbel:     e^x

Note the published domain annotations for the upper Frechet/Weibull pair
are swapped relative to these (with them the limit expressions fail to
be distribution functions); the standard domains above are used.

Limit families, with R_r = ell + r - 1:

  upper-upper (s < r, both ranks from the top), arguments kappa1 >= kappa2
  when x <= y because the transforms are nonincreasing:

      1 - Gamma_{R_r}(k1) - (1/Gamma(R_r)) *
          int_{k1}^{inf} I_{k2/u}(R_s, R_r - R_s) u^{R_r-1} e^{-u} du,

  with k_i = kappa_i^(m+1); on x >= y it collapses to the shallower
  marginal 1 - Gamma_{R_s}(k2).

  lower-lower (r < s, from the bottom; no m, k dependence):

      Gamma_s(rho2) on x >= y, else
      (1/(r-1)!) int_0^{rho1} Gamma_{s-r}(rho2 - u) u^{r-1} e^{-u} du.

  lower-upper: the product Gamma_r(rho1) * [1 - Gamma_{R_s}(kappa2^(m+1))].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._integrate import integrate
from .params import ExtremeSide, GosParams
from .specfun import log_gamma, reg_inc_beta, reg_inc_gamma, reg_inc_gamma_upper

OMEGA_ABS_TOL = 1e-10


@dataclass(frozen=True)
class TailTransform:
    """One side's attraction type: kind in {frechet, weibull, gumbel}."""

    side: ExtremeSide
    kind: str
    alpha: float | None = None

    def __post_init__(self):
        if self.kind not in ("frechet", "weibull", "gumbel"):
            raise ValueError(f"unknown tail kind {self.kind!r}")
        if self.kind == "gumbel":
            if self.alpha is not None:
                raise ValueError("gumbel transform takes no exponent")
        elif self.alpha is None or not self.alpha > 0.0:
            raise ValueError(f"{self.kind} transform requires alpha > 0")

    def value(self, x: float) -> float:
        if self.side == ExtremeSide.UPPER:
            return kappa(self, x)
        return rho(self, x)


def kappa(transform: TailTransform, x: float) -> float:
    """Upper-side transform; nonincreasing in x, values in [0, +inf]."""
    if transform.side != ExtremeSide.UPPER:
        raise ValueError("kappa expects an upper-side transform")
    if transform.kind == "frechet":
        return x ** -transform.alpha if x > 0.0 else math.inf
    if transform.kind == "weibull":
        return (-x) ** transform.alpha if x <= 0.0 else 0.0
    return math.exp(-x)


def rho(transform: TailTransform, x: float) -> float:
    """Lower-side transform; nondecreasing in x, values in [0, +inf]."""
    if transform.side != ExtremeSide.LOWER:
        raise ValueError("rho expects a lower-side transform")
    if transform.kind == "frechet":
        return (-x) ** -transform.alpha if x < 0.0 else math.inf
    if transform.kind == "weibull":
        return x ** transform.alpha if x >= 0.0 else 0.0
    return math.exp(x)


def _upper_tail_weight(shape: float, arg: float) -> float:
    """1 - Gamma_shape(arg) with the +inf convention."""
    if math.isinf(arg):
        return 0.0
    return reg_inc_gamma_upper(shape, arg)


def omega_uu_powered(
    params: GosParams, r: int, s: int, k1: float, k2: float, abs_tol: float = OMEGA_ABS_TOL
) -> float:
    """Upper-upper family with the gamma/beta arguments passed directly.

    k1, k2 are the already-powered (and possibly index-scaled) values
    kappa_i^(m+1); the mixture layer multiplies them by z before calling.
    The x <= y branch corresponds to k1 >= k2.
    """
    if not s < r:
        raise ValueError(f"upper-upper requires s < r, got r={r}, s={s}")
    if k1 < 0.0 or k2 < 0.0 or math.isnan(k1) or math.isnan(k2):
        raise ValueError("powered transform values must be in [0, +inf]")
    rr = params.rank_weight(r)
    rs = params.rank_weight(s)
    if k1 <= k2:
        # x >= y: the joint collapses onto the shallower marginal.
        return _upper_tail_weight(rs, k2)
    if math.isinf(k1):
        return 0.0
    head = _upper_tail_weight(rr, k1)
    if k2 == 0.0:
        return head
    log_norm = log_gamma(rr)
    bshape_a, bshape_b = rs, rr - rs

    def integrand(u: float) -> float:
        ratio = k2 / u
        if ratio >= 1.0:
            ratio = 1.0
        beta_factor = reg_inc_beta(ratio, bshape_a, bshape_b)
        if beta_factor == 0.0:
            return 0.0
        return beta_factor * math.exp((rr - 1.0) * math.log(u) - u - log_norm)

    tail = integrate(integrand, k1, math.inf, abs_tol)
    return min(max(head - tail, 0.0), 1.0)


def omega_uu(
    params: GosParams,
    r: int,
    s: int,
    kappa1: float,
    kappa2: float,
    abs_tol: float = OMEGA_ABS_TOL,
) -> float:
    """Upper-upper limit df evaluated at transform values (kappa1, kappa2)."""
    mp1 = params.m + 1.0
    return omega_uu_powered(params, r, s, kappa1**mp1, kappa2**mp1, abs_tol)


def omega_ll(
    r: int, s: int, rho1: float, rho2: float, abs_tol: float = OMEGA_ABS_TOL
) -> float:
    """Lower-lower limit df at transform values (rho1, rho2); r < s."""
    if not r < s:
        raise ValueError(f"lower-lower requires r < s, got r={r}, s={s}")
    if rho1 < 0.0 or rho2 < 0.0 or math.isnan(rho1) or math.isnan(rho2):
        raise ValueError("transform values must be in [0, +inf]")
    if rho1 >= rho2:
        # x >= y branch: the deeper coordinate is inactive.
        return reg_inc_gamma(s, rho2) if not math.isinf(rho2) else 1.0
    if rho1 == 0.0:
        return 0.0
    log_norm = log_gamma(float(r))
    diff = s - r

    def integrand(u: float) -> float:
        inner = rho2 - u
        gam = 1.0 if math.isinf(inner) else reg_inc_gamma(diff, max(inner, 0.0))
        if gam == 0.0:
            return 0.0
        if u <= 0.0:
            return gam if r == 1 else 0.0
        return gam * math.exp((r - 1.0) * math.log(u) - u - log_norm)

    value = integrate(integrand, 0.0, rho1, abs_tol)
    return min(max(value, 0.0), 1.0)


def omega_lu_product(
    params: GosParams, r: int, s: int, rho1: float, kappa2: float
) -> float:
    """Lower-upper limit: product of the two univariate limit marginals."""
    if r < 1 or s < 1:
        raise ValueError("ranks must be >= 1")
    lower = 1.0 if math.isinf(rho1) else reg_inc_gamma(float(r), rho1)
    upper = _upper_tail_weight(params.rank_weight(s), kappa2 ** (params.m + 1.0))
    return lower * upper


def upper_marginal_limit(params: GosParams, r: int, kappa_value: float) -> float:
    """Fixed-size limit df of the r-th extreme from the top."""
    return _upper_tail_weight(params.rank_weight(r), kappa_value ** (params.m + 1.0))


def lower_marginal_limit(r: int, rho_value: float) -> float:
    """Fixed-size limit df of the r-th extreme from the bottom."""
    if math.isinf(rho_value):
        return 1.0
    return reg_inc_gamma(float(r), rho_value)
