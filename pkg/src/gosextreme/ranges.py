"""Limit distribution functions of the random generalized range and
midrange (max minus min, and their midpoint, under random sample size).

Each supported (family, m) case carries:

* the conditional df of the statistic given the index scale z, built
  from the two one-sided conditional limits; the reported value is its
  mixture against the index law, so a degenerate law reproduces the
  fixed-size limit and the unit-exponential law the geometric-size
  forms;
* the normalization convention (A_r, B_r, A_v, B_v) the simulator must
  apply, expressed through the per-sample-size constants (a, b, c, d).

When one side's scale dominates (eta = lim a_n/c_n equal to 0 or inf)
the statistic collapses onto a single mixed marginal and range and
midrange share one limit.  Unlisted (family, m, statistic) combinations
raise UnsupportedCaseError rather than guessing a reduction.

The cauchy family with m > 0 is special-cased to the published closed
forms 1 - e^(-1/r) and e^(1/v); they are kept verbatim (and pinned by
the acceptance checks) although they are decreasing in their argument,
so this one case is excluded from the df-shape and simulation
diagnostics.  It is only defined for the unit-exponential law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._integrate import integrate
from .distributions import DistributionModel, NormingConstants, norming_constants
from .montecarlo import IndexMode, SimulationReport, ks_distance, simulate_value_pairs
from .params import ExtremeSide, GosParams
from .randomindex import IndexLaw, _mix
from .specfun import log_gamma, reg_inc_gamma, reg_inc_gamma_upper

RANGE_ABS_TOL = 1e-7
_INNER_TOL = 1e-9


class UnsupportedCaseError(ValueError):
    """No published limit form for this family/m/statistic combination."""


@dataclass(frozen=True)
class RangeQuery:
    model: DistributionModel
    params: GosParams
    law: IndexLaw
    statistic: str  # "range" | "midrange"
    eta: float | None = None

    def __post_init__(self):
        if self.statistic not in ("range", "midrange"):
            raise ValueError(f"statistic must be range or midrange, got {self.statistic}")
        if self.eta is not None and (self.eta < 0.0 or math.isnan(self.eta)):
            raise ValueError("eta must lie in [0, +inf]")

    def resolved_eta(self) -> float:
        if self.eta is not None:
            return self.eta
        return eta_limit(self.model, self.params)


def _beta_normalizer(alpha: float, beta_p: float) -> float:
    return math.exp(log_gamma(alpha + beta_p) - log_gamma(alpha) - log_gamma(beta_p))


def eta_limit(model: DistributionModel, params: GosParams) -> float:
    """lim a_n / c_n for the family at the given m (may be 0 or +inf)."""
    m = params.m
    fam = model.family
    if fam == "cauchy":
        if m == 0.0:
            return 1.0
        return 0.0 if m > 0.0 else math.inf
    if fam in ("pareto", "lognormal", "exponential", "rayleigh"):
        return math.inf
    if fam == "uniform":
        if m == 0.0:
            return 1.0
        raise UnsupportedCaseError("uniform range limits are available for m = 0 only")
    if fam in ("beta", "power"):
        if fam == "beta":
            alpha, beta_p = model.params["alpha"], model.params["beta"]
        else:
            alpha, beta_p = model.params["alpha"], 1.0
        if not math.isclose(alpha, (m + 1.0) * beta_p, rel_tol=1e-12):
            raise UnsupportedCaseError(
                "beta/power range limits require alpha = (m+1)*beta"
            )
        c = _beta_normalizer(alpha, beta_p)
        return (beta_p / c) ** (1.0 / beta_p) * ((m + 1.0) * c / alpha) ** (1.0 / alpha)
    if fam == "normal":
        return math.sqrt(m + 1.0)
    if fam in ("logistic", "laplace"):
        return 1.0
    raise UnsupportedCaseError(f"no range limit implemented for family {fam!r}")


# --- conditional one-sided pieces -----------------------------------------
# Upper factor at index scale z: P_z(max-coordinate <= x) = 1 - Gamma_ell(z * cval)
# where cval is kappa(x)^(m+1) for the family's upper tail.


def _upper_factor(ell: float, z: float, cval: float) -> float:
    if cval == 0.0:
        return 1.0
    if math.isinf(cval):
        return 0.0
    return reg_inc_gamma_upper(ell, z * cval)


def _single_side_df(ell: float, z: float, cval: float) -> float:
    return _upper_factor(ell, z, cval)


def _frechet_pair_df(ell: float, z: float, t: float, abs_tol: float) -> float:
    # Both tails power-type with unit exponent (cauchy, m = 0, eta = 1):
    # integrate the max factor against the min-side conditional density
    # z y^-2 exp(-z/y) on y > 0, with the max factor vanishing at y >= t.
    if t <= 0.0:
        return 0.0

    def integrand(y: float) -> float:
        up = _upper_factor(ell, z, 1.0 / (t - y))
        if up == 0.0:
            return 0.0
        return up * z * y**-2 * math.exp(-z / y)

    return integrate(integrand, 0.0, t, abs_tol)


def _frechet_pair_mid_df(ell: float, z: float, v: float, abs_tol: float) -> float:
    # Midrange analogue: the max factor is evaluated at v + y.
    lo = max(0.0, -v)

    def integrand(y: float) -> float:
        up = _upper_factor(ell, z, 1.0 / (v + y))
        if up == 0.0:
            return 0.0
        return up * z * y**-2 * math.exp(-z / y)

    return integrate(integrand, lo, math.inf, abs_tol)


def _weibull_pair_df(
    ell: float, z: float, t: float, alpha: float, eta: float, midrange: bool, abs_tol: float
) -> float:
    # Both tails bounded-endpoint type with exponents (alpha, alpha) after
    # the m+1 power (beta with alpha = (m+1)beta, power, and uniform at
    # alpha = 1).  The min-side conditional density is z e^{-z tau} after
    # tau = w^alpha, and the max factor argument is
    # (-(t + w/eta))_+^alpha (range) or (w/eta - t)_+^alpha (midrange).
    def max_arg(tau: float) -> float:
        w = tau ** (1.0 / alpha)
        x = (w / eta - t) if midrange else -(t + w / eta)
        return x**alpha if x > 0.0 else 0.0

    if midrange:
        split = (t * eta) ** alpha if t > 0.0 else 0.0
    else:
        if t >= 0.0:
            return 1.0
        split = (-t * eta) ** alpha

    def integrand(tau: float) -> float:
        up = _upper_factor(ell, z, max_arg(tau))
        return up * z * math.exp(-z * tau) if up != 0.0 else 0.0

    if midrange:
        head = -math.expm1(-z * split) if split > 0.0 else 0.0
        return head + integrate(integrand, split, math.inf, abs_tol)
    head = math.exp(-z * split)
    return head + integrate(integrand, 0.0, split, abs_tol)


def _gumbel_pair_df(
    ell: float, z: float, t: float, mp1: float, eta: float, midrange: bool, abs_tol: float
) -> float:
    # Both tails exponential-type.  After tau = e^w the min-side density
    # is z e^{-z tau} and the max factor argument is
    # e^{-t(m+1)} tau^{-(m+1)/eta} (range) or e^{-t(m+1)} tau^{+(m+1)/eta}
    # (midrange).
    base = math.exp(-t * mp1)
    expo = mp1 / eta if midrange else -mp1 / eta

    def integrand(tau: float) -> float:
        up = _upper_factor(ell, z, base * tau**expo)
        return up * z * math.exp(-z * tau) if up != 0.0 else 0.0

    return integrate(integrand, 0.0, math.inf, abs_tol)


# --- case dispatch ---------------------------------------------------------


def _conditional_df(query: RangeQuery, t: float, abs_tol: float):
    """Returns g with g(z) = P_z(statistic <= t), or a literal callable
    marked exact for the published cauchy m > 0 forms."""
    params, model = query.params, query.model
    fam, m, ell = model.family, params.m, params.ell
    mp1 = m + 1.0
    midrange = query.statistic == "midrange"
    eta = query.resolved_eta()

    if fam == "cauchy" and m > 0.0:
        raise AssertionError("handled before dispatch")

    if math.isinf(eta):
        # max side dominates; both statistics share the mixed max marginal
        if fam in ("lognormal", "exponential", "rayleigh"):
            cval = math.exp(-t * mp1)
        elif fam == "cauchy":
            cval = t ** -mp1 if t > 0.0 else math.inf
        elif fam == "pareto":
            sigma = model.params["sigma"]
            cval = t ** (-sigma * mp1) if t > 0.0 else math.inf
        else:
            raise UnsupportedCaseError(f"{fam} with eta = inf is not a listed case")
        return lambda z: _single_side_df(ell, z, cval)

    if fam == "cauchy":  # m == 0, eta == 1
        if midrange:
            return lambda z: _frechet_pair_mid_df(ell, z, t, abs_tol)
        return lambda z: _frechet_pair_df(ell, z, t, abs_tol)
    if fam == "uniform":
        if m != 0.0:
            raise UnsupportedCaseError("uniform range limits are m = 0 only")
        return lambda z: _weibull_pair_df(ell, z, t, 1.0, 1.0, midrange, abs_tol)
    if fam in ("beta", "power"):
        alpha = model.params["alpha"]
        return lambda z: _weibull_pair_df(ell, z, t, alpha, eta, midrange, abs_tol)
    if fam in ("normal", "logistic", "laplace"):
        arg = t
        if fam == "normal" and midrange and m == 0.0 and params.k == 1.0:
            # The published closed form for this case normalizes the
            # midrange by a_n rather than a_n/2, which doubles the
            # argument of the general integral.
            arg = 2.0 * t
        return lambda z: _gumbel_pair_df(ell, z, arg, mp1, eta, midrange, abs_tol)
    raise UnsupportedCaseError(f"no {query.statistic} limit for family {fam!r}")


def _cauchy_mpos_value(statistic: str, t: float) -> float:
    if statistic == "range":
        return -math.expm1(-1.0 / t) if t > 0.0 else 0.0
    return math.exp(1.0 / t) if t < 0.0 else 1.0


def range_limit_df(query: RangeQuery, t: float) -> float:
    """P(normalized generalized range <= t) in the query's index limit."""
    if query.statistic != "range":
        raise ValueError("query.statistic must be 'range'")
    return _limit_df(query, t)


def midrange_limit_df(query: RangeQuery, v: float) -> float:
    """P(normalized generalized midrange <= v) in the query's index limit."""
    if query.statistic != "midrange":
        raise ValueError("query.statistic must be 'midrange'")
    return _limit_df(query, v)


def _limit_df(query: RangeQuery, t: float) -> float:
    if query.model.family == "cauchy" and query.params.m > 0.0:
        if query.law.kind != "unit_exponential":
            raise UnsupportedCaseError(
                "the cauchy m > 0 forms are published for the geometric "
                "(unit-exponential) index law only"
            )
        return _cauchy_mpos_value(query.statistic, t)
    inner_tol = min(_INNER_TOL, RANGE_ABS_TOL / 10.0)
    g = _conditional_df(query, t, inner_tol)
    value = _mix(g, query.law, RANGE_ABS_TOL)
    return min(max(value, 0.0), 1.0)


def normal_range_closed_form(r: float) -> float:
    """Piecewise closed form of the standard-normal (m=0, k=1) random
    range limit: f1 below ln 4, 2/3 at ln 4, f2 above."""
    ln4 = math.log(4.0)
    if r == ln4:
        return 2.0 / 3.0
    e = 4.0 * math.exp(-r)
    if r < ln4:
        root = math.sqrt(e - 1.0)
        return (e / root * math.atan(root) - 1.0) / (e - 1.0)
    if e < 1e-9:
        # 1 - root underflows; use the expansion 1 - (e/2) ln(4/e) + O(e^2)
        return (1.0 - 0.5 * e * math.log(4.0 / e)) / (1.0 - e)
    root = math.sqrt(1.0 - e)
    return (1.0 - (e / 2.0) / root * math.log((1.0 + root) / (1.0 - root))) / (1.0 - e)


def normal_range_integral(r: float, abs_tol: float = 1e-9) -> float:
    """Quadrature form int_0^inf y^2 / (y^2 + y + e^-r)^2 dy of the same
    limit, kept as an independent numeric route."""
    c = math.exp(-r)

    def integrand(y: float) -> float:
        den = y * y + y + c
        return y * y / (den * den)

    return integrate(integrand, 0.0, math.inf, abs_tol)


def normal_midrange_integral(v: float, abs_tol: float = 1e-9) -> float:
    """Quadrature form 1 - int_0^inf dy / (y (e^{2v}+1) + 1)^2."""
    slope = math.exp(2.0 * v) + 1.0

    def integrand(y: float) -> float:
        den = y * slope + 1.0
        return 1.0 / (den * den)

    return 1.0 - integrate(integrand, 0.0, math.inf, abs_tol)


# --- simulation conventions and overlay ------------------------------------


def statistic_normalization(
    query: RangeQuery, consts: NormingConstants
) -> tuple[float, float]:
    """(A, B) so that the simulator tallies (statistic - B) / A.

    Default convention: A_r = a, B_r = b - d for the range and
    A_v = a/2, B_v = (b+d)/2 for the midrange.  Per-case overrides follow
    the published examples: pure power-tail cases center at 0, the
    cauchy m > 0 case rescales by the dominant lower-side constant, and
    the normal m=0, k=1 midrange uses A_v = a.
    """
    fam, m = query.model.family, query.params.m
    a, b, c, d = consts.a, consts.b, consts.c, consts.d
    midrange = query.statistic == "midrange"
    if fam == "cauchy":
        if m > 0.0:
            return (c / 2.0, 0.0) if midrange else (c, 0.0)
        return (a / 2.0, 0.0) if midrange else (a, 0.0)
    if fam == "pareto":
        return (a / 2.0, 0.0) if midrange else (a, 0.0)
    if fam == "normal" and midrange and m == 0.0 and query.params.k == 1.0:
        return a, (b + d) / 2.0
    if midrange:
        return a / 2.0, (b + d) / 2.0
    return a, b - d


def run_statistic_sim(
    query: RangeQuery,
    mode: IndexMode,
    grid,
    replications: int,
    seed: int,
) -> SimulationReport:
    """Simulate the normalized range/midrange and compare with the
    analytic limit of `query` on the grid."""
    params, model = query.params, query.model
    consts = norming_constants(model, params)
    mins, maxs = simulate_value_pairs(
        params, model, mode,
        (ExtremeSide.LOWER, 1), (ExtremeSide.UPPER, 1),
        replications, seed,
    )
    scale, center = statistic_normalization(query, consts)
    if query.statistic == "range":
        values = (maxs - mins - center) / scale
    else:
        values = ((maxs + mins) / 2.0 - center) / scale

    grid = tuple(float(g) for g in grid)
    m_f = float(replications)
    empirical, analytic, ses = [], [], []
    for t in grid:
        p_hat = float(np.count_nonzero(values < t)) / m_f
        empirical.append(p_hat)
        ses.append(math.sqrt(p_hat * (1.0 - p_hat) / m_f))
        analytic.append(_limit_df(query, t))
    config = {
        "m": params.m, "k": params.k, "n": params.n,
        "model": model.label(), "statistic": query.statistic,
        "index_mode": mode.label(), "law": query.law.label(),
        "replications": replications, "seed": seed, "grid_size": len(grid),
    }
    return SimulationReport(
        config=config, grid=grid,
        empirical=tuple(empirical), analytic=tuple(analytic),
        standard_errors=tuple(ses),
        sup_distance=ks_distance(empirical, analytic), seed=seed,
    )
