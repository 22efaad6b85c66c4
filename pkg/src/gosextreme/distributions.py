"""Parent distribution families with cdf, quantile, tail types and
normalizing constants for the extremes of the m-GOS model.

Families (spec string grammar in parentheses, case-insensitive):

    cauchy, normal, logistic, laplace, lognormal     -- no parameters
    pareto(sigma=...), exponential(sigma=...), rayleigh(sigma=...)
    uniform(theta=...)                               -- uniform on (-theta, theta)
    beta(alpha=..., beta=...), power(alpha=...)

All cdf/quantile pairs are closed forms except the beta family and the
normal/lognormal quantiles, which go through scipy.special.  Values
accept floats or numpy arrays.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special as sc

from .limitlaws import TailTransform
from .params import ExtremeSide, GosParams


class NoAttractionError(ValueError):
    """The requested family/side has no usable attraction setup here."""


@dataclass(frozen=True)
class NormingConstants:
    """(a, b) normalize the upper extreme, (c, d) the lower one."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not (self.a > 0.0 and self.c > 0.0):
            raise ValueError("scale constants must be positive")


@dataclass(frozen=True)
class _Family:
    name: str
    param_names: tuple[str, ...]
    cdf: Callable
    sf: Callable  # survival 1 - F, cancellation-free in the upper tail
    quantile: Callable
    support: Callable
    upper_tail: Callable
    lower_tail: Callable
    # Tail-accurate inverses used when building normalizing constants:
    # isf(u) = F^-1(1-u); upper_gap(u) = right_end - F^-1(1-u);
    # lower_gap(p) = F^-1(p) - left_end.  None falls back to `quantile`.
    isf: Callable | None = None
    upper_gap: Callable | None = None
    lower_gap: Callable | None = None


@dataclass(frozen=True)
class DistributionModel:
    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        spec = _FAMILIES.get(self.family)
        if spec is None:
            raise ValueError(
                f"unknown family {self.family!r}; valid families: {valid_families()}"
            )
        missing = [p for p in spec.param_names if p not in self.params]
        extra = [p for p in self.params if p not in spec.param_names]
        if missing or extra:
            raise ValueError(
                f"{self.family} takes parameters {list(spec.param_names)}, "
                f"got {sorted(self.params)}"
            )
        for name, value in self.params.items():
            if not value > 0.0:
                raise ValueError(f"{self.family} parameter {name} must be positive")

    def _spec(self) -> _Family:
        return _FAMILIES[self.family]

    def cdf(self, x):
        return cdf(self, x)

    def quantile(self, p):
        return quantile(self, p)

    def support(self) -> tuple[float, float]:
        return self._spec().support(self.params)

    def label(self) -> str:
        if not self.params:
            return self.family
        inner = ",".join(f"{k}={v:g}" for k, v in sorted(self.params.items()))
        return f"{self.family}({inner})"


def cdf(model: DistributionModel, x):
    """F(x); array-aware, clamped to [0, 1] by construction."""
    return model._spec().cdf(model.params, x)


def survival(model: DistributionModel, x):
    """1 - F(x) without upper-tail cancellation."""
    return model._spec().sf(model.params, x)


def quantile(model: DistributionModel, p):
    """F^{-1}(p) for p strictly inside (0, 1)."""
    arr = np.asarray(p, dtype=float)
    if np.any((arr <= 0.0) | (arr >= 1.0)):
        raise ValueError("quantile requires probabilities strictly in (0, 1)")
    return model._spec().quantile(model.params, p)


def tail_transform(model: DistributionModel, side: ExtremeSide) -> TailTransform:
    """Attraction type (the kappa/rho transform) of the given side."""
    spec = model._spec()
    maker = spec.upper_tail if side == ExtremeSide.UPPER else spec.lower_tail
    kind, alpha = maker(model.params)
    return TailTransform(side=side, kind=kind, alpha=alpha)


# ---------------------------------------------------------------------------
# Family table


def _cauchy_cdf(_, x):
    return 0.5 + np.arctan(x) / math.pi


def _cauchy_sf(_, x):
    x = np.asarray(x, dtype=float)
    pos = x > 0.0
    # atan(1/x)/pi avoids the 0.5 - atan(x)/pi cancellation far out.
    return np.where(
        pos,
        np.arctan(1.0 / np.where(pos, x, 1.0)) / math.pi,
        0.5 - np.arctan(x) / math.pi,
    )


def _cauchy_q(_, p):
    return np.tan(math.pi * (np.asarray(p, dtype=float) - 0.5))


def _pareto_cdf(prm, x):
    x = np.asarray(x, dtype=float)
    return np.where(x >= 1.0, -np.expm1(-prm["sigma"] * np.log(np.maximum(x, 1.0))), 0.0)


def _pareto_q(prm, p):
    return np.power(1.0 - np.asarray(p, dtype=float), -1.0 / prm["sigma"])


def _uniform_cdf(prm, x):
    t = prm["theta"]
    return np.clip((np.asarray(x, dtype=float) + t) / (2.0 * t), 0.0, 1.0)


def _uniform_q(prm, p):
    t = prm["theta"]
    return -t + 2.0 * t * np.asarray(p, dtype=float)


def _beta_cdf(prm, x):
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    return sc.betainc(prm["alpha"], prm["beta"], x)


def _beta_q(prm, p):
    return sc.betaincinv(prm["alpha"], prm["beta"], np.asarray(p, dtype=float))


def _power_cdf(prm, x):
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    return np.power(x, prm["alpha"])


def _power_q(prm, p):
    return np.power(np.asarray(p, dtype=float), 1.0 / prm["alpha"])


def _normal_cdf(_, x):
    return sc.ndtr(np.asarray(x, dtype=float))


def _normal_q(_, p):
    return sc.ndtri(np.asarray(p, dtype=float))


def _logistic_cdf(_, x):
    return sc.expit(np.asarray(x, dtype=float))


def _logistic_q(_, p):
    p = np.asarray(p, dtype=float)
    return np.log(p) - np.log1p(-p)


def _laplace_cdf(_, x):
    x = np.asarray(x, dtype=float)
    neg = np.minimum(x, 0.0)
    return np.where(x < 0.0, 0.5 * np.exp(neg), 1.0 - 0.5 * np.exp(-np.maximum(x, 0.0)))


def _laplace_q(_, p):
    p = np.asarray(p, dtype=float)
    return np.where(p < 0.5, np.log(2.0 * p), -np.log(2.0 * (1.0 - p)))


def _lognormal_cdf(_, x):
    x = np.asarray(x, dtype=float)
    pos = x > 0.0
    return np.where(pos, sc.ndtr(np.log(np.where(pos, x, 1.0))), 0.0)


def _lognormal_q(_, p):
    return np.exp(sc.ndtri(np.asarray(p, dtype=float)))


def _exponential_cdf(prm, x):
    x = np.asarray(x, dtype=float)
    return np.where(x >= 0.0, -np.expm1(-np.maximum(x, 0.0) / prm["sigma"]), 0.0)


def _exponential_q(prm, p):
    return -prm["sigma"] * np.log1p(-np.asarray(p, dtype=float))


def _rayleigh_cdf(prm, x):
    x = np.asarray(x, dtype=float)
    s2 = 2.0 * prm["sigma"] ** 2
    return np.where(x >= 0.0, -np.expm1(-np.square(np.maximum(x, 0.0)) / s2), 0.0)


def _rayleigh_q(prm, p):
    return prm["sigma"] * np.sqrt(-2.0 * np.log1p(-np.asarray(p, dtype=float)))




def _pareto_sf(prm, x):
    x = np.asarray(x, dtype=float)
    return np.where(x >= 1.0, np.power(np.maximum(x, 1.0), -prm["sigma"]), 1.0)


def _uniform_sf(prm, x):
    t = prm["theta"]
    return np.clip((t - np.asarray(x, dtype=float)) / (2.0 * t), 0.0, 1.0)


def _beta_sf(prm, x):
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    return sc.betainc(prm["beta"], prm["alpha"], 1.0 - x)


def _power_sf(prm, x):
    x = np.asarray(x, dtype=float)
    out = -np.expm1(prm["alpha"] * np.log(np.clip(x, 1e-310, 1.0)))
    return np.where(x <= 0.0, 1.0, np.where(x >= 1.0, 0.0, out))


def _normal_sf(_, x):
    return sc.ndtr(-np.asarray(x, dtype=float))


def _logistic_sf(_, x):
    return sc.expit(-np.asarray(x, dtype=float))


def _laplace_sf(_, x):
    x = np.asarray(x, dtype=float)
    return np.where(
        x >= 0.0, 0.5 * np.exp(-np.maximum(x, 0.0)), 1.0 - 0.5 * np.exp(np.minimum(x, 0.0))
    )


def _lognormal_sf(_, x):
    x = np.asarray(x, dtype=float)
    pos = x > 0.0
    return np.where(pos, sc.ndtr(-np.log(np.where(pos, x, 1.0))), 1.0)


def _exponential_sf(prm, x):
    x = np.asarray(x, dtype=float)
    return np.where(x >= 0.0, np.exp(-np.maximum(x, 0.0) / prm["sigma"]), 1.0)


def _rayleigh_sf(prm, x):
    x = np.asarray(x, dtype=float)
    s2 = 2.0 * prm["sigma"] ** 2
    return np.where(x >= 0.0, np.exp(-np.square(np.maximum(x, 0.0)) / s2), 1.0)




def _cauchy_isf(_, u):
    u = np.asarray(u, dtype=float)
    small = u < 0.25
    return np.where(
        small,
        1.0 / np.tan(math.pi * np.where(small, u, 0.25)),
        np.tan(math.pi * (0.5 - u)),
    )


def _pareto_isf(prm, u):
    return np.power(np.asarray(u, dtype=float), -1.0 / prm["sigma"])


def _normal_isf(_, u):
    return -sc.ndtri(np.asarray(u, dtype=float))


def _lognormal_isf(_, u):
    return np.exp(-sc.ndtri(np.asarray(u, dtype=float)))


def _logistic_isf(_, u):
    u = np.asarray(u, dtype=float)
    return np.log1p(-u) - np.log(u)


def _laplace_isf(_, u):
    u = np.asarray(u, dtype=float)
    return np.where(u < 0.5, -np.log(2.0 * np.minimum(u, 0.5)), np.log(2.0 * (1.0 - u)))


def _exponential_isf(prm, u):
    return -prm["sigma"] * np.log(np.asarray(u, dtype=float))


def _rayleigh_isf(prm, u):
    return prm["sigma"] * np.sqrt(-2.0 * np.log(np.asarray(u, dtype=float)))


def _uniform_isf(prm, u):
    return prm["theta"] * (1.0 - 2.0 * np.asarray(u, dtype=float))


def _beta_isf(prm, u):
    return 1.0 - sc.betaincinv(prm["beta"], prm["alpha"], np.asarray(u, dtype=float))


def _power_isf(prm, u):
    return np.exp(np.log1p(-np.asarray(u, dtype=float)) / prm["alpha"])


def _uniform_upper_gap(prm, u):
    return 2.0 * prm["theta"] * np.asarray(u, dtype=float)


def _beta_upper_gap(prm, u):
    return sc.betaincinv(prm["beta"], prm["alpha"], np.asarray(u, dtype=float))


def _power_upper_gap(prm, u):
    return -np.expm1(np.log1p(-np.asarray(u, dtype=float)) / prm["alpha"])


def _uniform_lower_gap(prm, p):
    return 2.0 * prm["theta"] * np.asarray(p, dtype=float)


def _beta_lower_gap(prm, p):
    return sc.betaincinv(prm["alpha"], prm["beta"], np.asarray(p, dtype=float))


def _power_lower_gap(prm, p):
    return np.power(np.asarray(p, dtype=float), 1.0 / prm["alpha"])


def _pareto_lower_gap(prm, p):
    return np.expm1(-np.log1p(-np.asarray(p, dtype=float)) / prm["sigma"])


def _exponential_lower_gap(prm, p):
    return -prm["sigma"] * np.log1p(-np.asarray(p, dtype=float))


def _rayleigh_lower_gap(prm, p):
    return prm["sigma"] * np.sqrt(-2.0 * np.log1p(-np.asarray(p, dtype=float)))


_INF = math.inf

_FAMILIES: dict[str, _Family] = {
    "cauchy": _Family(
        "cauchy", (), _cauchy_cdf, _cauchy_sf, _cauchy_q, lambda _: (-_INF, _INF),
        lambda _: ("frechet", 1.0), lambda _: ("frechet", 1.0),
        isf=_cauchy_isf,
    ),
    "pareto": _Family(
        "pareto", ("sigma",), _pareto_cdf, _pareto_sf, _pareto_q, lambda _: (1.0, _INF),
        lambda prm: ("frechet", prm["sigma"]), lambda _: ("weibull", 1.0),
        isf=_pareto_isf, lower_gap=_pareto_lower_gap,
    ),
    "uniform": _Family(
        "uniform", ("theta",), _uniform_cdf, _uniform_sf, _uniform_q,
        lambda prm: (-prm["theta"], prm["theta"]),
        lambda _: ("weibull", 1.0), lambda _: ("weibull", 1.0),
        isf=_uniform_isf, upper_gap=_uniform_upper_gap, lower_gap=_uniform_lower_gap,
    ),
    "beta": _Family(
        "beta", ("alpha", "beta"), _beta_cdf, _beta_sf, _beta_q, lambda _: (0.0, 1.0),
        lambda prm: ("weibull", prm["beta"]), lambda prm: ("weibull", prm["alpha"]),
        isf=_beta_isf, upper_gap=_beta_upper_gap, lower_gap=_beta_lower_gap,
    ),
    "power": _Family(
        "power", ("alpha",), _power_cdf, _power_sf, _power_q, lambda _: (0.0, 1.0),
        lambda _: ("weibull", 1.0), lambda prm: ("weibull", prm["alpha"]),
        isf=_power_isf, upper_gap=_power_upper_gap, lower_gap=_power_lower_gap,
    ),
    "normal": _Family(
        "normal", (), _normal_cdf, _normal_sf, _normal_q, lambda _: (-_INF, _INF),
        lambda _: ("gumbel", None), lambda _: ("gumbel", None),
        isf=_normal_isf,
    ),
    "logistic": _Family(
        "logistic", (), _logistic_cdf, _logistic_sf, _logistic_q, lambda _: (-_INF, _INF),
        lambda _: ("gumbel", None), lambda _: ("gumbel", None),
        isf=_logistic_isf,
    ),
    "laplace": _Family(
        "laplace", (), _laplace_cdf, _laplace_sf, _laplace_q, lambda _: (-_INF, _INF),
        lambda _: ("gumbel", None), lambda _: ("gumbel", None),
        isf=_laplace_isf,
    ),
    "lognormal": _Family(
        "lognormal", (), _lognormal_cdf, _lognormal_sf, _lognormal_q, lambda _: (0.0, _INF),
        lambda _: ("gumbel", None), lambda _: ("gumbel", None),
        isf=_lognormal_isf,
    ),
    "exponential": _Family(
        "exponential", ("sigma",), _exponential_cdf, _exponential_sf, _exponential_q,
        lambda _: (0.0, _INF),
        lambda _: ("gumbel", None), lambda _: ("weibull", 1.0),
        isf=_exponential_isf, lower_gap=_exponential_lower_gap,
    ),
    "rayleigh": _Family(
        "rayleigh", ("sigma",), _rayleigh_cdf, _rayleigh_sf, _rayleigh_q, lambda _: (0.0, _INF),
        lambda _: ("gumbel", None), lambda _: ("weibull", 2.0),
        isf=_rayleigh_isf, lower_gap=_rayleigh_lower_gap,
    ),
}


def valid_families() -> str:
    parts = []
    for name, spec in _FAMILIES.items():
        if spec.param_names:
            parts.append(f"{name}({', '.join(p + '=...' for p in spec.param_names)})")
        else:
            parts.append(name)
    return ", ".join(parts)


_SPEC_RE = re.compile(r"^\s*([a-zA-Z_]+)\s*(?:\(\s*(.*?)\s*\))?\s*$")


def parse_model(text: str) -> DistributionModel:
    """Parse the CLI grammar name(p1=..., p2=...), case-insensitive."""
    match = _SPEC_RE.match(text)
    if not match:
        raise ValueError(
            f"cannot parse distribution {text!r}; valid families: {valid_families()}"
        )
    name = match.group(1).lower()
    if name not in _FAMILIES:
        raise ValueError(
            f"unknown family {name!r}; valid families: {valid_families()}"
        )
    params = {}
    body = match.group(2)
    if body:
        for piece in body.split(","):
            if "=" not in piece:
                raise ValueError(
                    f"malformed parameter {piece!r} in {text!r}; expected name=value"
                )
            key, value = piece.split("=", 1)
            try:
                params[key.strip().lower()] = float(value)
            except ValueError as exc:
                raise ValueError(f"bad numeric value in {piece!r}") from exc
    return DistributionModel(family=name, params=params)


# ---------------------------------------------------------------------------
# Normalizing constants


def _isf(model: DistributionModel, u: float) -> float:
    """F^{-1}(1 - u) from the tail probability u itself."""
    spec = model._spec()
    if spec.isf is not None:
        return float(spec.isf(model.params, u))
    return float(quantile(model, 1.0 - u))


def _lm_prob(mp1: float, p: float) -> float:
    """Probability level of F matching level p of G = L_m; small-p safe."""
    return -math.expm1(math.log1p(-p) / mp1)


def norming_constants(model: DistributionModel, params: GosParams) -> NormingConstants:
    """Normalizing constants for both extremes at the model's tail types.

    Built so that N * Lbar_m(a x + b) -> kappa(x)^(m+1) on the upper side
    and N * L_m(c x + d) -> rho(x) on the lower side, using the closed
    form for the normal family and the quantile construction otherwise.
    The gumbel-type scale uses the offset at tail mass u/e, which keeps
    the (m+1)-powered convergence target; endpoint distances come from
    the per-family gap forms so constants stay exact at large n.
    """
    if params.n < 2:
        raise NoAttractionError("need n >= 2 for normalizing constants")
    mp1 = params.m + 1.0
    big_n = params.big_n
    spec = model._spec()

    if model.family == "beta":
        alpha, beta_p = model.params["alpha"], model.params["beta"]
        if not math.isclose(alpha, mp1 * beta_p, rel_tol=1e-12):
            raise NoAttractionError(
                "beta lower attraction is set up only for alpha = (m+1)*beta; "
                f"got alpha={alpha}, beta={beta_p}, m={params.m}"
            )

    if model.family == "normal":
        return _normal_norming(params)

    lo, hi = model.support()
    u = big_n ** (-1.0 / mp1)  # tail mass with q_F(1-u) = G^{-1}(1 - 1/N)
    up = tail_transform(model, ExtremeSide.UPPER)
    if up.kind == "frechet":
        b = 0.0
        a = _isf(model, u)
    elif up.kind == "weibull":
        if not math.isfinite(hi):
            raise NoAttractionError(f"{model.family} has no finite right endpoint")
        b = hi
        a = float(spec.upper_gap(model.params, u))
    else:  # gumbel
        b = _isf(model, u)
        a = _isf(model, u / math.e) - b

    low = tail_transform(model, ExtremeSide.LOWER)
    p1 = _lm_prob(mp1, 1.0 / big_n)
    pe = _lm_prob(mp1, 1.0 / (math.e * big_n))
    if low.kind == "frechet":
        d = 0.0
        c = -float(quantile(model, p1))
    elif low.kind == "weibull":
        if not math.isfinite(lo):
            raise NoAttractionError(f"{model.family} has no finite left endpoint")
        d = lo
        c = float(spec.lower_gap(model.params, p1))
    else:  # gumbel
        d = float(quantile(model, p1))
        c = d - float(quantile(model, pe))
    return NormingConstants(a=a, b=b, c=c, d=d)


def _normal_norming(params: GosParams) -> NormingConstants:
    # Closed forms; the upper side uses the effective size N^{1/(m+1)},
    # the lower side (m+1)*N because L_m compresses the lower tail.
    def classic(n_eff: float) -> tuple[float, float]:
        ln_n = math.log(n_eff)
        root = math.sqrt(2.0 * ln_n)
        a = 1.0 / root
        b = root - (math.log(ln_n) + math.log(4.0 * math.pi)) / (2.0 * root)
        return a, b

    n_up = params.big_n ** (1.0 / (params.m + 1.0))
    n_low = (params.m + 1.0) * params.big_n
    a, b = classic(n_up)
    c, d_pos = classic(n_low)
    return NormingConstants(a=a, b=b, c=c, d=-d_pos)
