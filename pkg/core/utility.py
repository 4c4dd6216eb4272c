import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np
from scipy.optimize import brentq

from core.errors import (
    BadGrid, InvalidGamma, InvalidScale, InversionError, NegativeArgument, UEntropyError,
)
from core.extreal import NEG_INF, POS_INF, ExtReal, Number

__all__ = [
    "UtilitySpec", "IsoelasticParams", "TransformParams", "ElasticityEstimate", "InadaReport",
    "make_builtin", "logarithmic", "isoelastic", "custom_utility", "affine", "rescale",
    "transform", "convex_dual", "convex_dual_values", "asymptotic_elasticity", "check_inada",
]

# Bracket for synthesized inverses, searched in log-space.
INVERSE_BRACKET = (1e-12, 1e12)
MAX_LOG_ARG = 700.0
ROUND_TRIP_TOL = 1e-8


def _num(x: float) -> str:
    x = float(x)
    return str(int(x)) if x.is_integer() else repr(x)


@dataclass(frozen=True)
class UtilitySpec:
    """
    A utility u on (0, inf) with its derived functionals.

    `dual` is the closed-form convex dual on (0, inf) when one is known;
    `gamma` is the power order of the innermost isoelastic family
    (0.0 for log, None for custom utilities).
    """
    eval: Callable
    marginal: Callable
    inverse: Callable
    inverse_marginal: Callable
    u_at_zero: ExtReal
    u_at_infinity: ExtReal
    label: str
    dual: Optional[Callable] = None
    gamma: Optional[float] = None
    exact_elasticity: Optional[float] = None
    family: str = "custom"

    def __call__(self, x):
        return self.eval(x)

    def certainty_equivalent(self, value: Number) -> ExtReal:
        """u^{-1}(value), extended to the closed range [u(0), u(inf)]."""
        value = ExtReal.of(value)
        if value >= self.u_at_infinity:
            return POS_INF
        if value <= self.u_at_zero:
            return ExtReal.finite(0.0)
        return ExtReal.finite(float(self.inverse(float(value))))


@dataclass(frozen=True)
class IsoelasticParams:
    gamma: float

    def __post_init__(self):
        g = float(self.gamma)
        if not math.isfinite(g) or g >= 1.0 or g == 0.0:
            raise InvalidGamma(f"isoelastic order must lie in (-inf,0) or (0,1), got {self.gamma}")

    @property
    def alpha(self) -> float:
        return 1.0 / (1.0 - self.gamma)


@dataclass(frozen=True)
class TransformParams:
    kind: str
    a: float = 1.0
    b: float = 0.0
    k: float = 1.0

    def __post_init__(self):
        if self.kind not in ("affine", "rescale"):
            raise ValueError(f"unknown transform kind: {self.kind}")
        if not self.a > 0:
            raise InvalidScale(f"affine scale must be positive, got {self.a}")
        if not self.k > 0:
            raise InvalidScale(f"rescale factor must be positive, got {self.k}")


def affine(a: float, b: float) -> TransformParams:
    return TransformParams("affine", a=float(a), b=float(b))


def rescale(k: float) -> TransformParams:
    return TransformParams("rescale", k=float(k))


# --- built-in families ---

def logarithmic() -> UtilitySpec:
    return UtilitySpec(
        eval=np.log,
        marginal=lambda x: 1.0 / x,
        inverse=np.exp,
        inverse_marginal=lambda y: 1.0 / y,
        u_at_zero=NEG_INF,
        u_at_infinity=POS_INF,
        label="log",
        dual=lambda y: -np.log(y) - 1.0,
        gamma=0.0,
        exact_elasticity=0.0,
        family="log",
    )


def isoelastic(gamma: float) -> UtilitySpec:
    g = IsoelasticParams(gamma).gamma

    # expm1/log1p keep the round trip accurate near x = 1
    def _eval(x):
        return np.expm1(g * np.log(x)) / g

    def _inverse(y):
        return np.exp(np.log1p(g * y) / g)

    def _dual(y):
        return ((1.0 - g) / g) * np.exp(np.log(y) * g / (g - 1.0)) - 1.0 / g

    bound = ExtReal.finite(-1.0 / g)
    return UtilitySpec(
        eval=_eval,
        marginal=lambda x: np.exp((g - 1.0) * np.log(x)),
        inverse=_inverse,
        inverse_marginal=lambda y: np.exp(np.log(y) / (g - 1.0)),
        u_at_zero=bound if g > 0 else NEG_INF,
        u_at_infinity=bound if g < 0 else POS_INF,
        label=f"iso:{_num(g)}",
        dual=_dual,
        gamma=g,
        exact_elasticity=g if g > 0 else 0.0,
        family="isoelastic",
    )


def make_builtin(family: str, params: Optional[IsoelasticParams] = None) -> UtilitySpec:
    family = family.lower()
    if family == "log":
        return logarithmic()
    if family == "isoelastic":
        if params is None:
            raise InvalidGamma("isoelastic family needs a gamma")
        return isoelastic(params.gamma)
    raise ValueError(f"unknown utility family: {family}")


# --- synthesized inverses for custom utilities ---

def _invert_monotone(f: Callable, y: float) -> float:
    """Solve f(x) = y for a monotone f on (0, inf) by Brent's method in log-space."""
    def g(t):
        return float(f(math.exp(t))) - y

    t_lo, t_hi = math.log(INVERSE_BRACKET[0]), math.log(INVERSE_BRACKET[1])
    g_lo, g_hi = g(t_lo), g(t_hi)
    while g_lo * g_hi > 0:
        if abs(t_lo) >= MAX_LOG_ARG and abs(t_hi) >= MAX_LOG_ARG:
            raise InversionError(f"no bracket found for value {y}")
        t_lo = max(2.0 * t_lo, -MAX_LOG_ARG)
        t_hi = min(2.0 * t_hi, MAX_LOG_ARG)
        g_lo, g_hi = g(t_lo), g(t_hi)
    return math.exp(brentq(g, t_lo, t_hi, xtol=1e-13, rtol=4 * np.finfo(float).eps, maxiter=500))


def _elementwise(scalar_fn: Callable) -> Callable:
    def fn(y):
        if np.ndim(y) == 0:
            return scalar_fn(float(y))
        return np.array([scalar_fn(float(v)) for v in np.ravel(y)]).reshape(np.shape(y))
    return fn


def custom_utility(eval: Callable, marginal: Callable, *,
                   u_at_zero: ExtReal = NEG_INF, u_at_infinity: ExtReal = POS_INF,
                   label: str = "custom", inverse: Optional[Callable] = None,
                   inverse_marginal: Optional[Callable] = None) -> UtilitySpec:
    """
    Wrap an opaque utility. Missing inverses are synthesized numerically
    to relative tolerance ~1e-12.
    """
    if inverse is None:
        inverse = _elementwise(lambda y: _invert_monotone(eval, y))
    if inverse_marginal is None:
        inverse_marginal = _elementwise(lambda y: _invert_monotone(marginal, y))
    return UtilitySpec(
        eval=eval,
        marginal=marginal,
        inverse=inverse,
        inverse_marginal=inverse_marginal,
        u_at_zero=ExtReal.of(u_at_zero),
        u_at_infinity=ExtReal.of(u_at_infinity),
        label=label,
    )


# --- transforms ---

def transform(base: UtilitySpec, kind: TransformParams) -> UtilitySpec:
    if kind.kind == "affine":
        a, b = kind.a, kind.b
        base_dual = base.dual
        return UtilitySpec(
            eval=lambda x: a * base.eval(x) + b,
            marginal=lambda x: a * base.marginal(x),
            inverse=lambda y: base.inverse((y - b) / a),
            inverse_marginal=lambda y: base.inverse_marginal(y / a),
            u_at_zero=base.u_at_zero * a + b,
            u_at_infinity=base.u_at_infinity * a + b,
            label=f"affine:{_num(a)}:{_num(b)}:{base.label}",
            dual=(lambda y: a * base_dual(y / a) + b) if base_dual is not None else None,
            gamma=base.gamma,
            exact_elasticity=base.exact_elasticity if b == 0.0 else None,
            family=base.family,
        )

    k = kind.k
    base_dual = base.dual
    return UtilitySpec(
        eval=lambda x: base.eval(k * x),
        marginal=lambda x: k * base.marginal(k * x),
        inverse=lambda y: base.inverse(y) / k,
        inverse_marginal=lambda y: base.inverse_marginal(y / k) / k,
        u_at_zero=base.u_at_zero,
        u_at_infinity=base.u_at_infinity,
        label=f"rescale:{_num(k)}:{base.label}",
        dual=(lambda y: base_dual(y / k)) if base_dual is not None else None,
        gamma=base.gamma,
        exact_elasticity=base.exact_elasticity,
        family=base.family,
    )


# --- derived functionals ---

def convex_dual(u: UtilitySpec, y: Number) -> ExtReal:
    """u*(y) = sup_{x>0} (u(x) - y x), with u*(0) = u(inf) and u*(inf) = u(0)."""
    y = ExtReal.of(y)
    if y < 0:
        raise NegativeArgument(f"convex dual needs y >= 0, got {y}")
    if y == 0:
        return u.u_at_infinity
    if y.is_pos_inf:
        return u.u_at_zero
    yv = y.value
    if u.dual is not None:
        return ExtReal.of(u.dual(yv))
    x = float(u.inverse_marginal(yv))
    return ExtReal.of(float(u.eval(x)) - yv * x)


def convex_dual_values(u: UtilitySpec, ys) -> np.ndarray:
    """Elementwise u* for strictly positive, finite ys."""
    ys = np.asarray(ys, dtype=float)
    if u.dual is not None:
        return np.asarray(u.dual(ys), dtype=float)
    return np.array([float(convex_dual(u, y)) for y in np.ravel(ys)]).reshape(ys.shape)


@dataclass(frozen=True)
class ElasticityEstimate:
    value: float
    exact: bool
    low_confidence: bool = False


def asymptotic_elasticity(u: UtilitySpec, grid: Optional[np.ndarray] = None) -> ElasticityEstimate:
    """
    AE(u) = limsup x u'(x) / u(x). Exact for built-ins; otherwise the max of
    the ratio over the upper half of a geometric grid. Informational only.
    """
    if u.exact_elasticity is not None:
        return ElasticityEstimate(u.exact_elasticity, exact=True)

    xs = np.logspace(1, 8, 8) if grid is None else np.asarray(grid, dtype=float)
    values = np.array([float(u.eval(x)) for x in xs])
    slopes = np.array([float(u.marginal(x)) for x in xs])
    tail = slice(len(xs) // 2, None)

    sign_change = bool(np.any(values > 0) and np.any(values < 0))
    nonpositive_tail = bool(np.any(values[tail] <= 0))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = xs * slopes / values
    tail_ratios = ratios[tail][np.isfinite(ratios[tail])]
    estimate = float(np.max(tail_ratios)) if tail_ratios.size else math.nan
    return ElasticityEstimate(estimate, exact=False, low_confidence=sign_change or nonpositive_tail)


@dataclass
class InadaReport:
    monotonicity: List[str] = field(default_factory=list)
    concavity: List[str] = field(default_factory=list)
    marginal: List[str] = field(default_factory=list)
    round_trip: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not (self.monotonicity or self.concavity or self.marginal or self.round_trip)

    def issues(self) -> List[str]:
        return self.monotonicity + self.concavity + self.marginal + self.round_trip


def check_inada(u: UtilitySpec, grid: List[float]) -> InadaReport:
    """Sampled check of the utility-function axioms on a strictly increasing grid."""
    xs = [float(x) for x in grid]
    if len(xs) < 3:
        raise BadGrid("grid needs at least 3 points")
    if any(x <= 0 or not math.isfinite(x) for x in xs):
        raise BadGrid("grid points must be positive and finite")
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise BadGrid("grid must be strictly increasing")

    report = InadaReport()
    vals = [float(u.eval(x)) for x in xs]
    slopes = [float(u.marginal(x)) for x in xs]

    for (x1, v1), (x2, v2) in zip(zip(xs, vals), zip(xs[1:], vals[1:])):
        if not v1 < v2:
            report.monotonicity.append(f"u({x1:g}) = {v1:.6g} >= u({x2:g}) = {v2:.6g}")
        mid = float(u.eval(0.5 * (x1 + x2)))
        chord = 0.5 * (v1 + v2)
        if not mid > chord:
            report.concavity.append(f"midpoint of [{x1:g}, {x2:g}]: u = {mid:.6g} <= chord {chord:.6g}")

    for (x1, s1), (x2, s2) in zip(zip(xs, slopes), zip(xs[1:], slopes[1:])):
        if not s1 > s2:
            report.marginal.append(f"u'({x1:g}) = {s1:.6g} <= u'({x2:g}) = {s2:.6g}")
    if not float(u.marginal(xs[0] * 1e-6)) > slopes[0]:
        report.marginal.append(f"u' does not grow towards 0 below {xs[0]:g}")
    if not float(u.marginal(xs[-1] * 1e6)) < slopes[-1]:
        report.marginal.append(f"u' does not decay towards infinity above {xs[-1]:g}")

    for x, v, s in zip(xs, vals, slopes):
        try:
            back = float(u.inverse(v))
            if abs(back - x) / x > ROUND_TRIP_TOL:
                report.round_trip.append(f"inverse(u({x:g})) = {back:.12g}")
        except (UEntropyError, ValueError, FloatingPointError) as e:
            report.round_trip.append(f"inverse failed at x = {x:g}: {e}")
        try:
            back = float(u.inverse_marginal(s))
            if abs(back - x) / x > ROUND_TRIP_TOL:
                report.round_trip.append(f"I(u'({x:g})) = {back:.12g}")
        except (UEntropyError, ValueError, FloatingPointError) as e:
            report.round_trip.append(f"inverse marginal failed at x = {x:g}: {e}")
    return report
