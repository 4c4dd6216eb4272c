import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.entropy import ProbVector, lebesgue_decompose, relative_H, _check_lengths
from core.errors import NotAbsolutelyContinuous, SelfCheckFailed
from core.extreal import POS_INF, ExtReal
from core.solver import DEFAULT_CONFIG, SolveConfig, maximize_concave_1d
from core.utility import UtilitySpec, convex_dual_values

__all__ = ["FrittelliResult", "frittelli", "CROSS_CHECK_TOL"]

CROSS_CHECK_TOL = 1e-8


@dataclass(frozen=True)
class FrittelliResult:
    delta_cap: ExtReal
    distance: ExtReal
    argmin: Optional[float] = None


def _deviation(a: ExtReal, b: ExtReal) -> float:
    if not a.is_finite or not b.is_finite:
        return 0.0 if a == b else math.inf
    return abs(a.value - b.value) / max(1.0, abs(b.value))


def frittelli(u: UtilitySpec, mu: ProbVector, nu: ProbVector,
              cfg: Optional[SolveConfig] = None, check: bool = True) -> FrittelliResult:
    """
    Generalised distance  Delta_u(mu, nu) = inf_L (L + sum u*(L mu_i/nu_i) nu_i)
    and  delta_u = u^{-1}(Delta_u) - 1.

    The part of nu singular to mu earns u*(0) = u(inf) and is split off
    first. With `check` the result is compared against N_u(nu||mu) and
    e^{H_u(nu||mu)} - 1.
    """
    cfg = cfg or DEFAULT_CONFIG
    _check_lengths(mu, nu)
    if not mu.is_abs_continuous(nu):
        raise NotAbsolutelyContinuous("generalised distance needs mu << nu")

    d = lebesgue_decompose(nu, mu)
    u_inf = u.u_at_infinity
    argmin = None
    if d.singular_mass > 0 and u_inf.is_pos_inf:
        delta_cap = POS_INF
    else:
        ratios = mu.weights[list(d.support)] / d.ac_normalized.weights
        weights = d.ac_normalized.weights

        def neg_objective(lam: float) -> float:
            return -(lam + float(np.sum(convex_dual_values(u, lam * ratios) * weights)))

        best = maximize_concave_1d(neg_objective, float(u.marginal(1.0)), cfg)
        argmin = best.argmax
        ac_value = -best.max_value
        delta_cap = ac_value * d.ac_mass
        if d.singular_mass > 0:
            delta_cap = u_inf * d.singular_mass + delta_cap

    distance = u.certainty_equivalent(delta_cap) - 1.0
    result = FrittelliResult(delta_cap, distance, argmin)

    if check:
        report = relative_H(u, nu, mu, cfg)
        if _deviation(delta_cap, report.n_value) > CROSS_CHECK_TOL:
            raise SelfCheckFailed(f"Delta_u = {delta_cap} but N_u(nu||mu) = {report.n_value}")
        expected = POS_INF if report.entropy.is_pos_inf else ExtReal.finite(math.expm1(report.entropy.value))
        if _deviation(distance, expected) > CROSS_CHECK_TOL:
            raise SelfCheckFailed(f"delta_u = {distance} but e^H - 1 = {expected}")
    return result
