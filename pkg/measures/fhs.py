import math
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from core.entropy import ProbVector, h_u, relative_H, relative_N, _check_lengths
from core.errors import NotAbsolutelyContinuous, SelfCheckFailed
from core.extreal import ExtReal
from core.solver import DEFAULT_CONFIG, SolveConfig
from core.utility import UtilitySpec, rescale, transform

__all__ = ["fhs_relative", "fhs_relative_by_definition", "fhs_entropy"]


def _utility_at(u: UtilitySpec, x: float) -> float:
    return float(u.eval(x))


def fhs_relative(u: UtilitySpec, p: ProbVector, q: ProbVector,
                 cfg: Optional[SolveConfig] = None, cross_check: bool = False) -> ExtReal:
    """
    U-relative entropy  D_u(p||q) = sup_w sum u(w_i/q_i) p_i - u(1),
    evaluated as u(e^{H_u(p||q)}) - u(1).
    """
    cfg = cfg or DEFAULT_CONFIG
    _check_lengths(p, q)
    if not p.is_abs_continuous(q):
        raise NotAbsolutelyContinuous("U-relative entropy is undefined unless p << q")

    report = relative_H(u, p, q, cfg)
    value = _utility_at(u, math.exp(report.entropy.value)) - _utility_at(u, 1.0)

    if cross_check:
        # the optimal simplex point is w_i = density_i * q_i
        _, density = relative_N(u, p, q, cfg)
        support = (p.weights > 0) & (q.weights > 0)
        direct = float(np.sum(u.eval(density[support]) * p.weights[support])) - _utility_at(u, 1.0)
        if abs(direct - value) > cfg.self_check_tol * (1.0 + abs(value)):
            raise SelfCheckFailed(f"D_u by definition {direct!r} != identity {value!r}")
    return ExtReal.finite(value)


def fhs_relative_by_definition(u: UtilitySpec, p: ProbVector, q: ProbVector) -> ExtReal:
    """Slow path: the simplex supremum solved directly with SLSQP."""
    _check_lengths(p, q)
    if not p.is_abs_continuous(q):
        raise NotAbsolutelyContinuous("U-relative entropy is undefined unless p << q")
    mask = q.weights > 0
    pw, qw = p.weights[mask], q.weights[mask]

    def objective(w):
        return -float(np.sum(u.eval(w / qw) * pw))

    res = minimize(
        objective,
        x0=pw.copy(),
        method='SLSQP',
        bounds=[(1e-12, 1.0)] * pw.size,
        constraints=[{'type': 'eq', 'fun': lambda w: np.sum(w) - 1.0}],
        options={'ftol': 1e-14, 'maxiter': 500},
    )
    return ExtReal.finite(-float(res.fun) - _utility_at(u, 1.0))


def fhs_entropy(u: UtilitySpec, p: ProbVector, cfg: Optional[SolveConfig] = None,
                cross_check: bool = True) -> ExtReal:
    """
    U-entropy  u(k) - u(1) - D_u(p||uniform),  computed through the rescaled
    utility u_k as u(k) - u(k e^{-h_{u_k}(p)}).
    """
    cfg = cfg or DEFAULT_CONFIG
    k = p.k
    u_k = transform(u, rescale(k))
    h = h_u(u_k, p, cfg).entropy.value
    value = _utility_at(u, float(k)) - _utility_at(u, k * math.exp(-h))

    if cross_check:
        by_definition = (_utility_at(u, float(k)) - _utility_at(u, 1.0)
                         - fhs_relative(u, p, ProbVector.uniform(k), cfg).value)
        if abs(by_definition - value) > cfg.self_check_tol * (1.0 + abs(value)):
            raise SelfCheckFailed(f"FHS entropy routes disagree: {value!r} vs {by_definition!r}")
    return ExtReal.finite(value)
