import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from core.errors import DegenerateInput, NoConvergence, SelfCheckFailed, UnboundedAbove
from core.extreal import ExtReal
from core.utility import UtilitySpec

__all__ = ["SolveConfig", "LambdaSolution", "MaximizeResult", "solve_lambda", "maximize_concave_1d"]

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
# ln of the largest / smallest abscissa the maximizer will probe
LOG_X_LIMIT = 690.0


@dataclass(frozen=True)
class SolveConfig:
    rel_tol: float = 1e-12
    abs_tol: float = 1e-14
    max_iter: int = 200
    bracket_growth: float = 2.0
    self_check_tol: float = 1e-9

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if not self.abs_tol > 0:
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol}")
        if int(self.max_iter) < 8:
            raise ValueError(f"max_iter must be at least 8, got {self.max_iter}")
        if not self.bracket_growth > 1:
            raise ValueError(f"bracket_growth must exceed 1, got {self.bracket_growth}")
        if not self.self_check_tol > 0:
            raise ValueError(f"self_check_tol must be positive, got {self.self_check_tol}")

    @classmethod
    def from_settings(cls, settings: Dict[str, Any]) -> "SolveConfig":
        solver = settings.get('solver', {})
        entropy = settings.get('entropy', {})
        return cls(
            rel_tol=float(solver.get('rel_tol', 1e-12)),
            abs_tol=float(solver.get('abs_tol', 1e-14)),
            max_iter=int(solver.get('max_iter', 200)),
            bracket_growth=float(solver.get('bracket_growth', 2.0)),
            self_check_tol=float(entropy.get('self_check_tol', 1e-9)),
        )


DEFAULT_CONFIG = SolveConfig()


@dataclass(frozen=True)
class LambdaSolution:
    lambda_: float
    residual: float
    iterations: int
    bracket: Tuple[float, float]


@dataclass(frozen=True)
class MaximizeResult:
    argmax: float
    max_value: ExtReal
    iterations: int
    at_boundary: bool = False


def solve_lambda(u: UtilitySpec, p, cfg: Optional[SolveConfig] = None,
                 prices=None) -> LambdaSolution:
    """
    Dual multiplier of  max sum u(w_i) p_i  s.t.  sum b_i w_i = 1.

    Without `prices` the budget is b_i = 1 and the root solves
    sum I(L / p_i) = 1. With prices q the root solves sum I(L q_i / p_i) q_i = 1
    over atoms where both p_i and q_i are positive. Zero atoms contribute
    I(inf) = 0.
    """
    cfg = cfg or DEFAULT_CONFIG
    weights = np.asarray(getattr(p, 'weights', p), dtype=float)
    budget = np.ones_like(weights) if prices is None else np.asarray(getattr(prices, 'weights', prices), dtype=float)

    active = (weights > 0) & (budget > 0)
    if not active.any():
        raise DegenerateInput("no atom carries positive weight and positive price")
    b = budget[active]
    c = b / weights[active]

    def phi(lam: float) -> float:
        return float(np.sum(u.inverse_marginal(lam * c) * b))

    # Each term alone reaches 1 at u'(1/b_j)/c_j, so the largest of those is a lower bracket.
    lo = float(np.max(u.marginal(1.0 / b) / c))
    phi_lo = phi(lo)
    if phi_lo < 1.0 - cfg.rel_tol:
        raise SelfCheckFailed(f"phi({lo:.6g}) = {phi_lo:.12g} < 1 at the lower bracket")
    if phi_lo - 1.0 <= cfg.rel_tol:
        return LambdaSolution(lo, phi_lo - 1.0, 0, (lo, lo))

    hi = lo * cfg.bracket_growth
    phi_hi = phi(hi)
    grow = 0
    while phi_hi >= 1.0:
        if phi_hi - 1.0 <= cfg.rel_tol:
            return LambdaSolution(hi, phi_hi - 1.0, grow, (hi, hi))
        lo, phi_lo = hi, phi_hi
        hi *= cfg.bracket_growth
        phi_hi = phi(hi)
        grow += 1
        if grow > cfg.max_iter or not math.isfinite(hi):
            raise NoConvergence("upper bracket did not cross the budget", bracket=(lo, hi), iterations=grow)

    for it in range(1, cfg.max_iter + 1):
        mid = math.sqrt(lo * hi) if hi > 4.0 * lo else 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            # float resolution reached
            best = lo if abs(phi_lo - 1.0) <= abs(phi_hi - 1.0) else hi
            return LambdaSolution(best, phi(best) - 1.0, it, (lo, hi))
        phi_mid = phi(mid)
        residual = phi_mid - 1.0
        if hi - lo <= cfg.rel_tol * mid + cfg.abs_tol and abs(residual) <= cfg.rel_tol:
            return LambdaSolution(mid, residual, it, (lo, hi))
        if residual >= 0.0:
            lo, phi_lo = mid, phi_mid
        else:
            hi, phi_hi = mid, phi_mid

    raise NoConvergence(f"bisection exceeded {cfg.max_iter} iterations", bracket=(lo, hi),
                        iterations=cfg.max_iter)


def maximize_concave_1d(f: Callable[[float], Any], initial_guess: float,
                        cfg: Optional[SolveConfig] = None) -> MaximizeResult:
    """
    Maximize a concave (or unimodal) f on (0, inf).

    The bracket is expanded geometrically from the guess, then narrowed by
    golden-section search in log x until its relative width is below
    rel_tol. A maximum pushed towards 0 is reported at the lower edge with
    at_boundary set.
    """
    cfg = cfg or DEFAULT_CONFIG
    if not initial_guess > 0:
        raise ValueError(f"initial guess must be positive, got {initial_guess}")

    def value(t: float) -> float:
        v = float(f(math.exp(t)))
        if math.isnan(v):
            return -math.inf
        if v == math.inf:
            raise UnboundedAbove(f"objective is +inf at x = {math.exp(t):.6g}")
        return v

    step = math.log(cfg.bracket_growth)
    iterations = 0
    tb = math.log(initial_guess)
    fb = value(tb)
    tc = tb + step
    fc = value(tc)

    if fc > fb:
        # climb upwards; a non-finite probe counts as a drop
        ta = tb
        tb, fb = tc, fc
        while True:
            step *= 2.0
            tc = tb + step
            iterations += 1
            if tc > LOG_X_LIMIT:
                raise UnboundedAbove("objective keeps increasing past the overflow threshold")
            fc = value(tc)
            if fc <= fb:
                break
            ta, tb, fb = tb, tc, fc
    else:
        ta = tb - step
        fa = value(ta)
        while fa > fb:
            iterations += 1
            if ta <= -LOG_X_LIMIT:
                return MaximizeResult(math.exp(ta), ExtReal.of(fa), iterations, at_boundary=True)
            tc, tb, fb = tb, ta, fa
            step *= 2.0
            ta = max(tb - step, -LOG_X_LIMIT)
            fa = value(ta)

    # golden-section on [ta, tc]
    x1 = tc - GOLDEN * (tc - ta)
    x2 = ta + GOLDEN * (tc - ta)
    f1, f2 = value(x1), value(x2)
    while tc - ta > cfg.rel_tol:
        iterations += 1
        if iterations > cfg.max_iter:
            raise NoConvergence(f"golden-section exceeded {cfg.max_iter} iterations",
                                bracket=(math.exp(ta), math.exp(tc)), iterations=iterations)
        if f1 >= f2:
            tc, x2, f2 = x2, x1, f1
            x1 = tc - GOLDEN * (tc - ta)
            f1 = value(x1)
        else:
            ta, x1, f1 = x1, x2, f2
            x2 = ta + GOLDEN * (tc - ta)
            f2 = value(x2)
        if not (ta < x1 < tc) or not (ta < x2 < tc):
            break

    t_best, f_best = (x1, f1) if f1 >= f2 else (x2, f2)
    return MaximizeResult(math.exp(t_best), ExtReal.of(f_best), iterations)
