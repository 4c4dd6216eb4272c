import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import entr, rel_entr

from core.entropy import ProbVector, _check_lengths
from core.errors import InvalidAlpha, NotAbsolutelyContinuous
from core.extreal import POS_INF, ExtReal

__all__ = ["OrderAlpha", "shannon", "renyi", "sharma_mittal"]


@dataclass(frozen=True)
class OrderAlpha:
    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not math.isfinite(a) or a <= 0 or a == 1.0:
            raise InvalidAlpha(f"order must lie in (0,1) or (1,inf), got {self.alpha}")

    @classmethod
    def from_gamma(cls, gamma: float) -> "OrderAlpha":
        return cls(1.0 / (1.0 - gamma))

    @property
    def gamma(self) -> float:
        return 1.0 - 1.0 / self.alpha


def _power_sum(alpha: float, p: ProbVector, q: ProbVector) -> float:
    mask = (p.weights > 0) & (q.weights > 0)
    pa, qa = p.weights[mask], q.weights[mask]
    return float(np.sum(pa ** alpha * qa ** (1.0 - alpha)))


def shannon(p: ProbVector, q: Optional[ProbVector] = None) -> ExtReal:
    """Shannon entropy of p, or Kullback-Leibler divergence KL(p||q) when q is given."""
    if q is None:
        return ExtReal.finite(float(np.sum(entr(p.weights))))
    _check_lengths(p, q)
    if not p.is_abs_continuous(q):
        return POS_INF
    return ExtReal.finite(float(np.sum(rel_entr(p.weights, q.weights))))


def renyi(alpha: OrderAlpha, p: ProbVector, q: Optional[ProbVector] = None) -> ExtReal:
    """
    Renyi entropy (1/(1-a)) ln sum p_i^a, or the divergence
    (1/(a-1)) ln sum p_i^a q_i^(1-a).

    Below order 1 the divergence only sees the part of p on support(q);
    above order 1 it is +inf unless p << q.
    """
    a = alpha.alpha
    if q is None:
        s = float(np.sum(p.weights[p.weights > 0] ** a))
        return ExtReal.finite(math.log(s) / (1.0 - a))

    _check_lengths(p, q)
    if a > 1.0 and not p.is_abs_continuous(q):
        return POS_INF
    s = _power_sum(a, p, q)
    if s == 0.0:
        return POS_INF
    return ExtReal.finite(math.log(s) / (a - 1.0))


def sharma_mittal(alpha: OrderAlpha, p: ProbVector, q: ProbVector) -> ExtReal:
    """(a/(a-1)) ((sum p_i^a q_i^(1-a))^(1/a) - 1), defined for p << q."""
    _check_lengths(p, q)
    if not p.is_abs_continuous(q):
        raise NotAbsolutelyContinuous("Sharma-Mittal divergence needs p << q")
    a = alpha.alpha
    s = _power_sum(a, p, q)
    return ExtReal.finite(a / (a - 1.0) * (s ** (1.0 / a) - 1.0))
