import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from core.errors import (
    BadGrid, InvalidProbVector, LengthMismatch, SelfCheckFailed, TooLarge,
)
from core.extreal import NEG_INF, POS_INF, ExtReal
from core.solver import DEFAULT_CONFIG, LambdaSolution, SolveConfig, solve_lambda
from core.utility import UtilitySpec, convex_dual_values

__all__ = [
    "ProbVector", "Decomposition", "EntropyReport", "NORMALIZATION_TOL",
    "n_u", "h_u", "lebesgue_decompose", "relative_N", "relative_H",
    "brute_force_n_u", "density_entropy",
]

NORMALIZATION_TOL = 1e-9
CLAMP_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ProbVector:
    """Point of the probability simplex S_k. Weights are a read-only float array."""
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise InvalidProbVector("probability vector must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(w)):
            raise InvalidProbVector("probability vector has non-finite entries")
        if np.any(w < 0):
            raise InvalidProbVector(f"negative weight at index {int(np.argmax(w < 0))}")
        total = float(w.sum())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise InvalidProbVector(f"weights sum to {total!r}, not 1", total=total)
        w = w / total
        w.setflags(write=False)
        object.__setattr__(self, 'weights', w)

    @classmethod
    def from_values(cls, values: Iterable[float], renormalize: bool = False,
                    tol: float = NORMALIZATION_TOL) -> "ProbVector":
        """Vectors within `tol` of the simplex are renormalized silently; others need `renormalize`."""
        w = np.array(list(values), dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise InvalidProbVector("probability vector must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise InvalidProbVector("weights must be finite and non-negative")
        total = float(w.sum())
        if total <= 0:
            raise InvalidProbVector("weights sum to 0", total=total)
        if abs(total - 1.0) > tol and not renormalize:
            raise InvalidProbVector(f"weights sum to {total!r}, not 1 (use --renormalize)", total=total)
        return cls(w / total)

    @classmethod
    def uniform(cls, k: int) -> "ProbVector":
        return cls(np.full(int(k), 1.0 / k))

    @property
    def k(self) -> int:
        return int(self.weights.size)

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.weights > 0))

    def __len__(self) -> int:
        return self.k

    def __getitem__(self, i):
        return self.weights[i]

    def __iter__(self):
        return iter(self.weights.tolist())

    def tolist(self) -> List[float]:
        return self.weights.tolist()

    def padded(self, zeros: int) -> "ProbVector":
        return ProbVector(np.concatenate([self.weights, np.zeros(int(zeros))]))

    def permuted(self, order: Sequence[int]) -> "ProbVector":
        return ProbVector(self.weights[np.asarray(order, dtype=int)])

    def is_abs_continuous(self, other: "ProbVector") -> bool:
        """True when this vector puts no mass where `other` is zero."""
        _check_lengths(self, other)
        return not bool(np.any((self.weights > 0) & (other.weights == 0)))

    def __repr__(self) -> str:
        return f"ProbVector({self.tolist()})"


@dataclass(frozen=True)
class Decomposition:
    singular_mass: float
    ac_mass: float
    ac_normalized: Optional[ProbVector]
    support: Tuple[int, ...]


@dataclass(frozen=True)
class EntropyReport:
    n_value: ExtReal
    entropy: ExtReal
    utility_label: str
    lambda_: Optional[float] = None
    allocation: Optional[np.ndarray] = None
    dual_value: Optional[ExtReal] = None


def _check_lengths(p: ProbVector, q: ProbVector):
    if p.k != q.k:
        raise LengthMismatch(f"vectors have lengths {p.k} and {q.k}")


def _optimize(u: UtilitySpec, p: ProbVector, cfg: SolveConfig, prices: Optional[np.ndarray] = None
              ) -> Tuple[ExtReal, LambdaSolution, np.ndarray, ExtReal]:
    """
    Solve max sum u(w_i) p_i subject to sum b_i w_i = 1 through its dual.
    Returns the primal value, the multiplier, the allocation and the dual value.
    """
    weights = p.weights
    budget = np.ones_like(weights) if prices is None else prices
    active = (weights > 0) & (budget > 0)

    sol = solve_lambda(u, weights, cfg, prices=budget)
    pa = weights[active]
    c = budget[active] / pa

    allocation = np.zeros_like(weights)
    allocation[active] = u.inverse_marginal(sol.lambda_ * c)

    primal = float(np.sum(u.eval(allocation[active]) * pa))
    dual = float(np.sum(convex_dual_values(u, sol.lambda_ * c) * pa)) + sol.lambda_

    if abs(primal - dual) > cfg.self_check_tol * (1.0 + abs(primal)):
        raise SelfCheckFailed(f"primal {primal!r} and dual {dual!r} disagree for {u.label}")
    return ExtReal.finite(primal), sol, allocation, ExtReal.finite(dual)


def n_u(u: UtilitySpec, p: ProbVector, cfg: Optional[SolveConfig] = None
        ) -> Tuple[ExtReal, LambdaSolution, np.ndarray]:
    """sup over the simplex of sum u(w_i) p_i, with Lambda and the optimal allocation w*."""
    value, sol, allocation, _ = _optimize(u, p, cfg or DEFAULT_CONFIG)
    return value, sol, allocation


def _clamped_log(x: float, sign: float, what: str) -> ExtReal:
    if x == math.inf:
        return POS_INF if sign > 0 else NEG_INF
    h = sign * math.log(x)
    if h < 0.0:
        if h < -CLAMP_TOL:
            raise SelfCheckFailed(f"{what} came out negative: {h!r}")
        h = 0.0
    return ExtReal.finite(h)


def h_u(u: UtilitySpec, p: ProbVector, cfg: Optional[SolveConfig] = None) -> EntropyReport:
    """Discrete u-entropy  h_u(p) = -ln u^{-1}(n_u(p)),  in [0, ln k]."""
    cfg = cfg or DEFAULT_CONFIG
    value, sol, allocation, dual = _optimize(u, p, cfg)
    entropy = _clamped_log(float(u.inverse(value.value)), -1.0, "h_u")
    return EntropyReport(value, entropy, u.label, sol.lambda_, allocation, dual)


def lebesgue_decompose(p: ProbVector, q: ProbVector) -> Decomposition:
    """Split p into the mass singular to q and the normalized part on support(q)."""
    _check_lengths(p, q)
    support = q.support
    on_support = p.weights[list(support)]
    ac_mass = float(on_support.sum())
    singular = float(p.weights[q.weights == 0].sum())
    ac = ProbVector(on_support / ac_mass) if ac_mass > 0 else None
    return Decomposition(singular, ac_mass, ac, support)


def relative_N(u: UtilitySpec, p: ProbVector, q: ProbVector, cfg: Optional[SolveConfig] = None
               ) -> Tuple[ExtReal, Optional[np.ndarray]]:
    """
    N_u(p||q): best expected utility under p among claims priced 1 under q.

    Mass of p singular to q earns u(inf); the allocation (a density
    w.r.t. q) is returned only when p << q.
    """
    cfg = cfg or DEFAULT_CONFIG
    d = lebesgue_decompose(p, q)
    u_inf = u.u_at_infinity
    if d.singular_mass > 0 and u_inf.is_pos_inf:
        return POS_INF, None
    if d.ac_normalized is None:
        return u_inf, None

    prices = q.weights[list(d.support)]
    ac_value, _, ac_alloc, _ = _optimize(u, d.ac_normalized, cfg, prices=prices)
    if d.singular_mass > 0:
        value = u_inf * d.singular_mass + ac_value * d.ac_mass
        allocation = None
    else:
        value = ac_value
        allocation = np.zeros(q.k)
        allocation[list(d.support)] = ac_alloc

    slack = cfg.self_check_tol * (1.0 + abs(value.value))
    u_one = float(u.eval(1.0))
    if value.value < u_one - slack or value > u_inf + slack:
        raise SelfCheckFailed(f"N_u = {value} outside [u(1), u(inf)] = [{u_one!r}, {u_inf}]")
    return value, allocation


def relative_H(u: UtilitySpec, p: ProbVector, q: ProbVector, cfg: Optional[SolveConfig] = None
               ) -> EntropyReport:
    """Relative u-entropy  H_u(p||q) = ln u^{-1}(N_u(p||q));  +inf once N_u reaches u(inf)."""
    value, allocation = relative_N(u, p, q, cfg)
    if value >= u.u_at_infinity:
        return EntropyReport(value, POS_INF, u.label, allocation=allocation)
    entropy = _clamped_log(float(u.inverse(value.value)), 1.0, "H_u")
    return EntropyReport(value, entropy, u.label, allocation=allocation)


def density_entropy(u: UtilitySpec, f: Sequence[float], mu: ProbVector,
                    cfg: Optional[SolveConfig] = None, tol: float = NORMALIZATION_TOL) -> EntropyReport:
    """u-entropy of a density f w.r.t. mu, i.e. H_u(f mu || mu)."""
    f = np.asarray(f, dtype=float)
    if f.shape != mu.weights.shape:
        raise LengthMismatch(f"density has {f.size} entries, measure has {mu.k}")
    if not np.all(np.isfinite(f)) or np.any(f < 0):
        raise InvalidProbVector("density must be finite and non-negative")
    nu = ProbVector.from_values(f * mu.weights, tol=tol)
    return relative_H(u, nu, mu, cfg)


def _max_plus(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """c[m] = max_n a[n] + b[m - n] over budgets 0..R."""
    size = a.size
    out = np.full(size, -np.inf)
    for n in range(size):
        if a[n] == -np.inf:
            continue
        np.maximum(out[n:], a[n] + b[:size - n], out=out[n:])
    return out


def brute_force_n_u(u: UtilitySpec, p: ProbVector, resolution: int = 10000, max_k: int = 4) -> ExtReal:
    """
    Exact maximum of sum u(w_i) p_i over the grid w_i = n_i / resolution.

    Atoms with p_i > 0 get at least one unit, zero atoms get none. A lower
    bound on n_u.
    """
    if p.k > max_k:
        raise TooLarge(f"brute force is limited to k <= {max_k}, got k = {p.k}")
    resolution = int(resolution)
    if resolution < 100:
        raise BadGrid(f"resolution must be at least 100, got {resolution}")

    active = [float(pi) for pi in p.weights if pi > 0]
    if len(active) > resolution:
        return NEG_INF

    grid = np.arange(resolution + 1, dtype=float) / resolution
    with np.errstate(divide='ignore'):
        utilities = np.asarray(u.eval(grid[1:]), dtype=float)
    tables = []
    for pi in active:
        t = np.empty(resolution + 1)
        t[0] = -np.inf
        t[1:] = pi * utilities
        tables.append(t)

    acc = tables[0]
    for t in tables[1:-1]:
        acc = _max_plus(acc, t)
    if len(tables) == 1:
        best = acc[resolution]
    else:
        last = tables[-1]
        best = float(np.max(acc + last[::-1]))
    return ExtReal.of(best) if math.isfinite(best) else NEG_INF if best < 0 else POS_INF
