import math
import os
import sys
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from core.entropy import ProbVector, h_u, relative_H, relative_N
from core.errors import UEntropyError
from core.extreal import ExtReal
from core.solver import SolveConfig
from core.utility import UtilitySpec, isoelastic, logarithmic, rescale, transform
from measures import (
    OrderAlpha, arimoto, fhs_entropy, fhs_relative, frittelli, renyi, shannon, sharma_mittal,
)
from utils.logger import Logger
from utils.settings_manager import IDENTITIES, SettingsManager


def deviation(a: Any, b: Any) -> float:
    """|a - b| / max(1, |b|); equal infinities are 0 apart."""
    a, b = ExtReal.of(a), ExtReal.of(b)
    if not a.is_finite or not b.is_finite:
        return 0.0 if a == b else math.inf
    return abs(a.value - b.value) / max(1.0, abs(b.value))


class IdentityVerifier:
    """
    Randomized check of the identities that tie u-entropy to the classical,
    FHS, Arimoto and Frittelli quantities.
    """

    def __init__(self, sm: SettingsManager, logger: Optional[Logger] = None):
        self.sm = sm
        self.logger = logger
        self.cfg: SolveConfig = sm.get_solve_config()
        self.tolerances = sm.get_verify_tolerances()
        self.max_k = sm.get_verify_max_k()
        self.singular_probability = sm.get_singular_probability()

        self.utilities: List[UtilitySpec] = []
        if sm.get_include_log():
            self.utilities.append(logarithmic())
        self.utilities.extend(isoelastic(g) for g in sm.get_verify_gammas())

        self.max_deviation: Dict[str, float] = {}
        self.checks: Dict[str, int] = {}
        self.failures: List[Dict[str, Any]] = []

    def _reset_stats(self):
        self.max_deviation = {name: 0.0 for name in IDENTITIES}
        self.checks = {name: 0 for name in IDENTITIES}
        self.failures = []

    def _draw_pair(self, rng: np.random.Generator) -> Tuple[ProbVector, ProbVector]:
        k = int(rng.integers(2, self.max_k + 1))
        # q stays away from 0 so that p << q always holds
        q = 0.9 * rng.dirichlet(np.ones(k)) + 0.1 / k
        p = rng.dirichlet(np.ones(k))
        zeroed = rng.random(k) < self.singular_probability
        if zeroed.all():
            zeroed[int(rng.integers(k))] = False
        p[zeroed] = 0.0
        return ProbVector(p / p.sum()), ProbVector(q / q.sum())

    # --- identities ---
    # Each returns the worst deviation between the two routes it compares.

    def _primal_dual(self, u, p, q) -> float:
        r = h_u(u, p, self.cfg)
        return abs(r.n_value.value - r.dual_value.value) / (1.0 + abs(r.n_value.value))

    def _rescale(self, u, p, q) -> float:
        k = p.k
        lhs = relative_H(u, p, ProbVector.uniform(k), self.cfg).entropy
        rhs = math.log(k) - h_u(transform(u, rescale(k)), p, self.cfg).entropy.value
        return deviation(lhs, rhs)

    def _fhs_relative(self, u, p, q) -> float:
        identity = fhs_relative(u, p, q, self.cfg)
        _, density = relative_N(u, p, q, self.cfg)
        support = p.weights > 0
        direct = float(np.sum(u.eval(density[support]) * p.weights[support])) - float(u.eval(1.0))
        return deviation(identity, direct)

    def _fhs_entropy(self, u, p, q) -> float:
        k = p.k
        via_rescale = fhs_entropy(u, p, self.cfg, cross_check=False)
        by_definition = (float(u.eval(float(k))) - float(u.eval(1.0))
                         - fhs_relative(u, p, ProbVector.uniform(k), self.cfg).value)
        return deviation(via_rescale, by_definition)

    def _arimoto(self, u, p, q) -> float:
        value = arimoto(u, p, self.cfg)
        h = h_u(u, p, self.cfg).entropy.value
        direct = -float(u.eval(math.exp(-h)))
        cross = fhs_entropy(transform(u, rescale(1.0 / p.k)), p, self.cfg, cross_check=False)
        return max(deviation(value, direct), deviation(value, cross))

    def _frittelli(self, u, p, q) -> float:
        res = frittelli(u, p, q, self.cfg, check=False)
        report = relative_H(u, q, p, self.cfg)
        expected = math.inf if report.entropy.is_pos_inf else math.expm1(report.entropy.value)
        return max(deviation(res.delta_cap, report.n_value), deviation(res.distance, expected))

    def _closed_form(self, u, p, q) -> float:
        devs = []
        h = h_u(u, p, self.cfg)
        forward = relative_H(u, p, q, self.cfg).entropy
        backward = relative_H(u, q, p, self.cfg).entropy
        if u.gamma == 0.0:
            devs.append(deviation(h.entropy, shannon(p)))
            devs.append(deviation(forward, shannon(p, q)))
            devs.append(deviation(backward, shannon(q, p)))
            devs.append(abs(h.lambda_ - 1.0))
        else:
            order = OrderAlpha.from_gamma(u.gamma)
            a = order.alpha
            devs.append(deviation(h.entropy, renyi(order, p)))
            devs.append(deviation(forward, renyi(order, p, q)))
            # q is singular w.r.t. p whenever p has a zero atom
            devs.append(deviation(backward, renyi(order, q, p)))
            expected_lambda = float(np.sum(p.weights[p.weights > 0] ** a)) ** (1.0 - u.gamma)
            devs.append(abs(h.lambda_ - expected_lambda) / h.lambda_)
        return max(devs)

    def _sharma_mittal(self, u, p, q) -> float:
        d = fhs_relative(u, p, q, self.cfg)
        if u.gamma == 0.0:
            return deviation(d, shannon(p, q))
        return deviation(d, sharma_mittal(OrderAlpha.from_gamma(u.gamma), p, q))

    def _checks(self) -> Dict[str, Callable]:
        return {
            'primal_dual': self._primal_dual,
            'rescale': self._rescale,
            'fhs_relative': self._fhs_relative,
            'fhs_entropy': self._fhs_entropy,
            'arimoto': self._arimoto,
            'frittelli': self._frittelli,
            'closed_form': self._closed_form,
            'sharma_mittal': self._sharma_mittal,
        }

    def _run_trial(self, seed: int, trial: int, tolerances: Dict[str, float]) -> List[Dict[str, Any]]:
        rng = np.random.default_rng([seed, trial])
        p, q = self._draw_pair(rng)
        records = []
        for u in self.utilities:
            for name, check in self._checks().items():
                error = None
                try:
                    dev = check(u, p, q)
                except UEntropyError as e:
                    dev, error = math.inf, f"{type(e).__name__}: {e}"
                tol = tolerances[name]
                records.append({
                    'seed': seed, 'trial': trial, 'utility': u.label, 'k': p.k,
                    'identity': name, 'deviation': dev, 'tolerance': tol,
                    'passed': dev < tol, 'p': p.tolist(), 'q': q.tolist(), 'error': error
                })
        return records

    def _generate_report(self, seed: int, trials: int, tolerances: Dict[str, float]) -> Dict[str, Any]:
        identities = {
            name: {
                'checks': self.checks[name],
                'max_deviation': self.max_deviation[name],
                'tolerance': tolerances[name],
                'passed': not any(f['identity'] == name for f in self.failures)
            }
            for name in IDENTITIES
        }
        return {
            'seed': seed,
            'trials': trials,
            'utilities': [u.label for u in self.utilities],
            'identities': identities,
            'failures': list(self.failures),
            'passed': not self.failures
        }

    def format_report_text(self, report: Dict) -> str:
        lines = []

        lines.append("=" * 60)
        lines.append("IDENTITY VERIFICATION SUMMARY".center(60))
        lines.append("=" * 60)
        lines.append(f" Seed: {report['seed']}")
        lines.append(f" Trials: {report['trials']}")
        lines.append(f" Utilities: {', '.join(report['utilities'])}")
        lines.append("")

        lines.append(" MAX DEVIATION PER IDENTITY:")
        lines.append("-" * 60)
        for name, stats in report['identities'].items():
            status = "PASS" if stats['passed'] else "FAIL"
            lines.append(f" {name:<14} {stats['max_deviation']:.3e}  tol {stats['tolerance']:.1e}"
                         f"  {stats['checks']:>5} checks  {status}")
        lines.append("")

        if report['failures']:
            lines.append(f" COUNTEREXAMPLES ({len(report['failures'])}):")
            lines.append("-" * 60)
            for f in report['failures']:
                lines.append(f" trial {f['trial']} {f['utility']} {f['identity']} "
                             f"deviation {f['deviation']!r} tol {f['tolerance']!r}")
                lines.append(f"   p = {f['p']!r}")
                lines.append(f"   q = {f['q']!r}")
                if f['error']:
                    lines.append(f"   error: {f['error']}")
            lines.append("")

        lines.append("=" * 60)
        lines.append(("ALL IDENTITIES HOLD" if report['passed'] else "VERIFICATION FAILED").center(60))
        lines.append("=" * 60)

        return "\n".join(lines)

    def _export_results(self, report: Dict, silent: bool = False) -> Optional[str]:
        if self.logger is None or not self.logger.enabled:
            return None
        try:
            filename = os.path.join(self.logger.log_dir, f"verify_{report['seed']}_{report['trials']}.txt")
            with open(filename, 'w', encoding='utf-8') as f:
                f.write(self.format_report_text(report))
                f.write("\n")
            if not silent:
                print(f"[Verify] ✅ Results exported to: {filename}", file=sys.stderr)
            return filename
        except Exception as e:
            self.logger.log_error(f"Failed to export verification report: {e}")
            if not silent:
                print(f"[Verify] ⚠️  Failed to export results: {e}", file=sys.stderr)
            return None

    def run(self, seed: int, trials: int, tol_override: Optional[float] = None,
            silent: bool = True) -> Dict[str, Any]:
        if trials < 1:
            raise ValueError("trials must be at least 1")
        tolerances = dict(self.tolerances)
        if tol_override is not None:
            tolerances = {name: float(tol_override) for name in tolerances}

        self._reset_stats()
        for trial in range(trials):
            records = self._run_trial(seed, trial, tolerances)
            for r in records:
                name = r['identity']
                self.checks[name] += 1
                self.max_deviation[name] = max(self.max_deviation[name], r['deviation'])
                if not r['passed']:
                    self.failures.append(r)
            if self.logger is not None:
                self.logger.log_trials(records)

        report = self._generate_report(seed, trials, tolerances)
        if self.logger is not None:
            if report['passed']:
                self.logger.log_info(f"verify seed={seed} trials={trials}: all identities hold")
            else:
                self.logger.log_error(f"verify seed={seed} trials={trials}: {len(self.failures)} failed checks")
        self._export_results(report, silent=silent)
        return report
