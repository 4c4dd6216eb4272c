import json
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import pandas as pd

from core.entropy import ProbVector, h_u, relative_H
from core.extreal import ExtReal
from core.solver import SolveConfig
from core.utility import UtilitySpec
from measures import (
    OrderAlpha, arimoto, fhs_entropy, fhs_relative, frittelli, renyi, shannon, sharma_mittal,
)
from utils.inputs import InputSpec

__all__ = [
    "QUANTITIES", "RELATIVE_QUANTITIES", "ResultRow", "compute_rows",
    "format_value", "render_table", "render_json", "render_csv", "render",
]

QUANTITIES = ('h', 'H', 'n', 'N', 'fhs_D', 'fhs_H', 'arimoto', 'frittelli',
              'shannon', 'renyi', 'sharma_mittal')
RELATIVE_QUANTITIES = ('H', 'N', 'fhs_D', 'frittelli', 'sharma_mittal')


@dataclass
class ResultRow:
    utility: str
    quantity: str
    value: Optional[ExtReal]
    lambda_: Optional[float] = None
    allocation: Optional[List[float]] = field(default=None)


def _order(u: UtilitySpec) -> Optional[OrderAlpha]:
    if u.gamma is None or u.gamma == 0.0:
        return None
    return OrderAlpha.from_gamma(u.gamma)


def _compute_one(u: UtilitySpec, quantity: str, inp: InputSpec, cfg: SolveConfig,
                 auto_normalize: bool, cache: Dict[str, object]) -> ResultRow:
    p, q = inp.p, inp.q

    if quantity in ('h', 'n'):
        if 'h' not in cache:
            cache['h'] = h_u(u, p, cfg)
        r = cache['h']
        value = r.entropy if quantity == 'h' else r.n_value
        return ResultRow(u.label, quantity, value, r.lambda_, r.allocation.tolist())
    if quantity in ('H', 'N'):
        if 'H' not in cache:
            cache['H'] = relative_H(u, p, q, cfg)
        r = cache['H']
        value = r.entropy if quantity == 'H' else r.n_value
        alloc = r.allocation.tolist() if r.allocation is not None else None
        return ResultRow(u.label, quantity, value, None, alloc)
    if quantity == 'fhs_D':
        return ResultRow(u.label, quantity, fhs_relative(u, p, q, cfg))
    if quantity == 'fhs_H':
        return ResultRow(u.label, quantity, fhs_entropy(u, p, cfg))
    if quantity == 'arimoto':
        return ResultRow(u.label, quantity, arimoto(u, p, cfg, auto_normalize=auto_normalize))
    if quantity == 'frittelli':
        res = frittelli(u, q, p, cfg)
        return ResultRow(u.label, quantity, res.distance, res.argmin)
    if quantity == 'shannon':
        return ResultRow(u.label, quantity, shannon(p, q))
    if quantity == 'renyi':
        if u.gamma is None:
            return ResultRow(u.label, quantity, None)
        order = _order(u)
        return ResultRow(u.label, quantity, shannon(p, q) if order is None else renyi(order, p, q))
    if quantity == 'sharma_mittal':
        if u.gamma is None:
            return ResultRow(u.label, quantity, None)
        order = _order(u)
        # order 1 is the Kullback-Leibler limit
        return ResultRow(u.label, quantity, shannon(p, q) if order is None else sharma_mittal(order, p, q))
    raise ValueError(f"unknown quantity {quantity!r}")


def compute_rows(utilities: List[UtilitySpec], quantities: List[str], inp: InputSpec,
                 cfg: SolveConfig, auto_normalize: bool = False, logger=None) -> List[ResultRow]:
    """One row per (utility, quantity), utilities outermost, in the order given."""
    rows = []
    for u in utilities:
        cache: Dict[str, object] = {}
        for quantity in quantities:
            row = _compute_one(u, quantity, inp, cfg, auto_normalize, cache)
            rows.append(row)
            if logger is not None:
                logger.log_computation(u.label, quantity, inp.p.k,
                                       'n/a' if row.value is None else row.value, row.lambda_)
    return rows


def format_value(value: Optional[ExtReal], style: str = 'table', decimals: int = 6) -> str:
    if value is None:
        return 'n/a'
    if value.is_pos_inf:
        return 'inf'
    if value.is_neg_inf:
        return '-inf'
    if style == 'table':
        return f"{value.value:.{decimals}f}"
    return f"{value.value:.17g}"


def _float_text(x: Optional[float], style: str, decimals: int) -> str:
    if x is None:
        return '-' if style == 'table' else ''
    return f"{x:.{decimals}f}" if style == 'table' else f"{x:.17g}"


def _frame(rows: List[ResultRow], style: str, decimals: int, with_alloc: bool) -> pd.DataFrame:
    records = []
    for r in rows:
        rec = {
            'utility': r.utility,
            'quantity': r.quantity,
            'value': format_value(r.value, style, decimals),
            'lambda': _float_text(r.lambda_, style, decimals),
        }
        if with_alloc:
            if r.allocation is None:
                rec['allocation'] = '-' if style == 'table' else ''
            else:
                rec['allocation'] = ';'.join(_float_text(w, style, decimals) for w in r.allocation)
        records.append(rec)
    columns = ['utility', 'quantity', 'value', 'lambda'] + (['allocation'] if with_alloc else [])
    return pd.DataFrame.from_records(records, columns=columns)


def render_table(rows: List[ResultRow], decimals: int = 6, with_alloc: bool = False) -> str:
    return _frame(rows, 'table', decimals, with_alloc).to_string(index=False)


def render_csv(rows: List[ResultRow], with_alloc: bool = False) -> str:
    return _frame(rows, 'csv', 17, with_alloc).to_csv(index=False, lineterminator='\n').rstrip('\n')


def _json_number(x: Optional[float]):
    if x is None:
        return None
    if math.isinf(x):
        return 'inf' if x > 0 else '-inf'
    return float(x)


def render_json(rows: List[ResultRow], inp: InputSpec, with_alloc: bool = False) -> str:
    out_rows = []
    for r in rows:
        rec = {
            'utility': r.utility,
            'quantity': r.quantity,
            'value': None if r.value is None else _json_number(float(r.value)),
            'lambda': _json_number(r.lambda_),
        }
        if with_alloc:
            rec['allocation'] = None if r.allocation is None else [float(w) for w in r.allocation]
        out_rows.append(rec)
    payload = {
        'p': list(inp.p_values) if inp.p_values else inp.p.tolist(),
        'q': (list(inp.q_values) if inp.q_values else inp.q.tolist()) if inp.q is not None else None,
        'rows': out_rows,
    }
    return json.dumps(payload, indent=2)


def render(rows: List[ResultRow], inp: InputSpec, fmt: str, decimals: int = 6, with_alloc: bool = False) -> str:
    if fmt == 'json':
        return render_json(rows, inp, with_alloc)
    if fmt == 'csv':
        return render_csv(rows, with_alloc)
    return render_table(rows, decimals, with_alloc)
