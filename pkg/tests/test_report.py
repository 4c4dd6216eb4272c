import json
import math

import numpy as np
import pytest

from core.extreal import NEG_INF, POS_INF, ExtReal
from core.solver import SolveConfig
from core.utility import custom_utility, isoelastic, logarithmic
from utils.inputs import load_input
from utils.report import QUANTITIES, compute_rows, format_value, render_json, render_table


def test_format_value():
    assert format_value(None) == 'n/a'
    assert format_value(POS_INF) == 'inf'
    assert format_value(NEG_INF, 'csv') == '-inf'
    assert format_value(ExtReal.finite(1 / 3)) == '0.333333'
    assert format_value(ExtReal.finite(1 / 3), 'csv') == '0.33333333333333331'


def test_every_quantity_has_a_row():
    inp = load_input(p_text="0.2,0.3,0.5", q_text="0.3,0.3,0.4")
    rows = compute_rows([isoelastic(-1.0)], list(QUANTITIES), inp, SolveConfig())
    assert [r.quantity for r in rows] == list(QUANTITIES)
    assert all(r.value is not None for r in rows)
    by_name = {r.quantity: r for r in rows}
    assert by_name['h'].lambda_ is not None
    assert by_name['N'].allocation is not None
    assert by_name['arimoto'].value.value == pytest.approx(-by_name['n'].value.value)


def test_custom_utility_has_no_order():
    u = custom_utility(np.log, lambda x: 1.0 / x, label="mylog")
    inp = load_input(p_text="0.5,0.5", q_text="0.4,0.6")
    rows = compute_rows([u], ['h', 'renyi', 'sharma_mittal'], inp, SolveConfig())
    assert rows[0].value.value == pytest.approx(math.log(2.0), abs=1e-9)
    assert rows[1].value is None and rows[2].value is None
    assert 'n/a' in render_table(rows)


def test_frittelli_row_uses_q_as_reference():
    inp = load_input(p_text="0.5,0.5", q_text="0.25,0.75")
    row = compute_rows([logarithmic()], ['frittelli'], inp, SolveConfig())[0]
    assert row.value.value == pytest.approx(math.expm1(0.5 * math.log(2.0) + 0.5 * math.log(2.0 / 3.0)), abs=1e-9)


def test_json_payload():
    inp = load_input(p_text="0.5,0.5", q_text="1,0")
    rows = compute_rows([logarithmic(), isoelastic(-1.0)], ['H'], inp, SolveConfig())
    payload = json.loads(render_json(rows, inp, with_alloc=True))
    assert payload['p'] == [0.5, 0.5]
    assert payload['q'] == [1.0, 0.0]
    assert payload['rows'][0]['value'] == 'inf'
    assert payload['rows'][1]['value'] == pytest.approx(math.log(2.0), abs=1e-9)
    assert payload['rows'][1]['allocation'] is None
