import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.entropy import ProbVector, h_u
from core.errors import BadGrid, InvalidGamma, InvalidScale, NegativeArgument
from core.extreal import NEG_INF, POS_INF
from core.utility import (
    IsoelasticParams, affine, asymptotic_elasticity, check_inada, convex_dual, custom_utility,
    isoelastic, logarithmic, make_builtin, rescale, transform,
)

GRID = [0.01, 0.1, 1.0, 10.0, 100.0]


class TestBuiltins:
    def test_log_at_one(self):
        u = make_builtin("log")
        assert u.eval(1.0) == 0.0
        assert u.u_at_zero == NEG_INF
        assert u.u_at_infinity == POS_INF

    def test_isoelastic_negative_gamma_is_bounded_above(self):
        u = make_builtin("isoelastic", IsoelasticParams(-1.0))
        assert u.u_at_infinity == 1.0
        assert u.u_at_zero == NEG_INF

    def test_isoelastic_positive_gamma_is_bounded_below(self):
        u = isoelastic(0.5)
        assert u.u_at_zero == -2.0
        assert u.u_at_infinity == POS_INF

    def test_inverse_marginal_closed_form(self):
        u = isoelastic(0.5)
        assert u.inverse_marginal(4.0) == pytest.approx(1.0 / 16.0, rel=1e-14)
        numeric = custom_utility(u.eval, u.marginal, u_at_zero=-2.0)
        assert numeric.inverse_marginal(4.0) == pytest.approx(1.0 / 16.0, rel=1e-11)

    @pytest.mark.parametrize("gamma", [1.0, 1.5, 0.0, math.inf, math.nan])
    def test_invalid_gamma(self, gamma):
        with pytest.raises(InvalidGamma):
            isoelastic(gamma)

    def test_isoelastic_family_needs_params(self):
        with pytest.raises(InvalidGamma):
            make_builtin("isoelastic")

    def test_labels(self):
        assert logarithmic().label == "log"
        assert isoelastic(-1.0).label == "iso:-1"
        assert isoelastic(0.25).label == "iso:0.25"
        assert transform(logarithmic(), affine(2, 3)).label == "affine:2:3:log"
        assert transform(isoelastic(0.5), rescale(4)).label == "rescale:4:iso:0.5"


class TestRoundTrip:
    @pytest.mark.parametrize("u", [logarithmic(), isoelastic(0.25), isoelastic(0.5), isoelastic(0.75)],
                             ids=lambda u: u.label)
    def test_full_grid(self, u):
        xs = np.logspace(-6, 6, 49)
        np.testing.assert_allclose(u.inverse(u.eval(xs)), xs, rtol=1e-10)
        np.testing.assert_allclose(u.inverse_marginal(u.marginal(xs)), xs, rtol=1e-10)

    @pytest.mark.parametrize("gamma", [-2.0, -1.0, -0.5])
    def test_negative_gamma_away_from_saturation(self, gamma):
        xs = np.logspace(-6, 6, 49)
        xs = xs[xs ** gamma >= 1e-4]
        u = isoelastic(gamma)
        np.testing.assert_allclose(u.inverse(u.eval(xs)), xs, rtol=1e-10)
        np.testing.assert_allclose(u.inverse_marginal(u.marginal(xs)), xs, rtol=1e-10)

    def test_synthesized_inverse(self):
        u = custom_utility(np.log, lambda x: 1.0 / x, label="mylog")
        for x in (1e-5, 0.3, 1.0, 7.0, 1e5):
            assert u.inverse(math.log(x)) == pytest.approx(x, rel=1e-11)
            assert u.inverse_marginal(1.0 / x) == pytest.approx(x, rel=1e-11)


class TestTransform:
    def test_affine(self):
        u = transform(logarithmic(), affine(2, 3))
        assert u.eval(1.0) == 3.0
        assert u.marginal(2.0) == pytest.approx(1.0)
        assert u.inverse(3.0) == pytest.approx(1.0)
        assert u.inverse_marginal(2.0) == pytest.approx(1.0)

    def test_affine_is_composed_arithmetic(self):
        base = isoelastic(-0.5)
        u = transform(base, affine(1.7, -0.4))
        for x in (0.1, 1.0, 3.0):
            assert u.eval(x) == 1.7 * base.eval(x) + -0.4

    def test_affine_bounds_follow(self):
        u = transform(isoelastic(-1.0), affine(2, 3))
        assert u.u_at_infinity == 5.0
        assert u.u_at_zero == NEG_INF

    def test_rescale(self):
        u = transform(logarithmic(), rescale(5))
        assert u.eval(1.0) == pytest.approx(math.log(5))
        assert u.marginal(1.0) == pytest.approx(1.0)
        assert u.inverse(math.log(5)) == pytest.approx(1.0)
        assert u.inverse_marginal(1.0) == pytest.approx(1.0)

    def test_identity_transform_keeps_entropy(self):
        p = ProbVector.from_values([0.8, 0.2])
        base = isoelastic(0.5)
        same = transform(base, affine(1, 0))
        assert h_u(same, p).entropy.value == pytest.approx(h_u(base, p).entropy.value, abs=1e-14)

    @pytest.mark.parametrize("params", [lambda: affine(0, 1), lambda: affine(-1, 0), lambda: rescale(0),
                                        lambda: rescale(-2)])
    def test_invalid_scale(self, params):
        with pytest.raises(InvalidScale):
            params()


class TestConvexDual:
    def test_log_at_one(self):
        assert convex_dual(logarithmic(), 1.0) == -1.0

    def test_boundary_conventions(self):
        assert convex_dual(logarithmic(), 0.0) == POS_INF
        assert convex_dual(isoelastic(-1.0), math.inf) == NEG_INF
        assert convex_dual(isoelastic(-1.0), 0.0) == 1.0
        assert convex_dual(isoelastic(0.5), math.inf) == -2.0

    def test_negative_argument(self):
        with pytest.raises(NegativeArgument):
            convex_dual(logarithmic(), -0.5)

    def test_closed_form_matches_numeric(self):
        base = isoelastic(-2.0)
        numeric = custom_utility(base.eval, base.marginal, u_at_infinity=0.5)
        for y in (0.01, 0.5, 1.0, 4.0, 100.0):
            assert float(convex_dual(numeric, y)) == pytest.approx(float(convex_dual(base, y)), rel=1e-10)

    @settings(max_examples=200, deadline=None)
    @given(x=st.floats(min_value=1e-4, max_value=1e4), y=st.floats(min_value=1e-4, max_value=1e4),
           gamma=st.sampled_from([0.0, -2.0, -1.0, -0.5, 0.25, 0.5, 0.75]))
    def test_fenchel_young(self, x, y, gamma):
        u = logarithmic() if gamma == 0.0 else isoelastic(gamma)
        dual = float(convex_dual(u, y))
        assert float(u.eval(x)) - y * x <= dual + 1e-12 * (1.0 + abs(dual))
        best = float(u.inverse_marginal(y))
        assert float(u.eval(best)) - y * best == pytest.approx(dual, rel=1e-9, abs=1e-12)


class TestElasticity:
    def test_exact_values(self):
        assert asymptotic_elasticity(isoelastic(0.5)).value == 0.5
        assert asymptotic_elasticity(logarithmic()).value == 0.0
        est = asymptotic_elasticity(isoelastic(-1.0))
        assert est.value == 0.0 and est.exact

    def test_numeric_estimate_for_negative_gamma(self):
        base = isoelastic(-1.0)
        u = custom_utility(base.eval, base.marginal, u_at_infinity=1.0)
        est = asymptotic_elasticity(u)
        assert not est.exact
        assert 0.0 <= est.value < 1e-3

    def test_numeric_estimate_for_power(self):
        base = isoelastic(0.5)
        u = custom_utility(base.eval, base.marginal, u_at_zero=-2.0)
        est = asymptotic_elasticity(u)
        assert est.value == pytest.approx(0.5, abs=0.05)


class TestInada:
    @pytest.mark.parametrize("u", [logarithmic(), isoelastic(0.9)], ids=lambda u: u.label)
    def test_builtins_pass(self, u):
        report = check_inada(u, GRID)
        assert report.passed, report.issues()

    def test_linear_function_fails_concavity(self):
        u = custom_utility(lambda x: x, lambda x: 1.0, label="linear")
        report = check_inada(u, GRID)
        assert not report.passed
        assert report.concavity

    @pytest.mark.parametrize("grid", [[1.0, 2.0], [1.0, 0.5, 3.0], [-1.0, 1.0, 2.0], [0.0, 1.0, 2.0]])
    def test_bad_grid(self, grid):
        with pytest.raises(BadGrid):
            check_inada(logarithmic(), grid)
