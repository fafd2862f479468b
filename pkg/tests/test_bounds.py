import math
import warnings

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphsketch.harness import bounds as B

mpmath.mp.dps = 40


def oracle_first(eps, k, l, d, true_query):
    eps, k, l, d = (mpmath.mpf(x) for x in (eps, k, l, d))
    var = l / d + ((k - l) if true_query else (k + 1 - l)) / d**2
    return 2 * mpmath.e ** (-(eps**2) / (2 * (var + eps / 3)))


def oracle_second(eps, k, l, d, true_query):
    eps, k, l, d = (mpmath.mpf(x) for x in (eps, k, l, d))
    if true_query:
        var = (2 * l + 1) / d + (k * l - 3 * l - 3) / d**2 + (k**2 - k * (l + 2) + l + 1) / d**3
    else:
        var = k * l / d**2 + (k**2 - k * l) / d**3
    return 2 * mpmath.e ** (-(eps**2) / (2 * (var + eps / 3)))


def oracle_inner(eps, q, n1, n2, k, d):
    eps, q, n1, n2, k, d = (mpmath.mpf(x) for x in (eps, q, n1, n2, k, d))
    return 2 * mpmath.e ** (-(eps**2) / (q / d + (n1 * n2 - k - q) / d**2 + eps / 3))


class TestClosedForms:
    @pytest.mark.parametrize("true_query", [True, False])
    def test_first_order_reference_point(self, true_query):
        got = B.bernstein_bound_first_order(0.5, 1000, 64, 320, true_query)
        assert got == pytest.approx(float(oracle_first(0.5, 1000, 64, 320, true_query)), rel=1e-13)

    def test_first_order_reference_value(self):
        var = 64 / 320 + 936 / 320**2
        assert B.first_order_variance(1000, 64, 320) == pytest.approx(var, rel=1e-15)
        # hand evaluation of 2 exp(-0.25 / (2 (0.2091406 + 1/6 = 0.3758073)))
        assert B.bernstein_bound_first_order(0.5, 1000, 64, 320) == pytest.approx(1.43409, rel=1e-5)

    @pytest.mark.parametrize("true_query", [True, False])
    def test_second_order_reference_point(self, true_query):
        got = B.bernstein_bound_second_order(0.5, 216, 6, 144, true_query)
        assert got == pytest.approx(float(oracle_second(0.5, 216, 6, 144, true_query)), rel=1e-13)

    @given(eps=st.floats(0.01, 1.99), k=st.integers(1, 5000), l=st.integers(0, 200), d=st.integers(1, 4096),
           true_query=st.booleans())
    def test_first_order_matches_oracle(self, eps, k, l, d, true_query):
        rest = k - l if true_query else k + 1 - l
        if rest < 0:
            return
        got = B.bernstein_bound_first_order(eps, k, l, d, true_query)
        assert got == pytest.approx(float(oracle_first(eps, k, l, d, true_query)), rel=1e-12)

    @given(eps=st.floats(0.01, 1.99), k=st.integers(10, 5000), l=st.integers(1, 9), d=st.integers(1, 4096),
           true_query=st.booleans())
    def test_second_order_matches_oracle(self, eps, k, l, d, true_query):
        got = B.bernstein_bound_second_order(eps, k, l, d, true_query)
        assert got == pytest.approx(float(oracle_second(eps, k, l, d, true_query)), rel=1e-12)

    @given(eps=st.floats(0.01, 5), q=st.integers(0, 1000), n1=st.integers(1, 200), n2=st.integers(1, 200),
           d=st.integers(1, 4096))
    def test_inner_product_matches_oracle(self, eps, q, n1, n2, d):
        k = min(n1, n2) // 2
        if n1 * n2 - k - q < 0:
            return
        got = B.inner_product_bound(eps, q, n1, n2, k, d)
        assert got == pytest.approx(float(oracle_inner(eps, q, n1, n2, k, d)), rel=1e-12)

    def test_all_adjacent_variance(self):
        assert B.first_order_variance(40, 40, 100) == pytest.approx(40 / 100)

    def test_self_norm_and_union_bound(self):
        assert B.self_norm_bound(0.3, 512) == pytest.approx(2 * math.exp(-512 * 0.09))
        assert B.jl_failure_bound(32, 0.5, 47) == pytest.approx(32 * 31 * math.exp(-47 / 4))

    def test_m_order_heuristic(self):
        assert B.m_order_noise_variance(81, 3, 81) == pytest.approx(81**3 / 81**4)


class TestClamping:
    def test_second_order_small_regime_warns(self):
        with pytest.warns(B.BoundWarning):
            var = B.second_order_variance(2, 0, 256, True)
        # k l - 3 l - 3 = -3 is clamped; the cubic term is 4 - 4 + 1 = 1
        assert var == pytest.approx(1 / 256 + 1 / 256**3)

    def test_no_warning_in_regime(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            B.second_order_variance(216, 6, 144, True)
            B.first_order_variance(1000, 64, 320, False)

    def test_first_order_clamps(self):
        with pytest.warns(B.BoundWarning):
            assert B.first_order_variance(3, 10, 100) == pytest.approx(0.1)


class TestMonotonicity:
    EPS = [0.05 * i for i in range(1, 40)]
    DIMS = [2**i for i in range(2, 14)]

    @pytest.mark.parametrize("fn", [B.bernstein_bound_first_order, B.bernstein_bound_second_order])
    @pytest.mark.parametrize("true_query", [True, False])
    def test_decreasing_in_eps_and_d(self, fn, true_query):
        k, l = 500, 12
        by_eps = [fn(e, k, l, 256, true_query) for e in self.EPS]
        by_d = [fn(0.5, k, l, d, true_query) for d in self.DIMS]
        assert all(a > b for a, b in zip(by_eps, by_eps[1:]))
        assert all(a > b for a, b in zip(by_d, by_d[1:]))

    def test_limit_large_eps(self):
        assert B.bernstein_bound_first_order(1e6, 1000, 64, 320) < 1e-100
        assert B.bernstein_bound_second_order(1e6, 216, 6, 144) < 1e-100

    def test_eps_must_be_positive(self):
        with pytest.raises(ValueError):
            B.bernstein_tail(0.0, 1.0)


class TestJLDimension:
    def test_reference_value(self):
        assert B.jl_dimension(32, 0.5, 0.01) == 47

    @given(n=st.integers(2, 10_000), eps=st.floats(0.05, 0.95), t=st.floats(1e-6, 0.5))
    def test_smallest_feasible(self, n, eps, t):
        d = B.jl_dimension(n, eps, t)
        assert B.jl_failure_bound(n, eps, d) <= t
        assert d == 1 or B.jl_failure_bound(n, eps, d - 1) > t

    @given(n=st.integers(2, 10_000), eps=st.floats(0.05, 0.95), t=st.floats(1e-6, 0.5))
    def test_close_to_log_form(self, n, eps, t):
        closed = math.ceil((math.log(1 / t) + math.log(n * (n - 1))) / eps**2)
        assert abs(B.jl_dimension(n, eps, t) - closed) <= 1

    def test_invalid(self):
        with pytest.raises(ValueError):
            B.jl_dimension(10, 1.5, 0.01)


class TestSlack:
    def test_values(self):
        assert B.tail_slack(0.0, 100) == pytest.approx(0.01)
        assert B.tail_slack(0.5, 100) == pytest.approx(3 * 0.05 + 0.01)
        assert B.tail_slack(1.7, 100) == pytest.approx(0.01)

    def test_realized_variances(self):
        assert B.realized_first_order_variance(3, 10, 10) == pytest.approx(0.3 + 7 / 100)
        assert B.inner_product_variance(5, 10, 10, 2, 10) == pytest.approx(0.5 + 93 / 100)
