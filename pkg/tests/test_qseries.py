import math

import pytest

from ym2.hurwitz import partition_count
from ym2.qseries import euler_phi, theta, theta_qdq, witten_zeta_su


def theta_oracle(q, n_span):
    return 1.0 + 2.0 * sum(q ** (n * n) for n in range(1, n_span + 1))


class TestTheta:
    def test_zero(self):
        assert theta(0.0).value == 1.0

    def test_half(self):
        ref = theta_oracle(0.5, 8)
        got = theta(0.5, 1e-8)
        assert abs(got.value - ref) < 1e-6
        assert abs(got.value - 2.1289368) < 1e-6

    def test_tail_is_rigorous(self):
        for q in (0.1, 0.5, 0.9):
            r = theta(q, 1e-6)
            exact = theta(q, 1e-15).value
            assert abs(r.value - exact) <= r.tail_bound
            assert r.rigorous

    def test_rejects_divergent(self):
        with pytest.raises(ValueError):
            theta(1.0)
        with pytest.raises(ValueError):
            theta(1.5)

    def test_increasing_in_q(self):
        grid = [0.05 * i for i in range(1, 19)]
        vals = [theta(q, 1e-12).value for q in grid]
        assert all(b > a for a, b in zip(vals, vals[1:]))


class TestThetaQdq:
    def test_k_zero_is_theta(self):
        assert theta_qdq(0.3, 0, 1e-12).value == theta(0.3, 1e-12).value

    def test_q_zero(self):
        assert theta_qdq(0.0, 2).value == 0.0

    def test_first_derivative_series(self):
        # direct series: sum n^2 q^(n^2); 1.5356460 at q = 1/2
        ref = 2.0 * sum(n * n * 0.5 ** (n * n) for n in range(1, 12))
        got = theta_qdq(0.5, 1, 1e-7)
        assert abs(got.value - ref) < 1e-5
        assert abs(got.value - 1.5356460) < 1e-5

    def test_second_derivative_series(self):
        q = 0.4
        ref = 2.0 * sum(n**4 * q ** (n * n) for n in range(1, 14))
        assert abs(theta_qdq(q, 2, 1e-10).value - ref) < 1e-8


class TestEulerPhi:
    def test_zero(self):
        assert euler_phi(0.0).value == 1.0

    def test_half(self):
        ref = 1.0
        for m in range(1, 41):
            ref *= 1.0 - 0.5**m
        got = euler_phi(0.5, 1e-8)
        assert abs(got.value - ref) < 1e-6
        assert abs(got.value - 0.2887881) < 1e-6

    def test_decreasing_in_q(self):
        grid = [0.05 * i for i in range(1, 19)]
        vals = [euler_phi(q, 1e-12).value for q in grid]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_tail_bound_holds(self):
        for q in (0.2, 0.6, 0.9):
            r = euler_phi(q, 1e-5)
            exact = euler_phi(q, 1e-15).value
            assert abs(r.value - exact) <= r.tail_bound

    @pytest.mark.parametrize("q", [0.1, 0.3, 0.5])
    def test_reciprocal_is_partition_series(self, q):
        n_cut = 20
        series = sum(partition_count(n) * q**n for n in range(n_cut + 1))
        # tail bound via p(n) < exp(pi sqrt(2n/3))
        tail = sum(
            math.exp(math.pi * math.sqrt(2 * n / 3.0)) * q**n for n in range(n_cut + 1, 400)
        )
        assert abs(series - 1.0 / euler_phi(q, 1e-15).value) <= tail + 1e-13


class TestTruncationReporting:
    def test_tail_shrinks_with_more_terms(self):
        loose = theta(0.6, 1e-4)
        tight = theta(0.6, 1e-12)
        assert tight.terms_used > loose.terms_used
        assert tight.tail_bound < loose.tail_bound
        loose_p = euler_phi(0.6, 1e-4)
        tight_p = euler_phi(0.6, 1e-12)
        assert tight_p.terms_used > loose_p.terms_used
        assert tight_p.tail_bound < loose_p.tail_bound


class TestWittenZeta:
    def test_su2_matches_riemann_termwise(self):
        # for single-row weights the dimension is m+1, so the partial sums
        # agree with the truncated Riemann series exactly
        cap = 50
        got = witten_zeta_su(2, 2.0, cap).value
        ref = sum(1.0 / d / d for d in range(1, cap + 2))
        assert abs(got - ref) < 1e-14

    def test_su2_close_to_riemann(self):
        got = witten_zeta_su(2, 2.0, 2000).value
        ref = sum(1.0 / n**2 for n in range(1, 200_000))
        assert abs(got - ref) < 1e-3

    def test_trivial_term(self):
        assert witten_zeta_su(5, 3.0, 0).value == 1.0

    def test_large_n_contracts_to_one(self):
        v4 = witten_zeta_su(4, 3.0, 20).value
        v8 = witten_zeta_su(8, 3.0, 20).value
        assert v8 - 1.0 < v4 - 1.0
        assert v8 > 1.0

    def test_heuristic_flag(self):
        assert witten_zeta_su(3, 2.5, 10).rigorous is False

    def test_rejects_bad_s(self):
        with pytest.raises(ValueError):
            witten_zeta_su(2, 1.0, 10)
