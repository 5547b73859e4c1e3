import math
import warnings

import pytest

from ym2.partition_function import (
    GaussianHWMeasure,
    NonConvergenceError,
    coupling_expectation,
    coupling_partition_function,
    gaussian_expectation,
    limit_high_genus,
    limit_torus,
    log_energy_functional,
    migdal_partial_sum,
    migdal_z,
    sphere_free_energy,
    sphere_rewrite_check,
    torus_expansion,
)
from ym2.qseries import euler_phi, theta, theta_qdq
from ym2.reps import casimir_u


def brute_z2(g, t, span=40):
    """Independent double sum over weights of the rank-2 group."""
    tot = 0.0
    for l1 in range(-span, span + 1):
        for l2 in range(-span, l1 + 1):
            c2 = (l1 * l1 + l2 * l2 + l1 - l2) / 2.0
            tot += math.exp(-t / 2 * c2) * float(l1 - l2 + 1) ** (2 - 2 * g)
    return tot


class TestMigdal:
    def test_rank_one_is_theta(self):
        for g in (0, 1, 2, 3):
            for t in (1.0, 2.0, 4.0):
                z = migdal_z(1, g, t, 1e-12)
                assert z.value == pytest.approx(
                    theta(math.exp(-t / 2), 1e-15).value, abs=1e-12
                )

    def test_rank_two_against_brute_force(self):
        for g, t in [(0, 3.0), (1, 2.0), (2, 2.0), (2, 4.0), (3, 2.0)]:
            assert migdal_z(2, g, t, 1e-12).value == pytest.approx(
                brute_z2(g, t), abs=1e-10
            )

    def test_nonincreasing_in_genus(self):
        vals = [migdal_z(3, g, 2.0).value for g in (0, 1, 2, 3)]
        assert all(b <= a for a, b in zip(vals, vals[1:]))

    def test_nonincreasing_in_area(self):
        vals = [migdal_z(3, 2, t).value for t in (1.0, 2.0, 4.0, 8.0)]
        assert all(b <= a for a, b in zip(vals, vals[1:]))

    def test_partial_sums_nondecreasing_in_cap(self):
        for g in (1, 2):
            caps = [1.0, 2.0, 4.0, 8.0, 16.0]
            vals = [migdal_partial_sum(3, g, 2.0, c) for c in caps]
            assert all(b >= a for a, b in zip(vals, vals[1:]))
            assert vals[-1] <= migdal_z(3, g, 2.0).value + 1e-12

    def test_partial_approaches_total(self):
        assert migdal_partial_sum(4, 2, 2.0, 60.0) == pytest.approx(
            migdal_z(4, 2, 2.0, 1e-12).value, abs=1e-9
        )

    def test_rejects_bad_area(self):
        with pytest.raises(ValueError):
            migdal_z(2, 1, 0.0)
        with pytest.raises(ValueError):
            migdal_z(2, 1, -1.0)

    def test_small_t_warns(self):
        with pytest.warns(RuntimeWarning, match="slowly"):
            migdal_z(1, 2, 0.15)

    def test_nonconvergence_signal(self):
        with pytest.raises(NonConvergenceError):
            migdal_z(3, 1, 1.0, 1e-10, max_pair_size=2)


class TestLimits:
    def test_high_genus_reference(self):
        q = math.exp(-1.0)
        ref = 1.0 + 2.0 * sum(q ** (n * n) for n in range(1, 10))
        assert limit_high_genus(2.0) == pytest.approx(ref, abs=1e-12)

    def test_limits_at_large_area(self):
        assert limit_high_genus(60.0) == pytest.approx(1.0, abs=1e-12)
        assert limit_torus(60.0) == pytest.approx(1.0, abs=1e-12)

    def test_torus_reference_components(self):
        t = 2.0
        q = math.exp(-t / 2)
        assert limit_torus(t) == pytest.approx(
            theta(q, 1e-15).value / euler_phi(q, 1e-15).value ** 2
        )

    def test_high_genus_residual_shrinks(self):
        ref = limit_high_genus(2.0)
        r2 = abs(migdal_z(2, 2, 2.0).value - ref)
        r8 = abs(migdal_z(8, 2, 2.0).value - ref)
        assert r8 < r2


class TestGaussianMeasure:
    def test_normalization_is_torus_sum(self):
        m = GaussianHWMeasure(2, 2.0)
        assert m.normalization == pytest.approx(migdal_z(2, 1, 2.0).value)

    def test_unit_expectation(self):
        for N in (1, 2, 3):
            m = GaussianHWMeasure(N, 2.0)
            assert gaussian_expectation(m, lambda w: 1.0, 1e-10) == pytest.approx(
                1.0, abs=1e-9
            )

    def test_rank_one_even_moment(self):
        for t in (1.0, 2.0, 4.0):
            m = GaussianHWMeasure(1, t)
            got = gaussian_expectation(m, lambda w: float(w.coeffs[0]) ** 2, 1e-12)
            q = math.exp(-t / 2)
            ref = theta_qdq(q, 1, 1e-15).value / theta(q, 1e-15).value
            assert got == pytest.approx(ref, abs=1e-10)

    def test_rank_one_odd_moments_vanish(self):
        m = GaussianHWMeasure(1, 2.0)
        for k in (1, 3):
            got = gaussian_expectation(m, lambda w: float(w.coeffs[0]) ** k, 1e-12)
            assert abs(got) < 1e-12


class TestCoupling:
    @pytest.mark.parametrize("N", [3, 4])
    def test_identity_for_unit_and_casimir(self, N):
        t = 2.0
        measure = GaussianHWMeasure(N, t, tol=1e-11)
        for F in (lambda w: 1.0, lambda w: float(casimir_u(w))):
            lhs = gaussian_expectation(measure, F, 1e-10)
            rhs = coupling_expectation(N, t, F, tol=1e-9, z_value=measure.normalization)
            assert rhs == pytest.approx(lhs, abs=1e-7)

    def test_top_coefficient_observable(self):
        N, t = 3, 2.0
        measure = GaussianHWMeasure(N, t, tol=1e-11)
        F = lambda w: float(w.coeffs[0])
        lhs = gaussian_expectation(measure, F, 1e-10)
        rhs = coupling_expectation(N, t, F, tol=1e-9, z_value=measure.normalization)
        assert rhs == pytest.approx(lhs, abs=1e-7)

    def test_partition_function_recovered(self):
        for N, t in [(3, 2.0), (4, 3.0)]:
            zc = coupling_partition_function(N, t, tol=1e-10)
            zm = migdal_z(N, 1, t, 1e-12).value
            assert zc == pytest.approx(zm, abs=1e-8)

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_full_grid(self):
        # F in {1, casimir, top coefficient} over N in {3,4,5}, t in {1,2,4}
        observables = [
            lambda w: 1.0,
            lambda w: float(casimir_u(w)),
            lambda w: float(w.coeffs[0]),
        ]
        for N in (3, 4, 5):
            for t in (1.0, 2.0, 4.0):
                measure = GaussianHWMeasure(N, t, tol=1e-11)
                for F in observables:
                    lhs = gaussian_expectation(measure, F, 1e-8)
                    rhs = coupling_expectation(
                        N, t, F, tol=1e-6, z_value=measure.normalization
                    )
                    assert abs(lhs - rhs) < 1e-6, (N, t)


@pytest.mark.filterwarnings("ignore:extrapolation oracle disagrees:RuntimeWarning")
class TestTorusExpansion:
    def test_order_zero(self):
        e = torus_expansion(2.0, 0)
        assert e.coefficients == (limit_torus(2.0),)

    def test_rejects_high_order(self):
        with pytest.raises(ValueError):
            torus_expansion(2.0, 3)

    def test_second_moment_inputs(self):
        # E[X^2] assembled from the covering series and the theta logarithmic
        # derivative must match a direct product-measure summation
        t = 3.0
        q = math.exp(-t / 2)
        e = torus_expansion(t, 1)
        a0, a1 = e.coefficients
        from ym2.partitions import enumerate_partitions

        phi = euler_phi(q, 1e-15).value
        th = theta(q, 1e-15).value
        nu = theta_qdq(q, 1, 1e-15).value / th
        data = [
            (p.total_content(), n, phi * q**n)
            for n in range(0, 30)
            for p in enumerate_partitions(n)
        ]
        ek2 = sum(w * k * k for k, _, w in data)
        ea = sum(w * a for _, a, w in data)
        ea2 = sum(w * a * a for _, a, w in data)
        ex2 = 2 * ek2 + nu * (2 * ea2 - 2 * ea * ea)
        assert a1 == pytest.approx(a0 * t * t / 2 * ex2, rel=1e-6)

    def test_first_coefficient_against_large_rank_residuals(self):
        # at t = 4 the window N in {16, 24} is already asymptotic enough for
        # a two-point elimination of the 1/N^2 correction to land within 5%
        t = 4.0
        e = torus_expansion(t, 1, oracle_N=(16, 24))
        a0 = e.coefficients[0]
        resid = {}
        for n in (16, 24):
            resid[n] = (migdal_z(n, 1, t, 1e-12).value - a0) * n * n
        x16, x24 = 1 / 16**2, 1 / 24**2
        intercept = (x16 * resid[24] - x24 * resid[16]) / (x16 - x24)
        assert abs(intercept - e.coefficients[1]) / e.coefficients[1] < 0.05

    def test_expansion_has_no_odd_orders(self):
        # the expansion is organized purely in 1/N^2: p orders give p+1 terms
        e = torus_expansion(3.0, 2)
        assert len(e.coefficients) == 3
        assert len(e.oracle) == 3 and len(e.rel_errors) == 3


class TestSphere:
    def test_rank_one_closed_form(self):
        for t in (2.0, 5.0):
            got = sphere_free_energy(1, t)
            assert got == pytest.approx(
                math.log(theta(math.exp(-t / 2), 1e-15).value), abs=1e-10
            )

    def test_cauchy_gaps_shrink(self):
        vals = {n: sphere_free_energy(n, 5.0) for n in (2, 4, 6, 8)}
        gaps = [abs(vals[4] - vals[2]), abs(vals[6] - vals[4]), abs(vals[8] - vals[6])]
        assert gaps[1] < gaps[0] * 1.2 and gaps[2] < gaps[1]

    def test_log_energy_single_point(self):
        assert log_energy_functional([2.0], 3.0) == pytest.approx(6.0)

    def test_log_energy_rejects_collisions(self):
        with pytest.raises(ValueError, match="coinciding"):
            log_energy_functional([1.0, 1.0], 2.0)

    def test_rewrite_scaling_adjudication(self):
        # the staircase atoms must be divided by the rank: then the rewrite
        # is an exact identity, while the literal placement is badly off
        for N, t in [(2, 3.0), (3, 3.0)]:
            res = sphere_rewrite_check(N, t)
            assert res["rescaled"] < 1e-8
            assert res["literal"] > 1e-2

    def test_rank_one_both_scalings_exact(self):
        res = sphere_rewrite_check(1, 2.0)
        assert res["literal"] < 1e-10 and res["rescaled"] < 1e-10


class TestWarnings:
    def test_coupling_small_t_warns(self):
        with pytest.warns(RuntimeWarning, match="slowly"):
            with warnings.catch_warnings():
                warnings.simplefilter("always")
                try:
                    coupling_expectation(2, 0.1, lambda w: 1.0, size_max=4, level_max=3,
                                         z_value=1.0)
                except NonConvergenceError:
                    pass
