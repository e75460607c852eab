import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from panelbreaks import DcConfig, brute_force_single_change, build_panel, dc_at, dc_statistic
from panelbreaks.errors import BadM, ConfigError, UnsortedInput
from tests.conftest import random_panel


class TestDcAt:
    @pytest.mark.parametrize("phi", [0.0, 0.3, 0.5, 1.0])
    @pytest.mark.parametrize("v", [0.5, 1.0, 7.25])
    def test_two_equal_values_m1(self, phi, v):
        # top mean is v, remainder contributes v / (2n - m) = v / 3
        expected = (3 / 4) ** phi * (v - v / 3)
        assert dc_at([v, v], 1, phi) == pytest.approx(expected, abs=1e-14)

    @pytest.mark.parametrize("phi", [0.0, 0.5, 1.0])
    @pytest.mark.parametrize("v", [0.5, 1.0, 7.25])
    def test_two_equal_values_m2(self, phi, v):
        # remainder sum is empty and the weight is exactly 1
        assert dc_at([v, v], 2, phi) == pytest.approx(v, abs=1e-14)

    def test_all_zero_input(self):
        for m in range(1, 5):
            assert dc_at([0.0, 0.0, 0.0, 0.0], m, 0.5) == 0.0

    def test_unsorted_rejected(self):
        with pytest.raises(UnsortedInput):
            dc_at([1.0, 2.0], 1, 0.5)

    def test_bad_m(self):
        with pytest.raises(BadM):
            dc_at([2.0, 1.0], 0, 0.5)
        with pytest.raises(BadM):
            dc_at([2.0, 1.0], 3, 0.5)

    def test_bad_phi(self):
        with pytest.raises(ConfigError):
            dc_at([2.0, 1.0], 1, 1.5)
        with pytest.raises(ConfigError):
            DcConfig(-0.1)

    @settings(max_examples=200, derandomize=True)
    @given(
        vals=st.lists(st.floats(0, 100), min_size=1, max_size=12),
        m_frac=st.floats(0, 1),
        phi=st.floats(0, 1),
    )
    def test_non_negative_on_sorted_input(self, vals, m_frac, phi):
        a = sorted(vals, reverse=True)
        m = 1 + int(m_frac * (len(a) - 1))
        assert dc_at(a, m, phi) >= -1e-12

    @settings(max_examples=200, derandomize=True)
    @given(vals=st.lists(st.floats(0, 100), min_size=1, max_size=12), m_frac=st.floats(0, 1))
    def test_phi_zero_drops_weight(self, vals, m_frac):
        a = sorted(vals, reverse=True)
        n = len(a)
        m = 1 + int(m_frac * (n - 1))
        manual = np.mean(a[:m]) - sum(a[m:]) / (2 * n - m)
        assert dc_at(a, m, 0.0) == pytest.approx(manual, abs=1e-12)

    def test_zero_padding_matches_updated_formula(self):
        # appending a zero |CUSUM| row changes only the 2n terms
        rng = np.random.default_rng(5)
        for _ in range(200):
            n = int(rng.integers(1, 10))
            a = np.sort(rng.uniform(0, 5, size=n))[::-1]
            padded = np.concatenate([a, [0.0]])
            phi = float(rng.uniform(0, 1))
            for m in range(1, n + 1):
                n2 = n + 1
                manual = ((m * (2 * n2 - m)) / (2 * n2)) ** phi * (
                    np.mean(a[:m]) - np.sum(a[m:]) / (2 * n2 - m)
                )
                assert dc_at(padded, m, phi) == pytest.approx(manual, abs=1e-12)


class TestDcStatistic:
    def test_zero_panel_exact_tiebreak(self):
        p = build_panel(np.zeros((3, 10)), list("abc"), range(10))
        r = dc_statistic(p, 1, 10, np.ones(3), DcConfig(0.5))
        assert r.value == 0.0
        assert r.b_star == 1 and r.m_star == 1

    def test_constant_panel_value_vanishes(self):
        p = build_panel(np.full((3, 10), 7.0), list("abc"), range(10))
        r = dc_statistic(p, 1, 10, np.ones(3), DcConfig(0.5))
        assert r.value == pytest.approx(0.0, abs=1e-12)

    def test_common_step_located(self, rng):
        for _ in range(10):
            b0 = int(rng.integers(10, 55))
            x = np.zeros((4, 64))
            x[:, b0:] += rng.uniform(1, 2, size=(4, 1)) * rng.choice([-1.0, 1.0], size=(4, 1))
            p = build_panel(x, list("abcd"), range(64))
            r = dc_statistic(p, 1, 64, np.ones(4), DcConfig(0.5))
            bb, mm, vv = brute_force_single_change(p, 1, 64, np.ones(4), 0.5)
            assert r.b_star == b0 == bb

    def test_matches_brute_force(self, rng):
        cfg = DcConfig(0.5)
        for _ in range(50):
            p = random_panel(rng, 8, 64)
            scales = rng.uniform(0.5, 2.0, size=8)
            r = dc_statistic(p, 1, 64, scales, cfg)
            bb, mm, vv = brute_force_single_change(p, 1, 64, scales, 0.5)
            assert (r.b_star, r.m_star) == (bb, mm)
            assert r.value == pytest.approx(vv, abs=1e-10)

    def test_matches_brute_force_on_subinterval(self, rng):
        cfg = DcConfig(0.7)
        for _ in range(20):
            p = random_panel(rng, 5, 48)
            s = int(rng.integers(1, 20))
            e = int(rng.integers(s + 4, 49))
            r = dc_statistic(p, s, e, np.ones(5), cfg)
            bb, mm, vv = brute_force_single_change(p, s, e, np.ones(5), 0.7)
            assert (r.b_star, r.m_star) == (bb, mm)
            assert r.value == pytest.approx(vv, abs=1e-10)
            assert s <= r.b_star < e

    def test_row_permutation_invariance(self):
        rng = np.random.default_rng(21)
        cfg = DcConfig(0.5)
        for _ in range(200):
            n = int(rng.integers(2, 9))
            T = int(rng.integers(8, 40))
            vals = rng.standard_normal((n, T))
            scales = rng.uniform(0.5, 2.0, size=n)
            perm = rng.permutation(n)
            p1 = build_panel(vals, [f"s{i}" for i in range(n)], range(T))
            p2 = build_panel(vals[perm], [f"s{i}" for i in range(n)], range(T))
            r1 = dc_statistic(p1, 1, T, scales, cfg)
            r2 = dc_statistic(p2, 1, T, scales[perm], cfg)
            assert (r1.b_star, r1.m_star, r1.value) == (r2.b_star, r2.m_star, r2.value)

    def test_maximum_non_negative(self):
        rng = np.random.default_rng(22)
        cfg = DcConfig(1.0)
        for _ in range(200):
            n = int(rng.integers(1, 7))
            T = int(rng.integers(4, 40))
            p = build_panel(rng.standard_normal((n, T)), [f"s{i}" for i in range(n)], range(T))
            assert dc_statistic(p, 1, T, np.ones(n), cfg).value >= 0.0
