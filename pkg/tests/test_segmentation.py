import numpy as np
import pytest

from panelbreaks import (
    DcConfig,
    PlantedPanelSpec,
    build_panel,
    detect_mean_changes,
    gen_piecewise_panel,
    segment_means,
)
from panelbreaks.errors import ConfigError, FingerprintMismatch


def planted(seed, n=4, T=120, breaks=((40, 1.0), (80, 1.0)), noise=0.0, rho=0.0):
    spec = PlantedPanelSpec(
        n=n,
        T=T,
        mean_breaks=tuple((idx, (jump,) * n) for idx, jump in breaks),
        noise_sd=noise,
        rho=rho,
        seed=seed,
    )
    return gen_piecewise_panel(spec)


class TestDetectMeanChanges:
    def test_constant_panel_no_changes(self):
        p = build_panel(np.full((3, 50), 2.0), list("abc"), range(50))
        res = detect_mean_changes(p, 0.5)
        assert res.change_points == ()
        assert res.segments == ((1, 50),)

    def test_two_noiseless_common_steps(self):
        p, spec = planted(seed=0)
        res = detect_mean_changes(p, 0.1, min_seg=5)
        assert res.indices() == (40, 80)
        assert res.segments == ((1, 40), (41, 80), (81, 120))
        assert all(cp.kind == "mean" for cp in res.change_points)
        assert all(cp.dc_value > 0.1 for cp in res.change_points)

    def test_infinite_threshold_finds_nothing(self):
        p, _ = planted(seed=1)
        res = detect_mean_changes(p, np.inf)
        assert res.change_points == ()

    def test_min_seg_validation(self):
        p, _ = planted(seed=2)
        with pytest.raises(ConfigError):
            detect_mean_changes(p, 0.1, min_seg=1)
        with pytest.raises(ConfigError):
            detect_mean_changes(p, -0.5)

    def test_change_points_report_years(self):
        x = np.zeros((2, 30))
        x[:, 15:] = 3.0
        p = build_panel(x, ["a", "b"], range(1991, 2021))
        res = detect_mean_changes(p, 0.1)
        assert res.indices() == (15,)
        # the year at index b: the last year of the left segment
        assert res.years() == (2005,)

    def test_determinism(self):
        p, _ = planted(seed=3, noise=1.0, breaks=((60, 3.0),))
        r1 = detect_mean_changes(p, 2.0)
        r2 = detect_mean_changes(p, 2.0)
        assert r1 == r2

    def test_min_seg_spacing(self):
        rng = np.random.default_rng(8)
        for _ in range(30):
            p, _ = planted(
                seed=int(rng.integers(1 << 30)), noise=1.0, breaks=((40, 2.0), (80, -2.0))
            )
            res = detect_mean_changes(p, 1.0, min_seg=5)
            idx = res.indices()
            assert all(b >= 5 and b <= 115 for b in idx)
            assert all(b2 - b1 >= 5 for b1, b2 in zip(idx, idx[1:]))

    def test_threshold_monotonicity(self):
        # the recursion tree at a higher threshold prunes the lower one's
        rng = np.random.default_rng(9)
        for _ in range(100):
            p, _ = planted(
                seed=int(rng.integers(1 << 30)),
                noise=1.0,
                breaks=((30, 2.5), (60, -2.0), (90, 3.0)),
            )
            lo = detect_mean_changes(p, 2.0)
            hi = detect_mean_changes(p, 6.0)
            assert set(hi.indices()) <= set(lo.indices())
            assert len(hi.indices()) <= len(lo.indices())

    def test_segments_partition_timeline(self):
        p, _ = planted(seed=4, noise=1.0, breaks=((40, 3.0), (80, 3.0)))
        res = detect_mean_changes(p, 2.0)
        covered = []
        for s, e in res.segments:
            covered.extend(range(s, e + 1))
        assert covered == list(range(1, 121))


class TestSegmentMeans:
    def test_no_changes_gives_global_means(self):
        p = build_panel([[1.0, 2.0, 3.0, 4.0]], ["a"], range(4))
        res = detect_mean_changes(p, np.inf)
        means = segment_means(p, res)
        assert means.shape == (1, 1)
        assert means[0, 0] == pytest.approx(2.5)

    def test_noiseless_levels_recovered(self):
        x = np.concatenate([np.zeros(20), np.full(20, 5.0)])
        p = build_panel([x], ["a"], range(40))
        res = detect_mean_changes(p, 0.1)
        assert res.indices() == (20,)
        means = segment_means(p, res)
        assert np.allclose(means, [[0.0, 5.0]])

    def test_fingerprint_mismatch(self):
        p1 = build_panel([[1.0, 2.0, 3.0, 4.0]], ["a"], range(4))
        p2 = build_panel([[1.0, 2.0, 3.0, 5.0]], ["a"], range(4))
        res = detect_mean_changes(p1, np.inf)
        with pytest.raises(FingerprintMismatch):
            segment_means(p2, res)
