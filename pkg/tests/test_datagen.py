import numpy as np
import pytest

from etlmsc import (
    MultiViewSpec,
    RankTooLarge,
    fft_mode3,
    gen_lowrank_sparse,
    gen_multiview,
    markov_spectral_cluster,
    pair_metrics,
    tnn,
    transition_matrix,
    gaussian_similarity,
)


def small_spec(**overrides):
    base = dict(
        n_samples=30,
        n_clusters=3,
        n_views=2,
        dims=(4,),
        separation=10.0,
        noise=(1.0,),
        complementary=False,
        seed=0,
    )
    base.update(overrides)
    return MultiViewSpec(**base)


class TestMultiViewSpec:
    def test_broadcasts_dims_and_noise(self):
        spec = small_spec(n_views=3)
        assert spec.dims == (4, 4, 4)
        assert spec.noise == (1.0, 1.0, 1.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            small_spec(n_samples=5)  # < 2 * clusters
        with pytest.raises(ValueError):
            small_spec(dims=(4, 4, 4))  # wrong arity
        with pytest.raises(ValueError):
            small_spec(dims=(2,))  # simplex needs dim >= clusters
        with pytest.raises(ValueError):
            small_spec(noise=(-1.0,))


class TestGenMultiview:
    def test_noiseless_geometry(self):
        views, truth = gen_multiview(small_spec(noise=(0.0,)))
        for x in views:
            for c in range(3):
                pts = x[truth.labels == c]
                assert np.max(np.abs(pts - pts[0])) == 0.0
            centers = np.stack([x[truth.labels == c][0] for c in range(3)])
            for i in range(3):
                for j in range(i + 1, 3):
                    d = np.linalg.norm(centers[i] - centers[j])
                    assert d == pytest.approx(10.0, rel=1e-12)

    def test_deterministic(self):
        a_views, a_truth = gen_multiview(small_spec(seed=42))
        b_views, b_truth = gen_multiview(small_spec(seed=42))
        assert np.array_equal(a_truth.labels, b_truth.labels)
        for a, b in zip(a_views, b_views):
            assert np.array_equal(a, b)

    def test_cluster_sizes_balanced(self):
        _, truth = gen_multiview(small_spec(n_samples=31))
        sizes = np.bincount(truth.labels)
        assert sizes.max() - sizes.min() <= 1

    def test_complementary_merges_one_pair_per_view(self):
        views, truth = gen_multiview(
            small_spec(n_views=3, complementary=True, noise=(0.0,))
        )
        for v, x in enumerate(views):
            merged = v % 3
            partner = (merged + 1) % 3
            a = x[truth.labels == merged][0]
            b = x[truth.labels == partner][0]
            assert np.array_equal(a, b)
            third = x[truth.labels == (3 - merged - partner) % 3][0]
            assert np.linalg.norm(third - a) > 1.0

    def test_ideal_separation_single_view_clusters_perfectly(self):
        for seed in range(20):
            views, truth = gen_multiview(
                small_spec(n_samples=45, separation=20.0, noise=(1.0,), seed=seed)
            )
            p = transition_matrix(gaussian_similarity(views[0]))
            part = markov_spectral_cluster(p, 3, seed=seed, restarts=10)
            assert pair_metrics(truth.labels, part.labels)["ari"] == 1.0


class TestGenLowrankSparse:
    def test_zero_fraction(self):
        p, z0, e0 = gen_lowrank_sparse(8, 3, 8, 2, 0.0, seed=0)
        assert np.array_equal(p, z0)
        assert np.all(e0 == 0)

    def test_corrupt_fiber_count(self):
        _, _, e0 = gen_lowrank_sparse(10, 4, 6, 2, 0.05, seed=1)
        corrupt = np.abs(e0).sum(axis=2) > 0
        assert corrupt.sum() == round(0.05 * 40)

    def test_full_rank_factors(self):
        _, z0, _ = gen_lowrank_sparse(6, 3, 5, 3, 0.0, seed=2)
        zf = fft_mode3(z0)
        for k in range(5):
            s = np.linalg.svd(zf[:, :, k], compute_uv=False)
            assert s[-1] > 1e-10 * s[0]

    def test_rank_two_fourier_slices(self):
        _, z0, _ = gen_lowrank_sparse(8, 3, 6, 2, 0.0, seed=3)
        zf = fft_mode3(z0)
        for k in range(6):
            s = np.linalg.svd(zf[:, :, k], compute_uv=False)
            assert s[2] < 1e-10 * s[0]
        assert np.isfinite(tnn(z0))

    def test_deterministic(self):
        a = gen_lowrank_sparse(6, 3, 4, 2, 0.1, seed=9)
        b = gen_lowrank_sparse(6, 3, 4, 2, 0.1, seed=9)
        for x, y in zip(a, b):
            assert np.array_equal(x, y)

    def test_rank_too_large(self):
        with pytest.raises(RankTooLarge):
            gen_lowrank_sparse(6, 3, 4, 4, 0.1)
        with pytest.raises(ValueError):
            gen_lowrank_sparse(6, 3, 4, 2, 1.0)
