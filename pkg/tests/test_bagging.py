from fractions import Fraction

import numpy as np
import pytest

from stegid import (
    ActorRanking,
    Corpus,
    LINEAR,
    LofParams,
    SubModelSpec,
    detect_bagged,
    fuse_rankings,
    normalize,
    project,
    sample_subspaces,
)


def ranking_of(actors):
    n = len(actors)
    return ActorRanking(
        tuple((a, Fraction(n - i)) for i, a in enumerate(actors))
    )


class TestSampleSubspaces:
    def test_dimensions_in_range(self):
        specs = sample_subspaces(274, 64, master_seed=0)
        assert all(137 <= s.d <= 273 for s in specs)
        assert all(len(s.components) == s.d for s in specs)
        assert all(s.components == tuple(sorted(set(s.components))) for s in specs)
        assert all(0 <= c < 274 for s in specs for c in s.components)

    def test_degenerate_range_h2(self):
        specs = sample_subspaces(2, 10, master_seed=1)
        assert all(s.d == 1 for s in specs)

    def test_odd_h_uses_ceiling(self):
        specs = sample_subspaces(5, 50, master_seed=2)
        assert all(3 <= s.d <= 4 for s in specs)

    def test_deterministic(self):
        assert sample_subspaces(30, 8, 7) == sample_subspaces(30, 8, 7)
        assert sample_subspaces(30, 8, 7) != sample_subspaces(30, 8, 8)

    def test_seeds_derived_per_index(self):
        specs = sample_subspaces(30, 8, 7)
        assert len({s.seed for s in specs}) == 8
        # extending T keeps earlier specs identical
        longer = sample_subspaces(30, 12, 7)
        assert longer[:8] == specs

    def test_invalid_h(self):
        with pytest.raises(ValueError, match="H must be >= 2"):
            sample_subspaces(1, 4, 0)


class TestProject:
    def make(self):
        rng = np.random.default_rng(3)
        return normalize(Corpus(rng.standard_normal((3, 4, 6))))

    def test_selects_columns(self):
        c = self.make()
        spec = SubModelSpec(0, 5, (0, 1, 2, 4, 5), seed=0)
        out = project(c, spec)
        assert out.H == 5 and out.n == c.n and out.m == c.m
        np.testing.assert_array_equal(
            out.features, c.features[:, :, [0, 1, 2, 4, 5]]
        )
        assert out.normalized

    def test_identity_projection(self):
        c = self.make()
        spec = SubModelSpec(0, 6, tuple(range(6)), seed=0)
        out = project(c, spec)
        np.testing.assert_array_equal(out.features, c.features)

    def test_out_of_range_component(self):
        c = self.make()
        with pytest.raises(ValueError, match="out of range"):
            project(c, SubModelSpec(0, 2, (0, 6), seed=0))


class TestFuseRankings:
    def test_single_ranking_passthrough(self):
        r = ranking_of([2, 0, 1])
        fused = fuse_rankings([r], n=3)
        assert fused.actors == (2, 0, 1)
        assert fused.scores == (Fraction(3), Fraction(2), Fraction(1))

    def test_worked_two_model_example(self):
        fused = fuse_rankings([ranking_of([1, 0, 2]), ranking_of([1, 2, 0])], n=3)
        assert fused.actors == (1, 0, 2)  # tie at 3/2 broken by actor index
        scores = dict(fused.entries)
        assert scores[1] == Fraction(3)
        assert scores[0] == Fraction(3, 2)
        assert scores[2] == Fraction(3, 2)

    def test_unanimity(self):
        r = ranking_of([3, 1, 0, 2])
        fused = fuse_rankings([r, r, r], n=4)
        assert fused.actors == r.actors
        assert fused.scores == r.scores

    def test_rank_mass_conservation_exact(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            n = int(rng.integers(2, 12))
            t = int(rng.integers(1, 9))
            rankings = [
                ranking_of(rng.permutation(n).tolist()) for _ in range(t)
            ]
            fused = fuse_rankings(rankings, n)
            assert sum(fused.scores) == Fraction(n * (n + 1), 2)

    def test_order_of_rankings_irrelevant(self):
        rng = np.random.default_rng(5)
        rankings = [ranking_of(rng.permutation(5).tolist()) for _ in range(6)]
        fused = fuse_rankings(rankings, 5)
        assert fuse_rankings(rankings[::-1], 5) == fused

    def test_unanimous_winner_ranked_first(self):
        rng = np.random.default_rng(6)
        rankings = [
            ranking_of([4] + rng.permutation(4).tolist()) for _ in range(5)
        ]
        fused = fuse_rankings(rankings, 5)
        assert fused.actors[0] == 4
        assert fused.scores[0] == Fraction(5)

    def test_non_permutation_rejected(self):
        bad = ActorRanking(((0, Fraction(2)), (5, Fraction(1))))
        with pytest.raises(ValueError, match="permutation"):
            fuse_rankings([bad], n=2)

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="at least one"):
            fuse_rankings([], n=3)


class TestDetectBagged:
    def test_deterministic_given_seed(self):
        rng = np.random.default_rng(7)
        corpus = normalize(Corpus(rng.standard_normal((6, 8, 10))))
        a = detect_bagged(corpus, 1, LINEAR, LofParams(3), T=6, master_seed=9)
        b = detect_bagged(corpus, 1, LINEAR, LofParams(3), T=6, master_seed=9)
        assert a == b
        c = detect_bagged(corpus, 1, LINEAR, LofParams(3), T=6, master_seed=10)
        assert c.specs != a.specs

    def test_extreme_shift_detected(self):
        rng = np.random.default_rng(8)
        f = rng.standard_normal((10, 20, 8))
        f[4] += 10.0
        corpus = normalize(Corpus(f))
        bagged = detect_bagged(corpus, 1, LINEAR, LofParams(5), T=8, master_seed=0)
        assert bagged.final.actors[0] == 4
        assert all(r.actors[0] == 4 for r in bagged.submodels)

    def test_final_conservation_and_submodel_count(self):
        rng = np.random.default_rng(9)
        corpus = normalize(Corpus(rng.standard_normal((5, 6, 9))))
        bagged = detect_bagged(corpus, 2, LINEAR, LofParams(4), T=7, master_seed=3)
        assert len(bagged.submodels) == 7 and len(bagged.specs) == 7
        assert sum(bagged.final.scores) == Fraction(5 * 6, 2)

    def test_requires_normalized(self):
        with pytest.raises(ValueError, match="normalized"):
            detect_bagged(Corpus(np.zeros((3, 4, 4))), 1, LINEAR, LofParams(2), 2, 0)
