from fractions import Fraction

import numpy as np
import pytest

from stegid import (
    ActorRanking,
    Corpus,
    LINEAR,
    LofParams,
    Point,
    RankedTriple,
    detect_single,
    fuse_actor_scores,
    normalize,
    rank_points,
)


def make_points(actor_labels):
    points = []
    counters = {}
    for a in actor_labels:
        j = counters.get(a, 0)
        counters[a] = j + 1
        points.append(Point(actor=a, point_index=j, vectors=np.zeros((1, 1))))
    return points


def triples_for(actor_order, p, n):
    """Sorted triples with strictly decreasing scores and the given actors."""
    pn = p * n
    counters = {}
    out = []
    for pos, a in enumerate(actor_order):
        j = counters.get(a, 0)
        counters[a] = j + 1
        out.append(RankedTriple(float(pn - pos), a, j))
    return out


class TestRankPoints:
    def test_sorts_by_score_descending(self):
        points = make_points([0, 1, 2])
        triples = rank_points([0.5, 2.0, 1.0], points)
        assert [t.actor for t in triples] == [1, 2, 0]

    def test_tie_break_actor_then_point(self):
        points = make_points([0, 0, 1, 1])
        triples = rank_points([1.0, 1.0, 1.0, 1.0], points)
        assert [(t.actor, t.point_index) for t in triples] == [
            (0, 0), (0, 1), (1, 0), (1, 1),
        ]

    def test_is_sorted_permutation_of_input(self):
        rng = np.random.default_rng(0)
        scores = rng.standard_normal(30)
        points = make_points(list(range(30)))
        triples = rank_points(scores, points)
        got = [t.score for t in triples]
        assert got == sorted(scores.tolist(), reverse=True)
        assert sorted(t.actor for t in triples) == list(range(30))

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="scores for"):
            rank_points([1.0], make_points([0, 1]))


class TestFuseActorScores:
    def test_p1_reduces_to_reversed_rank(self):
        ranking = fuse_actor_scores(triples_for([1, 0, 2], 1, 3), n=3, p=1)
        assert ranking.actors == (1, 0, 2)
        assert ranking.scores == (Fraction(3), Fraction(2), Fraction(1))

    def test_p2_worked_example(self):
        ranking = fuse_actor_scores(triples_for([0, 1, 0, 1], 2, 2), n=2, p=2)
        assert ranking.actors == (0, 1)
        assert ranking.scores == (Fraction(3), Fraction(2))

    def test_rank_sum_conservation_exact(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            n = int(rng.integers(2, 10))
            p = int(rng.integers(1, 6))
            order = rng.permutation(np.repeat(np.arange(n), p))
            ranking = fuse_actor_scores(triples_for(order.tolist(), p, n), n, p)
            assert sum(ranking.scores) == Fraction(p * n * (p * n + 1), 2 * p)

    def test_wrong_actor_multiplicity(self):
        with pytest.raises(ValueError, match="appears"):
            fuse_actor_scores(triples_for([0, 0, 1, 0], 2, 2), n=2, p=2)

    def test_wrong_triple_count(self):
        with pytest.raises(ValueError, match="expected 4 triples"):
            fuse_actor_scores(triples_for([0, 1], 1, 2), n=2, p=2)

    def test_order_of_scores_irrelevant_given_same_actor_sequence(self):
        # any strictly decreasing score sequence gives the same ranking
        seq = [2, 0, 1, 2, 1, 0]
        a = fuse_actor_scores(triples_for(seq, 2, 3), 3, 2)
        alt = [
            RankedTriple(100.0 / (i + 1), t.actor, t.point_index)
            for i, t in enumerate(triples_for(seq, 2, 3))
        ]
        b = fuse_actor_scores(alt, 3, 2)
        assert a == b


class TestActorRanking:
    def test_rank_of(self):
        r = ActorRanking(((4, Fraction(3)), (1, Fraction(2)), (0, Fraction(1))))
        assert r.rank_of(4) == 1
        assert r.rank_of(0) == 3
        with pytest.raises(KeyError):
            r.rank_of(9)

    def test_rejects_increasing_scores(self):
        with pytest.raises(ValueError, match="non-increasing"):
            ActorRanking(((0, Fraction(1)), (1, Fraction(2))))

    def test_rejects_duplicate_actor(self):
        with pytest.raises(ValueError, match="once"):
            ActorRanking(((0, Fraction(2)), (0, Fraction(1))))


class TestDetectSingle:
    def test_identical_actors_fall_back_to_tie_break(self):
        block = np.arange(8.0).reshape(4, 2)
        corpus = normalize(Corpus(np.stack([block, block, block])))
        ranking = detect_single(corpus, p=2, kernel=LINEAR, lof=LofParams(3))
        assert ranking.actors == (0, 1, 2)

    def test_shifted_actor_ranked_first(self):
        rng = np.random.default_rng(2)
        f = rng.standard_normal((10, 20, 6))
        f[7] += 10.0
        ranking = detect_single(
            normalize(Corpus(f)), p=1, kernel=LINEAR, lof=LofParams(5)
        )
        assert ranking.actors[0] == 7

    def test_deterministic_rerun(self):
        rng = np.random.default_rng(3)
        f = rng.standard_normal((6, 8, 4))
        corpus = normalize(Corpus(f))
        a = detect_single(corpus, 2, LINEAR, LofParams(4))
        b = detect_single(corpus, 2, LINEAR, LofParams(4))
        assert a == b

    def test_requires_normalized_corpus(self):
        c = Corpus(np.zeros((3, 4, 2)))
        with pytest.raises(ValueError, match="normalized"):
            detect_single(c, 1, LINEAR, LofParams(2))

    def test_actor_relabeling_permutes_ranking(self):
        from stegid.distance import distance_matrix
        from stegid.corpus import partition
        from stegid.lof import lof_scores

        rng = np.random.default_rng(0)
        corpus = normalize(Corpus(rng.standard_normal((7, 6, 5))))
        scores = lof_scores(
            distance_matrix(partition(corpus, 1), LINEAR), LofParams(3)
        )
        assert len(set(scores.tolist())) == len(scores)  # tie-free instance
        base = detect_single(corpus, 1, LINEAR, LofParams(3))

        perm = np.array([3, 6, 0, 1, 4, 2, 5])  # new position of each actor
        relabeled = Corpus(corpus.features[np.argsort(perm)], normalized=True)
        moved = detect_single(relabeled, 1, LINEAR, LofParams(3))
        assert [perm[a] for a in base.actors] == list(moved.actors)
