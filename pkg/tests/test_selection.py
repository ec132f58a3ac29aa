"""Selection schemes: rule-level contracts, properties, and oracle checks."""

from types import SimpleNamespace

import numpy as np
import pytest

import reference as ref
from desbal.pool import DselSet, Pool
from desbal.selection import (
    DesKnnConfig,
    McbConfig,
    Query,
    RegionOfCompetence,
    SelectionContext,
    SelectorConfig,
    dfp_prune,
    double_fault,
    extract_meta_features,
    profile_similarity,
    region_of_competence,
    rrc_correct_probability,
    run_selector,
    select_desknn,
    select_desp,
    select_desrrc,
    select_fire,
    select_kne,
    select_knu,
    select_lca,
    select_mcb,
    select_metades,
    select_rank,
    static_majority_vote,
    train_meta_classifier,
)
from desbal.tree import DecisionTree, LEAF


class FakeCtx:
    """Hand-crafted hit/prediction matrices standing in for a real context."""

    def __init__(self, hits, predictions, dsel_labels, n_classes):
        self.hits = np.asarray(hits, dtype=bool)
        self.predictions = np.asarray(predictions, dtype=int)
        self.dsel = SimpleNamespace(
            labels=np.asarray(dsel_labels, dtype=int),
            features=None,
        )
        self.n_classes = n_classes

    @property
    def pool_size(self):
        return self.hits.shape[0]


def _query(preds_q, k, n_classes=None):
    preds_q = np.asarray(preds_q, dtype=int)
    L = n_classes or int(preds_q.max()) + 1
    return Query(
        x=np.zeros(1),
        roc=RegionOfCompetence(
            indices=np.arange(k), distances=np.linspace(0.0, 1.0, k)
        ),
        predictions=preds_q,
        supports=np.full((preds_q.size, L), 1.0 / L),
    )


class TestRegionOfCompetence:
    def test_exact_row_is_first(self):
        dsel = np.array([[0.0], [3.0], [7.0]])
        roc = region_of_competence(dsel, np.array([3.0]), k=2)
        assert roc.indices[0] == 1
        assert roc.distances[0] == 0.0

    def test_k_equals_dsel(self):
        dsel = np.array([[0.0], [1.0], [2.0]])
        roc = region_of_competence(dsel, np.array([0.9]), k=3)
        assert sorted(roc.indices.tolist()) == [0, 1, 2]
        assert (np.diff(roc.distances) >= 0).all()

    def test_one_dimensional_example(self):
        dsel = np.array([[0.0], [1.0], [2.0], [10.0]])
        roc = region_of_competence(dsel, np.array([1.4]), k=2)
        assert set(roc.indices.tolist()) == {1, 2}

    def test_small_dsel_warns_and_shrinks(self, caplog):
        with caplog.at_level("WARNING"):
            roc = region_of_competence(np.array([[0.0], [1.0]]), np.array([0.5]), k=7)
        assert len(roc) == 2

    def test_distance_tie_breaks_low_index(self):
        dsel = np.array([[1.0], [-1.0], [1.0]])
        roc = region_of_competence(dsel, np.array([0.0]), k=2)
        assert roc.indices.tolist() == [0, 1]


class TestProfileSimilarity:
    def test_identity(self):
        assert profile_similarity([1, 0, 1, 1], [1, 0, 1, 1]) == 1.0

    def test_half(self):
        assert profile_similarity([1, 0, 1, 1], [1, 1, 1, 0]) == 0.5

    def test_disjoint(self):
        assert profile_similarity([0, 0], [1, 1]) == 0.0

    def test_symmetric_and_hamming(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            u = rng.integers(0, 3, size=8)
            v = rng.integers(0, 3, size=8)
            assert profile_similarity(u, v) == profile_similarity(v, u)
            assert profile_similarity(u, v) == pytest.approx(
                1.0 - np.mean(u != v)
            )

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            profile_similarity([1, 2], [1, 2, 3])


class TestRank:
    def test_consecutive_run(self):
        hits = np.array([[1, 1, 0, 1, 1, 1, 1]])
        ctx = FakeCtx(hits, hits, np.zeros(7), 2)
        # pad with a weaker classifier so the run of 2 must win
        ctx2 = FakeCtx(
            np.vstack([hits, [[0, 1, 1, 1, 1, 1, 1]]]),
            np.zeros((2, 7)), np.zeros(7), 2,
        )
        result = select_rank(ctx2, _query([1, 0], k=7))
        assert result.selected.tolist() == [0]

    def test_perfect_run_selected(self):
        hits = np.array([[1, 1, 1, 1, 1, 1, 1], [1, 1, 1, 0, 1, 1, 1]])
        ctx = FakeCtx(hits, np.zeros((2, 7)), np.zeros(7), 2)
        result = select_rank(ctx, _query([1, 0], k=7))
        assert result.selected.tolist() == [0]
        assert result.predicted_class == 1

    def test_all_miss_first_neighbour_tie(self):
        hits = np.zeros((3, 7))
        ctx = FakeCtx(hits, np.zeros((3, 7)), np.zeros(7), 2)
        result = select_rank(ctx, _query([1, 1, 1], k=7))
        assert result.selected.tolist() == [0]


class TestLca:
    def test_fraction_of_same_class_neighbours(self):
        # neighbours 0-2 belong to the predicted class 1; hits on 2 of them
        dsel_labels = np.array([1, 1, 1, 0, 0, 0, 0])
        hits = np.array([[1, 1, 0, 1, 1, 1, 1]])
        ctx = FakeCtx(hits, np.ones((1, 7)), dsel_labels, 2)
        result = select_lca(ctx, _query([1], k=7, n_classes=2))
        assert result.selected.tolist() == [0]
        # competence never exposed directly; check through a rival
        rival_hits = np.array([[1, 1, 0, 1, 1, 1, 1], [1, 1, 1, 0, 0, 0, 0]])
        ctx2 = FakeCtx(rival_hits, np.ones((2, 7)), dsel_labels, 2)
        result2 = select_lca(ctx2, _query([1, 1], k=7, n_classes=2))
        assert result2.selected.tolist() == [1]  # 3/3 beats 2/3

    def test_no_neighbour_of_predicted_class(self):
        dsel_labels = np.zeros(7, dtype=int)
        # classifier 0 predicts class 2 (absent from the region) -> competence
        # 0 despite perfect hits; classifier 1 has real hits on class 0
        hits = np.array([[1] * 7, [1, 0, 0, 0, 0, 0, 0]])
        ctx = FakeCtx(hits, np.zeros((2, 7)), dsel_labels, 3)
        result = select_lca(ctx, _query([2, 0], k=7, n_classes=3))
        assert result.selected.tolist() == [1]
        # when everyone lands on 0, the tie goes to the lowest index
        ctx_tie = FakeCtx(np.array([[1] * 7, [0] * 7]), np.zeros((2, 7)), dsel_labels, 3)
        tie = select_lca(ctx_tie, _query([2, 0], k=7, n_classes=3))
        assert tie.selected.tolist() == [0]


class TestMcb:
    def test_empty_filtered_region_falls_back(self):
        hits = np.array([[1] * 7, [0] * 7])
        preds_dsel = np.ones((2, 7), dtype=int)
        ctx = FakeCtx(hits, preds_dsel, np.ones(7), 2)
        # profiles of neighbours are (1,1); query profile (0,0): similarity 0
        result = select_mcb(ctx, _query([0, 0], k=7), McbConfig(t_s=0.7, t_c=0.1))
        assert result.selected.size == 2  # whole pool

    def test_clear_winner_selected(self):
        # similarities 1 > t_s keep every neighbour; accuracies 0.9.. vs 0.7..
        hits = np.array(
            [[1, 1, 1, 1, 1, 1, 0], [1, 1, 1, 1, 1, 0, 0], [0] * 7]
        )
        preds_dsel = np.zeros((3, 7), dtype=int)
        ctx = FakeCtx(hits, preds_dsel, np.zeros(7), 2)
        query = _query([0, 0, 0], k=7)
        result = select_mcb(ctx, query, McbConfig(t_s=0.5, t_c=0.1))
        assert result.selected.tolist() == [0]  # 6/7 - 5/7 > 0.1

    def test_close_competences_fall_back(self):
        hits = np.array([[1, 1, 1, 1, 1, 1, 0], [1, 1, 1, 1, 1, 1, 0]])
        preds_dsel = np.zeros((2, 7), dtype=int)
        ctx = FakeCtx(hits, preds_dsel, np.zeros(7), 2)
        result = select_mcb(ctx, _query([0, 0], k=7), McbConfig(t_s=0.5, t_c=0.1))
        assert result.selected.size == 2


class TestKne:
    def test_single_local_oracle(self):
        hits = np.array([[1] * 7, [1, 1, 1, 0, 1, 1, 1]])
        ctx = FakeCtx(hits, np.zeros((2, 7)), np.zeros(7), 2)
        result = select_kne(ctx, _query([1, 0], k=7))
        assert result.selected.tolist() == [0]
        assert result.predicted_class == 1

    def test_nobody_hits_closest_neighbour(self):
        hits = np.zeros((3, 7))
        ctx = FakeCtx(hits, np.zeros((3, 7)), np.zeros(7), 2)
        result = select_kne(ctx, _query([0, 1, 1], k=7))
        assert result.selected.size == 3
        assert result.predicted_class == 1  # majority of the whole pool

    def test_oracle_on_random_instances(self, oracle_instances):
        for inst in oracle_instances[:50]:
            ctx, query = inst["ctx"], inst["query"]
            got = select_kne(ctx, query)
            want_sel, want_pred = ref.kne_ref(
                ctx.hits, query.roc.indices.tolist(), query.predictions,
                ctx.n_classes,
            )
            assert got.selected.tolist() == want_sel
            assert got.predicted_class == want_pred


class TestKnu:
    def test_votes_equal_hit_counts(self):
        hits = np.array([[1, 0, 1, 0, 1, 0, 0]])
        ctx = FakeCtx(hits, np.zeros((1, 7)), np.zeros(7), 2)
        result = select_knu(ctx, _query([1], k=7))
        assert result.vote_weights.tolist() == [3]

    def test_all_wrong_falls_back(self):
        hits = np.zeros((2, 7))
        ctx = FakeCtx(hits, np.zeros((2, 7)), np.zeros(7), 2)
        result = select_knu(ctx, _query([1, 1], k=7))
        assert result.selected.size == 2
        assert result.vote_weights is None

    def test_weighted_tally_recount(self, oracle_instances):
        for inst in oracle_instances[:50]:
            ctx, query = inst["ctx"], inst["query"]
            got = select_knu(ctx, query)
            want_sel, want_w, want_pred = ref.knu_ref(
                ctx.hits, query.roc.indices.tolist(), query.predictions,
                ctx.n_classes,
            )
            assert got.selected.tolist() == want_sel
            assert got.predicted_class == want_pred
            if want_w is not None:
                assert got.vote_weights.tolist() == want_w


class TestDoubleFault:
    def test_both_always_wrong(self):
        assert double_fault([0, 0, 0], [0, 0, 0]) == 1.0

    def test_perfect_first(self):
        assert double_fault([1, 1, 1], [0, 0, 0]) == 0.0

    def test_complementary_errors(self):
        assert double_fault([1, 1, 0, 0], [0, 0, 1, 1]) == 0.0


class TestDesKnn:
    def test_full_selection_is_majority_vote(self):
        rng = np.random.default_rng(0)
        hits = rng.integers(0, 2, size=(6, 7))
        preds_q = rng.integers(0, 3, size=6)
        ctx = FakeCtx(hits, np.zeros((6, 7)), np.zeros(7), 3)
        result = select_desknn(ctx, _query(preds_q, k=7, n_classes=3),
                               DesKnnConfig(n=6, j=6))
        assert result.selected.tolist() == list(range(6))
        assert result.predicted_class == ref.vote_ref(preds_q, 3)

    def test_j_one_boundary(self):
        hits = np.array([[1] * 7, [1] * 7, [0] * 7])
        ctx = FakeCtx(hits, np.zeros((3, 7)), np.zeros(7), 2)
        result = select_desknn(ctx, _query([0, 0, 1], k=7), DesKnnConfig(n=2, j=1))
        assert result.selected.size == 1

    def test_two_stage_oracle(self, oracle_instances):
        rng = np.random.default_rng(99)
        for inst in oracle_instances[:50]:
            ctx, query = inst["ctx"], inst["query"]
            n = int(rng.integers(1, ctx.pool_size + 1))
            j = int(rng.integers(1, n + 1))
            got = select_desknn(ctx, query, DesKnnConfig(n=n, j=j))
            want_sel, want_pred = ref.desknn_ref(
                ctx.hits, query.roc.indices.tolist(), query.predictions,
                n, j, ctx.n_classes,
            )
            assert got.selected.tolist() == want_sel
            assert got.predicted_class == want_pred


class TestDesp:
    def test_competence_arithmetic(self):
        # 4/7 accuracy, 3 classes: competence = 4/7 - 1/3 = 0.238095
        assert 4 / 7 - 1 / 3 == pytest.approx(0.238095, abs=1e-6)
        hits = np.array([[1, 1, 1, 1, 0, 0, 0]])
        ctx = FakeCtx(hits, np.zeros((1, 7)), np.zeros(7), 3)
        result = select_desp(ctx, _query([1], k=7, n_classes=3))
        assert result.selected.tolist() == [0]

    def test_exact_random_accuracy_excluded(self):
        # accuracy exactly 1/L is NOT above the random classifier
        hits = np.array([[1, 0, 1, 0]])  # 2/4 with L = 2
        ctx = FakeCtx(hits, np.zeros((1, 4)), np.zeros(4), 2)
        result = select_desp(ctx, _query([1], k=4))
        assert result.selected.size == 1  # fallback to the whole pool of 1

    def test_selected_set_is_exactly_above_random(self, oracle_instances):
        for inst in oracle_instances[:80]:
            ctx, query = inst["ctx"], inst["query"]
            got = select_desp(ctx, query)
            acc = ctx.hits[:, query.roc.indices].mean(axis=1)
            expected = np.flatnonzero(acc > 1.0 / ctx.n_classes)
            if expected.size:
                assert got.selected.tolist() == expected.tolist()
            else:
                assert got.selected.size == ctx.pool_size


class TestRrc:
    def test_one_hot_support_wins(self):
        support = np.zeros(3)
        support[1] = 1.0
        p = rrc_correct_probability(support, 1, draws=1000, rng=np.random.default_rng(0))
        assert p >= 0.95

    def test_uniform_two_classes(self):
        p = rrc_correct_probability(
            np.array([0.5, 0.5]), 0, draws=1000, rng=np.random.default_rng(1)
        )
        assert p == pytest.approx(0.5, abs=0.05)

    def test_uniform_many_classes(self):
        for L in (3, 5, 8):
            p = rrc_correct_probability(
                np.full(L, 1.0 / L), 0, draws=1000, rng=np.random.default_rng(L)
            )
            sigma = np.sqrt((1 / L) * (1 - 1 / L) / 1000)
            assert abs(p - 1 / L) <= 3 * sigma

    def test_gaussian_weight_values(self):
        assert np.exp(-0.0**2) == 1.0
        assert np.exp(-2.0**2) == pytest.approx(0.0183156, abs=1e-6)


def _stub_tree(support_fn, n_classes, arity):
    """DecisionTree stand-in with an arbitrary support function."""
    tree = SimpleNamespace()
    tree.arity = arity
    tree.n_classes = n_classes

    def predict_support(X):
        X = np.atleast_2d(X)
        return np.vstack([support_fn(row) for row in X])

    def predict(X):
        return np.argmax(predict_support(X), axis=1)

    tree.predict_support = predict_support
    tree.predict = predict
    return tree


def _rrc_pool_ctx(n_classes=3, n_dsel=15, seed=0):
    rng = np.random.default_rng(seed)
    features = rng.normal(size=(n_dsel, 2))
    labels = rng.integers(0, n_classes, size=n_dsel)
    labels[:n_classes] = np.arange(n_classes)
    dsel = DselSet(features=features, labels=labels, source="stub")

    def perfect(row):
        # one-hot on the true label of the nearest DSEL row
        j = int(np.argmin(((features - row) ** 2).sum(axis=1)))
        out = np.zeros(n_classes)
        out[labels[j]] = 1.0
        return out

    def uniform(row):
        return np.full(n_classes, 1.0 / n_classes)

    pool = Pool(
        classifiers=(
            _stub_tree(perfect, n_classes, 2),
            _stub_tree(uniform, n_classes, 2),
        ),
        variant="Ba",
        generation_seed=0,
        n_classes=n_classes,
    )
    return SelectionContext(pool, dsel), features


class TestDesRrc:
    def test_perfect_classifier_selected_uniform_not(self):
        ctx, features = _rrc_pool_ctx()
        query = ctx.make_query(features[0], k=7)
        result = select_desrrc(ctx, query, draws=1000, seed=3)
        assert 0 in result.selected.tolist()
        assert 1 not in result.selected.tolist()

    def test_deterministic_given_seed(self):
        ctx_a, features = _rrc_pool_ctx(seed=5)
        ctx_b, _ = _rrc_pool_ctx(seed=5)
        q_a = ctx_a.make_query(features[3], k=5)
        q_b = ctx_b.make_query(features[3], k=5)
        one = select_desrrc(ctx_a, q_a, draws=500, seed=11)
        two = select_desrrc(ctx_b, q_b, draws=500, seed=11)
        assert one.selected.tolist() == two.selected.tolist()
        assert one.predicted_class == two.predicted_class


class TestMetaDes:
    def _real_ctx(self, seed=0):
        rng = np.random.default_rng(seed)
        from desbal.data import Dataset
        from desbal.pool import build_dsel, generate_pool

        labels = np.concatenate([np.zeros(20, int), np.ones(12, int)])
        features = np.vstack(
            [rng.normal(0, 1, (20, 3)), rng.normal(2.5, 1, (12, 3))]
        )
        train = Dataset("t", features, labels, ("a", "b"))
        pool = generate_pool(train, "Ba", pool_size=6, seed=seed)
        dsel = build_dsel(train, "Ba", seed=seed)
        ctx = SelectionContext(pool, dsel)
        return ctx, train

    def test_meta_feature_layout(self):
        ctx, train = self._real_ctx()
        query = ctx.make_query(train.features[0], k=7)
        vec = extract_meta_features(ctx, 0, query, kp=5)
        assert vec.shape == (7 + 7 + 1 + 5 + 1,)
        # (c) is the mean of block (a)
        assert vec[14] == pytest.approx(vec[:7].mean())

    def test_perfect_pool_collapses_to_constant(self, caplog):
        # stub pool that always answers the true nearest label -> all hits
        rng = np.random.default_rng(2)
        features = rng.normal(size=(20, 2))
        labels = rng.integers(0, 2, size=20)
        labels[:2] = [0, 1]
        dsel = DselSet(features=features, labels=labels, source="stub")

        def perfect(row):
            j = int(np.argmin(((features - row) ** 2).sum(axis=1)))
            out = np.zeros(2)
            out[labels[j]] = 1.0
            return out

        pool = Pool(
            classifiers=(_stub_tree(perfect, 2, 2), _stub_tree(perfect, 2, 2)),
            variant="Ba", generation_seed=0, n_classes=2,
        )
        ctx = SelectionContext(pool, dsel)
        from desbal.data import Dataset

        train = Dataset("t", features, labels, ("a", "b"))
        with caplog.at_level("WARNING"):
            meta = train_meta_classifier(ctx, train, k=5, kp=3)
        assert meta.constant == 1.0

    def test_pair_count(self):
        ctx, train = self._real_ctx()
        # meta-training visits n_train x pool_size pairs; verify via the
        # fitted priors' denominator by re-deriving the design matrix size
        from desbal.selection import _meta_features_all

        n_pairs = train.n_samples * ctx.pool_size
        meta = train_meta_classifier(ctx, train, k=5, kp=3)
        if meta.constant is None:
            counts = meta.priors * n_pairs
            assert np.allclose(counts, np.round(counts))

    def test_duplicated_consistent_point_posterior(self):
        from desbal.selection import MetaClassifier

        rng = np.random.default_rng(3)
        base = rng.normal(size=(30, 4))
        labels = np.concatenate([np.ones(12, int), np.zeros(18, int)])
        point = base[0]
        features = np.vstack([base, point, point])  # duplicates labelled 1
        y = np.concatenate([labels, [1, 1]])
        meta = MetaClassifier.fit(features, y)
        assert meta.posterior_competent(point[None, :])[0] > 0.5

    def test_threshold_selection_set(self):
        ctx, train = self._real_ctx(seed=4)
        ctx.meta = train_meta_classifier(ctx, train, k=7, kp=5)
        query = ctx.make_query(train.features[5], k=7)
        from desbal.selection import _meta_features_all

        posteriors = ctx.meta.posterior_competent(_meta_features_all(ctx, query, 5))
        result = select_metades(ctx, query, threshold=0.5, kp=5)
        expected = np.flatnonzero(posteriors > 0.5)
        if expected.size:
            assert result.selected.tolist() == expected.tolist()
        else:
            assert result.selected.size == ctx.pool_size

    def test_requires_trained_meta(self):
        ctx, train = self._real_ctx()
        query = ctx.make_query(train.features[0], k=3)
        with pytest.raises(RuntimeError, match="meta-classifier"):
            select_metades(ctx, query)


class TestDfp:
    def test_single_class_region_keeps_pool(self):
        hits = np.array([[1] * 5, [0] * 5])
        ctx = FakeCtx(hits, np.zeros((2, 5)), np.zeros(5), 2)
        query = _query([0, 0], k=5)
        assert dfp_prune(ctx, query.roc).tolist() == [0, 1]

    def test_majority_only_classifier_pruned(self):
        dsel_labels = np.array([0, 0, 0, 1, 1])
        # classifier 0 only ever right on class 0; classifier 1 crosses
        hits = np.array([[1, 1, 1, 0, 0], [1, 0, 0, 1, 0]])
        ctx = FakeCtx(hits, np.zeros((2, 5)), dsel_labels, 2)
        query = _query([0, 0], k=5)
        assert dfp_prune(ctx, query.roc).tolist() == [1]

    def test_oracle(self, oracle_instances):
        for inst in oracle_instances[:50]:
            ctx, query = inst["ctx"], inst["query"]
            got = dfp_prune(ctx, query.roc)
            want = ref.dfp_ref(
                ctx.hits, query.roc.indices.tolist(), ctx.dsel.labels
            )
            assert got.tolist() == want


class TestFire:
    def test_noop_prune_equals_base(self, oracle_instances):
        for inst in oracle_instances[:30]:
            ctx, query = inst["ctx"], inst["query"]
            survivors = dfp_prune(ctx, query.roc)
            if survivors.size != ctx.pool_size:
                continue
            fire = select_fire("KNU", ctx, query)
            base = select_knu(ctx, query)
            assert fire.selected.tolist() == base.selected.tolist()
            assert fire.predicted_class == base.predicted_class

    def test_single_survivor_decides(self):
        dsel_labels = np.array([0, 0, 0, 1, 1])
        hits = np.array([[1, 1, 1, 0, 0], [1, 0, 0, 1, 0]])
        ctx = FakeCtx(hits, np.zeros((2, 5)), dsel_labels, 2)
        query = _query([0, 1], k=5)
        for base in ("LCA", "KNE", "KNU"):
            result = select_fire(base, ctx, query)
            assert result.selected.tolist() == [1]
            assert result.predicted_class == 1

    def test_fire_knu_two_step_oracle(self, oracle_instances):
        for inst in oracle_instances[:50]:
            ctx, query = inst["ctx"], inst["query"]
            got = select_fire("KNU", ctx, query)
            want_sel, want_w, want_pred = ref.fire_knu_ref(
                ctx.hits, query.roc.indices.tolist(), query.predictions,
                ctx.dsel.labels, ctx.n_classes,
            )
            assert got.selected.tolist() == want_sel
            assert got.predicted_class == want_pred


class TestStatic:
    def _pool_of_constants(self, preds, n_classes):
        trees = []
        for p in preds:
            counts = np.zeros(n_classes)
            counts[p] = 5.0
            trees.append(
                DecisionTree([LEAF], [0.0], [-1], [-1], [counts], n_classes, arity=2)
            )
        return Pool(tuple(trees), "Ba", 0, n_classes)

    def test_unanimous(self):
        pool = self._pool_of_constants([2, 2, 2], 3)
        assert static_majority_vote(pool, np.zeros(2)) == 2

    def test_fifty_fifty_tie(self):
        pool = self._pool_of_constants([1, 2, 1, 2], 3)
        assert static_majority_vote(pool, np.zeros(2)) == 1

    def test_pool_of_one(self):
        pool = self._pool_of_constants([2], 3)
        assert static_majority_vote(pool, np.zeros(2)) == 2


class TestProperties:
    def test_every_selector_nonempty_and_deterministic(self, oracle_instances):
        names = ("STATIC", "RANK", "LCA", "MCB", "KNE", "KNU", "DES-KNN",
                 "DESP", "F-LCA", "F-MCB", "F-KNE", "F-KNU", "F-DES-KNN")
        cfg = SelectorConfig()
        for inst in oracle_instances[:30]:
            ctx, query = inst["ctx"], inst["query"]
            for name in names:
                one = run_selector(name, ctx, query, cfg)
                two = run_selector(name, ctx, query, cfg)
                assert one.selected.size >= 1
                assert one.selected.tolist() == two.selected.tolist()
                assert one.predicted_class == two.predicted_class

    def test_kne_contains_global_oracle(self):
        rng = np.random.default_rng(12)
        features = rng.normal(size=(20, 2))
        labels = rng.integers(0, 2, size=20)
        labels[:2] = [0, 1]
        dsel = DselSet(features=features, labels=labels, source="stub")

        def perfect(row):
            j = int(np.argmin(((features - row) ** 2).sum(axis=1)))
            out = np.zeros(2)
            out[labels[j]] = 1.0
            return out

        def awful(row):
            j = int(np.argmin(((features - row) ** 2).sum(axis=1)))
            out = np.zeros(2)
            out[1 - labels[j]] = 1.0
            return out

        pool = Pool(
            (_stub_tree(awful, 2, 2), _stub_tree(perfect, 2, 2)), "Ba", 0, 2
        )
        ctx = SelectionContext(pool, dsel)
        query = ctx.make_query(rng.normal(size=2), k=7)
        assert 1 in select_kne(ctx, query).selected.tolist()

    def test_common_rescaling_leaves_selections_unchanged(self, oracle_instances):
        for inst in oracle_instances[:10]:
            ctx, query = inst["ctx"], inst["query"]
            factor = 3.7
            scaled_dsel = DselSet(
                features=ctx.dsel.features * factor,
                labels=ctx.dsel.labels,
                source="scaled",
            )
            scaled_ctx = FakeCtx(
                ctx.hits, ctx.predictions, ctx.dsel.labels, ctx.n_classes
            )
            scaled_ctx.dsel = SimpleNamespace(
                labels=ctx.dsel.labels, features=scaled_dsel.features,
                n_samples=scaled_dsel.features.shape[0],
            )
            roc = region_of_competence(
                scaled_dsel.features, query.x * factor, k=len(query.roc)
            )
            assert roc.indices.tolist() == query.roc.indices.tolist()
            scaled_query = Query(
                x=query.x * factor, roc=roc,
                predictions=query.predictions, supports=query.supports,
            )
            for fn in (select_rank, select_lca, select_kne, select_knu, select_desp):
                assert (
                    fn(ctx, query).selected.tolist()
                    == fn(scaled_ctx, scaled_query).selected.tolist()
                )
