"""Classifier tests: trees, forest, logistic regression, KNN, MLP, persistence."""

import json

import numpy as np
import pytest

from custspace.classify import (
    DTParams,
    KNNParams,
    LRParams,
    MLPParams,
    ModelSpec,
    RFParams,
    feature_importance,
    load_model,
    make_params,
    normalize_kind,
    predict,
    predict_scores,
    save_model,
    train_decision_tree,
    train_knn,
    train_logistic_regression,
    train_mlp,
    train_model,
    train_random_forest,
)
from custspace.classify.linear import loss_and_grad as lr_loss_and_grad
from custspace.classify.mlp import loss_and_grad as mlp_loss_and_grad
from custspace.errors import ConfigError, DomainError, FormatError, UnsupportedModelError


def blobs(n_per=40, gap=2.0, dim=3, seed=0, scale=0.6):
    """Two separated gaussian clusters, class 1 shifted by ``gap``."""
    rng = np.random.default_rng(seed)
    a = rng.normal(scale=scale, size=(n_per, dim))
    b = rng.normal(scale=scale, size=(n_per, dim)) + gap
    X = np.vstack([a, b])
    y = np.array([0] * n_per + [1] * n_per, dtype=np.int64)
    perm = rng.permutation(2 * n_per)
    return X[perm], y[perm]


# ------------------------------------------------------------- decision tree


def oracle_best_split(X, y, min_leaf):
    """Exhaustive Gini split search mirroring the kernel's tie rules."""
    n = X.shape[0]
    total_pos = int(y.sum())
    p1 = total_pos / n
    parent = 1.0 - p1 * p1 - (1.0 - p1) * (1.0 - p1)
    best_gain, best_feat, best_thr = 0.0, -1, 0.0
    for f in range(X.shape[1]):
        vals = X[:, f]
        order = np.argsort(vals)
        pos = 0
        for idx in range(n - 1):
            pos += int(y[order[idx]])
            cnt = idx + 1
            v0 = vals[order[idx]]
            v1 = vals[order[idx + 1]]
            if v1 <= v0 or cnt < min_leaf or n - cnt < min_leaf:
                continue
            pl = pos / cnt
            pr = (total_pos - pos) / (n - cnt)
            gl = 1.0 - pl * pl - (1.0 - pl) * (1.0 - pl)
            gr = 1.0 - pr * pr - (1.0 - pr) * (1.0 - pr)
            gain = parent - (cnt / n) * gl - ((n - cnt) / n) * gr
            if gain > best_gain:
                thr = 0.5 * (v0 + v1)
                if thr >= v1:
                    thr = v0
                best_gain, best_feat, best_thr = gain, f, thr
    return best_feat, best_thr, best_gain


def test_tree_hand_case_perfect_split():
    X = np.array([[1.0], [2.0], [3.0], [4.0]])
    y = np.array([0, 0, 1, 1])
    model = train_decision_tree(X, y, params=DTParams(max_depth=1))
    assert model.feature[0] == 0
    assert model.threshold[0] == pytest.approx(2.5)
    assert model.predict(X).tolist() == [0, 0, 1, 1]
    assert model.predict_scores(X).tolist() == [0.0, 0.0, 1.0, 1.0]


def test_tree_root_split_matches_oracle():
    rng = np.random.default_rng(7)
    for trial in range(40):
        n = int(rng.integers(4, 30))
        d = int(rng.integers(1, 5))
        # few distinct values per column forces gain ties across candidates
        X = rng.integers(0, 4, size=(n, d)).astype(np.float64)
        y = rng.integers(0, 2, size=n).astype(np.int64)
        min_leaf = int(rng.integers(1, 3))
        model = train_decision_tree(
            X, y, params=DTParams(max_depth=1, min_samples_leaf=min_leaf)
        )
        feat, thr, gain = oracle_best_split(X, y, min_leaf)
        assert model.feature[0] == feat
        if feat >= 0:
            assert model.threshold[0] == thr
            assert model.gain[0] == pytest.approx(gain, rel=1e-12)


def test_tree_depth_limit():
    X, y = blobs(n_per=30, seed=1)
    model = train_decision_tree(X, y, params=DTParams(max_depth=1))
    assert model.n_nodes <= 3
    deeper = train_decision_tree(X, y, params=DTParams(max_depth=4))
    assert deeper.n_nodes >= model.n_nodes


def test_tree_pure_node_stays_leaf():
    X = np.array([[0.0], [1.0], [2.0]])
    y = np.array([1, 1, 1])
    model = train_decision_tree(X, y, params=DTParams(max_depth=5))
    assert model.n_nodes == 1
    assert model.feature[0] == -1
    assert model.predict_scores(np.array([[9.0]])).tolist() == [1.0]


def test_tree_min_samples_leaf_respected():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(40, 2))
    y = (X[:, 0] > 0).astype(np.int64)
    model = train_decision_tree(X, y, params=DTParams(max_depth=6, min_samples_leaf=5))
    leaves = np.flatnonzero(model.feature == -1)
    assert (model.n_samples[leaves] >= 5).all()


def test_tree_apply_matches_manual_traversal():
    X, y = blobs(n_per=25, seed=4)
    model = train_decision_tree(X, y, params=DTParams(max_depth=4))
    rng = np.random.default_rng(5)
    Q = rng.normal(size=(30, X.shape[1])) * 2
    got = model.apply(Q)
    for i in range(Q.shape[0]):
        node = 0
        while model.feature[node] >= 0:
            f = model.feature[node]
            node = model.left[node] if Q[i, f] <= model.threshold[node] else model.right[node]
        assert got[i] == node


def test_tree_scores_are_leaf_fractions():
    X = np.array([[0.0], [0.0], [0.0], [1.0]])
    y = np.array([1, 0, 0, 0])
    model = train_decision_tree(X, y, params=DTParams(max_depth=1, min_samples_leaf=1))
    scores = model.predict_scores(np.array([[0.0], [1.0]]))
    assert scores[0] == pytest.approx(1.0 / 3.0)
    assert scores[1] == pytest.approx(0.0)


def test_dt_params_validation():
    for bad in (
        DTParams(max_depth=0),
        DTParams(min_samples_split=1),
        DTParams(min_samples_leaf=0),
    ):
        with pytest.raises(ConfigError):
            bad.validate()


# ------------------------------------------------------------- random forest


def test_forest_single_tree_equals_plain_tree():
    X, y = blobs(n_per=30, seed=6)
    rf = train_random_forest(
        X,
        y,
        params=RFParams(
            n_estimators=1, max_depth=3, max_features=99,
            min_samples_leaf=1, min_samples_split=2,
        ),
    )
    dt = train_decision_tree(
        X, y, params=DTParams(max_depth=3, min_samples_split=2, min_samples_leaf=1)
    )
    tree = rf.trees[0]
    assert np.array_equal(tree.feature, dt.feature)
    assert np.array_equal(tree.threshold, dt.threshold)
    assert np.array_equal(rf.predict_scores(X), dt.predict_scores(X))


def test_forest_scores_average_trees():
    X, y = blobs(n_per=25, seed=8)
    rf = train_random_forest(
        X, y, params=RFParams(n_estimators=7, max_features=2, min_samples_leaf=2, seed=3)
    )
    manual = np.mean([t.predict_scores(X) for t in rf.trees], axis=0)
    assert np.allclose(rf.predict_scores(X), manual, atol=1e-15)


def test_forest_deterministic_per_seed():
    X, y = blobs(n_per=20, seed=9)
    p = RFParams(n_estimators=5, max_features=1, min_samples_leaf=2, seed=11)
    a = train_random_forest(X, y, params=p)
    b = train_random_forest(X, y, params=p)
    assert json.dumps(a.to_dict(), sort_keys=True) == json.dumps(b.to_dict(), sort_keys=True)
    c = train_random_forest(X, y, params=RFParams(**{**p.__dict__, "seed": 12}))
    assert not np.array_equal(a.predict_scores(X), c.predict_scores(X))


def test_forest_node_feature_subsets_are_sorted_draws():
    X, y = blobs(n_per=30, dim=6, seed=10)
    rf = train_random_forest(
        X, y, params=RFParams(n_estimators=3, max_features=2, min_samples_leaf=2, seed=5)
    )
    for tree in rf.trees:
        used = tree.feature[tree.feature >= 0]
        assert ((used >= 0) & (used < 6)).all()


def test_forest_bootstrap_smoke():
    X, y = blobs(n_per=20, seed=12)
    rf = train_random_forest(
        X, y, params=RFParams(n_estimators=3, max_features=2, bootstrap=True, seed=7)
    )
    scores = rf.predict_scores(X)
    assert scores.shape == (40,)
    assert np.all((scores >= 0.0) & (scores <= 1.0))


def test_forest_learns_blobs():
    X, y = blobs(n_per=40, seed=13)
    rf = train_random_forest(
        X, y, params=RFParams(n_estimators=20, max_features=2, min_samples_leaf=2, seed=0)
    )
    assert (rf.predict(X) == y).mean() >= 0.95


def test_rf_params_validation():
    for bad in (
        RFParams(n_estimators=0),
        RFParams(max_depth=0),
        RFParams(max_features=0),
        RFParams(min_samples_leaf=0),
        RFParams(min_samples_split=1),
    ):
        with pytest.raises(ConfigError):
            bad.validate()


# ------------------------------------------------------ logistic regression


def test_lr_gradients_match_finite_differences():
    rng = np.random.default_rng(17)
    h = 1e-6
    for _ in range(10):
        n, d = int(rng.integers(3, 20)), int(rng.integers(1, 6))
        X = rng.normal(size=(n, d))
        y = rng.integers(0, 2, size=n).astype(np.float64)
        w = rng.normal(scale=0.5, size=d)
        b = float(rng.normal())
        c = float(rng.uniform(0.01, 10.0)) if rng.random() < 0.7 else None
        loss, gw, gb = lr_loss_and_grad(w, b, X, y, c)
        for j in range(d):
            e = np.zeros(d)
            e[j] = h
            num = (lr_loss_and_grad(w + e, b, X, y, c)[0] - lr_loss_and_grad(w - e, b, X, y, c)[0]) / (2 * h)
            assert abs(num - gw[j]) <= 1e-4 * max(1.0, abs(num))
        num = (lr_loss_and_grad(w, b + h, X, y, c)[0] - lr_loss_and_grad(w, b - h, X, y, c)[0]) / (2 * h)
        assert abs(num - gb) <= 1e-4 * max(1.0, abs(num))


def test_lr_learns_separable_blobs():
    X, y = blobs(n_per=50, gap=3.0, seed=21)
    model = train_logistic_regression(
        X, y, params=LRParams(c=100.0, lr=0.1, max_epochs=200, tol=1e-10, seed=0)
    )
    assert (model.predict(X) == y).mean() >= 0.95
    assert model.loss_history[-1] < model.loss_history[0]


def test_lr_tiny_c_shrinks_weights_to_zero():
    X, y = blobs(n_per=30, seed=22)
    model = train_logistic_regression(
        X, y, params=LRParams(c=1e-12, lr=0.01, max_epochs=20, tol=0.0, seed=0)
    )
    assert float(np.linalg.norm(model.weights)) <= 1e-3
    assert np.isfinite(model.weights).all()


def test_lr_invariant_to_column_scaling():
    X, y = blobs(n_per=30, seed=23)
    params = LRParams(c=10.0, lr=0.05, max_epochs=30, tol=0.0, seed=4)
    a = train_logistic_regression(X, y, params=params)
    scaled = X * np.array([100.0, 0.01, 7.0])
    b = train_logistic_regression(scaled, y, params=params)
    assert np.allclose(a.predict_scores(X), b.predict_scores(scaled), atol=1e-9)


def test_lr_records_convergence():
    X, y = blobs(n_per=20, seed=24)
    model = train_logistic_regression(
        X, y, params=LRParams(c=1.0, lr=0.05, max_epochs=500, tol=1e-4, seed=1)
    )
    assert model.converged
    assert model.epochs_run < 500
    assert len(model.loss_history) == model.epochs_run + 1


def test_lr_params_validation():
    for bad in (
        LRParams(c=0.0),
        LRParams(lr=0.0),
        LRParams(batch_size=0),
        LRParams(max_epochs=0),
        LRParams(tol=-1.0),
    ):
        with pytest.raises(ConfigError):
            bad.validate()


# ---------------------------------------------------------------------- knn


def test_knn_hand_arithmetic_distance_weighted():
    X = np.array([[0.0], [1.0], [3.0]])
    y = np.array([0, 1, 1])
    model = train_knn(X, y, params=KNNParams(n_neighbors=2, p=2, weighting="distance"))
    # query 0.5: both selected neighbors sit at 0.5, one of each class
    scores = model.predict_scores(np.array([[0.5], [2.9]]))
    assert scores[0] == pytest.approx(0.5)
    # query 2.9: neighbors at 0.1 (y=1) and 1.9 (y=1)
    assert scores[1] == pytest.approx(1.0)
    assert model.predict(np.array([[0.5], [2.9]])).tolist() == [0, 1]  # tie falls to 0


def test_knn_uniform_weighting_is_neighbor_fraction():
    X = np.array([[0.0], [1.0], [2.0], [10.0]])
    y = np.array([1, 0, 0, 1])
    model = train_knn(X, y, params=KNNParams(n_neighbors=3, weighting="uniform"))
    scores = model.predict_scores(np.array([[0.9]]))
    assert scores[0] == pytest.approx(1.0 / 3.0)


def test_knn_zero_distance_majority():
    X = np.array([[1.0], [1.0], [2.0]])
    y = np.array([1, 0, 0])
    model = train_knn(X, y, params=KNNParams(n_neighbors=3))
    # query matches two training rows; their 1-1 vote splits and ties to 0
    assert model.predict_scores(np.array([[1.0]]))[0] == pytest.approx(0.5)
    assert model.predict(np.array([[1.0]]))[0] == 0

    X2 = np.array([[1.0], [1.0], [1.0]])
    y2 = np.array([1, 1, 0])
    model2 = train_knn(X2, y2, params=KNNParams(n_neighbors=3))
    assert model2.predict_scores(np.array([[1.0]]))[0] == pytest.approx(2.0 / 3.0)
    assert model2.predict(np.array([[1.0]]))[0] == 1


def test_knn_minkowski_p3_matches_manual():
    X = np.array([[0.0, 0.0], [1.0, 2.0], [3.0, 1.0]])
    y = np.array([0, 1, 0])
    model = train_knn(X, y, params=KNNParams(n_neighbors=1, p=3))
    q = np.array([[0.9, 1.8]])
    dists = (np.abs(q - X) ** 3).sum(axis=1) ** (1.0 / 3.0)
    assert np.argmin(dists) == 1
    assert model.predict(q)[0] == 1


def test_knn_exact_oracle_on_random_data():
    rng = np.random.default_rng(29)
    X = rng.normal(size=(40, 3))
    y = rng.integers(0, 2, size=40).astype(np.int64)
    model = train_knn(X, y, params=KNNParams(n_neighbors=5, p=2, weighting="distance"))
    Q = rng.normal(size=(15, 3))
    scores = model.predict_scores(Q)
    for i in range(Q.shape[0]):
        d = np.sqrt(((np.abs(Q[i] - X)) ** 2).sum(axis=1))
        order = np.argsort(d, kind="stable")[:5]
        dsel, ysel = d[order], y[order]
        if (dsel == 0).any():
            sel = ysel[dsel == 0]
            want = (sel == 1).sum() / sel.size
        else:
            w = 1.0 / dsel
            want = w[ysel == 1].sum() / w.sum()
        assert scores[i] == pytest.approx(want, rel=1e-12)


def test_knn_k_exceeding_rows_rejected():
    X = np.zeros((3, 2))
    y = np.array([0, 1, 0])
    with pytest.raises(DomainError):
        train_knn(X, y, params=KNNParams(n_neighbors=4))


def test_knn_params_validation():
    for bad in (
        KNNParams(n_neighbors=0),
        KNNParams(p=0),
        KNNParams(weighting="gaussian"),
    ):
        with pytest.raises(ConfigError):
            bad.validate()


# ---------------------------------------------------------------------- mlp


def test_mlp_gradients_match_finite_differences():
    rng = np.random.default_rng(31)
    h = 1e-6
    for _ in range(6):
        n, d, hid = int(rng.integers(3, 12)), int(rng.integers(1, 5)), int(rng.integers(1, 6))
        X = rng.normal(size=(n, d))
        y = rng.integers(0, 2, size=n).astype(np.float64)
        W1 = rng.normal(scale=0.5, size=(d, hid))
        b1 = rng.normal(scale=0.2, size=hid)
        W2 = rng.normal(scale=0.5, size=hid)
        b2 = float(rng.normal(scale=0.2))
        alpha = float(rng.uniform(0.0, 0.2))
        loss, gW1, gb1, gW2, gb2 = mlp_loss_and_grad(W1, b1, W2, b2, X, y, alpha)

        def f(W1=W1, b1=b1, W2=W2, b2=b2):
            return mlp_loss_and_grad(W1, b1, W2, b2, X, y, alpha)[0]

        for _ in range(8):
            i, j = int(rng.integers(0, d)), int(rng.integers(0, hid))
            E = np.zeros((d, hid))
            E[i, j] = h
            num = (f(W1=W1 + E) - f(W1=W1 - E)) / (2 * h)
            assert abs(num - gW1[i, j]) <= 1e-4 * max(1.0, abs(num))
        for _ in range(4):
            j = int(rng.integers(0, hid))
            e = np.zeros(hid)
            e[j] = h
            num = (f(b1=b1 + e) - f(b1=b1 - e)) / (2 * h)
            assert abs(num - gb1[j]) <= 1e-4 * max(1.0, abs(num))
            num = (f(W2=W2 + e) - f(W2=W2 - e)) / (2 * h)
            assert abs(num - gW2[j]) <= 1e-4 * max(1.0, abs(num))
        num = (f(b2=b2 + h) - f(b2=b2 - h)) / (2 * h)
        assert abs(num - gb2) <= 1e-4 * max(1.0, abs(num))


def test_mlp_learns_blobs():
    X, y = blobs(n_per=60, gap=3.0, seed=37)
    model = train_mlp(
        X,
        y,
        params=MLPParams(
            hidden=8, alpha=1e-4, dropout=0.0, lr=0.01,
            batch_size=32, max_epochs=100, seed=0,
        ),
    )
    assert (model.predict(X) == y).mean() >= 0.95
    assert model.loss_history[-1] < model.loss_history[0]


def test_mlp_deterministic_per_seed():
    X, y = blobs(n_per=20, seed=38)
    params = MLPParams(hidden=5, dropout=0.1, max_epochs=5, batch_size=16, seed=9)
    a = train_mlp(X, y, params=params)
    b = train_mlp(X, y, params=params)
    assert np.array_equal(a.W1, b.W1)
    assert np.array_equal(a.W2, b.W2)
    assert np.array_equal(a.predict_scores(X), b.predict_scores(X))


def test_mlp_dropout_affects_training_only():
    X, y = blobs(n_per=20, seed=39)
    model = train_mlp(X, y, params=MLPParams(hidden=4, dropout=0.5, max_epochs=3, seed=2))
    s1 = model.predict_scores(X)
    s2 = model.predict_scores(X)
    assert np.array_equal(s1, s2)  # inference is deterministic


def test_mlp_params_validation():
    for bad in (
        MLPParams(hidden=0),
        MLPParams(alpha=-0.1),
        MLPParams(dropout=1.0),
        MLPParams(dropout=-0.1),
        MLPParams(lr=0.0),
        MLPParams(beta1=1.0),
        MLPParams(eps=0.0),
        MLPParams(batch_size=0),
        MLPParams(max_epochs=0),
    ):
        with pytest.raises(ConfigError):
            bad.validate()


# ------------------------------------------------------- shared conventions


def all_trained_models():
    X, y = blobs(n_per=25, seed=41)
    fast = {
        "DT": DTParams(max_depth=3),
        "RF": RFParams(n_estimators=4, max_features=2, min_samples_leaf=2, seed=1),
        "LR": LRParams(c=1.0, lr=0.05, max_epochs=10, tol=0.0, seed=2),
        "KNN": KNNParams(n_neighbors=5),
        "MLP": MLPParams(hidden=4, dropout=0.0, max_epochs=5, batch_size=16, seed=3),
    }
    return X, y, [train_model(ModelSpec(k, p), X, y) for k, p in fast.items()]


def test_predict_is_scores_above_half_everywhere():
    X, y, models = all_trained_models()
    rng = np.random.default_rng(43)
    Q = rng.normal(size=(50, X.shape[1])) * 2 + 1
    for model in models:
        scores = predict_scores(model, Q)
        labels = predict(model, Q)
        assert np.array_equal(labels, (scores > 0.5).astype(np.int64))
        assert np.all((scores >= 0.0) & (scores <= 1.0))


def test_save_load_preserves_predictions(tmp_path):
    X, y, models = all_trained_models()
    rng = np.random.default_rng(44)
    Q = rng.normal(size=(30, X.shape[1]))
    for model in models:
        path = tmp_path / f"{model.kind}.json"
        save_model(model, path)
        again = load_model(path)
        assert again.kind == model.kind
        assert np.array_equal(model.predict_scores(Q), again.predict_scores(Q))
        assert again.feature_names == model.feature_names


def test_load_model_error_paths(tmp_path):
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json", encoding="utf-8")
    with pytest.raises(FormatError, match="not valid JSON"):
        load_model(bad_json)

    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"format": "other", "kind": "DT"}), encoding="utf-8")
    with pytest.raises(FormatError):
        load_model(wrong)

    svc = tmp_path / "svc.json"
    svc.write_text(json.dumps({"format": "custspace-model", "kind": "SVC"}), encoding="utf-8")
    with pytest.raises(UnsupportedModelError):
        load_model(svc)

    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"format": "custspace-model", "kind": "GBM"}), encoding="utf-8")
    with pytest.raises(FormatError, match="GBM"):
        load_model(unknown)

    malformed = tmp_path / "malformed.json"
    malformed.write_text(
        json.dumps({"format": "custspace-model", "kind": "DT", "feature_names": []}),
        encoding="utf-8",
    )
    with pytest.raises(FormatError, match="malformed"):
        load_model(malformed)


def test_save_model_rejects_foreign_objects(tmp_path):
    with pytest.raises(UnsupportedModelError):
        save_model(object(), tmp_path / "x.json")


def test_normalize_kind():
    assert normalize_kind("dt") == "DT"
    assert normalize_kind(" rf ") == "RF"
    assert normalize_kind("Mlp") == "MLP"
    with pytest.raises(UnsupportedModelError, match="unsupported in this artifact"):
        normalize_kind("svc")
    with pytest.raises(ConfigError, match="unknown model kind"):
        normalize_kind("xgboost")


def test_make_params():
    p = make_params("KNN")
    assert p.n_neighbors == 14
    p = make_params("lr", {"c": 0.5})
    assert p.c == 0.5
    with pytest.raises(ConfigError, match="gamma"):
        make_params("DT", {"gamma": 1.0})


def test_train_model_dispatch():
    X, y = blobs(n_per=15, seed=45)
    model = train_model(ModelSpec("dt", DTParams(max_depth=2)), X, y, feature_names=["a", "b", "c"])
    assert model.kind == "DT"
    assert model.feature_names == ["a", "b", "c"]
    with pytest.raises(UnsupportedModelError):
        train_model(ModelSpec("SVC"), X, y)


def test_feature_importance_tree_and_forest():
    rng = np.random.default_rng(47)
    X = rng.normal(size=(80, 3))
    y = (X[:, 1] > 0).astype(np.int64)  # column 1 decides the label alone
    dt = train_decision_tree(X, y, feature_names=["a", "b", "c"], params=DTParams(max_depth=3))
    ranked = feature_importance(dt)
    assert ranked[0][0] == "b"
    assert sum(v for _, v in ranked) == pytest.approx(1.0)
    rf = train_random_forest(
        X, y, feature_names=["a", "b", "c"],
        params=RFParams(n_estimators=10, max_features=2, min_samples_leaf=2, seed=2),
    )
    ranked_rf = feature_importance(rf)
    assert ranked_rf[0][0] == "b"
    assert sum(v for _, v in ranked_rf) == pytest.approx(1.0)


def test_feature_importance_rejects_other_models():
    X, y = blobs(n_per=10, seed=48)
    knn = train_knn(X, y, params=KNNParams(n_neighbors=3))
    with pytest.raises(DomainError):
        feature_importance(knn)


def test_input_validation_shared():
    X = np.zeros((4, 2))
    with pytest.raises(DomainError, match="labels"):
        train_decision_tree(X, np.array([0, 1, 2, 0]))
    with pytest.raises(DomainError, match="finite"):
        train_decision_tree(np.array([[np.nan, 0.0]]), np.array([0]))
    with pytest.raises(DomainError, match="2-d"):
        train_decision_tree(np.zeros(4), np.array([0, 1, 0, 1]))
    with pytest.raises(DomainError, match="row-aligned"):
        train_decision_tree(X, np.array([0, 1]))
    with pytest.raises(DomainError, match="feature_names"):
        train_decision_tree(X, np.array([0, 1, 0, 1]), feature_names=["only_one"])


def test_query_width_mismatch_names_dim():
    X, y = blobs(n_per=10, seed=49)
    model = train_decision_tree(X, y)
    with pytest.raises(DomainError, match="dim"):
        model.predict(np.zeros((2, 7)))
