import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from puiml.tree import TreeParams, best_split, entropy, fit_tree, gini, predict_tree, randomized_importance


def test_entropy_values():
    assert entropy([5, 5]) == 1.0
    assert entropy([7, 0]) == 0.0
    assert entropy([1, 1, 1, 1]) == 2.0
    with pytest.raises(ValueError):
        entropy([0, 0])


def test_gini_values():
    assert gini([5, 5]) == 0.5
    assert gini([7, 0]) == 0.0
    assert gini([2, 1, 1]) == pytest.approx(0.625, abs=1e-12)
    with pytest.raises(ValueError):
        gini([-1, 2])


@given(st.lists(st.integers(0, 50), min_size=1, max_size=6).filter(lambda c: sum(c) > 0))
def test_impurity_bounds(counts):
    k = len(counts)
    e, g = entropy(counts), gini(counts)
    pure = sum(1 for c in counts if c) == 1
    assert -1e-12 <= e <= math.log2(k) + 1e-12
    assert -1e-12 <= g <= 1 - 1 / k + 1e-12
    assert (abs(e) < 1e-12) == pure and (abs(g) < 1e-12) == pure


def test_perfect_split():
    s = best_split([[1.0], [2.0], [3.0], [4.0]], ["a", "a", "b", "b"])
    assert (s.feature, s.threshold) == (0, 2.5)
    assert s.gain == pytest.approx(0.5) and s.impurity_after == 0.0


def test_pure_node_has_no_split():
    assert best_split([[1.0], [2.0]], [1, 1]) is None
    assert best_split([[1.0], [1.0]], [0, 1]) is None


def test_ties_prefer_lowest_feature_then_threshold():
    X = np.array([[1, 1], [2, 2], [3, 3], [4, 4]], dtype=float)
    assert best_split(X, [0, 0, 1, 1]).feature == 0
    s = best_split([[1.0], [2.0], [3.0]], [0, 1, 0])
    assert s.threshold == 1.5


def test_matches_enumeration_8x2(rng):
    for _ in range(50):
        X = rng.integers(0, 4, size=(8, 2)).astype(float)
        y = rng.integers(0, 2, 8)
        for crit in ("gini", "entropy"):
            got, want = best_split(X, y, crit), oracles.best_split(X, y, crit)
            assert (got is None) == (want is None)
            if got is not None:
                assert (got.feature, got.threshold) == want[:2]
                assert got.gain == pytest.approx(want[2], abs=1e-12)


def test_separable_data_depth_one():
    X = np.array([[0.1], [0.4], [0.5], [2.0], [2.5]])
    y = np.array([0, 0, 0, 1, 1])
    m = fit_tree(X, y)
    assert m.depth == 1 and (m.predict(X) == y).all()


def test_depth_zero_is_majority_leaf():
    m = fit_tree([[0.0], [1.0], [2.0]], ["x", "y", "y"], TreeParams(max_depth=0))
    assert m.depth == 0 and m.predict([[0.0], [5.0]]).tolist() == ["y", "y"]


def test_xor_fits_within_depth_two():
    X = np.array([[0, 0], [1, 1], [0, 1], [1, 0]], dtype=float)
    y = np.array(["a", "a", "b", "b"])
    m = fit_tree(X, y, TreeParams(max_depth=2))
    assert (m.predict(X) == y).all() and m.depth <= 2


def test_fully_grown_tree_reproduces_training_labels(rng):
    X = rng.normal(size=(40, 3))
    y = rng.integers(0, 3, 40)
    assert (fit_tree(X, y).predict(X) == y).all()


def test_extreme_inputs_reach_edge_leaves():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    y = np.array([0, 1, 2, 3])
    m = fit_tree(X, y)
    assert predict_tree(m, [-100.0]) == 0 and predict_tree(m, [100.0]) == 3


def test_hand_traced_depth_two_tree():
    X = np.array([[1, 5], [2, 6], [3, 1], [4, 2], [5, 7], [6, 8]], dtype=float)
    y = np.array([0, 0, 1, 1, 2, 2])
    m = fit_tree(X, y, TreeParams(max_depth=2))
    text = m.render(["f0", "f1"])
    assert text.splitlines()[0].startswith("f0 <= 2.5")
    # f0 <= 2.5 -> class 0; otherwise f0 <= 4.5 -> class 1, else class 2.
    assert m.predict([[2.4, 0], [4.4, 0], [4.6, 0]]).tolist() == [0, 1, 2]


tree_case = st.integers(2, 12).flatmap(lambda n: st.tuples(
    arrays(np.float64, (n, 2), elements=st.integers(0, 3).map(float)),
    st.lists(st.integers(0, 2), min_size=n, max_size=n),
    st.sampled_from(["gini", "entropy"]),
    st.one_of(st.none(), st.integers(0, 4)),
    st.integers(2, 6),
))


@given(tree_case)
def test_stopping_rules_and_truncation(case):
    X, y, crit, depth, mss = case
    y = np.asarray(y)
    params = TreeParams(crit, depth, mss)
    direct = fit_tree(X, y, params)
    for node in direct.nodes():
        if not direct.is_leaf(node):
            assert depth is None or node.depth < depth
            assert node.n >= mss
            assert node.split.impurity_after <= node.split.impurity_before + 1e-12
    truncated = fit_tree(X, y, TreeParams(crit)).truncated(params)
    assert (truncated.predict(X) == direct.predict(X)).all()
    probe = np.array([[a, b] for a in np.arange(-0.5, 4, 0.5) for b in np.arange(-0.5, 4, 0.5)])
    assert (truncated.predict(probe) == direct.predict(probe)).all()


def test_truncation_rejects_looser_params():
    m = fit_tree([[0.0], [1.0]], [0, 1], TreeParams(max_depth=1))
    with pytest.raises(ValueError):
        m.truncated(TreeParams(max_depth=3))
    with pytest.raises(ValueError):
        m.truncated(TreeParams("entropy", max_depth=1))


def test_importance_finds_predictive_feature():
    for seed in range(5):
        rng = np.random.default_rng(seed)
        y = rng.integers(0, 2, 100)
        X = np.column_stack([y + rng.normal(0, 0.05, 100), rng.normal(size=100)])
        imp = randomized_importance(X, y, n_trees=100, seed=seed)
        assert imp[0] > 0.8
        assert abs(imp.sum() - 1) < 1e-9


def test_importance_deterministic(rng):
    X = rng.normal(size=(30, 3))
    y = rng.integers(0, 2, 30)
    assert np.array_equal(randomized_importance(X, y, 20, seed=4), randomized_importance(X, y, 20, seed=4))
