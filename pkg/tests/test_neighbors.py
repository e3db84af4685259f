import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from puiml.neighbors import euclidean_distance, fit_knn, knn_predict


def test_distance_examples():
    assert euclidean_distance([0, 0], [3, 4]) == 5.0
    assert euclidean_distance([1.5, -2], [1.5, -2]) == 0.0
    with pytest.raises(ValueError):
        euclidean_distance([0, 0], [1])


@given(arrays(np.float64, 4, elements=st.floats(-1e3, 1e3)), arrays(np.float64, 4, elements=st.floats(-1e3, 1e3)))
def test_distance_symmetric(a, b):
    assert euclidean_distance(a, b) == euclidean_distance(b, a)


def test_k1_exact_match():
    m = fit_knn([[0.0], [1.0], [5.0]], ["a", "b", "a"], k=1)
    label, proba = knn_predict(m, [1.0])
    assert label == "b" and proba.tolist() == [0.0, 1.0]


def test_k3_counts():
    m = fit_knn([[0.0], [0.5], [1.0], [9.0]], ["a", "a", "b", "b"], k=3)
    label, proba = knn_predict(m, [0.4])
    assert label == "a"
    assert proba == pytest.approx([2 / 3, 1 / 3], abs=1e-12)


def test_k5_matches_exhaustive_sort(rng):
    X = rng.normal(size=(30, 2))
    y = rng.integers(0, 3, 30)
    Q = rng.normal(size=(100, 2))
    m = fit_knn(X, y, k=5)
    pred, proba = m.predict(Q), m.predict_proba(Q)
    idx, _ = m.neighbours(Q)
    for q in range(100):
        classes, votes, order = oracles.knn_votes(X, y, Q[q], 5)
        assert idx[q].tolist() == order
        assert np.allclose(proba[q], votes, atol=1e-12)
        assert pred[q] == classes[int(np.argmax(votes))]


def test_distance_weighting_and_zero_distance():
    X = [[0.0], [2.0], [3.0]]
    m = fit_knn(X, ["a", "b", "b"], k=3, weighting="distance")
    _, proba = knn_predict(m, [0.0])
    assert proba.tolist() == [1.0, 0.0]
    _, proba = knn_predict(m, [1.0])
    w = np.array([1 / (1 + 1e-12), 1 / (1 + 1e-12), 1 / (2 + 1e-12)])
    assert proba == pytest.approx([w[0] / w.sum(), (w[1] + w[2]) / w.sum()], abs=1e-12)


def test_k_equal_n_gives_training_majority(rng):
    X = rng.normal(size=(11, 2))
    y = np.array([0] * 4 + [1] * 7)
    m = fit_knn(X, y, k=11)
    assert (m.predict(rng.normal(size=(20, 2)) * 100) == 1).all()


def test_bad_k_and_width():
    with pytest.raises(ValueError):
        fit_knn([[0.0]], [0], k=2)
    with pytest.raises(ValueError):
        fit_knn([[0.0]], [0], k=1, weighting="cosine")
    with pytest.raises(ValueError):
        fit_knn([[0.0]], [0], k=1).predict([[0.0, 1.0]])


knn_case = st.integers(3, 12).flatmap(lambda n: st.tuples(
    arrays(np.float64, (n, 2), elements=st.floats(-10, 10)),
    st.lists(st.integers(0, 2), min_size=n, max_size=n),
    arrays(np.float64, 2, elements=st.floats(-10, 10)),
    st.integers(1, n),
    st.randoms(use_true_random=False),
))


@given(knn_case)
def test_uniform_probabilities_and_permutation_invariance(case):
    X, y, x, k, rnd = case
    y = np.asarray(y)
    m = fit_knn(X, y, k=k)
    p = m.predict_proba(x[None])[0]
    assert abs(p.sum() - 1) < 1e-12
    assert np.allclose(p * k, np.round(p * k), atol=1e-9)
    d = np.sort(np.linalg.norm(X - x, axis=1))
    if k < len(X) and d[k] - d[k - 1] > 1e-9:
        perm = list(range(len(X)))
        rnd.shuffle(perm)
        q = fit_knn(X[perm], y[perm], k=k).predict_proba(x[None])[0]
        assert np.allclose(p, q, atol=1e-12)
