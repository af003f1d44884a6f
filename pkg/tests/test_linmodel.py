import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from moeadlla.errors import ConfigurationError
from moeadlla.linmodel import (
    LinearModel,
    RegressionDataset,
    block_soft_threshold,
    fit,
    fit_objective,
    load_model,
    model_from_dict,
    model_to_dict,
    predict,
    row_norms,
    sample_from_model,
    save_model,
    shared_rows,
    vsd,
    zero_threshold,
)
from moeadlla.preference import sample_preference_set


def _model(A, b, anchor):
    return LinearModel(np.asarray(A, float), np.asarray(b, float), np.asarray(anchor, float))


def _random_dataset(rng, N, n, m):
    anchor = np.full(m, 1.0 / m)
    lams = sample_preference_set(anchor, 0.05, N, rng).members
    X = rng.normal(size=(N, n))
    return RegressionDataset(lams, X, anchor)


# -- prediction and norms ------------------------------------------------------


def test_predict_examples():
    m = _model([[2.0], [-1.0]], [0.5, 0.5], [0.5, 0.5])
    np.testing.assert_allclose(predict(m, [0.6, 0.4]), [0.7, 0.4])
    np.testing.assert_allclose(predict(m, [0.5, 0.5]), [0.5, 0.5])
    zero = LinearModel.constant([1.0, 2.0, 3.0], [0.2, 0.3, 0.5])
    np.testing.assert_allclose(predict(zero, [[0.1, 0.1, 0.8], [1, 0, 0]]), [[1, 2, 3], [1, 2, 3]])


def test_predict_rejects_wrong_dimension():
    with pytest.raises(ValueError):
        predict(_model([[1.0]], [0.0], [0.5, 0.5]), [0.2, 0.3, 0.5])


def test_vsd_examples():
    assert vsd(LinearModel.constant([0.0, 0.0], [0.5, 0.5])) == 0.0
    assert vsd(_model([[3.0], [-4.0]], [0, 0], [0.5, 0.5])) == pytest.approx(7.0)
    assert vsd(_model([[3.0, 4.0], [0.0, 0.0]], [0, 0], [1 / 3] * 3)) == pytest.approx(5.0)


def test_rows_and_sharing():
    m = _model([[3.0, 4.0], [0.0, 0.0], [1e-12, 0.0]], [0, 0, 0], [1 / 3] * 3)
    np.testing.assert_allclose(row_norms(m), [5.0, 0.0, 1e-12])
    np.testing.assert_array_equal(shared_rows(m), [False, True, True])
    assert vsd(m) == pytest.approx(row_norms(m).sum())
    assert shared_rows(LinearModel.constant([1.0, 2.0], [0.5, 0.5])).all()


def test_block_soft_threshold():
    V = np.array([[3.0, 4.0], [0.3, 0.4], [0.0, 0.0]])
    np.testing.assert_allclose(block_soft_threshold(V, 1.0), [[2.4, 3.2], [0, 0], [0, 0]])


# -- fitting ---------------------------------------------------------------------


def test_fit_recovers_exact_linear_data():
    rng = np.random.default_rng(0)
    anchor = np.array([0.2, 0.3, 0.5])
    A = rng.normal(size=(4, 2))
    b = rng.normal(size=4)
    lams = sample_preference_set(anchor, 0.05, 12, rng).members
    X = predict(_model(A, b, anchor), lams)
    model = fit(RegressionDataset(lams, X, anchor), 0.0, max_iters=200_000, tol=1e-14)
    np.testing.assert_allclose(model.A, A, atol=1e-8)
    np.testing.assert_allclose(model.b, b, atol=1e-8)


def test_fit_two_point_example():
    lams = np.array([[0.6, 0.4], [0.4, 0.6]])
    X = np.array([[1.0], [0.0]])
    model = fit(RegressionDataset(lams, X, np.array([0.5, 0.5])), 0.1)
    assert model.A[0, 0] == 0.0
    assert model.b[0] == pytest.approx(0.5)


def test_fit_zero_threshold_gives_constant_model():
    rng = np.random.default_rng(4)
    for m in (2, 3):
        data = _random_dataset(rng, 9, 4, m)
        gmax = zero_threshold(data).max()
        model = fit(data, gmax * (1 + 1e-9))
        assert np.all(model.A == 0)
        np.testing.assert_allclose(model.b, data.X.mean(axis=0))
        below = fit(data, gmax * 0.9)
        assert np.any(row_norms(below) > 0)


def test_fit_degenerate_design():
    lams = np.tile([0.3, 0.7], (5, 1))
    X = np.arange(10.0).reshape(5, 2)
    model = fit(RegressionDataset(lams, X, np.array([0.5, 0.5])), 1e-3)
    assert model.degenerate
    np.testing.assert_allclose(model.b, X.mean(axis=0))


def test_fit_rejects_bad_arguments():
    data = _random_dataset(np.random.default_rng(0), 5, 2, 2)
    with pytest.raises(ConfigurationError):
        fit(data, -1.0)
    with pytest.raises(ConfigurationError):
        fit(data, 1.0, reduction="median")


def test_sum_reduction_scales_gamma():
    data = _random_dataset(np.random.default_rng(9), 8, 3, 3)
    a = fit(data, 0.4, reduction="sum", tol=1e-14, max_iters=100_000)
    b = fit(data, 0.4 / 8, tol=1e-14, max_iters=100_000)
    np.testing.assert_allclose(a.A, b.A, atol=1e-12)


def _row_objective(a, d, x, gamma):
    # one output row, bias profiled out by centring
    N = d.shape[0]
    r = x - d @ a
    return float(r @ r) / N + gamma * float(np.linalg.norm(a))


def _brute_force_row(d, x, gamma):
    """Exhaustive search over coefficient directions.

    Along a unit direction ``u`` the objective is a 1-D quadratic plus
    ``gamma * r`` in the radius ``r >= 0``, minimised in closed form; the
    direction itself is found by a dense angle grid plus local refinement.
    """
    N, p = d.shape

    def along(u):
        du = d @ u
        q = (du @ du) / N
        c = 2.0 * (du @ x) / N
        r = max(0.0, (c - gamma) / (2.0 * q)) if q > 0 else 0.0
        return _row_objective(r * u, d, x, gamma)

    if p == 1:
        return min(along(np.array([1.0])), along(np.array([-1.0])))
    theta = np.linspace(0.0, 2 * np.pi, 200_001)
    U = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    DU = U @ d.T
    q = np.sum(DU * DU, axis=1) / N
    c = 2.0 * (DU @ x) / N
    r = np.maximum(0.0, (c - gamma) / (2.0 * q))
    vals = r * r * q - r * c + gamma * r
    k = int(np.argmin(vals))
    h = theta[1] - theta[0]
    res = minimize_scalar(
        lambda t: along(np.array([np.cos(t), np.sin(t)])),
        bounds=(theta[k] - h, theta[k] + h),
        method="bounded",
        options={"xatol": 1e-14},
    )
    return min(res.fun, along(U[k]))


@given(
    st.integers(0, 2**32 - 1),
    st.integers(3, 10),
    st.integers(1, 5),
    st.sampled_from([2, 3]),
    st.floats(1e-4, 2.0),
)
def test_fit_objective_matches_brute_force(seed, N, n, m, gamma):
    rng = np.random.default_rng(seed)
    data = _random_dataset(rng, N, n, m)
    model = fit(data, gamma, max_iters=200_000, tol=1e-13)
    D = data.offsets()
    Dc = D - D.mean(axis=0)
    Xc = data.X - data.X.mean(axis=0)
    if np.linalg.matrix_rank(Dc) < Dc.shape[1]:
        return
    oracle = sum(_brute_force_row(Dc, Xc[:, j], gamma) for j in range(n))
    assert fit_objective(model, data, gamma) == pytest.approx(oracle, abs=1e-6)
    assert fit_objective(model, data, gamma) <= oracle + 1e-6


@given(st.integers(0, 2**32 - 1), st.integers(2, 10), st.integers(1, 5), st.floats(0.0, 3.0))
def test_two_objective_fit_is_soft_threshold(seed, N, n, gamma):
    rng = np.random.default_rng(seed)
    data = _random_dataset(rng, N, n, 2)
    d = data.offsets()[:, 0]
    dc = d - d.mean()
    if dc @ dc < 1e-12:
        return
    model = fit(data, gamma)
    for j in range(n):
        xc = data.X[:, j] - data.X[:, j].mean()
        slope = (dc @ xc) / (dc @ dc)
        shrink = max(0.0, 1.0 - gamma * N / (2.0 * abs(dc @ xc))) if dc @ xc != 0 else 0.0
        assert model.A[j, 0] == pytest.approx(slope * shrink, abs=1e-10)


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1), st.integers(3, 10), st.integers(1, 5), st.sampled_from([2, 3]))
def test_zero_rows_grow_with_gamma(seed, N, n, m):
    data = _random_dataset(np.random.default_rng(seed), N, n, m)
    ladder = np.geomspace(1e-4, 2.0 * max(zero_threshold(data).max(), 1e-3), 10)
    previous = np.zeros(n, bool)
    for g in ladder:
        zero = row_norms(fit(data, g, max_iters=20_000, tol=1e-11)) <= 1e-10
        assert np.all(zero >= previous)
        previous = zero
    assert previous.all()


def test_proximal_iteration_descends():
    rng = np.random.default_rng(11)
    data = _random_dataset(rng, 10, 5, 3)
    gamma = 0.05
    values = []
    A = None
    for k in (1, 2, 4, 8, 16, 64, 256, 2048):
        model = fit(data, gamma, max_iters=k, tol=0.0, init=A)
        values.append(fit_objective(model, data, gamma))
    assert all(b <= a + 1e-14 for a, b in zip(values, values[1:]))


def test_warm_start_reaches_same_solution():
    data = _random_dataset(np.random.default_rng(2), 10, 4, 3)
    cold = fit(data, 0.02, tol=1e-13, max_iters=100_000)
    warm = fit(data, 0.02, tol=1e-13, max_iters=100_000, init=cold.A + 0.1)
    np.testing.assert_allclose(warm.A, cold.A, atol=1e-9)


# -- sampling and files ------------------------------------------------------------


def test_sample_from_model():
    rng = np.random.default_rng(0)
    prefs = sample_preference_set([0.5, 0.5], 0.02, 25, rng)
    const = LinearModel.constant([0.3, 1.7, -0.5], [0.5, 0.5])
    lo, hi = np.zeros(3), np.ones(3)
    out = sample_from_model(const, prefs, 1e-30, lo, hi, rng)
    np.testing.assert_array_equal(out, np.tile([0.3, 1.0, 0.0], (25, 1)))
    steep = _model([[50.0], [-50.0], [5.0]], [0.5, 0.5, 0.5], [0.5, 0.5])
    out = sample_from_model(steep, prefs, 0.05, lo, hi, rng)
    assert out.shape == (25, 3)
    assert np.all(out >= lo) and np.all(out <= hi)
    a = sample_from_model(steep, prefs, 0.05, lo, hi, np.random.default_rng(3))
    b = sample_from_model(steep, prefs, 0.05, lo, hi, np.random.default_rng(3))
    np.testing.assert_array_equal(a, b)


def test_model_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    model = _model(rng.normal(size=(4, 2)) / 3, rng.normal(size=4) * 1e-7, [0.1, 0.2, 0.7])
    path = tmp_path / "m.json"
    save_model(path, model, gamma=1e-3, problem="DTLZ1", seed=4)
    back, meta = load_model(path)
    np.testing.assert_array_equal(back.A, model.A)
    np.testing.assert_array_equal(back.b, model.b)
    np.testing.assert_array_equal(back.anchor, model.anchor)
    assert meta == {"problem": "DTLZ1", "gamma": 1e-3, "seed": 4}
    assert json.loads(path.read_text())["format"] == "moeadlla.linear-model/1"
    with pytest.raises(ValueError):
        model_from_dict({**model_to_dict(model), "format": "other"})
