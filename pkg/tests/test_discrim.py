import math

import numpy as np
import pytest

from efbtag.discrim import (
    LogisticModel,
    SgdConfig,
    loss_and_gradient,
    mean_loss,
    predict,
    predict_all_prev,
    train,
    zero_model,
)
from efbtag.errors import InvalidInputError


def random_model(rng, n_features, n_labels, conditions_on_prev=False, scale=0.5):
    model = zero_model(n_features, n_labels, conditions_on_prev)
    model.weights[:] = rng.normal(0.0, scale, model.weights.shape)
    return model


class TestPredict:
    def test_zero_weights_uniform(self):
        model = zero_model(n_features=4, n_labels=3)
        assert predict(model, [0, 2]) == pytest.approx(np.full(3, 1 / 3))

    def test_binary_softmax_identity(self):
        c = 0.8
        model = zero_model(n_features=1, n_labels=2)
        model.weights[0] = [c, -c]
        p = predict(model, [0])
        sigma = 1.0 / (1.0 + math.exp(-2 * c))
        assert p[0] == pytest.approx(sigma, rel=1e-12)
        assert p[1] == pytest.approx(1 - sigma, rel=1e-12)

    def test_sums_to_one_and_positive(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            model = random_model(rng, 6, 4)
            p = predict(model, [1, 3, 5])
            assert abs(p.sum() - 1.0) <= 1e-12
            assert np.all(p > 0)

    def test_score_shift_invariance(self):
        rng = np.random.default_rng(1)
        model = random_model(rng, 3, 4)
        base = predict(model, [0])
        bumped_weights = model.weights.copy()
        bumped_weights[-1] += 3.25  # bias row shifts every label's score equally
        bumped = LogisticModel(bumped_weights, 3, 4, False)
        assert predict(bumped, [0]) == pytest.approx(base, rel=1e-12)

    def test_conditioning_mismatch_rejected(self):
        plain = zero_model(2, 2, conditions_on_prev=False)
        cond = zero_model(2, 2, conditions_on_prev=True)
        with pytest.raises(InvalidInputError):
            predict(plain, [0], prev_label=1)
        with pytest.raises(InvalidInputError):
            predict(cond, [0])

    def test_predict_all_prev_matches_per_prev_predict(self):
        rng = np.random.default_rng(2)
        model = random_model(rng, 5, 3, conditions_on_prev=True)
        table = predict_all_prev(model, [1, 4])
        for j in range(3):
            assert table[:, j] == pytest.approx(
                predict(model, [1, 4], prev_label=j), rel=1e-12
            )


class TestLossAndGradient:
    def test_zero_weights_binary_loss_is_ln2(self):
        model = zero_model(3, 2)
        loss, _ = loss_and_gradient(model, [([0], None, 1)])
        assert loss == pytest.approx(math.log(2), rel=1e-12)

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(3)
        step = 1e-5
        for trial in range(5):
            cond = trial % 2 == 1
            model = random_model(rng, 4, 3, conditions_on_prev=cond)
            batch = [
                (
                    list(rng.choice(4, size=2, replace=False)),
                    int(rng.integers(0, 3)) if cond else None,
                    int(rng.integers(0, 3)),
                )
                for _ in range(6)
            ]
            l2 = 0.01
            _, grad = loss_and_gradient(model, batch, l2=l2)
            for r in range(model.weights.shape[0]):
                for c in range(model.weights.shape[1]):
                    w_plus = model.weights.copy()
                    w_plus[r, c] += step
                    w_minus = model.weights.copy()
                    w_minus[r, c] -= step
                    lp, _ = loss_and_gradient(
                        LogisticModel(w_plus, 4, 3, cond), batch, l2=l2
                    )
                    lm, _ = loss_and_gradient(
                        LogisticModel(w_minus, 4, 3, cond), batch, l2=l2
                    )
                    fd = (lp - lm) / (2 * step)
                    denom = max(abs(fd), abs(grad[r, c]), 1e-8)
                    assert abs(fd - grad[r, c]) / denom <= 1e-5

    def test_zero_data_limit_is_regularizer_gradient(self):
        rng = np.random.default_rng(4)
        model = random_model(rng, 3, 2)
        l2 = 0.7
        loss, grad = loss_and_gradient(model, [], l2=l2)
        assert grad == pytest.approx(l2 * model.weights, rel=1e-12)
        assert loss == pytest.approx(0.5 * l2 * (model.weights**2).sum(), rel=1e-12)


class TestTrain:
    def test_separable_toy_set_perfect_accuracy(self):
        # one distinct feature per example, so any labeling is separable
        dataset = [
            ([0], None, 0),
            ([1], None, 1),
            ([2], None, 0),
            ([3], None, 1),
        ]
        config = SgdConfig(learning_rate=0.5, epochs=200, l2=0.0, batch_size=4)
        model = train(dataset, n_features=4, n_labels=2, config=config)
        for ids, _, target in dataset:
            assert int(np.argmax(predict(model, ids))) == target

    def test_determining_feature_drives_loss_down(self):
        dataset = [([i % 3], None, i % 3) for i in range(30)]
        config = SgdConfig(learning_rate=1.0, decay=0.0, epochs=300, l2=0.0)
        model = train(dataset, n_features=3, n_labels=3, config=config)
        assert mean_loss(model, dataset) < 0.05

    def test_zero_epochs_rejected(self):
        with pytest.raises(InvalidInputError):
            SgdConfig(epochs=0)

    def test_empty_dataset_rejected(self):
        with pytest.raises(InvalidInputError):
            train([], 2, 2, SgdConfig())

    def test_bitwise_deterministic(self):
        rng = np.random.default_rng(5)
        dataset = [
            (
                list(rng.choice(6, size=2, replace=False)),
                None,
                int(rng.integers(0, 3)),
            )
            for _ in range(40)
        ]
        config = SgdConfig(epochs=5, seed=123)
        a = train(dataset, 6, 3, config)
        b = train(dataset, 6, 3, config)
        assert np.array_equal(a.weights, b.weights)

    def test_duplicated_dataset_same_trajectory_under_full_batch(self):
        # full-batch mean gradients are identical for the doubled set
        dataset = [([0], None, 0), ([1], None, 1), ([0, 1], None, 0)]
        doubled = dataset * 2
        cfg = lambda n: SgdConfig(
            learning_rate=0.3, decay=0.1, epochs=25, l2=1e-3, batch_size=n
        )
        a = train(dataset, 2, 2, cfg(len(dataset)))
        b = train(doubled, 2, 2, cfg(len(doubled)))
        np.testing.assert_allclose(a.weights, b.weights, rtol=1e-12, atol=1e-14)

    def test_train_with_previous_label_conditioning(self):
        # target equals previous label; features are uninformative
        dataset = [([0], p, p) for p in (0, 1)] * 20
        config = SgdConfig(learning_rate=0.5, epochs=200, l2=0.0, batch_size=8)
        model = train(dataset, 1, 2, config, conditions_on_prev=True)
        assert int(np.argmax(predict(model, [0], prev_label=0))) == 0
        assert int(np.argmax(predict(model, [0], prev_label=1))) == 1
