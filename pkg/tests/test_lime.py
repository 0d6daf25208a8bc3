"""Quartile discretization, perturbation sampling, and the local surrogate."""

import numpy as np
import pytest

from floodxai import (
    ConfigError,
    DatasetError,
    LimeConfig,
    explain_local,
    fit_discretizer,
    fit_local_surrogate,
    fit_scaler,
    perturb,
)
from floodxai.explain.lime import PerturbationSet, _ridge_wls

RNG = np.random.default_rng(21)


def bin_indicator_model(discretizer, instance, coef, const=0.0):
    """Black box whose output is exactly linear in own-bin membership bits."""
    own = np.array(
        [discretizer.bin_of(f, instance[f]) for f in range(discretizer.n_features)]
    )
    coef = np.asarray(coef, dtype=float)

    def model(X):
        same = (discretizer.bins(X) == own[None, :]).astype(float)
        return const + same @ coef

    return model


@pytest.fixture
def train4():
    return RNG.uniform(0.0, 100.0, size=(200, 4))


class TestFitDiscretizer:
    def test_quartiles_of_1_to_100(self):
        ds = np.arange(1, 101, dtype=float).reshape(-1, 1)
        disc = fit_discretizer(ds)
        # np.quantile with linear interpolation: 25.75, 50.5, 75.25
        np.testing.assert_allclose(disc.thresholds[0], [25.75, 50.5, 75.25], atol=1e-12)
        assert disc.n_bins(0) == 4
        assert not disc.degenerate[0]

    def test_threshold_value_falls_in_lower_bin(self):
        disc = fit_discretizer(np.arange(1, 101, dtype=float).reshape(-1, 1))
        assert disc.bin_of(0, 25.75) == 0
        assert disc.bin_of(0, 25.7501) == 1
        assert disc.bin_of(0, 0.0) == 0
        assert disc.bin_of(0, 1000.0) == 3

    def test_constant_feature_flagged_degenerate(self):
        X = np.column_stack([np.full(20, 7.0), np.arange(20, dtype=float)])
        disc = fit_discretizer(X)
        assert disc.degenerate == (True, False)
        assert len(disc.thresholds[0]) == 0
        assert disc.condition(0, 7.0) == "x0 = 7.00"

    def test_heavy_ties_merge_quantiles(self):
        col = np.array([0, 0, 0, 0, 0, 0, 1, 2], dtype=float).reshape(-1, 1)
        disc = fit_discretizer(col)
        assert disc.n_bins(0) < 4  # duplicate quartile cuts collapse

    def test_missing_values_rejected(self):
        X = np.array([[1.0], [np.nan], [3.0]])
        with pytest.raises(DatasetError, match="impute first"):
            fit_discretizer(X)

    def test_empty_training_rejected(self):
        with pytest.raises(DatasetError, match="empty"):
            fit_discretizer(np.empty((0, 3)))

    def test_too_few_bins_rejected(self):
        with pytest.raises(ConfigError, match="n_bins"):
            fit_discretizer(np.arange(10, dtype=float).reshape(-1, 1), n_bins=1)

    def test_bins_matrix_matches_scalar_lookup(self, train4):
        disc = fit_discretizer(train4)
        X = RNG.uniform(0.0, 100.0, size=(15, 4))
        B = disc.bins(X)
        for i in range(15):
            for f in range(4):
                assert B[i, f] == disc.bin_of(f, X[i, f])

    def test_bin_stats_bound_their_members(self, train4):
        disc = fit_discretizer(train4)
        for f in range(4):
            col = train4[:, f]
            bins = disc.bins(train4.reshape(-1, 4))[:, f]
            for b, (lo, hi, mean, sd) in disc.bin_stats[f].items():
                members = col[bins == b]
                assert members.size > 0
                assert lo == members.min() and hi == members.max()
                assert lo <= mean <= hi
                assert sd >= 0.0

    def test_condition_text_covers_all_cases(self):
        disc = fit_discretizer(np.arange(1, 101, dtype=float).reshape(-1, 1))
        assert disc.condition(0, 10.0) == "x0 <= 25.75"
        assert disc.condition(0, 40.0) == "25.75 < x0 <= 50.50"
        assert disc.condition(0, 60.0) == "50.50 < x0 <= 75.25"
        assert disc.condition(0, 90.0) == "x0 > 75.25"

    def test_dataset_month_names_flow_through(self, dataset):
        disc = fit_discretizer(dataset)
        assert disc.feature_names == dataset.feature_names
        assert "JUN" in disc.condition(5, 650.0)


class TestPerturb:
    def make(self, train, instance, **kwargs):
        config = LimeConfig(**{"n_perturbations": 400, "n_selected_features": 4, **kwargs})
        disc = fit_discretizer(train)
        scaler = fit_scaler(train)
        return perturb(instance, disc, scaler, config), disc, config

    def test_first_sample_is_the_instance(self, train4):
        x = train4[0]
        samples, _, _ = self.make(train4, x)
        np.testing.assert_array_equal(samples.X[0], x)
        assert samples.bits[0].min() == 1
        assert samples.distances[0] == 0.0

    def test_kept_bits_keep_exact_values(self, train4):
        x = train4[3]
        samples, _, _ = self.make(train4, x)
        kept = samples.bits == 1
        expected = np.tile(x, (samples.X.shape[0], 1))
        np.testing.assert_array_equal(samples.X[kept], expected[kept])

    def test_resampled_bits_land_in_another_bin(self, train4):
        x = train4[7]
        samples, disc, _ = self.make(train4, x)
        own = [disc.bin_of(f, x[f]) for f in range(4)]
        bins = disc.bins(samples.X)
        off = samples.bits == 0
        for f in range(4):
            rows = np.nonzero(off[:, f])[0]
            assert rows.size > 0
            assert np.all(bins[rows, f] != own[f])

    def test_seed_determinism(self, train4):
        x = train4[1]
        a, _, _ = self.make(train4, x, seed=5)
        b, _, _ = self.make(train4, x, seed=5)
        c, _, _ = self.make(train4, x, seed=6)
        np.testing.assert_array_equal(a.X, b.X)
        np.testing.assert_array_equal(a.bits, b.bits)
        assert not np.array_equal(a.X, c.X)

    def test_degenerate_feature_never_perturbed(self):
        train = np.column_stack([np.full(50, 3.0), RNG.uniform(0, 10, 50)])
        x = np.array([3.0, 5.0])
        disc = fit_discretizer(train)
        scaler = fit_scaler(train)
        config = LimeConfig(n_perturbations=200, n_selected_features=2)
        samples = perturb(x, disc, scaler, config)
        assert np.all(samples.bits[:, 0] == 1)
        np.testing.assert_array_equal(samples.X[:, 0], 3.0)

    def test_distances_are_standardized_euclidean(self, train4):
        x = train4[2]
        samples, _, _ = self.make(train4, x)
        scaler = fit_scaler(train4)
        manual = np.linalg.norm(
            scaler.transform(samples.X) - scaler.transform(x)[None, :], axis=1
        )
        np.testing.assert_allclose(samples.distances, manual, atol=1e-12)

    def test_instance_width_checked(self, train4):
        with pytest.raises(DatasetError, match="features"):
            self.make(train4, np.zeros(3))

    def test_normal_resampling_differs_from_uniform(self, train4):
        x = train4[4]
        uniform, _, _ = self.make(train4, x, seed=9)
        normal, _, _ = self.make(train4, x, seed=9, resample="normal")
        np.testing.assert_array_equal(uniform.bits, normal.bits)
        assert not np.array_equal(uniform.X, normal.X)


class TestLocalSurrogate:
    def fit(self, train, instance, model, **kwargs):
        config = LimeConfig(**{"n_perturbations": 2000, "n_selected_features": 4, **kwargs})
        disc = fit_discretizer(train)
        scaler = fit_scaler(train)
        samples = perturb(instance, disc, scaler, config)
        return fit_local_surrogate(model, samples, config, discretizer=disc), disc

    def test_recovers_bit_linear_black_box(self, train4):
        x = train4[0]
        disc = fit_discretizer(train4)
        coef = np.array([0.4, -0.3, 0.2, 0.1])
        model = bin_indicator_model(disc, x, coef, const=0.05)
        explanation, _ = self.fit(train4, x, model)
        recovered = np.full(4, np.nan)
        for c in explanation.conditions:
            recovered[c.feature_index] = c.weight
        np.testing.assert_allclose(recovered, coef, atol=1e-3)
        assert explanation.local_fidelity >= 0.999
        assert explanation.local_prediction == pytest.approx(
            float(model(x[None, :])[0]), abs=1e-3
        )

    def test_constant_model_gets_zero_weights(self, train4):
        x = train4[5]
        explanation, _ = self.fit(train4, x, lambda X: np.full(len(np.atleast_2d(X)), 0.6))
        assert all(abs(c.weight) <= 1e-9 for c in explanation.conditions)
        assert explanation.intercept == pytest.approx(0.6, abs=1e-9)
        assert explanation.local_fidelity == 1.0

    def test_sparsity_cap_respected(self, train4):
        x = train4[6]
        model = bin_indicator_model(fit_discretizer(train4), x, [0.4, -0.3, 0.2, 0.1])
        explanation, _ = self.fit(train4, x, model, n_selected_features=2, n_perturbations=500)
        assert len(explanation.conditions) == 2

    def test_conditions_sorted_by_magnitude(self, train4):
        x = train4[8]
        model = bin_indicator_model(fit_discretizer(train4), x, [0.1, -0.5, 0.3, 0.0])
        explanation, _ = self.fit(train4, x, model)
        magnitudes = [abs(c.weight) for c in explanation.conditions]
        assert magnitudes == sorted(magnitudes, reverse=True)

    def test_sign_tracks_membership_direction(self):
        train = RNG.uniform(0.0, 100.0, size=(300, 2))
        model = lambda X: 1.0 / (1.0 + np.exp(-0.1 * (np.atleast_2d(X)[:, 0] - 50.0)))
        high = np.array([95.0, 50.0])  # top bin of x0: membership raises the output
        low = np.array([5.0, 50.0])  # bottom bin: membership lowers it
        explain_high, _ = self.fit(train, high, model, n_selected_features=2)
        explain_low, _ = self.fit(train, low, model, n_selected_features=2)
        assert explain_high.weight_of("x0") > 0.1
        assert explain_low.weight_of("x0") < -0.1

    def test_all_identical_bits_rejected(self, train4):
        x = train4[0]
        n = 50
        samples = PerturbationSet(
            instance=x,
            X=np.tile(x, (n, 1)),
            bits=np.ones((n, 4), dtype=np.int8),
            distances=np.zeros(n),
        )
        config = LimeConfig(n_perturbations=n, n_selected_features=4)
        with pytest.raises(DatasetError, match="degenerate perturbation design"):
            fit_local_surrogate(lambda X: np.zeros(len(X)), samples, config)

    def test_huge_kernel_width_matches_unweighted_fit(self, train4):
        x = train4[9]
        disc = fit_discretizer(train4)
        model = bin_indicator_model(disc, x, [0.4, -0.3, 0.2, 0.1])
        config = LimeConfig(
            n_perturbations=500, n_selected_features=4, kernel_width=1e9, seed=3
        )
        scaler = fit_scaler(train4)
        samples = perturb(x, disc, scaler, config)
        explanation = fit_local_surrogate(model, samples, config, discretizer=disc)

        y = model(samples.X)
        beta, intercept, _ = _ridge_wls(
            samples.bits.astype(float), y, np.ones(len(y))
        )
        for c in explanation.conditions:
            assert c.weight == pytest.approx(beta[c.feature_index], abs=1e-9)
        assert explanation.intercept == pytest.approx(intercept, abs=1e-9)

    def test_weight_of_unselected_feature_is_none(self, train4):
        x = train4[2]
        model = bin_indicator_model(fit_discretizer(train4), x, [0.9, 0.0, 0.0, 0.0])
        explanation, _ = self.fit(train4, x, model, n_selected_features=1, n_perturbations=300)
        assert explanation.weight_of("x0") is not None
        assert explanation.weight_of("x3") is None
        assert explanation.weight_of("nope") is None


class TestLimeConfig:
    def test_kernel_width_default_scales_with_features(self):
        config = LimeConfig()
        assert config.effective_kernel_width(16) == pytest.approx(3.0)
        assert LimeConfig(kernel_width=2.5).effective_kernel_width(16) == 2.5

    @pytest.mark.parametrize(
        "kwargs, fragment",
        [
            ({"n_selected_features": 0}, "n_selected_features"),
            ({"n_perturbations": 30, "n_selected_features": 4}, "10 x"),
            ({"kernel_width": 0.0}, "kernel_width"),
            ({"n_bins": 1}, "n_bins"),
            ({"resample": "bootstrap"}, "resample"),
        ],
    )
    def test_invalid_configs_rejected(self, kwargs, fragment):
        with pytest.raises(ConfigError, match=fragment):
            LimeConfig(**kwargs).validate()

    def test_selection_capped_by_feature_count(self):
        with pytest.raises(ConfigError, match="exceeds"):
            LimeConfig(n_selected_features=13, n_perturbations=200).validate(12)


class TestExplainLocal:
    def test_end_to_end_on_trained_model(self, logistic, parts):
        x = parts.test.features()[0]
        explanation = explain_local(logistic, x, parts.train, LimeConfig(seed=0))
        assert explanation.predicted_proba == pytest.approx(
            logistic.predict_proba(x), abs=1e-12
        )
        assert explanation.predicted_class == int(explanation.predicted_proba >= 0.5)
        assert len(explanation.conditions) == 6
        months = {c.feature for c in explanation.conditions}
        assert months <= set(parts.train.feature_names)

    def test_repeat_runs_identical(self, logistic, parts):
        x = parts.test.features()[1]
        config = LimeConfig(seed=11, n_perturbations=600)
        a = explain_local(logistic, x, parts.train, config)
        b = explain_local(logistic, x, parts.train, config)
        assert [c.weight for c in a.conditions] == [c.weight for c in b.conditions]
        assert a.local_fidelity == b.local_fidelity

    def test_to_dict_structure(self, logistic, parts):
        x = parts.test.features()[0]
        payload = explain_local(logistic, x, parts.train, LimeConfig(seed=0)).to_dict()
        assert payload["schema"] == "floodxai.lime"
        assert len(payload["conditions"]) == 6
        assert payload["local_prediction"] == pytest.approx(
            payload["intercept"] + sum(c["weight"] for c in payload["conditions"]),
            abs=1e-12,
        )
        assert payload["config"]["kernel_width"] == pytest.approx(0.75 * np.sqrt(12))
