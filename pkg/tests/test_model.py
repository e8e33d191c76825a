import numpy as np
import pytest

from src.core.models import Mode, Modality
from src.exception import ConfigurationError, InputError, ShapeError, StateError
from src.model import ModelConfig, ModelParams, MoodNet, build_audio_tower, build_fusion_head, build_text_tower
from src.optim import AdamHyperParams, AdamState, adam_step
from src.tensor import Tensor

from .helpers import gradcheck_config, random_inputs, tiny_config


class TestArchitecture:
    def test_audio_ledger_depth_5(self):
        tower = build_audio_tower(5)
        assert tower.shape_ledger() == [
            (48, 341, 128),
            (24, 85, 256),
            (12, 21, 512),
            (4, 4, 1024),
            (1, 1, 2048),
        ]
        assert not tower.projected
        shapes = tower.parameter_shapes()
        assert shapes["audio.conv1.kernel"] == (3, 3, 1, 128)
        assert shapes["audio.conv5.kernel"] == (3, 3, 1024, 2048)
        assert shapes["audio.conv5.bias"] == (2048,)

    @pytest.mark.parametrize("depth, last", [(3, 512), (4, 1024)])
    def test_shallow_towers_project_to_tower_width(self, depth, last):
        shapes = build_audio_tower(depth).parameter_shapes()
        assert shapes["audio.proj.weights"] == (last, 2048)
        assert shapes["audio.proj.bias"] == (2048,)

    def test_text_ledger_pads_small_maps(self):
        tower = build_text_tower(5, 20, 10)
        assert tower.shape_ledger() == [
            (10, 5, 128),
            (5, 2, 256),
            (2, 1, 512),
            (1, 1, 1024),
            (1, 1, 2048),
        ]
        assert tower.parameter_shapes()["lyrics.conv1.kernel"] == (3, 3, 100, 128)

    def test_fused_head_widths(self):
        shapes = MoodNet(ModelConfig(depth=5)).parameter_shapes()
        assert shapes["head.dense1.weights"] == (4096, 2048)
        assert shapes["head.dense2.weights"] == (2048, 1024)
        assert shapes["head.dense3.weights"] == (1024, 512)
        assert shapes["head.dense4.weights"] == (512, 256)
        assert shapes["head.logits.weights"] == (256, 5)
        names = list(shapes)
        assert names[0].startswith("audio.")
        assert names[-1] == "head.logits.bias"

    def test_single_modality_head(self):
        net = MoodNet(tiny_config(modalities=(Modality.AUDIO,)))
        shapes = net.parameter_shapes()
        assert shapes["head.dense1.weights"] == (64, 128)
        assert not any(name.startswith("lyrics.") for name in shapes)

    def test_invalid_depth(self):
        with pytest.raises(ConfigurationError):
            build_audio_tower(2)
        with pytest.raises(ValueError):
            ModelConfig(depth=6)

    def test_text_grid_too_small(self):
        with pytest.raises(ConfigurationError):
            build_text_tower(4, 3, 10)
        with pytest.raises(ValueError):
            ModelConfig(lines_max=3)

    def test_head_needs_a_modality(self):
        with pytest.raises(ConfigurationError):
            build_fusion_head([])

    def test_modalities_are_canonically_ordered(self):
        config = tiny_config(modalities=(Modality.LYRICS, Modality.AUDIO))
        assert config.modalities == (Modality.AUDIO, Modality.LYRICS)


class TestInit:
    def test_reproducible_and_zero_biases(self):
        net = MoodNet(tiny_config())
        a, b = net.init_params(), net.init_params()
        assert list(a) == list(net.parameter_shapes())
        assert all(a[k].equals(b[k]) for k in a)
        assert all(a[k].sum() == 0.0 for k in a if k.endswith(".bias"))
        assert a.count() == net.parameter_count()

    def test_seed_changes_weights(self):
        a = MoodNet(tiny_config(seed=1)).init_params()
        b = MoodNet(tiny_config(seed=2)).init_params()
        assert not a["head.dense1.weights"].equals(b["head.dense1.weights"])

    def test_check_params(self):
        net = MoodNet(tiny_config())
        params = net.init_params()
        bad = params.replace({"head.logits.bias": Tensor(np.zeros(4))})
        with pytest.raises(ShapeError):
            net.check_params(bad)


class TestForward:
    @pytest.fixture
    def net(self):
        return MoodNet(tiny_config())

    def test_probabilities(self, net, rng):
        params = net.init_params()
        for _ in range(5):
            result = net.forward(params, **random_inputs(net.config, rng))
            assert result.probs.shape == (5,)
            assert abs(result.probs.sum() - 1.0) < 1e-12
            assert 0.0 < result.probs.min() <= result.probs.max() < 0.99
            assert result.cache is None

    def test_initial_probabilities_are_near_uniform(self, rng):
        top = []
        for seed in range(100):
            config = gradcheck_config(seed=seed)
            net = MoodNet(config)
            top.append(net.forward(net.init_params(), **random_inputs(config, rng)).probs.max())
        assert 0.2 <= np.mean(top) < 0.3

    def test_eval_is_deterministic(self, net, rng):
        params = net.init_params()
        inputs = random_inputs(net.config, rng)
        assert net.forward(params, **inputs).probs.equals(net.forward(params, **inputs).probs)

    def test_zero_inputs_are_finite(self, net):
        params = net.init_params()
        result = net.forward(
            params,
            audio=Tensor(np.zeros(net.config.audio_input_shape)),
            lyrics=Tensor(np.zeros(net.config.lyrics_input_shape)),
        )
        assert result.probs.is_finite()

    def test_train_mode_dropout_is_seeded(self, net, rng):
        params = net.init_params()
        inputs = random_inputs(net.config, rng)
        a = net.forward(params, mode=Mode.TRAIN, seed=(0, 1, 2), **inputs)
        b = net.forward(params, mode=Mode.TRAIN, seed=(0, 1, 2), **inputs)
        c = net.forward(params, mode=Mode.TRAIN, seed=(0, 1, 3), **inputs)
        assert a.probs.equals(b.probs)
        assert not a.probs.equals(c.probs)
        with pytest.raises(StateError):
            net.forward(params, mode=Mode.TRAIN, **inputs)

    def test_missing_modality(self, net, rng):
        inputs = random_inputs(net.config, rng)
        with pytest.raises(InputError):
            net.forward(net.init_params(), audio=inputs["audio"])

    def test_unexpected_modality(self, rng):
        net = MoodNet(tiny_config(modalities=(Modality.AUDIO,)))
        inputs = random_inputs(tiny_config(), rng)
        with pytest.raises(InputError):
            net.forward(net.init_params(), **inputs)

    def test_wrong_input_shape(self, net, rng):
        inputs = random_inputs(net.config, rng)
        with pytest.raises(ShapeError):
            net.forward(net.init_params(), audio=Tensor(np.zeros((24, 63, 1))), lyrics=inputs["lyrics"])

    def test_single_precision(self, net, rng):
        params = net.init_params()
        inputs = random_inputs(net.config, rng)
        single = net.forward(params.astype(np.float32), **inputs).probs
        assert single.dtype == np.float32
        np.testing.assert_allclose(single.array, net.forward(params, **inputs).probs.array, rtol=1e-4)


class TestBackward:
    def test_gradient_names_and_shapes(self, rng):
        net = MoodNet(tiny_config())
        params = net.init_params()
        result = net.forward(params, mode=Mode.TRAIN, seed=0, **random_inputs(net.config, rng))
        grads = net.backward(params, result.cache, label=3)
        assert grads.shapes() == params.shapes()
        assert all(g.is_finite() for g in grads.values())

    def test_cache_is_single_use(self, rng):
        net = MoodNet(tiny_config())
        params = net.init_params()
        inputs = random_inputs(net.config, rng)
        with pytest.raises(StateError):
            net.backward(params, net.forward(params, **inputs).cache, 0)
        result = net.forward(params, mode=Mode.TRAIN, seed=0, **inputs)
        net.backward(params, result.cache, 0)
        with pytest.raises(StateError):
            net.backward(params, result.cache, 0)

    def test_cache_bound_to_its_params(self, rng):
        net = MoodNet(tiny_config())
        params = net.init_params()
        result = net.forward(params, mode=Mode.TRAIN, seed=0, **random_inputs(net.config, rng))
        with pytest.raises(StateError):
            net.backward(net.init_params(), result.cache, 0)

    def test_confident_correct_prediction_has_zero_gradient(self, rng):
        net = MoodNet(tiny_config())
        params = net.init_params()
        label = 2
        bias = np.zeros(5)
        bias[label] = 1e4
        params = params.replace({
            "head.logits.weights": Tensor(np.zeros(params["head.logits.weights"].shape)),
            "head.logits.bias": Tensor(bias),
        })
        result = net.forward(params, mode=Mode.TRAIN, seed=0, **random_inputs(net.config, rng))
        assert result.probs.array[label] == 1.0
        grads = net.backward(params, result.cache, label)
        assert all(np.all(g.array == 0.0) for name, g in grads.items() if name.startswith("head."))

    def test_matches_finite_differences(self, rng):
        eps = 1e-5
        net = MoodNet(gradcheck_config())
        params = net.init_params()
        inputs = random_inputs(net.config, rng)
        label = 1
        seed = (4, 5, 6)

        def loss(p: ModelParams) -> float:
            probs = net.forward(p, mode=Mode.TRAIN, seed=seed, **inputs).probs
            return -float(np.log(probs.array[label]))

        result = net.forward(params, mode=Mode.TRAIN, seed=seed, **inputs)
        grads = net.backward(params, result.cache, label)

        for name, tensor in params.items():
            picks = [tuple(int(rng.integers(e)) for e in tensor.shape) for _ in range(3)]
            analytic, numeric = [], []
            for idx in picks:
                values = tensor.numpy()
                values[idx] += eps
                plus = loss(params.replace({name: Tensor(values)}))
                values[idx] -= 2 * eps
                minus = loss(params.replace({name: Tensor(values)}))
                numeric.append((plus - minus) / (2 * eps))
                analytic.append(grads[name].array[idx])
            analytic, numeric = np.array(analytic), np.array(numeric)
            scale = max(np.abs(analytic).max(), np.abs(numeric).max(), 1e-6)
            assert np.abs(analytic - numeric).max() / scale < 1e-3, name


@pytest.mark.parametrize("learning_rate", [1e-3, 1e-4])
def test_one_adam_step_lowers_the_sample_loss(learning_rate, rng):
    config = gradcheck_config(dropout=0.0)
    net = MoodNet(config)
    params = net.init_params()
    inputs = random_inputs(config, rng)
    label = 3

    before = net.forward(params, mode=Mode.TRAIN, seed=0, **inputs)
    grads = net.backward(params, before.cache, label)
    state = AdamState.fresh(params, AdamHyperParams(learning_rate=learning_rate))
    stepped, _ = adam_step(params, grads, state)
    after = net.forward(ModelParams(stepped), **inputs)

    assert -np.log(after.probs.array[label]) < -np.log(before.probs.array[label])
