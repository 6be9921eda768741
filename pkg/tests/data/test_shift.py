import numpy as np
import pytest

from deep_coral.core.covariance import covariance
from deep_coral.core.loss import coral_distance
from deep_coral.data.dataset import Domain
from deep_coral.data.shift import (
    MeanLayout,
    ShiftSpec,
    generate_shifted_pair,
    standard_shift_spec,
)
from deep_coral.diagnostics.errors import BadSpecError


def test_standard_benchmark_shape_and_balance() -> None:
    source, target = generate_shifted_pair(standard_shift_spec(0))

    assert (source.size, source.dim) == (900, 10)
    assert (target.size, target.dim) == (900, 10)
    assert source.domain is Domain.SOURCE and target.domain is Domain.TARGET
    assert source.labels is not None and target.labels is not None
    assert np.bincount(source.labels).tolist() == [300, 300, 300]
    assert np.bincount(target.labels).tolist() == [300, 300, 300]


def test_same_spec_is_bit_identical() -> None:
    a_src, a_tgt = generate_shifted_pair(standard_shift_spec(3))
    b_src, b_tgt = generate_shifted_pair(standard_shift_spec(3))

    assert np.array_equal(a_src.features, b_src.features)
    assert np.array_equal(a_tgt.features, b_tgt.features)
    assert not np.array_equal(
        a_src.features, generate_shifted_pair(standard_shift_spec(4))[0].features
    )


def test_identity_shift_is_closer_than_a_rotation() -> None:
    spec = ShiftSpec(num_classes=2, dim=4, samples_per_class=200, seed=1)
    rotated = ShiftSpec(
        num_classes=2, dim=4, samples_per_class=200, seed=1, rotation_deg=45.0
    )

    null_src, null_tgt = generate_shifted_pair(spec)
    rot_src, rot_tgt = generate_shifted_pair(rotated)

    assert coral_distance(null_src.features, null_tgt.features) < coral_distance(
        rot_src.features, rot_tgt.features
    )


def test_scaled_dimension_variance() -> None:
    scale = (3.0, 1.0, 1.0)
    spec = ShiftSpec(num_classes=2, dim=3, samples_per_class=300, seed=2, scale=scale)
    source, target = generate_shifted_pair(spec)

    ratio = np.var(target.features[:, 0]) / np.var(source.features[:, 0])
    assert 9.0 * 0.7 <= ratio <= 9.0 * 1.3


def test_target_class_covariance_follows_the_transform() -> None:
    spec = ShiftSpec(
        num_classes=1,
        dim=3,
        samples_per_class=2000,
        seed=5,
        class_means=((0.0, 0.0, 0.0),),
        class_stds=(1.5,),
        rotation_deg=30.0,
        scale=(2.0, 1.0, 0.5),
        offset=(1.0, -1.0, 0.0),
    )
    source, target = generate_shifted_pair(spec)

    a = spec.transform()
    expected = a @ covariance(source.features).matrix @ a.T
    actual = covariance(target.features).matrix
    rel = np.linalg.norm(actual - expected) / np.linalg.norm(expected)
    assert rel < 0.10


def test_offset_moves_the_target_mean() -> None:
    spec = standard_shift_spec(0)
    source, target = generate_shifted_pair(spec)

    shift = target.features.mean(axis=0) - source.features.mean(axis=0)
    assert shift[3] == pytest.approx(1.0, abs=0.15)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"samples_per_class": 1},
        {"scale": (1.0, 0.0)},
        {"scale": (1.0,)},
        {"offset": (1.0, 2.0, 3.0)},
        {"class_stds": (1.0, -1.0, 1.0)},
        {"rotation_dims": (0, 0)},
        {"rotation_dims": (0, 5)},
        {"num_classes": 0},
        {"mean_radius": -1.0},
        {"mean_layout": "spiral"},
        {"num_classes": 2, "class_factors": ((1.0, 1.0),)},
        {"num_classes": 1, "class_factors": ((1.0, 1.0, 1.0),)},
        {"num_classes": 1, "class_factors": (((1.0, 0.0), (0.0,)),)},
        {"num_classes": 1, "class_factors": ((1.0, 0.0),)},
        {"num_classes": 1, "class_factors": (((1.0, 0.0), (0.0, float("nan"))),)},
        {"num_classes": 1, "class_stds": (1.0,), "class_factors": ((1.0, 1.0),)},
    ],
)
def test_bad_specs_are_rejected(kwargs: dict[str, object]) -> None:
    with pytest.raises(BadSpecError):
        ShiftSpec(dim=2, **kwargs)  # type: ignore[arg-type]


def test_rotation_needs_two_dimensions() -> None:
    with pytest.raises(BadSpecError):
        ShiftSpec(dim=1, rotation_deg=10.0)


def test_line_layout_spaces_means_along_the_first_rotation_dim() -> None:
    spec = ShiftSpec(num_classes=3, dim=4, mean_layout=MeanLayout.LINE, mean_radius=7.0)

    expected = np.zeros((3, 4))
    expected[:, 0] = [-7.0, 0.0, 7.0]
    np.testing.assert_array_equal(spec.means(), expected)
    np.testing.assert_array_equal(
        ShiftSpec(num_classes=1, dim=2, mean_layout=MeanLayout.LINE).means(), [[0.0, 0.0]]
    )


def test_standard_benchmark_rotation_changes_second_order_statistics() -> None:
    spec = standard_shift_spec(0)
    source, target = generate_shifted_pair(spec)

    np.testing.assert_allclose(spec.means()[:, 0], [-7.0, 0.0, 7.0])
    src = covariance(source.features).matrix
    tgt = covariance(target.features).matrix
    # Class spread along dim 0 is rotated into dim 1 on the target side.
    assert src[1, 1] < 2.0
    assert tgt[1, 1] > 5.0
    assert tgt[0, 1] > 5.0


def test_per_class_covariance_factors() -> None:
    factor = ((2.0, 0.0, 0.0), (1.0, 0.5, 0.0), (0.0, 0.0, 1.0))
    spec = ShiftSpec(
        num_classes=2,
        dim=3,
        samples_per_class=4000,
        seed=6,
        class_factors=(factor, (0.5, 1.0, 3.0)),
    )
    source, _ = generate_shifted_pair(spec)
    assert source.labels is not None

    expected = spec.class_covariances()
    np.testing.assert_allclose(expected[0], np.array(factor) @ np.array(factor).T)
    np.testing.assert_allclose(expected[1], np.diag([0.25, 1.0, 9.0]))
    for k in range(2):
        actual = covariance(source.features[source.labels == k]).matrix
        rel = np.linalg.norm(actual - expected[k]) / np.linalg.norm(expected[k])
        assert rel < 0.08


def test_scalar_stds_and_unit_factors_draw_the_same_rows() -> None:
    base = dict(num_classes=2, dim=3, samples_per_class=50, seed=9, rotation_deg=20.0)
    plain = ShiftSpec(**base, class_stds=(1.5, 0.5))  # type: ignore[arg-type]
    factored = ShiftSpec(**base, class_factors=((1.5,) * 3, (0.5,) * 3))  # type: ignore[arg-type]

    a_src, a_tgt = generate_shifted_pair(plain)
    b_src, b_tgt = generate_shifted_pair(factored)

    np.testing.assert_allclose(a_src.features, b_src.features, atol=1e-12)
    np.testing.assert_allclose(a_tgt.features, b_tgt.features, atol=1e-12)
