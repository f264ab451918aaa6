import numpy as np
import pytest
from scipy import stats

from lrdopt.data import (
    Dataset,
    NoisyLabelView,
    batches,
    corrupt_labels,
    load_idx,
    load_idx_images,
    load_idx_labels,
    load_mnist,
    num_batches,
    synth_blobs,
    write_idx_images,
    write_idx_labels,
)
from lrdopt.errors import DataFormatError, DomainError
from lrdopt.rng import Rng


# -- IDX files -------------------------------------------------------------

def make_fixture(tmp_path, images, labels):
    img_path = tmp_path / "imgs-idx3-ubyte"
    lab_path = tmp_path / "labs-idx1-ubyte"
    write_idx_images(img_path, images)
    write_idx_labels(lab_path, labels)
    return img_path, lab_path


def test_idx_two_image_fixture_exact_pixels(tmp_path):
    images = np.zeros((2, 2, 2), dtype=np.uint8)
    images[1] = 255
    img_path, lab_path = make_fixture(tmp_path, images, [3, 7])
    ds = load_idx(img_path, lab_path)
    assert ds.inputs.shape == (2, 4)
    assert ds.inputs[0].tolist() == [0.0, 0.0, 0.0, 0.0]
    assert ds.inputs[1].tolist() == [1.0, 1.0, 1.0, 1.0]
    assert ds.labels.tolist() == [3, 7]


def test_idx_roundtrip_bytes_exact(tmp_path):
    rng = Rng(77)
    images = (rng.uniform(0, 256, (5, 4, 3))).astype(np.uint8)
    labels = rng.integers(0, 10, (5,)).astype(np.uint8)
    img_path, lab_path = make_fixture(tmp_path, images, labels)
    ds = load_idx(img_path, lab_path)
    img2 = tmp_path / "again-idx3-ubyte"
    lab2 = tmp_path / "again-idx1-ubyte"
    write_idx_images(img2, (ds.inputs.reshape(5, 4, 3) * 255.0).round().astype(np.uint8))
    write_idx_labels(lab2, ds.labels)
    assert img2.read_bytes() == img_path.read_bytes()
    assert lab2.read_bytes() == lab_path.read_bytes()


def test_idx_bad_magic(tmp_path):
    path = tmp_path / "bad-idx3-ubyte"
    path.write_bytes(b"\x00\x00\x08\x04" + b"\x00" * 12)
    with pytest.raises(DataFormatError) as err:
        load_idx_images(path)
    assert err.value.offset == 0
    assert "0x00000803" in str(err.value)


def test_idx_truncated(tmp_path):
    images = np.zeros((2, 2, 2), dtype=np.uint8)
    img_path, _ = make_fixture(tmp_path, images, [0, 1])
    blob = img_path.read_bytes()
    img_path.write_bytes(blob[:-3])
    with pytest.raises(DataFormatError) as err:
        load_idx_images(img_path)
    assert "truncated" in str(err.value)


def test_idx_trailing_bytes(tmp_path):
    images = np.zeros((1, 2, 2), dtype=np.uint8)
    img_path, _ = make_fixture(tmp_path, images, [0])
    img_path.write_bytes(img_path.read_bytes() + b"x")
    with pytest.raises(DataFormatError):
        load_idx_images(img_path)


def test_idx_count_mismatch(tmp_path):
    images = np.zeros((2, 2, 2), dtype=np.uint8)
    img_path, lab_path = make_fixture(tmp_path, images, [0, 1, 2])
    with pytest.raises(DataFormatError) as err:
        load_idx(img_path, lab_path)
    assert "count 2" in str(err.value)


def test_label_magic_checked(tmp_path):
    path = tmp_path / "bad-idx1-ubyte"
    path.write_bytes(b"\x00\x00\x08\x03\x00\x00\x00\x00")
    with pytest.raises(DataFormatError):
        load_idx_labels(path)


def test_load_mnist_missing_actionable(tmp_path):
    with pytest.raises(FileNotFoundError) as err:
        load_mnist(tmp_path / "nowhere")
    msg = str(err.value)
    assert "train-images-idx3-ubyte" in msg
    assert "t10k-labels-idx1-ubyte" in msg


# -- synthetic blobs -------------------------------------------------------

def test_synth_spread_zero_is_class_means():
    ds = synth_blobs(3, 10, 4, 0.0, seed=1)
    assert len(ds) == 30
    for c in range(3):
        block = ds.inputs[ds.labels == c]
        assert np.allclose(block, block[0])
    # pairwise mean distance is exactly 1
    m0 = ds.inputs[ds.labels == 0][0]
    m1 = ds.inputs[ds.labels == 1][0]
    assert np.linalg.norm(m0 - m1) == pytest.approx(1.0)


def test_synth_deterministic():
    a = synth_blobs(4, 25, 6, 0.3, seed=9)
    b = synth_blobs(4, 25, 6, 0.3, seed=9)
    assert np.array_equal(a.inputs, b.inputs)
    assert np.array_equal(a.labels, b.labels)
    c = synth_blobs(4, 25, 6, 0.3, seed=10)
    assert not np.array_equal(a.inputs, c.inputs)


def test_synth_validation():
    with pytest.raises(DomainError):
        synth_blobs(1, 10, 4, 0.1, 0)
    with pytest.raises(DomainError):
        synth_blobs(3, 10, 1, 0.1, 0)
    with pytest.raises(DomainError):
        synth_blobs(5, 10, 4, 0.1, 0)  # dims < classes
    with pytest.raises(DomainError):
        synth_blobs(3, 10, 4, -0.1, 0)


def test_synth_trains_to_high_accuracy():
    # wide margin (spread 0.1 vs distance 1) -> a small MLP should separate
    from lrdopt.network import Mlp, accuracy, loss_and_grad
    from lrdopt.optim import LrdConfig, Optimizer, OptimizerRule

    ds = synth_blobs(3, 100, 4, 0.1, seed=2)
    model = Mlp.init((4, 16, 3), Rng(3).child_named("init"))
    opt = Optimizer(model.params(), OptimizerRule.adam(),
                    LrdConfig(base_lr=0.01), None)
    for epoch in range(30):
        for bx, by in batches(ds, 32, shuffle_seed=4, epoch=epoch):
            _, grads = loss_and_grad(model, bx, by)
            opt.step(grads)
    assert accuracy(model, ds.inputs, ds.labels) >= 0.99


# -- label corruption -------------------------------------------------------

def test_corrupt_zero_prob_identity():
    ds = synth_blobs(5, 20, 8, 0.2, seed=5)
    view = corrupt_labels(ds, 0.0, seed=6)
    assert isinstance(view, NoisyLabelView)
    assert np.array_equal(view.labels, ds.labels)
    assert np.shares_memory(view.inputs, ds.inputs)
    assert view.corrupted_count == 0


def test_corrupt_never_keeps_original_label():
    ds = synth_blobs(6, 50, 8, 0.2, seed=7)
    view = corrupt_labels(ds, 0.5, seed=8)
    flagged = view.corrupted
    assert flagged.any()
    assert np.all(view.labels[flagged] != ds.labels[flagged])
    assert np.array_equal(view.labels[~flagged], ds.labels[~flagged])


def test_corrupt_two_classes_prob_one_like():
    # C=2: the only wrong label is the other class; q close to 1 flips ~all.
    # q=1 is excluded by contract, so check q=0.999... pattern via all flagged
    ds = Dataset(np.zeros((64, 2)), np.tile([0, 1], 32), 2)
    view = corrupt_labels(ds, 0.99, seed=9)
    flagged = view.corrupted
    assert np.array_equal(view.labels[flagged], 1 - ds.labels[flagged])


def test_corrupt_pattern_frozen_per_seed():
    ds = synth_blobs(4, 100, 8, 0.2, seed=11)
    a = corrupt_labels(ds, 0.1, seed=12)
    b = corrupt_labels(ds, 0.1, seed=12)
    c = corrupt_labels(ds, 0.1, seed=13)
    assert np.array_equal(a.labels, b.labels)
    assert not np.array_equal(a.labels, c.labels)


def test_corrupt_count_binomial_interval():
    ds = Dataset(np.zeros((60_000, 2)), np.zeros(60_000, dtype=int), 10)
    view = corrupt_labels(ds, 0.05, seed=14)
    # 4 sigma around n*q = 3000: sigma = sqrt(60000*.05*.95) ~ 53.4
    assert 2700 <= view.corrupted_count <= 3300


def test_corrupt_marginal_uniform_chi_square():
    n = 100_000
    num_classes = 10
    ds = Dataset(np.zeros((n, 2)), np.full(n, 3, dtype=int), num_classes)
    view = corrupt_labels(ds, 0.5, seed=15)
    observed_wrong = view.labels[view.corrupted]
    counts = np.bincount(observed_wrong, minlength=num_classes)
    assert counts[3] == 0
    wrong_counts = np.delete(counts, 3)
    _, pvalue = stats.chisquare(wrong_counts)
    assert pvalue > 0.001


def test_corrupt_validation():
    ds = synth_blobs(3, 5, 4, 0.1, seed=0)
    with pytest.raises(DomainError):
        corrupt_labels(ds, 1.0, seed=0)
    with pytest.raises(DomainError):
        corrupt_labels(ds, -0.2, seed=0)


# -- batching ---------------------------------------------------------------

def test_batch_sizes_last_short():
    ds = Dataset(np.arange(20.0).reshape(10, 2), np.zeros(10, dtype=int), 2)
    sizes = [len(by) for _, by in batches(ds, 3, shuffle_seed=0, epoch=0)]
    assert sizes == [3, 3, 3, 1]


def test_batches_deterministic_per_seed_epoch():
    ds = synth_blobs(3, 20, 4, 0.2, seed=1)
    a = [by.tolist() for _, by in batches(ds, 7, shuffle_seed=2, epoch=4)]
    b = [by.tolist() for _, by in batches(ds, 7, shuffle_seed=2, epoch=4)]
    c = [by.tolist() for _, by in batches(ds, 7, shuffle_seed=2, epoch=5)]
    assert a == b
    assert a != c


def test_batches_cover_every_sample_once():
    n = 53
    ds = Dataset(np.arange(n, dtype=float)[:, None].repeat(2, 1),
                 np.zeros(n, dtype=int), 2)
    seen = []
    for bx, _ in batches(ds, 8, shuffle_seed=3, epoch=2):
        seen.extend(bx[:, 0].astype(int).tolist())
    assert sorted(seen) == list(range(n))


def test_num_batches_mnist_like():
    assert num_batches(60_000, 128) == 469
    assert num_batches(10, 3) == 4


def test_batches_validation():
    ds = synth_blobs(2, 5, 4, 0.1, seed=0)
    with pytest.raises(DomainError):
        list(batches(ds, 0, shuffle_seed=0, epoch=0))
    with pytest.raises(DomainError):
        list(batches(ds, 4, shuffle_seed=0, epoch=-1))


def test_dataset_validation_and_subset():
    with pytest.raises(DomainError):
        Dataset(np.zeros((3, 2)), np.array([0, 1, 5]), 3)
    ds = synth_blobs(3, 10, 4, 0.1, seed=0)
    sub = ds.subset(7)
    assert len(sub) == 7
    assert np.array_equal(sub.inputs, ds.inputs[:7])
    with pytest.raises(DomainError):
        ds.subset(0)
    with pytest.raises(DomainError):
        ds.subset(31)


# -- real MNIST (only when the IDX files are present) -----------------------

def _mnist_root():
    import os
    return os.environ.get("LRDOPT_DATA_DIR") or "data/mnist"


def _mnist_present():
    import os
    from lrdopt.data import mnist_paths
    return all(os.path.exists(p) for pair in mnist_paths(_mnist_root()).values()
               for p in pair)


@pytest.mark.skipif(not _mnist_present(), reason="MNIST IDX files not present")
def test_mnist_shapes_and_scaling():
    train, test = load_mnist(_mnist_root())
    assert len(train) == 60_000
    assert len(test) == 10_000
    assert train.dim == 784
    assert train.num_classes == 10
    assert train.inputs.min() >= 0.0 and train.inputs.max() <= 1.0
    assert train.inputs.max() == 1.0  # some pixel saturates
