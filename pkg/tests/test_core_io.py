import numpy as np
import pytest
from PIL import Image

from mattekit import core_io
from mattekit.core_io import (
    MaskSequence,
    MatteSequence,
    SequenceError,
    binarize_matte,
    load_matte_sequence,
    mask_as_matte,
    save_matte_sequence,
)


def _write_gray(path, arr):
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(np.asarray(arr, dtype=np.uint8), mode="L").save(path)


class TestLoadMatteSequence:
    def test_all_255_maps_to_one(self, tmp_path):
        _write_gray(tmp_path / "00000.png", np.full((4, 4), 255))
        m = load_matte_sequence(tmp_path)
        assert np.all(m.data == 1.0)

    def test_byte_128_maps_linearly(self, tmp_path):
        _write_gray(tmp_path / "00000.png", np.full((4, 4), 128))
        m = load_matte_sequence(tmp_path)
        assert np.allclose(m.data, 128 / 255)

    def test_gap_in_numbering_rejected(self, tmp_path):
        _write_gray(tmp_path / "00000.png", np.zeros((4, 4)))
        _write_gray(tmp_path / "00002.png", np.zeros((4, 4)))
        with pytest.raises(SequenceError, match="gap at index 1"):
            load_matte_sequence(tmp_path)

    def test_mixed_resolutions_rejected(self, tmp_path):
        _write_gray(tmp_path / "00000.png", np.zeros((4, 4)))
        _write_gray(tmp_path / "00001.png", np.zeros((5, 4)))
        with pytest.raises(SequenceError, match="mixed resolutions"):
            load_matte_sequence(tmp_path)

    def test_non_grayscale_rejected(self, tmp_path):
        tmp_path.mkdir(exist_ok=True)
        Image.fromarray(np.zeros((4, 4, 3), dtype=np.uint8), mode="RGB").save(
            tmp_path / "00000.png"
        )
        with pytest.raises(SequenceError, match="non-grayscale"):
            load_matte_sequence(tmp_path)

    def test_empty_dir_rejected(self, tmp_path):
        with pytest.raises(SequenceError, match="T >= 1"):
            load_matte_sequence(tmp_path)


class TestSaveMatteSequence:
    def test_endpoint_roundtrip_exact(self, tmp_path):
        m = MatteSequence(np.ones((2, 4, 4)))
        save_matte_sequence(m, tmp_path)
        assert np.all(load_matte_sequence(tmp_path).data == 1.0)

    def test_rounding_half_away_from_zero(self, tmp_path):
        # 0.3 * 255 = 76.5 rounds away from zero to 77
        m = MatteSequence(np.full((1, 2, 2), 0.3))
        save_matte_sequence(m, tmp_path)
        assert np.all(load_matte_sequence(tmp_path).data == 77 / 255)

    def test_quantization_bound(self, tmp_path, rng):
        m = MatteSequence(rng.random((3, 8, 8)))
        save_matte_sequence(m, tmp_path)
        back = load_matte_sequence(tmp_path)
        assert np.abs(back.data - m.data).max() <= 1 / 510 + 1e-12

    def test_deterministic_bytes(self, tmp_path, rng):
        m = MatteSequence(rng.random((2, 6, 6)))
        save_matte_sequence(m, tmp_path / "a")
        save_matte_sequence(m, tmp_path / "b")
        for i in range(2):
            assert (tmp_path / "a" / f"{i:05d}.png").read_bytes() == (
                tmp_path / "b" / f"{i:05d}.png"
            ).read_bytes()

    def test_empty_sequence_unconstructible(self):
        with pytest.raises(SequenceError, match="T >= 1"):
            MatteSequence(np.ones((0, 4, 4)))


class TestBinarize:
    def test_threshold_boundary_uses_geq(self):
        m = MatteSequence(np.full((1, 2, 2), 0.5))
        assert np.all(binarize_matte(m, 0.5).data == 1)

    def test_all_zero(self):
        m = MatteSequence(np.zeros((1, 2, 2)))
        assert np.all(binarize_matte(m, 0.3).data == 0)

    def test_ramp(self):
        m = MatteSequence(np.array([0.0, 0.25, 0.5, 0.75, 1.0]).reshape(1, 1, 5))
        assert binarize_matte(m, 0.5).data.ravel().tolist() == [0, 0, 1, 1, 1]

    def test_threshold_out_of_range(self):
        m = MatteSequence(np.zeros((1, 2, 2)))
        for bad in (0.0, 1.0, -0.2, 1.5):
            with pytest.raises(ValueError):
                binarize_matte(m, bad)

    def test_idempotent_through_embedding(self, rng):
        m = MatteSequence(rng.random((2, 6, 6)))
        once = binarize_matte(m)
        twice = binarize_matte(mask_as_matte(once))
        assert np.array_equal(once.data, twice.data)


class TestInvariants:
    def test_matte_range_enforced(self):
        with pytest.raises(SequenceError):
            MatteSequence(np.full((1, 2, 2), 1.5))

    def test_mask_binary_enforced(self):
        with pytest.raises(SequenceError):
            MaskSequence(np.full((1, 2, 2), 2))

    def test_data_is_immutable(self):
        m = MaskSequence(np.zeros((1, 2, 2), dtype=np.uint8))
        with pytest.raises(ValueError):
            m.data[0, 0, 0] = 1


class TestManifest:
    def test_roundtrip(self, corpus_root):
        records = core_io.load_manifest(corpus_root)
        assert len(records) >= 6
        assert records == sorted(records, key=lambda r: r.clip_id)

    def test_missing_frames_detected(self, tmp_path, corpus_root):
        import json, shutil

        shutil.copytree(corpus_root, tmp_path / "broken", dirs_exist_ok=True)
        records = core_io.load_manifest(tmp_path / "broken")
        victim = tmp_path / "broken" / records[0].alpha_dir / "00000.png"
        victim.unlink()
        with pytest.raises(SequenceError, match=records[0].clip_id):
            core_io.load_manifest(tmp_path / "broken")
