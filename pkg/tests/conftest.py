import numpy as np
import pytest

from mattekit import core_io, synth
from mattekit.core_io import ClipRecord


CORPUS_SPECS = {
    "clip_disk_hard": synth.SynthSpec(
        width=48, height=48, frame_count=8, shape="feathered_disk",
        center_start=(22.0, 20.0), center_velocity=(0.3, 0.6), radius=12.0,
        feather_width=0.0, fg_color=(240, 180, 90), bg_color=(20, 60, 190),
    ),
    "clip_disk_soft": synth.SynthSpec(
        width=64, height=48, frame_count=12, shape="feathered_disk",
        center_start=(24.0, 26.0), center_velocity=(0.0, 0.9), radius=13.0,
        feather_width=3.0, fg_color=(250, 250, 250), bg_color=(5, 5, 5),
    ),
    "clip_disk_small": synth.SynthSpec(
        width=48, height=64, frame_count=10, shape="feathered_disk",
        center_start=(30.0, 22.0), center_velocity=(0.8, 0.2), radius=8.0,
        feather_width=2.0, fg_color=(200, 40, 40), bg_color=(40, 200, 120),
    ),
    "clip_rect_hard": synth.SynthSpec(
        width=64, height=64, frame_count=9, shape="feathered_rect",
        center_start=(30.0, 28.0), center_velocity=(0.4, 0.7), radius=14.0,
        feather_width=0.0, fg_color=(255, 255, 0), bg_color=(0, 0, 128),
    ),
    "clip_rect_soft": synth.SynthSpec(
        width=48, height=48, frame_count=12, shape="feathered_rect",
        center_start=(24.0, 22.0), center_velocity=(0.0, 0.3), radius=10.0,
        feather_width=4.0, fg_color=(180, 220, 255), bg_color=(90, 30, 10),
    ),
    "clip_disk_big": synth.SynthSpec(
        width=64, height=64, frame_count=12, shape="feathered_disk",
        center_start=(32.0, 30.0), center_velocity=(0.2, 0.4), radius=17.0,
        feather_width=1.5, fg_color=(120, 255, 160), bg_color=(200, 10, 80),
    ),
}


def build_corpus(root):
    records = []
    for clip_id, spec in sorted(CORPUS_SPECS.items()):
        synth.write_clip(spec, root / clip_id)
        records.append(ClipRecord(
            clip_id=clip_id,
            frames_dir=f"{clip_id}/frames",
            masks_dir=f"{clip_id}/masks",
            alpha_dir=f"{clip_id}/alpha",
            frame_count=spec.frame_count,
        ))
    core_io.save_manifest(records, root)
    return records


@pytest.fixture(scope="session")
def corpus_root(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    build_corpus(root)
    return root


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260824)
