"""mattekit: video matting evaluation and data-pipeline toolkit."""

from .core_io import (
    ClipRecord,
    FrameSequence,
    MaskSequence,
    MatteSequence,
    SequenceError,
    Trimap,
    binarize_matte,
    load_frame_sequence,
    load_manifest,
    load_mask_sequence,
    load_matte_sequence,
    mask_as_matte,
    save_frame_sequence,
    save_manifest,
    save_mask_sequence,
    save_matte_sequence,
)
from .metrics import MetricConfig, EvalReport, evaluate_clip

__all__ = [
    "ClipRecord",
    "FrameSequence",
    "MaskSequence",
    "MatteSequence",
    "SequenceError",
    "Trimap",
    "MetricConfig",
    "EvalReport",
    "binarize_matte",
    "evaluate_clip",
    "load_frame_sequence",
    "load_manifest",
    "load_mask_sequence",
    "load_matte_sequence",
    "mask_as_matte",
    "save_frame_sequence",
    "save_manifest",
    "save_mask_sequence",
    "save_matte_sequence",
]

__version__ = "0.1.0"
