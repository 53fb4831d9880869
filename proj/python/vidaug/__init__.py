# SPDX-License-Identifier: Apache-2.0
"""Python bindings for the vidaug engine."""

from ._vidaug import (
    ConfigError,
    InvariantViolation,
    SchemaMismatch,
    TranscriptError,
    UnparseableScore,
    VidaugError,
    cumulative_mask,
    filter_view,
    find_placement,
    frame_mask,
    lexicon_imageability,
    load_manifest,
    load_transcript,
    mbd_transform,
    otsu_threshold,
    parse_llm_score,
    parse_transcript,
    process,
    roundtrip_srt,
    stub_keyphrases,
)

__all__ = [
    "ConfigError",
    "InvariantViolation",
    "SchemaMismatch",
    "TranscriptError",
    "UnparseableScore",
    "VidaugError",
    "cumulative_mask",
    "filter_view",
    "find_placement",
    "frame_mask",
    "lexicon_imageability",
    "load_manifest",
    "load_transcript",
    "mbd_transform",
    "otsu_threshold",
    "parse_llm_score",
    "parse_transcript",
    "process",
    "roundtrip_srt",
    "stub_keyphrases",
]
