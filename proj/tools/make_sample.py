# SPDX-License-Identifier: Apache-2.0
"""Regenerates data/sample: twelve synthetic 320x180 frames and a 10-cue SRT.

Output is deterministic; rerunning leaves the checked-in files unchanged.
"""

import argparse
import pathlib

import numpy as np
from PIL import Image, ImageDraw

WIDTH, HEIGHT = 320, 180
FRAMES = 12

CUES = [
    (0.000, 1.150, "Welcome back to the channel. Today we talk about the economy."),
    (1.150, 2.400, "Picture a red sunset over the mountains and a quiet lake."),
    (2.400, 3.600, "Government policy shapes the framework of economic development."),
    (3.600, 4.800, "An elephant and a giraffe walk across the desert toward the river."),
    (4.800, 5.950, "The principle of responsibility is an abstract concept."),
    (5.950, 7.200, "A lighthouse stands on the cliff while boats sail into the harbor."),
    (7.200, 8.400, "Honesty and integrity matter for accountability and transparency."),
    (8.400, 9.600, "Imagine a castle with a golden tower, a bridge, and a waterfall."),
    (9.600, 10.800, "So that is the basic idea behind this analysis."),
    (10.800, 11.900, "Thanks for watching, and see you next time with a guitar and piano."),
]


def srt_time(seconds: float) -> str:
    ms = round(seconds * 1000)
    h, rem = divmod(ms, 3_600_000)
    m, rem = divmod(rem, 60_000)
    s, ms = divmod(rem, 1000)
    return f"{h:02d}:{m:02d}:{s:02d},{ms:03d}"


def make_frame(index: int) -> Image.Image:
    y, x = np.mgrid[0:HEIGHT, 0:WIDTH]
    base = np.stack(
        [
            40 + 30 * x / WIDTH,
            60 + 40 * y / HEIGHT,
            90 + 20 * (x + y) / (WIDTH + HEIGHT),
        ],
        axis=-1,
    ).astype(np.uint8)
    img = Image.fromarray(base, "RGB")
    draw = ImageDraw.Draw(img)

    # A speaker silhouette that stays put plus one object drifting right.
    draw.ellipse((196, 40, 252, 96), fill=(235, 200, 170))
    draw.rectangle((184, 96, 264, 180), fill=(200, 60, 50))
    cx = 40 + index * 8
    draw.ellipse((cx - 18, 120 - 18, cx + 18, 120 + 18), fill=(250, 230, 60))
    return img


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=pathlib.Path, default=pathlib.Path(__file__).resolve().parents[1] / "data" / "sample")
    args = parser.parse_args()

    frames = args.out / "frames"
    frames.mkdir(parents=True, exist_ok=True)
    for i in range(FRAMES):
        make_frame(i).save(frames / f"frame_{i:06d}.png", optimize=False)

    blocks = []
    for n, (start, end, text) in enumerate(CUES, start=1):
        blocks.append(f"{n}\n{srt_time(start)} --> {srt_time(end)}\n{text}\n")
    (args.out / "transcript.srt").write_text("\n".join(blocks), encoding="utf-8")


if __name__ == "__main__":
    main()
