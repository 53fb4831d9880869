# SPDX-License-Identifier: Apache-2.0
"""Regenerates tests/fixtures: the SRT/WebVTT corpus with expected cues, and
the malformed inputs.

Every corpus file is rendered from clean cue data; the clean data itself is
written next to it as <name>.expected.json (times in milliseconds).
"""

import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parents[1] / "tests" / "fixtures"


def srt_ts(ms: int, sep: str = ",") -> str:
    h, rem = divmod(ms, 3_600_000)
    m, rem = divmod(rem, 60_000)
    s, ms = divmod(rem, 1000)
    return f"{h:02d}:{m:02d}:{s:02d}{sep}{ms:03d}"


def vtt_ts(ms: int, hours: bool = True) -> str:
    if hours:
        return srt_ts(ms, ".")
    m, rem = divmod(ms, 60_000)
    s, ms = divmod(rem, 1000)
    return f"{m:02d}:{s:02d}.{ms:03d}"


BASIC = [
    (0, 2500, "Hello and welcome."),
    (2500, 5000, "Today we look at volcanoes."),
    (5000, 8200, "Lava flows down the mountain."),
]


def srt(cues, *, body=None, nl="\n", bom=False, trailing=True, blank=1):
    """cues: (start, end, rendered lines)."""
    blocks = []
    for i, (a, b, lines) in enumerate(cues, start=1):
        blocks.append(nl.join([str(i), f"{srt_ts(a)} --> {srt_ts(b)}", *lines]))
    text = (nl * (blank + 1)).join(blocks) + (nl if trailing else "")
    return ("﻿" if bom else "") + text


def vtt(cues, *, header="WEBVTT", nl="\n", bom=False, hours=True, prelude=(), ids=False, settings=""):
    blocks = [header, *prelude]
    for i, (a, b, lines) in enumerate(cues, start=1):
        timing = f"{vtt_ts(a, hours)} --> {vtt_ts(b, hours)}{settings}"
        head = [f"cue-{i}"] if ids else []
        blocks.append(nl.join([*head, timing, *lines]))
    return ("﻿" if bom else "") + (nl + nl).join(blocks) + nl


def plain(cues):
    return [(a, b, [t]) for a, b, t in cues]


def corpus():
    """Yields (file name, file text, expected cues)."""
    yield "basic.srt", srt(plain(BASIC)), BASIC
    yield "bom.srt", srt(plain(BASIC), bom=True), BASIC
    yield "crlf.srt", srt(plain(BASIC), nl="\r\n"), BASIC
    yield "cr_only.srt", srt(plain(BASIC), nl="\r"), BASIC
    yield "no_trailing_newline.srt", srt(plain(BASIC), trailing=False), BASIC
    yield "extra_blank_lines.srt", "\n\n" + srt(plain(BASIC), blank=3) + "\n\n\n", BASIC

    tagged = [
        (0, 1500, ["<i>Italic words</i> here."]),
        (1500, 3000, ["<b>Bold</b> and <u>underlined</u>."]),
        (3000, 4500, ['<font color="#ff0000">Red</font> text.']),
        (4500, 6000, ["<i><b>Nested</b> tags</i> stay clean."]),
        (6000, 7000, ["<i></i>"]),  # empty once cleaned: dropped
        (7000, 8000, ["Less than 3 < 5 stays."]),
    ]
    yield "tags.srt", srt(tagged), [
        (0, 1500, "Italic words here."),
        (1500, 3000, "Bold and underlined."),
        (3000, 4500, "Red text."),
        (4500, 6000, "Nested tags stay clean."),
        (7000, 8000, "Less than 3 < 5 stays."),
    ]

    multi = [
        (0, 4000, ["First line of the cue,", "second line of the cue,", "third line of the cue."]),
        (4000, 6000, ["  Indented   spacing  ", "collapses."]),
    ]
    yield "multiline.srt", srt(multi), [
        (0, 4000, "First line of the cue, second line of the cue, third line of the cue."),
        (4000, 6000, "Indented spacing collapses."),
    ]

    overlap = [(0, 3000, "Speaker one starts."), (2000, 5000, "Speaker two overlaps."), (2000, 4000, "Short aside.")]
    yield "overlap.srt", srt(plain(overlap)), [
        (0, 3000, "Speaker one starts."),
        (2000, 4000, "Short aside."),
        (2000, 5000, "Speaker two overlaps."),
    ]

    unsorted = [(5000, 6000, "Third."), (0, 1000, "First."), (2000, 3000, "Second.")]
    yield "unsorted.srt", srt(plain(unsorted)), sorted(unsorted)

    uni = [
        (0, 2000, "Café crème brûlée."),
        (2000, 4000, "東京の夜景。"),
        (4000, 6000, "Snow ❄ and sun ☀."),
    ]
    yield "unicode.srt", srt(plain(uni)), uni

    long_cues = [(36_000_000, 36_002_500, "Ten hours in."), (359_999_000, 359_999_999, "Almost a hundred hours.")]
    yield "long_hours.srt", srt(plain(long_cues)), long_cues

    yield "basic.vtt", vtt(plain(BASIC)), BASIC
    yield "bom_crlf.vtt", vtt(plain(BASIC), nl="\r\n", bom=True), BASIC
    yield "no_hours.vtt", vtt(plain(BASIC), hours=False, header="WEBVTT - minutes only"), BASIC
    yield "identifiers.vtt", vtt(plain(BASIC), ids=True), BASIC
    yield "settings.vtt", vtt(plain(BASIC), settings=" align:start position:10% line:0"), BASIC
    yield "note_style.vtt", vtt(
        plain(BASIC),
        prelude=["NOTE this file has notes\nspanning two lines", "STYLE\n::cue { color: yellow; }", "REGION\nid:fred"],
    ), BASIC

    vtags = [
        (0, 2000, ["<v Roger Bingham>We are in New York City"]),
        (2000, 4000, ["<c.yellow.bg_blue>Classes</c> <lang en>work</lang>"]),
        (4000, 6000, ["Karaoke <00:00:04.500>style <00:00:05.000>timing"]),
        (6000, 8000, ["<ruby>Kanji<rt>reading</rt></ruby> done"]),
    ]
    yield "voice_tags.vtt", vtt(vtags), [
        (0, 2000, "We are in New York City"),
        (2000, 4000, "Classes work"),
        (4000, 6000, "Karaoke style timing"),
        (6000, 8000, "Kanjireading done"),
    ]

    ents = [(0, 2000, ["Fish &amp; chips"]), (2000, 4000, ["a &lt;b&gt; tag shown literally"]), (4000, 6000, ["non&nbsp;breaking"])]
    yield "entities.vtt", vtt(ents), [
        (0, 2000, "Fish & chips"),
        (2000, 4000, "a <b> tag shown literally"),
        (4000, 6000, "non breaking"),
    ]


MALFORMED = {
    # name: (text, expected error kind)
    "bad_separator.srt": ("1\n00:00:01.000 --> 00:00:02,000\nDot instead of comma.\n", "MalformedTimestamp"),
    "missing_arrow.srt": ("1\n00:00:01,000 00:00:02,000\nNo arrow.\n", "MalformedTimestamp"),
    "bad_minutes.srt": ("1\n00:61:01,000 --> 00:61:02,000\nMinutes overflow.\n", "MalformedTimestamp"),
    "garbage.srt": ("this is not a subtitle file\nat all\n", "MalformedTimestamp"),
    "inverted.srt": ("1\n00:00:05,000 --> 00:00:02,000\nBackwards.\n", "InvertedInterval"),
    "zero_length.srt": ("1\n00:00:05,000 --> 00:00:05,000\nInstant.\n", "InvertedInterval"),
    "inverted.vtt": ("WEBVTT\n\n00:09.000 --> 00:03.000\nBackwards.\n", "InvertedInterval"),
    "no_header.vtt": ("00:00:01.000 --> 00:00:02.000\nHeaderless.\n", "MissingHeader"),
    "bad_timestamp.vtt": ("WEBVTT\n\n00:00:01,000 --> 00:00:02,000\nComma in VTT.\n", "MalformedTimestamp"),
    "empty.srt": ("", "EmptyTranscript"),
    "only_tags.srt": ("1\n00:00:01,000 --> 00:00:02,000\n<i></i>\n", "EmptyTranscript"),
    "header_only.vtt": ("WEBVTT\n\nNOTE nothing here\n", "EmptyTranscript"),
}


def main() -> None:
    good = ROOT / "transcripts"
    bad = ROOT / "malformed"
    good.mkdir(parents=True, exist_ok=True)
    bad.mkdir(parents=True, exist_ok=True)
    names = []
    for name, text, expected in corpus():
        (good / name).write_bytes(text.encode("utf-8"))
        cues = [{"t_start_ms": a, "t_end_ms": b, "text": t} for a, b, t in expected]
        (good / f"{name}.expected.json").write_text(json.dumps(cues, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        names.append(name)
    assert len(names) == 20, len(names)
    kinds = {}
    for name, (text, kind) in MALFORMED.items():
        (bad / name).write_bytes(text.encode("utf-8"))
        kinds[name] = kind
    (bad / "expected.json").write_text(json.dumps(kinds, indent=2, sort_keys=True) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
