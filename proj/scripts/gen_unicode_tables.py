#!/usr/bin/env python3
"""Regenerates src/unicode_tables.inc from the running Python's unicodedata."""
import sys
import unicodedata

MAX_CP = 0x110000


def ranges(pred):
    out = []
    start = None
    for cp in range(MAX_CP):
        hit = pred(cp)
        if hit and start is None:
            start = cp
        elif not hit and start is not None:
            out.append((start, cp - 1))
            start = None
    if start is not None:
        out.append((start, MAX_CP - 1))
    return out


def category(cp):
    return unicodedata.category(chr(cp))


def lower_pairs():
    pairs = []
    for cp in range(MAX_CP):
        if 0xD800 <= cp <= 0xDFFF:
            continue
        low = chr(cp).lower()
        if len(low) != 1:
            # Only U+0130 has a multi-code-point full mapping; its simple mapping is U+0069.
            low = low[0]
        if ord(low) != cp:
            pairs.append((cp, ord(low)))
    return pairs


def emit_ranges(name, rs):
    lines = [f"inline constexpr CodeRange {name}[] = {{"]
    for lo, hi in rs:
        lines.append(f"    {{0x{lo:04X}, 0x{hi:04X}}},")
    lines.append("};")
    return "\n".join(lines)


def main():
    punct = ranges(lambda cp: category(cp).startswith("P"))
    letter = ranges(lambda cp: category(cp)[0] in "LM")
    space = ranges(lambda cp: chr(cp).isspace())
    lower = lower_pairs()
    out = [
        f"// Generated by scripts/gen_unicode_tables.py (Unicode {unicodedata.unidata_version}). Do not edit.",
        "",
        emit_ranges("kPunctuation", punct),
        "",
        emit_ranges("kLetterOrMark", letter),
        "",
        emit_ranges("kWhitespace", space),
        "",
        "inline constexpr CaseMapping kLowercase[] = {",
    ]
    for cp, low in lower:
        out.append(f"    {{0x{cp:04X}, 0x{low:04X}}},")
    out.append("};")
    sys.stdout.write("\n".join(out) + "\n")


if __name__ == "__main__":
    main()
