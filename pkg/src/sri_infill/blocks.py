"""SEARCH/REPLACE block grammar.

A block looks like::

    <<<<<<< SEARCH
    code around /* MIDDLE CODE TO COMPLETE */
    =======
    code with the middle filled in
    >>>>>>> REPLACE

optionally wrapped in a ```replace fence.  Parsing is lenient about the
delimiter widths (two or more ``<``/``>``, three or more ``=``); rendering
always emits the seven-character form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

MARKER = "/* MIDDLE CODE TO COMPLETE */"
DEFAULT_LIMIT = 10

_HEADER = re.compile(r"<{2,}[ \t]*SEARCH[ \t]*")
_SEPARATOR = re.compile(r"={3,}[ \t]*")
_FOOTER = re.compile(r">{2,}[ \t]*REPLACE[ \t]*")
_FENCE_OPEN = re.compile(r"```[ \t]*replace\b.*")


class NoReplaceSection(ValueError):
    """Raised when a response has no ``=======`` / ``>>>>>>> REPLACE`` pair."""


@dataclass(frozen=True)
class SriBlock:
    """One parsed SEARCH/REPLACE edit.

    ``search`` is None when the response carried only a REPLACE section.
    ``line_ending`` records the style of the text the block was parsed from;
    the sections themselves always use LF.
    """

    search: str | None
    replace: str
    fenced: bool = False
    line_ending: str = "\n"


@dataclass(frozen=True)
class RegionReport:
    marker_present: bool
    within_window: bool
    replace_marker_free: bool
    lines_above: int | None = None
    lines_below: int | None = None

    @property
    def ok(self) -> bool:
        return self.marker_present and self.within_window and self.replace_marker_free


def check_limit(limit: int) -> int:
    if isinstance(limit, bool) or not isinstance(limit, int) or not 1 <= limit <= 1000:
        raise ValueError(f"region limit must be an integer in 1..1000, got {limit!r}")
    return limit


def detect_line_ending(text: str) -> str:
    crlf = text.count("\r\n")
    return "\r\n" if crlf and crlf >= text.count("\n") - crlf else "\n"


def parse_sri_block(text: str) -> SriBlock:
    """Parse the first SEARCH/REPLACE block in ``text``.

    Prose around the block is ignored.  A block with no SEARCH header is
    legal and yields ``search=None``.
    """
    line_ending = detect_line_ending(text)
    lines = text.replace("\r\n", "\n").split("\n")

    header = _first(lines, _HEADER, 0)
    start = header + 1 if header is not None else 0
    sep = _first(lines, _SEPARATOR, start)
    footer = _first(lines, _FOOTER, sep + 1) if sep is not None else None
    if sep is None or footer is None:
        raise NoReplaceSection("no '=======' ... '>>>>>>> REPLACE' section found")

    search = _join(lines[start:sep]) if header is not None else None
    replace = _join(lines[sep + 1 : footer])
    opener = header if header is not None else sep
    fenced = _preceded_by_fence(lines, opener)
    return SriBlock(search=search, replace=replace, fenced=fenced, line_ending=line_ending)


def render_sri_block(block: SriBlock, fence: bool | None = None) -> str:
    """Serialize ``block``; ``fence`` defaults to ``block.fenced``.

    Empty sections are written as one blank line so that the reference
    extraction regexes (which need a newline on both sides) still match.
    """
    if fence is None:
        fence = block.fenced
    out: list[str] = []
    if fence:
        out.append("```replace")
    if block.search is not None:
        out.append("<<<<<<< SEARCH")
        out.extend(block.search.split("\n"))
    out.append("=======")
    out.extend(block.replace.split("\n"))
    out.append(">>>>>>> REPLACE")
    if fence:
        out.append("```")
    return block.line_ending.join(out)


def validate_region(block: SriBlock, marker: str = MARKER, limit: int = DEFAULT_LIMIT) -> RegionReport:
    """Check that the SEARCH text holds the marker and stays inside the window."""
    check_limit(limit)
    search = block.search or ""
    replace_free = marker not in block.replace
    lines = search.split("\n")
    at = next((i for i, line in enumerate(lines) if marker in line), None)
    if at is None:
        return RegionReport(False, False, replace_free)
    above = at
    below = len(lines) - at - 1
    return RegionReport(
        marker_present=True,
        within_window=above <= limit and below <= limit,
        replace_marker_free=replace_free,
        lines_above=above,
        lines_below=below,
    )


def _first(lines: list[str], pattern: re.Pattern, start: int) -> int | None:
    for i in range(start, len(lines)):
        if pattern.fullmatch(lines[i]):
            return i
    return None


def _join(lines: list[str]) -> str:
    return "\n".join(lines)


def _preceded_by_fence(lines: list[str], index: int) -> bool:
    for i in range(index - 1, -1, -1):
        if lines[i].strip():
            return bool(_FENCE_OPEN.fullmatch(lines[i].strip()))
    return False
