"""Apply search/replace blocks by content and convert them to unified diffs.

Anchoring never looks at line numbers.  The SEARCH text is matched line by
line against the file, ignoring trailing whitespace on each line; leading
whitespace is significant.  The marker line is handled specially:

* if the file still contains the marker, the SEARCH marker line matches the
  file's marker line regardless of indentation;
* if the file has no marker (the edit targets the pristine file), the marker
  is dropped from the SEARCH text before matching.
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass

from .blocks import MARKER, SriBlock


class PatchError(Exception):
    pass


class AnchorNotFound(PatchError):
    pass


class AmbiguousAnchor(PatchError):
    def __init__(self, occurrence_count: int):
        super().__init__(f"search text matches {occurrence_count} locations")
        self.occurrence_count = occurrence_count


@dataclass(frozen=True)
class AnchorSpan:
    start: int  # character offsets into the original file text
    end: int
    start_byte: int
    end_byte: int
    start_line: int  # 1-based, inclusive
    end_line: int
    occurrence_count: int


def _split_lines(text: str) -> list[str]:
    """Split keeping terminators; only ``\\n`` ends a line."""
    if not text:
        return []
    parts = text.split("\n")
    lines = [p + "\n" for p in parts[:-1]]
    if parts[-1]:
        lines.append(parts[-1])
    return lines


def _content(line: str) -> str:
    if line.endswith("\n"):
        line = line[:-1]
    if line.endswith("\r"):
        line = line[:-1]
    return line


def _pattern(search: str, marker: str, file_has_marker: bool) -> list[tuple[str, bool]]:
    """(normalized line, is_marker_line) pairs to match against the file."""
    out = []
    for line in search.replace("\r\n", "\n").split("\n"):
        if marker in line:
            if file_has_marker:
                out.append((line.strip(), True))
                continue
            line = line.replace(marker, "")
            if not line.strip():
                continue
        out.append((line.rstrip(), False))
    return out


def locate_anchor(file: str, search: str, marker: str = MARKER, *, nearest_to: int | None = None) -> AnchorSpan:
    """Find the unique span of ``file`` matched by ``search``.

    With several matches, ``AmbiguousAnchor`` is raised unless ``nearest_to``
    (a 1-based line number) is given, in which case the match closest to that
    line wins.
    """
    lines = _split_lines(file)
    contents = [_content(line) for line in lines]
    file_has_marker = any(marker in c for c in contents)
    pattern = _pattern(search, marker, file_has_marker)
    if not pattern:
        raise AnchorNotFound("search text is empty once the marker line is removed")

    normalized = [c.rstrip() for c in contents]
    hits = []
    m = len(pattern)
    for i in range(len(lines) - m + 1):
        for k, (want, is_marker) in enumerate(pattern):
            got = normalized[i + k]
            if (got.strip() if is_marker else got) != want:
                break
        else:
            hits.append(i)

    if not hits:
        raise AnchorNotFound("search text does not occur in the file")
    if len(hits) > 1:
        if nearest_to is None:
            raise AmbiguousAnchor(len(hits))
        first = min(hits, key=lambda i: (min(abs(i + 1 - nearest_to), abs(i + m - nearest_to)), i))
    else:
        first = hits[0]

    start = sum(len(line) for line in lines[:first])
    last = first + m - 1
    end = start + sum(len(line) for line in lines[first:last]) + len(contents[last])
    return AnchorSpan(
        start=start,
        end=end,
        start_byte=len(file[:start].encode("utf-8")),
        end_byte=len(file[:end].encode("utf-8")),
        start_line=first + 1,
        end_line=last + 1,
        occurrence_count=len(hits),
    )


def apply_sri(file: str, block: SriBlock, marker: str = MARKER, *, nearest_to: int | None = None) -> str:
    """Return ``file`` with the anchored span replaced by ``block.replace``."""
    if block.search is None:
        raise AnchorNotFound("block has no SEARCH section to anchor on")
    span = locate_anchor(file, block.search, marker, nearest_to=nearest_to)
    eol = _span_line_ending(file, span)
    replacement = block.replace.replace("\r\n", "\n").replace("\n", eol)
    return file[: span.start] + replacement + file[span.end :]


def _span_line_ending(file: str, span: AnchorSpan) -> str:
    nl = file.find("\n", span.start)
    if nl == -1:
        nl = file.find("\n")
    if nl > 0 and file[nl - 1] == "\r":
        return "\r\n"
    return "\n"


def to_unified_diff(
    file: str,
    block: SriBlock,
    marker: str = MARKER,
    path: str = "file",
    context_lines: int = 3,
    *,
    nearest_to: int | None = None,
) -> str:
    """Unified diff turning ``file`` into ``apply_sri(file, block)``.

    Identity edits give an empty string.
    """
    patched = apply_sri(file, block, marker, nearest_to=nearest_to)
    if patched == file:
        return ""
    old, new = _split_lines(file), _split_lines(patched)
    out = []
    for line in difflib.unified_diff(old, new, f"a/{path}", f"b/{path}", n=context_lines):
        if line.endswith("\n"):
            out.append(line)
        else:
            out.append(line + "\n\\ No newline at end of file\n")
    return "".join(out)
