"""Recover the inserted middle code from a search/replace response.

This follows the reference post-processing routine branch for branch,
including its uneven newline stripping, because exact-match scores
depend on it.  Each result carries the name of the branch that produced it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .blocks import MARKER

SEARCH_PATTERN = re.compile(r"<{2,}\s*SEARCH\n(.*?)\n\s*={3,}", re.DOTALL)
REPLACE_PATTERN = re.compile(r"={3,}\n(.*?)\n\s*>{2,}\s*REPLACE", re.DOTALL)


class Branch(str, Enum):
    NO_REPLACE = "no_replace"
    NO_SEARCH = "no_search"
    INLINE_PREFIX = "inline_prefix"
    INLINE_SUFFIX = "inline_suffix"
    INLINE_COMMON = "inline_common"
    MARKER_FIRST_LINE = "marker_first_line"
    MARKER_LAST_LINE = "marker_last_line"
    MARKER_GENERAL = "marker_general"
    FALLBACK_FULL_REPLACE = "fallback_full_replace"


@dataclass(frozen=True)
class ExtractionResult:
    middle: str
    branch: Branch

    @property
    def parse_failed(self) -> bool:
        return self.branch is Branch.NO_REPLACE


def extract_replace_code(text: str, marker: str = MARKER) -> ExtractionResult:
    text = text.replace("\r\n", "\n")
    search_match = SEARCH_PATTERN.search(text)
    replace_match = REPLACE_PATTERN.search(text)

    if not replace_match:
        return ExtractionResult("", Branch.NO_REPLACE)
    if not search_match:
        return ExtractionResult(replace_match.group(1), Branch.NO_SEARCH)

    search_code = search_match.group(1).strip()
    replace_code = replace_match.group(1).strip()

    if marker not in search_code:
        if search_code and replace_code:
            if replace_code.startswith(search_code):
                return ExtractionResult(replace_code[len(search_code) :], Branch.INLINE_PREFIX)
            if replace_code.endswith(search_code):
                return ExtractionResult(replace_code[: -len(search_code)], Branch.INLINE_SUFFIX)
            return ExtractionResult(_common_affix_trim(search_code, replace_code), Branch.INLINE_COMMON)
        return ExtractionResult(replace_code, Branch.FALLBACK_FULL_REPLACE)

    # A second marker stays inside ``after``; the reference routine would fail to unpack here.
    before, _, after = search_code.partition(marker)
    before = before.rstrip("\n")
    after = after.lstrip("\n")

    if not before.strip():
        middle = replace_code.split(after)[0].strip("\n") if after else replace_code.strip("\n")
        return ExtractionResult(middle, Branch.MARKER_FIRST_LINE)

    if not after.strip():
        middle = replace_code[len(before) :].strip("\n") if before else replace_code.strip("\n")
        return ExtractionResult(middle, Branch.MARKER_LAST_LINE)

    result = replace_code
    if before:
        if result.startswith(before):
            result = result[len(before) :].lstrip("\n")
        else:
            last_line_before = before.split("\n")[-1]
            if result.startswith(last_line_before):
                i = 0
                while i < len(last_line_before) and i < len(result) and last_line_before[i] == result[i]:
                    i += 1
                result = result[i:]

    if after:
        if result.endswith(after):
            result = result[: -len(after)].rstrip("\n")
        else:
            first_line_after = after.split("\n")[0]
            if result.endswith(first_line_after):
                i = -1
                while -i <= len(first_line_after) and -i <= len(result) and first_line_after[i] == result[i]:
                    i -= 1
                result = result[: i + 1]

    return ExtractionResult(result.strip("\n"), Branch.MARKER_GENERAL)


def diff_trim(search: str, replace: str) -> str:
    """Inline completion: what ``replace`` adds around or inside ``search``.

    Neither argument may contain the marker.
    """
    if search and replace:
        if replace.startswith(search):
            return replace[len(search) :]
        if replace.endswith(search):
            return replace[: -len(search)]
        return _common_affix_trim(search, replace)
    return replace


def _common_affix_trim(search: str, replace: str) -> str:
    i = 0
    while i < len(search) and i < len(replace) and search[i] == replace[i]:
        i += 1
    # suffix may not reach back into the common prefix
    room = len(replace) - i
    j = 0
    while j < len(search) and j < room and search[-1 - j] == replace[-1 - j]:
        j += 1
    return replace[i : len(replace) - j]
