import random

import pytest
from hypothesis import given, strategies as st

from constructions import BUILDERS, constructions
from sri_infill.blocks import MARKER, SriBlock, render_sri_block
from sri_infill.extraction import Branch, diff_trim, extract_replace_code


def _block(search, replace):
    return render_sri_block(SriBlock(search, replace))


def test_marker_general_example():
    text = _block(f"x = 1\n{MARKER}\ny = 2", "x = 1\nz = x + 1\ny = 2")
    r = extract_replace_code(text)
    assert (r.middle, r.branch) == ("z = x + 1", Branch.MARKER_GENERAL)


def test_no_search_returns_raw_capture():
    r = extract_replace_code("=======\n  keep  spacing \n>>>>>>> REPLACE")
    assert (r.middle, r.branch) == ("  keep  spacing ", Branch.NO_SEARCH)


def test_no_replace():
    r = extract_replace_code("no block here")
    assert (r.middle, r.branch) == ("", Branch.NO_REPLACE)
    assert r.parse_failed


def _split_oracle(replace: str, after: str) -> str:
    # every way of writing replace as x + after; the shortest x is the cut
    cuts = [replace[:k] for k in range(len(replace) + 1) if replace[k:].startswith(after)]
    return cuts[0].strip("\n")


def test_marker_first_line_example():
    search, replace = f"{MARKER}\nreturn x", "y = f()\nreturn x"
    r = extract_replace_code(_block(search, replace))
    assert r.branch is Branch.MARKER_FIRST_LINE
    assert r.middle == _split_oracle(replace, "return x") == "y = f()"


def test_marker_indent_is_absorbed():
    text = _block(f"def f():\n    {MARKER}\n    return y", "def f():\n    y = 2\n    return y")
    assert extract_replace_code(text).middle == "y = 2"


def test_crlf_response():
    text = _block(f"a\n{MARKER}\nb", "a\nmid\nb").replace("\n", "\r\n")
    assert extract_replace_code(text).middle == "mid"


def test_second_marker_does_not_crash():
    text = _block(f"a\n{MARKER}\nb\n{MARKER}\nc", "a\nm1\nb\nm2\nc")
    r = extract_replace_code(text)
    assert r.branch is Branch.MARKER_GENERAL


def test_partial_prefix_fallback():
    # replace rewrote an earlier line, so only the last before-line anchors the cut
    text = _block(f"old()\nkeep = 1\n{MARKER}\nend()", "new()\nkeep = 1\nmid()\nend()")
    r = extract_replace_code(text)
    assert r.branch is Branch.MARKER_GENERAL
    assert r.middle == "new()\nkeep = 1\nmid()"


@pytest.mark.parametrize("builder", BUILDERS, ids=lambda b: b.__name__)
def test_each_branch_by_construction(builder):
    rng = random.Random(builder.__name__)
    for _ in range(40):
        text, expected, branch = builder(rng)
        r = extract_replace_code(text)
        assert r.branch.value == branch, text
        assert r.middle == expected, text


def test_construction_stream_covers_all_branches():
    seen = {extract_replace_code(t).branch for t, _, _ in constructions(90)}
    assert seen == set(Branch)


# diff_trim


def _lcp(a, b):
    return max(k for k in range(min(len(a), len(b)) + 1) if a[:k] == b[:k])


def _trim_oracle(search, replace):
    if not search or not replace:
        return replace
    if replace.startswith(search):
        return replace[len(search):]
    if replace.endswith(search):
        return replace[: len(replace) - len(search)]
    i = _lcp(search, replace)
    j = max(k for k in range(min(len(search), len(replace) - i) + 1) if k == 0 or search[-k:] == replace[-k:])
    return replace[i : len(replace) - j]


@pytest.mark.parametrize(
    "search,replace,expected",
    [
        ("foo(a", "foo(a, b)", ", b)"),
        ("abc", "abXc", "X"),
        ("", "xyz", "xyz"),
        ("same", "same", ""),
    ],
)
def test_diff_trim_examples(search, replace, expected):
    assert diff_trim(search, replace) == expected
    assert _trim_oracle(search, replace) == expected


@given(st.text("abc", max_size=10), st.text("abc", max_size=10))
def test_diff_trim_matches_oracle(search, replace):
    assert diff_trim(search, replace) == _trim_oracle(search, replace)


@given(st.text("abc", max_size=10), st.text("abc", max_size=10))
def test_diff_trim_is_a_substring(search, replace):
    assert diff_trim(search, replace) in replace
