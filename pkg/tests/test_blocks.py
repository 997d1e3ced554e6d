import pytest
from hypothesis import given, strategies as st

from sri_infill.blocks import (
    MARKER,
    NoReplaceSection,
    SriBlock,
    check_limit,
    parse_sri_block,
    render_sri_block,
    validate_region,
)


def test_parse_basic():
    b = parse_sri_block("<<<<<<< SEARCH\nA\n=======\nB\n>>>>>>> REPLACE")
    assert (b.search, b.replace) == ("A", "B")
    assert not b.fenced


def test_short_delimiters_parse_the_same():
    long = parse_sri_block("<<<<<<< SEARCH\nA\n=======\nB\n>>>>>>> REPLACE")
    short = parse_sri_block("<< SEARCH\nA\n===\nB\n>> REPLACE")
    assert short == long


def test_missing_footer_raises():
    with pytest.raises(NoReplaceSection):
        parse_sri_block("<<<<<<< SEARCH\nA\n=======\nB\n")


def test_no_header_gives_none_search():
    b = parse_sri_block("=======\nB\n>>>>>>> REPLACE")
    assert b.search is None and b.replace == "B"


def test_prose_and_fence_around_block():
    text = "Sure, here you go:\n\n```replace\n<<<<<<< SEARCH\nx\n=======\ny\n>>>>>>> REPLACE\n```\nDone."
    b = parse_sri_block(text)
    assert b == SriBlock("x", "y", fenced=True)


def test_crlf_input():
    b = parse_sri_block("<<<<<<< SEARCH\r\nA\r\n=======\r\nB\r\n>>>>>>> REPLACE\r\n")
    assert (b.search, b.replace, b.line_ending) == ("A", "B", "\r\n")


def test_render_five_lines():
    assert render_sri_block(SriBlock("A", "B")) == "<<<<<<< SEARCH\nA\n=======\nB\n>>>>>>> REPLACE"


def test_render_empty_search_and_fence():
    out = render_sri_block(SriBlock("", "B"), fence=True)
    assert out == "```replace\n<<<<<<< SEARCH\n\n=======\nB\n>>>>>>> REPLACE\n```"
    assert parse_sri_block(out) == SriBlock("", "B", fenced=True)


def _safe_line():
    alphabet = st.characters(blacklist_categories=("Cs", "Cc"), blacklist_characters="\r\n")
    return st.text(alphabet, max_size=30).filter(
        lambda s: not any(
            p in s.strip() for p in ("SEARCH", "REPLACE")
        ) and not s.strip().startswith(("<<", "==", ">>", "```"))
    )


section = st.lists(_safe_line(), max_size=8).map("\n".join)


@given(search=st.one_of(st.none(), section), replace=section, fenced=st.booleans(),
       eol=st.sampled_from(["\n", "\r\n"]))
def test_round_trip(search, replace, fenced, eol):
    b = SriBlock(search, replace, fenced=fenced, line_ending=eol)
    assert parse_sri_block(render_sri_block(b)) == b


def _window(above: int, below: int) -> SriBlock:
    lines = [f"a{i}" for i in range(above)] + [MARKER] + [f"b{i}" for i in range(below)]
    return SriBlock("\n".join(lines), "x")


def test_region_small_window_passes():
    r = validate_region(_window(3, 3), MARKER, 10)
    assert r.ok and (r.lines_above, r.lines_below) == (3, 3)


def test_region_too_tall():
    r = validate_region(_window(12, 0), MARKER, 10)
    assert r.marker_present and not r.within_window and not r.ok


def test_region_missing_marker():
    r = validate_region(SriBlock("a\nb", "c"), MARKER, 10)
    assert not r.marker_present and not r.ok


def test_region_marker_left_in_replace():
    r = validate_region(SriBlock(MARKER, MARKER), MARKER, 10)
    assert not r.replace_marker_free


@given(above=st.integers(0, 40), below=st.integers(0, 40), limit=st.integers(1, 40), extra=st.integers(0, 40))
def test_region_monotone_in_limit(above, below, limit, extra):
    b = _window(above, below)
    if validate_region(b, MARKER, limit).ok:
        assert validate_region(b, MARKER, limit + extra).ok


@pytest.mark.parametrize("bad", [0, 1001, -3, True, 2.5])
def test_limit_bounds(bad):
    with pytest.raises(ValueError):
        check_limit(bad)
