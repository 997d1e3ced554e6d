"""Take a model's search/replace answer, recover the infilled code and patch the file.

Run: python3 demos/01_extract_and_apply.py
"""

from sri_infill import MARKER, apply_sri, extract_replace_code, parse_sri_block, to_unified_diff

marked_source = f"""\
def mean(xs):
    if not xs:
        raise ValueError("empty")
    {MARKER}
    return total / len(xs)
"""

# What a chat model might send back: prose, then a fenced block.
response = f"""\
Sure, here is the completed region.

```replace
<<<<<<< SEARCH
    if not xs:
        raise ValueError("empty")
    {MARKER}
    return total / len(xs)
=======
    if not xs:
        raise ValueError("empty")
    total = sum(xs)
    return total / len(xs)
>>>>>>> REPLACE
```
"""

# 1. Scoring only needs the middle.
result = extract_replace_code(response)
print(f"branch: {result.branch.value}")
print(f"middle: {result.middle!r}\n")

# 2. Applying needs the whole block; it is anchored on content, not line numbers.
block = parse_sri_block(response)
print(to_unified_diff(marked_source, block, path="stats.py"))
print(apply_sri(marked_source, block))
