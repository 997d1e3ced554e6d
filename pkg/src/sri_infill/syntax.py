"""Heuristic syntax provider used for block extraction.

Two strategies cover most of a polyglot corpus without native grammars:
brace matching for C-family languages and indentation blocks for
Python-like languages.  Anything implementing ``SyntaxProvider`` (for
example a tree-sitter wrapper) can be passed to the synthesis functions
instead.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Protocol

EXTENSIONS = {
    ".py": "python",
    ".pyi": "python",
    ".js": "javascript",
    ".jsx": "javascript",
    ".mjs": "javascript",
    ".ts": "typescript",
    ".tsx": "typescript",
    ".java": "java",
    ".c": "c",
    ".h": "c",
    ".cc": "cpp",
    ".cpp": "cpp",
    ".cxx": "cpp",
    ".hpp": "cpp",
    ".cs": "csharp",
    ".go": "go",
    ".rs": "rust",
    ".php": "php",
    ".kt": "kotlin",
    ".kts": "kotlin",
    ".swift": "swift",
    ".scala": "scala",
    ".dart": "dart",
    ".rb": "ruby",
    ".lua": "lua",
}

BRACE_LANGUAGES = {
    "javascript", "typescript", "java", "c", "cpp", "csharp", "go", "rust",
    "php", "kotlin", "swift", "scala", "dart",
}
INDENT_LANGUAGES = {"python"}
KNOWN_LANGUAGES = BRACE_LANGUAGES | INDENT_LANGUAGES | {"ruby", "lua"}


def language_for_path(path: str) -> str:
    for ext, lang in EXTENSIONS.items():
        if path.lower().endswith(ext):
            return lang
    return ""


@dataclass(frozen=True)
class Block:
    kind: str  # "function_body" or "logic_block"
    start_line: int  # 1-based inclusive
    end_line: int


class SyntaxProvider(Protocol):
    def blocks(self, source: str, language: str) -> list[Block]: ...


_CONTROL = re.compile(
    r"^\s*(?:\}\s*)?(?:else\s+if|if|else|for|foreach|while|do|switch|match|try|catch|finally|loop|select|when|unless|until)\b"
)
_TYPE_DECL = re.compile(
    r"^\s*(?:(?:public|private|protected|internal|static|abstract|final|sealed|partial|export|default|pub(?:\(\w+\))?|open|data|inline)\s+)*"
    r"(?:class|struct|interface|enum|namespace|trait|impl|object|module|record|extension|package|union|type\s+\w+\s+(?:struct|interface))\b"
)
_CONTINUATION = re.compile(r"^\s*\}\s*(?:else|catch|finally|while)\b")
_PY_CONTINUATION = re.compile(r"^\s*(?:elif|else|except|finally|case)\b")
_PY_FUNC = re.compile(r"^(\s*)(?:async\s+)?def\s")
_PY_CONTROL = re.compile(r"^(\s*)(?:if|elif|else|for|while|with|try|except|finally|async\s+for|async\s+with|match|case)\b")


class HeuristicProvider:
    """Brace/indentation block finder; good enough for dataset synthesis."""

    def blocks(self, source: str, language: str) -> list[Block]:
        lines = source.replace("\r\n", "\n").split("\n")
        if language in INDENT_LANGUAGES:
            return _indent_blocks(lines)
        if language in BRACE_LANGUAGES:
            return _brace_blocks(lines)
        found = _brace_blocks(lines)
        return found if found else _indent_blocks(lines)


def _strip_code(lines: list[str]) -> list[str]:
    """Blank out string literals and comments so braces can be counted."""
    out = []
    in_block_comment = False
    for line in lines:
        buf = []
        i = 0
        quote = None
        while i < len(line):
            ch = line[i]
            nxt = line[i + 1] if i + 1 < len(line) else ""
            if in_block_comment:
                if ch == "*" and nxt == "/":
                    in_block_comment = False
                    i += 2
                    buf.append("  ")
                    continue
                buf.append(" ")
            elif quote:
                if ch == "\\":
                    buf.append("  ")
                    i += 2
                    continue
                if ch == quote:
                    quote = None
                buf.append(" ")
            elif ch == "/" and nxt == "/":
                break
            elif ch == "/" and nxt == "*":
                in_block_comment = True
                buf.append("  ")
                i += 2
                continue
            elif ch in "\"'`":
                quote = ch
                buf.append(" ")
            else:
                buf.append(ch)
            i += 1
        # unterminated quotes do not span lines (char literals, apostrophes in prose)
        out.append("".join(buf))
    return out


def _brace_blocks(lines: list[str]) -> list[Block]:
    code = _strip_code(lines)
    stack: list[tuple[int, int]] = []  # (line index of '{', line index of header)
    pairs: list[tuple[int, int, int]] = []
    for i, text in enumerate(code):
        for ch in text:
            if ch == "{":
                header = i
                before = text[: text.index("{")].strip() if "{" in text else ""
                if not before:
                    header = _previous_nonblank(code, i)
                stack.append((i, header))
            elif ch == "}" and stack:
                open_line, header = stack.pop()
                if i > open_line:
                    pairs.append((header, open_line, i))

    by_header = {h: c for h, _, c in pairs}
    found = []
    for header, open_line, close_line in pairs:
        head = code[header] if header >= 0 else ""
        if _TYPE_DECL.match(head) or not code[open_line].rstrip().endswith("{"):
            continue
        if _CONTROL.match(head):
            if _CONTINUATION.match(head):
                continue  # else/catch arms belong to the chain that opened them
            end = close_line
            while _CONTINUATION.match(code[end]) and end in by_header and by_header[end] > end:
                end = by_header[end]
            found.append(Block("logic_block", header + 1, end + 1))
        elif "(" in head or re.search(r"\b(?:func|fn|function|fun|def)\b", head) or "=>" in head:
            body = (open_line + 1, close_line - 1)
            if body[0] <= body[1] and any(lines[k].strip() for k in range(body[0], body[1] + 1)):
                found.append(Block("function_body", body[0] + 1, body[1] + 1))
    return sorted(set(found), key=lambda b: (b.start_line, b.end_line, b.kind))


def _previous_nonblank(code: list[str], i: int) -> int:
    for k in range(i - 1, -1, -1):
        if code[k].strip():
            return k
    return -1


def _indent_width(line: str) -> int:
    return len(line.expandtabs(4)) - len(line.expandtabs(4).lstrip())


def _strip_py_comment(line: str) -> str:
    # good enough: '#' inside strings is rare on block headers
    return line.split("#", 1)[0].rstrip()


def _block_end(lines: list[str], header_end: int, indent: int) -> int:
    """Last line index of the indented suite following ``header_end``."""
    last = header_end
    for k in range(header_end + 1, len(lines)):
        if not lines[k].strip():
            continue
        if _indent_width(lines[k]) <= indent:
            break
        last = k
    return last


def _extend_chain(lines: list[str], end: int, indent: int) -> int:
    """Follow elif/else/except/finally arms at the same indentation."""
    while True:
        k = end + 1
        while k < len(lines) and not lines[k].strip():
            k += 1
        if k >= len(lines) or _indent_width(lines[k]) != indent or not _PY_CONTINUATION.match(lines[k]):
            return end
        header_end = k
        while header_end < len(lines) and not _strip_py_comment(lines[header_end]).endswith(":"):
            header_end += 1
        if header_end >= len(lines):
            return end
        end = _block_end(lines, header_end, indent)


def _indent_blocks(lines: list[str]) -> list[Block]:
    found = []
    in_string = False
    for i, line in enumerate(lines):
        if line.count('"""') % 2 == 1 or line.count("'''") % 2 == 1:
            in_string = not in_string
            continue
        if in_string:
            continue
        func = _PY_FUNC.match(line)
        ctrl = _PY_CONTROL.match(line)
        if not func and not ctrl:
            continue
        header_end = i
        while header_end < len(lines) and header_end - i < 20 and not _strip_py_comment(lines[header_end]).endswith(":"):
            header_end += 1
        if header_end >= len(lines) or header_end - i >= 20:
            continue
        indent = _indent_width(line)
        end = _block_end(lines, header_end, indent)
        if end == header_end:
            continue
        if func:
            found.append(Block("function_body", header_end + 2, end + 1))
            continue
        if _PY_CONTINUATION.match(line):
            continue
        end = _extend_chain(lines, end, indent)
        found.append(Block("logic_block", i + 1, end + 1))
    return found
