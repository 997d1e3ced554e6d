"""Completion tasks, marker insertion, context budgets and prompt rendering."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Callable

from .blocks import DEFAULT_LIMIT, MARKER, check_limit


class UnknownStyle(ValueError):
    pass


class BudgetTooSmall(ValueError):
    pass


class Style(str, Enum):
    SRI = "sri"
    NL_STANDARD = "nl_standard"
    NL_DIALOGUE = "nl_dialogue"
    NL_TEMPLATE = "nl_template"
    TOKEN_FIM = "token_fim"

    @classmethod
    def parse(cls, value: "Style | str") -> "Style":
        if isinstance(value, Style):
            return value
        try:
            return cls(str(value).replace("-", "_"))
        except ValueError:
            raise UnknownStyle(f"unknown prompt style {value!r}") from None


NL_STYLES = (Style.NL_STANDARD, Style.NL_DIALOGUE, Style.NL_TEMPLATE)


@dataclass(frozen=True)
class CompletionTask:
    prefix: str
    middle: str
    suffix: str
    crossfile_context: str = ""
    path: str = ""
    task_id: str = ""
    language: str = ""
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def source(self) -> str:
        return self.prefix + self.middle + self.suffix

    @classmethod
    def from_source(cls, source: str, start: int, end: int, **kwargs) -> "CompletionTask":
        """Cut ``source[start:end]`` out as the middle."""
        return cls(prefix=source[:start], middle=source[start:end], suffix=source[end:], **kwargs)

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "path": self.path,
            "language": self.language,
            "prefix": self.prefix,
            "middle": self.middle,
            "suffix": self.suffix,
            "crossfile_context": self.crossfile_context,
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CompletionTask":
        return cls(
            prefix=d["prefix"],
            middle=d.get("middle", ""),
            suffix=d["suffix"],
            crossfile_context=d.get("crossfile_context", ""),
            path=d.get("path", ""),
            task_id=d.get("task_id", ""),
            language=d.get("language", ""),
            metadata=d.get("metadata") or {},
        )


@dataclass(frozen=True)
class FimSentinels:
    prefix: str = "<PRE>"
    suffix: str = "<SUF>"
    middle: str = "<MID>"


@dataclass(frozen=True)
class PromptBundle:
    style: Style
    system: str = ""
    user: str = ""
    raw: str = ""

    def messages(self) -> list[dict]:
        return [{"role": "system", "content": self.system}, {"role": "user", "content": self.user}]

    def to_dict(self) -> dict:
        return {"style": self.style.value, "system": self.system, "user": self.user, "raw": self.raw}


@dataclass(frozen=True)
class ContextBudget:
    """Context budget in approximate tokens.

    The default estimate is ``ceil(chars / chars_per_unit)``; pass
    ``estimator`` (text -> units) to plug in a real tokenizer.
    """

    max_units: int
    chars_per_unit: int = 4
    estimator: Callable[[str], int] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.max_units <= 0:
            raise ValueError("max_units must be positive")
        if self.chars_per_unit <= 0:
            raise ValueError("chars_per_unit must be positive")

    def units(self, text: str) -> int:
        if self.estimator is not None:
            return self.estimator(text)
        return math.ceil(len(text) / self.chars_per_unit)


@lru_cache(maxsize=None)
def load_template(name: str) -> str:
    """Canonical prompt text for ``name`` (a Style value)."""
    text = resources.files("sri_infill").joinpath("templates", f"{name}.txt").read_text(encoding="utf-8")
    return text.rstrip("\n")


def _indent_of(line: str) -> str:
    return line[: len(line) - len(line.lstrip(" \t"))]


def marker_indent(prefix: str, suffix: str) -> str:
    for line in suffix.split("\n"):
        if line.strip():
            return _indent_of(line)
    for line in reversed(prefix.split("\n")):
        if line.strip():
            return _indent_of(line)
    return ""


def insert_marker(task: CompletionTask, marker: str = MARKER) -> str:
    """Source with the middle replaced by the marker on a line of its own."""
    eol = "\r\n" if "\r\n" in task.prefix or "\r\n" in task.suffix else "\n"
    head = task.prefix
    if head and not head.endswith("\n"):
        head += eol
    line = marker_indent(task.prefix.replace("\r", ""), task.suffix.replace("\r", "")) + marker
    # a middle that ends the file keeps its line terminator after the marker
    tail = eol + task.suffix if task.suffix or task.middle.endswith("\n") else ""
    return head + line + tail


def _marker_line_len(task: CompletionTask, marker: str) -> int:
    return len(marker_indent(task.prefix, task.suffix)) + len(marker) + 2


def _keep_lines(text: str) -> list[str]:
    parts = text.split("\n")
    lines = [p + "\n" for p in parts[:-1]]
    if parts[-1]:
        lines.append(parts[-1])
    return lines


def trim_context(task: CompletionTask, budget: ContextBudget, marker: str = MARKER) -> CompletionTask:
    """Deterministically trim ``task`` until it fits ``budget``.

    Cross-file context goes first (oldest lines first), then the prefix from
    its left edge, then the suffix from its right edge, all on whole lines.
    At least one prefix line and one suffix line are kept; the middle is
    never touched.
    """
    ctx = _keep_lines(task.crossfile_context)
    pre = _keep_lines(task.prefix)
    suf = _keep_lines(task.suffix)
    pad = " " * _marker_line_len(task, marker)

    if budget.estimator is None:
        # incremental character accounting
        limit = budget.max_units * budget.chars_per_unit
        total = len(task.crossfile_context) + len(task.prefix) + len(task.suffix) + len(pad)

        def over() -> bool:
            return total > limit

        def drop(lines: list[str], index: int) -> None:
            nonlocal total
            total -= len(lines.pop(index))
    else:

        def over() -> bool:
            return budget.units("".join(ctx) + "".join(pre) + pad + "".join(suf)) > budget.max_units

        def drop(lines: list[str], index: int) -> None:
            lines.pop(index)

    if not over():
        return task
    while ctx and over():
        drop(ctx, 0)
    while len(pre) > 1 and over():
        drop(pre, 0)
    while len(suf) > 1 and over():
        drop(suf, -1)
    if over():
        raise BudgetTooSmall(f"budget of {budget.max_units} units cannot hold the marker and one line each side")
    return replace(task, crossfile_context="".join(ctx), prefix="".join(pre), suffix="".join(suf))


def _nl_user(task: CompletionTask) -> str:
    return (
        f"##Context Code##:\n{task.crossfile_context}\n"
        f"##Prefix Code##:\n{task.prefix}\n"
        f"##Suffix Code##:\n{task.suffix}"
    )


def _sri_system(limit: int) -> str:
    text = load_template(Style.SRI.value)
    if limit != DEFAULT_LIMIT:
        text = text.replace(f"{DEFAULT_LIMIT}-line window", f"{limit}-line window")
    return text


def build_prompt(
    task: CompletionTask,
    style: Style | str,
    marker: str = MARKER,
    budget: ContextBudget | None = None,
    *,
    limit: int = DEFAULT_LIMIT,
    sentinels: FimSentinels = FimSentinels(),
) -> PromptBundle:
    """Render ``task`` in one of the five prompt styles.

    Trimming (when ``budget`` is given) happens before rendering and does not
    depend on the style, so every style sees the same prefix, suffix and
    cross-file context.
    """
    style = Style.parse(style)
    check_limit(limit)
    if budget is not None:
        task = trim_context(task, budget, marker)

    if style is Style.SRI:
        marked = insert_marker(task, marker)
        user = f"{task.crossfile_context}\n\n{marked}" if task.crossfile_context else marked
        return PromptBundle(style, system=_sri_system(limit), user=user)
    if style in NL_STYLES:
        return PromptBundle(style, system=load_template(style.value), user=_nl_user(task))
    raw = load_template(Style.TOKEN_FIM.value).format(
        pre=sentinels.prefix,
        prefix=task.crossfile_context + task.prefix,
        suf=sentinels.suffix,
        suffix=task.suffix,
        mid=sentinels.middle,
    )
    return PromptBundle(style, raw=raw)


_FENCED = re.compile(r"```[^\n]*\n(.*?)```", re.DOTALL)


def extract_code_block(response: str) -> str:
    """First fenced code block of a chat response, or the whole stripped response."""
    m = _FENCED.search(response.replace("\r\n", "\n"))
    if m:
        return m.group(1)
    return response.strip()
