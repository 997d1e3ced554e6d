"""Controlled noise around the completion target (Flex-style tasks)."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field, replace
from typing import Iterable

from .blocks import MARKER
from .prompting import CompletionTask, insert_marker

OPERATORS = ("line_scramble", "token_transpose", "identifier_typo")
DEFAULT_WINDOW = 5
DEFAULT_COUNT = 2

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_ADJACENT = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(\s+)([A-Za-z_][A-Za-z0-9_]*)")
_COMMENT_ONLY = re.compile(r"^\s*(?://|#|/\*|\*|--|<!--|;)")


class NothingToPerturb(ValueError):
    pass


@dataclass(frozen=True)
class Perturbation:
    line_number: int  # 1-based, in the marked source
    operator: str
    original_line: str
    perturbed_line: str

    def to_dict(self) -> dict:
        return {
            "line_number": self.line_number,
            "operator": self.operator,
            "original_line": self.original_line,
            "perturbed_line": self.perturbed_line,
        }


@dataclass(frozen=True)
class FlexTask:
    base: CompletionTask
    source: str  # marked source before perturbation
    perturbed_source: str
    perturbations: tuple[Perturbation, ...]
    marker_line: int
    window: int = DEFAULT_WINDOW
    seed: int = 0
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def perturbed_task(self) -> CompletionTask:
        """The base task with its prefix and suffix carrying the same noise."""
        lines = self.perturbed_source.replace("\r\n", "\n").split("\n")
        at = self.marker_line - 1
        eol = "\r\n" if "\r\n" in self.perturbed_source else "\n"
        prefix = eol.join(lines[:at])
        if self.base.prefix.endswith("\n"):
            prefix += eol
        suffix = eol.join(lines[at + 1 :]) if self.base.suffix else ""
        return replace(self.base, prefix=prefix, suffix=suffix)

    def revert(self) -> str:
        lines = self.perturbed_source.split("\n")
        for p in reversed(self.perturbations):
            cr = "\r" if lines[p.line_number - 1].endswith("\r") else ""
            lines[p.line_number - 1] = p.original_line + cr
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "task_id": self.base.task_id,
            "base": self.base.to_dict(),
            "source": self.source,
            "perturbed_source": self.perturbed_source,
            "perturbations": [p.to_dict() for p in self.perturbations],
            "marker_line": self.marker_line,
            "window": self.window,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FlexTask":
        return cls(
            base=CompletionTask.from_dict(d["base"]),
            source=d["source"],
            perturbed_source=d["perturbed_source"],
            perturbations=tuple(Perturbation(**p) for p in d["perturbations"]),
            marker_line=d["marker_line"],
            window=d["window"],
            seed=d["seed"],
        )


def _split_indent(line: str) -> tuple[str, str]:
    body = line.lstrip(" \t")
    return line[: len(line) - len(body)], body


def scramble_line(line: str, rng: random.Random) -> str | None:
    """Shuffle the non-whitespace characters; whitespace positions stay put."""
    chars = [c for c in line if not c.isspace()]
    if len(set(chars)) < 2:
        return None
    for _ in range(20):
        shuffled = chars[:]
        rng.shuffle(shuffled)
        if shuffled != chars:
            break
    else:
        return None
    it = iter(shuffled)
    return "".join(c if c.isspace() else next(it) for c in line)


def transpose_tokens(line: str, rng: random.Random, pair_index: int | None = None) -> str | None:
    """Swap two adjacent identifiers separated only by whitespace."""
    pairs = []
    pos = 0
    while True:
        m = _ADJACENT.search(line, pos)
        if not m:
            break
        if m.group(1) != m.group(3) and (m.start() == 0 or not _is_word(line[m.start() - 1])):
            if m.end() == len(line) or not _is_word(line[m.end()]):
                pairs.append(m)
        pos = m.start(3)
    if not pairs:
        return None
    m = pairs[rng.randrange(len(pairs)) if pair_index is None else pair_index]
    return line[: m.start()] + m.group(3) + m.group(2) + m.group(1) + line[m.end() :]


def typo_identifier(line: str, rng: random.Random) -> str | None:
    """Substitute one character inside one identifier."""
    idents = [m for m in _IDENT.finditer(line) if len(m.group()) >= 2]
    if not idents:
        return None
    m = idents[rng.randrange(len(idents))]
    k = m.start() + rng.randrange(1, len(m.group()))
    old = line[k]
    if old.isdigit():
        pool = "0123456789"
    elif old.isupper():
        pool = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    else:
        pool = "abcdefghijklmnopqrstuvwxyz"
    choices = [c for c in pool if c != old]
    return line[:k] + rng.choice(choices) + line[k + 1 :]


def _is_word(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


_APPLY = {
    "line_scramble": scramble_line,
    "token_transpose": transpose_tokens,
    "identifier_typo": typo_identifier,
}


def perturb_window(
    task: CompletionTask,
    operators: Iterable[str] = OPERATORS,
    count: int = DEFAULT_COUNT,
    window: int = DEFAULT_WINDOW,
    seed: int = 0,
    marker: str = MARKER,
) -> FlexTask:
    """Corrupt up to ``count`` distinct lines within ``window`` lines of the marker.

    Blank and comment-only lines are never touched, nor is the marker line.
    When fewer eligible lines exist than ``count``, all of them are used.
    """
    ops = [op for op in OPERATORS if op in set(operators)]
    unknown = set(operators) - set(OPERATORS)
    if unknown or not ops:
        raise ValueError(f"operators must be a non-empty subset of {OPERATORS}, got {sorted(set(operators))}")
    if count < 1 or window < 1:
        raise ValueError("count and window must be positive")

    source = insert_marker(task, marker)
    lines = source.split("\n")
    prefix_lines = task.prefix.count("\n") + (1 if task.prefix and not task.prefix.endswith("\n") else 0)
    at = prefix_lines

    candidates = []
    for i in range(max(0, at - window), min(len(lines), at + window + 1)):
        content = lines[i].rstrip("\r")
        if i == at or not content.strip() or _COMMENT_ONLY.match(content):
            continue
        candidates.append(i)
    if not candidates:
        raise NothingToPerturb("the window around the marker holds no perturbable lines")

    rng = random.Random(seed)
    order = candidates[:]
    rng.shuffle(order)
    done: list[Perturbation] = []
    for i in order:
        if len(done) == count:
            break
        content = lines[i].rstrip("\r")
        cr = lines[i][len(content) :]
        for op in rng.sample(ops, len(ops)):
            new = _APPLY[op](content, rng)
            if new is not None and new != content:
                lines[i] = new + cr
                done.append(Perturbation(i + 1, op, content, new))
                break
    if not done:
        raise NothingToPerturb("no operator applies to the lines around the marker")

    done.sort(key=lambda p: p.line_number)
    return FlexTask(
        base=task,
        source=source,
        perturbed_source="\n".join(lines),
        perturbations=tuple(done),
        marker_line=at + 1,
        window=window,
        seed=seed,
    )


def with_sentinels(flex: FlexTask) -> str:
    """Human-readable view: perturbed lines wrapped in ``@ ... @``."""
    lines = flex.perturbed_source.split("\n")
    for p in flex.perturbations:
        indent, body = _split_indent(p.perturbed_line)
        lines[p.line_number - 1] = f"{indent}@ {body} @"
    return "\n".join(lines)
