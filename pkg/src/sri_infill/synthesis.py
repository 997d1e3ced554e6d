"""Turn a code corpus into search/replace infilling samples."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import random
import re
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .blocks import DEFAULT_LIMIT, MARKER, SriBlock, check_limit, render_sri_block, validate_region
from .extraction import extract_replace_code
from .prompting import CompletionTask, insert_marker
from .syntax import KNOWN_LANGUAGES, EXTENSIONS, HeuristicProvider, SyntaxProvider, language_for_path

log = logging.getLogger(__name__)


class Category(str, Enum):
    FUNCTION_BODY = "function_body"
    LOGIC_BLOCK = "logic_block"
    RANDOM_SPAN = "random_span"
    SINGLE_LINE = "single_line"


CATEGORIES = tuple(Category)


class UnsupportedLanguage(ValueError):
    pass


class InsufficientCorpus(ValueError):
    pass


class WindowOverflow(ValueError):
    pass


class SampleRejected(ValueError):
    """The ground-truth block would not survive middle extraction."""


@dataclass(frozen=True)
class BlockSpan:
    category: Category
    start_line: int
    end_line: int
    source_path: str = ""

    def __post_init__(self):
        if self.start_line > self.end_line:
            raise ValueError("start_line must not exceed end_line")


@dataclass(frozen=True)
class RatioSpec:
    function_body: int = 2
    logic_block: int = 1
    random_span: int = 1
    single_line: int = 1

    def __post_init__(self):
        ws = self.weights()
        if any(w < 0 for w in ws) or not any(ws):
            raise ValueError("ratio weights must be non-negative with at least one positive")

    def weights(self) -> tuple[int, int, int, int]:
        return (self.function_body, self.logic_block, self.random_span, self.single_line)

    @classmethod
    def parse(cls, text: str) -> "RatioSpec":
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError(f"ratio must look like a:b:c:d, got {text!r}")
        return cls(*(int(p) for p in parts))

    def quotas(self, count: int) -> dict[Category, int]:
        """Largest-remainder apportionment of ``count`` over the categories."""
        ws = self.weights()
        total = sum(ws)
        exact = [count * w / total for w in ws]
        base = [int(x) for x in exact]
        left = count - sum(base)
        order = sorted(range(4), key=lambda k: (-(exact[k] - base[k]), k))
        for k in order[:left]:
            base[k] += 1
        return dict(zip(CATEGORIES, base))


@dataclass(frozen=True)
class CorpusFile:
    path: str
    content: str
    repo: str = ""
    stars: int = 0
    language: str = ""

    @property
    def lang(self) -> str:
        return self.language or language_for_path(self.path)


@dataclass(frozen=True)
class SriSample:
    task: CompletionTask
    marked_source: str
    ground_truth: SriBlock
    category: Category
    repo: str = ""
    stars: int = 0
    span: BlockSpan | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        d = {
            "task_id": self.task.task_id,
            "category": self.category.value,
            "repo": self.repo,
            "stars": self.stars,
            "task": self.task.to_dict(),
            "marked_source": self.marked_source,
            "ground_truth": {
                "search": self.ground_truth.search,
                "replace": self.ground_truth.replace,
                "fenced": self.ground_truth.fenced,
                "line_ending": self.ground_truth.line_ending,
            },
        }
        if self.span is not None:
            d["span"] = [self.span.start_line, self.span.end_line]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SriSample":
        task = CompletionTask.from_dict(d["task"])
        category = Category(d["category"])
        span = None
        if d.get("span"):
            span = BlockSpan(category, d["span"][0], d["span"][1], task.path)
        return cls(
            task=task,
            marked_source=d["marked_source"],
            ground_truth=SriBlock(**d["ground_truth"]),
            category=category,
            repo=d.get("repo", ""),
            stars=d.get("stars", 0),
            span=span,
        )


# -- block extraction ---------------------------------------------------------


def _file_seed(seed: int, path: str) -> int:
    digest = hashlib.sha256(f"{seed}:{path}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def extract_blocks(
    source: str,
    language_hint: str = "",
    *,
    limit: int = DEFAULT_LIMIT,
    seed: int = 0,
    path: str = "",
    provider: SyntaxProvider | None = None,
    strict: bool = False,
) -> list[BlockSpan]:
    """Candidate middle spans of every category found in ``source``.

    Random spans are drawn with a per-file RNG derived from ``seed`` and
    ``path``, so extraction can run in parallel without changing results.
    With ``strict=True`` an unknown language without detectable structure
    raises ``UnsupportedLanguage`` instead of yielding only random and
    single-line spans.
    """
    check_limit(limit)
    if not source:
        return []
    provider = provider or HeuristicProvider()
    lines = source.replace("\r\n", "\n").split("\n")
    if lines[-1] == "":
        lines.pop()
    n = len(lines)
    nonblank = [i + 1 for i, line in enumerate(lines) if line.strip()]
    if not nonblank:
        return []

    structural = provider.blocks(source, language_hint)
    if not structural and language_hint not in KNOWN_LANGUAGES and strict:
        raise UnsupportedLanguage(f"no structure found for language {language_hint!r}")

    spans: set[BlockSpan] = set()
    for b in structural:
        if 1 <= b.start_line <= b.end_line <= n and not (b.start_line == 1 and b.end_line == n):
            spans.add(BlockSpan(Category(b.kind), b.start_line, b.end_line, path))

    for ln in nonblank:
        if n > 1:
            spans.add(BlockSpan(Category.SINGLE_LINE, ln, ln, path))

    rng = random.Random(_file_seed(seed, path or source[:64]))
    for _ in range(max(1, len(nonblank) // 3)):
        length = rng.randint(1, limit)
        if length >= n:
            length = n - 1
        if length < 1:
            break
        start = rng.randint(1, n - length + 1)
        end = start + length - 1
        if any(lines[k - 1].strip() for k in range(start, end + 1)):
            spans.add(BlockSpan(Category.RANDOM_SPAN, start, end, path))

    return sorted(spans, key=lambda s: (s.start_line, s.end_line, s.category.value))


# -- sample construction ------------------------------------------------------


def task_from_span(source: str, span: BlockSpan, **kwargs) -> CompletionTask:
    """Cut the lines of ``span`` out of ``source`` as the middle."""
    parts = source.split("\n")
    lines = [p + "\n" for p in parts[:-1]] + ([parts[-1]] if parts[-1] else [])
    start = sum(len(x) for x in lines[: span.start_line - 1])
    end = start + sum(len(x) for x in lines[span.start_line - 1 : span.end_line])
    return CompletionTask.from_source(source, start, end, **kwargs)


def same_middle(recovered: str, middle: str) -> bool:
    """Equality used to check ground truths: surrounding whitespace is ignored."""
    return recovered.strip() == middle.replace("\r\n", "\n").strip()


def make_sri_sample(
    task: CompletionTask,
    limit: int = DEFAULT_LIMIT,
    marker: str = MARKER,
    *,
    category: Category | str = Category.RANDOM_SPAN,
    max_middle_lines: int | None = None,
    repo: str = "",
    stars: int = 0,
    span: BlockSpan | None = None,
) -> SriSample:
    """Build the marked source and ground-truth block for a line-aligned task.

    The SEARCH text is up to ``limit`` lines above the marker, the marker line
    and up to ``limit`` lines below; REPLACE is the same window with the
    marker line swapped for the middle.
    """
    check_limit(limit)
    category = Category(category)
    if not task.middle.strip():
        raise ValueError("middle must contain non-blank code")
    if task.prefix and not task.prefix.endswith("\n"):
        raise ValueError("task must be line-aligned: prefix has to end with a newline")
    if task.suffix and not task.middle.endswith("\n"):
        raise ValueError("task must be line-aligned: middle has to end with a newline")

    middle = task.middle.replace("\r\n", "\n")
    if middle.endswith("\n"):
        middle = middle[:-1]
    middle_lines = middle.split("\n")
    cap = 2 * limit if max_middle_lines is None else max_middle_lines
    if len(middle_lines) > cap:
        raise WindowOverflow(f"middle has {len(middle_lines)} lines, more than {cap}")

    marked = insert_marker(task, marker)
    eol = "\r\n" if "\r\n" in marked else "\n"
    lines = marked.replace("\r\n", "\n").split("\n")
    if lines[-1] == "" and len(lines) > 1:
        lines.pop()
    at = task.prefix.count("\n")
    above = lines[max(0, at - limit) : at]
    below = lines[at + 1 : at + 1 + limit]
    block = SriBlock(
        search="\n".join(above + [lines[at]] + below),
        replace="\n".join(above + middle_lines + below),
        fenced=True,
        line_ending=eol,
    )

    report = validate_region(block, marker, limit)
    if not report.ok:
        raise SampleRejected(f"ground truth fails region validation: {report}")
    recovered = extract_replace_code(render_sri_block(block), marker).middle
    if not same_middle(recovered, task.middle):
        raise SampleRejected("middle is not recoverable from the ground-truth block")
    return SriSample(task, marked, block, category, repo=repo, stars=stars, span=span)


# -- corpus sampling ----------------------------------------------------------


def _file_candidates(args) -> dict[str, list[tuple[int, int]]]:
    content, lang, limit, seed, path = args
    out: dict[str, list[tuple[int, int]]] = {c.value: [] for c in CATEGORIES}
    for s in extract_blocks(content, lang, limit=limit, seed=seed, path=path):
        if s.end_line - s.start_line + 1 <= 2 * limit:
            out[s.category.value].append((s.start_line, s.end_line))
    return out


def sample_tasks(
    corpus: Sequence[CorpusFile],
    ratio: RatioSpec = RatioSpec(),
    count: int = 1,
    seed: int = 0,
    *,
    limit: int = DEFAULT_LIMIT,
    marker: str = MARKER,
    jobs: int = 1,
) -> list[SriSample]:
    """Draw ``count`` samples with category quotas from ``ratio``.

    Files are picked with probability proportional to ``stars + 1``; spans
    are drawn uniformly from a file's candidates, with replacement.  The
    result is sorted by (repo, path, span, category) and task ids are
    assigned in that order, so it depends only on the arguments.
    """
    if not corpus:
        raise InsufficientCorpus("corpus is empty")
    if count < 1:
        raise ValueError("count must be at least 1")
    check_limit(limit)

    files = sorted(corpus, key=lambda f: (f.repo, f.path))
    jobs_args = [(f.content, f.lang, limit, seed, f.path) for f in files]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            candidates = list(pool.map(_file_candidates, jobs_args, chunksize=8))
    else:
        candidates = [_file_candidates(a) for a in jobs_args]

    rng = random.Random(seed)
    built: dict[tuple[int, str, int, int], SriSample | None] = {}
    samples: list[SriSample] = []
    for category, quota in ratio.quotas(count).items():
        pool = [i for i, c in enumerate(candidates) if c[category.value]]
        spans = {i: list(candidates[i][category.value]) for i in pool}
        got = 0
        while got < quota:
            pool = [i for i in pool if spans[i]]
            if not pool:
                raise InsufficientCorpus(f"not enough usable {category.value} spans for {quota} samples")
            weights = [files[i].stars + 1 for i in pool]
            fi = rng.choices(pool, weights=weights)[0]
            start, end = spans[fi][rng.randrange(len(spans[fi]))]
            key = (fi, category.value, start, end)
            if key not in built:
                built[key] = _try_sample(files[fi], category, start, end, limit, marker)
            sample = built[key]
            if sample is None:
                spans[fi].remove((start, end))
                continue
            samples.append(sample)
            got += 1

    samples.sort(key=lambda s: (s.repo, s.task.path, s.span.start_line, s.span.end_line, s.category.value))
    return [_with_id(s, f"sri-{i:06d}") for i, s in enumerate(samples)]


def _try_sample(f: CorpusFile, category: Category, start: int, end: int, limit: int, marker: str) -> SriSample | None:
    span = BlockSpan(category, start, end, f.path)
    task = task_from_span(f.content, span, path=f.path, language=f.lang)
    try:
        return make_sri_sample(task, limit, marker, category=category, repo=f.repo, stars=f.stars, span=span)
    except ValueError as exc:
        log.debug("skipping %s:%d-%d (%s): %s", f.path, start, end, category.value, exc)
        return None


def _with_id(sample: SriSample, task_id: str) -> SriSample:
    return replace(sample, task=replace(sample.task, task_id=task_id))


def category_shares(samples: Iterable[SriSample]) -> dict[str, float]:
    counts = Counter(s.category.value for s in samples)
    n = sum(counts.values())
    return {c.value: (100.0 * counts[c.value] / n if n else 0.0) for c in CATEGORIES}


# -- decontamination ----------------------------------------------------------

_TOKEN = re.compile(r"\w+|[^\w\s]")


def fingerprints(text: str, n: int = 7) -> set[str]:
    """Hashes of whitespace-insensitive token n-grams of ``text``."""
    tokens = _TOKEN.findall(text)
    if not tokens:
        return set()
    if len(tokens) < n:
        grams = [tokens]
    else:
        grams = [tokens[i : i + n] for i in range(len(tokens) - n + 1)]
    return {hashlib.sha1(" ".join(g).encode()).hexdigest()[:16] for g in grams}


@dataclass
class Denylist:
    repos: set[str] = field(default_factory=set)
    fingerprints: set[str] = field(default_factory=set)

    def add_snippet(self, text: str) -> None:
        self.fingerprints |= fingerprints(text)

    @classmethod
    def load(cls, path: str | os.PathLike) -> "Denylist":
        """JSON file with optional ``repos``, ``fingerprints`` and ``snippets`` lists."""
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        dl = cls(set(data.get("repos", [])), set(data.get("fingerprints", [])))
        for snippet in data.get("snippets", []):
            dl.add_snippet(snippet)
        return dl


def decontaminate(samples: Iterable[SriSample], denylist: Denylist) -> tuple[list[SriSample], dict[str, int]]:
    """Drop samples from denied repos or whose middle shares an n-gram with denied code."""
    repos = {r.strip().lower() for r in denylist.repos}
    kept = []
    report = {"repo": 0, "fingerprint": 0, "kept": 0}
    for s in samples:
        if s.repo.strip().lower() in repos:
            report["repo"] += 1
        elif denylist.fingerprints and fingerprints(s.task.middle) & denylist.fingerprints:
            report["fingerprint"] += 1
        else:
            kept.append(s)
    report["kept"] = len(kept)
    return kept, report


# -- corpus I/O ---------------------------------------------------------------


def load_corpus(path: str | os.PathLike) -> list[CorpusFile]:
    """Read a corpus from a directory tree or a JSON-lines file.

    Records carry ``path``, ``content``, ``repo`` and ``stars``.  In a
    directory, the first path component names the repository.
    """
    root = Path(path)
    if root.is_file():
        out = []
        with root.open(encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    d = json.loads(line)
                    out.append(
                        CorpusFile(d["path"], d["content"], d.get("repo", ""), int(d.get("stars", 0)), d.get("language", ""))
                    )
        return out
    out = []
    for p in sorted(root.rglob("*")):
        if not p.is_file() or p.suffix.lower() not in EXTENSIONS:
            continue
        rel = p.relative_to(root)
        repo = rel.parts[0] if len(rel.parts) > 1 else root.name
        with p.open(encoding="utf-8", newline="") as fh:
            out.append(CorpusFile(rel.as_posix(), fh.read(), repo))
    return out


def write_jsonl(records: Iterable[dict], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n")


def read_jsonl(path: str | os.PathLike) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]
