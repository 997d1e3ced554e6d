"""Exact match, edit similarity, perplexity and score aggregation.

Edit similarity is ``100 * (1 - lev(pred, ref) / max(len(pred), len(ref), 1))``
over characters after mapping CRLF to LF and stripping surrounding
whitespace from both strings.
Common FIM benchmarks use this normalized-Levenshtein definition; it is
recorded in every report under ``assumptions``.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

ASSUMPTIONS = {
    "exact_match": "equality after CRLF->LF and stripping leading/trailing whitespace of the whole string",
    "edit_similarity": "character-level Levenshtein, 100*(1-d/max(len,1)), same normalization as exact_match",
    "parse_failures": "scored against the empty prediction, never excluded",
}


class EmptySequence(ValueError):
    pass


def _norm(text: str) -> str:
    return text.replace("\r\n", "\n").strip()


def exact_match(pred: str, ref: str) -> bool:
    return _norm(pred) == _norm(ref)


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance (bit-parallel, Myers 1999 / Hyyrö 2001)."""
    if len(a) < len(b):
        a, b = b, a
    m = len(b)
    if m == 0:
        return len(a)
    peq: dict[str, int] = defaultdict(int)
    for i, ch in enumerate(b):
        peq[ch] |= 1 << i
    mask = (1 << m) - 1
    high = 1 << (m - 1)
    pv, mv, score = mask, 0, m
    for ch in a:
        eq = peq.get(ch, 0)
        xv = eq | mv
        xh = (((eq & pv) + pv) ^ pv) | eq
        ph = mv | (~(xh | pv) & mask)
        mh = pv & xh
        if ph & high:
            score += 1
        elif mh & high:
            score -= 1
        ph = ((ph << 1) | 1) & mask
        mh = (mh << 1) & mask
        pv = mh | (~(xv | ph) & mask)
        mv = ph & xv
    return score


def edit_similarity(pred: str, ref: str) -> float:
    p, r = _norm(pred), _norm(ref)
    return 100.0 * (1.0 - levenshtein(p, r) / max(len(p), len(r), 1))


def perplexity(logprobs: Sequence[float]) -> float:
    """``exp(-mean(logprobs))`` for natural-log token probabilities."""
    if len(logprobs) == 0:
        raise EmptySequence("perplexity of an empty sequence is undefined")
    if any(lp > 0 for lp in logprobs):
        raise ValueError("log-probabilities must be <= 0")
    return math.exp(-math.fsum(logprobs) / len(logprobs))


@dataclass
class ScoreReport:
    n: int
    em_rate: float | None
    es_mean: float | None
    parse_failure_rate: float | None
    error_rate: float | None = None
    per_category: dict[str, dict] = field(default_factory=dict)
    per_benchmark: dict[str, dict] = field(default_factory=dict)
    assumptions: dict[str, str] = field(default_factory=lambda: dict(ASSUMPTIONS))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "em_rate": self.em_rate,
            "es_mean": self.es_mean,
            "parse_failure_rate": self.parse_failure_rate,
            "error_rate": self.error_rate,
            "per_category": self.per_category,
            "per_benchmark": self.per_benchmark,
            "assumptions": self.assumptions,
        }


def _summary(rows: list) -> dict:
    n = len(rows)
    if not n:
        return {"n": 0, "em_rate": None, "es_mean": None, "parse_failure_rate": None, "error_rate": None}
    return {
        "n": n,
        "em_rate": 100.0 * sum(bool(r.em) for r in rows) / n,
        "es_mean": math.fsum(r.es for r in rows) / n,
        "parse_failure_rate": 100.0 * sum(bool(r.parse_failed) for r in rows) / n,
        "error_rate": 100.0 * sum(r.error is not None for r in rows) / n,
    }


def aggregate(records: Iterable) -> ScoreReport:
    """Summarize evaluation records (anything with em/es/parse_failed/error/category/benchmark)."""
    rows = list(records)
    overall = _summary(rows)
    groups: dict[str, dict[str, list]] = {"category": defaultdict(list), "benchmark": defaultdict(list)}
    for r in rows:
        if getattr(r, "category", ""):
            groups["category"][r.category].append(r)
        if getattr(r, "benchmark", ""):
            groups["benchmark"][r.benchmark].append(r)
    return ScoreReport(
        n=overall["n"],
        em_rate=overall["em_rate"],
        es_mean=overall["es_mean"],
        parse_failure_rate=overall["parse_failure_rate"],
        error_rate=overall["error_rate"],
        per_category={k: _summary(v) for k, v in sorted(groups["category"].items())},
        per_benchmark={k: _summary(v) for k, v in sorted(groups["benchmark"].items())},
    )


def _fmt(x: float | None) -> str:
    return "-" if x is None else f"{x:.2f}"


def format_table(report: ScoreReport) -> str:
    """Plain-text table of a report."""
    head = f"{'group':<28}{'n':>7}{'EM':>9}{'ES':>9}{'parse-fail':>12}"
    out = [head, "-" * len(head)]

    def row(name: str, s: dict) -> str:
        return f"{name:<28}{s['n']:>7}{_fmt(s['em_rate']):>9}{_fmt(s['es_mean']):>9}{_fmt(s['parse_failure_rate']):>12}"

    out.append(row("all", report.to_dict()))
    for name, s in report.per_category.items():
        out.append(row(f"category:{name}", s))
    for name, s in report.per_benchmark.items():
        out.append(row(f"benchmark:{name}", s))
    return "\n".join(out)
