"""Command-line entry point.

Machine-readable output is JSON lines; human tables go to stderr or
behind ``--pretty``.  Exit codes: 0 success, 1 some items failed,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import __version__
from .blocks import DEFAULT_LIMIT, MARKER, NoReplaceSection, parse_sri_block
from .extraction import Branch, extract_replace_code
from .harness import InferenceConfig, load_records, run_eval, write_report
from .metrics import aggregate, format_table
from .patching import PatchError, apply_sri, to_unified_diff
from .perturbation import DEFAULT_COUNT, DEFAULT_WINDOW, OPERATORS, NothingToPerturb, perturb_window, with_sentinels
from .prompting import BudgetTooSmall, CompletionTask, ContextBudget, Style, build_prompt
from .synthesis import (
    Denylist,
    InsufficientCorpus,
    RatioSpec,
    SriSample,
    category_shares,
    decontaminate,
    load_corpus,
    read_jsonl,
    sample_tasks,
    write_jsonl,
)

log = logging.getLogger("sri_infill")

STYLE_CHOICES = ["sri", "nl-standard", "nl-dialogue", "nl-template", "token-fim"]


class ConfigError(Exception):
    pass


def _limit(text: str) -> int:
    value = int(text)
    if not 1 <= value <= 1000:
        raise argparse.ArgumentTypeError("limit must be in 1..1000")
    return value


def _ratio(text: str) -> RatioSpec:
    try:
        return RatioSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _output(path: str | None):
    return open(path, "w", encoding="utf-8") if path and path != "-" else sys.stdout


def _read_text(path: str | None) -> str:
    if not path or path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8", newline="") as fh:
        return fh.read()


def _load_tasks(path: str) -> list[CompletionTask]:
    out = []
    for d in read_jsonl(path):
        out.append(SriSample.from_dict(d).task if "task" in d else CompletionTask.from_dict(d))
    return out


def cmd_synth(args) -> int:
    corpus = load_corpus(args.input)
    if not corpus:
        raise ConfigError(f"no source files found in {args.input}")
    samples = sample_tasks(corpus, args.ratio, args.count, args.seed, limit=args.limit, jobs=args.jobs)
    if args.denylist:
        samples, report = decontaminate(samples, Denylist.load(args.denylist))
        print(f"decontamination: {json.dumps(report, sort_keys=True)}", file=sys.stderr)
    if args.output and args.output != "-":
        write_jsonl((s.to_dict() for s in samples), args.output)
    else:
        for s in samples:
            sys.stdout.write(json.dumps(s.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")
    if args.pretty:
        shares = category_shares(samples)
        for name, share in shares.items():
            print(f"{name:<15}{share:6.2f}%", file=sys.stderr)
    return 0


def cmd_perturb(args) -> int:
    tasks = _load_tasks(args.input)
    operators = args.operators.split(",") if args.operators else list(OPERATORS)
    failures = 0
    out = _output(args.output)
    try:
        for i, task in enumerate(tasks):
            try:
                flex = perturb_window(task, operators, args.count, args.window, args.seed + i)
            except NothingToPerturb as exc:
                failures += 1
                print(f"{task.task_id or i}: {exc}", file=sys.stderr)
                continue
            if args.pretty:
                out.write(with_sentinels(flex) + "\n\n")
            else:
                out.write(json.dumps(flex.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 1 if failures else 0


def cmd_prompt(args) -> int:
    tasks = _load_tasks(args.input)
    budget = ContextBudget(args.max_units) if args.max_units else None
    failures = 0
    out = _output(args.output)
    try:
        for task in tasks:
            try:
                bundle = build_prompt(task, Style.parse(args.style), budget=budget, limit=args.limit)
            except BudgetTooSmall as exc:
                failures += 1
                print(f"{task.task_id}: {exc}", file=sys.stderr)
                continue
            rec = {"task_id": task.task_id, **bundle.to_dict()}
            out.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 1 if failures else 0


def cmd_extract(args) -> int:
    result = extract_replace_code(_read_text(args.input), args.marker)
    if args.pretty:
        print(f"branch: {result.branch.value}", file=sys.stderr)
    sys.stdout.write(result.middle)
    if result.middle and not result.middle.endswith("\n"):
        sys.stdout.write("\n")
    return 1 if result.branch is Branch.NO_REPLACE else 0


def _block_and_file(args):
    block = parse_sri_block(_read_text(args.block))
    with open(args.file, encoding="utf-8", newline="") as fh:
        source = fh.read()
    return block, source


def cmd_apply(args) -> int:
    block, source = _block_and_file(args)
    if args.dry_run:
        sys.stdout.write(to_unified_diff(source, block, args.marker, args.path or args.file, args.context, nearest_to=args.nearest))
        return 0
    patched = apply_sri(source, block, args.marker, nearest_to=args.nearest)
    with open(args.file, "w", encoding="utf-8", newline="") as fh:
        fh.write(patched)
    return 0


def cmd_diff(args) -> int:
    block, source = _block_and_file(args)
    sys.stdout.write(to_unified_diff(source, block, args.marker, args.path or args.file, args.context, nearest_to=args.nearest))
    return 0


def cmd_eval(args) -> int:
    samples = [SriSample.from_dict(d) for d in read_jsonl(args.input)]
    endpoint = args.endpoint or os.environ.get("OPENAI_BASE_URL")
    if not endpoint:
        raise ConfigError("--endpoint (or OPENAI_BASE_URL) is required")
    cfg = InferenceConfig(
        endpoint_url=endpoint,
        model_name=args.model,
        max_output_tokens=args.max_tokens,
        max_concurrency=args.jobs,
        retry_attempts=args.retries,
    )
    budget = ContextBudget(args.max_units) if args.max_units else None
    records, report = run_eval(
        samples, Style.parse(args.style), cfg, args.limit, budget=budget, record_path=args.output, benchmark=args.benchmark
    )
    if args.report:
        write_report(report, args.report)
    else:
        print(json.dumps(report.to_dict(), sort_keys=True))
    print(format_table(report), file=sys.stderr)
    return 1 if any(r.error for r in records) else 0


def cmd_score(args) -> int:
    records = load_records(args.input)
    report = aggregate(records)
    print(json.dumps(report.to_dict(), sort_keys=True))
    if args.pretty:
        print(format_table(report), file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sri-infill", description="Search-and-replace infilling toolkit")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="synthesize SRI samples from a corpus")
    s.add_argument("--input", required=True, help="corpus directory or JSON-lines file")
    s.add_argument("--output", help="output JSON-lines file (default stdout)")
    s.add_argument("--count", type=_positive, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--limit", type=_limit, default=DEFAULT_LIMIT)
    s.add_argument("--ratio", type=_ratio, default=RatioSpec())
    s.add_argument("--jobs", type=_positive, default=1)
    s.add_argument("--denylist", help="JSON file with repos/fingerprints/snippets to exclude")
    s.add_argument("--pretty", action="store_true", help="print category shares to stderr")
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("perturb", help="inject noise around the marker")
    s.add_argument("--input", required=True, help="JSON-lines of samples or tasks")
    s.add_argument("--output")
    s.add_argument("--window", type=_positive, default=DEFAULT_WINDOW)
    s.add_argument("--count", type=_positive, default=DEFAULT_COUNT)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--operators", help=f"comma-separated subset of {','.join(OPERATORS)}")
    s.add_argument("--pretty", action="store_true", help="emit '@ ... @' views instead of records")
    s.set_defaults(func=cmd_perturb)

    s = sub.add_parser("prompt", help="render prompts for tasks")
    s.add_argument("--input", required=True)
    s.add_argument("--output")
    s.add_argument("--style", choices=STYLE_CHOICES, default="sri")
    s.add_argument("--limit", type=_limit, default=DEFAULT_LIMIT)
    s.add_argument("--max-units", type=_positive, help="context budget in approximate tokens")
    s.set_defaults(func=cmd_prompt)

    s = sub.add_parser("extract", help="read a model response on stdin, print the middle")
    s.add_argument("--input", help="read from a file instead of stdin")
    s.add_argument("--marker", default=MARKER)
    s.add_argument("--pretty", action="store_true", help="report the branch on stderr")
    s.set_defaults(func=cmd_extract)

    for name, func, text in (
        ("apply", cmd_apply, "apply a search/replace block to a file in place"),
        ("diff", cmd_diff, "print the unified diff a block would produce"),
    ):
        s = sub.add_parser(name, help=text)
        s.add_argument("file")
        s.add_argument("--block", help="file holding the block (default stdin)")
        s.add_argument("--marker", default=MARKER)
        s.add_argument("--path", help="path to show in diff headers")
        s.add_argument("--context", type=int, default=3)
        s.add_argument("--nearest", type=_positive, help="resolve ambiguous anchors to the match nearest this line")
        if name == "apply":
            s.add_argument("--dry-run", action="store_true", help="print the diff, leave the file untouched")
        s.set_defaults(func=func)

    s = sub.add_parser("eval", help="evaluate samples against an OpenAI-compatible endpoint")
    s.add_argument("--input", required=True)
    s.add_argument("--output", help="record log (JSON lines); existing records are resumed")
    s.add_argument("--report", help="write the score report JSON here")
    s.add_argument("--style", choices=STYLE_CHOICES, default="sri")
    s.add_argument("--endpoint", help="base URL, e.g. http://localhost:8000/v1")
    s.add_argument("--model", required=True)
    s.add_argument("--max-tokens", type=_positive, default=256)
    s.add_argument("--max-units", type=_positive, help="context budget in approximate tokens")
    s.add_argument("--limit", type=_limit, default=DEFAULT_LIMIT)
    s.add_argument("--jobs", type=_positive, default=4)
    s.add_argument("--retries", type=_positive, default=3)
    s.add_argument("--benchmark", default="")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("score", help="aggregate an evaluation record log")
    s.add_argument("--input", required=True)
    s.add_argument("--pretty", action="store_true")
    s.set_defaults(func=cmd_score)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (NoReplaceSection, PatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, InsufficientCorpus, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
