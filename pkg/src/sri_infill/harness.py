"""End-to-end evaluation against an OpenAI-compatible endpoint."""

from __future__ import annotations

import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import httpx

from .blocks import DEFAULT_LIMIT, MARKER, NoReplaceSection, parse_sri_block, validate_region
from .extraction import Branch, ExtractionResult, extract_replace_code
from .metrics import ScoreReport, aggregate, edit_similarity, exact_match
from .prompting import ContextBudget, FimSentinels, PromptBundle, Style, build_prompt, extract_code_block
from .synthesis import SriSample

log = logging.getLogger(__name__)

API_KEY_ENV = "OPENAI_API_KEY"


class HarnessError(Exception):
    pass


class TransportError(HarnessError):
    pass


class HttpStatusError(HarnessError):
    def __init__(self, code: int, body: str = ""):
        super().__init__(f"HTTP {code}: {body[:200]}")
        self.code = code


class MalformedResponse(HarnessError):
    pass


@dataclass(frozen=True)
class InferenceConfig:
    endpoint_url: str
    model_name: str
    temperature: float = 0.0
    max_output_tokens: int = 256
    presence_penalty: float = 0.0
    max_concurrency: int = 4
    retry_attempts: int = 3
    retry_backoff: float = 1.0
    timeout: float = 120.0
    api_key: str | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.max_output_tokens <= 0:
            raise ValueError("max_output_tokens must be positive")
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")
        if self.max_concurrency < 1 or self.retry_attempts < 1:
            raise ValueError("max_concurrency and retry_attempts must be at least 1")

    def headers(self) -> dict[str, str]:
        key = self.api_key or os.environ.get(API_KEY_ENV)
        return {"Authorization": f"Bearer {key}"} if key else {}


@dataclass
class Completion:
    text: str
    attempts: int


def complete(bundle: PromptBundle, cfg: InferenceConfig, client: httpx.Client | None = None) -> Completion:
    """Send one prompt and return the first choice's text.

    Chat styles go to ``/chat/completions``; token FIM goes to the raw
    ``/completions`` route.  Transport errors and 5xx responses are retried
    up to ``cfg.retry_attempts`` total tries with exponential backoff.
    """
    base = cfg.endpoint_url.rstrip("/")
    payload = {
        "model": cfg.model_name,
        "temperature": cfg.temperature,
        "max_tokens": cfg.max_output_tokens,
        "presence_penalty": cfg.presence_penalty,
    }
    if bundle.style is Style.TOKEN_FIM:
        url = f"{base}/completions"
        payload["prompt"] = bundle.raw
    else:
        url = f"{base}/chat/completions"
        payload["messages"] = bundle.messages()

    own = client is None
    client = client or httpx.Client(timeout=cfg.timeout)
    try:
        last: HarnessError | None = None
        for attempt in range(1, cfg.retry_attempts + 1):
            if attempt > 1 and cfg.retry_backoff > 0:
                time.sleep(cfg.retry_backoff * 2 ** (attempt - 2))
            try:
                resp = client.post(url, json=payload, headers=cfg.headers())
            except httpx.HTTPError as exc:
                last = TransportError(str(exc) or type(exc).__name__)
                last.attempts = attempt
                continue
            if resp.status_code >= 500:
                last = HttpStatusError(resp.status_code, resp.text)
                last.attempts = attempt
                continue
            if resp.status_code >= 400:
                err = HttpStatusError(resp.status_code, resp.text)
                err.attempts = attempt
                raise err
            return Completion(_first_choice(resp, bundle.style), attempt)
        raise last
    finally:
        if own:
            client.close()


def _first_choice(resp: httpx.Response, style: Style) -> str:
    try:
        choice = resp.json()["choices"][0]
        text = choice["text"] if style is Style.TOKEN_FIM else choice["message"]["content"]
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        raise MalformedResponse(f"unexpected response body: {resp.text[:200]!r}") from exc
    if not isinstance(text, str):
        raise MalformedResponse("response content is not a string")
    return text


@dataclass
class EvalRecord:
    task_id: str
    style: str
    raw_response: str
    branch: str | None
    prediction: str
    em: bool
    es: float
    parse_failed: bool
    latency_ms: int = 0
    attempts: int = 0
    error: str | None = None
    category: str = ""
    benchmark: str = ""
    region_ok: bool | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "EvalRecord":
        return cls(**d)


def predict(style: Style, response: str, marker: str = MARKER) -> tuple[str, ExtractionResult | None]:
    """Turn a raw model response into the predicted middle."""
    if style is Style.SRI:
        result = extract_replace_code(response, marker)
        return result.middle, result
    if style is Style.TOKEN_FIM:
        return response, None
    return extract_code_block(response), None


def score_response(
    sample: SriSample, style: Style, response: str, *, marker: str = MARKER, limit: int = DEFAULT_LIMIT, benchmark: str = ""
) -> EvalRecord:
    prediction, extraction = predict(style, response, marker)
    region_ok = None
    if style is Style.SRI:
        try:
            region_ok = validate_region(parse_sri_block(response), marker, limit).ok
        except NoReplaceSection:
            region_ok = False
    failed = extraction is not None and extraction.branch is Branch.NO_REPLACE
    if failed:
        prediction = ""
    ref = sample.task.middle
    return EvalRecord(
        task_id=sample.task.task_id,
        style=style.value,
        raw_response=response,
        branch=extraction.branch.value if extraction else None,
        prediction=prediction,
        em=exact_match(prediction, ref),
        es=edit_similarity(prediction, ref),
        parse_failed=failed,
        category=sample.category.value,
        benchmark=benchmark or sample.repo,
        region_ok=region_ok,
    )


def _failed_record(sample: SriSample, style: Style, error: Exception, benchmark: str) -> EvalRecord:
    ref = sample.task.middle
    return EvalRecord(
        task_id=sample.task.task_id,
        style=style.value,
        raw_response="",
        branch=None,
        prediction="",
        em=exact_match("", ref),
        es=edit_similarity("", ref),
        parse_failed=True,
        attempts=getattr(error, "attempts", 0),
        error=f"{type(error).__name__}: {error}",
        category=sample.category.value,
        benchmark=benchmark or sample.repo,
    )


def _evaluate_one(
    sample: SriSample,
    style: Style,
    cfg: InferenceConfig,
    client: httpx.Client,
    marker: str,
    limit: int,
    budget: ContextBudget | None,
    sentinels: FimSentinels,
    benchmark: str,
) -> EvalRecord:
    bundle = build_prompt(sample.task, style, marker, budget, limit=limit, sentinels=sentinels)
    t0 = time.perf_counter()
    try:
        done = complete(bundle, cfg, client)
    except HarnessError as exc:
        rec = _failed_record(sample, style, exc, benchmark)
    else:
        rec = score_response(sample, style, done.text, marker=marker, limit=limit, benchmark=benchmark)
        rec.attempts = done.attempts
    rec.latency_ms = int((time.perf_counter() - t0) * 1000)
    return rec


def load_records(path: str | os.PathLike) -> list[EvalRecord]:
    p = Path(path)
    if not p.exists():
        return []
    out = []
    with p.open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                out.append(EvalRecord.from_dict(json.loads(line)))
            except (ValueError, TypeError):
                log.warning("ignoring truncated record line in %s", p)
    return out


def run_eval(
    samples: Sequence[SriSample],
    style: Style | str,
    cfg: InferenceConfig,
    limit: int = DEFAULT_LIMIT,
    *,
    marker: str = MARKER,
    budget: ContextBudget | None = None,
    sentinels: FimSentinels = FimSentinels(),
    record_path: str | os.PathLike | None = None,
    transport: httpx.BaseTransport | None = None,
    benchmark: str = "",
) -> tuple[list[EvalRecord], ScoreReport]:
    """Evaluate ``samples`` in one prompt style.

    With ``record_path``, records are appended as they complete and tasks
    already present in the file are skipped, so an interrupted run resumes.
    When the run ends the file is rewritten sorted by task id.
    """
    style = Style.parse(style)
    ids = [s.task.task_id for s in samples]
    if len(set(ids)) != len(ids):
        raise ValueError("sample task ids must be unique")

    done: dict[str, EvalRecord] = {}
    if record_path is not None:
        wanted = set(ids)
        done = {r.task_id: r for r in load_records(record_path) if r.task_id in wanted}
    todo = [s for s in samples if s.task.task_id not in done]

    log_fh = open(record_path, "a", encoding="utf-8") if record_path is not None else None
    client = httpx.Client(timeout=cfg.timeout, transport=transport)
    try:
        with ThreadPoolExecutor(max_workers=cfg.max_concurrency) as pool:
            futures = [
                pool.submit(_evaluate_one, s, style, cfg, client, marker, limit, budget, sentinels, benchmark)
                for s in todo
            ]
            for fut in as_completed(futures):
                rec = fut.result()
                done[rec.task_id] = rec
                if log_fh is not None:
                    log_fh.write(json.dumps(rec.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")
                    log_fh.flush()
    finally:
        client.close()
        if log_fh is not None:
            log_fh.close()

    records = sorted(done.values(), key=lambda r: r.task_id)
    if record_path is not None:
        write_records(records, record_path)
    return records, aggregate(records)


def write_records(records: Sequence[EvalRecord], path: str | os.PathLike) -> None:
    tmp = Path(f"{path}.tmp")
    with tmp.open("w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")
    os.replace(tmp, path)


def write_report(report: ScoreReport, path: str | os.PathLike) -> None:
    Path(path).write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
