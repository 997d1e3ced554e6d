"""Scripted OpenAI-compatible endpoints for offline runs and tests."""

from __future__ import annotations

import json
import threading
from typing import Callable, Sequence

import httpx

from .blocks import render_sri_block
from .synthesis import SriSample

Responder = Callable[[dict], str]


def _reply(payload: dict, text: str) -> httpx.Response:
    if "prompt" in payload:
        body = {"object": "text_completion", "choices": [{"index": 0, "text": text, "finish_reason": "stop"}]}
    else:
        body = {
            "object": "chat.completion",
            "model": payload.get("model", ""),
            "choices": [{"index": 0, "message": {"role": "assistant", "content": text}, "finish_reason": "stop"}],
        }
    return httpx.Response(200, json=body)


def scripted_transport(responder: Responder) -> httpx.MockTransport:
    """Transport answering every request with ``responder(request_json)``."""

    def handle(request: httpx.Request) -> httpx.Response:
        payload = json.loads(request.content)
        return _reply(payload, responder(payload))

    return httpx.MockTransport(handle)


def prompt_text(payload: dict) -> str:
    if "prompt" in payload:
        return payload["prompt"]
    return "\n".join(m["content"] for m in payload["messages"] if m["role"] == "user")


def ground_truth_responder(samples: Sequence[SriSample]) -> Responder:
    """Answer each prompt with the matching sample's ground truth.

    SRI prompts get the rendered ground-truth block; other styles get the
    middle in a fenced code block (chat) or verbatim (raw completion).
    """
    by_marked = {s.marked_source: s for s in samples}
    by_suffix = {(s.task.prefix, s.task.suffix): s for s in samples}

    def find(payload: dict) -> SriSample:
        text = prompt_text(payload)
        for marked, s in by_marked.items():
            if text.endswith(marked):
                return s
        for (prefix, suffix), s in by_suffix.items():
            if prefix in text and suffix in text:
                return s
        raise LookupError("no sample matches the prompt")

    def respond(payload: dict) -> str:
        s = find(payload)
        if "prompt" in payload:
            return s.task.middle
        system = payload["messages"][0]["content"]
        if "search/replace" in system:
            return "Here is the edit:\n" + render_sri_block(s.ground_truth, fence=True)
        return f"```\n{s.task.middle}```"

    return respond


def constant_responder(text: str) -> Responder:
    return lambda payload: text


def flaky_transport(statuses: Sequence[int], then: Responder) -> tuple[httpx.MockTransport, list[int]]:
    """Fail with ``statuses`` in order, then defer to ``then``; also returns the call log."""
    calls: list[int] = []
    lock = threading.Lock()

    def handle(request: httpx.Request) -> httpx.Response:
        payload = json.loads(request.content)
        with lock:
            k = len(calls)
            status = statuses[k] if k < len(statuses) else 200
            calls.append(status)
        if status != 200:
            return httpx.Response(status, text="upstream failure")
        return _reply(payload, then(payload))

    return httpx.MockTransport(handle), calls
