"""Evaluate every prompt style end to end against an offline mock endpoint.

The mock answers with each sample's ground truth, so every style should
score 100.  Point InferenceConfig at a real OpenAI-compatible server
(for example a local vLLM) and drop ``transport`` to run for real.

Run: python3 demos/04_mock_evaluation.py
"""

from pathlib import Path

from sri_infill import InferenceConfig, Style, run_eval, sample_tasks
from sri_infill.metrics import format_table
from sri_infill.mock import constant_responder, ground_truth_responder, scripted_transport
from sri_infill.synthesis import load_corpus

corpus = load_corpus(Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "corpus")
samples = sample_tasks(corpus, count=40, seed=0)
cfg = InferenceConfig("http://mock.invalid/v1", "mock-model", max_concurrency=8)

echo = scripted_transport(ground_truth_responder(samples))
for style in Style:
    _, report = run_eval(samples, style, cfg, transport=echo)
    print(f"{style.value:<12} EM={report.em_rate:6.2f}  ES={report.es_mean:6.2f}")

# A model that never emits a block: every sample is a parse failure.
_, report = run_eval(samples, Style.SRI, cfg, transport=scripted_transport(constant_responder("No idea, sorry.")))
print()
print(format_table(report))
