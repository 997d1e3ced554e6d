"""Turn a small polyglot corpus into SRI training samples.

Run: python3 demos/02_synthesize_dataset.py
"""

from pathlib import Path

from sri_infill import RatioSpec, apply_sri, sample_tasks
from sri_infill.blocks import render_sri_block
from sri_infill.synthesis import Denylist, category_shares, decontaminate, load_corpus

corpus = load_corpus(Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "corpus")
print(f"{len(corpus)} files from {len({f.repo for f in corpus})} repositories")

samples = sample_tasks(corpus, RatioSpec(), count=500, seed=42)
for name, share in category_shares(samples).items():
    print(f"  {name:<14} {share:5.1f}%")

# Drop anything from a repository that also appears in an evaluation set.
samples, report = decontaminate(samples, Denylist(repos={"jskit"}))
print(f"decontamination: {report}")

s = samples[0]
print(f"\n{s.task.task_id} ({s.category.value}) from {s.task.path}, lines {s.span.start_line}-{s.span.end_line}")
print(render_sri_block(s.ground_truth))

# Every emitted sample restores its source exactly.
assert all(apply_sri(x.marked_source, x.ground_truth) == x.task.source for x in samples)
print(f"\nall {len(samples)} samples round-trip")
