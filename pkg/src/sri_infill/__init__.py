"""Search-and-replace infilling: build, prompt, parse, apply and score code completion edits."""

from .blocks import MARKER, NoReplaceSection, RegionReport, SriBlock, parse_sri_block, render_sri_block, validate_region
from .extraction import Branch, ExtractionResult, diff_trim, extract_replace_code
from .harness import EvalRecord, InferenceConfig, complete, run_eval
from .metrics import ScoreReport, aggregate, edit_similarity, exact_match, levenshtein, perplexity
from .patching import AmbiguousAnchor, AnchorNotFound, AnchorSpan, apply_sri, locate_anchor, to_unified_diff
from .perturbation import FlexTask, perturb_window
from .prompting import (
    CompletionTask,
    ContextBudget,
    FimSentinels,
    PromptBundle,
    Style,
    build_prompt,
    insert_marker,
    trim_context,
)
from .synthesis import (
    BlockSpan,
    Category,
    CorpusFile,
    Denylist,
    RatioSpec,
    SriSample,
    decontaminate,
    extract_blocks,
    make_sri_sample,
    sample_tasks,
)

__version__ = "0.1.0"
