"""Inject small, reversible noise around the marker to probe robustness.

Run: python3 demos/03_flex_perturbation.py
"""

from sri_infill import CompletionTask, perturb_window
from sri_infill.perturbation import with_sentinels

task = CompletionTask(
    prefix=(
        "public IEnumerable<string> ActiveNames()\n"
        "{\n"
        "    var names = new List<string>();\n"
        "    foreach (var profile in items)\n"
        "    {\n"
    ),
    middle="        if (profile.IsActive) names.Add(profile.Name);\n",
    suffix="    }\n    return names.OrderBy(n => n);\n}\n",
)

flex = perturb_window(task, count=2, window=5, seed=3)
for p in flex.perturbations:
    print(f"line {p.line_number} [{p.operator}]\n  - {p.original_line}\n  + {p.perturbed_line}")

print("\nperturbed lines are wrapped in @ ... @:\n")
print(with_sentinels(flex))

assert flex.revert() == flex.source
