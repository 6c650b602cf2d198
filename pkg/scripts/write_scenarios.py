"""Regenerate the bundled scenario files from the in-package definitions.

Run from the repository root after touching scenarios.BUILTIN:

    python3 scripts/write_scenarios.py
"""

from pathlib import Path

from exalg import scenarios, serialize

out = Path(__file__).resolve().parent.parent / "scenarios"
out.mkdir(exist_ok=True)
for name, doc in scenarios.BUILTIN.items():
    path = out / f"{name}.json"
    path.write_text(serialize.canonical_json(doc))
    print(f"wrote {path}")
