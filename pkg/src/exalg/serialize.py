"""Canonical JSON for scenario files, reports, and corpus manifests.

Schema versions are plain strings checked on load.  Layouts:

exalg.scenario/1 -- one JSON object per file
    name        scenario id, unique per corpus, reused as the report name
    kind        "psrep" or "tower"
    seed        int, echoed into the report
    budget      int, cap handed to every enumeration the stages run
    stages      list of stage names (kind-specific vocabulary)
    psrep kind  ring {kind: field|zmod|poly, ...}, group {kind: cyclic|
                dihedral|sym3, n, dp, ip}, psrep {kind: char_pair|
                triangular|s3_standard, ...}, kappa char spec or null;
                char specs are {kind: trivial} or {kind: power, gen,
                value} with an integer value taken into the ring
    tower kind  dvr {p, e, trunc}, r, h {kind: plane|branch|axes|mod, ...}

exalg.report/1
    schema, scenario, seed, verdict ("ok" or "invariant-failure"),
    stages {stage name: payload}.  Wall-clock timing never enters the
    canonical payload, so identical runs serialize identically; the
    text renderer is the place that may decorate.

exalg.corpus/1 -- manifest written next to generated scenario files
    schema, seed, count, files [{name, sha256}], digest = sha256 over
    the per-file digests joined in name order.
"""

import hashlib
import json

import numpy as np

from .errors import InputError

SCENARIO_SCHEMA = "exalg.scenario/1"
REPORT_SCHEMA = "exalg.report/1"
CORPUS_SCHEMA = "exalg.corpus/1"

__all__ = [
    "CORPUS_SCHEMA",
    "REPORT_SCHEMA",
    "SCENARIO_SCHEMA",
    "canonical_json",
    "parse_scenario_text",
    "render_text",
    "sha256_text",
    "to_jsonable",
]


def to_jsonable(x):
    """Recursively strip numpy types so json.dumps sees plain python."""
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, float):
        raise InputError("reports are exact; floats have no canonical form")
    raise InputError(f"cannot serialize {type(x).__name__}")


def canonical_json(obj) -> str:
    """Deterministic rendering: sorted keys, fixed separators, one newline."""
    return json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":")) + "\n"


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def parse_scenario_text(text: str, where: str = "<scenario>") -> dict:
    """Parse and shape-check one scenario document.

    Raises InputError with the offending location or field name; deeper
    semantic validation happens when the scenario is resolved.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{where}: line {e.lineno} column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise InputError(f"{where}: scenario must be a JSON object")
    if doc.get("schema") != SCENARIO_SCHEMA:
        raise InputError(f"{where}: field 'schema' must be {SCENARIO_SCHEMA!r}")
    for field, kind in (("name", str), ("kind", str), ("seed", int), ("budget", int), ("stages", list)):
        if not isinstance(doc.get(field), kind):
            raise InputError(f"{where}: field {field!r} must be a {kind.__name__}")
    if doc["budget"] <= 0:
        raise InputError(f"{where}: field 'budget' must be positive")
    if doc["kind"] not in ("psrep", "tower"):
        raise InputError(f"{where}: field 'kind' must be 'psrep' or 'tower'")
    required = ("ring", "group", "psrep") if doc["kind"] == "psrep" else ("dvr", "r", "h")
    for field in required:
        if field not in doc:
            raise InputError(f"{where}: field {field!r} missing for kind {doc['kind']!r}")
    return doc


def render_text(report: dict) -> str:
    """Human rendering of a report dict; not canonical, not parsed back."""
    lines = [f"scenario {report['scenario']}  verdict {report['verdict']}  seed {report['seed']}"]
    for stage in report["stages"]:
        payload = report["stages"][stage]
        lines.append(f"  [{stage}]")
        for key in sorted(payload):
            val = payload[key]
            text = json.dumps(to_jsonable(val), sort_keys=True)
            if len(text) > 100:
                text = text[:97] + "..."
            lines.append(f"    {key}: {text}")
    return "\n".join(lines) + "\n"
