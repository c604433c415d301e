"""CSV and JSON output for trial records.

CSV layout::

    # activepu-trials schema_version=1
    # config-dir: <directory the config was loaded from>
    # config: <verbatim config line>      (one per line of the source file)
    trial,seed,algorithm,...               (header row)
    0,0,known_pi,...                       (one row per trial)

Floats are written with ``repr`` so they read back bit-exactly; missing
values are empty cells and violation flags are joined with ``;``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict
from pathlib import Path

from .config import ExperimentConfig, parse_config
from .runner import TrialRecord

SCHEMA_VERSION = 1
COLUMNS = (
    "trial", "seed", "algorithm", "outcome", "label_requests", "positive_responses",
    "unlabeled_draws", "final_error", "error_mode", "wall_ms", "if_branches", "else_branches",
    "estrate_value", "violations",
)
_MAGIC = "# activepu-trials schema_version="


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ";".join(value)
    return str(value)


def csv_header(cfg: ExperimentConfig | None) -> str:
    lines = [f"{_MAGIC}{SCHEMA_VERSION}"]
    if cfg is not None:
        lines.append(f"# config-dir: {cfg.base_dir}")
        lines.extend(f"# config: {line}" for line in cfg.source_text.splitlines())
    return "\n".join(lines) + "\n"


def csv_body(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in records:
        w.writerow([_cell(getattr(r, col)) for col in COLUMNS])
    return buf.getvalue()


def to_csv(records, cfg: ExperimentConfig | None = None) -> str:
    return csv_header(cfg) + csv_body(records)


def to_json(records, summary: dict, cfg: ExperimentConfig | None = None) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "config": None if cfg is None else {"text": cfg.source_text, "values": cfg.as_dict()},
        "records": [asdict(r) for r in records],
        "summary": summary,
    }
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def emit(records, summary: dict, fmt: str, path, cfg: ExperimentConfig | None = None) -> None:
    """Write ``records`` as ``csv`` or ``json``; ``path = "-"`` writes to stdout."""
    if fmt == "csv":
        text = to_csv(records, cfg)
    elif fmt == "json":
        text = to_json(records, summary, cfg)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if str(path) == "-":
        import sys

        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# --- reading back -------------------------------------------------------------

_INT = ("trial", "seed", "label_requests", "positive_responses", "unlabeled_draws",
        "if_branches", "else_branches")
_FLOAT = ("final_error", "wall_ms", "estrate_value")


def _parse_row(row: dict) -> TrialRecord:
    vals: dict = {}
    for k in COLUMNS:
        raw = row[k]
        if k in _INT:
            vals[k] = int(raw) if raw != "" else None
        elif k in _FLOAT:
            vals[k] = float(raw) if raw != "" else None
        elif k == "violations":
            vals[k] = raw.split(";") if raw else []
        else:
            vals[k] = raw
    return TrialRecord(**vals)


def read_csv(path):
    """Return ``(config, records)``; config is rebuilt from the provenance header."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if not lines or not lines[0].startswith(_MAGIC):
        raise ValueError(f"{path}: not an activepu trial file")
    version = int(lines[0][len(_MAGIC):])
    if version != SCHEMA_VERSION:
        raise ValueError(f"{path}: schema_version {version} is not supported")
    cfg_lines, base_dir, i = [], ".", 1
    while i < len(lines) and lines[i].startswith("#"):
        line = lines[i]
        if line.startswith("# config-dir: "):
            base_dir = line[len("# config-dir: "):]
        elif line.startswith("# config: "):
            cfg_lines.append(line[len("# config: "):])
        elif line == "# config:":
            cfg_lines.append("")
        i += 1
    cfg = parse_config("\n".join(cfg_lines) + "\n", base_dir=base_dir) if cfg_lines else None
    reader = csv.DictReader(io.StringIO("\n".join(lines[i:])))
    if tuple(reader.fieldnames or ()) != COLUMNS:
        raise ValueError(f"{path}: unexpected columns {reader.fieldnames}")
    return cfg, [_parse_row(r) for r in reader]


def from_json(text: str):
    doc = json.loads(text)
    return doc, [TrialRecord(**r) for r in doc["records"]]
