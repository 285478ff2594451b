"""Check records and their JSON / CSV serialisation."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

from . import __version__

SCHEMA_VERSION = 1
PASS, FAIL, WARN = "PASS", "FAIL", "WARN"


def fmt_float(x: float) -> float | str:
    """Round to 12 significant digits; non-finite values become strings."""
    if not math.isfinite(x):
        return str(x)
    return float(f"{x:.12g}")


def clean(value):
    """JSON-ready value with deterministic float formatting."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return fmt_float(value)
    if isinstance(value, complex):
        return {"re": fmt_float(value.real), "im": fmt_float(value.imag)}
    if hasattr(value, "item") and getattr(value, "shape", None) == ():
        return clean(value.item())
    if isinstance(value, dict):
        return {str(k): clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)) or hasattr(value, "tolist"):
        seq = value.tolist() if hasattr(value, "tolist") else value
        return [clean(v) for v in seq]
    return str(value)


@dataclass
class CheckRecord:
    name: str
    paper_ref: str
    quote: str
    status: str
    expected: object
    actual: object
    tolerance: object
    params: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "paper_ref": self.paper_ref,
            "quote": self.quote,
            "status": self.status,
            "expected": clean(self.expected),
            "actual": clean(self.actual),
            "tolerance": clean(self.tolerance),
            "parameters": self.params,
        }


def within(actual: float, expected: float, tol: float, relative: bool = False) -> str:
    err = abs(actual - expected)
    if relative:
        err /= abs(expected)
    return PASS if err <= tol else FAIL


@dataclass
class ReportDocument:
    command: str
    config: dict
    checks: list
    ruleset_hash: str = ""

    @property
    def status(self) -> str:
        return PASS if self.checks and all(c.status == PASS for c in self.checks) else FAIL

    @property
    def exit_code(self) -> int:
        return 0 if self.status == PASS else 1

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool_version": __version__,
            "command": self.command,
            "config": clean(self.config),
            "ruleset_hash": self.ruleset_hash,
            "status": self.status,
            "checks": [c.as_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, ensure_ascii=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check-name", "parameter-string", "measured", "expected", "tolerance", "pass"])
        for c in self.checks:
            w.writerow([c.name, c.params, _cell(c.actual), _cell(c.expected),
                        _cell(c.tolerance), "true" if c.status == PASS else "false"])
        return buf.getvalue()

    def summary(self) -> str:
        rows = [f"{c.status:4}  {c.name}  [{c.paper_ref}]" for c in self.checks]
        n_pass = sum(c.status == PASS for c in self.checks)
        rows.append(f"{self.command}: {self.status} ({n_pass}/{len(self.checks)} checks passed)")
        return "\n".join(rows)


def _cell(v) -> str:
    v = clean(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v)
    return str(v)


def merge(command: str, config: dict, docs: list) -> ReportDocument:
    checks = [c for d in docs for c in d.checks]
    h = next((d.ruleset_hash for d in docs if d.ruleset_hash), "")
    return ReportDocument(command, config, checks, h)
