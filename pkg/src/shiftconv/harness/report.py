"""Experiment reports: JSON for metadata and scalars, CSV for tables."""
from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = ["ExperimentReport", "format_number"]


def format_number(x) -> str:
    """Locale-free text for a CSV cell; floats in full precision scientific notation."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x) or math.isinf(x):
            return repr(x)
        return f"{x:.17e}"
    return str(x)


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


@dataclass
class ExperimentReport:
    experiment: str
    inputs: dict
    config_hash: str
    scalars: dict = field(default_factory=dict)  # name -> {"value", "error"}
    tables: dict = field(default_factory=dict)  # name -> (columns, rows)
    checks: dict = field(default_factory=dict)  # name -> bool
    started: float = field(default_factory=time.perf_counter)
    seconds: float = 0.0

    def add(self, name: str, value, error) -> None:
        """Record a numeric claim together with its measured error bound."""
        if error is None:
            raise ValueError(f"scalar {name!r} needs an error bound")
        if isinstance(value, complex):
            value = {"re": value.real, "im": value.imag}
        self.scalars[name] = {"value": value, "error": error}

    def table(self, name: str, columns, rows) -> None:
        self.tables[name] = (list(columns), [list(r) for r in rows])

    def check(self, name: str, ok: bool) -> bool:
        self.checks[name] = bool(ok)
        return bool(ok)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def finish(self) -> "ExperimentReport":
        self.seconds = time.perf_counter() - self.started
        return self

    def to_dict(self) -> dict:
        return _jsonable({
            "experiment": self.experiment,
            "inputs": self.inputs,
            "config_hash": self.config_hash,
            "scalars": self.scalars,
            "checks": self.checks,
            "passed": self.passed,
            "wall_seconds": self.seconds,
            "tables": {k: f"{self.experiment}_{k}.csv" for k in self.tables},
        })

    def write(self, out_dir) -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = []
        for name, (cols, rows) in self.tables.items():
            p = out / f"{self.experiment}_{name}.csv"
            with p.open("w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh)
                w.writerow(cols)
                for r in rows:
                    w.writerow([format_number(v) for v in r])
            paths.append(p)
        p = out / f"{self.experiment}.json"
        p.write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        paths.append(p)
        return paths
