"""File formats: datasets, critical-value tables, study reports, manifests.

Datasets are delimited text, one observation per line (or one column of a
delimited row).  Parsing is locale-independent (C float syntax only) and
reports 1-based line numbers on failure.

Critical-value tables serialize to a versioned CSV
(``kind,n,alpha,reps,seed,value,redraws``) so calibrations can be cached
and shipped.

Every emitted result embeds a run manifest - command, full parameter set,
seed, tool version and an input digest - sufficient to reproduce the
payload byte for byte (no timestamps anywhere).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import VarextropyError
from .uniformity import CriticalValueTable

__all__ = [
    "DatasetError",
    "RunManifest",
    "read_dataset",
    "write_dataset",
    "file_digest",
    "save_critical_values",
    "load_critical_values",
    "format_value",
]

TOOL_VERSION = "0.1.0"
TABLE_FORMAT_HEADER = "# varextropy critical-values v1"


class DatasetError(VarextropyError):
    """Malformed dataset file; message carries the 1-based line number."""


def read_dataset(path, column: int = 0) -> np.ndarray:
    """Parse a delimited text dataset into a float vector.

    Splits on commas and whitespace; blank lines and ``#`` comments are
    skipped.  ``column`` selects a 0-based field when rows carry several.
    """
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            fields = text.replace(",", " ").split()
            if column >= len(fields):
                raise DatasetError(f"line {lineno}: expected column {column}, found {len(fields)} fields")
            token = fields[column]
            try:
                v = float(token)
            except ValueError:
                raise DatasetError(f"line {lineno}: cannot parse {token!r} as a number")
            if not np.isfinite(v):
                raise DatasetError(f"line {lineno}: non-finite value {token!r}")
            values.append(v)
    if not values:
        raise DatasetError("no observations found")
    return np.asarray(values, dtype=float)


def write_dataset(path, values, header_lines=()) -> None:
    """One observation per line at full float precision (round-trips exactly)."""
    with open(path, "w", encoding="utf-8") as fh:
        for line in header_lines:
            fh.write(line + "\n")
        for v in np.asarray(values, dtype=float):
            fh.write(repr(float(v)) + "\n")


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


@dataclass(frozen=True)
class RunManifest:
    """Provenance embedded in every emitted result."""

    command: str
    parameters: dict
    seed: int | None = None
    version: str = TOOL_VERSION
    input_digest: str | None = None

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "seed": self.seed,
            "version": self.version,
            "input_digest": self.input_digest,
        }

    def header_lines(self) -> list:
        lines = [f"# command: {self.command}", f"# version: {self.version}"]
        if self.seed is not None:
            lines.append(f"# seed: {self.seed}")
        if self.input_digest is not None:
            lines.append(f"# input-digest: {self.input_digest}")
        params = json.dumps(self.parameters, sort_keys=True, default=str)
        lines.append(f"# parameters: {params}")
        return lines


# ---------------------------------------------------------------------------
# critical-value tables


def save_critical_values(path, tables) -> None:
    """Write tables (iterable or kind-keyed dict) to the versioned CSV."""
    if isinstance(tables, dict):
        tables = tables.values()
    if isinstance(tables, CriticalValueTable):
        tables = [tables]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(TABLE_FORMAT_HEADER + "\n")
        fh.write("kind,n,alpha,reps,seed,value,redraws\n")
        for t in tables:
            for n in sorted(t.entries):
                rd = t.redraws.get(n, 0)
                fh.write(f"{t.kind},{n},{t.alpha!r},{t.reps},{t.seed},{t.entries[n]!r},{rd}\n")


def load_critical_values(path) -> dict:
    """Read the CSV back into a dict keyed by statistic kind.

    Rows of one kind must agree on (alpha, reps, seed); mixed files are
    rejected so a loaded table is always reproducible from its metadata.
    """
    tables: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0].strip() != TABLE_FORMAT_HEADER:
        raise DatasetError(f"not a critical-values file (missing {TABLE_FORMAT_HEADER!r})")
    for lineno, line in enumerate(lines[1:], start=2):
        text = line.strip()
        if not text or text.startswith("#") or text.startswith("kind,"):
            continue
        parts = text.split(",")
        if len(parts) != 7:
            raise DatasetError(f"line {lineno}: expected 7 fields, got {len(parts)}")
        kind, n, alpha, reps, seed, value, redraws = parts
        n, reps, seed, redraws = int(n), int(reps), int(seed), int(redraws)
        alpha, value = float(alpha), float(value)
        t = tables.get(kind)
        if t is None:
            t = CriticalValueTable(kind=kind, alpha=alpha, reps=reps, seed=seed)
            tables[kind] = t
        elif (t.alpha, t.reps, t.seed) != (alpha, reps, seed):
            raise DatasetError(f"line {lineno}: inconsistent metadata for kind {kind}")
        t.entries[n] = value
        t.redraws[n] = redraws
    return tables


def format_value(v: float) -> str:
    """7 significant digits, the reporting precision used throughout."""
    return f"{v:.7g}"
