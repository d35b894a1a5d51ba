from contextlib import contextmanager
import csv
import json
import logging
import math
import os
import sys
from typing import Dict, Iterable, List, Optional, TextIO

import numpy as np

from lrd_entropy.exceptions import ValidationError
from lrd_entropy.montecarlo import ReplicationSummary

PRESET_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "presets")
SUMMARY_COLUMNS = [
    "alpha", "beta", "c0", "n", "h_n", "N", "truth_infinite", "truth_truncated",
    "mean", "var", "mse", "tail_index_scaled",
]
LEMMA_COLUMNS = ["lambda", "empirical", "analytic", "mc_se", "bound_ratio"]


def format_float(value: Optional[float]) -> str:
    """Ten significant digits; missing and non-finite values become empty cells."""
    if value is None or not math.isfinite(value):
        return ""
    return format(float(value), ".10g")


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def _numeric_rows(csv_path: str, width: int) -> List[List[float]]:
    """Rows of a numeric CSV file; one non-numeric header line is skipped."""
    rows = []
    with open(csv_path, mode="r", newline="", encoding="utf-8") as file:
        for line_no, row in enumerate(csv.reader(file), start=1):
            cells = [cell.strip() for cell in row if cell.strip()]
            if not cells:
                continue
            if line_no == 1 and not all(_is_number(cell) for cell in cells):
                continue
            if len(cells) != width or not all(_is_number(cell) for cell in cells):
                raise ValidationError(f"{csv_path}:{line_no}: expected {width} numeric column(s)")
            values = [float(cell) for cell in cells]
            if not all(math.isfinite(value) for value in values):
                raise ValidationError(f"{csv_path}:{line_no}: non-finite value")
            rows.append(values)
    return rows


class PathReader:
    def __init__(self, csv_path: str) -> None:
        self.csv_path = csv_path
        self.data = np.empty(0)
        self.load_csv()

    def load_csv(self) -> None:
        logging.info(f"Reading path CSV: {self.csv_path}")
        self.data = np.array([row[0] for row in _numeric_rows(self.csv_path, 1)], dtype=float)


class KernelTableReader:
    """Two-column CSV `u,k` describing a kernel on a symmetric grid."""

    def __init__(self, csv_path: str) -> None:
        self.csv_path = csv_path
        self.grid = np.empty(0)
        self.values = np.empty(0)
        self.load_csv()

    def load_csv(self) -> None:
        logging.info(f"Reading kernel table: {self.csv_path}")
        rows = _numeric_rows(self.csv_path, 2)
        self.grid = np.array([row[0] for row in rows], dtype=float)
        self.values = np.array([row[1] for row in rows], dtype=float)


class ConfigFileReader:
    """`key=value` lines with `#` comments; keys are flag names."""

    def __init__(self, config_path: str) -> None:
        self.config_path = config_path
        self.data: Dict[str, str] = {}
        self.load_config()

    def load_config(self) -> None:
        logging.info(f"Reading config file: {self.config_path}")
        with open(self.config_path, "r", encoding="utf-8") as file:
            for line_no, raw in enumerate(file, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValidationError(f"{self.config_path}:{line_no}: expected key=value")
                key, value = line.split("=", 1)
                key = key.strip().lstrip("-").replace("-", "_")
                if not key:
                    raise ValidationError(f"{self.config_path}:{line_no}: empty key")
                self.data[key] = value.strip()


class PresetReader:
    """Experiment plan for one published table, shipped under presets/."""

    def __init__(self, name: str) -> None:
        self.name = name
        self.data: dict = {}
        self.load_json()

    @staticmethod
    def available() -> List[str]:
        return sorted(
            os.path.splitext(entry)[0]
            for entry in os.listdir(PRESET_DIR)
            if entry.endswith(".json")
        )

    def load_json(self) -> None:
        path = self.name if self.name.endswith(".json") else os.path.join(PRESET_DIR, f"{self.name}.json")
        if not os.path.exists(path):
            raise ValidationError(
                f"unknown preset '{self.name}' (available: {', '.join(self.available())})"
            )
        with open(path, "r", encoding="utf-8") as file:
            self.data = json.load(file)

    def published(self, beta: float, n: int) -> Optional[dict]:
        for row in self.data.get("published", []):
            if math.isclose(row["beta"], beta) and row["n"] == n:
                return row
        return None


class SummaryStorage:
    """Collects one CSV row per (experiment, n) in insertion order."""

    def __init__(self) -> None:
        self.rows: List[List[str]] = []

    def add_summaries(self, alpha: float, beta: float, c0: float, summaries: Iterable[ReplicationSummary]) -> None:
        for s in summaries:
            self.rows.append(
                [
                    format_float(alpha),
                    format_float(beta),
                    format_float(c0),
                    str(s.n),
                    format_float(s.h_n),
                    str(s.replications),
                    format_float(s.truth_infinite),
                    format_float(s.truth_truncated),
                    format_float(s.mean),
                    format_float(s.var),
                    format_float(s.mse),
                    format_float(s.tail_index_scaled),
                ]
            )

    def write_csv(self, stream: TextIO) -> None:
        write_rows(stream, SUMMARY_COLUMNS, self.rows)


def write_rows(stream: TextIO, header: List[str], rows: Iterable[List[str]]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def write_column(stream: TextIO, header: str, values: Iterable[float]) -> None:
    write_rows(stream, [header], ([format(float(v), ".17g")] for v in values))


def write_lemma_report(stream: TextIO, report: Iterable[dict]) -> None:
    write_rows(stream, LEMMA_COLUMNS, ([format_float(row[c]) for c in LEMMA_COLUMNS] for row in report))


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def write_json(stream: TextIO, data: dict) -> None:
    stream.write(json.dumps(_json_safe(data), sort_keys=True) + "\n")


@contextmanager
def output_stream(path: Optional[str]):
    """Opened file for `path`, or stdout when no path is given."""
    if not path:
        yield sys.stdout
        return
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)
    logging.info(f"Writing {path}")
    with open(path, "w", newline="", encoding="utf-8") as file:
        yield file
