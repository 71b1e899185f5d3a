"""Writers and readers for the artifacts the pipelines produce.

Datasets and corpora are JSON Lines, training logs and benchmark reports are
CSV with a fixed header, fitted models are JSON documents. Every writer is
byte-deterministic: keys are sorted, floats use ``repr`` and lines end with
``\\n``.
"""

import csv
import json
import os
from typing import Any, Dict, Iterable, Iterator, List, Sequence

from ..exceptions import ServiceConfigurationError


def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def dumps(data: Any) -> str:
    """Canonical single-line JSON."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def write_json(path: str, data: Dict[str, Any]) -> None:
    """Write a JSON document, creating parent directories."""
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(json.dumps(data, sort_keys=True, indent=1, ensure_ascii=False))
        f.write("\n")


def read_json(path: str) -> Dict[str, Any]:
    """Read a JSON document.

    Raises:
        FileNotFoundError: If the file does not exist
        ServiceConfigurationError: If the file is not valid JSON
    """
    with open(path, encoding="utf-8") as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise ServiceConfigurationError(f"Invalid JSON in {path}: {e}")


def write_jsonl(path: str, records: Iterable[Dict[str, Any]]) -> int:
    """Write one JSON object per line and return how many were written."""
    _ensure_parent(path)
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for record in records:
            f.write(dumps(record))
            f.write("\n")
            count += 1
    return count


def read_jsonl(path: str) -> Iterator[Dict[str, Any]]:
    """Yield the objects of a JSON Lines file, skipping blank lines.

    Raises:
        ServiceConfigurationError: If a line is not valid JSON
    """
    with open(path, encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as e:
                raise ServiceConfigurationError(f"Invalid JSON on line {number} of {path}: {e}")


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    """Write a CSV file with a header row."""
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def read_csv(path: str) -> List[Dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))
