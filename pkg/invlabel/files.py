# invlabel/files.py

"""
Internal file I/O utility.

Centralizes reading and writing of the JSON and CSV artifacts the library
produces, so every module writes the same format: UTF-8, LF line endings,
RFC-4180 quoting, `.` as decimal separator and floats in their shortest
round-trip representation. `OSError`s are logged and translated into
`FileIOError`.
"""

import csv
import json
import logging
import os
from typing import Any, Iterable, List, Optional, Sequence, Tuple

from .error import FileIOError

logger = logging.getLogger(__name__)


def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def _cell(value: Any) -> Any:
    # numpy scalars print as e.g. 'np.float64(0.5)' under repr; csv uses str()
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        return value.item()
    return value


def write_json(path: str, data: Any) -> None:
    """
    Writes a JSON document with stable key order and a trailing newline.

    Raises:
        FileIOError: If the file cannot be written.
    """
    try:
        _ensure_parent(path)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(data, fh, indent=2, allow_nan=False)
            fh.write("\n")
    except OSError as e:
        logger.error(f"Could not write JSON file {path}: {e}")
        raise FileIOError(f"Could not write {path}: {e}", path=path) from e
    except ValueError as e:
        # non-finite floats are not valid JSON
        raise FileIOError(f"Refusing to write non-finite values to {path}: {e}", path=path) from e
    logger.debug(f"Wrote JSON file {path}")


def read_json(path: str) -> Any:
    """
    Reads a JSON document.

    Raises:
        FileIOError: If the file is missing or unreadable.
        ValueError: If it is not valid UTF-8 (`UnicodeDecodeError`) or not valid
                    JSON (`json.JSONDecodeError`); left to the caller to translate.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        logger.error(f"Could not read JSON file {path}: {e}")
        raise FileIOError(f"Could not read {path}: {e}", path=path) from e
    return json.loads(text)


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> int:
    """
    Writes a CSV file with a header row.

    Returns:
        Number of data rows written.

    Raises:
        FileIOError: If the file cannot be written.
    """
    count = 0
    try:
        _ensure_parent(path)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_cell(v) for v in row])
                count += 1
    except OSError as e:
        logger.error(f"Could not write CSV file {path}: {e}")
        raise FileIOError(f"Could not write {path}: {e}", path=path) from e
    logger.info(f"Wrote {count} rows to {path}")
    return count


def read_csv(path: str, expected_header: Optional[Sequence[str]] = None) -> Tuple[List[str], List[List[str]]]:
    """
    Reads a CSV file written by `write_csv`.

    Raises:
        FileIOError: If the file is unreadable, empty, or its header differs
                     from `expected_header`.
    """
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            rows = list(reader)
    except OSError as e:
        logger.error(f"Could not read CSV file {path}: {e}")
        raise FileIOError(f"Could not read {path}: {e}", path=path) from e
    except UnicodeDecodeError as e:
        raise FileIOError(f"CSV file {path} is not valid UTF-8: {e}", path=path) from e
    if not rows:
        raise FileIOError(f"CSV file {path} is empty", path=path)
    header, data = rows[0], rows[1:]
    if expected_header is not None and list(header) != list(expected_header):
        raise FileIOError(f"CSV file {path} has header {header}, expected {list(expected_header)}", path=path)
    return header, data
