"""
Serialization helpers for state documents, reports and tables.

This module turns fockwizz objects (dataclasses, complex numbers, numpy
arrays and scalars, enums) into JSON-safe structures and writes the two
output formats the package produces:

- structured documents: JSON with sorted keys and stable indentation
- row tables: comma-separated values with a one-line header and numbers
  printed with 17 significant digits for round-trip fidelity

Example:
    ```python
    from fockwizz.utils.records import to_serializable, write_json, write_table

    write_json({'z': 0.5 + 0.3j, 'dims': [64, 128]}, 'report.json')
    write_table(['n', 'p_n'], [(0, 0.9), (1, 0.1)], 'stats.csv')
    ```
"""

import dataclasses
import enum
import json
from pathlib import Path

import numpy as np

__all__ = [
    'to_serializable',
    'write_json',
    'read_json',
    'format_number',
    'format_table',
    'write_table',
]


def to_serializable(obj):
    """
    Recursively convert an object to a JSON-serializable structure.

    Args:
        obj: Any object. Dataclasses become dicts, complex numbers become
            [real, imag] pairs, numpy arrays become (nested) lists, enums become
            their values.

    Returns:
        A structure built from dict, list, str, int, float, bool and None.

    Examples:
        ```python
        to_serializable(0.5 + 0.3j)          # [0.5, 0.3]
        to_serializable(np.array([1j, 2]))   # [[0.0, 1.0], [2.0, 0.0]]
        ```
    """
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_serializable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, enum.Enum):
        return to_serializable(obj.value)
    if isinstance(obj, dict):
        return {str(k): to_serializable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_serializable(item) for item in obj]
    if isinstance(obj, np.ndarray):
        return [to_serializable(item) for item in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def write_json(obj, path=None):
    """
    Serialize obj as a structured JSON document.

    Keys are sorted and floats use Python's shortest round-trip repr, so
    identical inputs always produce identical bytes.

    Args:
        obj: Object accepted by to_serializable.
        path (str or Path, optional): Output file. Parent directories are
            created. If None, nothing is written.

    Returns:
        str: The JSON text.
    """
    text = json.dumps(to_serializable(obj), indent=2, sort_keys=True) + '\n'
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding='utf-8')
    return text


def read_json(path):
    return json.loads(Path(path).read_text(encoding='utf-8'))


def format_number(value):
    """Format a table cell; floats get 17 significant digits."""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return '%.17g' % float(value)
    return str(value)


def format_table(header, rows):
    lines = [','.join(header)]
    for row in rows:
        lines.append(','.join(format_number(v) for v in row))
    return '\n'.join(lines) + '\n'


def write_table(header, rows, path=None):
    """
    Write rows as comma-separated values with a one-line header.

    Args:
        header (list[str]): Column names.
        rows (iterable): Row tuples, same length as header.
        path (str or Path, optional): Output file. If None, nothing is written.

    Returns:
        str: The table text.
    """
    text = format_table(header, rows)
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding='utf-8')
    return text
