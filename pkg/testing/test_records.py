"""
Tests for JSON documents and row tables
"""

import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from fockwizz.utils.records import (
    format_number,
    format_table,
    read_json,
    to_serializable,
    write_json,
    write_table,
)


class _Colour(enum.Enum):
    RED = 'red'


@dataclass
class _Record:
    z: complex
    dims: list
    verdict: str = field(init=False)

    def __post_init__(self):
        self.verdict = 'converged'


def test_to_serializable_complex():
    """Test complex numbers become [real, imag] pairs."""
    assert to_serializable(0.5 + 0.3j) == [0.5, 0.3]
    assert to_serializable(np.complex128(-1j)) == [0.0, -1.0]


def test_to_serializable_numpy():
    """Test numpy arrays and scalars become plain Python values."""
    assert to_serializable(np.array([1j, 2])) == [[0.0, 1.0], [2.0, 0.0]]
    assert to_serializable(np.float64(0.25)) == 0.25
    assert isinstance(to_serializable(np.int64(3)), int)
    assert to_serializable(np.bool_(True)) is True


def test_to_serializable_dataclass():
    """Test dataclasses include fields set after init."""
    doc = to_serializable(_Record(0.2j, (64, 128)))
    assert doc == {'z': [0.0, 0.2], 'dims': [64, 128], 'verdict': 'converged'}


def test_to_serializable_misc():
    """Test enums and paths."""
    assert to_serializable({'colour': _Colour.RED, 'out': Path('a/b.json')}) == \
        {'colour': 'red', 'out': str(Path('a/b.json'))}


def test_write_json_is_stable(temp_dir):
    """Test sorted keys, trailing newline and exact float round trip."""
    value = 0.1 + 0.2
    text = write_json({'b': value, 'a': [1, 2]}, temp_dir / "out" / "doc.json")
    assert text.index('"a"') < text.index('"b"')
    assert text.endswith('\n')
    assert read_json(temp_dir / "out" / "doc.json")['b'] == value


def test_write_json_without_path():
    """Test the text is returned when no path is given."""
    assert write_json([1, 2]) == '[\n  1,\n  2\n]\n'


def test_format_number():
    """Test table cell formatting."""
    assert format_number(3) == '3'
    assert format_number(True) == 'True'
    assert format_number(0.1) == '0.10000000000000001'
    assert float(format_number(1 / 3)) == 1 / 3
    assert format_number('eq1-ladder') == 'eq1-ladder'


def test_write_table(temp_dir):
    """Test header line and one line per row."""
    path = temp_dir / "stats.csv"
    text = write_table(['n', 'p_n'], [(0, 0.5), (1, 0.5)], path)
    assert path.read_text() == text
    assert text == format_table(['n', 'p_n'], [(0, 0.5), (1, 0.5)])
    assert text.splitlines() == ['n,p_n', '0,0.5', '1,0.5']
