"""
Tests for command-line value parsing
"""

import pytest

from fockwizz.utils.parsing import (
    ParseError,
    format_complex,
    parse_complex,
    parse_dims,
    parse_range,
)


@pytest.mark.parametrize("text,expected", [
    ('0.8', 0.8),
    ('-1.2i', -1.2j),
    ('0.5+0.3i', 0.5 + 0.3j),
    ('0.5 - 0.3i', 0.5 - 0.3j),
    ('i', 1j),
    ('-i', -1j),
    ('1e-3-2i', 1e-3 - 2j),
    ('2.5e1+1E-2j', 25 + 0.01j),
    ('.5', 0.5),
])
def test_parse_complex(text, expected):
    """Test accepted amplitude spellings."""
    assert parse_complex(text) == expected


def test_parse_complex_numbers_pass_through():
    """Test numeric input is converted directly."""
    assert parse_complex(0.25) == 0.25 + 0j
    assert parse_complex(1j) == 1j


@pytest.mark.parametrize("text,reason,position", [
    ('0.5+-0.3i', 'two consecutive signs', 4),
    ('1+2', "missing its 'i'", 3),
    ('2i+1', 'imaginary part must come last', 2),
    ('1+2ix', 'unexpected character', 4),
    ('abc', 'expected a number', 0),
])
def test_parse_complex_errors(text, reason, position):
    """Test malformed amplitudes name the reason and position."""
    with pytest.raises(ParseError) as excinfo:
        parse_complex(text)
    assert reason in str(excinfo.value)
    assert excinfo.value.position == position
    assert f"position {position}" in str(excinfo.value)


def test_parse_complex_empty():
    """Test an empty amplitude."""
    with pytest.raises(ParseError):
        parse_complex('  ')


def test_parse_error_is_value_error():
    """Test ParseError can be caught as ValueError."""
    with pytest.raises(ValueError):
        parse_complex('1++2i')


@pytest.mark.parametrize("z", [0.8, -1.2j, 0.5 + 0.3j, 0.5 - 0.3j])
def test_format_complex_parses_back(z):
    """Test displayed amplitudes parse to the same value."""
    assert parse_complex(format_complex(z)) == z


def test_parse_range():
    """Test start:stop:step excludes the stop value."""
    assert parse_range('0:1:0.25') == [0.0, 0.25, 0.5, 0.75]
    assert len(parse_range('0:3.2:0.1')) == 32
    assert parse_range('1:0:-0.5') == [1.0, 0.5]


@pytest.mark.parametrize("text", ['1:0:0.1', '0:1:0', '0:1', 'a:b:c'])
def test_parse_range_errors(text):
    """Test empty ranges, zero steps and malformed text."""
    with pytest.raises(ParseError):
        parse_range(text)


def test_parse_dims():
    """Test comma and list forms."""
    assert parse_dims('64,128') == [64, 128]
    assert parse_dims(['64', '128', '256']) == [64, 128, 256]
    assert parse_dims(['64,128', '256']) == [64, 128, 256]


def test_parse_dims_errors():
    """Test non-integer and empty dimension lists."""
    with pytest.raises(ParseError):
        parse_dims('64,big')
    with pytest.raises(ParseError):
        parse_dims('')
