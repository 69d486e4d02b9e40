"""
Parsing of command-line values: complex amplitudes, ranges and dimension lists.

Complex numbers use the "a+bi" syntax with optional signs and a
pure-imaginary shorthand ("0.8", "-1.2i", "0.5+0.3i", "i", "1e-3-2i").
Ambiguous input (two consecutive signs, an imaginary part without 'i',
trailing characters) is rejected with the character position.

Example:
    ```python
    from fockwizz.utils.parsing import parse_complex, parse_range

    parse_complex('0.5+0.3i')   # (0.5+0.3j)
    parse_range('0:1:0.25')     # [0.0, 0.25, 0.5, 0.75]
    ```
"""

import math
import re

__all__ = [
    'ParseError',
    'parse_complex',
    'parse_range',
    'parse_dims',
    'format_complex',
]

_NUMBER = re.compile(r'(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?')
_RANGE_EPS = 1e-9


class ParseError(ValueError):
    """Malformed command-line value; `position` is the offending character index."""

    def __init__(self, text, reason, position=None):
        self.text = text
        self.position = position
        where = f" at position {position}" if position is not None else ''
        super().__init__(f"Cannot parse '{text}': {reason}{where}")


def _scan_term(text, pos, require_sign):
    sign = 1.0
    if pos < len(text) and text[pos] in '+-':
        sign = -1.0 if text[pos] == '-' else 1.0
        pos += 1
    elif require_sign:
        raise ParseError(text, "expected '+' or '-' before the imaginary part", pos)
    if pos < len(text) and text[pos] in '+-':
        raise ParseError(text, 'two consecutive signs', pos)

    magnitude = None
    match = _NUMBER.match(text, pos)
    if match:
        magnitude = float(match.group())
        pos = match.end()

    imaginary = pos < len(text) and text[pos] in 'ij'
    if imaginary:
        pos += 1
    elif magnitude is None:
        raise ParseError(text, 'expected a number', pos)
    if magnitude is None:
        magnitude = 1.0
    return sign * magnitude, imaginary, pos


def parse_complex(value):
    """
    Parse a complex amplitude written as "a+bi".

    Args:
        value (str or number): Text such as '0.5+0.3i', '-1.2i' or '0.8'.
            Numbers are passed through complex().

    Returns:
        complex: The parsed amplitude.

    Raises:
        ParseError: For malformed text; the message names the position.

    Examples:
        ```python
        parse_complex('-1.2i')      # -1.2j
        parse_complex('0.5+-0.3i')  # ParseError: two consecutive signs at position 4
        ```
    """
    if not isinstance(value, str):
        return complex(value)
    text = value.strip().replace(' ', '')
    if not text:
        raise ParseError(value, 'empty amplitude')

    first, first_imag, pos = _scan_term(text, 0, require_sign=False)
    if pos == len(text):
        return complex(0.0, first) if first_imag else complex(first, 0.0)
    if first_imag:
        raise ParseError(text, 'the imaginary part must come last', pos)

    second, second_imag, pos = _scan_term(text, pos, require_sign=True)
    if not second_imag:
        raise ParseError(text, "imaginary part is missing its 'i'", pos)
    if pos != len(text):
        raise ParseError(text, f"unexpected character '{text[pos]}'", pos)
    return complex(first, second)


def format_complex(z):
    """Inverse of parse_complex for display: 0.5+0.3i, -1.2i, 0.8."""
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:g}"
    if z.real == 0:
        return f"{z.imag:g}i"
    return f"{z.real:g}{z.imag:+g}i"


def parse_range(text):
    """
    Parse "start:stop:step" into the list start, start + step, ... below stop.

    Raises:
        ParseError: For malformed text, a zero step, or an empty range.
    """
    parts = str(text).split(':')
    if len(parts) != 3:
        raise ParseError(text, "expected 'start:stop:step'")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise ParseError(text, 'range bounds must be real numbers')
    if step == 0:
        raise ParseError(text, 'step must be nonzero')
    count = math.ceil((stop - start) / step - _RANGE_EPS)
    if count <= 0:
        raise ParseError(text, 'range is empty')
    return [start + k * step for k in range(count)]


def parse_dims(values):
    """Parse dimensions given as '64,128' or as a list of strings/ints."""
    if isinstance(values, str):
        values = values.split(',')
    dims = []
    for item in values:
        for piece in str(item).split(','):
            piece = piece.strip()
            if not piece:
                continue
            try:
                dims.append(int(piece))
            except ValueError:
                raise ParseError(piece, 'dimension must be an integer')
    if not dims:
        raise ParseError(str(values), 'no dimensions given')
    return dims
