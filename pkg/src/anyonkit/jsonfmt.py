"""Deterministic JSON writer: sorted keys, floats at 17 significant digits.

The stdlib encoder prints the shortest repr of a float; output here must be
byte-stable and use a fixed number of digits, so floats are formatted by hand.
Complex numbers are written as ``[re, im]``.
"""

from __future__ import annotations

import json
import math

import numpy as np


def fmt_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f'cannot encode non-finite number {x!r} as JSON')
    s = format(x, '.17g')
    if s in ('0', '-0'):
        return '0.0' if s == '0' else '-0.0'
    if 'e' not in s and '.' not in s:
        s += '.0'
    return s


def _encode(obj, indent: int | None, level: int) -> str:
    if obj is None:
        return 'null'
    if isinstance(obj, (bool, np.bool_)):
        return 'true' if obj else 'false'
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return f'[{fmt_float(obj.real)}, {fmt_float(obj.imag)}]'
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        items = sorted(obj.items())
        if not items:
            return '{}'
        parts = [f'{json.dumps(str(k), ensure_ascii=False)}: {_encode(v, indent, level + 1)}' for k, v in items]
        return _wrap('{', '}', parts, indent, level)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return '[]'
        parts = [_encode(v, indent, level + 1) for v in obj]
        return _wrap('[', ']', parts, indent, level)
    raise TypeError(f'cannot encode {type(obj).__name__} as JSON')


def _wrap(open_: str, close: str, parts: list[str], indent: int | None, level: int) -> str:
    if indent is None:
        return open_ + ', '.join(parts) + close
    pad = ' ' * (indent * (level + 1))
    end = ' ' * (indent * level)
    return open_ + '\n' + ',\n'.join(pad + p for p in parts) + '\n' + end + close


def dumps(obj, indent: int | None = 2) -> str:
    return _encode(obj, indent, 0)


def complex_from_json(value) -> complex:
    """Accept a bare number or a ``[re, im]`` pair."""
    if isinstance(value, bool):
        raise ValueError('expected a number or [re, im] pair')
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        return complex(value[0], value[1])
    raise ValueError(f'expected a number or [re, im] pair, got {value!r}')


def matrix_from_json(value) -> np.ndarray:
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise ValueError('expected a nonempty list of rows')
    n = len(value[0])
    if any(len(r) != n for r in value):
        raise ValueError('rows have different lengths')
    return np.array([[complex_from_json(x) for x in r] for r in value], dtype=complex)
