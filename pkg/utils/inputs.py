import json
import math
import os
from dataclasses import dataclass
from typing import List, Optional, Tuple

from core.entropy import NORMALIZATION_TOL, ProbVector
from core.errors import InputParseError

__all__ = ["InputSpec", "parse_vector", "parse_csv", "parse_json", "load_input"]


@dataclass(frozen=True)
class InputSpec:
    source: str
    format: str
    renormalize: bool
    p: ProbVector
    q: Optional[ProbVector] = None
    # values as read, before normalization
    p_values: Tuple[float, ...] = ()
    q_values: Optional[Tuple[float, ...]] = None


def parse_vector(text: str, line: int = 1, column_offset: int = 0) -> List[float]:
    """Comma-separated decimals; errors point at the offending token."""
    values = []
    column = 1 + column_offset
    for token in text.split(','):
        stripped = token.strip()
        start = column + (len(token) - len(token.lstrip()))
        if not stripped:
            raise InputParseError("empty entry", line, start)
        try:
            value = float(stripped)
        except ValueError:
            raise InputParseError(f"not a number: {stripped!r}", line, start) from None
        if not math.isfinite(value):
            raise InputParseError(f"not a finite number: {stripped!r}", line, start)
        values.append(value)
        column += len(token) + 1
    return values


def parse_csv(text: str) -> Tuple[List[float], Optional[List[float]]]:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith('#'):
            continue
        rows.append(parse_vector(raw, lineno))
        if len(rows) > 2:
            raise InputParseError("expected at most two vectors (p and q)", lineno, 1)
    if not rows:
        raise InputParseError("no vector found", 1, 1)
    return rows[0], rows[1] if len(rows) > 1 else None


def _locate(text: str, key: str) -> Tuple[int, int]:
    idx = text.find(f'"{key}"')
    if idx < 0:
        return 1, 1
    line = text.count('\n', 0, idx) + 1
    return line, idx - (text.rfind('\n', 0, idx) + 1) + 1


def _json_vector(text: str, data: dict, key: str) -> Optional[List[float]]:
    if key not in data or data[key] is None:
        return None
    value = data[key]
    line, column = _locate(text, key)
    if not isinstance(value, list) or not value:
        raise InputParseError(f'"{key}" must be a non-empty list of numbers', line, column)
    out = []
    for item in value:
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise InputParseError(f'"{key}" holds a non-number: {item!r}', line, column)
        try:
            number = float(item)
        except OverflowError:
            number = math.inf
        if not math.isfinite(number):
            raise InputParseError(f'"{key}" holds a non-finite number: {item!r}', line, column)
        out.append(number)
    return out


def parse_json(text: str) -> Tuple[List[float], Optional[List[float]]]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputParseError(e.msg, e.lineno, e.colno) from None
    if not isinstance(data, dict):
        raise InputParseError('expected an object like {"p": [...], "q": [...]}', 1, 1)
    p = _json_vector(text, data, 'p')
    if p is None:
        raise InputParseError('missing "p"', 1, 1)
    return p, _json_vector(text, data, 'q')


def _read_text(path: str) -> str:
    try:
        with open(path, 'rb') as f:
            raw = f.read()
    except OSError as e:
        raise InputParseError(f"cannot read {path}: {e.strerror}", 1, 1) from None
    try:
        return raw.decode('utf-8')
    except UnicodeDecodeError as e:
        # columns count bytes here
        line = raw.count(b'\n', 0, e.start) + 1
        column = e.start - (raw.rfind(b'\n', 0, e.start) + 1) + 1
        raise InputParseError(f"invalid UTF-8 byte 0x{raw[e.start]:02x} at offset {e.start}",
                              line, column) from None


def load_input(path: Optional[str] = None, p_text: Optional[str] = None, q_text: Optional[str] = None,
               renormalize: bool = False, tol: float = NORMALIZATION_TOL) -> InputSpec:
    """Read p (and optionally q) from a JSON/CSV file or from inline flags."""
    if path is not None:
        text = _read_text(path)
        ext = os.path.splitext(path)[1].lower()
        fmt = 'json' if ext == '.json' or (ext != '.csv' and text.lstrip().startswith('{')) else 'csv'
        p_vals, q_vals = parse_json(text) if fmt == 'json' else parse_csv(text)
        source = path
    else:
        if p_text is None:
            raise InputParseError("no input: give --p or --input", 1, 1)
        p_vals = parse_vector(p_text, 1)
        q_vals = parse_vector(q_text, 2) if q_text is not None else None
        fmt, source = 'inline', 'inline'

    p = ProbVector.from_values(p_vals, renormalize=renormalize, tol=tol)
    q = ProbVector.from_values(q_vals, renormalize=renormalize, tol=tol) if q_vals is not None else None
    return InputSpec(source, fmt, renormalize, p, q, tuple(p_vals),
                     tuple(q_vals) if q_vals is not None else None)
