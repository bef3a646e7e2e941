"""Canonical JSON: exact rationals as "p/q" strings, sorted keys."""

import json
import re
from enum import Enum
from fractions import Fraction

from .errors import MalformedInput

_RATIONAL = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+))?\s*$")


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(value) -> Fraction:
    """Accept ints and "p/q" or "p" strings; floats are refused."""
    if isinstance(value, bool):
        raise MalformedInput(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL.match(value)
        if match and match.group(2) != "0":
            return Fraction(int(match.group(1)), int(match.group(2) or 1))
    raise MalformedInput(f"not an exact rational: {value!r}")


def to_jsonable(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    return obj


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=True) + "\n"
