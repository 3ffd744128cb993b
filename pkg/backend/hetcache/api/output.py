"""
hetcache - Report Output

Number formatting and JSON emission shared by the subcommands. Everything a
subcommand prints goes through here so reports are byte-identical across runs.
"""
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, TextIO, Union

import orjson

from hetcache.core.config import settings
from hetcache.core.exceptions import OutputError


def fmt(x: Union[float, Fraction, int]) -> str:
    """Fixed significant-digit rendering of a number."""
    return f"{float(x):.{settings.SIGNIFICANT_DIGITS}g}"


def _default(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(payload: Any) -> str:
    """Sorted-key, two-space-indented JSON; rationals become ``"p/q"``."""
    options = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY
    return orjson.dumps(payload, default=_default, option=options).decode()


def emit(text: str, stream: TextIO) -> None:
    stream.write(text if text.endswith("\n") else text + "\n")


def write_text(path: Union[str, Path], text: str) -> None:
    """
    Write a report file.

    Raises:
        OutputError: the file cannot be written
    """
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}", path=str(path)) from exc


def emit_lines(stream: TextIO, **values: Optional[Union[float, Fraction, int, str]]) -> None:
    """``name value`` lines in keyword order."""
    for name, value in values.items():
        rendered = value if isinstance(value, str) else fmt(value)
        stream.write(f"{name} {rendered}\n")
