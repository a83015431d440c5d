"""Deterministic JSON/CSV emission."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import re
import tempfile

_FLOAT_TOKEN = "\x00f:"
_TOKEN_RE = re.compile(r'"\\u0000f:([^"]*)"')


def _tokenize(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return _FLOAT_TOKEN + format(obj, ".17g")
    if isinstance(obj, int):
        return obj
    if isinstance(obj, complex):
        return [_tokenize(obj.real), _tokenize(obj.imag)]
    if isinstance(obj, dict):
        return {str(k): _tokenize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_tokenize(v) for v in obj]
    if hasattr(obj, "item"):
        return _tokenize(obj.item())
    return obj


def dumps(obj) -> str:
    """JSON text with every float written at 17 significant digits.

    Key order is the insertion order of the dicts passed in, so identical
    inputs give byte-identical output.
    """
    text = json.dumps(_tokenize(obj), indent=2)
    return _TOKEN_RE.sub(r"\1", text) + "\n"


def csv_text(header, rows, notes=()) -> str:
    buf = io.StringIO()
    for note in notes:
        buf.write(f"# {note}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format(v, ".17g") if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the target directory and rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".clox-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
