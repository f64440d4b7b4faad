"""Deterministic serialization for CLI outputs.

Floats print with 17 significant digits (lossless for doubles), CSV uses
'.' decimals, ',' separators, a header row and LF line endings, and JSON
key order follows construction order.  Identical inputs therefore produce
byte-identical files regardless of thread count.
"""

from __future__ import annotations

import os
from pathlib import Path


def fmt_float(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if x != x:
        return "nan"
    if x in (float("inf"), float("-inf")):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def json_dumps(obj, indent: int = 0) -> str:
    """JSON with .17g floats; supports dict/list/str/bool/None/numbers."""
    pad = " " * indent
    nl = "\n" if indent >= 0 else ""

    def render(node, depth):
        inner = pad * (depth + 1)
        closer = pad * depth
        if node is None:
            return "null"
        if isinstance(node, bool):
            return "true" if node else "false"
        if isinstance(node, str):
            return '"' + node.replace("\\", "\\\\").replace('"', '\\"') + '"'
        if isinstance(node, int):
            return str(node)
        if isinstance(node, float):
            if node != node or node in (float("inf"), float("-inf")):
                return "null"
            return format(node, ".17g")
        if isinstance(node, complex):
            return render([node.real, node.imag], depth)
        if isinstance(node, dict):
            if not node:
                return "{}"
            items = [f'{inner}{render(str(k), 0)}: {render(v, depth + 1)}'
                     for k, v in node.items()]
            return "{" + nl + ("," + nl).join(items) + nl + closer + "}"
        if isinstance(node, (list, tuple)):
            if not len(node):
                return "[]"
            items = [f"{inner}{render(v, depth + 1)}" for v in node]
            return "[" + nl + ("," + nl).join(items) + nl + closer + "]"
        # numpy scalars
        if hasattr(node, "item"):
            return render(node.item(), depth)
        raise TypeError(f"cannot serialize {type(node)}")

    return render(obj, 0) + "\n"


def write_json(path: Path, obj) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(json_dumps(obj, indent=2))


def write_csv(path: Path, header, rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt_float(v) if not isinstance(v, str) else v
                              for v in row) + "\n")


def resolve_out_dir(flag_value) -> Path:
    """--out destination; the CMVLAB_OUT environment variable wins."""
    env = os.environ.get("CMVLAB_OUT")
    out = Path(env) if env else Path(flag_value if flag_value else ".")
    out.mkdir(parents=True, exist_ok=True)
    return out
