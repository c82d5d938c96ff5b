"""LP text format emission (``Minimize`` / ``Subject To`` / ``Bounds`` / ``Binary`` / ``End``)."""

from __future__ import annotations

from typing import IO

from survmap.errors import ModelError
from survmap.milp.model import BINARY, MAX_NAME_LENGTH, MilpModel

LINE_LIMIT = 250


def format_number(x: float) -> str:
    x = float(x)
    if x.is_integer():
        return str(int(x))
    return repr(x)


def _linear(terms) -> list[str]:
    tokens = []
    for i, (coef, name) in enumerate(terms):
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = name if mag == 1 else f"{format_number(mag)} {name}"
        if i == 0:
            tokens.append(body if sign == "+" else f"- {body}")
        else:
            tokens.append(f"{sign} {body}")
    return tokens


def _wrapped(head: str, tokens: list[str], tail: str = "") -> list[str]:
    lines = []
    current = head
    for tok in tokens + ([tail] if tail else []):
        candidate = f"{current} {tok}" if current.strip() else f"{current}{tok}"
        if len(candidate) > LINE_LIMIT and current.strip():
            lines.append(current)
            current = f"   {tok}"
        else:
            current = candidate
    lines.append(current)
    return lines


def emit_lp(model: MilpModel, sink: IO[str] | None = None) -> str:
    """Render ``model``; output depends only on the model, so it is byte-stable."""
    for name in list(model.variables) + [row.label for row in model.constraints]:
        if len(name) > MAX_NAME_LENGTH:
            raise ModelError(f"name longer than {MAX_NAME_LENGTH} characters: {name[:40]}...")
    out = []
    header = f"\\ family {model.family} root {model.root}"
    if model.instance:
        header += f" instance {model.instance}"
    out.append(header)
    out.append("Minimize")
    out.extend(_wrapped(" obj:", _linear(model.objective) or ["0"]))
    if model.constraints:
        out.append("Subject To")
        for row in model.constraints:
            out.extend(_wrapped(f" {row.label}:", _linear(row.terms), f"{row.sense} {format_number(row.rhs)}"))
    bounded = [v for v in model.variables.values() if v.kind != BINARY]
    if bounded:
        out.append("Bounds")
        out.extend(f" {format_number(v.lo)} <= {v.name} <= {format_number(v.hi)}" for v in bounded)
    binaries = [v.name for v in model.variables.values() if v.kind == BINARY]
    if binaries:
        out.append("Binary")
        out.extend(f" {name}" for name in binaries)
    out.append("End")
    text = "\n".join(out) + "\n"
    if sink is not None:
        sink.write(text)
    return text


def write_lp(model: MilpModel, path) -> str:
    text = emit_lp(model)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return text
