"""Report rows, number formatting and the text/CSV/JSON writers used by the CLI."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Context, Decimal

__all__ = ["Report", "format_real", "format_complex", "to_json", "to_csv", "to_text"]


def _to_decimal(x, ctx, digits: int) -> Decimal:
    return Decimal(ctx.nstr(ctx.mpf(x), digits + 10, min_fixed=-1, max_fixed=-1))


def format_real(x, ctx, digits: int) -> str:
    """Round half-even to ``digits`` significant digits; never prints -0."""
    d = _to_decimal(x, ctx, digits)
    if d.is_zero():
        return "0"
    d = Context(prec=digits, rounding=ROUND_HALF_EVEN).plus(d)
    exp = d.adjusted()
    if -6 <= exp < 16:
        places = max(digits - 1 - exp, 0)
        text = format(d, f".{places}f")
    else:
        text = format(d, f".{digits - 1}e")
    if text.startswith("-") and Decimal(text) == 0:
        text = text[1:]
    return text


def format_complex(z, ctx, digits: int) -> str:
    z = ctx.mpc(z)
    re = format_real(z.real, ctx, digits)
    im = format_real(z.imag, ctx, digits)
    if im.startswith("-"):
        return f"{re}-{im[1:]}i"
    return f"{re}+{im}i"


def complex_fields(z, ctx, digits: int) -> dict:
    z = ctx.mpc(z)
    return {"re": format_real(z.real, ctx, digits), "im": format_real(z.imag, ctx, digits)}


@dataclass
class Report:
    command: str
    config: dict
    rows: list = field(default_factory=list)
    footer: list = field(default_factory=list)  # extra (key, value) lines for CSV

    def add(self, inputs: dict, computed, expected=None, digits_matched=None, passed=None) -> None:
        row = {"inputs": inputs, "computed": computed}
        if expected is not None:
            row["expected"] = expected
        if digits_matched is not None:
            row["digits_matched"] = digits_matched
        if passed is not None:
            row["pass"] = passed
        self.rows.append(row)

    @property
    def summary(self) -> dict:
        passed = sum(1 for r in self.rows if r.get("pass") is True)
        failed = sum(1 for r in self.rows if r.get("pass") is False)
        return {"passed": passed, "failed": failed}

    def as_dict(self) -> dict:
        return {"command": self.command, "config": self.config, "rows": self.rows, "summary": self.summary}


def to_json(report: Report) -> str:
    return json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n"


def _flatten(prefix: str, value, out: dict) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    else:
        out[prefix] = "" if value is None else value


def _flat_rows(report: Report) -> tuple[list, list]:
    flat = []
    header: list[str] = []
    for row in report.rows:
        f: dict = {}
        _flatten("", row, f)
        for k in f:
            if k not in header:
                header.append(k)
        flat.append(f)
    return header, flat


def to_csv(report: Report) -> str:
    header, flat = _flat_rows(report)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for f in flat:
        writer.writerow([f.get(k, "") for k in header])
    for key, value in report.footer:
        writer.writerow([key, value])
    return buf.getvalue()


def to_text(report: Report) -> str:
    header, flat = _flat_rows(report)
    lines = [f"# {report.command}"]
    if flat:
        widths = {k: max(len(k), *(len(str(f.get(k, ""))) for f in flat)) for k in header}
        lines.append("  ".join(k.ljust(widths[k]) for k in header).rstrip())
        for f in flat:
            lines.append("  ".join(str(f.get(k, "")).ljust(widths[k]) for k in header).rstrip())
    for key, value in report.footer:
        lines.append(f"{key}: {value}")
    s = report.summary
    if s["passed"] or s["failed"]:
        lines.append(f"passed {s['passed']}, failed {s['failed']}")
    return "\n".join(lines) + "\n"
