"""Published reference values for the seven benchmark tables.

Each printed number keeps a ``|`` marker separating the confident leading
digits from trailing digits flagged as unreliable.  A number without a
marker is fully confident.
"""

from __future__ import annotations

import ast
import operator
from dataclasses import dataclass

__all__ = ["TableRow", "TableFixture", "TABLES", "parse_expr", "split_marked", "marked_value"]


@dataclass(frozen=True)
class TableRow:
    N: int | None  # None marks the reference (exact) row
    re: str
    im: str | None = None

    @property
    def is_reference(self) -> bool:
        return self.N is None


@dataclass(frozen=True)
class TableFixture:
    table_id: int
    kind: str  # "hardy_z" or "remainder"
    sigma: str
    t: str
    alpha: str | None
    beta: str | None
    rows: tuple[TableRow, ...]
    exact_digits: int  # significant digits required of the reference row
    expansion_digits: int  # digits required of the last expansion row
    expansion_N: int


TABLES: dict[int, TableFixture] = {
    1: TableFixture(
        1, "hardy_z", "1/2", "2*pi", None, None,
        (
            TableRow(0, "-1.85029"),
            TableRow(1, "-0.926411"),
            TableRow(3, "-0.955739"),
            TableRow(6, "-0.956017"),
            TableRow(None, "-0.956029"),
        ),
        exact_digits=6, expansion_digits=6, expansion_N=6,
    ),
    2: TableFixture(
        2, "remainder", "1/2", "600", "30/sqrt(pi)", "10/sqrt(pi)",
        (
            TableRow(1, "-0.08|810545388", "0.10|864755195"),
            TableRow(3, "-0.087645|36572", "0.109362|55272"),
            TableRow(5, "-0.087645228|33", "0.10936268|294"),
            TableRow(None, "-0.08764522824", "0.10936268305"),
        ),
        exact_digits=10, expansion_digits=8, expansion_N=5,
    ),
    3: TableFixture(
        3, "remainder", "-2", "600", "30/sqrt(pi)", "10/sqrt(pi)",
        (
            TableRow(1, "-0.347|8598947", "0.4|289646591"),
            TableRow(3, "-0.347|8754856", "0.4059|859119"),
            TableRow(5, "-0.3479331|346", "0.40599|29975"),
            TableRow(None, "-0.3479331128", "0.4059931509"),
        ),
        exact_digits=9, expansion_digits=6, expansion_N=5,
    ),
    4: TableFixture(
        4, "remainder", "3/4", "400", "20/sqrt(pi)", "10/sqrt(pi)",
        (
            TableRow(1, "0.11|628656704", "0.031|02038722"),
            TableRow(3, "0.11503|659264", "0.031341|63666"),
            TableRow(5, "0.11503572|670", "0.03134146|229"),
            TableRow(None, "0.11503572550", "0.03134146183"),
        ),
        exact_digits=10, expansion_digits=7, expansion_N=5,
    ),
    5: TableFixture(
        5, "remainder", "1/2", "256", "32", "4/pi",
        (
            TableRow(1, "-0.12|120812956", "0.00|884587559"),
            TableRow(2, "-0.1207|5592244", "0.0078|9494686"),
            TableRow(4, "-0.120742|08191", "0.0078772|9724"),
            TableRow(None, "-0.12074212743", "0.00787728177"),
        ),
        exact_digits=10, expansion_digits=6, expansion_N=4,
    ),
    6: TableFixture(
        6, "remainder", "1", "600", "sqrt(500/pi)", "sqrt(180/pi)",
        (
            TableRow(1, "0.07|827091811", "-0.076|57008324"),
            TableRow(3, "0.07798|494014", "-0.076932|55693"),
            TableRow(5, "0.077985048|83", "-0.0769326604|7"),
            TableRow(None, "0.07798504890", "-0.07693266040"),
        ),
        exact_digits=10, expansion_digits=8, expansion_N=5,
    ),
    7: TableFixture(
        7, "remainder", "1/2", "800", "40/sqrt(pi)", "10/sqrt(pi)",
        (
            TableRow(1, "-0.079|66764263636", "-0.073|73504930114"),
            TableRow(3, "-0.079573|71736089", "-0.07351|910859701"),
            TableRow(5, "-0.079573651|82034", "-0.073518978|39664"),
            TableRow(7, "-0.0795736517815|8", "-0.073518978259|65"),
            TableRow(None, "-0.07957365178152", "-0.07351897825948"),
        ),
        exact_digits=12, expansion_digits=11, expansion_N=7,
    ),
}


def split_marked(text: str) -> tuple[str, int]:
    """Strip the marker; return (plain number, decimals in the confident part)."""
    head, _, _ = text.partition("|")
    plain = text.replace("|", "")
    decimals = len(head.split(".")[1]) if "." in head else 0
    return plain, decimals


def marked_value(text: str, ctx):
    plain, _ = split_marked(text)
    return ctx.mpf(plain)


_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}


def parse_expr(text: str, ctx):
    """Evaluate a small real or complex expression such as ``30/sqrt(pi)``.

    Supports numbers, ``pi``, ``e``, ``i``/``j`` as the imaginary unit, and
    the functions ``sqrt``, ``log``, ``exp``.
    """
    names = {"pi": ctx.pi, "e": ctx.e, "i": ctx.mpc(0, 1), "j": ctx.mpc(0, 1)}
    funcs = {"sqrt": ctx.sqrt, "log": ctx.log, "exp": ctx.exp}

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            # read literals from their text so 0.1 means one tenth exactly
            return ctx.mpf(ast.get_source_segment(src, node) or repr(node.value))
        if isinstance(node, ast.Constant) and isinstance(node.value, complex):
            return ctx.mpc(0, ctx.mpf((ast.get_source_segment(src, node) or "0j")[:-1]))
        if isinstance(node, ast.Name) and node.id in names:
            return names[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in funcs and len(node.args) == 1 and not node.keywords):
            return funcs[node.func.id](ev(node.args[0]))
        raise ValueError(f"unsupported expression: {text!r}")

    src = text.strip().replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse {text!r}") from exc
    return ev(tree)
