"""Safe numeric evaluation of k expressions such as "12-8*sqrt(2)",
"3*sqrt(7)/2+I/2", "root(8,4)*(sqrt(2)-1)*I" or "12+8√2"."""

from __future__ import annotations

import ast
import re

import mpmath

_FUNCS = {
    "sqrt": lambda x: mpmath.sqrt(x),
    "root": lambda x, n: mpmath.root(x, int(n)),
}
_NAMES = {"I": mpmath.mpc(0, 1), "i": mpmath.mpc(0, 1), "pi": None}


def _normalize(s: str) -> str:
    s = s.strip().replace("−", "-").replace("·", "*")
    s = re.sub(r"√\s*\(", "sqrt(", s)
    s = re.sub(r"√\s*(\d+)", r"sqrt(\1)", s)
    # implicit products: 8sqrt(2), 2I, )(
    s = re.sub(r"(\d)\s*(sqrt|root|I|i(?!mport)|\()", r"\1*\2", s)
    s = re.sub(r"(?<![A-Za-z_])([Ii])\s*(sqrt|root|\()", r"\1*\2", s)
    s = re.sub(r"\)\s*(\(|sqrt|root|I\b|i\b|\d)", r")*\1", s)
    return s


def _eval(node):
    if isinstance(node, ast.Expression):
        return _eval(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        if isinstance(node.value, float):
            return mpmath.mpf(repr(node.value))
        return mpmath.mpf(node.value)
    if isinstance(node, ast.Name):
        if node.id == "pi":
            return +mpmath.mp.pi
        if node.id in _NAMES:
            return _NAMES[node.id]
        raise ValueError(f"unknown name {node.id!r}")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
        v = _eval(node.operand)
        return v if isinstance(node.op, ast.UAdd) else -v
    if isinstance(node, ast.BinOp):
        a, b = _eval(node.left), _eval(node.right)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            return a / b
        if isinstance(node.op, ast.Pow):
            return a ** b
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS:
        if node.keywords:
            raise ValueError("keyword arguments are not allowed")
        return _FUNCS[node.func.id](*[_eval(a) for a in node.args])
    raise ValueError(f"unsupported expression element {ast.dump(node)}")


def eval_k(expr: str):
    """Numeric value of a k expression at the current working precision."""
    tree = ast.parse(_normalize(expr), mode="eval")
    val = _eval(tree)
    val = mpmath.mpmathify(val)
    if isinstance(val, mpmath.mpc) and val.imag == 0:
        return val.real
    return val
