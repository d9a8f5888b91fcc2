"""Tiny helpers for univariate integer polynomials given as coefficient
tuples ``(c0, c1, ..., ck)`` meaning ``c0 + c1*x + ... + ck*x**k``."""

from __future__ import annotations

import re
from fractions import Fraction


def normalize(coeffs) -> tuple[int, ...]:
    c = [int(v) for v in coeffs]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(coeffs) -> int:
    c = normalize(coeffs)
    return 0 if c == (0,) else len(c) - 1


def is_zero(coeffs) -> bool:
    return normalize(coeffs) == (0,)


def evaluate(coeffs, x):
    """Horner evaluation; exact for int/Fraction arguments."""
    acc = 0
    for c in reversed(normalize(coeffs)):
        acc = acc * x + c
    return acc


def max_abs_coeff(coeffs) -> int:
    return max(abs(c) for c in normalize(coeffs))


_TERM = re.compile(
    r"^([+-]?)(\d+)?(?:\*?(x)(?:\^(\d+))?)?$", re.IGNORECASE)


def parse(text: str) -> tuple[int, ...]:
    """Parse strings like ``x^2 - 2x + 1`` or ``3`` into coefficient tuples."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    terms = re.findall(r"[+-]?[^+-]+", s)
    out: dict[int, int] = {}
    for term in terms:
        m = _TERM.match(term)
        if not m or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"cannot parse polynomial term {term!r} in {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = sign * (1 if m.group(2) is None else int(m.group(2)))
        if m.group(3) is None:
            e = 0
        else:
            e = 1 if m.group(4) is None else int(m.group(4))
        out[e] = out.get(e, 0) + coeff
    deg = max(out)
    return normalize([out.get(i, 0) for i in range(deg + 1)])


def format_poly(coeffs) -> str:
    c = normalize(coeffs)
    if c == (0,):
        return "0"
    parts = []
    for e in range(len(c) - 1, -1, -1):
        v = c[e]
        if v == 0:
            continue
        if e == 0:
            t = str(abs(v))
        else:
            head = "" if abs(v) == 1 else f"{abs(v)}*"
            t = f"{head}x" + (f"^{e}" if e > 1 else "")
        parts.append(("-" if v < 0 else "+", t))
    sign, first = parts[0]
    s = ("-" if sign == "-" else "") + first
    for sign, t in parts[1:]:
        s += f" {sign} {t}"
    return s


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())
