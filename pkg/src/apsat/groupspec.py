"""Text form of ambient groups.

    Z7            cyclic group of order 7
    Z3xZ9         direct product, first factor most significant
    Z5^2          power of a cyclic group; may be mixed with products
    F5^1:2        the 2-dimensional vector space over GF(5^1)

Canonical output collapses runs of equal cyclic factors into powers and
writes field mode as F<p>^<k>:<n>.
"""

from __future__ import annotations

import re

from .field import VectorSpace, is_prime, make_field
from .groups import Group, make_group


class GroupSpecError(ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        self.text, self.pos = text, pos
        super().__init__(f"{msg} at position {pos}: {text!r}\n  {' ' * (pos + 1)}^")


_FIELD = re.compile(r"F(\d+)(?:\^(\d+))?:(\d+)\Z")
_TERM = re.compile(r"Z(\d+)(?:\^(\d+))?")


def _positive(text: str, pos: int, digits: str, what: str) -> int:
    value = int(digits)
    if value < 1:
        raise GroupSpecError(text, pos, f"{what} must be positive")
    return value


def parse_group_spec(text: str) -> Group:
    s = text.strip()
    if not s:
        raise GroupSpecError(text, 0, "empty group spec")
    if s[0] == "F":
        m = _FIELD.match(s)
        if not m:
            raise GroupSpecError(text, 0, "expected F<p>^<k>:<n>")
        p = int(m.group(1))
        if not is_prime(p):
            raise GroupSpecError(text, m.start(1), f"{p} is not prime")
        k = _positive(text, m.start(2) if m.group(2) else 0, m.group(2) or "1", "extension degree")
        n = _positive(text, m.start(3), m.group(3), "dimension")
        return VectorSpace(make_field(p, k), n)
    factors: list[int] = []
    pos = 0
    while True:
        m = _TERM.match(s, pos)
        if not m:
            raise GroupSpecError(text, pos, "expected Z<m> or Z<m>^<k>")
        m_ = _positive(text, m.start(1), m.group(1), "cyclic order")
        k = _positive(text, m.start(2), m.group(2), "exponent") if m.group(2) else 1
        factors += [m_] * k
        pos = m.end()
        if pos == len(s):
            break
        if s[pos] != "x":
            raise GroupSpecError(text, pos, "expected 'x' between factors")
        pos += 1
    return make_group(factors)


def format_group_spec(G: Group) -> str:
    if isinstance(G, VectorSpace):
        return f"F{G.field.p}^{G.field.k}:{G.dim}"
    runs: list[list[int]] = []
    for m in G.factors:
        if runs and runs[-1][0] == m:
            runs[-1][1] += 1
        else:
            runs.append([m, 1])
    return "x".join(f"Z{m}" if c == 1 else f"Z{m}^{c}" for m, c in runs)
