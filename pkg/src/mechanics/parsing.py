"""
Recursive-descent parser shared by field elements, polynomials and Hilbert series.

Grammar (implicit multiplication is rejected):
    expr   := term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := ("+" | "-") factor | power
    power  := atom ("^" INT)?
    atom   := INT | NAME | "(" expr ")"

The parser only builds values through the callbacks it is given and the usual
Python operators, so any algebra with + - * and ** on nonnegative ints works.
"""
import re
from typing import Callable, List, Tuple

from src.errors import PolySyntaxError

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def tokenize(text: str) -> List[Tuple[str, str, int]]:
    """Returns (kind, text, position) tuples; kind is 'int', 'name' or 'op'."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            break
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*^()":
                raise PolySyntaxError(f"unexpected character '{ch}'", m.start(3))
            tokens.append(("op", ch, m.start(3)))
        pos = m.end()
    return tokens


class ExprParser:
    __slots__ = ('text', 'tokens', 'i', 'from_int', 'from_name')

    def __init__(self, text: str, from_int: Callable[[int], object], from_name: Callable[[str, int], object]):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.from_int = from_int
        self.from_name = from_name

    def parse(self):
        if not self.tokens:
            raise PolySyntaxError("empty expression", 0)
        value = self._expr()
        if self.i < len(self.tokens):
            kind, tok, pos = self.tokens[self.i]
            if kind != "op" or tok == "(":
                raise PolySyntaxError(f"implicit multiplication before '{tok}'", pos)
            raise PolySyntaxError(f"unexpected '{tok}'", pos)
        return value

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _end_pos(self) -> int:
        return len(self.text)

    def _expr(self):
        value = self._term()
        while True:
            tok = self._peek()
            if tok and tok[0] == "op" and tok[1] in "+-":
                self.i += 1
                rhs = self._term()
                value = value + rhs if tok[1] == "+" else value - rhs
            else:
                return value

    def _term(self):
        value = self._factor()
        while True:
            tok = self._peek()
            if tok and tok[0] == "op" and tok[1] == "*":
                self.i += 1
                value = value * self._factor()
            else:
                return value

    def _factor(self):
        tok = self._peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            self.i += 1
            inner = self._factor()
            return -inner if tok[1] == "-" else inner
        return self._power()

    def _power(self):
        base = self._atom()
        tok = self._peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.i += 1
            exp_tok = self._peek()
            if not exp_tok or exp_tok[0] != "int":
                pos = exp_tok[2] if exp_tok else self._end_pos()
                raise PolySyntaxError("exponent must be a nonnegative integer", pos)
            self.i += 1
            return base ** int(exp_tok[1])
        return base

    def _atom(self):
        tok = self._peek()
        if tok is None:
            raise PolySyntaxError("unexpected end of input", self._end_pos())
        kind, text, pos = tok
        self.i += 1
        if kind == "int":
            return self.from_int(int(text))
        if kind == "name":
            return self.from_name(text, pos)
        if text == "(":
            value = self._expr()
            close = self._peek()
            if not close or close[1] != ")":
                raise PolySyntaxError("missing ')'", close[2] if close else self._end_pos())
            self.i += 1
            return value
        raise PolySyntaxError(f"unexpected '{text}'", pos)
