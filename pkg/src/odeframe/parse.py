"""Text front-end: expression grammar, corpus files, renderers.

Grammar (unambiguous, standard precedence ^ > unary- > * / > + -):

    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/' | '\\cdot') unary)*
    unary    := '-' unary | power
    power    := primary ('^' exponent)?
    exponent := ['-'] INT | '{' ['-'] INT '}'
    primary  := INT | IDENT | '(' expr ')' | '\\frac' '{' expr '}' '{' expr '}'

Identifiers are x, u, p, q with the classical aliases y -> u, y1 -> p,
y2 -> q.  Rational literals are integers and quotients a/b; decimal
literals are rejected to preserve exactness.  `*` is mandatory between
factors.  The \\frac/\\cdot forms exist so the LaTeX renderer output
round-trips through this same parser.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, TextIO, Tuple, Union

from . import coords
from .expr import Expr, Symbol, ZERO, as_expr

_ALIASES = {
    "x": coords.x,
    "u": coords.u,
    "p": coords.p,
    "q": coords.q,
    "y": coords.u,
    "y1": coords.p,
    "y2": coords.q,
}

_TRANSCENDENTAL = {
    "sin", "cos", "tan", "cot", "sec", "csc", "exp", "log", "ln",
    "sqrt", "sinh", "cosh", "tanh", "asin", "acos", "atan",
}


class ParseError(ValueError):
    """Syntax or lexical error, carrying the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


@dataclass(frozen=True)
class OdeInput:
    """A named third-order ODE right-hand side in the variables x,u,p,q."""

    name: Optional[str]
    rhs: Expr
    source_text: str

    def __post_init__(self) -> None:
        allowed = set(coords.BASE4)
        extra = [s.name for s in self.rhs.symbols() if s not in allowed]
        if extra:
            raise ParseError(
                "right-hand side uses symbols outside x,u,p,q: "
                + ", ".join(extra),
                0,
            )


# ---------------------------------------------------------------------------
# lexer

_Token = Tuple[str, str, int]  # (kind, text, byte offset)


def _lex(text: str) -> List[_Token]:
    toks: List[_Token] = []
    i = 0
    off = 0
    n = len(text)
    while i < n:
        ch = text[i]
        size = len(ch.encode("utf-8"))
        if ch in " \t\r\n":
            i += 1
            off += size
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                raise ParseError("decimal literals are not accepted", off)
            toks.append(("int", text[i:j], off))
            off += len(text[i:j].encode("utf-8"))
            i = j
            continue
        if ch == ".":
            raise ParseError("decimal literals are not accepted", off)
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("ident", text[i:j], off))
            off += len(text[i:j].encode("utf-8"))
            i = j
            continue
        if ch == "\\":
            j = i + 1
            while j < n and text[j].isalpha():
                j += 1
            word = text[i + 1 : j]
            if word not in ("frac", "cdot"):
                raise ParseError(f"unknown command \\{word}", off)
            toks.append(("cmd", word, off))
            off += len(text[i:j].encode("utf-8"))
            i = j
            continue
        if ch in "+-*/^(){}":
            toks.append((ch, ch, off))
            i += 1
            off += size
            continue
        raise ParseError(f"unexpected character {ch!r}", off)
    toks.append(("eof", "", off))
    return toks


# ---------------------------------------------------------------------------
# parser

class _Parser:
    def __init__(self, toks: List[_Token]):
        self.toks = toks
        self.pos = 0

    def peek(self) -> _Token:
        return self.toks[self.pos]

    def next(self) -> _Token:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return self.next()

    def parse(self) -> Expr:
        e = self.expr()
        tok = self.peek()
        if tok[0] != "eof":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self) -> Expr:
        e = self.unary()
        while True:
            tok = self.peek()
            if tok[0] == "*" or (tok[0] == "cmd" and tok[1] == "cdot"):
                self.next()
                e = e * self.unary()
            elif tok[0] == "/":
                self.next()
                rhs = self.unary()
                if rhs.is_zero():
                    raise ParseError("division by zero", tok[2])
                e = e / rhs
            else:
                return e

    def unary(self) -> Expr:
        if self.peek()[0] == "-":
            self.next()
            return -self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.peek()[0] == "^":
            tok = self.next()
            n = self.exponent()
            if n < 0 and base.is_zero():
                raise ParseError("zero to a negative power", tok[2])
            return base**n
        return base

    def exponent(self) -> int:
        braced = False
        if self.peek()[0] == "{":
            self.next()
            braced = True
        sign = 1
        if self.peek()[0] == "-":
            self.next()
            sign = -1
        tok = self.peek()
        if tok[0] != "int":
            raise ParseError("exponent must be an integer literal", tok[2])
        self.next()
        if braced:
            self.expect("}")
        return sign * int(tok[1])

    def primary(self) -> Expr:
        tok = self.peek()
        if tok[0] == "int":
            self.next()
            return as_expr(int(tok[1]))
        if tok[0] == "ident":
            self.next()
            sym = _ALIASES.get(tok[1])
            if sym is None:
                if tok[1] in _TRANSCENDENTAL:
                    raise ParseError(
                        f"transcendental function {tok[1]!r} is not in the "
                        "rational-expression grammar",
                        tok[2],
                    )
                raise ParseError(f"unknown identifier {tok[1]!r}", tok[2])
            return as_expr(sym)
        if tok[0] == "(":
            self.next()
            e = self.expr()
            self.expect(")")
            return e
        if tok[0] == "cmd" and tok[1] == "frac":
            self.next()
            self.expect("{")
            num = self.expr()
            self.expect("}")
            self.expect("{")
            den = self.expr()
            self.expect("}")
            if den.is_zero():
                raise ParseError("division by zero", tok[2])
            return num / den
        raise ParseError(f"unexpected {tok[1]!r}", tok[2])


def parse_expr(text: str) -> Expr:
    """Parse a rational expression in x,u,p,q into canonical form."""
    return _Parser(_lex(text)).parse()


# ---------------------------------------------------------------------------
# corpus files

class CorpusError(ValueError):
    def __init__(self, problems: List[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


def parse_corpus(source: Union[str, TextIO, Iterable[str]]) -> List[OdeInput]:
    """Parse a corpus: one `name: expression` per line, `#` comments."""
    if isinstance(source, str):
        lines = source.splitlines()
    elif hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        lines = [ln.rstrip("\n") for ln in source]
    out: List[OdeInput] = []
    seen: Dict[str, int] = {}
    problems: List[str] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, body = line.partition(":")
        name = name.strip()
        if not sep or not name:
            problems.append(f"line {lineno}: expected `name: expression`")
            continue
        if name in seen:
            problems.append(
                f"line {lineno}: duplicate name {name!r} "
                f"(first defined on line {seen[name]})"
            )
            continue
        try:
            rhs = parse_expr(body)
            entry = OdeInput(name=name, rhs=rhs, source_text=body.strip())
        except ParseError as exc:
            problems.append(f"line {lineno}: {exc}")
            continue
        seen[name] = lineno
        out.append(entry)
    if problems:
        raise CorpusError(problems)
    return out


# ---------------------------------------------------------------------------
# renderers

def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _mono_text(m, power_l: str = "^", power_r: str = "") -> str:
    from .expr import workspace

    parts = []
    for sid, e in m:
        name = workspace().by_sid(sid).name
        parts.append(name if e == 1 else f"{name}{power_l}{e}{power_r}")
    return "*".join(parts)


def _poly_text(terms) -> str:
    if not terms:
        return "0"
    chunks: List[str] = []
    for i, (m, c) in enumerate(terms):
        neg = c < 0
        mag = -c if neg else c
        if not m:
            body = _frac_str(mag)
        elif mag == 1:
            body = _mono_text(m)
        else:
            body = f"{_frac_str(mag)}*{_mono_text(m)}"
        if i == 0:
            chunks.append(f"-{body}" if neg else body)
        else:
            chunks.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(chunks)


def _poly_is_unit(terms) -> bool:
    return len(terms) == 1 and terms[0][0] == () and terms[0][1] == 1


def _render_text(e: Expr) -> str:
    num = e._num  # noqa: SLF001 - renderer is a kernel friend
    den = e._den
    ntext = _poly_text(num)
    if _poly_is_unit(den):
        return ntext
    dtext = _poly_text(den)
    nwrap = f"({ntext})" if len(num) > 1 else ntext
    if len(num) == 1 and (num[0][1] < 0 or (num[0][0] and num[0][1] != 1)):
        nwrap = f"({ntext})"
    dwrap = f"({dtext})" if len(den) > 1 or den[0][0] else dtext
    return f"{nwrap}/{dwrap}"


def _latex_mono(m) -> str:
    from .expr import workspace

    parts = []
    for sid, e in m:
        name = workspace().by_sid(sid).name
        parts.append(name if e == 1 else f"{name}^{{{e}}}")
    return " \\cdot ".join(parts)


def _latex_poly(terms) -> str:
    if not terms:
        return "0"
    chunks: List[str] = []
    for i, (m, c) in enumerate(terms):
        neg = c < 0
        mag = -c if neg else c
        if mag.denominator != 1:
            coeff = f"\\frac{{{mag.numerator}}}{{{mag.denominator}}}"
        else:
            coeff = str(mag.numerator)
        if not m:
            body = coeff
        elif mag == 1:
            body = _latex_mono(m)
        else:
            body = f"{coeff} \\cdot {_latex_mono(m)}"
        if i == 0:
            chunks.append(f"-{body}" if neg else body)
        else:
            chunks.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(chunks)


def _render_latex(e: Expr) -> str:
    num = e._num  # noqa: SLF001
    den = e._den
    if _poly_is_unit(den):
        return _latex_poly(num)
    return f"\\frac{{{_latex_poly(num)}}}{{{_latex_poly(den)}}}"


def _machine_poly(terms) -> list:
    from .expr import workspace

    out = []
    for m, c in terms:
        mono = [[workspace().by_sid(sid).name, e] for sid, e in m]
        out.append([_frac_str(c), mono])
    return out


def machine_obj(e: Expr) -> dict:
    """Machine-format object for an expression (exact, deterministic)."""
    return {"num": _machine_poly(e._num), "den": _machine_poly(e._den)}  # noqa: SLF001


def _render_machine(e: Expr) -> str:
    return json.dumps(machine_obj(e), separators=(",", ":"))


_RENDERERS = {
    "text": _render_text,
    "latex": _render_latex,
    "machine": _render_machine,
}


def render(e: Expr, fmt: str = "text") -> str:
    """Render to `text`, `latex` or `machine` format.

    text and latex parse back (via parse_expr) to the same canonical Expr
    whenever the expression only involves the input variables x,u,p,q.
    """
    try:
        renderer = _RENDERERS[fmt]
    except KeyError:
        raise ValueError(f"unknown format {fmt!r}") from None
    return renderer(e)
