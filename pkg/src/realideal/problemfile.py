"""Problem-file parsing.

One text format serves both POP mode (a ``minimize`` line is present) and
set mode.  Grammar (see README for the EBNF):

    vars x y z;
    minimize <poly>;                 # optional
    <poly> >= 0;   <poly> > 0;   <poly> = 0;
    or;                              # starts a new disjunct of S
    hint component: <poly>, <poly>;
    order 2..4;                      # or a single integer

Equations outside any ``or`` section generate the ideal; inequalities
outside are shared by every disjunct.  Decimal literals are captured
exactly as rationals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .groebner import Ideal
from .mpoly import MPoly, Ring
from .semialg import SemialgebraicSet, SignCondition


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<comment>#[^\n]*)|(?P<num>\d+\.\d+|\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>>=|=|>|\.\.|[-+*^();:,])"
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[Token]:
    out = []
    line = 1
    col = 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind not in ("ws", "comment"):
            out.append(Token(kind, tok, line, col))
        newlines = tok.count("\n")
        if newlines:
            line += newlines
            col = len(tok) - tok.rfind("\n")
        else:
            col += len(tok)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


@dataclass
class ProblemFile:
    ring: Ring
    objective: MPoly | None
    ideal_gens: list[MPoly]
    global_inequalities: list[tuple[MPoly, str]]
    disjuncts: list[list[tuple[MPoly, str]]]  # extra conjuncts beyond the globals
    hints: list[list[MPoly]]
    order_range: tuple[int, int] | None

    @property
    def is_pop(self) -> bool:
        return self.objective is not None

    def semialgebraic_set(self) -> SemialgebraicSet:
        base = [SignCondition(p, rel) for p, rel in self.global_inequalities]
        if not self.disjuncts:
            return SemialgebraicSet(self.ring, (tuple(base),))
        conjuncts = []
        for extra in self.disjuncts:
            conds = base + [SignCondition(p, rel) for p, rel in extra]
            conjuncts.append(tuple(conds))
        return SemialgebraicSet(self.ring, tuple(conjuncts))

    def ideal(self) -> Ideal | None:
        if not self.ideal_gens:
            return None
        return Ideal(list(self.ideal_gens), ring=self.ring)

    def hint_or_none(self):
        return [list(h) for h in self.hints] if self.hints else None

    def orders(self, k0: int, max_order: int | None = None) -> list[int]:
        if self.order_range is not None:
            lo, hi = self.order_range
            lo = max(lo, k0)
        else:
            lo, hi = k0, k0 + 2
        if max_order is not None:
            hi = max_order
        return list(range(lo, max(lo, hi) + 1))

    def render(self) -> str:
        lines = ["vars " + " ".join(self.ring.vars) + ";"]
        if self.objective is not None:
            lines.append(f"minimize {self.objective.render()};")
        for p in self.ideal_gens:
            lines.append(f"{p.render()} = 0;")
        for p, rel in self.global_inequalities:
            lines.append(f"{p.render()} {rel} 0;")
        for extra in self.disjuncts:
            lines.append("or;")
            for p, rel in extra:
                lines.append(f"{p.render()} {rel} 0;")
        for h in self.hints:
            lines.append("hint component: " + ", ".join(p.render() for p in h) + ";")
        if self.order_range:
            lines.append(f"order {self.order_range[0]}..{self.order_range[1]};")
        return "\n".join(lines) + "\n"


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.ring: Ring | None = None

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.next()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text!r}", t.line, t.column)
        return t

    def fail(self, message: str):
        t = self.peek()
        raise ParseError(message, t.line, t.column)

    # expression grammar: expr := term (('+'|'-') term)*
    #                     term := factor (('*' factor) | implicit-adjacency)*
    #                     factor := base ('^' INT)?
    #                     base := NUM | NAME | '(' expr ')' | '-' factor

    def parse_poly(self) -> MPoly:
        p = self.parse_term()
        while self.peek().text in ("+", "-"):
            op = self.next().text
            q = self.parse_term()
            p = p + q if op == "+" else p - q
        return p

    def parse_term(self) -> MPoly:
        p = self.parse_factor()
        while True:
            t = self.peek()
            if t.text == "*":
                self.next()
                p = p * self.parse_factor()
            elif t.kind in ("num", "name") or t.text == "(":
                p = p * self.parse_factor()
            else:
                return p

    def parse_factor(self) -> MPoly:
        base = self.parse_base()
        if self.peek().text == "^":
            self.next()
            t = self.next()
            if t.kind != "num" or "." in t.text:
                raise ParseError("exponent must be a nonnegative integer", t.line, t.column)
            return base ** int(t.text)
        return base

    def parse_base(self) -> MPoly:
        t = self.next()
        if t.text == "-":
            return -self.parse_factor()
        if t.text == "+":
            return self.parse_factor()
        if t.text == "(":
            p = self.parse_poly()
            self.expect(")")
            return p
        if t.kind == "num":
            if "." in t.text:
                whole, frac = t.text.split(".")
                value = Fraction(int(whole + frac), 10 ** len(frac))
            else:
                value = Fraction(int(t.text))
            return self.ring.const(value)
        if t.kind == "name":
            if t.text not in self.ring.vars:
                raise ParseError(f"undeclared variable {t.text!r}", t.line, t.column)
            return self.ring.var(t.text)
        raise ParseError(f"unexpected token {t.text!r} in polynomial", t.line, t.column)


def parse_problem(text: str) -> ProblemFile:
    tokens = _tokenize(text)
    parser = _Parser(tokens)
    if parser.peek().kind == "eof":
        raise ParseError("empty problem file", 1, 1)
    t = parser.next()
    if t.text != "vars":
        raise ParseError("problem file must start with a vars declaration", t.line, t.column)
    names = []
    while parser.peek().kind == "name":
        names.append(parser.next().text)
    parser.expect(";")
    if not names:
        parser.fail("vars declaration lists no variables")
    ring = Ring(tuple(names))
    parser.ring = ring

    objective: MPoly | None = None
    ideal_gens: list[MPoly] = []
    global_ineqs: list[tuple[MPoly, str]] = []
    disjuncts: list[list[tuple[MPoly, str]]] = []
    hints: list[list[MPoly]] = []
    order_range = None
    in_disjunct = False

    while parser.peek().kind != "eof":
        t = parser.peek()
        if t.text == "minimize":
            parser.next()
            if objective is not None:
                raise ParseError("duplicate minimize line", t.line, t.column)
            objective = parser.parse_poly()
            parser.expect(";")
            continue
        if t.text == "or":
            parser.next()
            parser.expect(";")
            disjuncts.append([])
            in_disjunct = True
            continue
        if t.text == "hint":
            parser.next()
            parser.expect("component")
            parser.expect(":")
            gens = [parser.parse_poly()]
            while parser.peek().text == ",":
                parser.next()
                gens.append(parser.parse_poly())
            parser.expect(";")
            hints.append(gens)
            continue
        if t.text == "order":
            parser.next()
            lo_tok = parser.next()
            if lo_tok.kind != "num" or "." in lo_tok.text:
                raise ParseError("order expects an integer", lo_tok.line, lo_tok.column)
            lo = int(lo_tok.text)
            hi = lo
            if parser.peek().text == "..":
                parser.next()
                hi_tok = parser.next()
                if hi_tok.kind != "num" or "." in hi_tok.text:
                    raise ParseError("order range expects an integer", hi_tok.line, hi_tok.column)
                hi = int(hi_tok.text)
            parser.expect(";")
            order_range = (lo, hi)
            continue
        # constraint line
        p = parser.parse_poly()
        rel_tok = parser.next()
        if rel_tok.text not in (">=", ">", "="):
            raise ParseError(
                f"expected a relation (>=, >, =), found {rel_tok.text!r}",
                rel_tok.line,
                rel_tok.column,
            )
        zero_tok = parser.next()
        if zero_tok.kind != "num" or zero_tok.text != "0":
            raise ParseError("constraints must compare against 0", zero_tok.line, zero_tok.column)
        parser.expect(";")
        rel = rel_tok.text
        if in_disjunct:
            disjuncts[-1].append((p, rel))
        elif rel == "=":
            ideal_gens.append(p)
        else:
            global_ineqs.append((p, rel))
    return ProblemFile(
        ring=ring,
        objective=objective,
        ideal_gens=ideal_gens,
        global_inequalities=global_ineqs,
        disjuncts=disjuncts,
        hints=hints,
        order_range=order_range,
    )
