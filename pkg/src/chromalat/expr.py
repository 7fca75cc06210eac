"""A small expression language for up-sets.

Grammar (whitespace is insignificant, ``*`` binds tighter than ``|``)::

    expr  := term { "|" term }
    term  := atom { "*" atom }
    atom  := "u" set | "v" set | "T(" set { "," set } ")"
           | "⟨" [ set { "," set } ] "⟩"          (also "<" ... ">")
           | name | "full" | "empty" | "(" expr ")"
    set   := "{" [ nat { "," nat } ] "}"

``⟨...⟩`` is the up-closure of the listed sets, which is also how up-sets
are printed.  Names are the catalogue entries for ``n* = 3`` only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .monoid import (
    LevelSet,
    ThreadList,
    UpSet,
    catalogue3,
    empty_upset,
    identity_upset,
    star,
    thread_set,
    u_of,
    v_of,
)


class ExprError(ValueError):
    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        super().__init__(message if pos is None else f"{message} at position {pos}")


@dataclass(frozen=True)
class SetLit:
    levels: tuple[int, ...]
    pos: int


@dataclass(frozen=True)
class Atom:
    kind: str  # "u", "v", "T", "gen", "name", "full", "empty"
    sets: tuple[SetLit, ...] = ()
    name: str = ""


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "UpSetExpr"
    right: "UpSetExpr"


UpSetExpr = Union[Atom, BinOp]

_CLOSE = {"⟨": "⟩", "<": ">"}


def _is_name_char(c: str) -> bool:
    return c.isalnum() or c in "_∅"


class _Parser:
    def __init__(self, text: str, n_star: int):
        self.text = text
        self.n = n_star
        self.i = 0

    def skip(self) -> None:
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, c: str) -> None:
        if self.peek() != c:
            found = self.peek() or "end of input"
            raise ExprError(f"expected {c!r}, found {found!r}", self.i)
        self.i += 1

    def parse(self) -> UpSetExpr:
        e = self.expr()
        if self.peek():
            raise ExprError(f"unexpected {self.peek()!r}", self.i)
        return e

    def expr(self) -> UpSetExpr:
        e = self.term()
        while self.peek() == "|":
            self.i += 1
            e = BinOp("|", e, self.term())
        return e

    def term(self) -> UpSetExpr:
        e = self.atom()
        while self.peek() == "*":
            self.i += 1
            e = BinOp("*", e, self.atom())
        return e

    def name(self) -> tuple[str, int]:
        self.skip()
        start = self.i
        while self.i < len(self.text) and _is_name_char(self.text[self.i]):
            self.i += 1
        return self.text[start : self.i], start

    def atom(self) -> UpSetExpr:
        c = self.peek()
        if not c:
            raise ExprError("unexpected end of input", self.i)
        if c == "(":
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        if c in _CLOSE:
            self.i += 1
            sets = []
            if self.peek() != _CLOSE[c]:
                sets.append(self.set_lit())
                while self.peek() == ",":
                    self.i += 1
                    sets.append(self.set_lit())
            self.expect(_CLOSE[c])
            return Atom("gen", tuple(sets))
        if not _is_name_char(c):
            raise ExprError(f"unexpected {c!r}", self.i)
        word, start = self.name()
        nxt = self.peek()
        if word in ("u", "v") and nxt == "{":
            return Atom(word, (self.set_lit(),))
        if word == "T" and nxt == "(":
            self.i += 1
            sets = [self.set_lit()]
            while self.peek() == ",":
                self.i += 1
                sets.append(self.set_lit())
            self.expect(")")
            return Atom("T", tuple(sets))
        if word in ("full", "empty"):
            return Atom(word)
        if self.n == 3 and word in catalogue3():
            return Atom("name", name=word)
        raise ExprError(f"unknown name {word!r}" + ("" if self.n == 3 else " (names exist only for n*=3)"), start)

    def set_lit(self) -> SetLit:
        self.expect("{")
        start = self.i - 1
        levels = []
        if self.peek() != "}":
            levels.append(self.nat())
            while self.peek() == ",":
                self.i += 1
                levels.append(self.nat())
        self.expect("}")
        return SetLit(tuple(levels), start)

    def nat(self) -> int:
        self.skip()
        start = self.i
        while self.i < len(self.text) and self.text[self.i].isdigit():
            self.i += 1
        if start == self.i:
            raise ExprError("expected a level number", start)
        value = int(self.text[start : self.i])
        if value >= self.n:
            raise ExprError(f"level {value} outside 0..{self.n - 1}", start)
        return value


def parse_expr(text: str, n_star: int) -> UpSetExpr:
    return _Parser(text, n_star).parse()


def _level(s: SetLit, n_star: int) -> LevelSet:
    return LevelSet.of(s.levels, n_star)


def eval_expr(e: UpSetExpr, n_star: int) -> UpSet:
    if isinstance(e, BinOp):
        left, right = eval_expr(e.left, n_star), eval_expr(e.right, n_star)
        return star(left, right) if e.op == "*" else left | right
    if e.kind == "u":
        return u_of(_level(e.sets[0], n_star))
    if e.kind == "v":
        return v_of(_level(e.sets[0], n_star))
    if e.kind == "T":
        return thread_set(ThreadList(n_star, tuple(_level(s, n_star) for s in e.sets)))
    if e.kind == "gen":
        return UpSet.generated_by((_level(s, n_star) for s in e.sets), n_star)
    if e.kind == "full":
        return identity_upset(n_star)
    if e.kind == "empty":
        return empty_upset(n_star)
    return catalogue3()[e.name]


def evaluate(text: str, n_star: int) -> UpSet:
    return eval_expr(parse_expr(text, n_star), n_star)
