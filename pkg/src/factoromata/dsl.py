"""A small first-order query language over natural numbers.

Syntax (a strict subset of Walnut's, with the ``?lsd_2`` prefix allowed)::

    formula  := iff
    iff      := implies ("<=>" implies)*
    implies  := or ("=>" implies)?
    or       := and ("|" and)*
    and      := unary ("&" unary)*
    unary    := "~" unary | ("E" | "A") var ("," var)* iff | primary
    primary  := "(" formula ")" | "$" name "(" term ("," term)* ")"
              | term relop term
    term     := atom (("+" | "-") atom)*
    atom     := var | number | "(" term ")"
    relop    := "=" | "!=" | "<" | "<=" | ">" | ">="

A quantifier's body extends as far right as possible, so ``Aj (j < r-1) =>
~$p(j)`` quantifies the whole implication.  Subtraction is natural-number
subtraction expressed relationally: ``a - b`` denotes the ``t`` with
``t + b = a`` and has no value when ``b > a``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Callable, Union

from .automata import (
    Dfa,
    align_tracks,
    complement,
    dead_states,
    determinize,
    make_add,
    make_const,
    make_empty,
    make_eq,
    make_less_equal,
    make_less_than,
    make_universal,
    minimize,
    product,
    project,
    rename_tracks,
)


class DslError(ValueError):
    pass


class DslSyntaxError(DslError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


class CompileError(DslError):
    pass


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Var:
    name: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Const:
    value: int
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Sub:
    left: "Term"
    right: "Term"
    pos: int = field(default=0, compare=False)


Term = Union[Var, Const, Add, Sub]


@dataclass(frozen=True)
class Compare:
    op: str
    left: Term
    right: Term
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Atom:
    name: str
    args: tuple
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Not:
    body: "Formula"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str  # and, or, implies, iff
    left: "Formula"
    right: "Formula"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Quant:
    kind: str  # "E" or "A"
    vars: tuple
    body: "Formula"
    pos: int = field(default=0, compare=False)


Formula = Union[Compare, Atom, Not, BinOp, Quant]


def Exists(vars, body) -> Quant:
    return Quant("E", tuple(vars), body)


def Forall(vars, body) -> Quant:
    return Quant("A", tuple(vars), body)


# ---------------------------------------------------------------------------
# lexer and parser

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<pred>\$[A-Za-z_][A-Za-z0-9_]*)
  | (?P<quant>[AE])
  | (?P<ident>[a-z_][A-Za-z0-9_]*)
  | (?P<op><=>|=>|<=|>=|!=|[=<>&|~+\-(),])
    """,
    re.VERBOSE,
)

_RELOPS = {"=", "!=", "<", "<=", ">", ">="}


@dataclass
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    pos = 0
    body = text
    m = re.match(r"\s*\?lsd_2\b", body)
    if m:
        pos = m.end()
    out = []
    while pos < len(body):
        m = _TOKEN.match(body, pos)
        if not m:
            ch = body[pos]
            if ch == "?":
                raise DslSyntaxError(f"unsupported directive {body[pos:].split()[0]!r}", pos, text)
            raise DslSyntaxError(f"unexpected character {ch!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), pos))
        pos = m.end()
    out.append(Token("end", "", len(body)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    # helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        where = "end of input" if tok.kind == "end" else repr(tok.text)
        raise DslSyntaxError(f"{message} (found {where})", tok.pos, self.text)

    def accept(self, text: str) -> Token | None:
        if self.tok.kind == "op" and self.tok.text == text:
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, text: str) -> Token:
        t = self.accept(text)
        if t is None:
            self.error(f"expected {text!r}")
        return t

    # grammar
    def parse(self) -> Formula:
        f = self.iff()
        if self.tok.kind != "end":
            self.error("unexpected trailing input")
        return f

    def iff(self) -> Formula:
        left = self.implies()
        while (t := self.accept("<=>")):
            left = BinOp("iff", left, self.implies(), t.pos)
        return left

    def implies(self) -> Formula:
        left = self.disj()
        if (t := self.accept("=>")):
            return BinOp("implies", left, self.implies(), t.pos)
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while (t := self.accept("|")):
            left = BinOp("or", left, self.conj(), t.pos)
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while (t := self.accept("&")):
            left = BinOp("and", left, self.unary(), t.pos)
        return left

    def unary(self) -> Formula:
        if (t := self.accept("~")):
            return Not(self.unary(), t.pos)
        if self.tok.kind == "quant":
            t = self.tok
            self.i += 1
            names = [self.variable()]
            while self.accept(","):
                names.append(self.variable())
            return Quant(t.text, tuple(names), self.iff(), t.pos)
        return self.primary()

    def variable(self) -> str:
        if self.tok.kind != "ident":
            self.error("expected a variable name")
        name = self.tok.text
        self.i += 1
        return name

    def primary(self) -> Formula:
        tok = self.tok
        if tok.kind == "pred":
            self.i += 1
            self.expect("(")
            args = [self.term()]
            while self.accept(","):
                args.append(self.term())
            self.expect(")")
            return Atom(tok.text[1:], tuple(args), tok.pos)
        if tok.kind == "op" and tok.text == "(":
            # either a parenthesised formula or a comparison whose left term starts with "("
            save = self.i
            try:
                return self.comparison()
            except DslSyntaxError:
                self.i = save
            self.i += 1
            f = self.iff()
            self.expect(")")
            return f
        return self.comparison()

    def comparison(self) -> Compare:
        start = self.tok
        left = self.term()
        op = self.tok
        if op.kind != "op" or op.text not in _RELOPS:
            self.error("expected a comparison operator")
        self.i += 1
        return Compare(op.text, left, self.term(), start.pos)

    def term(self) -> Term:
        left = self.term_atom()
        while True:
            if (t := self.accept("+")):
                left = Add(left, self.term_atom(), t.pos)
            elif (t := self.accept("-")):
                left = Sub(left, self.term_atom(), t.pos)
            else:
                return left

    def term_atom(self) -> Term:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return Const(int(tok.text), tok.pos)
        if tok.kind == "ident":
            self.i += 1
            return Var(tok.text, tok.pos)
        if self.accept("("):
            t = self.term()
            self.expect(")")
            return t
        self.error("expected a term")


def parse(text: str) -> Formula:
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# variables


def term_vars(t: Term, out: list):
    if isinstance(t, Var):
        if t.name not in out:
            out.append(t.name)
    elif isinstance(t, (Add, Sub)):
        term_vars(t.left, out)
        term_vars(t.right, out)


def free_vars(f: Formula) -> list[str]:
    """Free variables in order of first appearance."""
    out: list[str] = []

    def walk(node, bound):
        if isinstance(node, Compare):
            names = []
            term_vars(node.left, names)
            term_vars(node.right, names)
            out.extend(v for v in names if v not in bound and v not in out)
        elif isinstance(node, Atom):
            names = []
            for a in node.args:
                term_vars(a, names)
            out.extend(v for v in names if v not in bound and v not in out)
        elif isinstance(node, Not):
            walk(node.body, bound)
        elif isinstance(node, BinOp):
            walk(node.left, bound)
            walk(node.right, bound)
        elif isinstance(node, Quant):
            walk(node.body, bound | set(node.vars))

    walk(f, frozenset())
    return out


# ---------------------------------------------------------------------------
# registry


class PredicateRegistry:
    """Named predicate automata, optionally built on first use."""

    def __init__(self, automata: dict[str, Dfa] | None = None):
        self._automata: dict[str, Dfa] = {}
        self._factories: dict[str, Callable[[], Dfa]] = {}
        for name, d in (automata or {}).items():
            self.add(name, d)

    def add(self, name: str, d: Dfa):
        if name in self._automata or name in self._factories:
            raise DslError(f"predicate {name!r} already registered")
        self._automata[name] = d

    def add_lazy(self, name: str, factory: Callable[[], Dfa]):
        if name in self._automata or name in self._factories:
            raise DslError(f"predicate {name!r} already registered")
        self._factories[name] = factory

    def __contains__(self, name: str) -> bool:
        return name in self._automata or name in self._factories

    def __getitem__(self, name: str) -> Dfa:
        if name not in self._automata:
            if name not in self._factories:
                raise CompileError(f"unknown predicate ${name}")
            self._automata[name] = self._factories.pop(name)()
        return self._automata[name]

    def names(self) -> list[str]:
        return sorted([*self._automata, *self._factories])


# ---------------------------------------------------------------------------
# compiler


class _Compiler:
    def __init__(self, registry: PredicateRegistry, max_states: int | None):
        self.registry = registry
        self.max_states = max_states
        self.counter = itertools.count()

    def fresh(self) -> str:
        return f"%{next(self.counter)}"

    # result: a Dfa, or a bool for closed subformulas
    def exists(self, d, var: str):
        if isinstance(d, bool) or var not in d.tracks:
            return d
        if d.width == 1:
            return minimize(d).initial not in dead_states(minimize(d))
        return minimize(determinize(project(d, var), self.max_states))

    def combine(self, a, b, op: str):
        if isinstance(a, bool) and isinstance(b, bool):
            return {"and": a and b, "or": a or b, "implies": (not a) or b, "iff": a == b}[op]
        if isinstance(a, bool) or isinstance(b, bool):
            d = b if isinstance(a, bool) else a
            const = make_universal(d.tracks) if (a if isinstance(a, bool) else b) else make_empty(d.tracks)
            a, b = (const, d) if isinstance(a, bool) else (d, const)
        return minimize(product(a, b, op))

    def term_var(self, t: Term, constraints: list, fresh: list) -> str:
        if isinstance(t, Var):
            return t.name
        v = self.fresh()
        fresh.append(v)
        if isinstance(t, Const):
            constraints.append(make_const(t.value, v))
        elif isinstance(t, Add):
            a = self.term_var(t.left, constraints, fresh)
            b = self.term_var(t.right, constraints, fresh)
            constraints.append(self.add_relation(a, b, v))
        elif isinstance(t, Sub):
            a = self.term_var(t.left, constraints, fresh)
            b = self.term_var(t.right, constraints, fresh)
            constraints.append(self.add_relation(v, b, a))
        else:  # pragma: no cover
            raise CompileError(f"unknown term {t!r}")
        return v

    def add_relation(self, a: str, b: str, c: str) -> Dfa:
        """a + b = c, tolerating repeated variable names."""
        names = [a, b, c]
        if len(set(names)) == 3:
            return make_add((a, b, c))
        # x + x = y and friends: build on distinct tracks then identify them
        tracks = [self.fresh() for _ in names]
        d = make_add(tracks)
        for t, n in zip(tracks, names):
            d = minimize(product(d, make_eq((t, n)), "and"))
        for t in tracks:
            d = self.exists(d, t)
        return d

    def with_constraints(self, core: Dfa, constraints: list, fresh: list):
        d = core
        for c in constraints:
            d = minimize(product(d, c, "and"))
        for v in reversed(fresh):
            d = self.exists(d, v)
        return d

    def compile(self, f: Formula):
        if isinstance(f, Compare):
            constraints, fresh = [], []
            a = self.term_var(f.left, constraints, fresh)
            b = self.term_var(f.right, constraints, fresh)
            if a == b:
                holds = f.op in ("=", "<=", ">=")
                core = make_universal((a,)) if holds else make_empty((a,))
            else:
                core = {
                    "=": lambda: make_eq((a, b)),
                    "!=": lambda: complement(make_eq((a, b))),
                    "<": lambda: make_less_than((a, b)),
                    "<=": lambda: make_less_equal((a, b)),
                    ">": lambda: make_less_than((b, a)),
                    ">=": lambda: make_less_equal((b, a)),
                }[f.op]()
            return self.with_constraints(core, constraints, fresh)
        if isinstance(f, Atom):
            if f.name not in self.registry:
                raise CompileError(f"unknown predicate ${f.name} at position {f.pos}")
            pred = self.registry[f.name]
            if len(f.args) != pred.width:
                raise CompileError(
                    f"${f.name} takes {pred.width} argument(s), got {len(f.args)} at position {f.pos}"
                )
            constraints, fresh = [], []
            names = []
            for arg in f.args:
                if isinstance(arg, Var) and arg.name not in names:
                    names.append(arg.name)
                    continue
                if isinstance(arg, Var):  # repeated variable
                    v = self.fresh()
                    fresh.append(v)
                    constraints.append(make_eq((v, arg.name)))
                    names.append(v)
                else:
                    names.append(self.term_var(arg, constraints, fresh))
            core = rename_tracks(pred, dict(zip(pred.tracks, names)))
            return self.with_constraints(core, constraints, fresh)
        if isinstance(f, Not):
            body = self.compile(f.body)
            return (not body) if isinstance(body, bool) else complement(body)
        if isinstance(f, BinOp):
            return self.combine(self.compile(f.left), self.compile(f.right), f.op)
        if isinstance(f, Quant):
            body = self.compile(f.body)
            if f.kind == "E":
                for v in f.vars:
                    body = self.exists(body, v)
                return body
            # universal quantification is compiled as not-exists-not
            body = (not body) if isinstance(body, bool) else complement(body)
            for v in f.vars:
                body = self.exists(body, v)
            return (not body) if isinstance(body, bool) else complement(body)
        raise CompileError(f"unknown formula node {f!r}")  # pragma: no cover


def compile_formula(
    f: Formula | str,
    registry: PredicateRegistry,
    free: list[str] | None = None,
    max_states: int | None = None,
) -> Dfa:
    """Minimal DFA accepting exactly the satisfying assignments of ``f``.

    Tracks follow ``free`` (default: order of first appearance).
    """
    if isinstance(f, str):
        f = parse(f)
    fv = free_vars(f)
    if free is None:
        free = fv
    elif sorted(free) != sorted(fv):
        raise CompileError(f"free variables are {fv}, not {list(free)}")
    if not free:
        raise CompileError("formula has no free variables")
    result = _Compiler(registry, max_states).compile(f)
    if isinstance(result, bool):
        result = make_universal(free) if result else make_empty(free)
    missing = [v for v in free if v not in result.tracks]
    for v in missing:
        # a free variable the formula does not constrain after simplification
        result = product(result, make_universal((v,)), "and")
    return minimize(align_tracks(result, free))


# ---------------------------------------------------------------------------
# brute-force interpreter


def eval_term(t: Term, env: dict[str, int]):
    """Value of a term, or None when a subtraction goes negative."""
    if isinstance(t, Var):
        if t.name not in env:
            raise CompileError(f"unbound variable {t.name}")
        return env[t.name]
    if isinstance(t, Const):
        return t.value
    a, b = eval_term(t.left, env), eval_term(t.right, env)
    if a is None or b is None:
        return None
    if isinstance(t, Add):
        return a + b
    return a - b if a >= b else None


_CMP = {
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def evaluate(f: Formula, env: dict[str, int], predicates: dict[str, Callable[..., bool]], bound: int) -> bool:
    """Direct evaluation with quantifiers ranging over 0..bound-1.

    Agrees with the compiled automaton whenever every quantifier's relevant
    witnesses lie below ``bound``.
    """
    if isinstance(f, Compare):
        # t = a - b is relational: no witness t exists when b > a
        a, b = eval_term(f.left, env), eval_term(f.right, env)
        return a is not None and b is not None and _CMP[f.op](a, b)
    if isinstance(f, Atom):
        args = [eval_term(a, env) for a in f.args]
        return None not in args and bool(predicates[f.name](*args))
    if isinstance(f, Not):
        return not evaluate(f.body, env, predicates, bound)
    if isinstance(f, BinOp):
        a = evaluate(f.left, env, predicates, bound)
        if f.op == "and" and not a:
            return False
        if f.op == "or" and a:
            return True
        if f.op == "implies" and not a:
            return True
        b = evaluate(f.right, env, predicates, bound)
        return b if f.op != "iff" else a == b
    if isinstance(f, Quant):
        pick = any if f.kind == "E" else all
        return pick(
            evaluate(f.body, {**env, **dict(zip(f.vars, vals))}, predicates, bound)
            for vals in itertools.product(range(bound), repeat=len(f.vars))
        )
    raise CompileError(f"unknown formula node {f!r}")
