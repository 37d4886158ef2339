import itertools

import pytest

from factoromata.automata import is_language_equal, make_less_equal
from factoromata.dsl import (
    Add,
    Atom,
    BinOp,
    CompileError,
    Compare,
    Const,
    DslError,
    DslSyntaxError,
    Not,
    PredicateRegistry,
    Quant,
    Sub,
    Var,
    compile_formula,
    evaluate,
    free_vars,
    parse,
    tokenize,
)
from factoromata.oracles import in_sbar
from factoromata.queries import GAPS_QUERY, seed_registry
from factoromata.seeds import factauto


def strip(node):
    """AST without source positions, for structural comparison."""
    if isinstance(node, Var):
        return ("var", node.name)
    if isinstance(node, Const):
        return ("const", node.value)
    if isinstance(node, (Add, Sub)):
        return (type(node).__name__, strip(node.left), strip(node.right))
    if isinstance(node, Compare):
        return ("cmp", node.op, strip(node.left), strip(node.right))
    if isinstance(node, Atom):
        return ("atom", node.name, tuple(strip(a) for a in node.args))
    if isinstance(node, Not):
        return ("not", strip(node.body))
    if isinstance(node, BinOp):
        return (node.op, strip(node.left), strip(node.right))
    if isinstance(node, Quant):
        return (node.kind, node.vars, strip(node.body))
    raise TypeError(node)


def test_lsd_prefix_is_skipped():
    assert strip(parse("?lsd_2 x = y")) == strip(parse("x = y"))


def test_unsupported_directive():
    with pytest.raises(DslSyntaxError) as err:
        parse("?msd_2 x = y")
    assert err.value.pos == 0


def test_quantifier_scope_extends_right():
    f = parse("A j (j < r) => ~$p(j)")
    assert isinstance(f, Quant) and f.body.op == "implies"


def test_precedence():
    f = strip(parse("a = 1 | b = 2 & c = 3 => d = 4 <=> e = 5"))
    assert f[0] == "iff"
    assert f[1][0] == "implies"
    assert f[1][1][0] == "or" and f[1][1][2][0] == "and"


def test_implication_is_right_associative():
    f = parse("a = 1 => b = 1 => c = 1")
    assert f.op == "implies" and f.right.op == "implies"


def test_parenthesised_term_on_left():
    f = parse("(x + 1) - y < z")
    assert isinstance(f, Compare) and isinstance(f.left, Sub)


def test_multiple_quantified_variables():
    f = parse("E x, y x + y = z")
    assert f.vars == ("x", "y")
    assert free_vars(f) == ["z"]


def test_free_vars_order():
    assert free_vars(parse(GAPS_QUERY)) == ["n", "r"]


@pytest.mark.parametrize(
    "text, pos",
    [
        ("x = ", 4),
        ("x # y", 2),
        ("(x = y", 6),
        ("E 1 x = 1", 2),
        ("$p(x", 4),
        ("x y", 2),
    ],
)
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(DslSyntaxError) as err:
        parse(text)
    assert err.value.pos == pos
    assert f"position {pos}" in str(err.value)


def test_tokenize_kinds():
    kinds = [t.kind for t in tokenize("E x $p(x+1) <=> y")]
    assert kinds == ["quant", "ident", "pred", "op", "ident", "op", "num", "op", "op", "ident", "end"]


def test_registry():
    reg = PredicateRegistry()
    calls = []
    reg.add_lazy("p", lambda: calls.append(1) or factauto())
    assert "p" in reg and calls == []
    reg["p"]
    reg["p"]
    assert calls == [1]
    with pytest.raises(DslError):
        reg.add("p", factauto())
    with pytest.raises(CompileError):
        reg["missing"]
    assert reg.names() == ["p"]


def test_compile_errors():
    reg = seed_registry()
    with pytest.raises(CompileError):
        compile_formula("$nope(x)", reg)
    with pytest.raises(CompileError):
        compile_formula("$factauto(x, y)", reg)
    with pytest.raises(CompileError):
        compile_formula("x = y", reg, free=["x"])
    with pytest.raises(CompileError):
        compile_formula("E x x = x", reg)


def test_compile_le_matches_builder():
    d = compile_formula("E y x + y = z", PredicateRegistry(), free=["x", "z"])
    assert is_language_equal(d, make_less_equal(("x", "z")))


def test_relational_subtraction():
    d = compile_formula("x - 3 = y", PredicateRegistry(), free=["x", "y"])
    assert d.accepts(5, 2) and not d.accepts(2, 0) and not d.accepts(1, 0)


def test_repeated_variables():
    d = compile_formula("x + x = y", PredicateRegistry(), free=["x", "y"])
    assert all(d.accepts(x, y) == (2 * x == y) for x in range(20) for y in range(40))
    reg = PredicateRegistry()
    reg.add("le", make_less_equal(("a", "b")))
    d = compile_formula("$le(x, x)", reg)
    assert all(d.accepts(x) for x in range(20))


def test_closed_subformula_constant_folding():
    reg = seed_registry()
    d = compile_formula("x = x & (E y y = 10 & $factauto(y))", reg)
    assert all(d.accepts(x) for x in range(10))
    d = compile_formula("x < 3 & (A y $factauto(y))", reg)
    assert not any(d.accepts(x) for x in range(10))


SAMPLE_FORMULAS = [
    "x + y = z",
    "x - y = z",
    "~(x < y) | z = 1",
    "E t (t < x & $factauto(t + y))",
    "A t (t < x => ~$factauto(y + t)) & z >= 2",
    "$factauto(x) <=> $factauto(y + z)",
    "x != y => (E t t + t = z)",
]


@pytest.mark.parametrize("text", SAMPLE_FORMULAS)
def test_compiler_matches_interpreter(text):
    reg = seed_registry()
    f = parse(text)
    free = free_vars(f)
    d = compile_formula(f, reg, free=free)
    preds = {"factauto": in_sbar}
    bound = 12
    for vals in itertools.product(range(bound), repeat=len(free)):
        env = dict(zip(free, vals))
        # quantified witnesses stay below 3 * bound for these formulas
        assert d.accepts(*vals) == evaluate(f, env, preds, 3 * bound), (text, env)


def test_gaps_formula_against_interpreter_small():
    reg = seed_registry()
    d = compile_formula(GAPS_QUERY, reg, free=["n", "r"])
    f = parse(GAPS_QUERY)
    preds = {"factauto": in_sbar}
    for n in range(0, 64):
        for r in range(0, 64):
            assert d.accepts(n, r) == evaluate(f, {"n": n, "r": r}, preds, r + 1)
