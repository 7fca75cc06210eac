import pytest

from chromalat.expr import Atom, BinOp, ExprError, eval_expr, evaluate, parse_expr
from chromalat.monoid import (
    LevelSet,
    catalogue3,
    empty_upset,
    enumerate_q,
    full_levels,
    identity_upset,
    star,
    v_of,
)


def test_product_ast():
    e = parse_expr("v{0,1,3} * v{0,2,3}", 4)
    assert isinstance(e, BinOp) and e.op == "*"
    assert e.left.kind == "v" and e.left.sets[0].levels == (0, 1, 3)


def test_thread_atom():
    e = parse_expr("T({0,1,3},{0,2,3})", 4)
    assert isinstance(e, Atom) and e.kind == "T" and len(e.sets) == 2


def test_names_only_at_three():
    assert parse_expr("w1", 3) == Atom("name", name="w1")
    with pytest.raises(ExprError, match="unknown name"):
        parse_expr("w1", 4)


def test_precedence():
    e = parse_expr("u{0} | u{1} * u{2}", 3)
    assert e.op == "|" and e.right.op == "*"
    e2 = parse_expr("(u{0} | u{1}) * u{2}", 3)
    assert e2.op == "*"


def test_square_of_product():
    U = evaluate("v{0,1,3}*v{0,2,3}", 4)
    assert evaluate("(v{0,1,3}*v{0,2,3}) * (v{0,1,3}*v{0,2,3})", 4) == star(U, U)
    assert star(U, U) == v_of(LevelSet.of([0, 3], 4))


def test_identity_and_union():
    assert evaluate("full * v{1}", 3) == v_of(LevelSet.of([1], 3))
    assert evaluate("u{0}|u{1}", 2) == v_of(full_levels(2))
    assert evaluate("empty", 2) == empty_upset(2)
    assert evaluate("full", 2) == identity_upset(2)


def test_generated_atoms():
    assert evaluate("⟨{0},{3},{1,2}⟩", 4) == evaluate("<{0},{3},{1,2}>", 4)
    assert evaluate("⟨⟩", 3) == empty_upset(3)
    assert evaluate("⟨{}⟩", 3) == identity_upset(3)


def test_thread_semantics():
    assert evaluate("T({0,1,3},{0,2,3})", 4) == evaluate("v{0,1,3}*v{0,2,3}", 4)


@pytest.mark.parametrize(
    "text,pos",
    [
        ("u{0", 3),
        ("u{5}", 2),
        ("v{0} *", 6),
        ("v{0} )", 5),
        ("q", 0),
        ("u{0,}", 4),
        ("T({0}", 5),
    ],
)
def test_errors_carry_position(text, pos):
    with pytest.raises(ExprError) as info:
        parse_expr(text, 3)
    assert info.value.pos == pos
    assert f"at position {pos}" in str(info.value)


def test_out_of_range_message():
    with pytest.raises(ExprError, match=r"outside 0\.\.2"):
        parse_expr("u{3}", 3)


def test_empty_input():
    with pytest.raises(ExprError):
        parse_expr("   ", 3)


@pytest.mark.parametrize("n", range(4))
def test_render_round_trip(n):
    for U in enumerate_q(n):
        assert evaluate(str(U), n) == U


def test_catalogue_names_evaluate():
    for name, U in catalogue3().items():
        assert evaluate(name, 3) == U
        assert eval_expr(parse_expr(f"({name})", 3), 3) == U
