"""Lexing, parsing, precedence, sugar, definitions, and error positions."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CORPUS_NAMES, corpus_expr, corpus_source
from foldcost.harness import gen_typed_term
from foldcost.parser import ParseError, parse, tokenize
from foldcost.syntax import (
    BOOL,
    INT,
    INT_LIST,
    INT_MAX,
    INT_MIN,
    App,
    Arith,
    ArrowTy,
    BoolLit,
    Case,
    Cons,
    Fold,
    If,
    IntLit,
    Lam,
    Nil,
    Rel,
    Var,
    to_source,
)

# ---------------------------------------------------------------- round trips


def test_roundtrip_corpus():
    for name in CORPUS_NAMES:
        e = corpus_expr(name)
        assert parse(to_source(e)) == e


@settings(deadline=None, max_examples=150)
@given(st.integers(0, 2**32), st.sampled_from([INT, BOOL, INT_LIST, ArrowTy(INT, INT_LIST)]))
def test_roundtrip_generated(seed, ty):
    e = gen_typed_term(seed, depth=4, ty=ty)
    assert parse(to_source(e)) == e


def test_negative_literal_roundtrip():
    # A bare negative rhs would lex "--" as a comment, so the printer
    # parenthesizes negative literals.
    e = Arith("-", IntLit(1), IntLit(-5))
    assert to_source(e) == "1 - (-5)"
    assert parse(to_source(e)) == e


# ---------------------------------------------------------------- precedence


def test_mul_binds_tighter_than_add():
    assert parse("1 + 2 * 3") == Arith("+", IntLit(1), Arith("*", IntLit(2), IntLit(3)))
    assert parse("(1 + 2) * 3") == Arith("*", Arith("+", IntLit(1), IntLit(2)), IntLit(3))


def test_add_left_associative():
    assert parse("1 - 2 - 3") == Arith("-", Arith("-", IntLit(1), IntLit(2)), IntLit(3))


def test_cons_right_associative_and_looser_than_add():
    assert parse("0 :: 1 :: nil") == Cons(IntLit(0), Cons(IntLit(1), Nil()))
    assert parse("1 + 2 :: nil") == Cons(Arith("+", IntLit(1), IntLit(2)), Nil())


def test_rel_non_associative():
    assert parse("1 < 2") == Rel("<", IntLit(1), IntLit(2))
    with pytest.raises(ParseError):
        parse("1 < 2 < 3")


def test_rel_compares_cons_operands():
    assert parse("x :: nil = nil") == Rel("=", Cons(Var("x"), Nil()), Nil())


def test_application_left_associative_and_tightest():
    assert parse("f x y") == App(App(Var("f"), Var("x")), Var("y"))
    assert parse("f x + g y") == Arith("+", App(Var("f"), Var("x")), App(Var("g"), Var("y")))
    assert parse("f x * g y") == Arith("*", App(Var("f"), Var("x")), App(Var("g"), Var("y")))


def test_minus_after_atom_is_subtraction():
    # "-" only starts a literal in atom position, so this is not f(-5).
    assert parse("f - 5") == Arith("-", Var("f"), IntLit(5))
    assert parse("f (-5)") == App(Var("f"), IntLit(-5))


def test_if_and_lambda_extend_right():
    assert parse("if true then 1 else 2 + 3") == If(
        BoolLit(True), IntLit(1), Arith("+", IntLit(2), IntLit(3)))
    assert parse("\\x:int. x + 1") == Lam("x", INT, Arith("+", Var("x"), IntLit(1)))


# ---------------------------------------------------------------- forms and sugar


def test_list_sugar():
    assert parse("[]") == Nil()
    assert parse("[1, 2, 3]") == Cons(IntLit(1), Cons(IntLit(2), Cons(IntLit(3), Nil())))
    assert parse("[1 + 2]") == Cons(Arith("+", IntLit(1), IntLit(2)), Nil())


def test_case_form():
    assert parse("case xs of (0, [h, t] h)") == Case(
        Var("xs"), IntLit(0), "h", "t", Var("h"))


def test_fold_form():
    assert parse("fold xs of (nil, [h, t, w] h :: w)") == Fold(
        Var("xs"), Nil(), "h", "t", "w", Cons(Var("h"), Var("w")))


def test_type_annotations():
    assert parse("\\xs:int*. xs") == Lam("xs", INT_LIST, Var("xs"))
    assert parse("\\f:int -> int -> int. f").param_ty == ArrowTy(INT, ArrowTy(INT, INT))
    assert parse("\\f:(int -> int) -> bool. f").param_ty == ArrowTy(ArrowTy(INT, INT), BOOL)


def test_comments_run_to_end_of_line():
    assert parse("1 -- the rest is ignored\n+ 2") == Arith("+", IntLit(1), IntLit(2))
    assert [t.kind for t in tokenize("x--3")] == ["ident", "eof"]


def test_int_literal_bounds():
    assert parse(str(INT_MAX)) == IntLit(INT_MAX)
    assert parse(f"({INT_MIN})") == IntLit(INT_MIN)
    with pytest.raises(ParseError, match="64-bit"):
        parse(str(INT_MAX + 1))
    with pytest.raises(ParseError, match="64-bit"):
        parse(f"({INT_MIN - 1})")


# ---------------------------------------------------------------- definitions


def test_defs_expand_in_order():
    e = parse("def two = 2\ndef four = two + two\nfour * two")
    assert e == Arith("*", Arith("+", IntLit(2), IntLit(2)), IntLit(2))


def test_defs_are_not_recursive():
    # A definition cannot see itself; the occurrence stays a free variable.
    assert parse("def f = f\nf") == Var("f")


def test_def_does_not_cross_binders():
    e = parse("def n = 5\n\\n:int. n")
    assert e == Lam("n", INT, Var("n"))


def test_application_stops_at_line_break_outside_groups():
    # Top level: the new line ends the application, leaving a stray atom.
    with pytest.raises(ParseError, match="after expression"):
        parse("f\n5")
    # Inside a group the next `,` or closer delimits, so line breaks are free.
    assert parse("(f\n 5)") == App(Var("f"), IntLit(5))
    assert parse("case xs of (f\n 1, [h, t] 0)").nil_branch == App(Var("f"), IntLit(1))


def test_corpus_def_program_parses():
    # ins_sort is written with a def; its expansion contains the fold twice.
    e = corpus_expr("ins_sort")
    assert isinstance(e, Lam)
    assert "def" in corpus_source("ins_sort")


# ---------------------------------------------------------------- errors


def test_error_reports_line_and_column():
    with pytest.raises(ParseError, match="end of input") as exc:
        parse("(1 + ")
    assert exc.value.line == 1 and exc.value.col == 6

    with pytest.raises(ParseError) as exc:
        parse("1 +\n<")
    assert exc.value.line == 2 and exc.value.col == 1


def test_reserved_words_are_not_identifiers():
    with pytest.raises(ParseError, match="reserved word"):
        parse("\\if:int. 1")


def test_unexpected_character():
    with pytest.raises(ParseError, match="unexpected character '@'") as exc:
        parse("1 @ 2")
    assert exc.value.col == 3


def test_keyword_in_expression_position():
    with pytest.raises(ParseError, match="expected an expression"):
        parse("then")


def test_trailing_tokens_rejected():
    with pytest.raises(ParseError, match="after expression"):
        parse("1 2 )")
