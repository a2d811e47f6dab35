import json
from fractions import Fraction as F

import pytest

from cdga_config.errors import ExpressionParseError, ParseError
from cdga_config.io import load_algebra_data, parse_coeff, parse_element
from cdga_config.presets import preset_pd

TENSOR = "⊗"


def minimal_doc(**overrides):
    doc = {
        "name": "tiny",
        "formal_dimension": 2,
        "basis": [{"label": "1", "degree": 0}, {"label": "x", "degree": 2}],
        "unit": "1",
        "products": [],
        "differential": [],
        "orientation": {"x": "1"},
        "flags": {"simply_connected": True},
    }
    doc.update(overrides)
    return doc


def test_load_minimal_document():
    algebra, n, epsilon, flags = load_algebra_data(minimal_doc())
    assert n == 2 and algebra.dim() == 2
    assert flags == {"simply_connected": True}
    assert epsilon == {algebra.basis.index("x"): F(1)}


def test_float_coefficients_rejected():
    doc = minimal_doc(orientation={"x": "0.5"})
    with pytest.raises(ParseError):
        load_algebra_data(doc)


def test_basis_above_formal_dimension_rejected():
    doc = minimal_doc(basis=[
        {"label": "1", "degree": 0},
        {"label": "x", "degree": 2},
        {"label": "t", "degree": 3},
    ])
    with pytest.raises(ParseError):
        load_algebra_data(doc)


def test_degree_violating_product_rejected():
    doc = minimal_doc(products=[{
        "left": "x", "right": "x", "result": [{"label": "x", "coeff": "1"}],
    }])
    with pytest.raises(ParseError):
        load_algebra_data(doc)


def test_unknown_label_rejected():
    doc = minimal_doc(orientation={"nope": "1"})
    with pytest.raises(ParseError):
        load_algebra_data(doc)


def test_duplicate_labels_rejected():
    doc = minimal_doc(basis=[
        {"label": "1", "degree": 0}, {"label": "1", "degree": 2},
    ])
    with pytest.raises(ParseError):
        load_algebra_data(doc)


def test_parse_coeff_forms():
    assert parse_coeff("3/4") == F(3, 4)
    assert parse_coeff("-2") == F(-2)
    assert parse_coeff("q", {"q": F(5)}) == F(5)
    assert parse_coeff("-q", {"q": F(5)}) == F(-5)
    assert parse_coeff("3/2*q", {"q": F(4)}) == F(6)
    with pytest.raises(ParseError):
        parse_coeff("1.5")
    with pytest.raises(ParseError):
        parse_coeff("unknown")


# --- the element micro-grammar -------------------------------------------------


def test_parse_element_unicode_and_ascii_tensor(s2xs3):
    square = s2xs3.square
    unicode_form = parse_element(square, f"1*(y{TENSOR}xy) - 2*(xy{TENSOR}y)")
    ascii_form = parse_element(square, "1*(y(x)xy) - 2*(xy(x)y)")
    assert unicode_form == ascii_form
    assert unicode_form.coeffs == {
        square.basis.index(f"y{TENSOR}xy"): F(1),
        square.basis.index(f"xy{TENSOR}y"): F(-2),
    }


def test_parse_element_bare_and_zero(s2xs3):
    alg = s2xs3.algebra
    assert parse_element(alg, "0").is_zero()
    assert parse_element(alg, "y") == alg.element_from_label("y")
    assert parse_element(alg, "3") == alg.one().scale(3)
    assert parse_element(alg, "x + y - x") == alg.element_from_label("y")
    assert parse_element(alg, "1/2*y") == alg.element_from_label("y").scale(F(1, 2))


def test_parse_element_unicode_minus(s2xs3):
    alg = s2xs3.algebra
    assert parse_element(alg, "−y") == alg.element_from_label("y").scale(-1)


def test_parse_element_coefficient_without_star(s2xs3):
    alg = s2xs3.algebra
    assert parse_element(alg, "2(y)") == alg.element_from_label("y").scale(2)


def test_parse_element_errors(s2xs3):
    alg = s2xs3.algebra
    with pytest.raises(ExpressionParseError):
        parse_element(alg, "y +")
    with pytest.raises(ExpressionParseError):
        parse_element(alg, "nosuchlabel")
    with pytest.raises(ExpressionParseError):
        parse_element(alg, "(unclosed")
    with pytest.raises(ExpressionParseError):
        parse_element(alg, "")
