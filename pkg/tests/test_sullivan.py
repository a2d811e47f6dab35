from fractions import Fraction as F

import pytest

from cdga_config.errors import IncompatibleTables
from cdga_config.io import load_table_file
from cdga_config.presets import table_preset_path
from cdga_config.sullivan import (
    Exists,
    GeneratorTable,
    Obstructed,
    Poly,
    check_table,
    classify_example,
    iso_obstruction,
    s2xs3_table,
)

TENSOR = "⊗"


# --- table construction and verification -----------------------------------------


def test_table_shape():
    t = s2xs3_table(1, 0)
    assert [label for label, _ in t.gens] == ["u", "z5", "z61", "z62", "z71", "z72", "h"]
    assert [degree for _, degree in t.gens] == [4, 5, 6, 6, 7, 7, 7]
    assert t.degree_cap == 8


def test_d_squared_zero_on_top_generator():
    t = s2xs3_table(2, -5)
    dd = t.d(t.differentials[-1])  # the degree-7 generator killing u^2
    assert dd == {}


def test_evaluation_is_cochain_on_u():
    t = s2xs3_table(1, 0)
    m_du = t.evaluate(t.differentials[0])
    delta_m_u = t.target.algebra.d(t.evaluation[0])
    assert m_du == delta_m_u


@pytest.mark.parametrize("q,r", [(0, 0), (1, 0), (0, 1), (3, -2), (5, 0)])
def test_check_table_passes(q, r):
    assert check_table(s2xs3_table(q, r)).all_pass


def test_check_table_flags_injected_fault():
    t = s2xs3_table(1, 0)
    # corrupt the first differential by adding x (x) x: the evaluation
    # identity on u must break
    square = t.base
    xx = square.basis.index(f"x{TENSOR}x")
    corrupted = dict(t.differentials[0])
    corrupted[(xx, ())] = F(1)
    t.differentials = (corrupted,) + t.differentials[1:]
    report = check_table(t)
    assert not report.all_pass
    entry = report.checks[0]
    assert not entry.cochain_ok


def test_check_table_empty_is_vacuous(s2xs3):
    table = GeneratorTable(
        base=s2xs3.square,
        gens=(),
        differentials=(),
        target=None,
        evaluation=(),
        degree_cap=8,
        name="empty",
    )
    assert check_table(table).all_pass


def test_table_file_matches_programmatic_table():
    t_file = load_table_file(table_preset_path(), {"q": F(2), "r": F(-3)})
    t_code = s2xs3_table(2, -3)
    assert t_file.gens == t_code.gens
    assert t_file.differentials == t_code.differentials
    for a, b in zip(t_file.evaluation, t_code.evaluation):
        assert a.coeffs == b.coeffs
    assert check_table(t_file).all_pass


# --- the obstruction solver -----------------------------------------------------


def test_identity_pair_exists():
    t = s2xs3_table(1, 0)
    result = iso_obstruction(t, s2xs3_table(1, 0))
    assert isinstance(result, Exists)
    # the witness fixes every generator's leading coefficient to 1
    for label, _ in t.gens:
        assert result.assignment[f"psi({label})[{label}]"] == 1


def test_same_twist_nonzero_exists():
    result = iso_obstruction(s2xs3_table(2, 0), s2xs3_table(2, 0))
    assert isinstance(result, Exists)


def test_distinct_twists_obstructed_with_stage_trace():
    q, r = F(1), F(0)
    result = iso_obstruction(s2xs3_table(q, 0), s2xs3_table(r, 0))
    assert isinstance(result, Obstructed)
    # stage one pins the leading coefficient of the degree-4 generator
    assert "psi(u)[u] = 1" in result.trace
    # the final affine constraint is 0 = +-(q - r)
    assert result.residual_constant in (q - r, r - q)
    assert result.at_generator == "h"


@pytest.mark.parametrize("q,r", [(2, 1), (0, 5), (F(1, 2), F(1, 3))])
def test_distinct_twists_obstructed(q, r):
    result = iso_obstruction(s2xs3_table(q, 0), s2xs3_table(r, 0))
    assert isinstance(result, Obstructed)
    # row normalization may rescale the final constraint, but it vanishes
    # exactly when the twists agree
    assert result.residual_constant != 0
    assert (F(q) - F(r)) != 0


def test_verdict_symmetry():
    pairs = [(0, 1), (1, 1), (2, -1)]
    for q, r in pairs:
        forward = iso_obstruction(s2xs3_table(q, 0), s2xs3_table(r, 0)).verdict
        backward = iso_obstruction(s2xs3_table(r, 0), s2xs3_table(q, 0)).verdict
        assert forward == backward


def test_exists_witness_reverified_against_differentials():
    # substitute the returned assignment back through an independent
    # recomputation of psi(D1 g) - D2(psi g)
    t1 = s2xs3_table(3, 0)
    t2 = s2xs3_table(3, 0)
    result = iso_obstruction(t1, t2)
    assert isinstance(result, Exists)
    images = []
    for g, (label, degree) in enumerate(t1.gens):
        image = {}
        for mono in t2.monomials_of_degree(degree):
            value = result.assignment[f"psi({label})[{t2.monomial_str(mono)}]"]
            if value:
                image[mono] = value
        images.append(image)

    def apply(elem):
        total = {}
        for (b, gens), c in elem.items():
            acc = {(b, ()): c}
            for g in gens:
                acc = t2.mul(acc, images[g])
            total = t2.add(total, acc)
        return total

    for g in range(len(t1.gens)):
        lhs = apply(t1.differentials[g])
        rhs = t2.d(images[g])
        assert t2.add(lhs, t2.scale(rhs, -1)) == {}


def test_incompatible_tables_rejected(s2xs3):
    t = s2xs3_table(0, 0)
    other = GeneratorTable(
        base=s2xs3.square,
        gens=(("u", 4),),
        differentials=(t.differentials[0],),
        target=None,
        evaluation=(None,),
        degree_cap=8,
        name="short",
    )
    with pytest.raises(IncompatibleTables):
        iso_obstruction(t, other)


def test_classify_pair():
    matrix = classify_example([0, 1])
    verdicts = [[r.verdict for r in row] for row in matrix]
    assert verdicts == [["exists", "obstructed"], ["obstructed", "exists"]]


def test_classify_singleton():
    matrix = classify_example([0])
    assert [[r.verdict for r in row] for row in matrix] == [["exists"]]


def test_classify_three_values():
    matrix = classify_example([1, 2, -1])
    for i, row in enumerate(matrix):
        for j, result in enumerate(row):
            expected = "exists" if i == j else "obstructed"
            assert result.verdict == expected


def _nonlinear_table(s2xs3, scale):
    """Generators v (degree 2, closed) and w with D(w) = scale * v^2 (1(x)x):
    the commutator equation for w involves psi(v)^2 while nothing ever pins
    psi(v), so for distinct scales the residual system stays quadratic."""
    square = s2xs3.square
    table = GeneratorTable(
        base=square,
        gens=(("v", 2), ("w", 5)),
        differentials=({}, {}),
        target=None,
        evaluation=(None, None),
        degree_cap=8,
        name="nonlinear",
    )
    one_x = table.base_elt(square.basis.index(f"1{TENSOR}x"))
    d_w = table.mul(table.mul(table.gen_elt(0), table.gen_elt(0)), one_x)
    table.differentials = ({}, table.scale(d_w, F(scale)))
    return table


def test_identity_shortcut_beats_stubborn_quadratic(s2xs3):
    # equal differentials: the identity is verified and returned even
    # though the staged affine system alone could not resolve psi(v)^2
    result = iso_obstruction(_nonlinear_table(s2xs3, 1), _nonlinear_table(s2xs3, 1))
    assert isinstance(result, Exists)


def test_unresolved_on_stubborn_quadratic(s2xs3):
    from cdga_config.sullivan import Unresolved

    # scales 1 vs 4: an isomorphism exists (send v to 2v) but finding it
    # needs the quadratic alpha^2 = 4 X; the solver reports the residual
    # honestly instead of guessing
    result = iso_obstruction(_nonlinear_table(s2xs3, 1), _nonlinear_table(s2xs3, 4))
    assert isinstance(result, Unresolved)
    assert result.residual  # the leftover equations are reported


# --- polynomial helper ----------------------------------------------------------


def test_poly_arithmetic():
    x, y = Poly.variable(0), Poly.variable(1)
    p = (x + Poly.const(2)) * y
    assert p.terms == {(0, 1): F(1), (1,): F(2)}
    assert p.substitute({0: F(3)}).terms == {(1,): F(5)}
    assert p.affine() is None
    assert (p.substitute({1: F(1)})).affine() == (F(2), {0: F(1)})
    assert not (p - p)
