from fractions import Fraction as F

import pytest

from cdga_config.algebra import DGAlgebra, GradedBasis, cohomology
from cdga_config.errors import StructureError
from cdga_config.poincare import diagonal_class
from cdga_config.quotients import Subcomplex, homogeneous_parts, ideal_span, quotient_dga


def two_stage_algebra():
    """Unit, a, b with d(a) = b: the smallest non-formal complex."""
    basis = GradedBasis(["1", "a", "b"], [0, 3, 4])
    return DGAlgebra(basis, 0, [(0, i, i, 1) for i in range(3)],
                     diff=[(1, 2, 1)], name="two-stage")


def test_homogeneous_parts(s2xs3):
    alg = s2xs3.algebra
    elem = alg.element_from_label("x") + alg.element_from_label("y").scale(2)
    parts = homogeneous_parts(elem)
    assert [p.degree() for p in parts] == [2, 3]
    assert parts[0] == alg.element_from_label("x")


def test_subcomplex_rejects_non_closed_span():
    alg = two_stage_algebra()
    with pytest.raises(StructureError):
        Subcomplex(alg, [alg.element_from_label("a")])


def test_subcomplex_acyclic_two_stage():
    alg = two_stage_algebra()
    sub = Subcomplex(alg, [alg.element_from_label("a"), alg.element_from_label("b")])
    assert sub.dims() == {3: 1, 4: 1}
    assert sub.is_acyclic()
    assert sub.contains(alg.element_from_label("b").scale(F(7, 2)))
    assert not sub.contains(alg.one())


def test_subcomplex_reduce_is_canonical(s2xs3):
    square = s2xs3.square
    diag = diagonal_class(s2xs3).element
    sub = Subcomplex(square, ideal_span(square, [diag]))
    reduced = sub.reduce(diag)
    assert reduced.is_zero()
    survivor = square.from_label_coeffs({"x⊗y": F(1)})
    again = sub.reduce(sub.reduce(survivor))
    assert again == sub.reduce(survivor)


def test_quotient_rejects_non_ideal(s2):
    square = s2.square
    x_one = square.from_label_coeffs({"x⊗1": F(1)})
    # the line through x(x)1 is d-closed (d = 0) but not an ideal
    with pytest.raises(StructureError):
        quotient_dga(square, [x_one])


def test_quotient_rejects_unit_in_subspace(s2):
    alg = s2.algebra
    with pytest.raises(StructureError):
        quotient_dga(alg, ideal_span(alg, [alg.one()]))


def test_quotient_projection_section_identities(s2xs3):
    from cdga_config.twisted import quotient_by_diagonal

    q = quotient_by_diagonal(s2xs3)
    for i in range(q.algebra.dim()):
        e = q.algebra.basis_element(i)
        assert q.project(q.lift(e)) == e
    # projection kills exactly the ideal
    diag = diagonal_class(s2xs3).element
    assert q.project(q.ambient.multiply(
        q.ambient.basis_element(3), diag)).is_zero()


def test_quotient_product_well_defined(s2xs3):
    # the induced product is independent of the chosen lift: shift a
    # degree-5 representative by the diagonal class and compare products
    from cdga_config.twisted import quotient_by_diagonal

    q = quotient_by_diagonal(s2xs3)
    diag = diagonal_class(s2xs3).element
    amb = q.ambient
    idx5 = [i for i, g in enumerate(q.kept) if amb.basis.degrees[g] == 5]
    assert idx5
    a = q.algebra.basis_element(idx5[0])
    lift_a = q.lift(a)
    shifted = lift_a + diag
    assert q.project(shifted) == a  # same class, different representative
    for j in range(q.algebra.dim()):
        other = q.lift(q.algebra.basis_element(j))
        direct = q.algebra.multiply(a, q.algebra.basis_element(j))
        assert q.project(amb.multiply(lift_a, other)) == direct
        assert q.project(amb.multiply(shifted, other)) == direct
