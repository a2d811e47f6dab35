"""Poincare duality structure: orientation, dual basis, diagonal class and
the shriek map into the tensor square.

The diagonal class is

    diag = sum_i (-1)^|a_i|  a_i (x) a_i*

for any homogeneous basis {a_i} with dual basis {a_i*} characterised by
eps(a_i . a_j*) = delta_ij. The shriek map sends s^-n a to diag . (1 (x) a)
and is a module map over the tensor square; its matrix is derived from the
suspension sign rules, never written down by hand.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Optional

from .algebra import DGAlgebra, Element
from .dgmodule import DGModule, ModuleMap, module_via_algebra_map, suspend
from .errors import PDFailure, StructureError
from .linalg import ONE, ZERO, SparseMatrix, invert
from .products import TensorAlgebra, tensor


class PDAlgebra:
    """A verified Poincare duality CDGA with cached dual-basis data.

    Built through `check_pd`; carries the formal dimension n, the
    orientation functional on degree n, the normalized top class omega with
    eps(omega) = 1, and the dual basis solved per complementary-degree
    block as one exact linear system.
    """

    def __init__(self, algebra: DGAlgebra, n: int, epsilon: dict[int, Fraction]):
        self.algebra = algebra
        self.n = n
        self.epsilon = {i: Fraction(c) for i, c in epsilon.items() if c}

    def epsilon_value(self, x: Element) -> Fraction:
        """Apply the orientation functional to the degree-n part of x."""
        total = ZERO
        for i, c in x.coeffs.items():
            v = self.epsilon.get(i)
            if v:
                total += c * v
        return total

    def pairing(self, x: Element, y: Element) -> Fraction:
        return self.epsilon_value(self.algebra.multiply(x, y))

    @cached_property
    def omega(self) -> Element:
        """Generator of the top degree rescaled so eps(omega) = 1; the
        earliest basis element with nonzero eps breaks ties."""
        for i in self.algebra.basis.degree_indices(self.n):
            v = self.epsilon.get(i)
            if v:
                return Element(self.algebra, {i: ONE / v})
        raise PDFailure("NoOrientationClass")

    @cached_property
    def dual_basis(self) -> tuple[Element, ...]:
        """a_i* per basis element, with eps(a_i . a_j*) = delta_ij."""
        alg = self.algebra
        duals: list[Optional[Element]] = [None] * alg.dim()
        for k in alg.basis.degrees_present():
            rows_idx = alg.basis.degree_indices(k)
            cols_idx = alg.basis.degree_indices(self.n - k)
            pairing = SparseMatrix(
                len(rows_idx),
                len(cols_idx),
                {
                    (r, c): v
                    for r, i in enumerate(rows_idx)
                    for c, j in enumerate(cols_idx)
                    if (v := self.pairing(alg.basis_element(i), alg.basis_element(j)))
                },
            )
            inverse = invert(pairing)
            if inverse is None:
                raise PDFailure("DegenerateAt", k)
            for r, i in enumerate(rows_idx):
                duals[i] = Element(
                    alg, {j: inverse.entry(c, r) for c, j in enumerate(cols_idx)}
                )
        return tuple(duals)  # type: ignore[arg-type]

    @cached_property
    def square(self) -> TensorAlgebra:
        """The tensor square A (x) A, cached so diagonal data share a parent."""
        return tensor(self.algebra, self.algebra, name=f"{self.algebra.name or 'A'}²")

    def __repr__(self) -> str:
        return f"PDAlgebra({self.algebra.name or '?'}, n={self.n})"


def check_pd(
    algebra: DGAlgebra, n: int, epsilon: Mapping[int, Fraction] | Mapping[str, Fraction]
) -> PDAlgebra:
    """Verify the Poincare duality axioms and return the verified structure.

    Checks eps(d A^(n-1)) = 0, then non-degeneracy of the multiplication
    pairing in every complementary pair of degrees: the pairing matrix must
    be square and invertible. Raises PDFailure with a witness otherwise.
    """
    eps: dict[int, Fraction] = {}
    for key, value in epsilon.items():
        idx = algebra.basis.index(key) if isinstance(key, str) else key
        if algebra.basis.degrees[idx] != n:
            raise StructureError("orientation functional supported outside degree n")
        value = Fraction(value)
        if value:
            eps[idx] = value
    pd = PDAlgebra(algebra, n, eps)
    if not eps:
        raise PDFailure("NoOrientationClass")

    for i in algebra.basis.degree_indices(n - 1):
        image = algebra.d(algebra.basis_element(i))
        value = pd.epsilon_value(image)
        if value:
            raise PDFailure(
                "OrientationNotClosed",
                n - 1,
                f"eps(d {algebra.basis.labels[i]}) = {value}",
            )

    max_deg = algebra.basis.max_degree() if algebra.dim() else 0
    if max_deg > n:
        raise PDFailure("DegenerateAt", max_deg, "basis above the formal dimension")
    # scan the degrees that carry elements: a dimension mismatch is reported
    # at the degree whose elements pair with nothing
    for k in algebra.basis.degrees_present():
        rows_idx = algebra.basis.degree_indices(k)
        cols_idx = algebra.basis.degree_indices(n - k)
        if len(rows_idx) != len(cols_idx):
            raise PDFailure(
                "DegenerateAt", k,
                f"dim A^{k} = {len(rows_idx)} but dim A^{n - k} = {len(cols_idx)}",
            )
        matrix = SparseMatrix(
            len(rows_idx),
            len(cols_idx),
            {
                (r, c): v
                for r, i in enumerate(rows_idx)
                for c, j in enumerate(cols_idx)
                if (v := pd.pairing(algebra.basis_element(i), algebra.basis_element(j)))
            },
        )
        if invert(matrix) is None:
            from .linalg import kernel_basis

            null = kernel_basis(matrix.transpose())
            witness = None
            if null:
                witness = str(
                    Element(algebra, {i: c for i, c in zip(rows_idx, null[0]) if c})
                )
            raise PDFailure("DegenerateAt", k, witness)

    pd.omega  # force normalization now; raises if the top class is missing
    return pd


def dual_basis(pd: PDAlgebra) -> tuple[Element, ...]:
    return pd.dual_basis


@dataclass(frozen=True)
class DiagonalClass:
    """The diagonal class as an element of the tensor square."""

    element: Element

    def __str__(self) -> str:
        return str(self.element)


def diagonal_class(pd: PDAlgebra) -> DiagonalClass:
    """diag = sum_i (-1)^|a_i| a_i (x) a_i* in (A (x) A)^n."""
    square = pd.square
    degs = pd.algebra.basis.degrees
    coeffs: dict[int, Fraction] = {}
    for i in range(pd.algebra.dim()):
        sign = (-1) ** degs[i]
        for j, c in pd.dual_basis[i].coeffs.items():
            t = square.pair_index(i, j)
            acc = coeffs.get(t, ZERO) + sign * c
            if acc:
                coeffs[t] = acc
            else:
                del coeffs[t]
    return DiagonalClass(Element(square, coeffs))


def algebra_as_square_module(pd: PDAlgebra) -> DGModule:
    """A as a module over A (x) A through the multiplication map."""
    square = pd.square

    def image(t: int) -> Element:
        i, j = square.factors_of(t)
        return pd.algebra.multiply(
            pd.algebra.basis_element(i), pd.algebra.basis_element(j)
        )

    return module_via_algebra_map(square, pd.algebra, image, name=f"{pd.algebra.name or 'A'} as module")


def desuspended_module(pd: PDAlgebra) -> DGModule:
    """s^-n A with the action and differential given by the sign rules."""
    return suspend(algebra_as_square_module(pd), -pd.n,
                   label=lambda l: f"s^-{pd.n}({l})")


def shriek_map(pd: PDAlgebra, *, verify: bool = True) -> ModuleMap:
    """The module map s^-n A -> A (x) A, s^-n a -> diag . (1 (x) a).

    Verification (cochain + action-compatible on all pairs) is part of the
    construction; a failure indicates a sign-convention bug upstream.
    """
    from .dgmodule import ring_as_module
    from .errors import ModuleMapViolation, NotAModuleMap

    square = pd.square
    source = desuspended_module(pd)
    target = ring_as_module(square)
    diag = diagonal_class(pd).element
    one = pd.algebra.one()
    images = []
    for a_idx in range(pd.algebra.dim()):
        right = square.tensor_elements(one, pd.algebra.basis_element(a_idx))
        images.append(Element(target, square.multiply(diag, right).coeffs))
    try:
        return ModuleMap(source, target, images, verify=verify)
    except NotAModuleMap as exc:
        raise ModuleMapViolation(str(exc)) from exc
