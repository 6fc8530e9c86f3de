"""Class functions on SL2(F_p) over exact cyclotomics.

The carrier for every character and virtual character in the package: one
CycNumber per conjugacy class, with the Hermitian pairing, pointwise tensor
product, duality, induction from a subgroup through its fusion data, and
restriction.  All operations are pure and exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .cyclotomic import ZERO, CycNumber, coerce, cyc_sum
from .group import ConjugacyTable, SubgroupData


class ClassFunction:
    """A function on the conjugacy classes of one ConjugacyTable."""

    __slots__ = ("table", "values")

    def __init__(self, table: ConjugacyTable, values: Sequence[CycNumber | int | Fraction]):
        if len(values) != len(table):
            raise ValueError("value count must equal the class count")
        coerced = [coerce(v) for v in values]
        if NotImplemented in coerced:
            raise TypeError("values must be CycNumber, int, or Fraction")
        self.table = table
        self.values = tuple(coerced)

    def _check(self, other: "ClassFunction"):
        if self.table is not other.table and self.table.p != other.table.p:
            raise ValueError("class functions live on different tables")

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        self._check(other)
        return ClassFunction(self.table, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other: "ClassFunction") -> "ClassFunction":
        self._check(other)
        return ClassFunction(self.table, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self) -> "ClassFunction":
        return ClassFunction(self.table, [-a for a in self.values])

    def scale(self, r: Fraction | int) -> "ClassFunction":
        return ClassFunction(self.table, [a.scale(r) for a in self.values])

    def __eq__(self, other) -> bool:
        return isinstance(other, ClassFunction) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    @property
    def degree(self) -> CycNumber:
        return self.values[self.table.identity_index()]

    def __repr__(self):
        return f"ClassFunction(p={self.table.p}, deg={self.degree.to_text()})"


def trivial_character(table: ConjugacyTable) -> ClassFunction:
    return ClassFunction(table, [1] * len(table))


def tensor(phi: ClassFunction, psi: ClassFunction) -> ClassFunction:
    """Pointwise product (character of the tensor product)."""
    phi._check(psi)
    return ClassFunction(phi.table, [a * b for a, b in zip(phi.values, psi.values)])


def dual(phi: ClassFunction) -> ClassFunction:
    """Value at c becomes the value at the inverse class of c."""
    classes = phi.table.classes
    return ClassFunction(phi.table, [phi.values[r.inverse_class] for r in classes])


def inner_product(phi: ClassFunction, psi: ClassFunction) -> CycNumber:
    """Hermitian pairing (1/|G|) sum |c| phi(c) conj(psi(c))."""
    phi._check(psi)
    total = ZERO
    for rec, a, b in zip(phi.table.classes, phi.values, psi.values):
        if a.is_zero() or b.is_zero():
            continue
        total = total + (a * b.conj()).scale(rec.size)
    return total.scale(Fraction(1, phi.table.group_order))


def induce(table: ConjugacyTable, sub: SubgroupData, values: Sequence[CycNumber | int | Fraction]) -> ClassFunction:
    """Induced class function: |C_G(g)|/|H| times the sum over fused elements.

    values are indexed by sub.elements and must be constant on the ambient
    fusion fibers within a subgroup class (automatic for linear characters).
    """
    if len(values) != sub.order:
        raise ValueError("need one value per subgroup element")
    vals = [coerce(v) for v in values]
    buckets: dict[int, list[CycNumber]] = {}
    for cls_idx, v in zip(sub.fusion, vals):
        buckets.setdefault(cls_idx, []).append(v)
    out = []
    for i, rec in enumerate(table.classes):
        hit = buckets.get(i)
        if hit is None:
            out.append(ZERO)
        else:
            out.append(cyc_sum(hit).scale(Fraction(rec.centralizer_order, sub.order)))
    return ClassFunction(table, out)


def restrict(phi: ClassFunction, sub: SubgroupData) -> list[CycNumber]:
    """Values of phi on the subgroup elements, through the fusion map."""
    return [phi.values[i] for i in sub.fusion]


def induced_pairing(sub: SubgroupData, chi_values: Sequence[CycNumber], phi: ClassFunction) -> CycNumber:
    """<chi, Res_H phi>_H, the right side of Frobenius reciprocity."""
    res = restrict(phi, sub)
    total = ZERO
    for a, b in zip(chi_values, res):
        total = total + a * b.conj()
    return total.scale(Fraction(1, sub.order))


def decompose_multiplicities(phi: ClassFunction, irreducibles: Sequence[ClassFunction]) -> list[Fraction]:
    """Multiplicities against a complete orthonormal system; must rebuild phi."""
    mults = []
    for chi in irreducibles:
        m = inner_product(phi, chi).as_rational()
        if m is None:
            raise ValueError("non-rational multiplicity: character table is broken")
        mults.append(m)
    rebuilt = ClassFunction(phi.table, [ZERO] * len(phi.table))
    for m, chi in zip(mults, irreducibles):
        if m:
            rebuilt = rebuilt + chi.scale(m)
    if rebuilt != phi:
        raise ValueError("multiplicities do not rebuild the class function")
    return mults
