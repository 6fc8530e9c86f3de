"""Seeded randomized property checks shared by the unit and acceptance suites."""

from __future__ import annotations

import random
from fractions import Fraction

from dlcusp.chartable import CharacterData
from dlcusp.classfun import ClassFunction, dual, induce, induced_pairing, inner_product
from dlcusp.cyclotomic import CycNumber, root_of_unity
from dlcusp.group import GroupElement


def random_cyc(rng: random.Random, order: int, max_terms: int = 4) -> CycNumber:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        e = rng.randrange(order)
        terms[e] = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
    return CycNumber(order, terms)


def check_ring_axioms(seed: int = 20240611, orders=(12, 24, 168, 840), rounds: int = 12) -> int:
    """Associativity, commutativity, distributivity on random sparse values."""
    rng = random.Random(seed)
    checked = 0
    for order in orders:
        for _ in range(rounds):
            x, y, z = (random_cyc(rng, order) for _ in range(3))
            assert (x + y) + z == x + (y + z)
            assert (x * y) * z == x * (y * z)
            assert x + y == y + x
            assert x * y == y * x
            assert x * (y + z) == x * y + x * z
            assert x - x == 0
            checked += 1
    return checked


def check_canonical_uniqueness(seed: int = 97, orders=(24, 168), rounds: int = 40) -> int:
    """Equal values built along different routes get identical representations."""
    rng = random.Random(seed)
    checked = 0
    for order in orders:
        zero_sum = sum((root_of_unity(3, j) for j in range(3)), start=root_of_unity(1, 0) - 1)
        assert zero_sum.is_zero()
        for _ in range(rounds):
            x = random_cyc(rng, order)
            z = random_cyc(rng, order * 2)  # forces lifting through a larger field
            y = (x + z) - z
            assert y == x and y.order == x.order and y.terms == x.terms
            d = (y - x) + zero_sum.scale(rng.randint(1, 5))
            assert d.is_zero() and d.order == 1 and not d.terms
            checked += 1
    return checked


def check_conjugation_invariance(data: CharacterData, seed: int = 7, conjugators_per_class: int = 100) -> int:
    """class_of is constant along random conjugations of every representative."""
    rng = random.Random(seed)
    table = data.table
    p = table.p
    checked = 0
    for idx, rec in enumerate(table.classes):
        for _ in range(conjugators_per_class):
            h = _random_element(rng, p)
            assert table.class_of(rec.rep.conjugate_by(h)) == idx
            checked += 1
    return checked


def _random_element(rng: random.Random, p: int) -> GroupElement:
    while True:
        a, b, c = rng.randrange(p), rng.randrange(p), rng.randrange(p)
        if a:
            d = (1 + b * c) * pow(a, -1, p) % p
            return GroupElement(p, a, b, c, d)
        if b:  # a = 0 forces c = -1/b, d free
            c = -pow(b, -1, p) % p
            return GroupElement(p, 0, b, c, rng.randrange(p))


def check_frobenius_reciprocity(data: CharacterData) -> int:
    """<Ind_H 1, chi>_G == <1, Res_H chi>_H for all seven subgroups, all chi."""
    from dlcusp.group import build_subgroup

    table = data.table
    checked = 0
    for name in ("Z", "Gx_tilde", "Gy_tilde", "Gz_tilde", "Borel", "Ts", "Ta"):
        sub = build_subgroup(table, name)
        ind = induce(table, sub, [1] * sub.order)
        ones = [root_of_unity(1, 0)] * sub.order
        for irr in data.irreducibles:
            lhs = inner_product(ind, irr.chi)
            rhs = induced_pairing(sub, ones, irr.chi)
            assert lhs == rhs, (name, irr.label)
            checked += 1
    return checked


def check_dual_equals_conjugate(data: CharacterData) -> int:
    """On genuine characters, duality equals pointwise complex conjugation."""
    checked = 0
    for irr in data.irreducibles:
        assert dual(irr.chi) == ClassFunction(data.table, [v.conj() for v in irr.chi.values])
        checked += 1
    return checked


def check_dual_closure(data: CharacterData) -> int:
    chis = {irr.chi for irr in data.irreducibles}
    for irr in data.irreducibles:
        assert dual(irr.chi) in chis
    return len(chis)
