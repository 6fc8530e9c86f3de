"""Exact arithmetic in SL2(F_p): elements, conjugacy classes, subgroups, tori.

Class data is built from closed forms (p + 4 classes for p >= 7), never by
orbit enumeration; identification of an arbitrary element is O(1) via trace,
discriminant, and a rank-one residue invariant for the unipotent-type
classes.  Everything is immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .numtheory import is_prime, legendre, smallest_nonsquare, sqrt_mod

SUBGROUP_NAMES = ("Z", "Gx_tilde", "Gy_tilde", "Gz_tilde", "Borel", "Ts", "Ta")


@dataclass(frozen=True)
class GroupElement:
    """A 2x2 matrix over Z/p with determinant 1, entries normalized to [0, p)."""

    p: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        p = self.p
        for name in "abcd":
            v = getattr(self, name)
            if not 0 <= v < p:
                object.__setattr__(self, name, v % p)
        if (self.a * self.d - self.b * self.c) % p != 1:
            raise ValueError(f"determinant is not 1 mod {p}")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if self.p != other.p:
            raise ValueError("modulus mismatch")
        p = self.p
        return GroupElement(
            p,
            (self.a * other.a + self.b * other.c) % p,
            (self.a * other.b + self.b * other.d) % p,
            (self.c * other.a + self.d * other.c) % p,
            (self.c * other.b + self.d * other.d) % p,
        )

    def inverse(self) -> "GroupElement":
        return GroupElement(self.p, self.d, -self.b, -self.c, self.a)

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.p, -self.a, -self.b, -self.c, -self.d)

    def __pow__(self, k: int) -> "GroupElement":
        if k < 0:
            return self.inverse() ** (-k)
        acc, base = identity(self.p), self
        while k:
            if k & 1:
                acc = acc * base
            base, k = base * base, k >> 1
        return acc

    @property
    def trace(self) -> int:
        return (self.a + self.d) % self.p

    def conjugate_by(self, h: "GroupElement") -> "GroupElement":
        return h * self * h.inverse()

    def order(self) -> int:
        n, x = 1, self
        e = identity(self.p)
        while x != e:
            x = x * self
            n += 1
        return n

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


def identity(p: int) -> GroupElement:
    return GroupElement(p, 1, 0, 0, 1)


@dataclass(frozen=True)
class ClassRecord:
    """One conjugacy class: representative, size, centralizer, invariants."""

    rep: GroupElement
    size: int
    centralizer_order: int
    trace: int
    kind: str  # central | unipotent | split_semisimple | nonsplit_semisimple
    inverse_class: int
    key: tuple


class ConjugacyTable:
    """The p + 4 conjugacy classes of SL2(F_p), with O(1) identification."""

    def __init__(self, p: int):
        if not is_prime(p) or p < 7:
            raise ValueError("p must be a prime >= 7")
        self.p = p
        self.group_order = p * (p * p - 1)
        self.epsilon = smallest_nonsquare(p)
        self.classes: tuple[ClassRecord, ...] = tuple(self._build())
        self._index = {(r.kind, r.key): i for i, r in enumerate(self.classes)}
        assert len(self.classes) == p + 4
        assert sum(r.size for r in self.classes) == self.group_order
        for r in self.classes:
            assert r.size * r.centralizer_order == self.group_order

    def _build(self):
        p, eps = self.p, self.epsilon
        order = self.group_order
        half = (p * p - 1) // 2
        records = []

        def central(sign):
            g = identity(p) if sign == 1 else -identity(p)
            return ClassRecord(g, 1, order, g.trace, "central", len(records), (sign,))

        records.append(central(1))
        records.append(central(-1))
        # unipotent-type classes z*u_c, u_c = [[1, c], [0, 1]], c in {1, eps}
        for sign in (1, -1):
            for c in (1, eps):
                u = GroupElement(p, 1, c, 0, 1)
                g = u if sign == 1 else -u
                records.append(ClassRecord(g, half, 2 * p, g.trace, "unipotent", -1, (sign, legendre(c, p))))
        # split semisimple d(a), keyed by min(a, a^-1)
        seen = set()
        for a in range(2, p - 1):
            k = min(a, pow(a, -1, p))
            if k in seen:
                continue
            seen.add(k)
            g = GroupElement(p, k, 0, 0, pow(k, -1, p))
            records.append(ClassRecord(g, p * (p + 1), p - 1, g.trace, "split_semisimple", -1, (k,)))
        # nonsplit semisimple, keyed by trace t with t^2 - 4 a nonsquare
        inv2 = pow(2, -1, p)
        for t in range(p):
            if legendre(t * t - 4, p) != -1:
                continue
            a = t * inv2 % p
            b = sqrt_mod((a * a - 1) * pow(eps, -1, p) % p, p)
            assert b is not None
            g = GroupElement(p, a, b * eps, b, a)
            assert g.trace == t
            records.append(ClassRecord(g, p * (p - 1), p + 1, t, "nonsplit_semisimple", -1, (t,)))

        # link inverse classes; g^-1 has the same trace, so only the
        # unipotent-type classes can move (u_c^-1 ~ u_(-c))
        index = {(r.kind, r.key): i for i, r in enumerate(records)}
        sign_flip = legendre(-1, p)
        linked = []
        for i, r in enumerate(records):
            if r.kind == "unipotent":
                sign, res = r.key
                j = index[("unipotent", (sign, res * sign_flip))]
            else:
                j = i
            linked.append(ClassRecord(r.rep, r.size, r.centralizer_order, r.trace, r.kind, j, r.key))
        return linked

    def __len__(self) -> int:
        return len(self.classes)

    def identity_index(self) -> int:
        return 0

    def class_of(self, g: GroupElement) -> int:
        """Index of the class containing g (conjugation-invariant)."""
        p = self.p
        if g.p != p:
            raise ValueError("modulus mismatch")
        if g.b == 0 and g.c == 0 and g.a == g.d:
            return self._index[("central", (1 if g.a == 1 else -1,))]
        t = g.trace
        if t == 2:
            return self._index[("unipotent", (1, _unipotent_residue(g)))]
        if t == p - 2:
            return self._index[("unipotent", (-1, _unipotent_residue(-g)))]
        disc = (t * t - 4) % p
        if legendre(disc, p) == 1:
            r = sqrt_mod(disc, p)
            a = (t + r) * pow(2, -1, p) % p
            return self._index[("split_semisimple", (min(a, pow(a, -1, p)),))]
        return self._index[("nonsplit_semisimple", (t,))]


def _unipotent_residue(g: GroupElement) -> int:
    """Residue invariant separating the two classes with trace 2, g != I.

    N = g - I has rank one; for any v with Nv != 0 the Legendre symbol of
    det([Nv | v]) does not depend on v and is constant on the class
    (conjugating by h multiplies the determinant by det h = 1).  It is +1 on
    the class of [[1,1],[0,1]].
    """
    p = g.p
    n00, n01, n10, n11 = (g.a - 1) % p, g.b, g.c, (g.d - 1) % p
    if n00 or n10:
        nv, v = (n00, n10), (1, 0)
    else:
        nv, v = (n01, n11), (0, 1)
    det = (nv[0] * v[1] - nv[1] * v[0]) % p
    return legendre(det, p)


def build_conjugacy_table(p: int) -> ConjugacyTable:
    return ConjugacyTable(p)


@dataclass(frozen=True)
class SubgroupData:
    """A distinguished subgroup with its fusion into the ambient classes."""

    name: str
    p: int
    elements: tuple[GroupElement, ...]
    order: int
    fusion: tuple[int, ...]  # element position -> ambient class index


def _closure(gens: list[GroupElement]) -> list[GroupElement]:
    p = gens[0].p
    seen = {identity(p)}
    frontier = [identity(p)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen, key=GroupElement.entries)


def build_subgroup(table: ConjugacyTable, name: str) -> SubgroupData:
    """One of the seven distinguished subgroups, elements sorted and fused."""
    p = table.p
    if name == "Z":
        elements = [identity(p), -identity(p)]
        expected = 2
    elif name == "Gx_tilde":
        elements = _closure([GroupElement(p, 0, 1, -1, 0)])
        expected = 4
    elif name == "Gy_tilde":
        elements = _closure([GroupElement(p, 0, 1, -1, -1), -identity(p)])
        expected = 6
    elif name == "Gz_tilde":
        elements = _closure([GroupElement(p, 1, 1, 0, 1), -identity(p)])
        expected = 2 * p
    elif name == "Borel":
        elements = [
            GroupElement(p, a, b, 0, pow(a, -1, p))
            for a in range(1, p)
            for b in range(p)
        ]
        elements.sort(key=GroupElement.entries)
        expected = p * (p - 1)
    elif name in ("Ts", "Ta"):
        return _torus_subgroup(table, name)
    else:
        raise ValueError(f"unknown subgroup {name!r}")
    assert len(elements) == expected
    fusion = tuple(table.class_of(g) for g in elements)
    return SubgroupData(name, p, tuple(elements), expected, fusion)


def _torus_subgroup(table: ConjugacyTable, name: str) -> SubgroupData:
    torus = build_torus(table, "split" if name == "Ts" else "nonsplit")
    fusion = tuple(table.class_of(g) for g in torus.elements)
    return SubgroupData(name, table.p, torus.elements, torus.order, fusion)


@dataclass(frozen=True)
class TorusData:
    """A maximal torus of SL2(F_p): cyclic, with fixed generator and dlogs."""

    torus_type: str  # split | nonsplit
    p: int
    elements: tuple[GroupElement, ...]
    order: int
    generator: GroupElement
    dlog: dict  # GroupElement -> exponent of the generator
    epsilon: int | None

    def dlog_of(self, g: GroupElement) -> int:
        return self.dlog[g]


def build_torus(table: ConjugacyTable, torus_type: str) -> TorusData:
    p = table.p
    if torus_type == "split":
        elements = [GroupElement(p, a, 0, 0, pow(a, -1, p)) for a in range(1, p)]
        order, eps = p - 1, None
    elif torus_type == "nonsplit":
        eps = table.epsilon
        elements = [
            GroupElement(p, a, b * eps, b, a)
            for a in range(p)
            for b in range(p)
            if (a * a - eps * b * b) % p == 1
        ]
        order = p + 1
    else:
        raise ValueError(f"unknown torus type {torus_type!r}")
    assert len(elements) == order
    elements.sort(key=GroupElement.entries)
    generator = min((g for g in elements if g.order() == order), key=GroupElement.entries)
    dlog, x = {}, identity(p)
    for k in range(order):
        dlog[x] = k
        x = x * generator
    assert len(dlog) == order
    return TorusData(torus_type, p, tuple(elements), order, generator, dlog, eps)


def conjugate_into_torus(sub: SubgroupData, torus: TorusData) -> GroupElement | None:
    """h with h sub h^-1 inside the torus, or None when no embedding exists.

    Only the two cyclic subgroups with semisimple generators are eligible; a
    cyclic group embeds in a cyclic group iff its order divides, and the
    witness is assembled from companion-form base changes plus a centralizer
    correction that lands the determinant on 1.
    """
    if sub.name not in ("Gx_tilde", "Gy_tilde"):
        raise ValueError("only Gx_tilde / Gy_tilde placement is supported")
    m = sub.order
    if torus.order % m != 0:
        return None
    p = sub.p
    g = min((x for x in sub.elements if x.order() == m), key=GroupElement.entries)
    step = torus.order // m
    for j in range(1, m):
        if gcd(j, m) != 1:
            continue
        u = torus.generator ** (step * j)
        if u.trace != g.trace:
            continue
        h = _conjugator(g, u)
        if h is not None:
            for x in sub.elements:
                assert x.conjugate_by(h) in torus.dlog
            return h
    return None


def _cyclic_vector(g: GroupElement) -> tuple[int, int]:
    p = g.p
    for v in ((1, 0), (0, 1), (1, 1)):
        w = ((g.a * v[0] + g.b * v[1]) % p, (g.c * v[0] + g.d * v[1]) % p)
        if (v[0] * w[1] - v[1] * w[0]) % p != 0:
            return v
    raise AssertionError("element is scalar, no cyclic vector")


def _conjugator(g: GroupElement, u: GroupElement) -> GroupElement | None:
    """Solve h g h^-1 = u with det h = 1 for regular semisimple g, u of equal trace."""
    p = g.p
    v = _cyclic_vector(g)
    w = _cyclic_vector(u)
    gv = ((g.a * v[0] + g.b * v[1]) % p, (g.c * v[0] + g.d * v[1]) % p)
    uw = ((u.a * w[0] + u.b * w[1]) % p, (u.c * w[0] + u.d * w[1]) % p)
    pm = (v[0], gv[0], v[1], gv[1])  # columns [v | gv]
    qm = (w[0], uw[0], w[1], uw[1])
    det_p = (pm[0] * pm[3] - pm[1] * pm[2]) % p
    inv_det = pow(det_p, -1, p)
    # h0 = Q P^-1 conjugates g to u, determinant arbitrary
    pinv = (pm[3] * inv_det % p, -pm[1] * inv_det % p, -pm[2] * inv_det % p, pm[0] * inv_det % p)
    h0 = (
        (qm[0] * pinv[0] + qm[1] * pinv[2]) % p,
        (qm[0] * pinv[1] + qm[1] * pinv[3]) % p,
        (qm[2] * pinv[0] + qm[3] * pinv[2]) % p,
        (qm[2] * pinv[1] + qm[3] * pinv[3]) % p,
    )
    d0 = (h0[0] * h0[3] - h0[1] * h0[2]) % p
    # correct by x + y*g inside the centralizer of g:
    # det(xI + yg) = x^2 + tr(g) xy + y^2 must equal d0^-1
    target = pow(d0, -1, p)
    t = g.trace
    for x in range(p):
        for y in range(p):
            if (x * x + t * x * y + y * y) % p == target:
                ca = (x + y * g.a) % p
                cb = y * g.b % p
                cc = y * g.c % p
                cd = (x + y * g.d) % p
                h = GroupElement(
                    p,
                    h0[0] * ca + h0[1] * cc,
                    h0[0] * cb + h0[1] * cd,
                    h0[2] * ca + h0[3] * cc,
                    h0[2] * cb + h0[3] * cd,
                )
                assert g.conjugate_by(h) == u
                return h
    return None
